"""Recompute analysis invariants against a written output tree.

Verification reloads each viable unit's table, reruns the decomposition,
and checks the identities the analysis is supposed to satisfy: total
inertia times n equals the chi-square statistic, coordinates are centered
by column mass, full-dimensional coordinate distances reproduce chi-square
profile distances, and the CSV files round-trip the computed numbers.  It
also re-hashes every file recorded in the manifest.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ca import ca_decompose, chi_square_stat, profile_distance_matrix
from .csvio import read_embedding_csv, read_table_csv
from .errors import DataError, NumericError
from .lexicon import Topic
from .pipeline import MANIFEST_NAME, _sha256

logger = logging.getLogger(__name__)

INERTIA_RTOL = 1e-10
CENTERING_TOL = 1e-10
DISTANCE_TOL = 1e-9
ROUNDTRIP_TOL = 1e-12


@dataclass
class CheckResult:
    unit: str
    check: str
    ok: bool
    detail: str


@dataclass
class VerifyReport:
    checks: list[CheckResult]
    skipped: dict[str, str]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def verify_tree(out_dir: str | Path) -> VerifyReport:
    """Verify the output tree under *out_dir* against its manifest."""
    out = Path(out_dir)
    manifest_path = out / MANIFEST_NAME
    if not manifest_path.is_file():
        raise DataError(f"no {MANIFEST_NAME} under {out}; nothing to verify")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DataError(f"unreadable manifest {manifest_path}: {exc}") from exc

    checks: list[CheckResult] = []
    skipped: dict[str, str] = {}

    for rel, recorded in sorted(manifest.get("files", {}).items()):
        path = out / rel
        if not path.is_file():
            checks.append(CheckResult("tree", "hash", False, f"{rel}: file missing"))
            continue
        actual = _sha256(path)
        checks.append(CheckResult(
            "tree", "hash", actual == recorded,
            f"{rel}: {'match' if actual == recorded else f'{actual} != {recorded}'}",
        ))

    topic_by_value = {t.value: t for t in Topic}
    for key, entry in sorted(manifest.get("units", {}).items()):
        if entry.get("status") != "ok":
            skipped[key] = entry.get("reason", "degenerate")
            continue
        topic_value, _, year_s = key.partition("/")
        topic = topic_by_value.get(topic_value)
        if topic is None or not year_s.isdigit():
            checks.append(CheckResult(key, "unit", False, "unrecognized unit key"))
            continue
        year = int(year_s)
        unit_dir = out / topic_value / year_s
        try:
            with open(unit_dir / "table.csv", encoding="utf-8", newline="") as fh:
                table = read_table_csv(fh, topic, year)
            with open(unit_dir / "embedding.csv", encoding="utf-8", newline="") as fh, \
                 open(unit_dir / "scree.csv", encoding="utf-8", newline="") as sfh:
                emb_csv, _ = read_embedding_csv(fh, topic, year, sfh)
        except (OSError, DataError) as exc:
            checks.append(CheckResult(key, "load", False, str(exc)))
            continue

        try:
            dec = ca_decompose(table)
        except NumericError as exc:
            checks.append(CheckResult(key, "decompose", False, str(exc)))
            continue

        chi = chi_square_stat(table)
        resid = abs(dec.total_inertia * dec.n - chi)
        bound = INERTIA_RTOL * max(1.0, chi)
        checks.append(CheckResult(
            key, "inertia_identity", resid <= bound,
            f"|inertia*n - chi2| = {resid:.3e} (bound {bound:.3e})",
        ))

        centering = float(np.abs(dec.col_masses @ dec.col_coords).max())
        checks.append(CheckResult(
            key, "centering", centering <= CENTERING_TOL,
            f"max |c.G| = {centering:.3e} (bound {CENTERING_TOL:.1e})",
        ))

        ref = profile_distance_matrix(table)
        g = dec.col_coords
        diff = g[:, None, :] - g[None, :, :]
        got = np.sqrt((diff * diff).sum(axis=2))
        dist_resid = float(np.abs(got - ref).max())
        checks.append(CheckResult(
            key, "distance_preservation", dist_resid <= DISTANCE_TOL,
            f"max |d_coord - d_profile| = {dist_resid:.3e} (bound {DISTANCE_TOL:.1e})",
        ))

        if tuple(emb_csv.outlet_points) != table.outlets:
            checks.append(CheckResult(
                key, "embedding_roundtrip", False, "outlet order differs from table",
            ))
        else:
            stored = emb_csv.points()
            recomputed = dec.col_coords[:, :2]
            emb_resid = float(np.abs(stored - recomputed).max())
            checks.append(CheckResult(
                key, "embedding_roundtrip", emb_resid <= ROUNDTRIP_TOL,
                f"max |csv - recomputed| = {emb_resid:.3e} (bound {ROUNDTRIP_TOL:.1e})",
            ))

        stored_s = np.array(emb_csv.singular_values)
        recomputed_s = dec.svd.s
        if stored_s.shape != recomputed_s.shape:
            checks.append(CheckResult(
                key, "scree_roundtrip", False,
                f"{stored_s.size} singular values stored, {recomputed_s.size} recomputed",
            ))
        else:
            s_resid = float(np.abs(stored_s - recomputed_s).max()) if stored_s.size else 0.0
            checks.append(CheckResult(
                key, "scree_roundtrip", s_resid <= ROUNDTRIP_TOL,
                f"max |csv - recomputed| = {s_resid:.3e} (bound {ROUNDTRIP_TOL:.1e})",
            ))

    report = VerifyReport(checks, skipped)
    n_fail = len(report.failures())
    logger.info(
        "verify: %d check(s), %d failed, %d unit(s) skipped",
        len(checks), n_fail, len(skipped),
    )
    return report
