"""Correspondence analysis of contingency tables.

The table is scaled to a correspondence matrix, centered against the
independence model, standardized by row and column masses, and factorized
with a singular value decomposition.  Outlet (column) principal coordinates
then live in a Euclidean space whose distances reproduce the chi-square
distances between column profiles; the first two dimensions are the
embedding used downstream.

The SVD is a one-sided Jacobi iteration.  It is slower than LAPACK but
self-contained, deterministic across platforms, and accurate to the last
few bits even for nearly rank-deficient inputs, which is what the
verification gates here care about.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .contingency import MIN_COLS, MIN_ROWS, ContingencyTable
from .errors import DegenerateUnitError, NumericError
from .lexicon import Topic

logger = logging.getLogger(__name__)

DEFAULT_MAX_SWEEPS = 100
# A column pair is already orthogonal when |<wp, wq>| <= PAIR_TOL * |wp| * |wq|.
PAIR_TOL = 1e-12
# Singular values at or below ZERO_RTOL * largest are treated as exact zeros.
ZERO_RTOL = 1e-12
# A total inertia at or below this is rounding residue of a table whose column
# profiles are all equal; no share of it is ever reported.
NEGLIGIBLE_INERTIA = 1e-12


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Thin singular value decomposition ``a = u @ diag(s) @ v.T``.

    ``u`` is (m, p), ``s`` is (p,) non-negative and non-increasing, ``v`` is
    (k, p) with p = min(m, k); both factors have orthonormal columns.  Signs
    are canonical: in each column of ``v`` the entry of largest magnitude is
    non-negative (ties resolved to the lowest index), which makes the
    factorization deterministic.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def svd(
    a: np.ndarray,
    *,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    pair_tol: float = PAIR_TOL,
) -> SvdResult:
    """Compute the thin SVD of a real matrix by one-sided Jacobi rotations.

    Columns of a working copy are rotated pairwise in cyclic sweeps until
    every pair is orthogonal relative to *pair_tol*; column norms are then
    the singular values and the accumulated rotations give the right
    singular vectors.  Left vectors for singular values indistinguishable
    from zero are completed from canonical basis vectors by Gram-Schmidt,
    lowest index first, so the result is fully deterministic.

    Raises NumericError for non-finite input or if the iteration does not
    converge within *max_sweeps* sweeps.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"need a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")
    m, k = a.shape
    if m >= k:
        u, s, v = _svd_tall(a, max_sweeps, pair_tol)
    else:
        v, s, u = _svd_tall(a.T, max_sweeps, pair_tol)
    _canonicalize_signs(u, v)
    return SvdResult(u, s, v)


def _svd_tall(a: np.ndarray, max_sweeps: int, pair_tol: float):
    """One-sided Jacobi on an m >= k matrix; returns (u, s, v) pre-sign-fix."""
    m, k = a.shape
    w = a.copy()
    v = np.eye(k)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                alpha = float(w[:, p] @ w[:, p])
                beta = float(w[:, q] @ w[:, q])
                gamma = float(w[:, p] @ w[:, q])
                denom = math.sqrt(alpha * beta)
                if denom == 0.0 or abs(gamma) <= pair_tol * denom:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                w[:, [p, q]] = w[:, [p, q]] @ rot
                v[:, [p, q]] = v[:, [p, q]] @ rot
                rotated = True
        if not rotated:
            logger.debug("jacobi converged after %d sweep(s)", sweep)
            break
    else:
        raise NumericError(
            f"jacobi SVD did not converge within {max_sweeps} sweeps "
            f"(shape {m}x{k}, max |col dot| "
            f"{_max_pair_dot(w):.3e})"
        )

    norms = np.linalg.norm(w, axis=0)
    order = np.argsort(-norms, kind="stable")
    s = norms[order]
    w = w[:, order]
    v = v[:, order]

    u = np.zeros((m, k))
    cutoff = ZERO_RTOL * s[0] if s[0] > 0.0 else 0.0
    zero_cols = []
    for i in range(k):
        if s[i] > cutoff:
            u[:, i] = w[:, i] / s[i]
        else:
            s[i] = 0.0
            zero_cols.append(i)
    if zero_cols:
        _complete_basis(u, zero_cols)
    return u, s, v


def _max_pair_dot(w: np.ndarray) -> float:
    g = w.T @ w
    np.fill_diagonal(g, 0.0)
    return float(np.max(np.abs(g))) if g.size else 0.0


def _complete_basis(u: np.ndarray, zero_cols: list[int]) -> None:
    """Fill *zero_cols* of *u* with orthonormal vectors, in place.

    For each hole, canonical basis vectors e1, e2, ... are orthogonalized
    against the filled columns (two Gram-Schmidt passes) and the first one
    with a comfortably large residual is taken; the scan order makes the
    completion deterministic.
    """
    m = u.shape[0]
    filled = [i for i in range(u.shape[1]) if i not in zero_cols]
    for hole in zero_cols:
        best = (0.0, -1, None)
        for j in range(m):
            cand = np.zeros(m)
            cand[j] = 1.0
            for _ in range(2):
                for col in filled:
                    cand -= (u[:, col] @ cand) * u[:, col]
            nrm = float(np.linalg.norm(cand))
            if nrm > 0.5:
                best = (nrm, j, cand)
                break
            if nrm > best[0]:
                best = (nrm, j, cand)
        nrm, _, cand = best
        if cand is None or nrm <= 1e-8:
            raise NumericError("cannot complete an orthonormal basis for null columns")
        u[:, hole] = cand / nrm
        filled.append(hole)


def _canonicalize_signs(u: np.ndarray, v: np.ndarray) -> None:
    """Flip (u, v) column pairs so each v column's largest entry is positive."""
    for i in range(v.shape[1]):
        idx = int(np.argmax(np.abs(v[:, i])))
        if v[idx, i] < 0.0:
            v[:, i] = -v[:, i]
            u[:, i] = -u[:, i]


def _masses(counts: np.ndarray, topic: Topic, year: int):
    n = float(counts.sum())
    if n <= 0.0:
        raise DegenerateUnitError(topic, year, "table has no counts")
    p = counts / n
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    if np.any(r <= 0.0) or np.any(c <= 0.0):
        raise DegenerateUnitError(topic, year, "table has an all-zero row or column")
    return n, p, r, c


@dataclass(eq=False)
class CaDecomposition:
    """Full correspondence analysis of one contingency table.

    ``col_coords`` holds outlet principal coordinates in all p = min(rows,
    cols) dimensions; Euclidean distances between its rows equal chi-square
    distances between the table's column profiles up to rounding.
    """

    topic: Topic
    year: int
    outlets: tuple[str, ...]
    n: float
    row_masses: np.ndarray
    col_masses: np.ndarray
    svd: SvdResult
    col_coords: np.ndarray  # (len(outlets), p)
    total_inertia: float


@dataclass(frozen=True, eq=False)
class CaEmbedding:
    """Two-dimensional outlet embedding of one (topic, year) unit."""

    topic: Topic
    year: int
    outlet_points: dict[str, tuple[float, float]]
    singular_values: tuple[float, ...]
    total_inertia: float
    explained_2d: float

    @property
    def outlets(self) -> tuple[str, ...]:
        return tuple(self.outlet_points)

    def points(self) -> np.ndarray:
        """Outlet coordinates as an (n_outlets, 2) array in outlet order."""
        return np.array(list(self.outlet_points.values()), dtype=np.float64)


def ca_decompose(table: ContingencyTable) -> CaDecomposition:
    """Run correspondence analysis on *table*.

    The correspondence matrix P = N / n is centered against the rank-one
    independence model and standardized by the square roots of row and
    column masses; the SVD of that residual gives principal axes.  Column
    principal coordinates are ``diag(c)^-1/2 V diag(s)`` and the total
    inertia is the sum of squared singular values, which equals the table's
    chi-square statistic divided by n.
    """
    counts = table.counts.astype(np.float64)
    m, k = counts.shape
    if m < MIN_ROWS or k < MIN_COLS:
        raise DegenerateUnitError(
            table.topic, table.year,
            f"table is {m}x{k}; need at least {MIN_ROWS}x{MIN_COLS}",
        )
    n, p, r, c = _masses(counts, table.topic, table.year)
    expected = np.outer(r, c)
    residual = (p - expected) / np.sqrt(expected)
    res = svd(residual)
    col_coords = (res.v * res.s[None, :]) / np.sqrt(c)[:, None]
    total_inertia = float(res.s @ res.s)
    return CaDecomposition(
        table.topic, table.year, table.outlets,
        n, r, c, res, col_coords, total_inertia,
    )


def ca_embed(table: ContingencyTable) -> CaEmbedding:
    """Embed *table*'s outlets in the first two principal dimensions.

    ``explained_2d`` is the inertia fraction carried by those dimensions,
    defined as 1 when the total inertia is numerically zero (all column
    profiles equal).
    """
    dec = ca_decompose(table)
    pts = {
        outlet: (float(dec.col_coords[j, 0]), float(dec.col_coords[j, 1]))
        for j, outlet in enumerate(dec.outlets)
    }
    s = dec.svd.s
    if dec.total_inertia > NEGLIGIBLE_INERTIA:
        # Numerator and denominator are rounded separately, so cap at 1.
        explained = min(float(s[0] ** 2 + s[1] ** 2) / dec.total_inertia, 1.0)
    else:
        explained = 1.0
    return CaEmbedding(
        table.topic, table.year, pts,
        tuple(float(x) for x in s), dec.total_inertia, explained,
    )


def chi_square_stat(table: ContingencyTable) -> float:
    """Pearson chi-square statistic of *table*, from the textbook formula.

    Computed directly from counts and expected cell values with no
    decomposition involved, so it can serve as an independent check of
    ``total_inertia * n``.
    """
    counts = table.counts.astype(np.float64)
    n, _, r, c = _masses(counts, table.topic, table.year)
    expected = n * np.outer(r, c)
    return float(((counts - expected) ** 2 / expected).sum())


def profile_distance_matrix(table: ContingencyTable) -> np.ndarray:
    """Chi-square distances between column profiles, straight from counts.

    ``d(j, l)^2 = sum_i (P[i,j]/c[j] - P[i,l]/c[l])^2 / r[i]``.  Serves as
    the independent reference for distances between principal coordinates.
    """
    counts = table.counts.astype(np.float64)
    _, p, r, c = _masses(counts, table.topic, table.year)
    profiles = p / c[None, :]
    k = counts.shape[1]
    out = np.zeros((k, k))
    for j in range(k):
        for l in range(j + 1, k):
            diff = profiles[:, j] - profiles[:, l]
            d = math.sqrt(float((diff * diff / r).sum()))
            out[j, l] = out[l, j] = d
    return out
