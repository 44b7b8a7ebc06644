"""Discrepancy metrics on 2-D outlet embeddings.

Pairwise distances, single-linkage clusters under a distance threshold, an
outlet's distance to the major-cluster centroid, and a robust dispersion
measure built from medians.  Year-over-year series of these metrics are the
pipeline's main quantitative output.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .ca import CaEmbedding
from .errors import MetricUndefinedError
from .lexicon import Topic

logger = logging.getLogger(__name__)

AUTO_THRESHOLD = "auto"

MAD_SCOPES = ("all", "major")


class SeriesKind(Enum):
    CENTROID_DISTANCE = "centroid_distance"
    CLUSTER_MAD = "cluster_mad"


def pairwise_distances(emb: CaEmbedding) -> np.ndarray:
    """Symmetric Euclidean distance matrix in embedding outlet order."""
    pts = emb.points()
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def auto_threshold(emb: CaEmbedding) -> float:
    """Median of the pairwise outlet distances (mean of middles when even)."""
    d = pairwise_distances(emb)
    iu = np.triu_indices(d.shape[0], k=1)
    return float(np.median(d[iu]))


@dataclass(frozen=True)
class ClusterAssignment:
    """A partition of one unit's outlets, with the major cluster marked.

    ``clusters`` are ordered by their smallest member index in the
    embedding; members within a cluster keep embedding order.  ``major``
    indexes the largest cluster, ties going to the cluster containing the
    lexicographically smallest outlet name.
    """

    topic: Topic
    year: int
    clusters: tuple[tuple[str, ...], ...]
    major: int

    @property
    def major_cluster(self) -> tuple[str, ...]:
        return self.clusters[self.major]


def find_clusters(emb: CaEmbedding, threshold: float | str = AUTO_THRESHOLD) -> ClusterAssignment:
    """Single-linkage clusters of the embedded outlets.

    Clusters are merged while the smallest inter-cluster single-linkage
    distance is at most *threshold* (``"auto"`` means the median pairwise
    distance).  Equal merge distances are resolved toward the pair with the
    lowest cluster indexes, making the result deterministic; the final
    partition itself depends only on which distances clear the threshold.
    """
    names = list(emb.outlet_points)
    if len(names) < 2:
        raise ValueError("need at least 2 embedded outlets to cluster")
    if threshold == AUTO_THRESHOLD:
        tau = auto_threshold(emb)
    else:
        tau = float(threshold)
        if not math.isfinite(tau) or tau < 0.0:
            raise ValueError(f"threshold must be finite and >= 0, got {threshold!r}")
    d = pairwise_distances(emb)

    clusters: list[list[int]] = [[i] for i in range(len(names))]
    while len(clusters) > 1:
        best: tuple[float, int, int] | None = None
        for i in range(len(clusters) - 1):
            for j in range(i + 1, len(clusters)):
                link = min(d[a, b] for a in clusters[i] for b in clusters[j])
                if best is None or link < best[0]:
                    best = (link, i, j)
        assert best is not None
        if best[0] > tau:
            break
        _, i, j = best
        clusters[i].extend(clusters[j])
        del clusters[j]

    named = tuple(tuple(names[a] for a in sorted(members)) for members in clusters)
    max_size = max(len(c) for c in named)
    tied = [i for i, c in enumerate(named) if len(c) == max_size]
    major = min(tied, key=lambda i: min(named[i]))
    return ClusterAssignment(emb.topic, emb.year, named, major)


def centroid_distance(emb: CaEmbedding, outlet: str, assignment: ClusterAssignment) -> float:
    """Distance from *outlet* to the centroid of the major cluster.

    The centroid is the arithmetic mean of the major cluster's points,
    excluding *outlet* itself when it is a member, so an outlet is never
    measured against a centroid it pulled toward itself.  Raises
    MetricUndefinedError when the outlet is not embedded or the exclusion
    empties the cluster.
    """
    if outlet not in emb.outlet_points:
        raise MetricUndefinedError(f"outlet {outlet!r} is not in this embedding")
    members = [m for m in assignment.major_cluster if m != outlet]
    if not members:
        raise MetricUndefinedError(
            f"major cluster contains only {outlet!r}; centroid undefined"
        )
    pts = np.array([emb.outlet_points[m] for m in members], dtype=np.float64)
    centroid = pts.mean(axis=0)
    x, y = emb.outlet_points[outlet]
    return float(math.hypot(x - centroid[0], y - centroid[1]))


def cluster_mad(
    emb: CaEmbedding,
    assignment: ClusterAssignment | None = None,
    *,
    scope: str = "all",
) -> float:
    """Median absolute deviation of outlet points around their median.

    The center is the component-wise median; the result is the median of
    the Euclidean distances to that center.  ``scope="all"`` uses every
    embedded outlet, ``"major"`` only the major cluster (requires an
    assignment).  Medians over an even count average the two middle values.
    """
    if scope not in MAD_SCOPES:
        raise ValueError(f"scope must be one of {MAD_SCOPES}, got {scope!r}")
    if scope == "major":
        if assignment is None:
            raise ValueError("scope='major' requires a cluster assignment")
        pts = np.array(
            [emb.outlet_points[m] for m in assignment.major_cluster], dtype=np.float64
        )
    else:
        pts = emb.points()
    center = np.median(pts, axis=0)
    dists = np.sqrt(((pts - center) ** 2).sum(axis=1))
    return float(np.median(dists))


@dataclass(frozen=True)
class DiscrepancySeries:
    """One metric tracked across years; None marks a gap (no usable unit)."""

    topic: Topic
    kind: SeriesKind
    outlet: str | None
    values: dict[int, float | None]

    def label(self) -> str:
        base = f"{self.topic.value} {self.kind.value}"
        return f"{base} {self.outlet}" if self.outlet else base

    def defined_years(self) -> list[int]:
        return [y for y in sorted(self.values) if self.values[y] is not None]


def build_series(
    topic: Topic,
    kind: SeriesKind,
    per_year: Mapping[int, CaEmbedding | None],
    years: Sequence[int],
    *,
    outlet: str | None = None,
    cluster_threshold: float | str = AUTO_THRESHOLD,
    mad_scope: str = "all",
) -> DiscrepancySeries:
    """Assemble one metric series over *years*.

    Years without an embedding become gaps, as do years where the metric is
    undefined (for centroid distance: outlet absent or alone in the major
    cluster).  ``kind=CENTROID_DISTANCE`` requires *outlet*.
    """
    if kind is SeriesKind.CENTROID_DISTANCE and not outlet:
        raise ValueError("centroid distance series needs an outlet")
    values: dict[int, float | None] = {}
    for year in years:
        emb = per_year.get(year)
        if emb is None:
            values[year] = None
            continue
        assignment = find_clusters(emb, cluster_threshold)
        if kind is SeriesKind.CENTROID_DISTANCE:
            assert outlet is not None
            try:
                values[year] = centroid_distance(emb, outlet, assignment)
            except MetricUndefinedError as exc:
                logger.info("%s/%d: %s", topic.value, year, exc)
                values[year] = None
        else:
            values[year] = cluster_mad(emb, assignment, scope=mad_scope)
    return DiscrepancySeries(topic, kind, outlet if kind is SeriesKind.CENTROID_DISTANCE else None, values)
