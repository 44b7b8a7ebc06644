"""Independent reference implementations used to cross-check the package.

Everything here is written the slow, obvious way (explicit loops, textbook
formulas, a different decomposition route) so a bug in the package cannot
hide in a shared code path.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def naive_bigram_year_counts(headlines):
    """Per-(year, bigram) occurrence counts by literal window scanning."""
    counts = {}
    for h in headlines:
        toks = list(h.tokens)
        for i in range(len(toks) - 1):
            key = (h.year, (toks[i], toks[i + 1]))
            counts[key] = counts.get(key, 0) + 1
    return counts


def naive_unit_ngram_counts(headlines, outlet, counting="occurrences"):
    """Per-outlet bigram+trigram counts by literal window scanning."""
    counts = {}
    for h in headlines:
        if h.outlet != outlet:
            continue
        toks = list(h.tokens)
        grams = []
        for i in range(len(toks) - 1):
            grams.append((toks[i], toks[i + 1]))
        for i in range(len(toks) - 2):
            grams.append((toks[i], toks[i + 1], toks[i + 2]))
        if counting == "headlines":
            grams = sorted(set(grams))
        for g in grams:
            counts[g] = counts.get(g, 0) + 1
    return counts


def gram_eigenvalues(a):
    """Squared singular values via LAPACK eigen-decomposition of the Gram matrix.

    A different algorithm and library from the Jacobi SVD under test.
    """
    a = np.asarray(a, dtype=np.float64)
    m, k = a.shape
    gram = a.T @ a if m >= k else a @ a.T
    ev = np.linalg.eigvalsh(gram)
    return np.sort(np.clip(ev, 0.0, None))[::-1]


def chi_square_direct(counts):
    """Pearson chi-square by explicit loops over cells, in pure Python."""
    counts = [[float(x) for x in row] for row in counts]
    n = sum(sum(row) for row in counts)
    row_tot = [sum(row) for row in counts]
    col_tot = [sum(row[j] for row in counts) for j in range(len(counts[0]))]
    chi = 0.0
    for i, row in enumerate(counts):
        for j, obs in enumerate(row):
            exp = row_tot[i] * col_tot[j] / n
            chi += (obs - exp) ** 2 / exp
    return chi


def profile_distance_direct(counts, j, l):
    """Chi-square distance between column profiles j and l, pure Python."""
    counts = [[float(x) for x in row] for row in counts]
    n = sum(sum(row) for row in counts)
    p = [[x / n for x in row] for row in counts]
    r = [sum(row) for row in p]
    c = [sum(row[col] for row in p) for col in range(len(p[0]))]
    acc = 0.0
    for i in range(len(p)):
        acc += (p[i][j] / c[j] - p[i][l] / c[l]) ** 2 / r[i]
    return math.sqrt(acc)


def threshold_components(points, names, tau):
    """Clusters as connected components of the distance-<=-tau graph.

    Returns a set of frozensets of names; single linkage with threshold tau
    must produce exactly this partition.
    """
    n = len(points)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = math.dist(points[i], points[j])
            if d <= tau:
                adj[i].append(j)
                adj[j].append(i)
    seen = [False] * n
    parts = set()
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        parts.add(frozenset(names[i] for i in comp))
    return parts


def median_pure(values):
    """Median with the even-count mean-of-middles rule, no numpy."""
    vals = sorted(values)
    n = len(vals)
    mid = n // 2
    if n % 2:
        return vals[mid]
    return 0.5 * (vals[mid - 1] + vals[mid])


def mad_pure(points):
    """Component-wise median center, then median of Euclidean distances."""
    cx = median_pure([p[0] for p in points])
    cy = median_pure([p[1] for p in points])
    return median_pure([math.hypot(p[0] - cx, p[1] - cy) for p in points])
