"""Two-sided Wilcoxon rank-sum test.

Exact null distribution by enumeration for combined sample sizes up to 12
with no ties; otherwise a normal approximation with midranks, tie
correction, and a 0.5 continuity correction.
"""

from __future__ import annotations

import math
from itertools import combinations

__all__ = ["wilcoxon_rank_sum"]

_EXACT_LIMIT = 12


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # ranks run 1..N
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_p(w_obs: float, n: int, total: int) -> float:
    # null: every n-subset of ranks 1..total is equally likely
    mean = n * (total + 1) / 2.0
    dev = abs(w_obs - mean)
    hits = 0
    count = 0
    for combo in combinations(range(1, total + 1), n):
        count += 1
        if abs(sum(combo) - mean) >= dev - 1e-12:
            hits += 1
    return hits / count


def wilcoxon_rank_sum(xs, ys) -> float:
    """Two-sided rank-sum p-value for samples ``xs`` and ``ys``."""
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    if not xs or not ys:
        raise ValueError("both samples must be non-empty")
    n, m = len(xs), len(ys)
    pooled = xs + ys
    if all(v == pooled[0] for v in pooled):
        return 1.0

    has_ties = len(set(pooled)) < len(pooled)
    ranks = _midranks(pooled)
    w = sum(ranks[:n])

    if n + m <= _EXACT_LIMIT and not has_ties:
        return _exact_p(w, n, n + m)

    total = n + m
    mean = n * (total + 1) / 2.0
    # tie-corrected variance of the rank sum
    tie_term = 0.0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for t in seen.values():
        tie_term += t ** 3 - t
    var = (n * m / 12.0) * (total + 1 - tie_term / (total * (total - 1)))
    if var <= 0.0:
        return 1.0
    dev = abs(w - mean)
    z = max(dev - 0.5, 0.0) / math.sqrt(var)
    return math.erfc(z / math.sqrt(2.0))
