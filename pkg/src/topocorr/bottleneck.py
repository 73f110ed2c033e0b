"""Bottleneck distance between persistence diagrams."""
from __future__ import annotations

import math
from itertools import permutations

from .persistence import PersistenceDiagram

INFINITE = math.inf

ORACLE_MAX_POINTS = 10


class DiagramSizeError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _linf(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _half_persistence(p) -> float:
    return (p[1] - p[0]) / 2


def _check_no_diagonal(D: PersistenceDiagram):
    if D.has_diagonal_points:
        raise ValueError("diagram contains zero-persistence pairs")


def essential_distance(E1, E2) -> float:
    """L-infinity bottleneck between multisets of essential births."""
    if len(E1) != len(E2):
        return INFINITE
    # sorted order is optimal for the max cost on a line
    return max((abs(a - b) for a, b in zip(sorted(E1), sorted(E2))), default=0.0)


def _saturates(heavy: list[int], adj: list[list[int]], n_right: int) -> bool:
    """Whether some matching covers every left vertex in ``heavy`` (augmenting paths)."""
    match_right = [-1] * n_right

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    return all(augment(u, set()) for u in heavy)


def _feasible(cross, half_a, half_b, t: float) -> bool:
    # Points farther than t from the diagonal must be matched off-diagonal.
    # A matching covering the heavy points of A and one covering those of B
    # combine into one covering both (Mendelsohn-Dulmage).
    na, nb = len(half_a), len(half_b)
    heavy_a = [i for i in range(na) if half_a[i] > t]
    heavy_b = [j for j in range(nb) if half_b[j] > t]
    if len(heavy_a) > nb or len(heavy_b) > na:
        return False
    adj_a = [[j for j in range(nb) if cross[i][j] <= t] for i in range(na)]
    if not _saturates(heavy_a, adj_a, nb):
        return False
    adj_b = [[i for i in range(na) if cross[i][j] <= t] for j in range(nb)]
    return _saturates(heavy_b, adj_b, na)


def finite_bottleneck(A, B) -> float:
    """Exact bottleneck distance between finite point multisets, diagonal allowed.

    Binary search over the candidate costs (pairwise L-infinity distances and
    half-persistences) with a matching-based feasibility test.
    """
    A = [(float(b), float(d)) for b, d in A]
    B = [(float(b), float(d)) for b, d in B]
    if not A and not B:
        return 0.0
    half_a = [_half_persistence(p) for p in A]
    half_b = [_half_persistence(q) for q in B]
    cross = [[_linf(p, q) for q in B] for p in A]
    # every point pays at least its cheapest option
    lower = max(
        max((min([h, *row]) for h, row in zip(half_a, cross)), default=0.0),
        max((min([h, *(row[j] for row in cross)]) for j, h in enumerate(half_b)), default=0.0),
    )
    candidates = sorted({0.0, *half_a, *half_b, *(c for row in cross for c in row)})
    candidates = [c for c in candidates if c >= lower]
    # the largest candidate is always feasible: everything to the diagonal
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cross, half_a, half_b, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_distance(D1: PersistenceDiagram, D2: PersistenceDiagram) -> float:
    """Bottleneck distance; :data:`INFINITE` when essential counts differ."""
    _check_no_diagonal(D1)
    _check_no_diagonal(D2)
    ess = essential_distance(D1.essential, D2.essential)
    if ess == INFINITE:
        return INFINITE
    return max(ess, finite_bottleneck(D1.finite, D2.finite))


def bottleneck_oracle(D1: PersistenceDiagram, D2: PersistenceDiagram) -> float:
    """Brute-force minimum over every explicit matching. Small inputs only."""
    if len(D1) + len(D2) > ORACLE_MAX_POINTS:
        raise DiagramSizeError(f"oracle handles at most {ORACLE_MAX_POINTS} points in total")
    _check_no_diagonal(D1)
    _check_no_diagonal(D2)
    if len(D1.essential) != len(D2.essential):
        return INFINITE
    best_ess = min(
        (max((abs(a - b) for a, b in zip(D1.essential, perm)), default=0.0)
         for perm in permutations(D2.essential)),
        default=0.0,
    )
    A, B = D1.finite, D2.finite
    best = math.inf

    def assign(i, used, cost):
        nonlocal best
        if cost >= best:
            return
        if i == len(A):
            rest = [_half_persistence(B[j]) for j in range(len(B)) if j not in used]
            best = min(best, max([cost, *rest]))
            return
        assign(i + 1, used, max(cost, _half_persistence(A[i])))
        for j in range(len(B)):
            if j not in used:
                assign(i + 1, used | {j}, max(cost, _linf(A[i], B[j])))

    assign(0, frozenset(), 0.0)
    return max(best_ess, best)
