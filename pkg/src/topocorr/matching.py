"""Matching distance between bifunctions, estimated over a foliation of lines.

A line with angle ``theta`` in ``(0, pi/2)`` through ``(beta, -beta)`` turns
a bifunction ``(f, g)`` into the scalar field

    min(cos, sin) * max((f - beta) / cos, (g + beta) / sin)

whose lower-star diagram is compared across the two bifunctions.  The
vertical and horizontal lines are the component fields themselves and are
always part of the candidate set, so the estimate is never below
``max(d_B(f1, f2), d_B(g1, g2))``.

Every candidate set built here is closed under ``(theta, beta) ->
(pi/2 - theta, -beta)`` with the mirrored angle reproducing cos and sin
swapped bit for bit.  Swapping the components of both bifunctions therefore
leaves the estimate exactly unchanged.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bottleneck import INFINITE, bottleneck_distance
from .core import Bifunction, ScalarField, SimplicialComplex, lower_star_filtration
from .persistence import PersistenceDiagram, compute_persistence

HALF_PI = math.pi / 2
QUARTER_PI = HALF_PI / 2
_SQRT_HALF = math.sqrt(0.5)

# lines per worker task when evaluating in parallel
_CHUNK = 64
# canonical seeds refined per round; ties beyond this are dropped in sorted order
MAX_SEEDS = 8


class IncomparableDiagramsError(ValueError):
    """Two diagrams are at infinite bottleneck distance."""


def _snap(theta: float) -> float:
    # afterwards HALF_PI - (HALF_PI - theta) == theta exactly
    return HALF_PI - (HALF_PI - theta)


@dataclass(frozen=True, order=True)
class FilteringLine:
    theta: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.theta < HALF_PI:
            raise ValueError(f"theta must lie strictly inside (0, pi/2), got {self.theta}")
        theta = float(self.theta)
        # snapping makes mirrored() an exact involution; above pi/4 it already is
        object.__setattr__(self, "theta", _snap(theta) if theta < QUARTER_PI else theta)
        object.__setattr__(self, "beta", float(self.beta) + 0.0)

    @property
    def direction(self) -> tuple[float, float]:
        """``(cos theta, sin theta)``, computed so that mirrored angles swap exactly."""
        if self.theta == QUARTER_PI:
            return _SQRT_HALF, _SQRT_HALF
        if self.theta < QUARTER_PI:
            return math.cos(self.theta), math.sin(self.theta)
        phi = HALF_PI - self.theta
        return math.sin(phi), math.cos(phi)

    @property
    def weight(self) -> float:
        return min(self.direction)

    def mirrored(self) -> FilteringLine:
        return FilteringLine(HALF_PI - self.theta, -self.beta)

    def canonical(self) -> FilteringLine:
        """Representative of ``{self, self.mirrored()}`` with ``theta <= pi/4``."""
        return self if self.theta <= QUARTER_PI else self.mirrored()


def _mirror_pair(theta: float, beta: float) -> list[FilteringLine]:
    if theta > QUARTER_PI:
        theta, beta = HALF_PI - theta, -beta
    theta = _snap(theta)
    if not 0.0 < theta:
        return []
    lower = FilteringLine(theta, beta)
    return [lower, lower.mirrored()]


@dataclass(frozen=True)
class GridSpec:
    """Sampling policy for the foliation search.

    ``beta_bound`` is relative to the largest absolute field value.  Each
    refinement round re-samples a 5 x 5 window around the current best lines
    and shrinks the window by ``refine_shrink``.

    The search runs on every level of :meth:`pyramid` and keeps all of their
    lines, so doubling ``n_theta`` and ``n_beta`` only ever adds candidates.
    """

    n_theta: int = 32
    n_beta: int = 32
    beta_bound: float = 1.0
    refine_rounds: int = 3
    refine_shrink: float = 0.5

    def __post_init__(self):
        if self.n_theta < 1 or self.n_beta < 1:
            raise ValueError("n_theta and n_beta must be positive")
        if not self.beta_bound > 0:
            raise ValueError("beta_bound must be positive")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be non-negative")
        if not 0 < self.refine_shrink < 1:
            raise ValueError("refine_shrink must lie in (0, 1)")

    def doubled(self) -> GridSpec:
        return GridSpec(2 * self.n_theta, 2 * self.n_beta, self.beta_bound,
                        self.refine_rounds, self.refine_shrink)

    def halved(self) -> GridSpec:
        return GridSpec(max(1, self.n_theta // 2), max(1, self.n_beta // 2), self.beta_bound,
                        self.refine_rounds, self.refine_shrink)

    def pyramid(self) -> list[GridSpec]:
        """This grid followed by successive halvings down to a single line."""
        levels = [self]
        while levels[-1].n_theta > 1 or levels[-1].n_beta > 1:
            levels.append(levels[-1].halved())
        return levels

    def to_dict(self) -> dict:
        return asdict(self)


def theta_values(n: int) -> list[float]:
    """``n`` angles ``(i + 1) * (pi/2) / (n + 1)`` placed symmetrically about pi/4."""
    step = HALF_PI / (n + 1)
    lower = [_snap((i + 1) * step) for i in range(n // 2)]
    middle = [QUARTER_PI] if n % 2 else []
    return lower + middle + [HALF_PI - t for t in reversed(lower)]


def beta_values(n: int, bound: float) -> list[float]:
    """``n`` uniform offsets in ``[-bound, bound]``, exactly antisymmetric."""
    if n == 1:
        return [0.0]
    lower = [bound * (-1.0 + 2.0 * j / (n - 1)) for j in range(n // 2)]
    middle = [0.0] if n % 2 else []
    return lower + middle + [-b + 0.0 for b in reversed(lower)]


def line_grid(grid: GridSpec, value_range: float) -> list[FilteringLine]:
    """All grid lines, theta-major, for fields bounded by ``value_range`` in absolute value."""
    betas = beta_values(grid.n_beta, grid.beta_bound * value_range)
    return [FilteringLine(t, b) for t in theta_values(grid.n_theta) for b in betas]


def push_values(f: np.ndarray, g: np.ndarray, line: FilteringLine) -> np.ndarray:
    # min(c, s) * max(a / c, b / s) with the unit factor taken out exactly
    c, s = line.direction
    a, b = f - line.beta, g + line.beta
    if c <= s:
        return np.maximum(a, b * (c / s)) if c < s else np.maximum(a, b)
    return np.maximum(a * (s / c), b)


def push_to_line(phi: Bifunction, line: FilteringLine) -> ScalarField:
    """The scalar field whose sublevel sets are the bifiltration restricted to ``line``."""
    return ScalarField(push_values(phi.first.values, phi.second.values, line))


def _checked_distance(D1: PersistenceDiagram, D2: PersistenceDiagram, where: str) -> float:
    d = bottleneck_distance(D1, D2)
    if d == INFINITE:
        raise IncomparableDiagramsError(f"essential classes differ in number on {where}")
    return d


def _line_diagrams(K, degree, fields, lines):
    f, g = fields
    return [compute_persistence(lower_star_filtration(K, push_values(f, g, L)), degree) for L in lines]


class _DiagramCache:
    """Per-line diagrams for a fixed list of bifunctions on one complex."""

    def __init__(self, K: SimplicialComplex, degree: int, bifunctions: list[Bifunction], threads: int):
        self.K = K
        self.degree = degree
        self.bifunctions = bifunctions
        self.threads = threads
        self._base = {}
        self._store: list[dict[FilteringLine, PersistenceDiagram]] = [{} for _ in bifunctions]
        self._distances: dict[tuple[int, int, FilteringLine], float] = {}
        for i, phi in enumerate(bifunctions):
            if phi.is_diagonal:
                # pushing (f, f) is a non-decreasing map of f, so the diagram is the image of f's
                self._base[i] = compute_persistence(lower_star_filtration(K, phi.first), degree)

    def component(self, i: int, which: str) -> PersistenceDiagram:
        return compute_persistence(lower_star_filtration(self.K, getattr(self.bifunctions[i], which)),
                                   self.degree)

    def fill(self, i: int, lines: list[FilteringLine]):
        store = self._store[i]
        todo = [L for L in lines if L not in store]
        if not todo:
            return
        if i in self._base:
            base = self._base[i]
            for L in todo:
                store[L] = base.map(lambda a, L=L: push_values(a, a, L))
            return
        fields = (self.bifunctions[i].first.values, self.bifunctions[i].second.values)
        if self.threads > 1 and len(todo) > _CHUNK:
            chunks = [todo[k:k + _CHUNK] for k in range(0, len(todo), _CHUNK)]
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                results = pool.map(_line_diagrams, *zip(*[(self.K, self.degree, fields, c) for c in chunks]))
                for chunk, diagrams in zip(chunks, results):
                    store.update(zip(chunk, diagrams))
        else:
            store.update(zip(todo, _line_diagrams(self.K, self.degree, fields, todo)))

    def distances(self, i: int, j: int, lines: list[FilteringLine]) -> dict[FilteringLine, float]:
        memo = self._distances
        todo = [L for L in lines if (i, j, L) not in memo]
        self.fill(i, todo)
        self.fill(j, todo)
        a, b = self._store[i], self._store[j]
        for L in todo:
            memo[i, j, L] = _checked_distance(a[L], b[L], f"line theta={L.theta}, beta={L.beta}")
        return {L: memo[i, j, L] for L in lines}


@dataclass
class MatchingResult:
    """Outcome of the foliation search for one pair of bifunctions.

    ``value`` is a lower bound for the matching distance.  ``best_line`` is
    ``None`` when no oblique line beats the component (vertical/horizontal)
    distances.
    """

    value: float
    first_distance: float
    second_distance: float
    best_line: FilteringLine | None
    grid: GridSpec
    value_range: float
    line_values: dict[FilteringLine, float] = field(repr=False, default_factory=dict)

    @property
    def component_distance(self) -> float:
        return max(self.first_distance, self.second_distance)

    def to_dict(self) -> dict:
        best = None if self.best_line is None else {"theta": self.best_line.theta, "beta": self.best_line.beta}
        return {
            "matching_distance": self.value,
            "vertical_distance": self.first_distance,
            "horizontal_distance": self.second_distance,
            "best_line": best,
            "lines_evaluated": len(self.line_values),
            "value_range": self.value_range,
        }


def _resolve_threads(threads: int | None) -> int:
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return threads


def _value_range(bifunctions) -> float:
    top = max(float(np.max(np.abs(v), initial=0.0))
              for phi in bifunctions for v in (phi.first.values, phi.second.values))
    return top if top > 0 else 1.0


def _refined_lines(seeds, h_theta: float, h_beta: float) -> list[FilteringLine]:
    offsets = (-1.0, -0.5, 0.0, 0.5, 1.0)
    out = set()
    for seed in {L.canonical() for L in seeds}:
        for a in offsets:
            theta = seed.theta + a * h_theta
            if not 0.0 < theta < HALF_PI:
                continue
            for b in offsets:
                out.update(_mirror_pair(theta, seed.beta + b * h_beta))
    return sorted(out)


def foliation_search(K: SimplicialComplex, pairs: list[tuple[Bifunction, Bifunction]],
                     grid: GridSpec | None = None, degree: int = 0,
                     threads: int | None = 1) -> list[MatchingResult]:
    """Run the grid pass and refinement for several pairs sharing one grid.

    Bifunctions appearing in several pairs (by identity) have their per-line
    diagrams computed once.
    """
    grid = grid or GridSpec()
    bifunctions: list[Bifunction] = []
    slot = {}
    for pair in pairs:
        for phi in pair:
            phi.check(K)
            if id(phi) not in slot:
                slot[id(phi)] = len(bifunctions)
                bifunctions.append(phi)
    cache = _DiagramCache(K, degree, bifunctions, _resolve_threads(threads))
    value_range = _value_range(bifunctions)
    levels = grid.pyramid()

    results = []
    for phi1, phi2 in pairs:
        i, j = slot[id(phi1)], slot[id(phi2)]
        d_first = _checked_distance(cache.component(i, "first"), cache.component(j, "first"), "vertical line")
        d_second = _checked_distance(cache.component(i, "second"), cache.component(j, "second"), "horizontal line")
        values: dict[FilteringLine, float] = {}
        component = max(d_first, d_second)
        for level in levels:
            values.update(_search_level(cache, i, j, level, value_range, component))
        oblique = max(values.values())
        best = min(L for L, v in values.items() if v == oblique) if oblique > component else None
        results.append(MatchingResult(max(oblique, component), d_first, d_second, best, grid,
                                      value_range, values))
    return results


def _search_level(cache: _DiagramCache, i: int, j: int, grid: GridSpec,
                  value_range: float, floor: float) -> dict[FilteringLine, float]:
    # each level depends only on its own grid, which keeps the pyramid nested
    values = cache.distances(i, j, line_grid(grid, value_range))
    h_theta = HALF_PI / (grid.n_theta + 1)
    bound = grid.beta_bound * value_range
    h_beta = 2 * bound / (grid.n_beta - 1) if grid.n_beta > 1 else bound
    for r in range(grid.refine_rounds):
        top = max(values.values())
        if top <= floor:
            # nothing beats the component lines, and a flat landscape has no peak to chase
            break
        tied = sorted({L.canonical() for L, v in values.items() if v == top})
        seeds = tied[:MAX_SEEDS]
        shrink = grid.refine_shrink ** r
        fresh = [L for L in _refined_lines(seeds, h_theta * shrink, h_beta * shrink) if L not in values]
        values.update(cache.distances(i, j, fresh))
    return values


def matching_search(phi1: Bifunction, phi2: Bifunction, K: SimplicialComplex,
                    grid: GridSpec | None = None, degree: int = 0,
                    threads: int | None = 1) -> MatchingResult:
    return foliation_search(K, [(phi1, phi2)], grid, degree, threads)[0]


def matching_distance(phi1: Bifunction, phi2: Bifunction, K: SimplicialComplex,
                      grid: GridSpec | None = None, degree: int = 0,
                      threads: int | None = 1) -> float:
    """Lower bound of the matching distance, never below the component distances.

    Raises :class:`IncomparableDiagramsError` when some line yields diagrams
    with different numbers of essential classes.
    """
    return matching_search(phi1, phi2, K, grid, degree, threads).value


def line_distance(phi1: Bifunction, phi2: Bifunction, K: SimplicialComplex,
                  line: FilteringLine, degree: int = 0) -> float:
    """Bottleneck distance contributed by a single line."""
    D1 = compute_persistence(lower_star_filtration(K, push_to_line(phi1, line)), degree)
    D2 = compute_persistence(lower_star_filtration(K, push_to_line(phi2, line)), degree)
    return _checked_distance(D1, D2, "line")
