"""Simplicial complexes, scalar fields and lower-star filtrations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

Simplex = tuple[int, ...]


class MalformedSimplexError(ValueError):
    """A simplex repeats a vertex or uses a negative index."""


class DimensionMismatchError(ValueError):
    """A field does not have one value per vertex of its complex."""


class NonFiniteValueError(ValueError):
    """A field contains NaN or an infinity."""


def _canonical_key(simplex: Simplex) -> tuple[int, Simplex]:
    return (len(simplex), simplex)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A face-closed set of simplices on vertices ``0..vertex_count-1``.

    Simplices are stored in canonical order (dimension, then lexicographic),
    so the position of a simplex in :attr:`simplices` doubles as the
    deterministic tie-break rank used by filtrations.
    """

    vertex_count: int
    simplices: tuple[Simplex, ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        seen = set()
        for s in self.simplices:
            if any(v < 0 or v >= self.vertex_count for v in s):
                raise MalformedSimplexError(f"vertex index out of range in {s}")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise MalformedSimplexError(f"simplex {s} is not strictly increasing")
            if s in seen:
                raise MalformedSimplexError(f"duplicate simplex {s}")
            seen.add(s)
        for s in self.simplices:
            if len(s) > 1:
                for face in combinations(s, len(s) - 1):
                    if face not in seen:
                        raise MalformedSimplexError(f"face {face} of {s} is missing")
        if sorted(self.simplices, key=_canonical_key) != list(self.simplices):
            raise ValueError("simplices must be in canonical order")

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.vertex_count, self.simplices))

    def __len__(self):
        return len(self.simplices)

    @cached_property
    def index(self) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.simplices)}

    @cached_property
    def dimensions(self) -> np.ndarray:
        return np.fromiter((len(s) - 1 for s in self.simplices), dtype=np.int64,
                           count=len(self.simplices))

    @property
    def dimension(self) -> int:
        return int(self.dimensions.max()) if self.simplices else -1

    def count(self, dim: int) -> int:
        return int(np.count_nonzero(self.dimensions == dim))

    @property
    def euler_characteristic(self) -> int:
        return int(sum((-1) ** int(d) for d in self.dimensions))

    @cached_property
    def _vertex_arrays(self) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        # dim -> (simplex indices, vertex array of shape (n, dim+1))
        out = {}
        for d in range(self.dimension + 1):
            idx = np.flatnonzero(self.dimensions == d)
            verts = np.array([self.simplices[i] for i in idx], dtype=np.int64).reshape(len(idx), d + 1)
            out[d] = (idx, verts)
        return out

    @cached_property
    def facets(self) -> list[tuple[int, ...]]:
        """Indices of the codimension-one faces of each simplex."""
        index = self.index
        return [tuple(index[f] for f in combinations(s, len(s) - 1)) if len(s) > 1 else ()
                for s in self.simplices]

    @cached_property
    def _facet_arrays(self) -> dict[int, np.ndarray]:
        facets = self.facets
        out = {}
        for d in range(1, self.dimension + 1):
            idx, _ = self.vertex_array(d)
            out[d] = np.array([facets[i] for i in idx], dtype=np.int64).reshape(len(idx), d + 1)
        return out

    def facet_array(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(simplex_indices, facet_indices)`` for all simplices of ``dim >= 1``."""
        idx, _ = self.vertex_array(dim)
        if dim not in self._facet_arrays:
            return idx, np.empty((0, dim + 1), dtype=np.int64)
        return idx, self._facet_arrays[dim]

    def vertex_array(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(simplex_indices, vertices)`` for all simplices of ``dim``."""
        if dim not in self._vertex_arrays:
            return np.empty(0, dtype=np.int64), np.empty((0, dim + 1), dtype=np.int64)
        return self._vertex_arrays[dim]

    def relabel(self, permutation: Sequence[int]) -> SimplicialComplex:
        """Complex obtained by sending vertex ``v`` to ``permutation[v]``."""
        perm = list(permutation)
        return build_complex([[perm[v] for v in s] for s in self.simplices],
                             vertex_count=self.vertex_count)


def build_complex(simplices: Iterable[Sequence[int]], vertex_count: int | None = None) -> SimplicialComplex:
    """Face closure of ``simplices`` in canonical order.

    ``vertex_count`` defaults to one more than the largest index used, so
    isolated vertices beyond that must be passed explicitly.
    """
    closed: set[Simplex] = set()
    top = -1
    for raw in simplices:
        s = tuple(int(v) for v in raw)
        if not s:
            continue
        if any(v < 0 for v in s):
            raise MalformedSimplexError(f"negative vertex index in {list(raw)}")
        if len(set(s)) != len(s):
            raise MalformedSimplexError(f"repeated vertex in {list(raw)}")
        s = tuple(sorted(s))
        top = max(top, s[-1])
        if s in closed:
            continue
        for k in range(1, len(s) + 1):
            closed.update(combinations(s, k))
    n = top + 1 if vertex_count is None else int(vertex_count)
    if n <= top:
        raise MalformedSimplexError(f"vertex {top} out of range for vertex_count={n}")
    closed.update((v,) for v in range(n))
    return SimplicialComplex(n, tuple(sorted(closed, key=_canonical_key)))


def _as_values(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError("field values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One finite real value per vertex."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = object.__hash__

    def check(self, K: SimplicialComplex):
        if len(self.values) != K.vertex_count:
            raise DimensionMismatchError(
                f"field has {len(self.values)} values, complex has {K.vertex_count} vertices")


@dataclass(frozen=True, eq=False)
class Bifunction:
    """A pair of fields ``(first, second)`` over one complex."""

    first: ScalarField
    second: ScalarField

    def __post_init__(self):
        for name in ("first", "second"):
            value = getattr(self, name)
            if not isinstance(value, ScalarField):
                object.__setattr__(self, name, ScalarField(value))
        if len(self.first) != len(self.second):
            raise DimensionMismatchError("bifunction components differ in length")

    def __eq__(self, other):
        if not isinstance(other, Bifunction):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    __hash__ = object.__hash__

    @classmethod
    def diagonal(cls, f) -> Bifunction:
        f = f if isinstance(f, ScalarField) else ScalarField(f)
        return cls(f, f)

    @property
    def is_diagonal(self) -> bool:
        return self.first is self.second or self.first == self.second

    def swapped(self) -> Bifunction:
        return Bifunction(self.second, self.first)

    def check(self, K: SimplicialComplex):
        self.first.check(K)
        self.second.check(K)


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices of a (sub)complex listed in entrance order.

    ``order`` holds indices into ``complex.simplices``; ``values[i]`` is the
    entrance value of ``order[i]``.
    """

    complex: SimplicialComplex
    order: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if order.shape != values.shape:
            raise DimensionMismatchError("order and values differ in length")
        if np.any(np.diff(values) < 0):
            raise ValueError("filtration values must be non-decreasing")
        if len(np.unique(order)) != len(order):
            raise ValueError("filtration lists a simplex twice")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "values", values)
        position = self.positions
        facets = self.complex.facets
        for i, s in enumerate(order):
            for face in facets[s]:
                if not 0 <= position[face] < i:
                    raise ValueError(f"simplex {self.complex.simplices[s]} precedes one of its faces")
        order.setflags(write=False)
        values.setflags(write=False)

    @classmethod
    def trusted(cls, K: SimplicialComplex, order: np.ndarray, values: np.ndarray) -> Filtration:
        """Build without validation; callers guarantee the invariants."""
        self = object.__new__(cls)
        object.__setattr__(self, "complex", K)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "values", values)
        return self

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        simplices = self.complex.simplices
        return ((simplices[s], float(v)) for s, v in zip(self.order, self.values))

    @cached_property
    def positions(self) -> np.ndarray:
        """Position of every simplex of the complex in the order, -1 if absent."""
        pos = np.full(len(self.complex), -1, dtype=np.int64)
        pos[self.order] = np.arange(len(self.order))
        return pos

    def position(self, simplex: Sequence[int]) -> int:
        return int(self.positions[self.complex.index[tuple(sorted(simplex))]])

    @property
    def dimensions(self) -> np.ndarray:
        return self.complex.dimensions[self.order]


def simplex_values(K: SimplicialComplex, f) -> np.ndarray:
    """Lower-star extension: each simplex takes the max of its vertex values."""
    vals = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=np.float64)
    if len(vals) != K.vertex_count:
        raise DimensionMismatchError(
            f"field has {len(vals)} values, complex has {K.vertex_count} vertices")
    out = np.empty(len(K), dtype=np.float64)
    for d in range(K.dimension + 1):
        idx, verts = K.vertex_array(d)
        out[idx] = vals[verts].max(axis=1)
    return out


def lower_star_filtration(K: SimplicialComplex, f) -> Filtration:
    """Sublevel filtration of ``f``, ties broken by dimension then lexicographically."""
    values = simplex_values(K, f)
    # canonical index already encodes (dimension, lexicographic)
    order = np.lexsort((np.arange(len(K)), values))
    return Filtration.trusted(K, order, values[order])


def sublevel_subcomplex(K: SimplicialComplex, phi: Bifunction, u: float, v: float) -> np.ndarray:
    """Indices of simplices whose vertices all satisfy ``f <= u`` and ``g <= v``."""
    phi.check(K)
    inside = (phi.first.values <= u) & (phi.second.values <= v)
    keep = np.ones(len(K), dtype=bool)
    for d in range(K.dimension + 1):
        idx, verts = K.vertex_array(d)
        keep[idx] = inside[verts].all(axis=1)
    return np.flatnonzero(keep)


def betti_at(K: SimplicialComplex, phi: Bifunction, u: float, v: float, degree: int) -> int:
    """Rank over Z/2 of the degree-``degree`` homology of the sublevel set at ``(u, v)``."""
    from .persistence import compute_persistence

    idx = sublevel_subcomplex(K, phi, u, v)
    if len(idx) == 0:
        return 0
    sub = Filtration(K, idx, np.zeros(len(idx)))
    return len(compute_persistence(sub, degree).essential)
