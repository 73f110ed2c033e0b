"""Persistence diagrams of monoparameter filtrations over Z/2."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Filtration


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite ``(birth, death)`` pairs plus births of essential classes.

    Both parts are kept sorted, so ``==`` is multiset equality.  Essential
    classes never get a numeric death.
    """

    finite: tuple[tuple[float, float], ...] = ()
    essential: tuple[float, ...] = ()

    def __post_init__(self):
        finite = tuple(sorted((float(b), float(d)) for b, d in self.finite))
        for b, d in finite:
            if not (math.isfinite(b) and math.isfinite(d)):
                raise ValueError("finite pairs need finite coordinates")
            if b > d:
                raise ValueError(f"birth {b} exceeds death {d}")
        essential = tuple(sorted(float(b) for b in self.essential))
        if not all(math.isfinite(b) for b in essential):
            raise ValueError("essential births must be finite")
        object.__setattr__(self, "finite", finite)
        object.__setattr__(self, "essential", essential)

    def __len__(self):
        return len(self.finite) + len(self.essential)

    def without_diagonal(self) -> PersistenceDiagram:
        return PersistenceDiagram(tuple((b, d) for b, d in self.finite if b < d), self.essential)

    @property
    def has_diagonal_points(self) -> bool:
        return any(b == d for b, d in self.finite)

    def map(self, fn) -> PersistenceDiagram:
        """Apply a non-decreasing map to every coordinate, dropping collapsed pairs."""
        if self.finite:
            pts = fn(np.array(self.finite, dtype=np.float64))
            finite = [(b, d) for b, d in pts.tolist() if b < d]
        else:
            finite = []
        essential = fn(np.array(self.essential, dtype=np.float64)).tolist() if self.essential else []
        return PersistenceDiagram(tuple(finite), tuple(essential))

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.finite], "essential": list(self.essential)}

    @classmethod
    def from_dict(cls, doc: dict) -> PersistenceDiagram:
        return cls(tuple(tuple(p) for p in doc.get("pairs", ())), tuple(doc.get("essential", ())))


def reduce_filtration(F: Filtration, max_dim: int, min_dim: int = 0) -> tuple[dict[int, int], set[int]]:
    """Column reduction of the boundary matrix for columns of dimension ``min_dim..max_dim``.

    Columns are bit sets over filtration positions.  Returns ``(pairs,
    positive)`` where ``pairs`` maps the position of each negative simplex
    to the position of the simplex it kills, and ``positive`` holds
    positions of simplices whose column reduced to zero.  Dimensions are
    processed from the top down so that pivots clear columns one dimension
    lower; the pairing is unchanged by this.
    """
    K = F.complex
    pos = F.positions

    pairs: dict[int, int] = {}
    positive: set[int] = set()
    cleared: set[int] = set()
    for d in range(max_dim, min_dim - 1, -1):
        if d == 0:
            idx, _ = K.vertex_array(0)
            positive.update(int(p) for p in pos[idx] if p >= 0)
            break
        idx, facets = K.facet_array(d)
        where = pos[idx]
        present = where >= 0
        where = where[present]
        rank = np.argsort(where)
        columns = where[rank].tolist()
        boundaries = pos[facets[present][rank]].tolist()
        if d == 1:
            _reduce_edges(len(F), columns, boundaries, cleared, pairs, positive)
            continue
        pivot_col: dict[int, int] = {}
        get = pivot_col.get
        for j, faces in zip(columns, boundaries):
            if j in cleared:
                positive.add(j)
                continue
            col = 0
            for p in faces:
                col ^= 1 << p
            while col:
                low = col.bit_length() - 1
                other = get(low)
                if other is None:
                    pivot_col[low] = col
                    pairs[j] = low
                    cleared.add(low)
                    break
                col ^= other
            else:
                positive.add(j)
    return pairs, positive


def _reduce_edges(n, columns, boundaries, cleared, pairs, positive):
    # An edge column has two entries and so does every reduced edge column:
    # adding the pivot column {w, low} to {a, low} leaves {a, w}.  Columns are
    # kept as (a, low) with partner[low] = a for pivots.
    partner = [-1] * n
    for j, (a, b) in zip(columns, boundaries):
        if j in cleared:
            positive.add(j)
            continue
        if a > b:
            a, b = b, a
        while True:
            w = partner[b]
            if w < 0:
                partner[b] = a
                pairs[j] = b
                cleared.add(b)
                break
            if w == a:
                positive.add(j)
                break
            a, b = (a, w) if a < w else (w, a)


def compute_persistence(F: Filtration, degree: int) -> PersistenceDiagram:
    """Degree-``degree`` persistence diagram of ``F`` with zero-persistence pairs dropped."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if len(F) == 0 or degree > F.complex.dimension:
        return PersistenceDiagram()
    pairs, positive = reduce_filtration(F, degree + 1, degree)
    dims = F.dimensions
    values = F.values
    finite = []
    killed = set()
    for j, i in pairs.items():
        if dims[i] == degree:
            killed.add(i)
            if values[i] < values[j]:
                finite.append((values[i], values[j]))
    essential = [values[i] for i in positive if dims[i] == degree and i not in killed]
    return PersistenceDiagram(tuple(finite), tuple(essential))


def persistence_oracle_h0(F: Filtration) -> PersistenceDiagram:
    """Degree-0 diagram by union-find and the elder rule.

    At a merge the component born earlier (by value, then by filtration
    position) survives; the other dies at the merging edge's value.
    """
    K = F.complex
    root: dict[int, int] = {}
    # root -> (birth value, birth position)
    birth: dict[int, tuple[float, int]] = {}

    def find(v):
        path = []
        while root[v] != v:
            path.append(v)
            v = root[v]
        for w in path:
            root[w] = v
        return v

    finite = []
    for i, (s, value) in enumerate(zip(F.order.tolist(), F.values.tolist())):
        simplex = K.simplices[s]
        if len(simplex) == 1:
            v = simplex[0]
            root[v] = v
            birth[v] = (value, i)
        elif len(simplex) == 2:
            a, b = find(simplex[0]), find(simplex[1])
            if a == b:
                continue
            if birth[a] > birth[b]:
                a, b = b, a
            root[b] = a
            if birth[b][0] < value:
                finite.append((birth[b][0], value))
            del birth[b]
    return PersistenceDiagram(tuple(finite), tuple(b for b, _ in birth.values()))


def diagram(K, f, degree: int = 0) -> PersistenceDiagram:
    """Shorthand for the lower-star diagram of ``f`` on ``K``."""
    from .core import lower_star_filtration

    return compute_persistence(lower_star_filtration(K, f), degree)
