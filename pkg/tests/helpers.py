"""Random complexes, fields and diagrams shared by the test modules."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from topocorr import PersistenceDiagram, build_complex


def random_complex(rng: np.random.Generator, max_vertices: int = 50, max_edges: int = 150,
                   triangles: bool = True):
    n = int(rng.integers(2, max_vertices + 1))
    pool = list(combinations(range(n), 2))
    k = min(len(pool), int(rng.integers(1, max_edges + 1)))
    edges = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]
    simplices = [(v,) for v in range(n)] + edges
    if triangles:
        es = set(edges)
        tris = [t for t in combinations(range(n), 3)
                if {(t[0], t[1]), (t[0], t[2]), (t[1], t[2])} <= es]
        simplices += tris[: int(rng.integers(0, len(tris) + 1))]
    return build_complex(simplices, vertex_count=n)


def random_field(rng: np.random.Generator, n: int, ties: bool = False) -> np.ndarray:
    if ties:
        return rng.integers(-3, 4, size=n).astype(np.float64)
    return rng.normal(size=n)


def random_diagram(rng: np.random.Generator, max_points: int = 4, integer: bool = False,
                   essential: int | None = None) -> PersistenceDiagram:
    """At most ``max_points`` points in total, essential classes included."""
    m = int(rng.integers(0, 2)) if essential is None else essential
    k = int(rng.integers(0, max_points - m + 1))
    if integer:
        births = rng.integers(-4, 5, size=k).astype(float)
        deaths = births + rng.integers(1, 5, size=k)
    else:
        births = rng.normal(size=k)
        deaths = births + rng.exponential(size=k) + 1e-3
    ess = rng.normal(size=m).tolist()
    return PersistenceDiagram(list(zip(births.tolist(), deaths.tolist())), ess)
