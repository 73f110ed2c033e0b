"""Deterministic meshes of the circle, sphere and torus with coordinate fields.

Coordinates are generated from trigonometric tables that are symmetric bit
for bit: reflecting across the plane ``x = y`` permutes the vertices and
swaps the x and y columns exactly.  This is what lets ``(x, y)`` and
``(y, x)`` produce identical floating-point results downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import ScalarField, SimplicialComplex, build_complex

MAX_SPHERE_SUBDIVISIONS = 6


class Axis(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"

    @property
    def column(self) -> int:
        return "xyz".index(self.value)


@dataclass(frozen=True, eq=False)
class EmbeddedMesh:
    complex: SimplicialComplex
    coordinates: np.ndarray
    name: str = ""

    def __post_init__(self):
        coords = np.array(self.coordinates, dtype=np.float64).reshape(-1, 3)
        if len(coords) != self.complex.vertex_count:
            raise ValueError("one coordinate triple per vertex required")
        coords.setflags(write=False)
        object.__setattr__(self, "coordinates", coords)


def _cos_base(r: int, n: int) -> float:
    # cos(2*pi*r/n) for 0 <= r <= n/4, symmetric about r = n/8
    if 8 * r <= n:
        return math.cos(2 * math.pi * r / n)
    return math.sin(2 * math.pi * (n // 4 - r) / n)


def unit_circle_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(cos, sin)`` of ``2*pi*k/n`` with exact quadrant and octant symmetry.

    ``sin[k] == cos[(n/4 - k) % n]`` holds bitwise; requires ``n % 4 == 0``.
    """
    if n < 4 or n % 4:
        raise ValueError(f"n must be a positive multiple of 4, got {n}")
    cos = np.empty(n)
    for k in range(n):
        m = k if 2 * k <= n else n - k
        cos[k] = _cos_base(m, n) if 4 * m <= n else -_cos_base(n // 2 - m, n)
    sin = cos[(n // 4 - np.arange(n)) % n]
    return cos, sin


def circle_mesh(n: int) -> EmbeddedMesh:
    """Regular ``n``-gon on the unit circle, vertex ``k`` at angle ``2*pi*k/n``."""
    if n < 4 or n % 4:
        raise ValueError(f"circle needs n >= 4 with n % 4 == 0, got {n}")
    cos, sin = unit_circle_table(n)
    K = build_complex([[k, (k + 1) % n] for k in range(n)], vertex_count=n)
    coords = np.column_stack([cos, sin, np.zeros(n)])
    return EmbeddedMesh(K, coords, f"circle:{n}")


_OCTAHEDRON = [
    (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (-1.0, 0.0, 0.0), (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0), (0.0, 0.0, -1.0),
]


def _normalized(p) -> tuple[float, float, float]:
    x, y, z = p
    # fixed summation order keeps the x/y swap exact
    norm = math.sqrt(x * x + y * y + z * z)
    return (x / norm, y / norm, z / norm)


def sphere_mesh(subdivisions: int) -> EmbeddedMesh:
    """Octahedron subdivided ``subdivisions`` times with vertices pushed to the unit sphere."""
    if not 0 <= subdivisions <= MAX_SPHERE_SUBDIVISIONS:
        raise ValueError(f"subdivisions must be in [0, {MAX_SPHERE_SUBDIVISIONS}]")
    coords = list(_OCTAHEDRON)
    triangles = []
    for i in range(4):
        j = (i + 1) % 4
        triangles += [(i, j, 4), (i, j, 5)]
    for _ in range(subdivisions):
        edges = sorted({tuple(sorted(e)) for a, b, c in triangles for e in ((a, b), (b, c), (a, c))})
        mid = {}
        for a, b in edges:
            pa, pb = coords[a], coords[b]
            mid[(a, b)] = len(coords)
            coords.append(_normalized((pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2])))

        def m(a, b):
            return mid[(a, b) if a < b else (b, a)]

        refined = []
        for a, b, c in triangles:
            ab, bc, ca = m(a, b), m(b, c), m(c, a)
            refined += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        triangles = refined
    K = build_complex(triangles, vertex_count=len(coords))
    return EmbeddedMesh(K, np.array(coords), f"sphere:{subdivisions}")


def torus_mesh(m: int, n: int, R: float = 2.0, r: float = 1.0) -> EmbeddedMesh:
    """Grid triangulation of the embedded torus with ``m`` x ``n`` vertices.

    Vertex ``i * n + j`` sits at angles ``theta = 2*pi*i/m`` (around the z
    axis) and ``phi = 2*pi*j/n`` (around the tube).  Square diagonals
    alternate in a checkerboard, which makes the x/y reflection a simplicial
    automorphism whenever ``m % 8 == 0``.
    """
    if m < 4 or n < 4 or m % 4 or n % 4:
        raise ValueError("torus needs m, n >= 4 and both multiples of 4")
    if not R > r > 0:
        raise ValueError("torus radii need R > r > 0")
    cos_t, sin_t = unit_circle_table(m)
    cos_p, sin_p = unit_circle_table(n)
    ring = R + r * cos_p
    coords = np.empty((m * n, 3))
    coords[:, 0] = np.outer(cos_t, ring).ravel()
    coords[:, 1] = np.outer(sin_t, ring).ravel()
    coords[:, 2] = np.tile(r * sin_p, m)

    def v(i, j):
        return (i % m) * n + (j % n)

    triangles = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            if (i + j) % 2 == 0:
                triangles += [(a, b, c), (a, c, d)]
            else:
                triangles += [(a, b, d), (b, c, d)]
    K = build_complex(triangles, vertex_count=m * n)
    return EmbeddedMesh(K, coords, f"torus:{m}x{n}")


def projection_field(mesh: EmbeddedMesh, axis: Axis | str) -> ScalarField:
    """Per-vertex coordinate along ``axis``."""
    return ScalarField(mesh.coordinates[:, Axis(axis).column])


def reflection_permutation(mesh: EmbeddedMesh) -> np.ndarray:
    """Vertex map induced by ``(x, y, z) -> (y, x, z)``; raises if it is not a symmetry."""
    lookup = {tuple(p): i for i, p in enumerate(mesh.coordinates.tolist())}
    try:
        perm = np.array([lookup[(y, x, z)] for x, y, z in mesh.coordinates.tolist()])
    except KeyError as exc:
        raise ValueError("mesh is not symmetric under swapping x and y") from exc
    if mesh.complex.relabel(perm) != mesh.complex:
        raise ValueError("reflection is not a simplicial automorphism")
    return perm


def mesh_from_spec(spec: str) -> EmbeddedMesh:
    """Parse ``circle:64``, ``sphere:3``, ``torus:32x32`` or ``torus:32x32:2:1``."""
    kind, _, rest = spec.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "circle":
            return circle_mesh(int(rest))
        if kind == "sphere":
            return sphere_mesh(int(rest))
        if kind == "torus":
            parts = rest.split(":")
            m, n = (int(t) for t in parts[0].lower().split("x"))
            radii = [float(t) for t in parts[1:]]
            return torus_mesh(m, n, *radii)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad shape spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown shape {kind!r} in {spec!r}")
