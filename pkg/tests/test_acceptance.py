"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""
from __future__ import annotations

import math
import time

import numpy as np
import pytest

from topocorr import Bifunction, Branch, FilteringLine, GridSpec, PersistenceDiagram, betti_at, \
    bottleneck_distance, bottleneck_oracle, collection_correlation, compute_persistence, \
    lower_star_filtration, matching_distance, persistence_oracle_h0, topological_correlation, \
    topological_difference
from topocorr.matching import QUARTER_PI, line_distance
from topocorr.shapes import circle_mesh, projection_field, sphere_mesh, torus_mesh

from helpers import random_complex, random_diagram, random_field

# Grids for the randomized criteria, sized to their time budgets; the symmetric
# examples use the default grid.
DIFFERENCE_GRID = GridSpec(8, 8, refine_rounds=2)
RANGE_GRID = GridSpec(16, 16)
MONOTONE_BASE = GridSpec(16, 16)


@pytest.fixture(scope="module")
def circle():
    mesh = circle_mesh(64)
    x, y = projection_field(mesh, "x"), projection_field(mesh, "y")
    return mesh.complex, x, y


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def _random_bifunction(rng, K):
    return Bifunction(random_field(rng, K.vertex_count), random_field(rng, K.vertex_count))


def test_criterion_01_circle_betti_table(circle, verdict):
    K, x, y = circle
    with Clock() as clock:
        b1 = betti_at(K, Bifunction(x, y), -1, -1, 0)
        b2 = betti_at(K, Bifunction(x, x), -1, -1, 0)
    ok = b1 == 0 and b2 == 1 and clock.seconds < 0.1
    assert verdict(1, ok, f"betti(-1,-1) = {b1} and {b2}, expected 0 and 1 ({clock.seconds:.3f} s)")


def test_criterion_02_circle_projections_are_at_distance_zero(circle, verdict):
    K, x, y = circle
    with Clock() as clock:
        dx = compute_persistence(lower_star_filtration(K, x), 0)
        dy = compute_persistence(lower_star_filtration(K, y), 0)
        d = bottleneck_distance(dx, dy)
    expected = PersistenceDiagram([], [-1.0])
    ok = dx == expected and dy == expected and d == 0.0 and clock.seconds < 0.1
    assert verdict(2, ok, f"d_B(x, y) = {d!r} ({clock.seconds:.3f} s)")


def test_criterion_03_matching_distance_bound(circle, verdict):
    K, x, y = circle
    phi, F = Bifunction(x, y), Bifunction(x, x)
    with Clock() as clock:
        d = matching_distance(phi, F, K)
        diagonal = line_distance(phi, F, K, FilteringLine(QUARTER_PI, 0.0))
    target = 1 - math.sqrt(2) / 2
    ok = d >= 0.1464466 and abs(diagonal - target) <= 1e-12 and clock.seconds < 5
    assert verdict(3, ok, f"d_match = {d:.12f} >= 0.1464466, diagonal line {diagonal!r} "
                          f"vs {target!r} ({clock.seconds:.2f} s)")


def test_criterion_04_symmetry_equality(circle, verdict):
    K, x, y = circle
    with Clock() as clock:
        report = topological_correlation(Bifunction(x, y), K)
    a, b = report.matching_phi_f.value, report.matching_phi_g.value
    ok = (a == b and report.correlation == 0.0 and report.branch is Branch.FORMULA
          and report.delta_phi_f == report.delta_phi_g > report.degeneracy_tol and clock.seconds < 10)
    assert verdict(4, ok, f"d_match(phi,F) = {a!r}, d_match(phi,G) = {b!r}, correlation "
                          f"{report.correlation!r} [{report.branch.value}] ({clock.seconds:.2f} s)")


def test_criterion_05_diagonal_bifunctions(verdict):
    rng = np.random.default_rng(5)
    values = []
    with Clock() as clock:
        for trial in range(20):
            K = random_complex(rng, 50, 150)
            f = random_field(rng, K.vertex_count, ties=trial % 4 == 0)
            r = topological_correlation(Bifunction(f, f), K)
            values.append((r.correlation, r.branch))
    ok = all(v == (1.0, Branch.DEGENERATE) for v in values) and clock.seconds < 10
    assert verdict(5, ok, f"{sum(v == (1.0, Branch.DEGENERATE) for v in values)}/20 degenerate ones "
                          f"({clock.seconds:.2f} s)")


def test_criterion_06_example_collection(verdict):
    with Clock() as clock:
        pairs = []
        for mesh in (circle_mesh(64), sphere_mesh(3), torus_mesh(32, 32)):
            pairs.append((mesh.complex, Bifunction(projection_field(mesh, "x"), projection_field(mesh, "y"))))
        value = collection_correlation(pairs)
    ok = abs(value) <= 1e-9 and clock.seconds < 60
    assert verdict(6, ok, f"collection correlation {value!r} ({clock.seconds:.1f} s)")


def test_criterion_07_non_negativity(verdict):
    rng = np.random.default_rng(7)
    worst = math.inf
    with Clock() as clock:
        for _ in range(100):
            K = random_complex(rng, 50, 150)
            d = topological_difference(_random_bifunction(rng, K), _random_bifunction(rng, K), K,
                                       DIFFERENCE_GRID)
            worst = min(worst, d)
    ok = worst >= 0.0 and clock.seconds < 30
    assert verdict(7, ok, f"smallest difference over 100 pairs {worst!r} ({clock.seconds:.1f} s)")


def test_criterion_08_persistence_oracle(verdict):
    rng = np.random.default_rng(8)
    agree = 0
    with Clock() as clock:
        for trial in range(100):
            K = random_complex(rng, 50, 150)
            F = lower_star_filtration(K, random_field(rng, K.vertex_count, ties=trial % 3 == 0))
            agree += compute_persistence(F, 0) == persistence_oracle_h0(F)
    ok = agree == 100 and clock.seconds < 10
    assert verdict(8, ok, f"{agree}/100 reductions equal the union-find diagram ({clock.seconds:.2f} s)")


def test_criterion_09_bottleneck_oracle(verdict):
    rng = np.random.default_rng(9)
    agree = 0
    with Clock() as clock:
        for trial in range(200):
            m = int(rng.integers(0, 2))
            A = random_diagram(rng, 4, integer=trial % 2 == 0, essential=m)
            B = random_diagram(rng, 4, integer=trial % 2 == 0, essential=m)
            agree += bottleneck_distance(A, B) == bottleneck_oracle(A, B)
    ok = agree == 200 and clock.seconds < 10
    assert verdict(9, ok, f"{agree}/200 distances equal the exhaustive oracle ({clock.seconds:.2f} s)")


def test_criterion_10_range(verdict):
    rng = np.random.default_rng(10)
    values = []
    with Clock() as clock:
        for _ in range(50):
            K = random_complex(rng, 50, 150)
            values.append(topological_correlation(_random_bifunction(rng, K), K, RANGE_GRID).correlation)
    ok = all(0.0 <= v <= 1.0 for v in values) and clock.seconds < 60
    assert verdict(10, ok, f"correlations in [{min(values):.4f}, {max(values):.4f}] ({clock.seconds:.1f} s)")


def test_criterion_11_grid_monotonicity(verdict):
    rng = np.random.default_rng(11)
    drops = []
    with Clock() as clock:
        for _ in range(10):
            K = random_complex(rng, 50, 150)
            phi1, phi2 = _random_bifunction(rng, K), _random_bifunction(rng, K)
            coarse = matching_distance(phi1, phi2, K, MONOTONE_BASE)
            fine = matching_distance(phi1, phi2, K, MONOTONE_BASE.doubled())
            if fine < coarse:
                drops.append(coarse - fine)
    ok = not drops and clock.seconds < 60
    assert verdict(11, ok, f"{len(drops)}/10 pairs decreased when doubling 16x16 -> 32x32 "
                           f"({clock.seconds:.1f} s)")
