from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topocorr import Bifunction, Branch, GridSpec, collection_correlation, topological_correlation, \
    topological_difference
from topocorr.correlation import EmptyCollectionError, correlation_from_differences, mean_correlation
from topocorr.shapes import circle_mesh, projection_field

from helpers import random_complex, random_field

SMALL = GridSpec(6, 6, refine_rounds=1)


def _random_phi(rng, n=12, m=30):
    K = random_complex(rng, n, m)
    return K, Bifunction(random_field(rng, K.vertex_count), random_field(rng, K.vertex_count))


@pytest.mark.parametrize("t", [1e-3, 0.25, 1.0, 7.5])
def test_formula_one_third(t):
    value, branch = correlation_from_differences(2 * t, t)
    assert branch is Branch.FORMULA
    assert value == pytest.approx(1 / 3, abs=1e-15)


def test_degenerate_branch():
    assert correlation_from_differences(0.0, 0.0) == (1.0, Branch.DEGENERATE)
    assert correlation_from_differences(4e-10, 5e-10) == (1.0, Branch.DEGENERATE)
    assert correlation_from_differences(6e-10, 5e-10)[1] is Branch.FORMULA


def test_formula_extremes():
    assert correlation_from_differences(0.5, 0.5) == (0.0, Branch.FORMULA)
    assert correlation_from_differences(0.5, 0.0) == (1.0, Branch.FORMULA)


def test_negative_difference_rejected():
    with pytest.raises(ValueError):
        correlation_from_differences(-1e-3, 1.0)


@given(st.floats(0, 10), st.floats(0, 10))
def test_formula_range_and_symmetry(a, b):
    v, branch = correlation_from_differences(a, b)
    assert 0.0 <= v <= 1.0
    assert correlation_from_differences(b, a) == (v, branch)


def test_mean_of_zero_and_one():
    assert mean_correlation([0.0, 1.0]) == 0.5


def test_empty_collection():
    with pytest.raises(EmptyCollectionError):
        collection_correlation([])
    with pytest.raises(EmptyCollectionError):
        mean_correlation([])


def test_difference_of_identical_is_zero():
    rng = np.random.default_rng(0)
    K, phi = _random_phi(rng)
    assert topological_difference(phi, phi, K, SMALL) == 0.0


def test_circle_difference_equals_matching_distance():
    mesh = circle_mesh(64)
    x, y = projection_field(mesh, "x"), projection_field(mesh, "y")
    d = topological_difference(Bifunction(x, y), Bifunction(x, x), mesh.complex, GridSpec(8, 8))
    assert d >= 0.5 - np.sqrt(2) / 4


def test_circle_correlation_is_zero():
    mesh = circle_mesh(64)
    phi = Bifunction(projection_field(mesh, "x"), projection_field(mesh, "y"))
    report = topological_correlation(phi, mesh.complex, GridSpec(8, 8))
    assert report.delta_phi_f == report.delta_phi_g > report.degeneracy_tol
    assert report.correlation == 0.0 and report.branch is Branch.FORMULA


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_diagonal_bifunction_is_fully_correlated(seed):
    rng = np.random.default_rng(seed)
    K = random_complex(rng, 20, 50)
    f = random_field(rng, K.vertex_count, ties=bool(seed % 2))
    report = topological_correlation(Bifunction(f, f), K, SMALL)
    assert report.correlation == 1.0 and report.branch is Branch.DEGENERATE


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_report_invariants(seed):
    rng = np.random.default_rng(seed)
    K, phi = _random_phi(rng)
    r = topological_correlation(phi, K, SMALL)
    assert r.delta_phi_f >= 0 and r.delta_phi_g >= 0
    assert 0.0 <= r.correlation <= 1.0
    assert (r.branch is Branch.DEGENERATE) == (r.delta_phi_f + r.delta_phi_g <= r.degeneracy_tol)
    if r.branch is Branch.FORMULA and r.correlation == 0.0:
        assert abs(r.delta_phi_f - r.delta_phi_g) <= 1e-12
        assert min(r.delta_phi_f, r.delta_phi_g) > r.degeneracy_tol
    if r.branch is Branch.FORMULA and r.correlation >= 1 - 1e-12:
        assert min(r.delta_phi_f, r.delta_phi_g) <= 1e-12


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_symmetric_under_component_swap(seed):
    rng = np.random.default_rng(seed)
    K, phi = _random_phi(rng)
    a = topological_correlation(phi, K, SMALL)
    b = topological_correlation(phi.swapped(), K, SMALL)
    assert a.correlation == b.correlation
    assert (a.delta_phi_f, a.delta_phi_g) == (b.delta_phi_g, b.delta_phi_f)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_difference_non_negative(seed):
    rng = np.random.default_rng(seed)
    K, phi1 = _random_phi(rng)
    phi2 = Bifunction(random_field(rng, K.vertex_count), random_field(rng, K.vertex_count))
    assert topological_difference(phi1, phi2, K, SMALL) >= 0.0


def test_collection_of_diagonal_bifunctions():
    rng = np.random.default_rng(4)
    pairs = []
    for _ in range(3):
        K = random_complex(rng, 15, 30)
        f = random_field(rng, K.vertex_count)
        pairs.append((K, Bifunction(f, f)))
    assert collection_correlation(pairs, SMALL) == 1.0


def test_report_document():
    rng = np.random.default_rng(1)
    K, phi = _random_phi(rng)
    doc = topological_correlation(phi, K, SMALL).to_dict()
    assert list(doc)[:4] == ["delta_phi_f", "delta_phi_g", "correlation", "branch"]
