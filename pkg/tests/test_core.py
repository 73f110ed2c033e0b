from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from topocorr import Bifunction, Filtration, ScalarField, SimplicialComplex, betti_at, build_complex, \
    lower_star_filtration
from topocorr.core import DimensionMismatchError, MalformedSimplexError, NonFiniteValueError, \
    simplex_values, sublevel_subcomplex
from topocorr.shapes import circle_mesh, projection_field

from helpers import random_complex, random_field


def test_face_closure_of_edge():
    K = build_complex([[0, 1]])
    assert K.simplices == ((0,), (1,), (0, 1))


def test_isolated_vertices():
    K = build_complex([[0], [1]])
    assert K.vertex_count == 2 and K.count(0) == 2 and K.count(1) == 0


def test_square_is_a_circle():
    K = build_complex([[0, 1], [1, 2], [2, 3], [0, 3]])
    assert (K.count(0), K.count(1)) == (4, 4)
    assert K.euler_characteristic == 0


def test_repeated_vertex_rejected():
    with pytest.raises(MalformedSimplexError):
        build_complex([[0, 0, 1]])


def test_unclosed_complex_rejected():
    with pytest.raises(MalformedSimplexError):
        SimplicialComplex(2, ((0,), (0, 1)))


def test_vertex_out_of_range():
    with pytest.raises(MalformedSimplexError):
        build_complex([[0, 3]], vertex_count=3)


def test_empty_complex():
    K = build_complex([], vertex_count=0)
    assert len(K) == 0 and K.euler_characteristic == 0
    assert betti_at(K, Bifunction([], []), 0.0, 0.0, 0) == 0


def test_relabel_round_trip():
    K = build_complex([[0, 1, 2], [2, 3]])
    perm = [3, 2, 1, 0]
    assert K.relabel(perm).relabel(perm) == K
    assert K.relabel(perm) != K


def test_edge_filtration_order():
    K = build_complex([[0, 1]])
    F = lower_star_filtration(K, [0.0, 1.0])
    assert list(F) == [((0,), 0.0), ((1,), 1.0), ((0, 1), 1.0)]


def test_square_x_filtration():
    K = build_complex([[0, 1], [1, 2], [2, 3], [0, 3]])
    f = [1.0, 0.0, -1.0, 0.0]
    F = lower_star_filtration(K, f)
    assert sorted(v for s, v in F if len(s) == 1) == [-1.0, 0.0, 0.0, 1.0]
    for s, v in F:
        assert v == max(f[i] for i in s)


def test_constant_field_orders_by_dimension_then_lex():
    K = build_complex([[0, 1, 2], [1, 3]])
    F = lower_star_filtration(K, [2.5] * 4)
    assert all(v == 2.5 for _, v in F)
    assert [s for s, _ in F] == sorted(K.simplices, key=lambda s: (len(s), s))


def test_field_length_mismatch():
    K = build_complex([[0, 1]])
    with pytest.raises(DimensionMismatchError):
        lower_star_filtration(K, [0.0, 1.0, 2.0])


def test_non_finite_field():
    with pytest.raises(NonFiniteValueError):
        ScalarField([0.0, float("nan")])


def test_filtration_rejects_face_after_coface():
    K = build_complex([[0, 1]])
    with pytest.raises(ValueError):
        Filtration(K, np.array([2, 0, 1]), np.array([0.0, 0.0, 0.0]))


def test_circle_betti_table():
    mesh = circle_mesh(64)
    x, y = projection_field(mesh, "x"), projection_field(mesh, "y")
    K = mesh.complex
    assert betti_at(K, Bifunction(x, y), -1, -1, 0) == 0
    assert betti_at(K, Bifunction(x, x), -1, -1, 0) == 1
    assert betti_at(K, Bifunction(x, y), 1, 1, 0) == 1
    assert betti_at(K, Bifunction(x, y), 1, 1, 1) == 1


@given(st.integers(0, 2**32 - 1))
def test_lower_star_invariants(seed):
    rng = np.random.default_rng(seed)
    K = random_complex(rng, 15, 40)
    f = random_field(rng, K.vertex_count, ties=bool(seed % 2))
    F = lower_star_filtration(K, f)
    assert np.all(np.diff(F.values) >= 0)
    vals = simplex_values(K, f)
    pos = F.positions
    for i, s in enumerate(K.simplices):
        if len(s) > 1:
            for face in K.facets[i]:
                assert vals[face] <= vals[i]
                assert pos[face] < pos[i]
        for k in range(len(s)):
            assert s[:k] + s[k + 1:] in K.index or len(s) == 1


@given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 1), st.floats(0, 1))
def test_sublevel_sets_nest(seed, u, v, du, dv):
    rng = np.random.default_rng(seed)
    K = random_complex(rng, 12, 30)
    phi = Bifunction(random_field(rng, K.vertex_count), random_field(rng, K.vertex_count))
    small = sublevel_subcomplex(K, phi, u, v)
    large = sublevel_subcomplex(K, phi, u + du, v + dv)
    assert set(small.tolist()) <= set(large.tolist())


@given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 1))
def test_diagonal_bifunction_uses_min_threshold(seed, u, v, k):
    rng = np.random.default_rng(seed)
    K = random_complex(rng, 12, 30)
    phi = Bifunction.diagonal(random_field(rng, K.vertex_count))
    m = min(u, v)
    assert betti_at(K, phi, u, v, k) == betti_at(K, phi, m, m, k)
