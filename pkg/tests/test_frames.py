import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nframe.errors import DimensionError, NotAFrameError, PreconditionError
from nframe.frames import (
    Frame,
    alternative_dual,
    analysis,
    canonical_dual,
    frame_bounds,
    frame_operator,
    frame_operator_coords,
    frame_operator_direct,
    frame_sums,
    is_dual_pair,
    synthesis,
)
from nframe.nspace import AmbientSpace, ConditioningTuple, n_norm
from nframe.quotient import build_quotient

E = np.eye(3)
I3 = oracles.identity(3)


@pytest.fixture
def qs():
    s = AmbientSpace.standard(3)
    return build_quotient(s, ConditioningTuple(s, [E[2]]))


@pytest.fixture
def f(qs):
    return Frame(qs, [E[0], E[0], E[1]])


def oracle_operator(vectors):
    return np.array(oracles.frame_operator_matrix(I3, [E[2]], [E[0], E[1]], [list(v) for v in vectors]))


class TestHandExamples:
    def test_analysis(self, f):
        np.testing.assert_allclose(analysis(f, [2, 3, 0]), [2, 2, 3], atol=1e-12)

    def test_synthesis(self, f):
        np.testing.assert_allclose(synthesis(f, [1, 1, 2]), [2, 2], atol=1e-12)

    def test_synthesis_length_mismatch(self, f):
        with pytest.raises(DimensionError):
            synthesis(f, [1, 1])

    def test_operator(self, f):
        expected = oracle_operator(f.vectors)
        np.testing.assert_allclose(expected, np.diag([2, 1]))
        np.testing.assert_allclose(frame_operator(f), expected, atol=1e-12)

    def test_single_vector_operator(self, qs):
        g = Frame(qs, [E[0]])
        np.testing.assert_allclose(frame_operator(g), oracle_operator(g.vectors), atol=1e-12)
        np.testing.assert_allclose(frame_operator(g), np.diag([1, 0]), atol=1e-12)

    def test_bounds(self, f):
        grid = oracles.grid_bounds_2d(I3, [E[2]], E[0], E[1], [list(v) for v in f.vectors])
        b = frame_bounds(f)
        assert (b.lower, b.upper) == pytest.approx(grid, abs=1e-9)
        assert (b.lower, b.upper) == pytest.approx((1.0, 2.0), abs=1e-12)
        assert b.is_frame and not b.is_tight

    def test_not_a_frame(self, qs):
        b = frame_bounds(Frame(qs, [E[0]]))
        assert b.lower == pytest.approx(0.0, abs=1e-12)
        assert not b.is_frame

    def test_canonical_dual(self, f):
        d = canonical_dual(f)
        expected = [oracles.solve_diag([2, 1], v[:2]) for v in f.vectors]
        np.testing.assert_allclose(d.synthesis_matrix.T, expected, atol=1e-12)
        np.testing.assert_allclose(d.synthesis_matrix.T, [[0.5, 0], [0.5, 0], [0, 1]], atol=1e-12)

    def test_canonical_dual_scaled(self, qs):
        d = canonical_dual(Frame(qs, [2 * E[0], E[1]]))
        np.testing.assert_allclose(d.synthesis_matrix.T, [[0.5, 0], [0, 1]], atol=1e-12)

    def test_dual_requires_frame(self, qs):
        with pytest.raises(NotAFrameError):
            canonical_dual(Frame(qs, [E[0]]))

    def test_dual_pairs(self, f):
        assert is_dual_pair(f, canonical_dual(f)).is_dual
        check = is_dual_pair(f, f)
        assert not check.is_dual
        assert check.residual == pytest.approx(1.0, abs=1e-12)

    def test_pair_size_mismatch(self, f, qs):
        with pytest.raises(PreconditionError):
            is_dual_pair(f, Frame(qs, [E[0], E[1]]))

    def test_l_f_component_ignored(self, qs, f):
        shifted = Frame(qs, f.vectors + np.array([[0, 0, 5], [0, 0, -1], [0, 0, 2j]]))
        np.testing.assert_allclose(frame_operator(shifted), frame_operator(f), atol=1e-12)


def random_frame(seed, d, k, m):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    s = AmbientSpace(d, a @ a.conj().T + np.eye(d))
    qs = build_quotient(s, ConditioningTuple(s, rng.standard_normal((k, d))))
    return rng, Frame(qs, rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d)))


frame_params = (st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(0, 2), st.integers(1, 8))


@settings(max_examples=50, deadline=None)
@given(*frame_params)
def test_operator_properties(seed, d, k, m):
    k = min(k, d - 1)
    rng, f = random_frame(seed, d, k, m)
    s = frame_operator(f)
    scale = np.linalg.norm(s)
    assert np.linalg.norm(s - s.conj().T) <= 1e-10 * scale
    assert np.linalg.eigvalsh(s)[0] >= -1e-10 * scale
    np.testing.assert_allclose(frame_operator_direct(f), s, atol=1e-9 * scale)
    # the coordinate form is similar to the orthonormal one
    w = f.qs.whitener
    np.testing.assert_allclose(w @ frame_operator_coords(f) @ np.linalg.inv(w), s, atol=1e-9 * scale)
    b = frame_bounds(f)
    assert b.is_frame == (m >= f.qs.dim and np.linalg.matrix_rank(s, tol=1e-8 * np.linalg.norm(s, 2)) == f.qs.dim)
    p = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    norm2 = n_norm(f.qs.ambient, p, f.qs.fixing) ** 2
    total = frame_sums(f, p)
    assert b.lower * norm2 - 1e-8 * b.upper * norm2 <= total <= b.upper * norm2 * (1 + 1e-8)


@settings(max_examples=50, deadline=None)
@given(*frame_params)
def test_dual_properties(seed, d, k, m):
    k = min(k, d - 1)
    rng, f = random_frame(seed, d, k, m)
    b = frame_bounds(f)
    if not b.is_frame or b.upper > 1e6 * b.lower:
        return
    g = canonical_dual(f)
    assert is_dual_pair(f, g).is_dual
    gb = frame_bounds(g)
    assert gb.lower == pytest.approx(1 / b.upper, rel=1e-8)
    assert gb.upper == pytest.approx(1 / b.lower, rel=1e-8)
    np.testing.assert_allclose(canonical_dual(g).synthesis_matrix, f.synthesis_matrix, atol=1e-7 * np.abs(f.synthesis_matrix).max())
    h = alternative_dual(f, rng.standard_normal((m, f.qs.dim)))
    check = is_dual_pair(f, h)
    assert check.is_dual
    # any dual has lower bound at least 1/B
    assert frame_bounds(h).lower >= 1 / b.upper - 1e-8


def test_alternative_dual_differs_when_redundant(qs, f):
    h = alternative_dual(f, [[1, 0], [0, 0], [0, 0]])
    assert is_dual_pair(f, h).is_dual
    assert not np.allclose(h.synthesis_matrix, canonical_dual(f).synthesis_matrix)
