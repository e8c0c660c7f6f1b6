import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from octqft import tensor as tc
from octqft.errors import NotPositiveDefinite, ShapeMismatch, SingularPairing

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(max_side=4, shape=None):
    side = st.integers(1, max_side)
    shapes = st.tuples(side, side) if shape is None else st.just(shape)
    return shapes.flatmap(
        lambda s: st.tuples(arrays(np.float64, s, elements=finite), arrays(np.float64, s, elements=finite))
    ).map(lambda pair: pair[0] + 1j * pair[1])


def spd(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a.conj().T @ a + n * np.eye(n)


# examples --------------------------------------------------------------------


def test_kron_identity_case():
    assert np.array_equal(tc.tensor_product(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_scalar_case():
    b = np.arange(6).reshape(2, 3)
    assert np.array_equal(tc.tensor_product([[2]], b), 2 * b)


def test_kron_index_formula_by_hand():
    x = np.array([[0, 1], [1, 0]])
    z = np.array([[1, 0], [0, -1]])
    got = tc.tensor_product(x, z)
    # hand index formula: (a (x) b)[i*2+k, j*2+l] = a[i,j] b[k,l]
    expected = np.zeros((4, 4))
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        expected[i * 2 + k, j * 2 + l] = x[i, j] * z[k, l]
    assert np.array_equal(got, expected)
    assert np.array_equal(got[:2, 2:], z) and np.array_equal(got[2:, :2], z)
    assert not got[:2, :2].any()


def test_dual_basis_examples():
    assert np.allclose(tc.dual_basis(tc.Pairing.from_matrix(np.eye(2))), np.eye(2))
    p = tc.Pairing.from_matrix(2 * np.eye(2))
    d = tc.dual_basis(p)
    assert np.allclose(d, 0.5 * np.eye(2))
    for k in range(2):
        for l in range(2):
            assert p(d[:, k], np.eye(2)[:, l]) == pytest.approx(float(k == l))
    with pytest.raises(SingularPairing):
        tc.dual_basis(tc.Pairing.from_matrix([[0, 0], [0, 1]]))


def test_trace_examples():
    assert tc.trace(np.eye(5)) == 5
    assert tc.trace(np.diag([1, -1])) == 0
    assert tc.trace([[1, 2], [3, 4]]) == 5
    with pytest.raises(ShapeMismatch):
        tc.trace(np.ones((2, 3)))


def test_metric_adjoint_examples():
    u = np.array([[0, 1j], [1j, 0]]) / 1.0
    assert np.allclose(tc.metric_adjoint(u, np.eye(2), np.eye(2)), np.linalg.inv(u))
    f = np.array([[1, 1], [0, 1]])
    assert np.allclose(tc.metric_adjoint(f, np.eye(2), np.eye(2)), f.conj().T)
    assert np.allclose(tc.metric_adjoint(np.eye(2), 2 * np.eye(2), np.eye(2)), 0.5 * np.eye(2))


def test_metric_adjoint_rejects_bad_metrics():
    with pytest.raises(NotPositiveDefinite):
        tc.metric_adjoint(np.eye(2), -np.eye(2), np.eye(2))
    with pytest.raises(NotPositiveDefinite):
        tc.metric_adjoint(np.eye(2), [[1, 1], [0, 1]], np.eye(2))
    with pytest.raises(ShapeMismatch):
        tc.metric_adjoint(np.eye(2), np.eye(3), np.eye(2))


def test_dual_map_examples():
    assert np.array_equal(tc.dual_map(np.eye(3)), np.eye(3))
    assert np.array_equal(tc.dual_map([[0, 1], [0, 0]]), [[0, 0], [1, 0]])


def test_swap_matrix_exchanges_factors():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=3), rng.normal(size=2)
    assert np.allclose(tc.swap_matrix(3, 2) @ np.kron(x, y), np.kron(y, x))


def test_nondegeneracy_threshold():
    assert tc.is_nondegenerate(np.eye(64))
    assert not tc.is_nondegenerate(np.diag([1.0, 1e-13]))
    assert tc.is_nondegenerate(np.diag([1.0, 1e-11]))
    assert not tc.is_nondegenerate(np.zeros((2, 2)))
    assert not tc.is_nondegenerate(np.ones((2, 3)))


def test_as_matrix_rejects_non_finite_and_tensors():
    with pytest.raises(ValueError):
        tc.as_matrix([[np.nan]])
    with pytest.raises(ShapeMismatch):
        tc.as_matrix(np.zeros((2, 2, 2)))


# properties ------------------------------------------------------------------


def gaussian_integer_matrices(max_side=3):
    ints = st.integers(-20, 20)
    side = st.integers(1, max_side)
    return st.tuples(side, side).flatmap(
        lambda s: st.tuples(arrays(np.int64, s, elements=ints), arrays(np.int64, s, elements=ints))
    ).map(lambda pair: pair[0] + 1j * pair[1])


@given(gaussian_integer_matrices(), gaussian_integer_matrices(), gaussian_integer_matrices())
def test_tensor_product_associative(a, b, c):
    # integer entries keep every product exact, so this pins the packing alone
    left = tc.tensor_product(tc.tensor_product(a, b), c)
    right = tc.tensor_product(a, tc.tensor_product(b, c))
    assert np.array_equal(left, right)


@given(st.integers(1, 8), st.integers(1, 8))
def test_identity_tensor_identity(m, n):
    assert np.array_equal(tc.tensor_product(tc.identity(m), tc.identity(n)), tc.identity(m * n))


@given(st.integers(1, 5).flatmap(lambda n: complex_matrices(shape=(n, n))))
def test_trace_of_dual_map(f):
    assert tc.trace(tc.dual_map(f)) == pytest.approx(tc.trace(f))


@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda s: complex_matrices(shape=s)))
def test_evaluation_naturality(f):
    """``ev_m (1 (x) f) = ev_n (f^T (x) 1)`` as maps ``C^m (x) C^n -> C``."""
    m, n = f.shape
    lhs = tc.evaluation(m) @ np.kron(tc.identity(m), f)
    rhs = tc.evaluation(n) @ np.kron(tc.dual_map(f), tc.identity(n))
    assert np.allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_metric_adjoint_involutive(m, n, seed):
    rng = np.random.default_rng(seed)
    f = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    g1, g2 = spd(m, rng), spd(n, rng)
    back = tc.metric_adjoint(tc.metric_adjoint(f, g1, g2), g2, g1)
    assert np.allclose(back, f, atol=1e-9)
    # defining identity <f* w, v>_g1 = <w, f v>_g2
    fs = tc.metric_adjoint(f, g1, g2)
    v, w = rng.normal(size=m) + 0j, rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.vdot(fs @ w, g1 @ v) == pytest.approx(np.vdot(w, g2 @ (f @ v)))


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_dual_basis_inverts_pairing(n, seed):
    rng = np.random.default_rng(seed)
    p = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * n * np.eye(n)
    d = tc.dual_basis(tc.Pairing.from_matrix(p))
    assert np.allclose(p.T @ d, np.eye(n), atol=1e-10)


@given(st.lists(st.integers(1, 3), min_size=0, max_size=3))
def test_tensor_all_dims(dims):
    out = tc.tensor_all([tc.identity(d) for d in dims])
    assert out.shape == (int(np.prod(dims)),) * 2
