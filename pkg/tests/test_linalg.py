import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elemop import linalg as la
from elemop.errors import CapacityError, DimensionError, PreconditionError
from elemop.generators import gaussian, hermitian, rng_for, unitary
from elemop.spectrum import Tolerance, hausdorff, multiset_distance

seeds = st.integers(0, 2**32 - 1)


def test_eig_diagonal():
    s = la.eig(np.diag([1.0, 2.0, 3.0]))
    assert multiset_distance(s.values, [1, 2, 3]) == 0


def test_eig_nilpotent():
    s = la.eig([[0, 1], [0, 0]])
    assert multiset_distance(s.values, [0, 0]) == 0


def test_eig_determinant_oracle():
    rng = rng_for(11)
    M = gaussian(rng, 5)
    vals = la.eig(M).values
    assert len(vals) == 5
    for lam in vals:
        # LU-based determinant, independent of the QR iteration
        assert abs(np.linalg.det(M - lam * np.eye(5))) <= 1e-6


def test_eig_rejects_rectangular():
    with pytest.raises(DimensionError):
        la.eig(np.ones((2, 3)))


def test_eig_degenerate_sizes():
    assert len(la.eig(np.zeros((0, 0)))) == 0
    assert la.eig([[5.0]]).values[0] == 5


def test_herm_eig_examples():
    w, U = la.herm_eig(np.eye(3))
    np.testing.assert_array_equal(w, [1, 1, 1])
    w, U = la.herm_eig([[0, 1], [1, 0]])
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_herm_eig_reconstruction():
    H = hermitian(rng_for(3), 7)
    w, U = la.herm_eig(H)
    assert np.all(np.diff(w) >= 0)
    err = np.linalg.norm(U @ np.diag(w) @ U.conj().T - H) / np.linalg.norm(H)
    assert err <= 1e-12
    assert np.linalg.norm(U.conj().T @ U - np.eye(7)) <= 1e-13


def test_herm_eig_rejects_nonhermitian():
    with pytest.raises(PreconditionError):
        la.herm_eig([[0, 1], [0, 0]])


def test_kron_examples():
    np.testing.assert_array_equal(la.kron([[2]], [[3]]), [[6]])
    np.testing.assert_array_equal(la.kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(la.kron(np.diag([1, 2]), np.diag([3, 4])),
                                  np.diag([3, 4, 6, 8]))


def test_kron_index_formula():
    rng = rng_for(5)
    A, B = gaussian(rng, 2, 3), gaussian(rng, 4, 2)
    K = la.kron(A, B)
    for i in range(2):
        for j in range(3):
            for k in range(4):
                for l in range(2):
                    assert abs(K[i * 4 + k, j * 2 + l] - A[i, j] * B[k, l]) <= 1e-15 * 4


def test_kron_cap():
    with pytest.raises(CapacityError):
        la.kron(np.eye(70), np.eye(70))


def test_vec_examples():
    X = np.array([[1, 3], [2, 4]])
    np.testing.assert_array_equal(la.vec(X), [1, 2, 3, 4])
    np.testing.assert_array_equal(la.unvec([1, 2, 3, 4], 2, 2), X)
    with pytest.raises(DimensionError):
        la.unvec([1, 2, 3], 2, 2)


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_vec_trace_inner_product(seed, m, n):
    rng = rng_for(seed)
    X, Y = gaussian(rng, m, n), gaussian(rng, m, n)
    lhs = np.trace(Y.conj().T @ X)
    rhs = np.vdot(la.vec(Y), la.vec(X))
    assert abs(lhs - rhs) <= 1e-13 * np.linalg.norm(X) * np.linalg.norm(Y)
    assert abs(np.linalg.norm(la.vec(X)) - np.linalg.norm(X, "fro")) <= 1e-13 * np.linalg.norm(X)
    np.testing.assert_array_equal(la.unvec(la.vec(X), m, n), X)


@given(seeds, st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_mixed_product(seed, p, q, r):
    rng = rng_for(seed)
    A, C = gaussian(rng, p, q), gaussian(rng, q, r)
    B, D = gaussian(rng, r, p), gaussian(rng, p, q)
    lhs = la.kron(A, B) @ la.kron(C, D)
    rhs = la.kron(A @ C, B @ D)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)


@given(seeds, st.integers(1, 4))
def test_kron_bilinear(seed, n):
    rng = rng_for(seed)
    A1, A2, B = gaussian(rng, n), gaussian(rng, n), gaussian(rng, n)
    a = complex(*rng.standard_normal(2))
    lhs = la.kron(a * A1 + A2, B)
    rhs = a * la.kron(A1, B) + la.kron(A2, B)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)


def test_vec_of_product():
    rng = rng_for(8)
    A, X, B = gaussian(rng, 3), gaussian(rng, 3, 4), gaussian(rng, 4)
    np.testing.assert_allclose(la.vec(A @ X @ B), la.kron(B.T, A) @ la.vec(X), atol=1e-13)


def test_op_norm():
    assert la.op_norm(np.eye(4)) == pytest.approx(1, rel=1e-10)
    assert la.op_norm(np.diag([3, -5])) == pytest.approx(5, rel=1e-10)
    M = gaussian(rng_for(9), 6)
    w, _ = la.herm_eig(M.conj().T @ M)
    assert la.op_norm(M) == pytest.approx(np.sqrt(w.max()), rel=1e-10)


@settings(max_examples=50)
@given(seeds, st.integers(1, 8))
def test_eig_unitary_invariance(seed, n):
    rng = rng_for(seed)
    M, U = gaussian(rng, n), unitary(rng, n)
    d = hausdorff(la.eig(U.conj().T @ M @ U).values, la.eig(M).values)
    assert d <= 1e-9 * la.op_norm(M)


def test_predicates():
    assert la.is_psd(np.diag([1, 0]))
    c = la.commute([[0, 1], [0, 0]], [[0, 0], [1, 0]])
    assert not c
    assert c.residual == pytest.approx(1.0)
    U = unitary(rng_for(1), 5)
    chk = la.is_normal(U, Tolerance(1e-13, 0))
    assert chk and chk.residual <= 1e-13
    assert not la.is_hermitian([[0, 1], [0, 0]])
    assert not la.is_psd(np.diag([1, -1]))
    with pytest.raises(DimensionError):
        la.commute(np.eye(2), np.eye(3))


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_gram_is_psd(seed, n, k):
    C = gaussian(rng_for(seed), n, k)
    assert la.is_psd(C @ C.conj().T)


@given(seeds, st.integers(0, 5), st.integers(0, 5))
def test_matrix_json_roundtrip(seed, m, n):
    M = gaussian(rng_for(seed), m, n)
    back = la.matrix_from_json(json.loads(json.dumps(la.matrix_to_json(M))))
    np.testing.assert_array_equal(back, M)


def test_matrix_json_imag_optional():
    M = la.matrix_from_json({"rows": 1, "cols": 2, "re": [[1.5, -2]]})
    np.testing.assert_array_equal(M, [[1.5, -2]])


def test_as_cmatrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        la.as_cmatrix([[np.nan]])


def test_tolerance():
    t = Tolerance(1e-3, 1e-2)
    assert t.passes(0.011, scale=1.0)
    assert not t.passes(0.012, scale=1.0)
    with pytest.raises(ValueError):
        Tolerance(-1, 0)
