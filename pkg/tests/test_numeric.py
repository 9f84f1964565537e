import numpy as np
import pytest

from cnormal.errors import InvalidInput, NotHermitian, NotNormal, ShapeMismatch
from cnormal.numeric import (
    Tolerance,
    approx_eq,
    as_matrix,
    eig_hermitian,
    eig_normal,
    haar_unitary,
    is_normal,
    is_unitary,
    random_complex,
)


def test_tolerance_scales_with_norm():
    tol = Tolerance(1e-10, 1e-10)
    assert tol.bound(0.5) == pytest.approx(2e-10)
    assert tol.bound(100.0) == pytest.approx(1e-10 + 1e-8)
    assert tol.accepts(5e-9, 100.0)
    assert not tol.accepts(5e-9, 1.0)


def test_tolerance_rejects_nonpositive():
    with pytest.raises(InvalidInput):
        Tolerance(0.0, 1e-10)


def test_as_matrix_validation():
    with pytest.raises(ShapeMismatch):
        as_matrix(np.ones(3))
    with pytest.raises(ShapeMismatch):
        as_matrix(np.ones((2, 3)), square=True)
    with pytest.raises(InvalidInput):
        as_matrix([[np.nan, 0], [0, 1]])


def test_approx_eq_relative():
    a = 1e6 * np.eye(2)
    assert approx_eq(a, a + 1e-6)
    assert not approx_eq(np.eye(2), np.eye(2) + 1e-6)


def test_eig_hermitian_descending(rng):
    a = random_complex((5, 5), rng)
    h = a + a.conj().T
    w, v = eig_hermitian(h)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h)
    with pytest.raises(NotHermitian):
        eig_hermitian(a)


def test_eig_normal_degenerate_cluster(rng):
    # repeated eigenvalue: eigenvectors must still be orthonormal
    u = haar_unitary(4, rng)
    b = u @ np.diag([2j, 2j, -1, 3]) @ u.conj().T
    w, v = eig_normal(b)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    assert np.allclose(b @ v, v * w, atol=1e-12)
    assert w[0] == pytest.approx(3)
    with pytest.raises(NotNormal):
        eig_normal(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("n", [1, 2, 7])
def test_haar_unitary(n, rng):
    u = haar_unitary(n, rng)
    assert is_unitary(u)


def test_is_normal():
    assert is_normal(np.diag([1, 2j]))
    assert not is_normal(np.array([[0, 1], [0, 0]]))
