import numpy as np
import pytest
from hypothesis import given

from cnormal.antilinear import (
    AntilinearOp,
    LinearOp,
    compose,
    conjugate_normal_residual,
    is_antilinearly_normal,
    is_conjugate_normal,
    sharp,
)
from cnormal.errors import ShapeMismatch
from cnormal.numeric import haar_unitary, random_complex

from strategies import dims, seeds


def _ops(n, seed):
    rng = np.random.default_rng(seed)
    return (
        random_complex((n, n), rng),
        random_complex((n, n), rng),
        random_complex(n, rng),
        random_complex(n, rng),
    )


@given(dims, seeds)
def test_composition_matches_sequential_application(n, seed):
    # oracle: apply the factors one after the other to a vector
    a, b, v, _ = _ops(n, seed)
    for left in (LinearOp(a), AntilinearOp(a)):
        for right in (LinearOp(b), AntilinearOp(b)):
            prod = left @ right
            assert np.allclose(prod(v), left(right(v)))
            expect_linear = isinstance(left, AntilinearOp) == isinstance(right, AntilinearOp)
            assert isinstance(prod, LinearOp) == expect_linear


@given(dims, seeds)
def test_sharp_is_antilinear_adjoint(n, seed):
    # <Xx, y> = conj(<x, X# y>)
    a, _, x, y = _ops(n, seed)
    op = AntilinearOp(a)
    assert np.isclose(np.vdot(y, op(x)), np.vdot(sharp(op)(y), x).conjugate())
    assert np.array_equal(op.sharp.sharp.mat, op.mat)


@given(dims, seeds)
def test_antilinearity(n, seed):
    a, _, x, y = _ops(n, seed)
    op = AntilinearOp(a)
    lam = 0.3 - 1.7j
    assert np.allclose(op(lam * x + y), np.conj(lam) * op(x) + op(y))
    assert np.allclose((lam * op)(x), lam * op(x))


def test_dispatch_table_examples():
    m = np.array([[1, 1j], [0, 2]])
    x = AntilinearOp(m)
    t = LinearOp(np.diag([1j, 1]))
    assert np.allclose(compose(x, t).mat, m @ np.diag([-1j, 1]))
    assert np.allclose(compose(t, x).mat, np.diag([1j, 1]) @ m)
    assert isinstance(x @ x, LinearOp)
    assert np.allclose((x @ x).mat, m @ m.conj())


def test_dimension_mismatch():
    with pytest.raises(ShapeMismatch):
        LinearOp(np.eye(2)) @ AntilinearOp(np.eye(3))
    with pytest.raises(ShapeMismatch):
        LinearOp(np.eye(2))(np.ones(3))


def test_immutable():
    op = LinearOp(np.eye(2))
    with pytest.raises(AttributeError):
        op.mat = np.zeros((2, 2))
    with pytest.raises(ValueError):
        op.mat[0, 0] = 5


def test_conjugate_normal_examples(rng):
    assert is_conjugate_normal(np.eye(3))
    # complex symmetric matrices are conjugate-normal: M M* = conj(M* M)
    a = random_complex((4, 4), rng)
    assert is_conjugate_normal(a + a.T)
    assert is_conjugate_normal(a - a.T)
    # unitary matrices too
    assert is_conjugate_normal(haar_unitary(4, rng))
    assert not is_conjugate_normal(np.array([[0, 1], [0, 0]]))


def test_conjugate_normal_residual_and_operator_form(rng):
    a = random_complex((3, 3), rng)
    r, left, right = conjugate_normal_residual(a)
    assert r > 0.1 and left > 0 and right > 0
    assert is_antilinearly_normal(AntilinearOp(a + a.T))
