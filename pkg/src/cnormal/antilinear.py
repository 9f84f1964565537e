"""Matrix calculus for linear and antilinear operators on C^n.

An antilinear operator ``X`` is stored through its representation matrix
``M_X`` in the canonical basis, acting as ``x -> M_X @ conj(x)``.  The
composition rules are

==========================  ==================  ===================
expression                  kind                matrix
==========================  ==================  ===================
``X @ T``  (anti, lin)      antilinear          ``M_X conj(M_T)``
``T @ X``  (lin, anti)      antilinear          ``M_T M_X``
``X @ Y``  (anti, anti)     linear              ``M_X conj(M_Y)``
``S @ T``  (lin, lin)       linear              ``M_S M_T``
==========================  ==================  ===================

and the antilinear adjoint is the transpose, ``M_{X#} = M_X^t``.

The literature spells "antilinearly normal" in several ways (antylinearly,
antilineary); all refer to ``X X# = X# X``.
"""

from __future__ import annotations

import numbers

import numpy as np

from .errors import ShapeMismatch
from .numeric import DEFAULT_TOL, Tolerance, as_matrix, dagger, fro

__all__ = [
    "LinearOp",
    "AntilinearOp",
    "compose",
    "sharp",
    "apply_antilinear",
    "is_conjugate_normal",
    "conjugate_normal_residual",
    "is_antilinearly_normal",
]


class _Op:
    __slots__ = ("mat",)

    def __init__(self, mat):
        m = as_matrix(mat, square=True)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"

    def __matmul__(self, other):
        if isinstance(other, _Op):
            return compose(self, other)
        return NotImplemented

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_dims(self, other)
        return type(self)(self.mat + other.mat)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_dims(self, other)
        return type(self)(self.mat - other.mat)

    def __neg__(self):
        return type(self)(-self.mat)


class LinearOp(_Op):
    """Linear operator with its standard matrix."""

    __slots__ = ()

    @property
    def H(self) -> "LinearOp":
        return LinearOp(dagger(self.mat))

    def __call__(self, v):
        v = _vector(v, self.dim)
        return self.mat @ v

    def __mul__(self, scalar):
        if isinstance(scalar, numbers.Number):
            return LinearOp(scalar * self.mat)
        return NotImplemented

    __rmul__ = __mul__


class AntilinearOp(_Op):
    """Antilinear operator ``x -> mat @ conj(x)``."""

    __slots__ = ()

    @property
    def sharp(self) -> "AntilinearOp":
        return AntilinearOp(self.mat.T)

    def __call__(self, v):
        return apply_antilinear(self, v)

    def __mul__(self, scalar):
        # (lambda X) x = lambda * X x, so the matrix scales by lambda.
        if isinstance(scalar, numbers.Number):
            return AntilinearOp(scalar * self.mat)
        return NotImplemented

    __rmul__ = __mul__


def _check_dims(a: _Op, b: _Op):
    if a.dim != b.dim:
        raise ShapeMismatch(f"operator dimensions differ: {a.dim} vs {b.dim}")


def _vector(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != n:
        raise ShapeMismatch(f"vector length {v.shape[0]} does not match dimension {n}")
    return v


def compose(left: _Op, right: _Op) -> _Op:
    """Return ``left o right`` with the kind fixed by the dispatch table."""
    _check_dims(left, right)
    if isinstance(left, AntilinearOp):
        mat = left.mat @ right.mat.conj()
        return LinearOp(mat) if isinstance(right, AntilinearOp) else AntilinearOp(mat)
    mat = left.mat @ right.mat
    return AntilinearOp(mat) if isinstance(right, AntilinearOp) else LinearOp(mat)


def sharp(x: AntilinearOp) -> AntilinearOp:
    return x.sharp


def apply_antilinear(x: AntilinearOp, v) -> np.ndarray:
    v = _vector(v, x.dim)
    return x.mat @ v.conj()


def conjugate_normal_residual(m) -> tuple[float, float, float]:
    """``(||MM* - conj(M*M)||_F, ||MM*||_F, ||M*M||_F)``."""
    m = as_matrix(m, square=True)
    left = m @ dagger(m)
    right = (dagger(m) @ m).conj()
    return fro(left - right), fro(left), fro(right)


def is_conjugate_normal(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    r, a, b = conjugate_normal_residual(m)
    return tol.accepts(r, a, b)


def is_antilinearly_normal(x: AntilinearOp, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_conjugate_normal(x.mat, tol)
