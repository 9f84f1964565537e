"""Conjugations (antilinear isometric involutions) on C^n.

A conjugation is held as the symmetric unitary matrix ``M`` with
``C x = M @ conj(x)``.
"""

from __future__ import annotations

import numpy as np

from .antilinear import AntilinearOp
from .errors import InvalidConjugation, InvalidInput, ShapeMismatch
from .numeric import DEFAULT_TOL, Tolerance, approx_eq, as_matrix, haar_unitary, is_unitary

__all__ = [
    "Conjugation",
    "build_conjugation",
    "validate_conjugation",
    "apply_conjugation",
    "flip_matrix",
    "random_conjugation",
]

KINDS = ("identity", "flip", "xi_theta", "custom")


class Conjugation:
    """Validated conjugation; ``kind``/``xi``/``theta`` record its origin."""

    __slots__ = ("mat", "kind", "xi", "theta")

    def __init__(self, mat, kind="custom", xi=None, theta=None, tol: Tolerance = DEFAULT_TOL):
        m = as_matrix(mat, square=True)
        if not validate_conjugation(m, tol):
            raise InvalidConjugation("matrix is not symmetric unitary (C^2 = I and isometry fail)")
        m.setflags(write=False)
        for name, value in (("mat", m), ("kind", kind), ("xi", xi), ("theta", theta)):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("Conjugation is immutable")

    def __repr__(self):
        return f"Conjugation(kind={self.kind!r}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def as_antilinear(self) -> AntilinearOp:
        return AntilinearOp(self.mat)

    def __call__(self, v):
        return apply_conjugation(self, v)

    def __matmul__(self, other):
        return self.as_antilinear() @ other

    def __rmatmul__(self, other):
        return other @ self.as_antilinear()


def flip_matrix(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.complex128))


def build_conjugation(kind: str, dim: int, xi: float = 0.0, theta: float = 0.0, matrix=None) -> Conjugation:
    """Construct one of the built-in conjugations on C^dim.

    ``xi_theta`` is the restriction of ``f(z) -> e^{i xi} conj(f(e^{i theta} conj z))``
    to span{1, z, ..., z^{dim-1}}; it acts diagonally,
    ``e_k -> e^{i xi} e^{-i k theta} e_k``.
    """
    if dim < 1:
        raise InvalidInput("dim must be >= 1")
    if kind == "identity":
        return Conjugation(np.eye(dim), kind="identity")
    if kind == "flip":
        return Conjugation(flip_matrix(dim), kind="flip")
    if kind == "xi_theta":
        k = np.arange(dim)
        diag = np.exp(1j * xi) * np.exp(-1j * k * theta)
        return Conjugation(np.diag(diag), kind="xi_theta", xi=float(xi), theta=float(theta))
    if kind == "custom":
        if matrix is None:
            raise InvalidInput("custom conjugation needs a matrix")
        m = as_matrix(matrix, square=True)
        if m.shape[0] != dim:
            raise ShapeMismatch(f"custom matrix has dimension {m.shape[0]}, expected {dim}")
        return Conjugation(m, kind="custom")
    raise InvalidInput(f"unknown conjugation kind {kind!r}")


def validate_conjugation(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_matrix(m, square=True)
    return is_unitary(m, tol) and approx_eq(m @ m.conj(), np.eye(m.shape[0]), tol)


def apply_conjugation(c: Conjugation, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != c.dim:
        raise ShapeMismatch(f"vector length {v.shape[0]} does not match dimension {c.dim}")
    return c.mat @ v.conj()


def random_conjugation(dim: int, rng: np.random.Generator) -> Conjugation:
    """``Q Q^t`` for Haar ``Q``; every symmetric unitary has this form."""
    q = haar_unitary(dim, rng)
    m = q @ q.T
    return Conjugation(0.5 * (m + m.T), kind="custom")
