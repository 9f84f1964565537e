"""Dense complex matrix helpers and the tolerance policy.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Predicates
accept an optional :class:`Tolerance`; a residual ``r`` measured against
operands of Frobenius norms ``a, b, ...`` passes when

    r <= abs_tol + rel_tol * max(1, a, b, ...)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .errors import (
    ConvergenceFailure,
    InvalidInput,
    NotHermitian,
    NotNormal,
    ShapeMismatch,
)

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "fro",
    "dagger",
    "approx_eq",
    "is_unitary",
    "is_normal",
    "eig_hermitian",
    "eig_normal",
    "haar_unitary",
    "random_complex",
]


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidInput("tolerances must be strictly positive")

    def bound(self, *scales: float) -> float:
        return self.abs_tol + self.rel_tol * max(1.0, *scales)

    def accepts(self, residual: float, *scales: float) -> bool:
        return residual <= self.bound(*scales)


DEFAULT_TOL = Tolerance()


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (a fresh copy)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("matrix entries must be finite")
    return m


def fro(a) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def _residual(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    return fro(a - b), fro(a), fro(b)


def approx_eq(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    r, na, nb = _residual(a, b)
    return tol.accepts(r, na, nb)


def is_unitary(u, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``U*U = I`` within ``tol``."""
    u = as_matrix(u, square=True)
    return approx_eq(dagger(u) @ u, np.eye(u.shape[0]), tol)


def is_normal(b, tol: Tolerance = DEFAULT_TOL) -> bool:
    b = as_matrix(b, square=True)
    return approx_eq(b @ dagger(b), dagger(b) @ b, tol)


def _descending(values: np.ndarray) -> np.ndarray:
    # lexsort keys are applied last-first: real part is primary.
    return np.lexsort((-values.imag, -values.real))


def eig_hermitian(h, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition ``H = V diag(w) V*`` with ``w`` descending."""
    h = as_matrix(h, square=True)
    if not approx_eq(h, dagger(h), tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    h = 0.5 * (h + dagger(h))
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def eig_normal(b, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Unitary diagonalisation of a normal matrix via the complex Schur form.

    For normal ``B`` the Schur factor is diagonal up to rounding, so the Schur
    vectors are an orthonormal eigenbasis even inside degenerate clusters.
    Eigenvalues are ordered descending by real part, then imaginary part.
    """
    b = as_matrix(b, square=True)
    if not is_normal(b, tol):
        raise NotNormal("matrix is not normal within tolerance")
    try:
        t, z = scipy.linalg.schur(b, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    w = np.diag(t).copy()
    order = _descending(w)
    return w[order], z[:, order]


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Gaussian with phase fix)."""
    if n == 1:
        phase = rng.uniform(0.0, 2 * np.pi)
        return np.array([[np.exp(1j * phase)]])
    return np.asarray(unitary_group.rvs(n, random_state=rng), dtype=np.complex128)


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
