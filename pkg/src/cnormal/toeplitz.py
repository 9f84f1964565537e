"""Toeplitz operators on H^2 and the conjugations C_{xi,theta}.

Everything here works on Fourier coefficients.  ``C_{xi,theta}`` acts on
``H^2`` by ``f(z) -> e^{i xi} conj(f(e^{i theta} conj z))``, i.e. diagonally
on the monomials: ``z^k -> e^{i xi} e^{-i k theta} z^k``.

Decisions about C-normality of ``T_phi`` are made on coefficients, never on
finite sections: a finite section of a C-normal Toeplitz operator need not be
C-normal.  Sections are used only for identities that are exactly local.

Symbols may be truncated Laurent series; ``tail_bound`` bounds the l1 mass
of the omitted coefficients and is propagated into every residual.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import EtaNotUnimodular, InvalidParameter, SectionTooSmall, ShapeMismatch
from .numeric import DEFAULT_TOL, Tolerance, as_matrix

__all__ = [
    "Symbol",
    "ToeplitzReport",
    "toeplitz_section",
    "conjugated_section",
    "classify_symbol_symmetry",
    "find_eta",
    "phi_sim",
    "warunek1_residual",
    "warunek2_coefficients",
    "warunek2_residual",
    "warunek2_tail_bound",
    "is_c_normal_toeplitz",
    "bh_delta_check",
    "paper_example_symbol",
]


@dataclass(frozen=True)
class Symbol:
    """Laurent coefficients ``k -> phi^(k)`` on a finite window."""

    coeffs: dict = field(default_factory=dict)
    tail_bound: float = 0.0

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.coeffs).items():
            v = complex(v)
            if not cmath.isfinite(v):
                raise InvalidParameter("symbol coefficients must be finite")
            if v != 0:
                clean[int(k)] = v
        if self.tail_bound < 0:
            raise InvalidParameter("tail_bound must be non-negative")
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    @property
    def window(self) -> int:
        """Largest ``|k|`` with a stored coefficient."""
        return max((abs(k) for k in self.coeffs), default=0)

    @property
    def analytic_window(self) -> int:
        return max((k for k in self.coeffs if k > 0), default=0)

    @property
    def coanalytic_window(self) -> int:
        return max((-k for k in self.coeffs if k < 0), default=0)

    def plus(self) -> "Symbol":
        """Analytic part ``phi_+`` (coefficients with k >= 1)."""
        return Symbol({k: v for k, v in self.coeffs.items() if k >= 1}, self.tail_bound)

    def minus(self) -> "Symbol":
        """Coanalytic part ``phi_-`` (coefficients with k <= -1)."""
        return Symbol({k: v for k, v in self.coeffs.items() if k <= -1}, self.tail_bound)

    def conjugate(self) -> "Symbol":
        """Symbol of the pointwise conjugate function: ``k -> conj(phi^(-k))``."""
        return Symbol({-k: v.conjugate() for k, v in self.coeffs.items()}, self.tail_bound)

    def scaled(self, c: complex) -> "Symbol":
        return Symbol({k: c * v for k, v in self.coeffs.items()}, abs(c) * self.tail_bound)

    def analytic_array(self, length: int | None = None) -> np.ndarray:
        """``[phi^(1), ..., phi^(K)]``."""
        length = self.analytic_window if length is None else length
        return np.array([self[k] for k in range(1, length + 1)], dtype=np.complex128)


@dataclass(frozen=True)
class ToeplitzReport:
    c_symmetric: bool
    c_skew_symmetric: bool
    c_normal: bool
    eta: complex | None
    residual_w1: float
    residual_w2: float
    tail_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "c_symmetric": self.c_symmetric,
            "c_skew_symmetric": self.c_skew_symmetric,
            "c_normal": self.c_normal,
            "eta": None if self.eta is None else [self.eta.real, self.eta.imag],
            "residual_w1": self.residual_w1,
            "residual_w2": self.residual_w2,
            "tail_bound": self.tail_bound,
        }


def toeplitz_section(sym: Symbol, n: int) -> np.ndarray:
    """``n x n`` matrix with entry ``(l, k) = phi^(l - k)``."""
    if n < 1:
        raise InvalidParameter("section size must be >= 1")
    col = [sym[j] for j in range(n)]
    row = [sym[-j] for j in range(n)]
    return scipy.linalg.toeplitz(np.array(col, dtype=np.complex128), np.array(row, dtype=np.complex128))


def _phase(m: int, theta: float) -> complex:
    return cmath.exp(1j * (m * theta))


def conjugated_section(a, xi: float, theta: float) -> np.ndarray:
    """Matrix of ``C_{xi,theta} T C_{xi,theta}`` from that of ``T``.

    Entry ``(l, k)`` is ``e^{i(k-l) theta} conj(a_lk)``; ``xi`` cancels.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("conjugated_section needs a square matrix")
    n = a.shape[0]
    idx = np.arange(n)
    diff = idx[None, :] - idx[:, None]
    return np.exp(1j * (diff * theta)) * a.conj()


def _zero_threshold(sym: Symbol, tol: Tolerance) -> float:
    scale = max((abs(v) for v in sym.coeffs.values()), default=0.0)
    return tol.abs_tol + tol.rel_tol * scale


def classify_symbol_symmetry(sym: Symbol, theta: float, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, bool]:
    """``(C-symmetric, C-skew-symmetric)`` for ``T_phi`` and ``C_{xi,theta}``.

    Symmetric: ``phi^(-k) = e^{ik theta} phi^(k)`` for all k.
    Skew: ``phi^(-k) = -e^{ik theta} phi^(k)`` for all k, which at ``k = 0``
    forces ``phi^(0) = 0`` for every ``theta``.
    """
    thr = _zero_threshold(sym, tol) + sym.tail_bound
    window = sym.window
    sym_ok = True
    skew_ok = abs(sym[0]) <= thr
    for k in range(1, window + 1):
        p = _phase(k, theta) * sym[k]
        sym_ok = sym_ok and abs(sym[-k] - p) <= thr
        skew_ok = skew_ok and abs(sym[-k] + p) <= thr
    return bool(sym_ok), bool(skew_ok)


def find_eta(sym: Symbol, theta: float, tol: Tolerance = DEFAULT_TOL) -> complex | None:
    """Unimodular ``eta`` with ``phi^(-k) = eta e^{ik theta} phi^(k)`` for k >= 1.

    ``eta`` is read off the smallest ``k0 >= 1`` with ``phi^(k0) != 0``, then
    verified on every coefficient of the window (a vanishing ``phi^(k)`` forces
    ``phi^(-k) = 0``).  Returns ``None`` when no such ``eta`` exists, and
    ``1`` when both ``phi_+`` and ``phi_-`` vanish.
    """
    thr = _zero_threshold(sym, tol) + sym.tail_bound
    window = sym.window
    k0 = next((k for k in range(1, window + 1) if abs(sym[k]) > thr), None)
    if k0 is None:
        if all(abs(sym[-k]) <= thr for k in range(1, window + 1)):
            return 1 + 0j
        return None
    eta = sym[-k0] / (_phase(k0, theta) * sym[k0])
    if abs(abs(eta) - 1) > max(tol.abs_tol, thr / abs(sym[k0])):
        return None
    if warunek1_residual(sym, theta, eta) > thr * max(1.0, np.sqrt(window)):
        return None
    return complex(eta)


def warunek1_residual(sym: Symbol, theta: float, eta: complex) -> float:
    """Largest ``|phi^(-k) - eta e^{ik theta} phi^(k)|`` over k >= 1 in the window."""
    return max(
        (abs(sym[-k] - eta * _phase(k, theta) * sym[k]) for k in range(1, sym.window + 1)),
        default=0.0,
    )


def phi_sim(sym: Symbol, xi: float, theta: float) -> Symbol:
    """``z -> conj(phi_+(e^{i theta} conj z))``: coefficients ``conj(phi^(k)) e^{-ik theta}``, k >= 1.

    ``xi`` does not enter; it is accepted to mirror ``C_{xi,theta}``.
    """
    return Symbol(
        {k: sym[k].conjugate() * _phase(-k, theta) for k in range(1, sym.analytic_window + 1)},
        sym.tail_bound,
    )


def _c_plus(sym: Symbol, xi: float, theta: float) -> np.ndarray:
    """Coefficients 1..K of ``C_{xi,theta} phi_+``."""
    a = sym.analytic_array()
    k = np.arange(1, len(a) + 1)
    return np.exp(1j * xi) * a.conj() * np.exp(-1j * (k * theta))


def warunek2_coefficients(sym: Symbol, xi: float, theta: float, eta: complex) -> np.ndarray:
    """Coefficients (degrees 1..2K) of

    ``(eta - conj eta) phi_+ C phi_+ + conj(phi^(0)) (eta - 1) e^{i xi} phi_+
    - phi^(0) (conj eta - 1) C phi_+``.
    """
    a = sym.analytic_array()
    c = _c_plus(sym, xi, theta)
    kmax = len(a)
    out = np.zeros(2 * kmax, dtype=np.complex128)
    if kmax == 0:
        return out
    # product of two series starting at degree 1 starts at degree 2
    prod = np.convolve(a, c)
    out[1 : 1 + len(prod)] += (eta - eta.conjugate()) * prod
    p0 = sym[0]
    out[:kmax] += p0.conjugate() * (eta - 1) * np.exp(1j * xi) * a
    out[:kmax] -= p0 * (eta.conjugate() - 1) * c
    return out


def warunek2_tail_bound(sym: Symbol, eta: complex) -> float:
    """l2 error bound on :func:`warunek2_coefficients` caused by the omitted tail."""
    tau = sym.tail_bound
    if tau == 0:
        return 0.0
    l1 = float(np.sum(np.abs(sym.analytic_array())))
    p0 = abs(sym[0])
    return (
        abs(eta - eta.conjugate()) * (2 * l1 * tau + tau * tau)
        + p0 * abs(eta - 1) * tau
        + p0 * abs(eta.conjugate() - 1) * tau
    )


def warunek2_residual(sym: Symbol, xi: float, theta: float, eta: complex, tol: Tolerance = DEFAULT_TOL) -> float:
    """l2 norm of :func:`warunek2_coefficients`."""
    eta = complex(eta)
    if abs(abs(eta) - 1) > tol.abs_tol:
        raise EtaNotUnimodular(f"|eta| = {abs(eta)} is not 1")
    return float(np.linalg.norm(warunek2_coefficients(sym, xi, theta, eta)))


def is_c_normal_toeplitz(sym: Symbol, xi: float, theta: float, tol: Tolerance = DEFAULT_TOL) -> ToeplitzReport:
    """Decide C_{xi,theta}-normality of ``T_phi`` from the symbol.

    ``T_phi`` is C-normal iff some unimodular ``eta`` satisfies
    ``phi^(-k) = eta e^{ik theta} phi^(k)`` (k >= 1) and the analytic
    identity checked by :func:`warunek2_residual` holds.
    """
    c_sym, c_skew = classify_symbol_symmetry(sym, theta, tol)
    eta = find_eta(sym, theta, tol)
    plus = sym.analytic_array()
    scale = max(1.0, float(np.linalg.norm(plus)) ** 2, abs(sym[0]) * float(np.linalg.norm(plus)))
    if eta is None:
        k0 = next((k for k in range(1, sym.window + 1) if sym[k] != 0), None)
        trial = 1 + 0j if k0 is None else sym[-k0] / (_phase(k0, theta) * sym[k0])
        w1 = warunek1_residual(sym, theta, trial)
        return ToeplitzReport(c_sym, c_skew, False, None, float(w1), float("nan"), sym.tail_bound)
    w1 = warunek1_residual(sym, theta, eta)
    w2 = warunek2_residual(sym, xi, theta, eta / abs(eta), tol)
    bound = warunek2_tail_bound(sym, eta)
    ok = w2 <= tol.abs_tol + tol.rel_tol * scale + bound
    return ToeplitzReport(c_sym, c_skew, bool(ok), complex(eta), float(w1), float(w2), sym.tail_bound)


def bh_delta_check(phi: Symbol, psi: Symbol, k: int, l: int, n: int) -> tuple[complex, complex]:
    """Both sides of the Brown-Halmos shift identity for ``T_phi T_psi``.

    ``lhs = <T_phi T_psi e_{k+1}, e_{l+1}> - <T_phi T_psi e_k, e_l>`` from
    ``n x n`` sections and ``rhs = phi^(l+1) psi^(-k-1)``.  The sections are
    exact when ``n`` exceeds ``max(k, l) + 1`` plus the symbol windows.
    """
    if phi.tail_bound or psi.tail_bound:
        raise InvalidParameter("bh_delta_check needs exactly supported symbols")
    need = max(k, l) + 1 + min(psi.analytic_window, phi.coanalytic_window)
    if n <= need:
        raise SectionTooSmall(f"section size {n} must exceed {need}")
    prod = toeplitz_section(phi, n) @ toeplitz_section(psi, n)
    lhs = prod[l + 1, k + 1] - prod[l, k]
    rhs = phi[l + 1] * psi[-k - 1]
    return complex(lhs), complex(rhs)


def paper_example_symbol(s: float, K: int) -> Symbol:
    """Window ``[-K, K]`` of ``-s conj z/(1 - i s conj z) + (1+i)/2 + i s z/(1 - i s z)``.

    Coefficients: ``(is)^k`` for k >= 1, ``-s (is)^{k-1}`` at ``-k``, and
    ``(1+i)/2`` at 0; the omitted tail has l1 mass ``2|s|^{K+1}/(1-|s|)``.
    """
    if not abs(s) < 1:
        raise InvalidParameter("|s| must be < 1")
    if K < 1:
        raise InvalidParameter("K must be >= 1")
    coeffs = {0: 0.5 + 0.5j}
    for k in range(1, K + 1):
        coeffs[k] = (1j * s) ** k
        coeffs[-k] = -s * (1j * s) ** (k - 1)
    return Symbol(coeffs, 2 * abs(s) ** (K + 1) / (1 - abs(s)))
