"""C-symmetry, C-skew-symmetry and C-normality of linear operators.

Given a conjugation ``C`` and ``N`` linear, ``N`` is C-normal when the
antilinear operator ``NC`` is antilinearly normal.  :func:`twcnor_battery`
evaluates eleven conditions that are equivalent to this; each one is
checked independently so the equivalence can be audited numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antilinear import AntilinearOp, LinearOp, conjugate_normal_residual
from .conjugation import Conjugation
from .errors import DimensionTooSmall, NotRankOne, NotUnitary, ShapeMismatch
from .numeric import DEFAULT_TOL, Tolerance, fro, is_normal, is_unitary, random_complex

__all__ = [
    "CONDITION_IDS",
    "ClassificationReport",
    "DerivedOperators",
    "as_linear",
    "is_c_symmetric",
    "is_c_skew_symmetric",
    "is_c_normal",
    "twcnor_battery",
    "derived_operators",
    "left_right_normal_check",
    "rank_one",
    "rank_one_c_normal_form_check",
    "build_paper_examples",
    "transport_by_unitary",
    "transport_variants",
]

CONDITION_IDS = (
    "def1",
    "adjoint",
    "cnc",
    "cnstarc",
    "cond5",
    "cond6",
    "cond7",
    "norm8",
    "norm9",
    "commute10",
    "commute11",
)


@dataclass(frozen=True)
class ClassificationReport:
    c_symmetric: bool
    c_skew_symmetric: bool
    c_normal: bool
    normal: bool
    condition_flags: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        """All eleven condition flags agree."""
        return len(set(self.condition_flags.values())) == 1

    def to_dict(self) -> dict:
        return {
            "c_symmetric": self.c_symmetric,
            "c_skew_symmetric": self.c_skew_symmetric,
            "c_normal": self.c_normal,
            "normal": self.normal,
            "condition_flags": dict(self.condition_flags),
            "residuals": dict(self.residuals),
        }


@dataclass(frozen=True)
class DerivedOperators:
    """Real/imaginary splittings and the products ``CNCN``, ``NCNC``.

    ``n_plus``/``n_minus`` split ``CN`` and ``n_upper_plus``/``n_upper_minus``
    split ``NC``; these four are antilinear.  ``n_L`` and ``n_R`` are linear.
    """

    n_plus: AntilinearOp
    n_minus: AntilinearOp
    n_upper_plus: AntilinearOp
    n_upper_minus: AntilinearOp
    n_L: LinearOp
    n_R: LinearOp


def as_linear(n) -> LinearOp:
    return n if isinstance(n, LinearOp) else LinearOp(n)


def _prepare(n, c: Conjugation) -> tuple[LinearOp, AntilinearOp]:
    n = as_linear(n)
    if n.dim != c.dim:
        raise ShapeMismatch(f"operator dimension {n.dim} does not match conjugation dimension {c.dim}")
    return n, c.as_antilinear()


def _identity_residual(a, b) -> tuple[float, float, float]:
    a = getattr(a, "mat", a)
    b = getattr(b, "mat", b)
    return fro(a - b), fro(a), fro(b)


def _check(tol: Tolerance, res: tuple[float, float, float]) -> tuple[bool, float]:
    r, sa, sb = res
    return tol.accepts(r, sa, sb), r


def is_c_symmetric(n, c: Conjugation, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``CNC = N*`` within ``tol``."""
    n, cc = _prepare(n, c)
    return _check(tol, _identity_residual(cc @ n @ cc, n.H))[0]


def is_c_skew_symmetric(n, c: Conjugation, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``CNC = -N*`` within ``tol``."""
    n, cc = _prepare(n, c)
    return _check(tol, _identity_residual(cc @ n @ cc, -n.H))[0]


def is_c_normal(n, c: Conjugation, tol: Tolerance = DEFAULT_TOL) -> bool:
    n, cc = _prepare(n, c)
    return _check(tol, conjugate_normal_residual((n @ cc).mat))[0]


def _antilinear_normal(x: AntilinearOp):
    return conjugate_normal_residual(x.mat)


def _commutator(a: AntilinearOp, b: AntilinearOp):
    return _identity_residual(a @ b, b @ a)


def _sampled_norm_identity(a, b, c: AntilinearOp, tol: Tolerance, samples: int, seed: int):
    """Compare ``||A C h||`` with ``||B h||`` on random ``h``; returns (ok, worst residual)."""
    rng = np.random.default_rng(seed)
    ok = True
    worst = 0.0
    for _ in range(samples):
        h = random_complex(a.dim, rng)
        lhs = np.linalg.norm((a @ c)(h)) ** 2
        rhs = np.linalg.norm(b(h)) ** 2
        r = abs(lhs - rhs)
        worst = max(worst, r)
        ok = ok and tol.accepts(r, lhs, rhs)
    return ok, worst


def twcnor_battery(
    n,
    c: Conjugation,
    tol: Tolerance = DEFAULT_TOL,
    samples: int = 50,
    seed: int = 0,
) -> ClassificationReport:
    """Evaluate all eleven equivalent forms of C-normality for ``N``.

    Conditions ``norm8``/``norm9`` are norm identities over all vectors; they
    are checked both as the equivalent operator identities
    (``C N*N C = NN*`` and ``C NN* C = N*N``) and on ``samples`` seeded random
    vectors, and pass only when both agree.
    """
    n, cc = _prepare(n, c)
    ns = n.H
    nn_star = n @ ns
    ns_n = ns @ n
    cnc = cc @ n @ cc
    cnsc = cc @ ns @ cc
    d = derived_operators(n, c)

    checks = {
        "def1": _antilinear_normal(n @ cc),
        "adjoint": _antilinear_normal(ns @ cc),
        "cnc": _antilinear_normal(cnc @ cc),
        "cnstarc": _antilinear_normal(cnsc @ cc),
        "cond5": _identity_residual(cc @ nn_star, ns_n @ cc),
        "cond6": _identity_residual(cc @ ns_n, nn_star @ cc),
        "cond7": _antilinear_normal(cc @ n),
        "commute10": _commutator(d.n_plus, d.n_minus),
        "commute11": _commutator(d.n_upper_plus, d.n_upper_minus),
    }
    flags = {}
    residuals = {}
    for key, res in checks.items():
        flags[key], residuals[key] = _check(tol, res)

    ok8, r8 = _check(tol, _identity_residual(cc @ ns_n @ cc, nn_star))
    s8, w8 = _sampled_norm_identity(n, ns, cc, tol, samples, seed)
    ok9, r9 = _check(tol, _identity_residual(cc @ nn_star @ cc, ns_n))
    s9, w9 = _sampled_norm_identity(ns, n, cc, tol, samples, seed + 1)
    flags["norm8"], residuals["norm8"] = ok8 and s8, max(r8, w8)
    flags["norm9"], residuals["norm9"] = ok9 and s9, max(r9, w9)

    flags = {key: bool(flags[key]) for key in CONDITION_IDS}
    residuals = {key: float(residuals[key]) for key in CONDITION_IDS}
    return ClassificationReport(
        c_symmetric=_check(tol, _identity_residual(cnc, ns))[0],
        c_skew_symmetric=_check(tol, _identity_residual(cnc, -ns))[0],
        c_normal=flags["def1"],
        normal=is_normal(n.mat, tol),
        condition_flags=flags,
        residuals=residuals,
    )


def derived_operators(n, c: Conjugation) -> DerivedOperators:
    n, cc = _prepare(n, c)
    cn = cc @ n
    nsc = n.H @ cc
    nc = n @ cc
    cns = cc @ n.H
    return DerivedOperators(
        n_plus=0.5 * (cn + nsc),
        n_minus=0.5 * (cn - nsc),
        n_upper_plus=0.5 * (nc + cns),
        n_upper_minus=0.5 * (nc - cns),
        n_L=cn @ cn,
        n_R=nc @ nc,
    )


def left_right_normal_check(n, c: Conjugation, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, bool, bool]:
    """Normality of ``CNCN`` and ``NCNC`` together with C-normality of ``N``.

    C-normality implies both products are normal; the converse fails.
    """
    d = derived_operators(n, c)
    return is_normal(d.n_L.mat, tol), is_normal(d.n_R.mat, tol), is_c_normal(n, c, tol)


def rank_one(h, g) -> LinearOp:
    """``h (x) g : x -> <x, g> h``, i.e. the matrix ``h g*``."""
    h = np.asarray(h, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if h.shape != g.shape or h.ndim != 1:
        raise ShapeMismatch("rank_one needs two vectors of equal length")
    return LinearOp(np.outer(h, g.conj()))


def rank_one_c_normal_form_check(
    n,
    c: Conjugation,
    tol: Tolerance = DEFAULT_TOL,
    rank_tol: float = 1e-10,
) -> bool:
    """Whether a rank-one ``N`` is C-normal, decided structurally.

    ``N = h (x) g`` is C-normal exactly when ``g`` is parallel to ``Ch``.
    Raises :class:`NotRankOne` unless exactly one singular value exceeds
    ``rank_tol * sigma_max``.
    """
    n, _ = _prepare(n, c)
    u, s, vh = np.linalg.svd(n.mat)
    if s[0] == 0 or np.count_nonzero(s > rank_tol * s[0]) != 1:
        raise NotRankOne("operator does not have numerical rank one")
    h = u[:, 0] * s[0]
    g = vh[0].conj()
    ch = c(h)
    overlap = abs(np.vdot(ch, g))
    gap = np.linalg.norm(ch) * np.linalg.norm(g) - overlap
    return bool(tol.accepts(gap, np.linalg.norm(ch) * np.linalg.norm(g)))


def build_paper_examples(c: Conjugation | None = None, dim: int = 3) -> tuple[LinearOp, LinearOp]:
    """Rank-two/three operators that are C-normal but neither C-symmetric nor C-skew.

    With an orthonormal basis fixed by ``C`` (``C e_k = e_k``), put
    ``h = (e1 + i e2)/sqrt(2)`` and ``g = e3``, then::

        A1 = h(x)h + h(x)Ch + Ch(x)h - Ch(x)Ch
        A2 = h(x)Ch + g(x)h + 2 g(x)g + 2 Ch(x)h - Ch(x)g

    ``A2`` is moreover not normal.  Without ``c`` the identity conjugation
    on ``C^dim`` (canonical basis) is used.
    """
    if c is None:
        if dim < 3:
            raise DimensionTooSmall("the examples need dim >= 3")
        basis = np.eye(dim, dtype=np.complex128)
        c_apply = np.conj
    else:
        if c.dim < 3:
            raise DimensionTooSmall("the examples need dim >= 3")
        basis = real_basis(c)
        c_apply = c
    e1, e2, e3 = basis[:, 0], basis[:, 1], basis[:, 2]
    h = (e1 + 1j * e2) / np.sqrt(2)
    g = e3
    ch = c_apply(h)
    a1 = rank_one(h, h) + rank_one(h, ch) + rank_one(ch, h) - rank_one(ch, ch)
    a2 = rank_one(h, ch) + rank_one(g, h) + 2 * rank_one(g, g) + 2 * rank_one(ch, h) - rank_one(ch, g)
    return a1, a2


def real_basis(c: Conjugation) -> np.ndarray:
    """Orthonormal basis (as columns) of vectors fixed by ``c``.

    ``M_C`` is symmetric unitary, so its canonical form under unitary
    congruence is the identity: ``U M_C U^t = I`` gives ``M_C = Q Q^t`` with
    ``Q = U*``, and ``C Q e_k = Q e_k``.
    """
    from .canonical import conjugate_normal_canonical

    dec = conjugate_normal_canonical(c.mat)
    return dec.U.conj().T


def transport_by_unitary(n, c: Conjugation, u) -> tuple[LinearOp, Conjugation]:
    """``(UNU*, UCU*)``; the conjugation matrix is ``M_U M_C M_U^t``."""
    n, _ = _prepare(n, c)
    u = _unitary(u, n.dim)
    m = u @ c.mat @ u.T
    return LinearOp(u @ n.mat @ u.conj().T), Conjugation(0.5 * (m + m.T), kind="custom")


def transport_variants(n, c: Conjugation, u, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, bool]:
    """C-normality of ``U* N C U C`` and of ``U* C N U C``."""
    n, cc = _prepare(n, c)
    u = LinearOp(_unitary(u, n.dim))
    first = u.H @ n @ cc @ u @ cc
    second = u.H @ cc @ n @ u @ cc
    return is_c_normal(first, c, tol), is_c_normal(second, c, tol)


def _unitary(u, dim: int) -> np.ndarray:
    u = np.asarray(getattr(u, "mat", u), dtype=np.complex128)
    if u.shape != (dim, dim):
        raise ShapeMismatch(f"unitary has shape {u.shape}, expected {(dim, dim)}")
    if not is_unitary(u):
        raise NotUnitary("transport requires a unitary matrix")
    return u
