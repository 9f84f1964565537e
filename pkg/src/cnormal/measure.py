"""Multiplication and composition operators on discrete measure spaces.

Points carry string ids and strictly positive weights.  Weights given as
integers or ``"a/b"`` strings are kept as :class:`fractions.Fraction`, so
every criterion on such spaces is decided in exact arithmetic.

A space is either *finite* (``L^2`` of the listed points) or a *window* onto
a countable space: ``points`` is the visible window and ``interior`` the set
of points whose neighbourhood (images and preimages under the maps in play)
stays inside the window.  Sparse operators on windows work on finitely
supported vectors and raise :class:`BoundaryLeak` instead of truncating.

Vectors are plain dicts ``id -> value`` holding function values (not
coefficients in the orthonormal basis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain
from typing import NamedTuple

import numpy as np

from .antilinear import LinearOp
from .classify import twcnor_battery
from .conjugation import Conjugation
from .errors import BoundaryLeak, InvalidInput, InvalidInvolution, UnboundedDensity
from .numeric import DEFAULT_TOL, Tolerance, is_normal

__all__ = [
    "DiscreteMeasureSpace",
    "PointMap",
    "Density",
    "CompositionReport",
    "MultiplicationReport",
    "validate_involution",
    "radon_nikodym",
    "integral_identity",
    "composition_apply",
    "composition_adjoint_apply",
    "conjugation_apply",
    "composition_matrix",
    "involution_conj",
    "classify_multiplication",
    "classify_composition",
    "ladder_space",
    "interior_checks",
]


def as_weight(w):
    """Exact ``Fraction`` for ints and ``"a/b"`` strings, float otherwise."""
    if isinstance(w, bool):
        raise InvalidInput("weight must be a number")
    if isinstance(w, (int, Fraction)):
        return Fraction(w)
    if isinstance(w, str):
        try:
            return Fraction(w)
        except ValueError as exc:
            raise InvalidInput(f"bad weight {w!r}") from exc
    w = float(w)
    if not math.isfinite(w):
        raise InvalidInput("weights must be finite")
    return w


def _same(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-14)


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    points: tuple
    weights: dict
    interior: frozenset | None = None

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise InvalidInput("duplicate point ids")
        if set(self.weights) != set(pts):
            raise InvalidInput("weights must be given for exactly the listed points")
        weights = {str(p): as_weight(self.weights[p]) for p in pts}
        if any(w <= 0 for w in weights.values()):
            raise InvalidInput("weights must be strictly positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", weights)
        if self.interior is not None:
            interior = frozenset(str(p) for p in self.interior)
            if not interior <= set(pts):
                raise InvalidInput("interior must be a subset of the points")
            object.__setattr__(self, "interior", interior)

    @property
    def is_finite(self) -> bool:
        return self.interior is None

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights.values())

    @property
    def core(self) -> tuple:
        """Points where operators are fully determined, in listing order."""
        if self.interior is None:
            return self.points
        return tuple(p for p in self.points if p in self.interior)

    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def __contains__(self, p) -> bool:
        return p in self.weights

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PointMap:
    """Point map ``x -> map[x]``.

    ``complete`` lists the points whose entire preimage is visible; it
    defaults to every point on finite spaces.
    """

    map: dict
    complete: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "map", {str(k): str(v) for k, v in self.map.items()})
        if self.complete is not None:
            object.__setattr__(self, "complete", frozenset(str(p) for p in self.complete))

    def __call__(self, x: str) -> str:
        return self.map[x]

    def complete_set(self, space: DiscreteMeasureSpace) -> frozenset:
        if self.complete is not None:
            return self.complete
        return frozenset(space.points) if space.is_finite else space.interior

    def preimages(self, space: DiscreteMeasureSpace) -> dict:
        pre = {p: [] for p in space.points}
        for x in space.points:
            y = self.map[x]
            if y in pre:
                pre[y].append(x)
        return pre

    def check_total(self, space: DiscreteMeasureSpace):
        missing = [p for p in space.points if p not in self.map]
        if missing:
            raise InvalidInput(f"map is not defined at {missing[:3]}")
        if space.is_finite:
            outside = [v for v in self.map.values() if v not in space]
            if outside:
                raise InvalidInput(f"map sends points outside the space: {outside[:3]}")


@dataclass(frozen=True)
class Density:
    """Radon-Nikodym density ``h = d(mu o T^-1)/d(mu)`` on the points where it is known."""

    values: dict

    def __getitem__(self, x):
        return self.values[x]

    @property
    def sup(self):
        return max(self.values.values(), default=0)


class CompositionReport(NamedTuple):
    c_normal: bool
    criterion: bool
    normal: bool
    normal_criterion: bool


class MultiplicationReport(NamedTuple):
    c_normal: bool
    criterion: bool


def validate_involution(alpha: PointMap, space: DiscreteMeasureSpace) -> bool:
    """``alpha o alpha = id`` and ``mu o alpha = mu`` on every point."""
    for x in space.points:
        y = alpha.map.get(x)
        if y is None or y not in space:
            return False
        if alpha.map.get(y) != x:
            return False
        if not _same(space.weights[x], space.weights[y], space.exact):
            return False
    return True


def radon_nikodym(t: PointMap, space: DiscreteMeasureSpace, bound=None) -> Density:
    """``h(x) = mu(T^-1{x}) / mu(x)`` at every point with a complete preimage."""
    t.check_total(space)
    pre = t.preimages(space)
    complete = t.complete_set(space)
    h = {}
    for x in space.points:
        if x in complete:
            h[x] = sum((space.weights[y] for y in pre[x]), Fraction(0)) / space.weights[x]
    dens = Density(h)
    if bound is not None and dens.sup > bound:
        raise UnboundedDensity(f"sup h = {dens.sup} exceeds {bound}")
    return dens


def _check_support(f: dict, allowed, what: str):
    bad = [x for x, v in f.items() if v != 0 and x not in allowed]
    if bad:
        raise BoundaryLeak(f"{what} touches points outside the window: {bad[:3]}")


def integral_identity(t: PointMap, space: DiscreteMeasureSpace, f: dict):
    """``(sum f(Tx) mu(x), sum f(x) h(x) mu(x))`` for finitely supported ``f``."""
    _check_support(f, t.complete_set(space), "integrand")
    h = radon_nikodym(t, space)
    lhs = sum((f.get(t(x), 0) * space.weights[x] for x in space.points), Fraction(0))
    rhs = sum((v * h[x] * space.weights[x] for x, v in f.items() if v != 0), Fraction(0))
    return lhs, rhs


def composition_apply(t: PointMap, space: DiscreteMeasureSpace, f: dict) -> dict:
    """``C_T f = f o T`` (sparse)."""
    _check_support(f, t.complete_set(space), "composition argument")
    out = {}
    for x in space.points:
        v = f.get(t(x), 0)
        if v != 0:
            out[x] = v
    return out


def composition_adjoint_apply(t: PointMap, space: DiscreteMeasureSpace, g: dict) -> dict:
    """``(C_T* g)(z) = mu(z)^-1 sum_{Tx=z} mu(x) g(x)`` (sparse)."""
    out = {}
    for x, v in g.items():
        if v == 0:
            continue
        if x not in space:
            raise BoundaryLeak(f"vector supported outside the window at {x!r}")
        z = t(x)
        if z not in space:
            raise BoundaryLeak(f"adjoint leaves the window at {z!r}")
        out[z] = out.get(z, 0) + space.weights[x] * v
    return {z: v / space.weights[z] for z, v in out.items() if v != 0}


def conjugation_apply(alpha: PointMap, space: DiscreteMeasureSpace, f: dict) -> dict:
    """``(C f)(x) = conj(f(alpha x))`` (sparse; ``alpha`` is an involution)."""
    out = {}
    for y, v in f.items():
        if v == 0:
            continue
        x = alpha(y)
        if x not in space:
            raise BoundaryLeak(f"conjugation leaves the window at {x!r}")
        out[x] = v.conjugate()
    return out


def composition_matrix(t: PointMap, space: DiscreteMeasureSpace):
    """Matrix of ``C_T`` in the basis ``1_x / sqrt(mu(x))``.

    Entry ``(x, y)`` is ``[T(x) = y] sqrt(mu(x)/mu(y))``.  Finite spaces give a
    :class:`LinearOp`; windows give the rectangular block ``points x interior``.
    """
    t.check_total(space)
    idx = space.index()
    cols = space.core
    if not space.is_finite:
        complete = t.complete_set(space)
        leaking = [y for y in cols if y not in complete]
        if leaking:
            raise BoundaryLeak(f"interior columns with invisible preimages: {leaking[:3]}")
    col_idx = {y: j for j, y in enumerate(cols)}
    m = np.zeros((len(space.points), len(cols)), dtype=np.complex128)
    for x in space.points:
        y = t(x)
        if y in col_idx:
            m[idx[x], col_idx[y]] = math.sqrt(space.weights[x] / space.weights[y])
    return LinearOp(m) if space.is_finite else m


def involution_conj(alpha: PointMap, space: DiscreteMeasureSpace) -> Conjugation:
    """Conjugation ``f -> conj(f o alpha)``; its matrix is the permutation of ``alpha``."""
    if not validate_involution(alpha, space):
        raise InvalidInvolution("alpha must be a weight-preserving involution of the points")
    idx = space.index()
    m = np.zeros((len(space), len(space)))
    for y in space.points:
        m[idx[alpha(y)], idx[y]] = 1.0
    return Conjugation(m, kind="custom")


def classify_multiplication(phi: dict, alpha: PointMap, space: DiscreteMeasureSpace, tol: Tolerance = DEFAULT_TOL) -> MultiplicationReport:
    """C-normality of ``M_phi`` for ``(Cf)(x) = conj(f(alpha x))``.

    ``criterion`` is ``|phi(alpha x)|^2 = |phi(x)|^2`` everywhere; ``c_normal``
    comes from the matrix battery on ``diag(phi)``.
    """
    if not space.is_finite:
        raise InvalidInput("classify_multiplication needs a finite space")
    c = involution_conj(alpha, space)
    values = [complex(phi.get(x, 0)) for x in space.points]
    mod2 = {x: abs(v) ** 2 for x, v in zip(space.points, values)}
    criterion = all(
        math.isclose(mod2[alpha(x)], mod2[x], rel_tol=1e-12, abs_tol=1e-14) for x in space.points
    )
    report = twcnor_battery(np.diag(values), c, tol)
    return MultiplicationReport(report.c_normal, criterion)


def _injective(t: PointMap, points) -> bool:
    images = [t(x) for x in points]
    return len(set(images)) == len(images)


def interior_checks(t: PointMap, alpha: PointMap, space: DiscreteMeasureSpace) -> tuple[bool, bool]:
    """``(CNN* = N*NC, NN* = N*N)`` for ``N = C_T`` on every interior indicator.

    Exact on spaces with rational weights; used for windows where only
    finitely supported vectors can be handled.
    """
    def n(f):
        return composition_apply(t, space, f)

    def ns(f):
        return composition_adjoint_apply(t, space, f)

    def c(f):
        return conjugation_apply(alpha, space, f)

    def equal(a, b):
        keys = set(a) | set(b)
        return all(_same(a.get(k, 0), b.get(k, 0), space.exact) for k in keys)

    cond5 = normal = True
    for x in space.core:
        e = {x: Fraction(1)}
        nns = n(ns(e))
        nsn = ns(n(e))
        cond5 = cond5 and equal(c(nns), ns(n(c(e))))
        normal = normal and equal(nns, nsn)
    return cond5, normal


def classify_composition(t: PointMap, alpha: PointMap, space: DiscreteMeasureSpace, tol: Tolerance = DEFAULT_TOL) -> CompositionReport:
    """C-normality and normality of ``C_T`` for ``(Cf)(x) = conj(f(alpha x))``.

    ``criterion``: T injective on the points and ``h o T = h o alpha``.
    ``normal_criterion``: ``h = h o T``.  On finite spaces ``c_normal`` and
    ``normal`` come from the matrix of ``C_T``; on windows from exact checks
    on interior indicators.
    """
    if not validate_involution(alpha, space):
        raise InvalidInvolution("alpha must be a weight-preserving involution of the points")
    h = radon_nikodym(t, space)
    exact = space.exact
    core = space.core
    criterion = _injective(t, space.points) and all(
        _same(h[t(x)], h[alpha(x)], exact) for x in core
    )
    normal_criterion = all(_same(h[x], h[t(x)], exact) for x in core)
    if space.is_finite:
        m = composition_matrix(t, space)
        c = involution_conj(alpha, space)
        c_normal = twcnor_battery(m, c, tol).c_normal
        normal = is_normal(m.mat, tol)
    else:
        c_normal, normal = interior_checks(t, alpha, space)
    return CompositionReport(bool(c_normal), bool(criterion), bool(normal), bool(normal_criterion))


def ladder_space(J: int) -> tuple[DiscreteMeasureSpace, PointMap, PointMap]:
    """Window ``|j| <= J`` of the two-sided ladder ``{p_j, m_j}``.

    ``mu(p_j) = mu(m_j) = 2^j``, ``alpha`` swaps ``p_j`` and ``m_j``,
    ``T(p_j) = m_j`` and ``T(m_j) = p_{j+1}``.  Then ``h = 1/2`` on the
    ``p`` points and ``1`` on the ``m`` points, so ``h o T = h o alpha``
    while ``h != h o T``.
    """
    if J < 2:
        raise InvalidInput("J must be >= 2")
    js = range(-J, J + 1)
    points = tuple(chain.from_iterable((f"p{j}", f"m{j}") for j in js))
    weights = {p: Fraction(2) ** int(p[1:]) for p in points}
    interior = frozenset(p for p in points if abs(int(p[1:])) <= J - 1)
    space = DiscreteMeasureSpace(points, weights, interior)
    tmap = {}
    for j in js:
        tmap[f"p{j}"] = f"m{j}"
        tmap[f"m{j}"] = f"p{j + 1}"
    complete = frozenset(points) - {f"p{-J}"}
    t = PointMap(tmap, complete)
    alpha = PointMap({f"p{j}": f"m{j}" for j in js} | {f"m{j}": f"p{j}" for j in js})
    return space, t, alpha
