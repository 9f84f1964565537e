"""Canonical form of conjugate-normal matrices under unitary congruence.

For conjugate-normal ``M`` we compute a unitary ``U`` with ``D = U M U^t``
block diagonal: 1x1 blocks ``[r]`` (``r >= 0``) followed by 2x2 blocks
``[[s, t], [-t, s]]`` (``s >= 0``, ``t > 0``).

Algorithm
---------
Let ``X x = M conj(x)``.  Then ``X^2`` has the normal matrix
``B = M conj(M)``, and ``X`` maps the eigenspace of ``B`` for ``lam`` onto
the eigenspace for ``conj(lam)``.  On the sum of those two eigenspaces
``X / sqrt|lam|`` is antiunitary, which fixes the local block:

* ``lam = 0``: blocks below about ``sqrt(eps) ||M||`` hide here, so the
  compression of ``M`` to this eigenspace is decomposed recursively at its
  own scale (exact zeros give ``r = 0``).
* ``lam > 0``: singles with ``r = sqrt(lam)``.  For ``v`` in the eigenspace,
  ``Xv + r v`` (or ``i (Xv - r v)`` when that one is larger) is a fixed
  vector of ``X / r``; deflate and repeat.
* ``lam < 0``: pairs with ``s = 0``, ``t = sqrt(-lam)`` built from ``v`` and
  ``Xv / t``, deflating within the eigenspace.
* ``Im lam > 0``: pairs with ``s + i t = sqrt(lam)`` built from an
  orthonormal basis ``v`` of the eigenspace and ``Xv`` (which spans the
  partner eigenspace).

The block parameters are then read back from ``U M U^t`` and normalised,
and the reconstruction residual is the acceptance test.  Pairs whose ``t``
is negligible are reported as two singles.  If the residual is
too large the eigenvalue clustering is retried at other thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antilinear import AntilinearOp, LinearOp, is_conjugate_normal
from .conjugation import Conjugation, flip_matrix
from .errors import (
    CNormalError,
    DecompositionFailed,
    InvalidInput,
    NotCNormal,
    NotConjugateNormal,
    NotNormal,
    ShapeMismatch,
)
from .numeric import DEFAULT_TOL, Tolerance, as_matrix, eig_normal, fro, haar_unitary, is_normal

__all__ = [
    "CanonicalBlocks",
    "CanonicalDecomposition",
    "CNormalDecomposition",
    "conjugate_normal_canonical",
    "c_normal_decompose",
    "second_diagonal_form",
    "generate_c_normal",
    "CLUSTER_TOLERANCES",
    "blocks_close",
]

# First entry is the primary clustering threshold (relative to ||B||_2).
CLUSTER_TOLERANCES = (1e-8, 1e-10, 1e-6, 1e-12, 1e-5, 1e-4)
NORMAL_TOL = Tolerance(1e-9, 1e-9)
SUBSPACE_NORMAL_TOL = Tolerance(1e-5, 1e-5)
# pairs with t below this fraction of the residual bound are reported as singles
FLAT_PAIR_FRACTION = 1e-2


@dataclass(frozen=True)
class CanonicalBlocks:
    """Block parameters of a canonical matrix.

    ``order`` lists the layout, e.g. ``("single", "pair", "single")``; the
    i-th ``"single"`` entry uses ``singles[i]`` and likewise for pairs.  When
    omitted, all singles come first.
    """

    singles: tuple = ()
    pairs: tuple = ()
    order: tuple = field(default=None)

    def __post_init__(self):
        singles = tuple(float(r) for r in self.singles)
        pairs = tuple((float(s), float(t)) for s, t in self.pairs)
        order = self.order
        if order is None:
            order = ("single",) * len(singles) + ("pair",) * len(pairs)
        order = tuple(order)
        if order.count("single") != len(singles) or order.count("pair") != len(pairs):
            raise InvalidInput("block order does not match the number of blocks")
        if any(kind not in ("single", "pair") for kind in order):
            raise InvalidInput("block kinds must be 'single' or 'pair'")
        if any(r < 0 for r in singles) or any(s < 0 for s, _ in pairs):
            raise InvalidInput("r and s must be non-negative")
        object.__setattr__(self, "singles", singles)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "order", order)

    @property
    def dim(self) -> int:
        return len(self.singles) + 2 * len(self.pairs)

    def matrix(self) -> np.ndarray:
        d = np.zeros((self.dim, self.dim), dtype=np.complex128)
        i = 0
        singles = iter(self.singles)
        pairs = iter(self.pairs)
        for kind in self.order:
            if kind == "single":
                d[i, i] = next(singles)
                i += 1
            else:
                s, t = next(pairs)
                d[i : i + 2, i : i + 2] = [[s, t], [-t, s]]
                i += 2
        return d

    def to_dict(self) -> dict:
        return {"singles": list(self.singles), "pairs": [list(p) for p in self.pairs]}


@dataclass(frozen=True)
class CanonicalDecomposition:
    U: np.ndarray
    D: np.ndarray
    blocks: CanonicalBlocks
    residual: float

    def to_dict(self) -> dict:
        from .io import matrix_to_json

        return {
            "U": matrix_to_json(self.U),
            "D": matrix_to_json(self.D),
            "blocks": self.blocks.to_dict(),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class CNormalDecomposition:
    """Both factorizations of a C-normal ``N``.

    ``variant1`` decomposes ``M_{NC}``, giving ``N = U* (DC)(CUC)``;
    ``variant2`` decomposes ``M_{CN}``, giving ``N = (UC)# (DC) CU``.
    """

    U: np.ndarray
    blocks: CanonicalBlocks
    variant1: CanonicalDecomposition
    variant2: CanonicalDecomposition
    reconstruction_residuals: tuple

    def to_dict(self) -> dict:
        return {
            "variant1": self.variant1.to_dict(),
            "variant2": self.variant2.to_dict(),
            "reconstruction_residuals": list(self.reconstruction_residuals),
        }


def _clusters(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of complex values within ``radius``."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _project_out(v: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    for _ in range(2):
        for b in basis:
            v = v - np.vdot(b, v) * b
    return v


def _next_direction(w: np.ndarray, found: list[np.ndarray]) -> np.ndarray:
    """Column of ``w`` with the largest component orthogonal to ``found``."""
    best = None
    best_norm = -1.0
    for j in range(w.shape[1]):
        v = _project_out(w[:, j], found)
        nv = np.linalg.norm(v)
        if nv > best_norm:
            best, best_norm = v, nv
    if best_norm < 1e-3:
        raise DecompositionFailed("eigenspace exhausted before its dimension was filled")
    return best / best_norm


def _real_orthogonalize(u: np.ndarray, found: list[np.ndarray]) -> np.ndarray:
    # Inner products of fixed vectors of a conjugation are real, so real
    # Gram-Schmidt keeps u fixed.
    for _ in range(2):
        for b in found:
            u = u - np.vdot(b, u).real * b
    return u


def _zero_cluster(m, w, cluster_tol, singles, pairs):
    """Resolve the eigenspace of B near 0 by decomposing the compression of M.

    Blocks with ``r`` (or ``|s + it|``) below about ``sqrt(eps) ||M||`` are
    invisible in ``B = M conj(M)``; the compression ``W* M conj(W)`` sees
    them at its own scale.
    """
    k_mat = w.conj().T @ m @ w.conj()
    k_norm = fro(k_mat)
    sub = None
    if k_norm > 0 and w.shape[1] < m.shape[0]:
        try:
            # relative to its own scale the compression is only nearly normal
            sub = _decompose_once(k_mat / k_norm, cluster_tol, SUBSPACE_NORMAL_TOL)
        except CNormalError:
            sub = None
    if sub is None or sub.residual > 1e-6:
        singles.extend((0.0, w[:, j]) for j in range(w.shape[1]))
        return
    cols = w @ sub.U.conj().T
    n_singles = len(sub.blocks.singles)
    for j, r in enumerate(sub.blocks.singles):
        singles.append((r * k_norm, cols[:, j]))
    for k, (s, t) in enumerate(sub.blocks.pairs):
        i = n_singles + 2 * k
        pairs.append((k_norm * np.hypot(s, t), None, cols[:, i], cols[:, i + 1]))


def _eigen_route(m: np.ndarray, cluster_tol: float, normal_tol: Tolerance):
    n = m.shape[0]

    def x_apply(v):
        return m @ v.conj()

    b = m @ m.conj()
    lam, v = eig_normal(b, normal_tol)
    scale = max(float(np.max(np.abs(lam))) if n else 0.0, np.finfo(float).tiny)
    radius = cluster_tol * scale
    groups = _clusters(lam, radius)

    singles: list[tuple[float, np.ndarray]] = []
    pairs: list[tuple[float, float, np.ndarray, np.ndarray]] = []
    used = set()
    for gi, idx in enumerate(groups):
        if gi in used:
            continue
        used.add(gi)
        mu = complex(np.mean(lam[idx]))
        w = v[:, idx]
        dim = len(idx)
        if abs(mu) <= radius:
            _zero_cluster(m, w, cluster_tol, singles, pairs)
        elif abs(mu.imag) <= radius and mu.real > 0:
            r = np.sqrt(mu.real)
            found: list[np.ndarray] = []
            for _ in range(dim):
                q = _next_direction(w, found)
                xq = x_apply(q)
                cand1 = xq + r * q
                cand2 = 1j * (xq - r * q)
                u = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
                u = _real_orthogonalize(u, found)
                u = u / np.linalg.norm(u)
                found.append(u)
                singles.append((r, u))
        elif abs(mu.imag) <= radius:
            if dim % 2:
                raise DecompositionFailed("negative eigenvalue cluster of odd dimension")
            t = np.sqrt(-mu.real)
            found = []
            for _ in range(dim // 2):
                q = _next_direction(w, found)
                yq = x_apply(q) / t
                yq = _project_out(yq, found + [q])
                yq = yq / np.linalg.norm(yq)
                f1 = (q + 1j * yq) / np.sqrt(2)
                f2 = (q - 1j * yq) / (np.sqrt(2) * 1j)
                found.extend([q, yq])
                pairs.append((t, np.pi / 2, f1, f2))
        else:
            if mu.imag < 0:
                # Handled together with its partner cluster.
                used.discard(gi)
                continue
            candidates = [
                (abs(np.mean(lam[jdx]) - mu.conjugate()), gj)
                for gj, jdx in enumerate(groups)
                if gj not in used and len(jdx) == dim and np.mean(lam[jdx]).imag < 0
            ]
            partner = min(candidates)[1] if candidates else None
            if partner is None:
                raise DecompositionFailed("complex eigenvalue cluster without conjugate partner")
            used.add(partner)
            root = np.sqrt(mu)
            sigma = abs(root)
            psi = np.angle(root)
            phase = np.exp(1j * psi)
            for j in range(dim):
                q = w[:, j]
                yq = x_apply(q) / sigma
                f1 = (q + phase * yq) / np.sqrt(2)
                f2 = (q - phase * yq) / (np.sqrt(2) * 1j)
                pairs.append((sigma, psi, f1, f2))
    # Negative-imaginary clusters are consumed via partners; check coverage.
    covered = len(singles) + 2 * len(pairs)
    if covered != n:
        raise DecompositionFailed(f"eigen route produced {covered} basis vectors for dimension {n}")

    singles.sort(key=lambda item: -item[0])
    pairs.sort(key=lambda item: -item[0])
    columns = [f for _, f in singles]
    for _, _, f1, f2 in pairs:
        columns.extend([f1, f2])
    f = np.column_stack(columns) if columns else np.zeros((0, 0), dtype=np.complex128)
    # nearest unitary (polar factor) absorbs rounding-level non-orthogonality
    w_left, _, vh = np.linalg.svd(f)
    f = w_left @ vh
    return f.conj().T, len(singles), len(pairs)


def _normalize(m: np.ndarray, u: np.ndarray, n_singles: int, n_pairs: int):
    """Fix phases/signs of ``U`` so the blocks meet r, s >= 0 and t >= 0."""
    u = u.copy()
    t_mat = u @ m @ u.T
    for i in range(n_singles):
        d = t_mat[i, i]
        if abs(d) > 0:
            u[i] *= np.exp(-0.5j * np.angle(d))
    t_mat = u @ m @ u.T
    singles = [max(float(t_mat[i, i].real), 0.0) for i in range(n_singles)]
    pairs = []
    for k in range(n_pairs):
        i = n_singles + 2 * k
        s = 0.5 * (t_mat[i, i].real + t_mat[i + 1, i + 1].real)
        t = 0.5 * (t_mat[i, i + 1].real - t_mat[i + 1, i].real)
        if s < 0:
            # congruence by i*I negates s and t; then the t flip below restores t.
            u[i : i + 2] *= 1j
            s, t = -s, -t
        if t < 0:
            u[i + 1] *= -1
            t = -t
        pairs.append((s, t))
    return u, singles, pairs


def _decompose_once(m: np.ndarray, cluster_tol: float, normal_tol: Tolerance = NORMAL_TOL) -> CanonicalDecomposition:
    u, ns, np_ = _eigen_route(m, cluster_tol, normal_tol)
    u, singles, pairs = _normalize(m, u, ns, np_)
    blocks = CanonicalBlocks(singles, pairs)
    d = blocks.matrix()
    residual = fro(d - u @ m @ u.T)
    return CanonicalDecomposition(U=u, D=d, blocks=blocks, residual=residual)


def _split_flat_pairs(m: np.ndarray, dec: CanonicalDecomposition, limit: float) -> CanonicalDecomposition:
    """Rewrite pairs with ``t <= limit`` as two singles ``r = s``.

    ``[[s, t], [-t, s]]`` with ``t = 0`` is ``diag(s, s)``, so such pairs
    are ambiguous; singles are the canonical choice.
    """
    blocks = dec.blocks
    if not any(t <= limit for _, t in blocks.pairs):
        return dec
    ns = len(blocks.singles)
    singles = [(r, [dec.U[i]]) for i, r in enumerate(blocks.singles)]
    pairs = []
    for k, (s, t) in enumerate(blocks.pairs):
        i = ns + 2 * k
        if t <= limit:
            singles += [(s, [dec.U[i]]), (s, [dec.U[i + 1]])]
        else:
            pairs.append(((s, t), [dec.U[i], dec.U[i + 1]]))
    singles.sort(key=lambda item: -item[0])
    pairs.sort(key=lambda item: -np.hypot(*item[0]))
    rows = [row for _, rs in singles for row in rs] + [row for _, rs in pairs for row in rs]
    u = np.array(rows)
    new_blocks = CanonicalBlocks([r for r, _ in singles], [p for p, _ in pairs])
    d = new_blocks.matrix()
    return CanonicalDecomposition(U=u, D=d, blocks=new_blocks, residual=fro(d - u @ m @ u.T))


def conjugate_normal_canonical(m, tol: Tolerance = DEFAULT_TOL) -> CanonicalDecomposition:
    """Unitary ``U`` and canonical ``D`` with ``D = U M U^t``.

    Singles are sorted by ``r`` descending, pairs by ``sqrt(s^2 + t^2)``
    descending.

    Raises
    ------
    NotConjugateNormal
        If ``MM* != conj(M*M)`` within ``tol``.
    DecompositionFailed
        If no clustering threshold brings the residual within
        ``tol.bound(||M||_F)``.
    """
    m = as_matrix(m, square=True)
    if not is_conjugate_normal(m, tol):
        raise NotConjugateNormal("matrix is not conjugate-normal within tolerance")
    if m.shape[0] == 0:
        raise InvalidInput("empty matrix")
    b = m @ m.conj()
    if not is_normal(b, NORMAL_TOL):
        raise NotNormal("M conj(M) is not normal; conjugate-normality check is inconsistent")
    bound = tol.bound(fro(m))
    best = None
    for ctol in CLUSTER_TOLERANCES:
        try:
            dec = _decompose_once(m, ctol)
        except DecompositionFailed:
            continue
        if best is None or dec.residual < best.residual:
            best = dec
        if dec.residual <= bound:
            return _split_flat_pairs(m, dec, FLAT_PAIR_FRACTION * bound)
    if best is None:
        raise DecompositionFailed("eigen route failed at every clustering threshold")
    raise DecompositionFailed(
        f"best reconstruction residual {best.residual:.3e} exceeds bound {bound:.3e}"
    )


def _linear(n) -> LinearOp:
    return n if isinstance(n, LinearOp) else LinearOp(n)


def c_normal_decompose(n, c: Conjugation, tol: Tolerance = DEFAULT_TOL) -> CNormalDecomposition:
    """Factor a C-normal ``N`` through the canonical form of ``NC`` and ``CN``."""
    from .classify import is_c_normal

    n = _linear(n)
    if n.dim != c.dim:
        raise ShapeMismatch("operator and conjugation dimensions differ")
    if not is_c_normal(n, c, tol):
        raise NotCNormal("operator is not C-normal within tolerance")
    cc = c.as_antilinear()
    v1 = conjugate_normal_canonical((n @ cc).mat, tol)
    v2 = conjugate_normal_canonical((cc @ n).mat, tol)

    u1 = LinearOp(v1.U)
    rebuilt1 = u1.H @ (AntilinearOp(v1.D) @ cc) @ (cc @ u1 @ cc)
    uc = LinearOp(v2.U) @ cc
    rebuilt2 = uc.sharp @ (AntilinearOp(v2.D) @ cc) @ (cc @ LinearOp(v2.U))
    residuals = (fro(rebuilt1.mat - n.mat), fro(rebuilt2.mat - n.mat))
    bound = tol.bound(fro(n.mat))
    if max(residuals) > bound:
        raise DecompositionFailed(f"factorization residuals {residuals} exceed {bound:.3e}")
    return CNormalDecomposition(
        U=v1.U, blocks=v1.blocks, variant1=v1, variant2=v2, reconstruction_residuals=residuals
    )


def second_diagonal_form(n, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """``(W, D~)`` with ``M_N = W D~ (W^s)^t`` for the flip conjugation.

    ``W^s`` reflects ``W`` through its centre and ``D~ = D F`` (``F`` the
    flip matrix) lives on the second-diagonal band, with 2x2 blocks
    ``[[t, s], [s, -t]]``.
    """
    n = _linear(n)
    c = Conjugation(flip_matrix(n.dim), kind="flip")
    dec = c_normal_decompose(n, c, tol)
    w = dec.U.conj().T
    d_tilde = dec.variant1.D @ flip_matrix(n.dim)
    return w, d_tilde


def generate_c_normal(c: Conjugation, blocks: CanonicalBlocks, seed=None) -> LinearOp:
    """Random C-normal operator ``N = U* (DC)(CUC)`` with Haar ``U``."""
    if blocks.dim != c.dim:
        raise ShapeMismatch(f"blocks span dimension {blocks.dim}, conjugation has {c.dim}")
    rng = np.random.default_rng(seed)
    u = LinearOp(haar_unitary(c.dim, rng))
    cc = c.as_antilinear()
    return u.H @ (AntilinearOp(blocks.matrix()) @ cc) @ (cc @ u @ cc)


def blocks_close(a: CanonicalBlocks, b: CanonicalBlocks, atol: float = 1e-7) -> bool:
    """Compare block multisets (order-free) entrywise within ``atol``."""
    if len(a.singles) != len(b.singles) or len(a.pairs) != len(b.pairs):
        return False
    if not np.allclose(sorted(a.singles), sorted(b.singles), rtol=0, atol=atol):
        return False
    remaining = list(b.pairs)
    for s, t in a.pairs:
        dist = [max(abs(s - s2), abs(t - t2)) for s2, t2 in remaining]
        j = int(np.argmin(dist))
        if dist[j] > atol:
            return False
        remaining.pop(j)
    return True
