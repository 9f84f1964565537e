import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnormal.classify import is_c_normal
from cnormal.conjugation import flip_matrix, validate_conjugation
from cnormal.numeric import is_normal
from cnormal.errors import BoundaryLeak, InvalidInput, InvalidInvolution, UnboundedDensity
from cnormal.measure import (
    DiscreteMeasureSpace,
    PointMap,
    classify_composition,
    classify_multiplication,
    composition_adjoint_apply,
    composition_apply,
    composition_matrix,
    integral_identity,
    interior_checks,
    involution_conj,
    ladder_space,
    radon_nikodym,
    validate_involution,
)

from strategies import seeds

UNIFORM4 = DiscreteMeasureSpace("abcd", {x: 1 for x in "abcd"})
REVERSAL = PointMap(dict(zip("abcd", "dcba")))
IDENTITY4 = PointMap({x: x for x in "abcd"})
WEIGHTED = DiscreteMeasureSpace("abcd", {"a": 1, "b": 1, "c": 2, "d": 2})
CYCLE = PointMap(dict(zip("abcd", "bcda")))


def random_instance(rng, max_points=6):
    """Finite space, alpha-invariant integer weights, random T and involution alpha."""
    n = int(rng.integers(1, max_points + 1))
    pts = [f"x{i}" for i in range(n)]
    perm = list(rng.permutation(n))
    alpha = {}
    while perm:
        i = perm.pop()
        if perm and rng.random() < 0.6:
            j = perm.pop()
            alpha[pts[i]], alpha[pts[j]] = pts[j], pts[i]
        else:
            alpha[pts[i]] = pts[i]
    weights = {}
    for p in pts:
        if p not in weights:
            weights[p] = weights[alpha[p]] = int(rng.integers(1, 4))
    if rng.random() < 0.5:
        image = rng.permutation(n)
    else:
        image = rng.integers(0, n, size=n)
    t = {p: pts[int(j)] for p, j in zip(pts, image)}
    return DiscreteMeasureSpace(pts, weights), PointMap(t), PointMap(alpha)


# -- involutions --------------------------------------------------------

def test_validate_involution_examples():
    assert validate_involution(REVERSAL, UNIFORM4)
    three = DiscreteMeasureSpace("abc", {x: 1 for x in "abc"})
    assert not validate_involution(PointMap({"a": "b", "b": "c", "c": "a"}), three)
    unequal = DiscreteMeasureSpace("ab", {"a": 1, "b": 2})
    assert not validate_involution(PointMap({"a": "b", "b": "a"}), unequal)


def test_involution_conj():
    c = involution_conj(IDENTITY4, UNIFORM4)
    assert np.array_equal(c.mat, np.eye(4))
    assert np.array_equal(involution_conj(REVERSAL, UNIFORM4).mat, flip_matrix(4))
    with pytest.raises(InvalidInvolution):
        involution_conj(CYCLE, UNIFORM4)


@given(seeds)
def test_involution_conj_is_conjugation(seed):
    space, _, alpha = random_instance(np.random.default_rng(seed))
    c = involution_conj(alpha, space)
    assert validate_conjugation(c.mat)
    # (Cf)(x) = conj(f(alpha x)) in the orthonormal basis 1_x / sqrt(mu(x))
    f = np.random.default_rng(seed).standard_normal(len(space)) * (1 + 1j)
    idx = space.index()
    coords = np.array([f[idx[p]] * np.sqrt(float(space.weights[p])) for p in space.points])
    direct = np.array([np.conj(f[idx[alpha(p)]]) * np.sqrt(float(space.weights[p])) for p in space.points])
    assert np.allclose(c(coords), direct)


# -- densities ----------------------------------------------------------

def test_radon_nikodym_examples():
    assert set(radon_nikodym(IDENTITY4, WEIGHTED).values.values()) == {1}
    h = radon_nikodym(CYCLE, WEIGHTED)
    assert [h[x] for x in "abcd"] == [2, 1, Fraction(1, 2), 1]
    with pytest.raises(UnboundedDensity):
        radon_nikodym(CYCLE, WEIGHTED, bound=1)


@given(seeds)
def test_integral_identity(seed):
    rng = np.random.default_rng(seed)
    space, t, _ = random_instance(rng)
    f = {p: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for p in space.points}
    lhs, rhs = integral_identity(t, space, f)
    assert lhs == rhs
    g = {p: complex(*rng.standard_normal(2)) for p in space.points}
    lhs, rhs = integral_identity(t, space, g)
    assert abs(lhs - rhs) <= 1e-12 * max(1, abs(lhs))


# -- composition operators ----------------------------------------------

def test_composition_matrix_examples():
    assert np.array_equal(composition_matrix(IDENTITY4, UNIFORM4).mat, np.eye(4))
    two = DiscreteMeasureSpace("ab", {"a": 1, "b": 1})
    assert np.array_equal(composition_matrix(PointMap({"a": "b", "b": "a"}), two).mat, [[0, 1], [1, 0]])


@given(seeds)
def test_composition_matrix_norm_identity(seed):
    # ||C_T f||^2 = sum |f|^2 h mu
    rng = np.random.default_rng(seed)
    space, t, _ = random_instance(rng)
    m = composition_matrix(t, space).mat
    h = radon_nikodym(t, space)
    f = rng.standard_normal(len(space)) + 1j * rng.standard_normal(len(space))
    w = np.array([float(space.weights[p]) for p in space.points])
    coords = f * np.sqrt(w)
    rhs = sum(abs(f[i]) ** 2 * float(h[p]) * w[i] for i, p in enumerate(space.points))
    assert np.isclose(np.linalg.norm(m @ coords) ** 2, rhs)


@given(seeds)
def test_sparse_operators_match_matrix(seed):
    rng = np.random.default_rng(seed)
    space, t, _ = random_instance(rng)
    m = composition_matrix(t, space).mat
    w = np.array([float(space.weights[p]) for p in space.points])
    f = rng.standard_normal(len(space)) + 0j
    fd = dict(zip(space.points, f))
    as_vec = lambda d: np.array([d.get(p, 0) for p in space.points]) * np.sqrt(w)
    assert np.allclose(as_vec(composition_apply(t, space, fd)), m @ (f * np.sqrt(w)))
    assert np.allclose(as_vec(composition_adjoint_apply(t, space, fd)), m.conj().T @ (f * np.sqrt(w)))


def test_classify_composition_examples():
    rep = classify_composition(CYCLE, IDENTITY4, WEIGHTED)
    assert rep == (False, False, False, False)
    uniform_cycle = classify_composition(CYCLE, IDENTITY4, UNIFORM4)
    assert uniform_cycle.normal and uniform_cycle.c_normal


@given(seeds)
def test_identity_involution_c_normal_iff_normal(seed):
    space, t, _ = random_instance(np.random.default_rng(seed))
    alpha = PointMap({p: p for p in space.points})
    rep = classify_composition(t, alpha, space)
    assert rep.c_normal == rep.normal


@given(seeds)
def test_composition_criterion_matches_battery(seed):
    space, t, alpha = random_instance(np.random.default_rng(seed))
    rep = classify_composition(t, alpha, space)
    assert rep.criterion == rep.c_normal
    assert rep.normal_criterion == rep.normal or not rep.criterion


def test_non_injective_map_not_c_normal():
    t = PointMap({"a": "a", "b": "a", "c": "c", "d": "d"})
    rep = classify_composition(t, REVERSAL, UNIFORM4)
    assert not rep.criterion and not rep.c_normal


# -- ladder -------------------------------------------------------------

@pytest.mark.parametrize("J", [2, 3, 6])
def test_ladder(J):
    space, t, alpha = ladder_space(J)
    assert validate_involution(alpha, space)
    h = radon_nikodym(t, space)
    for j in range(-J + 1, J):
        assert h[f"p{j}"] == Fraction(1, 2) and h[f"m{j}"] == 1
    rep = classify_composition(t, alpha, space)
    assert rep.criterion and not rep.normal_criterion
    assert rep.c_normal and not rep.normal


def test_ladder_interior_identities():
    space, t, alpha = ladder_space(3)
    assert interior_checks(t, alpha, space) == (True, False)


def test_ladder_boundary_guard():
    space, t, _ = ladder_space(3)
    with pytest.raises(BoundaryLeak):
        composition_apply(t, space, {"p-3": 1})
    with pytest.raises(BoundaryLeak):
        composition_adjoint_apply(t, space, {"m3": 1})
    cols = composition_matrix(t, space)
    assert cols.shape == (14, 10)


def test_ladder_needs_j2():
    with pytest.raises(InvalidInput):
        ladder_space(1)


def _small_instances():
    """All maps on <= 4 points and all permutations of 5 points, every
    involution, alpha-invariant weights from {1, 2}."""
    for n in range(1, 6):
        pts = [f"x{i}" for i in range(n)]
        maps = itertools.permutations(range(n)) if n == 5 else itertools.product(range(n), repeat=n)
        maps = list(maps)
        involutions = [
            p for p in itertools.permutations(range(n)) if all(p[p[i]] == i for i in range(n))
        ]
        for inv in involutions:
            alpha = PointMap({pts[i]: pts[inv[i]] for i in range(n)})
            for wvals in itertools.product([1, 2], repeat=n):
                if any(wvals[i] != wvals[inv[i]] for i in range(n)):
                    continue
                space = DiscreteMeasureSpace(pts, dict(zip(pts, wvals)))
                for image in maps:
                    yield space, PointMap({pts[i]: pts[image[i]] for i in range(n)}), alpha


def test_rigidity_exhaustive_small_spaces():
    """Empirical observation, not a theorem: on these finite spaces every
    C-normal composition operator found is also normal."""
    checked = found = 0
    for space, t, alpha in _small_instances():
        m = composition_matrix(t, space)
        if is_c_normal(m, involution_conj(alpha, space)):
            found += 1
            assert is_normal(m.mat)
        checked += 1
    assert checked > 20000 and found > 100


# -- multiplication -----------------------------------------------------

def test_classify_multiplication_examples():
    assert classify_multiplication(dict(zip("abcd", [1, 2j, -2, 1])), REVERSAL, UNIFORM4) == (True, True)
    assert classify_multiplication(dict(zip("abcd", [1, 2, 3, 4])), REVERSAL, UNIFORM4) == (False, False)


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
def test_multiplication_identity_involution(values):
    rep = classify_multiplication(dict(zip("abcd", values)), IDENTITY4, UNIFORM4)
    assert rep.c_normal and rep.criterion


def test_space_validation():
    with pytest.raises(InvalidInput):
        DiscreteMeasureSpace("ab", {"a": 1, "b": 0})
    with pytest.raises(InvalidInput):
        DiscreteMeasureSpace("ab", {"a": 1})
    with pytest.raises(InvalidInput):
        DiscreteMeasureSpace("ab", {"a": 1, "b": 1}, interior=["c"])
    assert DiscreteMeasureSpace("a", {"a": "3/4"}).weights["a"] == Fraction(3, 4)
