import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnormal.canonical import (
    CanonicalBlocks,
    blocks_close,
    c_normal_decompose,
    conjugate_normal_canonical,
    generate_c_normal,
    second_diagonal_form,
)
from cnormal.classify import build_paper_examples, twcnor_battery
from cnormal.conjugation import build_conjugation, flip_matrix, random_conjugation
from cnormal.errors import InvalidInput, NotCNormal, NotConjugateNormal, ShapeMismatch
from cnormal.numeric import haar_unitary, is_unitary

from strategies import seeds


def _check(dec, m):
    assert is_unitary(dec.U)
    recomputed = np.linalg.norm(dec.D - dec.U @ m @ dec.U.T)
    assert abs(dec.residual - recomputed) <= 1e-14
    assert dec.residual <= 1e-8 * max(1.0, np.linalg.norm(m))
    assert all(r >= 0 for r in dec.blocks.singles)
    assert all(s >= 0 and t >= 0 for s, t in dec.blocks.pairs)


def test_rotation_scaling_block():
    m = np.array([[1.0, 2.0], [-2.0, 1.0]])
    dec = conjugate_normal_canonical(m)
    _check(dec, m)
    assert dec.blocks.singles == ()
    assert np.allclose(dec.blocks.pairs, [(1, 2)])


def test_already_canonical():
    m = np.array([[1, 0, 0], [0, 1, 2], [0, -2, 1]], dtype=float)
    dec = conjugate_normal_canonical(m)
    _check(dec, m)
    assert np.allclose(dec.D, m, atol=1e-12)
    # U is diagonal up to signs
    assert np.allclose(np.abs(dec.U), np.eye(3), atol=1e-12)


def test_rejects_non_conjugate_normal():
    with pytest.raises(NotConjugateNormal):
        conjugate_normal_canonical(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize(
    "blocks",
    [
        CanonicalBlocks([3, 1, 0.5]),
        CanonicalBlocks([], [(0.5, 2), (0, 1)]),
        CanonicalBlocks([2, 0], [(1, 1)]),
        CanonicalBlocks([1, 1, 1], [(0.4, 0.9), (0.4, 0.9)]),  # repeated blocks
        CanonicalBlocks([0, 0], [(0, 2), (0, 2)]),
        CanonicalBlocks([0, 0, 0]),
    ],
)
def test_prescribed_blocks_recovered(blocks, rng):
    q = haar_unitary(blocks.dim, rng)
    m = q @ blocks.matrix() @ q.T
    dec = conjugate_normal_canonical(m)
    _check(dec, m)
    assert blocks_close(dec.blocks, blocks, atol=1e-8)


@st.composite
def block_sets(draw):
    n_singles = draw(st.integers(0, 4))
    n_pairs = draw(st.integers(0, 2))
    val = st.floats(0, 3, allow_nan=False)
    singles = draw(st.lists(val, min_size=n_singles, max_size=n_singles))
    pairs = draw(st.lists(st.tuples(val, st.floats(0.05, 3)), min_size=n_pairs, max_size=n_pairs))
    if n_singles + n_pairs == 0:
        singles = [1.0]
    return CanonicalBlocks(singles, pairs)


@given(block_sets(), seeds)
def test_round_trip_random_conjugation(blocks, seed):
    rng = np.random.default_rng(seed)
    c = random_conjugation(blocks.dim, rng)
    n = generate_c_normal(c, blocks, seed=seed)
    assert twcnor_battery(n, c).c_normal
    dec = c_normal_decompose(n, c)
    assert blocks_close(dec.blocks, blocks, atol=1e-7)
    assert max(dec.reconstruction_residuals) <= 1e-8 * max(1.0, np.linalg.norm(n.mat))
    _check(dec.variant1, (n @ c.as_antilinear()).mat)


def test_decompose_identity():
    c = build_conjugation("identity", 3)
    dec = c_normal_decompose(np.eye(3), c)
    assert np.allclose(dec.blocks.singles, [1, 1, 1])


def test_decompose_a2():
    _, a2 = build_paper_examples()
    dec = c_normal_decompose(a2, build_conjugation("identity", 3))
    assert max(dec.reconstruction_residuals) <= 1e-8


def test_decompose_rejects_non_c_normal():
    e12 = np.zeros((3, 3))
    e12[0, 1] = 1
    with pytest.raises(NotCNormal):
        c_normal_decompose(e12, build_conjugation("flip", 3))
    with pytest.raises(NotCNormal):
        second_diagonal_form(e12)


def test_second_diagonal_antidiagonal_input():
    n = np.array([[0, 0, 3.0], [0, 2.0, 0], [1.0, 0, 0]])
    w, d_tilde = second_diagonal_form(n)
    assert np.allclose(d_tilde, n, atol=1e-12)
    assert np.allclose(np.abs(w), np.eye(3), atol=1e-12)


@given(seeds)
def test_second_diagonal_reconstruction(seed):
    rng = np.random.default_rng(seed)
    f = flip_matrix(4)
    c = build_conjugation("flip", 4)
    s, t = rng.uniform(0, 2), rng.uniform(0.1, 2)
    blocks = CanonicalBlocks([], [(s, t), (0.3, 0.2)])
    n = generate_c_normal(c, blocks, seed=seed).mat
    w, d_tilde = second_diagonal_form(n)
    assert np.allclose(w @ d_tilde @ (f @ w @ f).T, n, atol=1e-9)
    # D~ = D F turns a block [[s, t], [-t, s]] into [[t, s], [s, -t]] on the anti-diagonal band
    target = np.array([[t, s], [s, -t]])
    assert any(np.allclose(blk, target, atol=1e-8) for blk in (d_tilde[0:2, 2:4], d_tilde[2:4, 0:2]))


def test_tiny_blocks_resolved(rng):
    # r far below sqrt(eps) ||M|| is invisible in M conj(M) but must still be recovered
    blocks = CanonicalBlocks([0, 1e-8, 1e-10], [(0, 1)])
    c = random_conjugation(5, rng)
    n = generate_c_normal(c, blocks, seed=0)
    dec = c_normal_decompose(n, c)
    assert blocks_close(dec.blocks, blocks, atol=1e-12)
    assert max(dec.reconstruction_residuals) <= 1e-12


def test_generate_unit_and_zero_blocks(rng):
    c = build_conjugation("xi_theta", 4, xi=0.2, theta=0.9)
    u = generate_c_normal(c, CanonicalBlocks([1, 1, 1, 1]), seed=3)
    assert is_unitary(u.mat) and twcnor_battery(u, c).c_normal
    z = generate_c_normal(c, CanonicalBlocks([0, 0, 0, 0]), seed=3)
    assert np.allclose(z.mat, 0)
    with pytest.raises(ShapeMismatch):
        generate_c_normal(c, CanonicalBlocks([1]), seed=0)


def test_generate_is_seeded():
    c = build_conjugation("flip", 3)
    b = CanonicalBlocks([1], [(0.5, 0.5)])
    assert np.array_equal(generate_c_normal(c, b, seed=7).mat, generate_c_normal(c, b, seed=7).mat)


def test_blocks_validation():
    with pytest.raises(InvalidInput):
        CanonicalBlocks([-1.0])
    with pytest.raises(InvalidInput):
        CanonicalBlocks([1.0], order=("pair",))
    mixed = CanonicalBlocks([2.0], [(1.0, 3.0)], order=("pair", "single"))
    assert np.allclose(mixed.matrix(), [[1, 3, 0], [-3, 1, 0], [0, 0, 2]])
