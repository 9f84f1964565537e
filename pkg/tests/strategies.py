"""Hypothesis strategies shared by the property tests."""

import numpy as np
from hypothesis import strategies as st

from cnormal.conjugation import build_conjugation, random_conjugation
from cnormal.numeric import random_complex

dims = st.integers(min_value=1, max_value=6)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def complex_matrices(draw, dim=None):
    n = draw(dims) if dim is None else dim
    return random_complex((n, n), np.random.default_rng(draw(seeds)))


@st.composite
def conjugations(draw, dim):
    kind = draw(st.sampled_from(["identity", "flip", "xi_theta", "random"]))
    if kind == "random":
        return random_conjugation(dim, np.random.default_rng(draw(seeds)))
    angle = st.floats(min_value=0, max_value=2 * np.pi, allow_nan=False)
    return build_conjugation(kind, dim, xi=draw(angle), theta=draw(angle))
