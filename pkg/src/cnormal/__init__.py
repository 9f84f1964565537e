"""C-normal operators on finite-dimensional spaces, Hardy-space Toeplitz
symbols and discrete measure spaces."""

from .antilinear import AntilinearOp, LinearOp, compose, is_conjugate_normal, sharp
from .canonical import (
    CanonicalBlocks,
    c_normal_decompose,
    conjugate_normal_canonical,
    generate_c_normal,
    second_diagonal_form,
)
from .classify import (
    ClassificationReport,
    is_c_normal,
    is_c_skew_symmetric,
    is_c_symmetric,
    twcnor_battery,
)
from .conjugation import Conjugation, build_conjugation, random_conjugation
from .errors import CNormalError
from .numeric import DEFAULT_TOL, Tolerance
from .toeplitz import Symbol, is_c_normal_toeplitz, paper_example_symbol

__version__ = "0.1.0"
