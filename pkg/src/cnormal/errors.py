"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI reports it verbatim.
"""


class CNormalError(Exception):
    code = "error"


class InvalidInput(CNormalError, ValueError):
    code = "invalid_input"


class ShapeMismatch(CNormalError, ValueError):
    code = "shape_mismatch"


class NotHermitian(CNormalError, ValueError):
    code = "not_hermitian"


class NotNormal(CNormalError, ValueError):
    code = "not_normal"


class NotUnitary(CNormalError, ValueError):
    code = "not_unitary"


class ConvergenceFailure(CNormalError, ArithmeticError):
    code = "convergence_failure"


class InvalidConjugation(CNormalError, ValueError):
    code = "invalid_conjugation"


class NotConjugateNormal(CNormalError, ValueError):
    code = "not_conjugate_normal"


class NotCNormal(CNormalError, ValueError):
    code = "not_c_normal"


class DecompositionFailed(CNormalError, ArithmeticError):
    code = "decomposition_failed"


class NotRankOne(CNormalError, ValueError):
    code = "not_rank_one"


class DimensionTooSmall(CNormalError, ValueError):
    code = "dimension_too_small"


class EtaNotUnimodular(CNormalError, ValueError):
    code = "eta_not_unimodular"


class InvalidParameter(CNormalError, ValueError):
    code = "invalid_parameter"


class SectionTooSmall(CNormalError, ValueError):
    code = "section_too_small"


class UnboundedDensity(CNormalError, ValueError):
    code = "unbounded_density"


class BoundaryLeak(CNormalError, ValueError):
    code = "boundary_leak"


class InvalidInvolution(CNormalError, ValueError):
    code = "invalid_involution"
