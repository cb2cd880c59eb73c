"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for bad input or a violated precondition, 1 for a failed verification.
"""


class PairModelError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class ContractError(PairModelError, ValueError):
    """Input violates a documented precondition."""

    exit_code = 2


class VerificationError(PairModelError, ArithmeticError):
    """A computed residual exceeded its tolerance."""

    exit_code = 1


class NotHermitian(ContractError):
    pass


class NotPSD(ContractError):
    pass


class DimensionMismatch(ContractError):
    pass


class NotContraction(ContractError):
    pass


class NotCommuting(ContractError):
    pass


class NotProjection(ContractError):
    pass


class NotUnitary(ContractError):
    pass


class NotCnu(ContractError):
    pass


class NotInner(ContractError):
    pass


class DegreeOverflow(ContractError):
    pass


class UnsupportedTheta(ContractError):
    pass


class ConstraintViolation(ContractError):
    pass


class SingularResolvent(ContractError):
    pass


class FactorizationMismatch(ContractError):
    pass


class IrregularFactorization(ContractError):
    pass


class NotConstantOnUnitaryPart(ContractError):
    pass


class NoConvergence(VerificationError):
    pass


class InconsistentSpan(VerificationError):
    pass


class ResidualTooLarge(VerificationError):
    pass


class MismatchWithSolver(VerificationError):
    pass
