"""Error taxonomy shared by every module.

CLI exit-code buckets: ExprSyntaxError maps to 2, ContextError subclasses to
3, ArithmeticFailure subclasses to 4.
"""


class WittError(Exception):
    """Base class for all library errors."""


class ExprSyntaxError(WittError):
    """Unparsable expression or element text."""


class ContextError(WittError):
    """Invalid or incompatible context data."""


class ArithmeticFailure(WittError):
    """Arithmetic that is well-posed only on restricted inputs failed."""


class DivisionInexact(ArithmeticFailure):
    """exact_div found no (unique) quotient."""


class NotPrimeElement(ContextError):
    """The proposed uniformizer does not generate a maximal ideal."""


class CongruenceViolation(ArithmeticFailure):
    """A ghost vector is not in the image of the ghost map."""


class ContextMismatch(ContextError):
    """Operands belong to different contexts or algebras."""


class LengthZero(ContextError):
    """The operation needs at least two components."""


class IndexOutOfRange(ContextError):
    """Component or ghost index outside the truncation window."""


class NotAUnit(ContextError):
    """A unit of the base ring was required."""


class TorsionNotSupported(ContextError):
    """The algebra has torsion and no symbolic path applies."""


class InternalIntegrityError(WittError):
    """A structural identity that must hold by theorem failed; a bug."""


class LiftViolation(ArithmeticFailure):
    """An endomorphism claimed to be a Frobenius lift is not one."""


class UnsupportedPresentation(ContextError):
    """The presented algebra is outside the decidable fragment."""


class NotDivisorClosed(ContextError):
    """A truncation set is not closed under divisibility."""


class NotRectangular(ContextError):
    """A divisor-closed set that is not the full divisor lattice of max(T)."""


class NotSurjective(ContextError):
    """A map required to be surjective is not."""


class SynthesisBudgetExceeded(WittError):
    """Cooperative deadline hit during structural polynomial synthesis."""
