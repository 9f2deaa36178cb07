"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    """Inversion of zero, or of a zero divisor."""


class DimensionMismatch(AlgebraError):
    """Operands live over different rings or variable counts."""


class SubstitutionNotLocal(AlgebraError):
    """A substituted series has a nonzero constant term."""


class NotAUnit(AlgebraError):
    """Inversion of a series with vanishing constant term."""


class NotAPthPower(AlgebraError):
    """A p-th root was requested of something that is not a p-th power.

    ``witness`` carries an offending exponent vector when available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ZeroOrUnitInput(AlgebraError):
    """The operation needs a nonzero non-unit series."""


class PrecisionTooLow(AlgebraError):
    """The tracked precision cannot certify the requested result."""


class NotDistinguished(AlgebraError):
    """The series is not distinguished in its last variable."""


class InvalidGenerator(AlgebraError):
    """The residue-field generator fails a structural requirement."""


class EmptyPrecisionWindow(AlgebraError):
    """An operation produced a Laurent series with no certified digits."""


class PrecisionExhausted(AlgebraError):
    """Precision tracking lost the full certified window mid-computation."""


class NotCentered(AlgebraError):
    """The implicit equation does not vanish at the origin."""


class DerivativeVanishes(AlgebraError):
    """The pivot derivative of the implicit equation is zero at the origin."""


class NotOrderOne(AlgebraError):
    """Reversion needs a series of order exactly one."""


class AllCoefficientsPthPowers(AlgebraError):
    """Every coefficient of the generator is a p-th power at this level."""


class NoUnitCoefficient(AlgebraError):
    """No coefficient of the generator is a unit."""


class LevelExceedsContext(AlgebraError):
    """A tower level beyond the working level of the residue field."""


class ImproperIdeal(AlgebraError):
    """The generators define the zero or the unit ideal."""


class ContractionInconclusive(AlgebraError):
    """Resultant-based elimination could not certify the contraction."""


class SeparabilitySearchExhausted(AlgebraError):
    """No coordinate change within the search budget gave a separable witness."""
