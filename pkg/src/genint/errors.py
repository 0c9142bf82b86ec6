"""Exception types shared across the package.

Every class carries a short ``code`` so batch front-ends can report failures
with a stable, machine-readable tag.
"""


class NumericsError(Exception):
    """Base class for all numerical failures raised by this package."""

    code = "error"


class DomainError(NumericsError, ValueError):
    """Argument outside the domain of the requested operation."""

    code = "domain"


class PoleError(NumericsError, ValueError):
    """Evaluation requested at (or numerically indistinguishable from) a pole."""

    code = "pole"

    def __init__(self, message: str, location=None):
        super().__init__(message)
        self.location = location


class PrecisionError(NumericsError, ArithmeticError):
    """A series or iteration failed to reach the requested accuracy."""

    code = "precision"


class QuadratureError(NumericsError, ArithmeticError):
    """Adaptive quadrature did not converge; carries the achieved tolerance."""

    code = "quadrature"

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(message)
        self.achieved = achieved


class ExtrapolationError(NumericsError, ArithmeticError):
    """A numerical limit diverged; carries the extrapolation table."""

    code = "extrapolation"

    def __init__(self, message: str, table=None):
        super().__init__(message)
        self.table = table if table is not None else []


class InconsistencyError(NumericsError, ValueError):
    """Declared data (e.g. a singular expansion) contradicts the function."""

    code = "inconsistency"


class ResonanceError(NumericsError, ArithmeticError):
    """gamma + Sigma vanished: the coupling hits a spectral resonance."""

    code = "resonance"

    def __init__(self, message: str, denominator: float = 0.0):
        super().__init__(message)
        self.denominator = denominator


class RedirectError(NumericsError, ValueError):
    """The requested formula is a removable limit; use the named routine."""

    code = "redirect"

    def __init__(self, message: str, target: str = ""):
        super().__init__(message)
        self.target = target
