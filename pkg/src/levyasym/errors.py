"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` so that the CLI can
report failures as JSON without parsing messages.
"""


class LevyAsymError(Exception):
    code = "ERROR"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ParamRangeError(LevyAsymError, ValueError):
    code = "PARAM_RANGE"


class DomainError(LevyAsymError, ValueError):
    code = "DOMAIN"


class UnreachableLevelError(LevyAsymError, ValueError):
    code = "UNREACHABLE_LEVEL"


class NumericRangeError(LevyAsymError, ArithmeticError):
    code = "NUMERIC_RANGE"


class MissingIndexError(LevyAsymError, ValueError):
    code = "MISSING_INDEX"


class IndexRangeError(LevyAsymError, ValueError):
    code = "INDEX_RANGE"


class OutOfScopeError(LevyAsymError, ValueError):
    code = "OUT_OF_SCOPE"


class NonIntegrableError(LevyAsymError, ValueError):
    """Levy integrability of a density profile fails."""

    code = "NONINTEGRABLE"


class NotIntegrableError(LevyAsymError, ValueError):
    """``exp(-t psi)`` is not integrable, so no density exists at time t."""

    code = "NOT_INTEGRABLE"


class StripViolationError(LevyAsymError, ValueError):
    code = "STRIP_VIOLATION"


class DivergentError(LevyAsymError, ArithmeticError):
    code = "DIVERGENT"


class SlowDecayError(LevyAsymError, ValueError):
    code = "SLOW_DECAY"


class NoConvergenceError(LevyAsymError, ArithmeticError):
    code = "NO_CONVERGENCE"


class TransienceError(LevyAsymError, ValueError):
    code = "TRANSIENCE_FAIL"


class NoLevyDensityError(LevyAsymError, ValueError):
    code = "NO_LEVY_DENSITY"


class RatioFailureError(LevyAsymError, ArithmeticError):
    code = "RATIO_FAILURE"


class SpecFileError(LevyAsymError, ValueError):
    code = "SPEC_FILE"
