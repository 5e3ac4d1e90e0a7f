"""Exception hierarchy shared by all numerical modules.

The CLI maps these onto exit codes (domain 2, accuracy 3, pole 4).
"""


class CuspError(Exception):
    """Base class for errors raised by cuspscatter."""

    exit_code = 1
    kind = "error"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class DomainError(CuspError, ValueError):
    """Input outside the mathematical domain of an operation."""

    exit_code = 2
    kind = "domain"


class AccuracyError(CuspError, ArithmeticError):
    """A quadrature or iteration could not reach the requested tolerance."""

    exit_code = 3
    kind = "accuracy"

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate

    def to_dict(self):
        d = super().to_dict()
        d["estimate"] = self.estimate
        return d


class PoleError(CuspError, ZeroDivisionError):
    """Evaluation too close to a pole (resonance) of a meromorphic quantity."""

    exit_code = 4
    kind = "pole"
