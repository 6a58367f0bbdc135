"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and an optional
``context`` dict so the command line can serialize failures as JSON.
"""


class MagScatterError(Exception):
    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self):
        return {"code": self.code, "message": self.message, "context": self.context}


class NonConvergence(MagScatterError, ArithmeticError):
    code = "non_convergence"


class DecayTooSlow(MagScatterError, ValueError):
    code = "decay_too_slow"


class AnalyticOnlyFamily(MagScatterError, TypeError):
    code = "analytic_only_family"


class NotOrthogonal(MagScatterError, ValueError):
    code = "not_orthogonal"


class DiagonalEvaluation(MagScatterError, ValueError):
    code = "diagonal_evaluation"


class CurlNotZero(MagScatterError, ArithmeticError):
    code = "curl_not_zero"


class ContourThroughOrigin(MagScatterError, ValueError):
    code = "contour_through_origin"


class OutsideTangencyRange(MagScatterError, ValueError):
    code = "outside_tangency_range"


class ConfigError(MagScatterError, ValueError):
    code = "config_error"
