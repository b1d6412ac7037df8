"""Exception hierarchy shared by all modules.

Every error carries a machine-readable ``code`` used by the CLI report.
"""


class RealTermError(Exception):
    code = "error"


class GermViolation(RealTermError):
    code = "germ_violation"


class NotAUnit(RealTermError):
    code = "not_a_unit"


class EmptyInput(RealTermError):
    code = "empty_input"


class DegenerateCircle(RealTermError):
    code = "degenerate_circle"


class Unstable(RealTermError):
    code = "unstable"


class SmoothPoint(RealTermError):
    code = "smooth_point"


class NotCDV(RealTermError):
    code = "not_cdv"


class TruncationInconclusive(RealTermError):
    code = "truncation_inconclusive"


class NotGeneric(RealTermError):
    code = "not_generic"


class InternalContractViolation(RealTermError):
    code = "internal_contract_violation"


class GradingError(RealTermError):
    code = "grading_error"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTerminalQuotient(RealTermError):
    code = "not_terminal_quotient"


class ResolutionTooCoarse(RealTermError):
    code = "resolution_too_coarse"


class NotSmooth(RealTermError):
    code = "not_smooth"


class ParseError(RealTermError):
    code = "parse_error"

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownVariable(ParseError):
    code = "unknown_variable"
