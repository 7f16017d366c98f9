"""Exception hierarchy shared by every module."""


class AcframeError(Exception):
    """Base class for all library errors."""


class DomainError(AcframeError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class CapacityError(AcframeError):
    """An exhaustive enumeration would exceed its configured bound."""

    def __init__(self, message: str, bound: int):
        super().__init__(f"{message} (bound {bound})")
        self.bound = bound


class UnknownOperatorError(AcframeError, LookupError):
    """An operator name does not resolve for the requested decision set."""


class ValidationError(AcframeError):
    """A policy term or request is not admissible in a model."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class PolicySyntaxError(AcframeError):
    """Malformed policy DSL text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class NonMonotoneIdealError(AcframeError):
    """Raised when a monotone realizer is handed a non-monotone ideal policy."""

    def __init__(self, report):
        self.report = report
        lower, upper, d_lower, d_upper = report.witness
        super().__init__(
            f"ideal policy is not monotone: {d_lower.value} at {sorted(lower)} "
            f"but {d_upper.value} at {sorted(upper)}"
        )
