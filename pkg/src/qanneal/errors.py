"""Exception types shared across the toolchain.

The CLI maps these onto its exit codes, so raising the right class matters
more than the message text.
"""


class QAnnealError(Exception):
    pass


class InputError(QAnnealError):
    """Malformed or inconsistent problem input (CLI exit code 2)."""


class InfeasibleConstraintError(InputError):
    """A single constraint row can never be satisfied over the variable box."""

    def __init__(self, row: int, max_slack, message: str | None = None):
        self.row = row
        self.max_slack = max_slack
        super().__init__(
            message
            or f"constraint row {row} is unsatisfiable: max slack over the "
            f"variable box is {max_slack} < 0"
        )


class CapExceededError(QAnnealError):
    """Problem size exceeds an enumeration cap (CLI exit code 3)."""


class ParameterBoundError(QAnnealError):
    """A run parameter violates its allowed range (CLI exit code 4)."""


class NumericalIntegrityError(QAnnealError):
    """Density-matrix integrity check failed during integration (exit code 5)."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
