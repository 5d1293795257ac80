"""Exception types shared across the toolkit."""


class QGradeError(Exception):
    """Base class for all toolkit errors."""


class InputError(QGradeError, ValueError):
    """Malformed or out-of-contract input (lengths, ranges, indices)."""


class CapacityError(QGradeError):
    """Requested system size exceeds the backend's stated capacity."""

    def __init__(self, message, limit=None):
        super().__init__(message)
        self.limit = limit


class ProtocolError(QGradeError):
    """Benchmark protocol cannot proceed (degenerate reference, no peak, ...)."""


class PositivityError(QGradeError):
    """Density matrix drifted below the allowed eigenvalue floor."""


class QasmError(QGradeError):
    """Base class for OpenQASM parsing failures."""


class QasmSyntaxError(QasmError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class QasmUnsupportedGateError(QasmError):
    def __init__(self, name, line):
        super().__init__(f"line {line}: unsupported gate '{name}'")
        self.name = name
        self.line = line


class SchemaError(QGradeError):
    """A JSON artifact does not conform to its documented schema."""
