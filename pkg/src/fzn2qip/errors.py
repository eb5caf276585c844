"""Error types shared across the compiler.

Diagnostics raised by the frontend carry a source location and a stable
code string so the CLI can print ``file:line:col: code: message`` lines.
Everything else is a plain exception with a code used for reporting.
"""

from __future__ import annotations


class Fzn2QipError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class Diagnostic(Fzn2QipError):
    """An error tied to a position in the input text."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.line = line
        self.col = col

    def render(self, filename: str) -> str:
        return f"{filename}:{self.line}:{self.col}: {self.code}: {self.message}"


class FznSyntaxError(Diagnostic):
    code = "syntax-error"


class UnsupportedItem(Diagnostic):
    """An item outside the supported FlatZinc subset (floats, set vars, ...)."""

    code = "unsupported-item"

    def __init__(self, what: str, line: int = 0, col: int = 0):
        super().__init__(f"unsupported: {what}", line, col)
        self.what = what


class UndeclaredIdentifier(Diagnostic):
    code = "undeclared-identifier"

    def __init__(self, name: str, line: int = 0, col: int = 0):
        super().__init__(f"undeclared identifier '{name}'", line, col)
        self.name = name


class ArityMismatch(Diagnostic):
    code = "arity-mismatch"


class KindMismatch(Diagnostic):
    code = "kind-mismatch"


class EmptyDomain(Fzn2QipError):
    """A domain became (or was declared) empty."""

    code = "empty-domain"


class CompileUnsat(Fzn2QipError):
    """Compilation proved the model unsatisfiable (empty restricted domain)."""

    code = "unsat"

    def __init__(self, message: str, source: str = ""):
        super().__init__(message)
        self.source = source


class OverflowLimit(Fzn2QipError):
    """Bound arithmetic left the supported 64-bit-safe integer range."""

    code = "overflow"


class LengthMismatch(Fzn2QipError):
    code = "length-mismatch"


class ValueOutOfDomain(Fzn2QipError):
    code = "value-out-of-domain"


class UnsupportedExponent(Fzn2QipError):
    code = "unsupported-exponent"


class SchemaError(Fzn2QipError):
    """Malformed serialized problem text."""

    code = "schema-error"


class CapExceeded(Fzn2QipError):
    """Enumeration state space exceeds the configured cap."""

    code = "cap-exceeded"

    def __init__(self, size: int, cap: int):
        super().__init__(f"state space of {size} assignments exceeds cap {cap}")
        self.size = size
        self.cap = cap


# Bound arithmetic stays well inside int64 so numpy/numba enumeration is safe.
INT_LIMIT = 2**62


def checked_int(value: int) -> int:
    """Return ``value`` or raise OverflowLimit if it left the safe range."""
    if value > INT_LIMIT or value < -INT_LIMIT:
        raise OverflowLimit(f"integer {value} exceeds the supported range")
    return value
