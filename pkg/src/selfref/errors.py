"""Exception types raised across the package."""


class SelfRefError(Exception):
    """Base class for every error raised by selfref."""


class ParseError(SelfRefError, ValueError):
    """Malformed concrete syntax (terms, instance specs, scenario files)."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidIdentifier(SelfRefError, ValueError):
    pass


class NotAQuotation(SelfRefError, ValueError):
    pass


class UnknownSchema(SelfRefError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown schema"


class DuplicateStipulation(SelfRefError, ValueError):
    pass


class UnstipulatedName(SelfRefError, LookupError):
    pass


class NotCoreferent(SelfRefError, ValueError):
    pass
