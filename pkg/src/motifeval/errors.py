class MotifEvalError(Exception):
    pass


class ConfigError(MotifEvalError, ValueError):
    """Invalid parameter or configuration value."""


class ParseError(MotifEvalError, ValueError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
