"""Exception hierarchy shared by all modules."""


class GeoshootError(Exception):
    pass


class ParseError(GeoshootError, ValueError):
    """Syntax error in an expression; ``offset`` is a byte offset into the source."""

    def __init__(self, message, offset, source=""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ParseError):
    pass


class DomainError(GeoshootError, ArithmeticError):
    """A function was evaluated outside its domain.

    ``node`` is the offending expression node when known and ``point`` the
    chart coordinates being evaluated.
    """

    def __init__(self, message, node=None, point=None):
        self.reason = message
        self.node = node
        self.point = point
        super().__init__(message)

    def __str__(self):
        parts = [self.reason]
        if self.node is not None:
            parts.append(f"in '{self.node}'")
        if self.point is not None:
            parts.append("at (%s, %s)" % tuple(_fmt(c) for c in self.point))
        return " ".join(parts)


class SingularSeriesError(DomainError):
    """Division by a power series with zero constant term."""


class DefinitenessError(DomainError):
    """The metric is not positive definite (E <= 0 or EG - F^2 <= 0)."""


def _fmt(v):
    try:
        return f"{float(v):.12g}"
    except (TypeError, ValueError):
        return str(v)
