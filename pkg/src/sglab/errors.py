"""Exception types shared across the package."""


class SGLabError(Exception):
    """Base class for all errors raised by sglab."""


class InvalidOrderError(SGLabError, ValueError):
    pass


class PromotionError(SGLabError, ValueError):
    """A scalar cannot be moved into the requested cyclotomic field."""


class OrderMismatchError(PromotionError):
    """Two scalars live in fields with no common embedding under the configured maximum."""


class DegenerateError(SGLabError, ValueError):
    """Input is geometrically degenerate (coincident points, concurrent frame, ...)."""


class DomainError(SGLabError, ValueError):
    """An operation was called outside its domain (off-curve point, pole, ...)."""


class ComponentBalanceError(DomainError):
    """A triple does not meet each cubic component in as many points as its degree."""


class ChartConstructionError(SGLabError):
    """A group chart needs an algebraic quantity that does not exist in the working field."""


class FormatError(SGLabError):
    """Malformed configuration file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)


class KindMismatchError(DomainError):
    """Group elements of different kinds were combined."""
