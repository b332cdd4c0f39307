"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ForeignSymbol(ToolkitError):
    """A word uses a symbol that is not declared in the relevant alphabet."""


class AlphabetMismatch(ToolkitError):
    """Two objects that must share an alphabet do not."""


class RunExplosion(ToolkitError):
    """The number of accepting runs exceeds the configured cap."""


class BudgetExceeded(ToolkitError):
    """An enumeration (parses, words) exceeds the configured budget."""


class NotFunctionalInput(ToolkitError):
    """An operation requiring a functional transducer received one that is not."""


class AmbiguousInput(ToolkitError):
    """An operation requiring an unambiguous transducer received one that is not."""


class UnknownName(ToolkitError):
    """Request for a builder or pass name that does not exist."""


class AmbiguousK(ToolkitError):
    """A regular expression that must be unambiguous is not."""


class InexactDomain(ToolkitError):
    """A check needs an exact domain automaton but only an over-approximation exists."""


class UndefinedStep(ToolkitError):
    """A register machine reached a (state, symbol) pair with no update rule."""


class HeadOutOfTape(ToolkitError):
    """A two-way machine moved its head outside the marked tape."""


class RteSyntaxError(ToolkitError):
    """Parse error in expression text, with position information."""

    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"{line}:{col}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)
