"""
Exception hierarchy shared by the services and the command line.

Services raise these; the CLI maps them to exit statuses.
"""
from typing import Optional


class AlgebraError(ValueError):
    """Base class for every error raised by the library."""


class InputError(AlgebraError):
    """The inputs do not satisfy an operation's preconditions."""


class NegativeAnswer(AlgebraError):
    """A check was asked for and came out false."""


class ParseError(InputError):
    """A text file could not be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(f"{where}{message}")


class AlphabetMismatch(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class ObjectMismatch(InputError):
    pass


class NotReversePair(InputError):
    pass


class LanguageMismatch(InputError):
    pass


class EmptyIrreducibles(InputError):
    pass


class NotSyntactic(InputError):
    """A monoid recognizer is larger than the syntactic monoid of its language."""


class CrossCheckFailed(AlgebraError):
    """Two independent computations of the same object disagree."""


class InvalidMorphism(NegativeAnswer):
    pass


class InvalidCertificate(NegativeAnswer):
    pass


class NotAtomic(NegativeAnswer):
    pass


class NotSubatomic(NegativeAnswer):
    pass


class NotNuclear(NegativeAnswer):
    pass


class NotGroupLanguage(NegativeAnswer):
    pass


class BudgetExceeded(AlgebraError):
    """
    A search ran out of budget.

    `lower` is the best lower bound proven so far, `upper` the best
    upper bound if one is known.
    """

    def __init__(self, message: str, lower: int = 0, upper: Optional[int] = None):
        self.lower = lower
        self.upper = upper
        bounds = f"lower={lower}" if upper is None else f"lower={lower}, upper={upper}"
        super().__init__(f"{message} ({bounds})")
