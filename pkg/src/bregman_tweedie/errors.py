"""Exception types raised across the package."""


class BregmanTweedieError(Exception):
    """Base class for all package errors."""


class DomainError(BregmanTweedieError, ValueError):
    """An argument lies outside the domain of a function."""


class GradDomainError(DomainError):
    """A margin lies at or beyond the singular point of the loss gradient."""


class ParseError(BregmanTweedieError, ValueError):
    pass


class UnsupportedAlpha(BregmanTweedieError, ValueError):
    pass


class InvalidScale(BregmanTweedieError, ValueError):
    pass


class BranchRequired(BregmanTweedieError, ValueError):
    """The domain splits into a positive and a negative half and no side was chosen."""


class NotLegendreType(BregmanTweedieError, ValueError):
    pass


class LabelError(BregmanTweedieError, ValueError):
    pass


class InvalidPlan(BregmanTweedieError, ValueError):
    pass


class NotRescaled(BregmanTweedieError, ValueError):
    pass


class ArityError(BregmanTweedieError, ValueError):
    pass


class SelectionError(BregmanTweedieError, RuntimeError):
    pass


class NameCollisionError(BregmanTweedieError, ValueError):
    pass


class MissingCellError(BregmanTweedieError, ValueError):
    pass


class LineSearchFailure(BregmanTweedieError, RuntimeError):
    pass
