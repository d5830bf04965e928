"""Exception and warning types shared across the toolkit."""


class DynsampError(Exception):
    """Base class for all toolkit errors."""


class DegenerateInput(DynsampError, ValueError):
    """Input violates a structural precondition (shape, finiteness, range)."""


class NotDiagonalizable(DynsampError):
    """A full eigenbasis could not be certified at the working tolerances.

    Callers should fall back to the Jordan-structure path.
    """


class NotFound(DynsampError):
    """A bounded search exhausted its budget without a witness."""


class SearchSpaceTooLarge(DynsampError):
    """Exhaustive enumeration refused: dimension exceeds the configured cap."""


class InfeasiblePlacement(DynsampError):
    """No sensor set up to the full site set satisfies the criterion."""


class HypothesisViolated(DynsampError):
    """Input is outside the regime a demonstration assumes."""


class UntrustedFactorizationWarning(UserWarning):
    """A similarity was computed but is ill-conditioned or inconsistent.

    Results derived from it are reported with this warning instead of
    being suppressed.
    """
