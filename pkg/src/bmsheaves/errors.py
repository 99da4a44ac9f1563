"""Exception types shared across the package."""


class InputError(ValueError):
    """User-supplied data is invalid (bad matrix, bad word, bad flag)."""


class RealizationError(RuntimeError):
    """Computed data falsifies an assumption of the rational realization.

    Raised when the integer reflection representation misbehaves: a rank-one
    deviation from the identity that is not an involution, a reflection root
    with mixed signs, two distinct reflections with proportional roots, a
    double edge, or incomparable edge endpoints.
    """


class CapError(RuntimeError):
    """The degree cap is too small: generators appeared at the top of the
    computed range, so the answer below the cap cannot be trusted."""


class NotGradedFreeError(RuntimeError):
    """Degreewise dimensions are not a nonnegative combination of shifted
    Hilbert series of the polynomial ring, i.e. not graded free at this cap."""


class InconsistencyError(RuntimeError):
    """An internally derived identity failed (these should be unreachable and
    indicate either a bug or a falsified structural claim)."""
