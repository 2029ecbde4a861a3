"""Exception types raised by the estimation pipeline."""


class SymestError(Exception):
    """Base class for all symest errors."""


class ParameterDomainError(SymestError, ValueError):
    """A map parameter lies outside the admissible parameter interval."""


class OrbitEscapeError(SymestError):
    """A forward orbit left the closure of the invariant set."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"orbit escaped the invariant set at index {index} "
                         f"(value {value!r})")


class InverseDomainError(SymestError):
    """The inverse branch was asked for a point with negative radicand.

    ``index`` names the failing candidate index when raised from a
    backward refinement walk, else None.
    """

    index: int | None = None


class CellRefinementError(SymestError):
    """A refined censoring cell came out empty."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"refined cell {index} is empty; the candidate point "
                         "is inconsistent with its censoring cell")


class EmptySupportError(SymestError):
    """A sampling operation was given an empty support."""


class TailMassError(SymestError):
    """A truncated-normal interval carries numerically negligible mass."""


class AnchorNotFoundError(SymestError):
    """No candidate index exceeds the anchor strength threshold."""


class GridEdgeError(SymestError):
    """The grid maximizer sits on the grid boundary, so it cannot be bracketed."""

    def __init__(self, index: int, points: int):
        self.index = index
        super().__init__(f"grid maximum at edge index {index} of {points} points; "
                         "restart with a shifted or wider grid")


class InfeasibleStartError(SymestError):
    """A chain initialization violates its support constraints."""

    def __init__(self, indices):
        self.indices = list(indices)
        super().__init__(f"initial state outside its support at indices {self.indices}")


class DegenerateConditionalError(SymestError):
    """The parameter conditional is degenerate (zero design mass)."""
