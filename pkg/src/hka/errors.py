"""Exception and warning types shared across the package."""


class HKAError(Exception):
    """Base class for all package errors."""


class DimensionError(HKAError):
    pass


class NotBooleanError(HKAError):
    pass


class TruncationError(HKAError):
    pass


class NotProvidedError(HKAError):
    pass


class OracleMismatch(HKAError):
    """Two independent computations that must agree did not."""


class ChainError(HKAError):
    pass


class BoundRequired(HKAError):
    pass


class SphereError(HKAError):
    pass


class NotInvertible(HKAError):
    pass


class NotAFiller(HKAError):
    pass


class HypothesisFailed(HKAError):
    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class MissingFiller(HKAError):
    def __init__(self, branching, detail=""):
        self.branching = branching
        super().__init__(f"no filler for branching {branching}" + (f" ({detail})" if detail else ""))


class FuelExhausted(HKAError):
    pass


class NotTerminating(HKAError):
    pass


class NotJoinable(HKAError):
    def __init__(self, branchings):
        self.branchings = list(branchings)
        super().__init__(f"{len(self.branchings)} non-joinable branching(s): {self.branchings}")


class ParseError(HKAError):
    pass


class TruncationWarning(UserWarning):
    """Raised as a warning when a verdict only holds relative to truncation bounds."""
