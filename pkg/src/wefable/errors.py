class WefError(Exception):
    """Base class for all library errors."""


class NotWefable(WefError):
    def __init__(self, cycle=None, cost=None):
        self.cycle = cycle
        self.cost = cost
        msg = "allocation has a positive-cost envy cycle"
        if cycle is not None:
            msg += f": {list(cycle)} (cost {cost})"
        super().__init__(msg)


class TooLarge(WefError):
    pass


class UnsupportedProfile(WefError):
    """The operation does not accept this valuation variant."""

    def __init__(self, got: str, expected: str):
        self.got = got
        self.expected = expected
        super().__init__(f"unsupported valuation profile {got!r}; expected {expected}")


# the CLI speaks of incompatible profiles; same failure
IncompatibleProfile = UnsupportedProfile


class DuplicateValues(WefError):
    pass


class NotSuperadditive(WefError):
    pass


class ZeroTotalValue(WefError):
    pass


class NegativeBudget(WefError):
    pass


class InstanceFormatError(WefError):
    pass
