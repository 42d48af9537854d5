"""Exception types raised across gapstat."""


class GapstatError(Exception):
    """Base class for all gapstat errors."""


class EmptySampleError(GapstatError, ValueError):
    def __init__(self):
        super().__init__("sample set has no elements")


class OutOfRangeError(GapstatError, ValueError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"value {value!r} at index {index} lies outside [0, 1]")


class GridMismatchError(GapstatError, ValueError):
    def __init__(self, left, right):
        super().__init__(f"cannot merge bucket summaries over {left} and {right} buckets")


class CutoffExceededError(GapstatError, ValueError):
    def __init__(self, n, cutoff):
        self.n = n
        self.cutoff = cutoff
        super().__init__(
            f"exact max-gap law requested for N={n} > cutoff {cutoff}; "
            "use the asymptotic form"
        )


class TooFewSamplesError(GapstatError, ValueError):
    pass


class BandTooWideError(GapstatError, ValueError):
    pass


class ParseError(GapstatError, ValueError):
    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")


class ExperimentError(GapstatError, RuntimeError):
    def __init__(self, sweep_value, trial, cause):
        self.sweep_value = sweep_value
        self.trial = trial
        super().__init__(f"sweep value {sweep_value!r}, trial {trial}: {cause}")
