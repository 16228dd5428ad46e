"""Exception types shared across the package."""


class EcoconError(Exception):
    """Base class for all errors raised by this package."""


class ConflictingCreationTime(EcoconError):
    """A package name was registered twice with different creation times."""


class MalformedLine(EcoconError):
    def __init__(self, line_no: int, byte_offset: int, message: str):
        super().__init__(f"line {line_no} (byte {byte_offset}): {message}")
        self.line_no = line_no
        self.byte_offset = byte_offset


class UnknownVariant(EcoconError):
    def __init__(self, line_no: int, variant: str):
        super().__init__(f"line {line_no}: unknown event variant {variant!r}")
        self.line_no = line_no
        self.variant = variant


class UnresolvedReference(EcoconError):
    def __init__(self, line_no: int, name: str):
        super().__init__(f"line {line_no}: reference to unregistered package {name!r}")
        self.line_no = line_no
        self.name = name


class EmptyRange(EcoconError):
    """A time range with no events cannot be binned into quarters."""


class SelfDependency(EcoconError):
    """A manifest lists the package itself as a dependency."""


class DimensionMismatch(EcoconError):
    """Two relations over differently sized package registries."""


class IndexOutOfRange(EcoconError):
    """A package index beyond the relation dimension."""


class LengthMismatch(EcoconError):
    """Paired samples of unequal length."""


class TooFewSamples(EcoconError):
    """Not enough observations for the requested statistic."""


class TooFewGroups(EcoconError):
    """Kruskal-Wallis needs at least two groups."""


class EmptyGroup(EcoconError):
    """A statistical group with no observations."""


class EmptySample(EcoconError):
    """An effect-size sample with no observations."""


class BothPathsEmpty(EcoconError):
    """Path similarity is undefined when both paths have no components."""


class NoFiles(EcoconError):
    """PR path similarity needs at least one touched file on each side."""


class MissingWindowReport(EcoconError):
    """Survival export requires a congruence report for every study quarter."""


class InvalidParams(EcoconError):
    """Synthetic generator parameters out of range."""
