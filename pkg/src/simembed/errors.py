"""Exception types shared across the package."""


class SimembedError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SimembedError):
    """Invalid configuration, argument, or option value."""


class DataFormatError(SimembedError):
    """Input files or arrays have inconsistent shapes."""


class ParseError(SimembedError):
    """Input contains unparseable or non-finite entries."""


class DegenerateDataError(SimembedError):
    """Dataset cannot support the requested operation (single class,
    identical points, too few samples)."""


class StratificationError(SimembedError):
    """A class could not be represented in the training split."""


class ClassCoverageError(SimembedError):
    """A required class label is absent from the candidate point set."""


class DiversityDegenerateError(SimembedError):
    """Greedy landmark selection produced a single-class set when pairs
    were requested."""


class ConstructionError(SimembedError):
    """Synthetic instance construction is infeasible for the requested
    parameters."""


class NumericError(SimembedError):
    """Optimization produced a non-finite objective or weights."""
