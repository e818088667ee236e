"""Exception taxonomy shared by every screwmech module.

The CLI maps these onto process exit codes: ModelError -> 1,
NumericalError -> 2, InvariantViolation -> 3.
"""


class ScrewmechError(Exception):
    pass


class ModelError(ScrewmechError):
    """Bad model file: schema violation, dangling reference, wrong units block."""


class NumericalError(ScrewmechError):
    """Runtime numerical failure: singular operator, exhausted mass, bad rotation."""


class ParameterizationSingularity(NumericalError):
    """Orientation coordinates hit their singular set (gimbal lock, angle pi)."""


class InvariantViolation(ScrewmechError):
    """A validation-suite property exceeded its tolerance."""
