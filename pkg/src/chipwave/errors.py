"""Exception types shared across the toolkit."""


class ChipwaveError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ChipwaveError, ValueError):
    """A configuration, scenario, or argument violated an invariant."""


class GeometryError(ValidationError):
    """Geometry cannot be represented on the requested grid."""


class ResourceLimitError(ChipwaveError):
    """A discretization exceeded the configured cell cap."""


class DivergenceError(ChipwaveError):
    """Field magnitude exceeded the stability guard during a run."""


class FrequencyNotMonitoredError(ChipwaveError, KeyError):
    """Requested frequency was not monitored during the run."""


class BandwidthError(ValidationError):
    """Requested frequency lies outside the usable source spectrum."""


class FingerprintMismatchError(ChipwaveError):
    """A field library does not match the scenario that was asked for."""


class FlatSpectrumError(ChipwaveError):
    """No resonance dip found in the requested band."""


class NonConvergenceWarning(UserWarning):
    """Run hit the step cap before reaching the residual-energy floor."""
