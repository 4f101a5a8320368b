"""Exception types shared across the simulator."""


class CultureSimError(Exception):
    """Base class for all simulator errors."""


class DegenerateConfiguration(CultureSimError):
    """Point correspondences are collinear / rank-deficient."""


class PointAtInfinity(CultureSimError):
    """Homogeneous depth vanished during perspective division."""


class EmptyMask(CultureSimError):
    """Binary mask contains no set pixels."""


class OutOfRange(CultureSimError):
    """Value outside the calibrated pulse/volume range."""


class NoTipAttached(CultureSimError):
    """Liquid operation attempted without a pipette tip."""


class InsufficientVolume(CultureSimError):
    """Dispense target exceeds current pipette contents."""


class OverCapacity(CultureSimError):
    """Aspirate target would exceed pipette capacity."""


class TooFewSamples(CultureSimError):
    """Gravimetric statistics need at least two samples."""


class UnsupportedVolume(CultureSimError):
    """No ISO 8655-6 limit row for this target volume."""


class SingularJacobian(CultureSimError):
    """Jacobian is too ill-conditioned for a wrench solve."""


class NoTipsRemaining(CultureSimError):
    """Tip rack is empty."""


class NoTipToRemove(CultureSimError):
    """Tip removal requested with no tip attached."""


class AttachFailed(CultureSimError):
    """Spiral search exhausted its radius without alignment."""


class UnsupportedPlate(CultureSimError):
    """Operation defined only for the 96-well plate."""


class UnknownParameter(CultureSimError):
    """Parameter name not present in the store (malformed tree)."""


class ParameterRangeError(CultureSimError):
    """Rejected write outside a hard parameter range."""


class ConfigError(CultureSimError):
    """Run configuration failed validation."""


class AbortedOnUnrecoverable(CultureSimError):
    """Experiment hit an unrecoverable condition (e.g. empty rack with refills disabled)."""
