"""Exception types raised by the library."""


class LandsimError(Exception):
    """Base class for all landsim errors."""


class PointAtCameraPlane(LandsimError):
    """A point to project lies (numerically) on the camera plane, z ~ 0."""


class DegenerateConfiguration(LandsimError):
    """Point configuration does not determine a unique solution."""


class NoConvergence(LandsimError):
    """Iterative refinement hit its iteration cap without converging."""


class InsufficientViews(LandsimError):
    """Too few views for closed-form intrinsics calibration."""


class DegenerateMotion(LandsimError):
    """Calibration views do not constrain the intrinsics (e.g. identical
    views or views related by pure translation)."""


class TargetBehindCamera(LandsimError):
    """Synthetic detection target has non-positive depth in the camera frame."""


class NonMonotonicTime(LandsimError):
    """Timestamps went backwards in a stream that requires monotone time."""


class ConfigInvalid(LandsimError):
    """Scenario or sub-config violates its invariants."""
