"""Exception types shared across the package."""


class RingCavError(Exception):
    """Base class for all errors raised by this package."""


class NonPhysicalParameter(RingCavError):
    """An input parameter is outside its physically meaningful range."""


class NoRealRoot(RingCavError):
    """Reserved: the steady-state cubic has no real root.

    A real cubic always has at least one real root, so this is defensive
    and should never be raised in practice.
    """


class UnstableDynamics(RingCavError):
    """The drift matrix has an eigenvalue with non-negative real part."""


class SingularSystem(RingCavError):
    """The Lyapunov system is (numerically) singular, i.e. the dynamics
    are marginally stable and no stationary covariance exists."""


class UnphysicalInvariants(RingCavError):
    """Symplectic invariants violate the uncertainty relations beyond
    round-off tolerance."""


class DomainError(RingCavError):
    """Argument of the thermal-entropy function below its domain."""


class HorizonTooShort(RingCavError):
    """Covariance ODE integration ended before reaching stationarity."""


class NoCrossing(RingCavError):
    """A threshold search found no zero crossing along the axis."""


class CapExceeded(RingCavError):
    """A sweep grid exceeds the configured point cap."""


class ConfigError(RingCavError):
    """Malformed configuration file or unknown/invalid key."""
