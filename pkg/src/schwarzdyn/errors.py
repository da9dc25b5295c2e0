"""Exception types shared across the package."""


class SchwarzdynError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateTriple(SchwarzdynError):
    """Three-point input contains coincident (or otherwise unusable) points."""


class InvalidRationalMap(SchwarzdynError):
    """Coefficient data does not describe a valid rational map."""


class RootFindingFailure(SchwarzdynError):
    """Polynomial root iteration failed to reach the required residual."""


class NotInFamily(SchwarzdynError):
    """The supplied map/triple does not satisfy the Schwarz-system requirements."""


class OutsideDomain(SchwarzdynError):
    """Point lies outside the domain of the Schwarz function."""


class AmbiguousBranch(SchwarzdynError):
    """Branch selection is numerically ambiguous (point too close to a critical value)."""


class FixedPointNotFound(SchwarzdynError):
    """No seed converged to an attracting fixed point."""


class NotInAnyCircle(SchwarzdynError):
    """Point is not strictly inside any generating circle of the Fuchsian set."""


class InsideFundamentalDomain(SchwarzdynError):
    """The piecewise group step is undefined on the closed fundamental domain."""
