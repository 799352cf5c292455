"""Exception hierarchy shared by every module of the package."""


class ExtremalError(Exception):
    """Base class for all errors raised by :mod:`extremal`."""


class NotCoplanar(ExtremalError, ValueError):
    """The bracket ``[x, y, z]`` was requested for a non-coplanar triple."""

    def __init__(self, det):
        self.det = det
        super().__init__(f"det(x, y, z) = {det} != 0; -xJzJy is not symmetric")


class DependentRows(ExtremalError, ValueError):
    """Two points span less than a plane (all 2x2 minors vanish)."""


class SeedError(ExtremalError, ValueError):
    """A seed pair (A, B) violates one of the construction hypotheses."""


class NotSymmetric(SeedError):
    pass


class NotUnimodular(SeedError):
    pass


class Commuting(SeedError):
    pass


class PositivityFailure(SeedError):
    pass


class PrecisionExhausted(ExtremalError, ArithmeticError):
    """A certified decision stayed ambiguous at the refinement cap."""


class NoRealRoot(ExtremalError, ValueError):
    def __init__(self, discriminant):
        self.discriminant = discriminant
        super().__init__(f"polynomial has no real root (discriminant {discriminant})")


class DegenerateHeight(ExtremalError, ValueError):
    """Height 1 makes ``log H`` vanish, so no exponent can be measured."""


class IdentityFailure(ExtremalError, RuntimeError):
    """An exact polynomial identity that must hold did not (indexing bug)."""
