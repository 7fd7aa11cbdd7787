"""Exception hierarchy shared by all volprod modules."""


class GeometryError(Exception):
    """Base class for all volprod errors."""


class DegenerateInput(GeometryError):
    """Input points are affinely dependent (flat) at tolerance."""


class UnboundedRegion(GeometryError):
    """Halfspace intersection has a nontrivial recession cone."""


class EmptyRegion(GeometryError):
    """Halfspace intersection contains no point."""


class ZeroDirection(GeometryError):
    """A direction vector is (numerically) zero."""


class OriginNotInterior(GeometryError):
    """The origin is not strictly inside the body."""


class SingularMatrix(GeometryError):
    """Linear map has |det| below the singularity guard."""


class NotSymmetric(GeometryError):
    """Body lacks the symmetry required by the operation."""


class NotCentrallySymmetric(NotSymmetric):
    """Body is not centrally symmetric."""


class NotOnBoundary(GeometryError):
    """Point expected on a body boundary is not there at tolerance."""


class NotClosed(GeometryError):
    """Vertex set is not closed under the given group element."""


class SymmetryViolation(GeometryError):
    """A symmetry-implied identity failed beyond tolerance."""


class CertificateInvalid(GeometryError):
    """A certificate inequality missed by more than the tolerance."""

    def __init__(self, check_name, lhs, rhs):
        self.check_name = check_name
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"check {check_name!r} failed: {lhs!r} < {rhs!r}")


class NoConvergence(GeometryError):
    """An iterative routine exhausted its iteration budget."""
