"""Exception taxonomy; each operation contract names the errors it may raise."""


class GrasslabError(Exception):
    """Base class for all domain errors raised by this package."""


class UnsupportedField(GrasslabError):
    """Field order outside the supported primes."""


class DimensionMismatch(GrasslabError):
    """Matrix or vector shapes do not fit the requested operation."""


class Singular(GrasslabError):
    """A square matrix required to be invertible has deficient rank."""


class AmbientMismatch(GrasslabError):
    """Subspaces live in different ambient spaces or over different fields."""


class NotInGrassmannian(GrasslabError):
    """Subspace is not a middle-dimensional subspace of the ambient space."""


class ResourceLimit(GrasslabError):
    """Requested parameters exceed the desk-scale resource guard."""


class BadCentreDimension(GrasslabError):
    """Star centre must have dimension n - 1."""


class BadCarrierDimension(GrasslabError):
    """Top carrier must have dimension n + 1."""


class BadFlag(GrasslabError):
    """Pencil flag (M, N) violates the dimension or inclusion constraints."""


class NotAdmissible(GrasslabError):
    """Matrix pair does not define a point of the projective line."""


class BadFrame(GrasslabError):
    """Frame subspaces are not complementary or the isomorphism is singular."""


class ZeroVector(GrasslabError):
    """A nonzero vector is required."""


class NotMutuallyDistant(GrasslabError):
    """Input subspaces are not pairwise complementary."""


class TooFewMembers(GrasslabError):
    """At least three members are required."""


class NotDistantClique(GrasslabError):
    """Member set is not pairwise complementary."""


class NotADirectrix(GrasslabError):
    """Line does not meet every member of the regulus."""


class CorruptCache(GrasslabError):
    """Cache file is truncated, malformed, or fails checksum verification."""


class BadConfig(GrasslabError):
    """Suite configuration is invalid."""
