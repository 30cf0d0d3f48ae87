"""Exception hierarchy shared by all cmray modules."""


class CMRayError(ValueError):
    """Base class for every error raised by cmray."""


# qfield
class NotADiscriminant(CMRayError):
    pass


class NotFundamental(CMRayError):
    pass


class NotImaginary(CMRayError):
    pass


class NotPrime(CMRayError):
    pass


# rayclass
class ModulusTrivial(CMRayError):
    pass


class ModulusNotRational(CMRayError):
    pass


class NotPrimeToModulus(CMRayError):
    pass


class NoSuchCharacter(CMRayError):
    pass


# modfun
class NotInUpperHalfPlane(CMRayError):
    pass


class PrecisionUnattainable(CMRayError):
    pass


class PoleAtLatticePoint(CMRayError):
    pass


class LabelsEquivalent(CMRayError):
    pass


# invariants
class DenominatorNotDividingN(CMRayError):
    """Internal consistency failure: indicates an ideal-arithmetic bug."""


class NNotCoprimeTo6(CMRayError):
    pass


class ExceptionalField(CMRayError):
    pass


# limitformula
class PrincipalCharacter(CMRayError):
    pass


class TruncationTooSmall(CMRayError):
    pass


class GammaInvalid(CMRayError):
    pass


class SearchExhausted(CMRayError):
    pass


class RHSZero(CMRayError):
    pass


# fieldgen
class RecognitionFailed(CMRayError):
    pass


class PathMismatch(CMRayError):
    """Two independent evaluation routes for the same quantity disagree."""
