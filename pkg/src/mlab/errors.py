"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: ParseError -> 2, PreconditionError and
its subclasses -> 3, VerificationFailure -> 4, ResourceCapExceeded -> 5.
"""


class MlabError(Exception):
    pass


class ParseError(MlabError):
    pass


class PreconditionError(MlabError):
    pass


class UnsupportedGenusError(PreconditionError):
    pass


class InessentialCurveError(PreconditionError):
    """Curve is nullhomotopic (includes vertex-linking loops)."""


class NonSimpleCurveError(PreconditionError):
    """A chord cycle does not represent an embedded connected curve."""


class NotDisjointError(PreconditionError):
    pass


class NotMeridianError(PreconditionError):
    pass


class WrongMeridianTypeError(PreconditionError):
    pass


class InvalidCoordinatesError(PreconditionError):
    """Weight vector violates parity or triangle inequalities."""


class VerificationFailure(MlabError):
    pass


class ResourceCapExceeded(MlabError):
    pass
