"""Exception types shared across the package."""


class EpsVerifyError(Exception):
    """Base class for every error raised by this package."""


class ModulusNotIrreducible(EpsVerifyError):
    pass


class PrecisionExhausted(EpsVerifyError):
    """A quantity is indistinguishable from zero at the working precision."""


class ResidueEquationUnsolvable(EpsVerifyError):
    """A Frobenius equation has no solution at the current unramified degree."""

    def __init__(self, message: str, achieved: int = 0):
        super().__init__(message)
        self.achieved = achieved


class RingTooSmall(EpsVerifyError):
    """The coefficient ring lacks a root of unity that a character needs."""


class PatternViolation(EpsVerifyError):
    pass


class ConvergenceGuard(EpsVerifyError):
    pass


class SingularAtCharacter(EpsVerifyError):
    def __init__(self, character, message: str = ""):
        super().__init__(message or f"matrix is singular at character {character}")
        self.character = character


class LevelUnsupported(EpsVerifyError):
    pass


class SearchExhausted(EpsVerifyError):
    pass


class TwistTrivialOnN(EpsVerifyError):
    pass


class NotAUnit(EpsVerifyError):
    pass


class ClosedFormMismatch(EpsVerifyError):
    def __init__(self, character, message: str = ""):
        super().__init__(message or f"closed form mismatch at character {character}")
        self.character = character


class FactorizationMismatch(EpsVerifyError):
    def __init__(self, character, message: str = ""):
        super().__init__(message or f"factorization mismatch at character {character}")
        self.character = character


class InvalidParameters(EpsVerifyError):
    pass
