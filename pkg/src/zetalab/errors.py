"""Exception hierarchy.

Errors split into two families that the CLI maps to different exit codes:
*hard* check failures (a mathematical identity or bound did not hold) and
*input* errors (the request itself was malformed or too large).
"""

from __future__ import annotations


class ZetaLabError(ValueError):
    """Base class. ``label`` names the offending object when known."""

    hard = False

    def __init__(self, message: str, label: str | None = None):
        self.label = label
        if label:
            message = f"[{label}] {message}"
        super().__init__(message)


class HardCheckError(ZetaLabError):
    hard = True


class InputError(ZetaLabError):
    hard = False


# -- L-function validation ---------------------------------------------------

class RHViolation(HardCheckError):
    def __init__(self, message: str, root: complex | None = None, label: str | None = None):
        self.root = root
        super().__init__(message, label)


class NotSelfInversive(HardCheckError):
    pass


class BadConstantTerm(InputError):
    pass


class NotPrimePower(InputError):
    pass


class PoleOrZeroAt(InputError):
    def __init__(self, s: complex, label: str | None = None):
        self.s = s
        super().__init__(f"evaluation point s={s!r} hits a zero or pole", label)


class RadiusExceeded(InputError):
    pass


# -- finite fields -------------------------------------------------------------

class NotPrime(InputError):
    pass


class SizeGuardExceeded(InputError):
    pass


class NoSubfieldEmbedding(InputError):
    pass


# -- curves and surfaces -------------------------------------------------------

class NotSquarefree(InputError):
    pass


class NonIntegerCoefficient(HardCheckError):
    pass


class NegativePhi(HardCheckError):
    pass


class CharTooSmall(InputError):
    pass


class ConstantCurve(InputError):
    pass


class OverdeterminationFailure(HardCheckError):
    pass


class IdentityMismatch(HardCheckError):
    pass


# -- asymptotics ----------------------------------------------------------------

class TooFewMembers(InputError):
    pass


class AllNegligible(InputError):
    pass


class HypothesisNotMet(InputError):
    pass


class SOutOfRange(InputError):
    pass


class DomainError(InputError):
    pass


class MissingSection(InputError):
    pass
