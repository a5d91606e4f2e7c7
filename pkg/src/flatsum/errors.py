"""Exception types raised by flatsum."""


class FlatsumError(ValueError):
    """Base class for all flatsum errors."""


class NonInvertible(FlatsumError):
    pass


class EvenModulus(FlatsumError):
    pass


class UnsupportedModulus(FlatsumError):
    pass


class BadFactorization(FlatsumError):
    pass


class ModulusMismatch(FlatsumError):
    pass


class BadDivisor(FlatsumError):
    pass


class NonCoprime(FlatsumError):
    pass


class BadThreshold(FlatsumError):
    pass


class BadDelta(FlatsumError):
    pass


class NotSquarefree(FlatsumError):
    pass


class PrincipalCharacter(FlatsumError):
    pass


class UnknownSuite(FlatsumError):
    pass


class InvalidConfig(FlatsumError):
    pass


class IoFailure(FlatsumError, OSError):
    pass
