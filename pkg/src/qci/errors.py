"""Exception hierarchy shared across the package."""


class QciError(Exception):
    """Base class for all errors raised by :mod:`qci`."""


class NoPrimitiveRoot(QciError, ValueError):
    pass


class FieldMismatch(QciError, ValueError):
    pass


class PresentationMismatch(QciError, ValueError):
    pass


class DimensionMismatch(QciError, ValueError):
    pass


class ZeroLeadingCoordinate(QciError, ValueError):
    pass


class OddCodimension(QciError, ValueError):
    pass


class InhomogeneousElement(QciError, ValueError):
    pass


class InvalidModule(QciError, ValueError):
    pass


class ZeroElement(QciError, ValueError):
    pass


class IllDefinedMap(QciError, ArithmeticError):
    """A right multiplication does not descend to the quotient modules.

    Seeing this means a construction bug, never a legitimate input case.
    """


class WindowEmpty(QciError, ValueError):
    pass


class InvalidChainStep(QciError, ValueError):
    pass


class ZeroModule(QciError, ValueError):
    pass


class PositiveCharacteristic(QciError, ValueError):
    pass


class NonUnitalInput(QciError, ValueError):
    pass


class NonBasicAlgebra(QciError, NotImplementedError):
    """The semisimple quotient is not split commutative (simples of dim > 1)."""


class NoAlphaFound(QciError, RuntimeError):
    pass


class ConfigError(QciError, ValueError):
    pass
