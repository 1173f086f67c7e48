"""Exception types raised by the library."""


class SerreSwanError(ValueError):
    """Base class for all library errors."""


class ShapeError(SerreSwanError):
    """Invalid or mismatched algebra/module shapes."""


class ChartError(SerreSwanError):
    """A point or tangent vector lies outside the domain of a chart."""


class UnitaryError(SerreSwanError):
    pass


class UnderdeterminedError(SerreSwanError):
    """Samples do not span the Hermitian matrices of some block."""

    def __init__(self, message, blocks=()):
        super().__init__(message)
        self.blocks = tuple(blocks)


class UnsupportedModeError(SerreSwanError):
    pass


class EvaluationError(SerreSwanError):
    """A function failed inside a finite-difference stencil."""


class ConfigError(SerreSwanError):
    pass


class ExportError(SerreSwanError):
    pass
