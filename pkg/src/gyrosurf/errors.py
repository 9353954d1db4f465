"""Exception types shared across the package."""


class GyrosurfError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GyrosurfError):
    """Point lies outside a chart's coordinate domain or inside a guard band."""


class DegenerateMetricError(GyrosurfError):
    """Metric is not positive-definite at the requested point."""


class NonOrthogonalChartError(GyrosurfError):
    """Operation requires a diagonal (orthogonal-coordinate) metric."""


class MissingEmbeddingError(GyrosurfError):
    """Operation requires an embedded chart (second fundamental form)."""


class SingularMassMatrixError(GyrosurfError):
    """Mass matrix could not be inverted."""


class NonFiniteStateError(GyrosurfError):
    """Integration produced NaN or infinite state entries."""


class SpeedFloorError(GyrosurfError):
    """Metric speed is below the floor where geodesic curvature is defined."""


class QuadratureError(GyrosurfError):
    """Numerical quadrature failed to converge."""


class NonSymmetricError(GyrosurfError):
    """Matrix argument was expected to be symmetric."""


class OpenLoopError(GyrosurfError):
    """Path supplied to a holonomy computation is not closed."""


class GridMismatchError(GyrosurfError):
    """Trajectories to compare do not share a time grid."""


class InsufficientSamplesError(GyrosurfError):
    """Too few trajectory samples for a discrete residual."""


class ExpressionError(GyrosurfError):
    """Malformed expression string."""


class ConfigError(GyrosurfError):
    """Invalid scenario configuration."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key
