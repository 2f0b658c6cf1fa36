"""Exception hierarchy shared across the package."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(GeometryError):
    """An operation was called with arguments violating its contract."""


class DimensionMismatchError(ContractError):
    pass


class RegularityError(GeometryError):
    """Radius profile violates 1 - rho'^2 >= eps_reg (or rho <= 0)."""


class DegeneracyError(GeometryError):
    """Curve is not regular enough for the requested operation."""


class FrenetDegeneracyError(DegeneracyError):
    """A curvature vanished and no frame override is available."""


class CoordinateSingularityError(GeometryError):
    """Evaluation at a coordinate pole (cos v3 ~ 0) or focal locus (Q ~ 0)."""


class NumericDomainError(GeometryError):
    """Non-finite values or evaluation outside the admissible domain."""


class RankError(GeometryError):
    """Tangent vectors of a probe are linearly dependent."""


class ResolutionError(GeometryError):
    """A lattice is too coarse for the requested finite differences."""


class InconsistencyError(GeometryError):
    """Two redundant computation routes disagree beyond tolerance."""


class IntegrationError(GeometryError):
    """ODE integration left its admissible domain or became unstable."""


class ConfigError(GeometryError):
    """Invalid run configuration (schema or value errors)."""
