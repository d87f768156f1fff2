"""Exception types shared across the package."""


class CatalogueError(ValueError):
    """Unknown space label."""


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class ConfigurationError(ValueError):
    """Numerical setup cannot produce a meaningful result (too few points, bad constant...)."""


class UnsupportedSpaceError(NotImplementedError):
    """The requested computation is not available for this catalogue entry."""


class UnsupportedDimensionError(NotImplementedError):
    """The admissibility region is not defined here for this dimension."""
