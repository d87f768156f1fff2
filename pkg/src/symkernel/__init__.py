"""Spectral numerics on symmetric spaces of noncompact type: root data, Plancherel density,
conical partitions of unity, spherical functions, Schrodinger kernels and
dispersive bookkeeping."""

from .barycentric import CutoffProfile, charts, normalized_chart, partition_deviation, select_c1, support_verify
from .dispersive import (AdmissiblePair, RegimeReport, classify_regime, dispersive_exponents, is_admissible,
                         kunze_stein_bound)
from .errors import (CatalogueError, ConfigurationError, DomainError, UnsupportedDimensionError,
                     UnsupportedSpaceError)
from .kernel import (DecayFit, KernelSample, decay_slope, inner_integral_I, jacobian_J, schrodinger_kernel,
                     subordination_check)
from .plancherel import asymptotic_slope, density, log_density, plancherel_density
from .rootsys import LABELS, RootSystem, build_root_system, half_sum_rho, weyl_group
from .spherical import phi0_envelope, phi_closed_form, phi_quadrature

__all__ = [
    "LABELS", "RootSystem", "build_root_system", "half_sum_rho", "weyl_group",
    "density", "log_density", "plancherel_density", "asymptotic_slope",
    "CutoffProfile", "charts", "normalized_chart", "partition_deviation", "select_c1", "support_verify",
    "phi_quadrature", "phi_closed_form", "phi0_envelope",
    "KernelSample", "DecayFit", "schrodinger_kernel", "inner_integral_I", "subordination_check", "jacobian_J",
    "decay_slope",
    "AdmissiblePair", "RegimeReport", "kunze_stein_bound", "dispersive_exponents", "is_admissible",
    "classify_regime",
    "CatalogueError", "ConfigurationError", "DomainError", "UnsupportedSpaceError", "UnsupportedDimensionError",
]
