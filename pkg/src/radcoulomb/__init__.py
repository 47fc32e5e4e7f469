"""Radial Coulomb energies and fractional Sobolev norms on R^3."""
__version__ = "0.1.0"

from .counterexample import SweepRecord, fit_slope, run_sweep, tent_closed_forms
from .exponents import ExponentSet, exponent_set, theta_gn
from .functionals import (
    FunctionalReport,
    coulomb_newton,
    coulomb_spectral,
    dirichlet_energy,
    energy_norm,
    lp_norm,
    sobolev_gagliardo,
    sobolev_spectral,
)
from .optimize import OptimizerConfig, best_constant_search, lambda_minimize, quotient_J
from .profiles import GaussianMixture, PiecewiseLinear, Tent, gaussian_mixture, load_profile, make_tent
from .quadrature import QuadratureSpec, radial_integral
from .transforms import SpectralProfile, inverse_radial_fourier, radial_fourier

__all__ = [
    "__version__",
    "SweepRecord", "fit_slope", "run_sweep", "tent_closed_forms",
    "ExponentSet", "exponent_set", "theta_gn",
    "FunctionalReport", "coulomb_newton", "coulomb_spectral", "dirichlet_energy", "energy_norm",
    "lp_norm", "sobolev_gagliardo", "sobolev_spectral",
    "OptimizerConfig", "best_constant_search", "lambda_minimize", "quotient_J",
    "GaussianMixture", "PiecewiseLinear", "Tent", "gaussian_mixture", "load_profile", "make_tent",
    "QuadratureSpec", "radial_integral",
    "SpectralProfile", "inverse_radial_fourier", "radial_fourier",
]
