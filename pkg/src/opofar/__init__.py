"""Far-field quantum statistics of a type-II optical parametric
oscillator below threshold, with transverse walk-off."""

from .core import (CriticalPoints, OpoParams, TransferCoeffs, TransverseMode,
                   critical_points, effective_detuning, hopf_frequency,
                   ring_residual, transfer_coeffs)
from .correlators import SecondMoments, farfield_intensity, local_quadrature_spectrum, second_moments
from .epr import (EntanglementResult, GainSetting, PolQuadSelection,
                  entanglement_predicate, epr_scan, epr_variance, optimal_gain,
                  scheme_detection_point, scheme_selection, selection_spectra)
from .errors import (ConfigError, DegenerateDenominatorError, DegenerateModeError,
                     MomentBudgetError, NoInstabilityError, OddMomentError,
                     OpofarError, QuadratureConvergenceError,
                     UndefinedPolarizationError, ZeroDenominatorError)
from .gridio import AxisSpec, ScanGrid, read_grid_csv, write_grid_csv
from .oracle import (LinearExpansion, McSecondMoments, ModeLabel, expand_output,
                     mc_second_moments, stokes_spectral_integrand, wick_moment)
from .quadrature import QuadratureSpec, integrate_adaptive, integrate_spectrum
from .stokes import (StokesCorrelations, StokesMeans, SuperpositionVariances,
                     commutator_average, polarization_degree, stokes_means,
                     stokes_self_correlations, stokes_superposition_variances,
                     stokes_twin_correlations)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
