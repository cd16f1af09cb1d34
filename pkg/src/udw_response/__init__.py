"""Detector response of an inertial two-level system in 1+1D.

Transition probabilities of a sharply switched detector coupled to a
massive scalar field prepared either in the vacuum or in a
non-relativistic single-particle Gaussian wave packet, split into the
vacuum part P_v and the matter part P_m.  Everything is dimensionless
in units of the packet momentum width sigma.
"""

__version__ = "0.1.0"

from .kernels import (
    NonRelativisticValidityWarning,
    ParticleState,
    WorldlinePoint,
    matter_amplitude_factor,
    matter_amplitude_prefactor,
    phi_squared_matter,
    qm_density,
    qm_wavefunction,
    wightman_matter,
    wightman_vacuum,
)
from .quadrature import (
    ConvergenceError,
    IntegralResult,
    QuadratureSpec,
    extrapolate_eps,
    extrapolate_values,
    integrate_1d,
    integrate_2d,
)
from .response import (
    DetectorConfig,
    MatterUnderflowError,
    ResonanceProximityError,
    ResponseResult,
    avg_to_matter_ratio,
    p_avg,
    p_matter_analytic,
    p_matter_auto,
    p_matter_quad,
    p_matter_quad2d,
    p_matter_resonance,
    p_total,
    p_vacuum,
    p_vacuum_bruteforce,
    ratio_normalized,
)
from .specfun import (
    EULER_GAMMA,
    SpecialFunctionDomainError,
    bessel_j0,
    bessel_k0_complex,
    bessel_y0,
    erfc_complex,
    exp_integral_half,
    faddeeva_w,
)
from .experiments import (
    FIGURE_IDS,
    SweepAxis,
    SweepDataset,
    SweepSpec,
    ValidationCheck,
    ValidationReport,
    figure_dataset,
    run_sweep,
    run_validation,
)
