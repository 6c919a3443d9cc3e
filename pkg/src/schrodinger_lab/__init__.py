"""Numerical lab for pointwise convergence of fractional Schrodinger means along time sequences."""

from .counterexample import (
    BumpG,
    DKParams,
    DKParamsA1,
    a1_counterexample,
    a1_params,
    assign_index,
    build_schedule,
    dk_spectrum,
    make_bump,
    phase_breakdown,
    select_params,
    sharpness_verdict,
    verify_lower_bound,
)
from .maximal import (
    DecompositionReport,
    MaximalProfile,
    continuum_maximal,
    decompose_E123,
    growth_exponent_fit,
    maximal_profile,
    ratio_Hs,
    weak_level_measure,
)
from .propagator import BandCutoff, KernelProbe, evaluate_direct, evolve, evolve_band, translate_a1, ttstar_kernel
from .sequences import (
    TimeSequence,
    critical_exponent,
    dyadic_buckets,
    exponent_map,
    generate_sequence,
    is_decreasing_convex,
    lorentz_quasinorm,
)
from .spectral import GridSpec, SpectralFunction, band_project, besov_norm_21, sobolev_norm, synthesize

__version__ = "0.1.0"
