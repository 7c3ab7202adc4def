"""Facade over the trajectory-analysis layer: conserved quantities, scaling
symmetry, mixed space-time norms and the verification experiments."""

from .conserved import energy, mass, rescale, rescale_trajectory
from .experiments import (
    AlmostConservationReport,
    BlowupReport,
    IMultiplier,
    RatioProbeReport,
    ScatteringReport,
    SmoothingReport,
    almost_conservation_experiment,
    apply_I,
    blowup_probe,
    lambda_scaling,
    nonlinear_ratio_probe,
    power_trajectory,
    scattering_monitor,
    smoothing_gain,
    smoothing_prediction,
)
from .mixed_norms import (
    MixedNormAccumulator,
    mixed_norm_N,
    mixed_norm_S,
    mixed_norm_X2,
    running_mixed_norm_S,
    sup_hs_dot,
    xdot_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
