"""Pseudospectral simulation and verification lab for the family

    u_t + D^alpha u_x + mu u^k u_x = 0

on a large periodic box: exact free evolution, interaction-picture RK4
nonlinear solver, an independent Picard/Duhamel oracle, mixed space-time
norms, scattering/smoothing/almost-conservation experiments, and
frequency-restricted integral sweeps.
"""

__version__ = "0.1.0"

from .propagator import (
    EquationParams,
    StrichartzTriple,
    critical_index,
    dispersive_decay_fit,
    free_evolve,
    gwp_growth_exponent,
    resolution_exponents,
    scattering_exponents,
    strichartz_gamma,
)
from .spectral import (
    Field,
    Grid,
    SobolevIndex,
    bessel_potential,
    check_symbol_identity,
    dealias,
    fractional_derivative,
    hilbert,
    sobolev_norm,
)
from .trajectory import Trajectory

__all__ = [name for name in dir() if not name.startswith("_")]
