"""Exact free evolution of the fractional-dispersion equation and the
admissible-exponent calculus attached to it.

The linear flow u_t + D^alpha u_x = 0 is diagonal in Fourier space with the
unimodular multiplier exp(-i t xi |xi|^alpha), so it is applied exactly; all
Lebesgue/Sobolev exponent formulas below are plain arithmetic in
(alpha, k, s) with their admissibility windows enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import Field, Grid

INF = math.inf


@dataclass(frozen=True)
class EquationParams:
    """One member of the family u_t + D^alpha u_x + mu u^k u_x = 0."""

    alpha: float
    k: int
    mu: int

    def __post_init__(self):
        if not (1.0 <= self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in [1, 2], got {self.alpha}")
        if self.mu not in (-1, 1):
            raise ValueError(f"mu must be +1 or -1, got {self.mu}")
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")

    @property
    def critical_s(self) -> float:
        return critical_index(self.alpha, self.k)


@dataclass(frozen=True)
class StrichartzTriple:
    p: float
    q: float
    gamma: float


def dispersion_symbol(grid: Grid, alpha: float) -> np.ndarray:
    """xi * |xi|^alpha, the dispersion relation of the linear flow."""
    return grid.ks * np.abs(grid.ks) ** alpha


def free_evolve(f: Field, t: float, params: EquationParams) -> Field:
    """Apply the free group: multiply coefficients by exp(-i t xi|xi|^alpha).

    Unimodular, hence exactly unitary on L^2 and on every homogeneous
    Sobolev norm; t = 0 is the identity and times compose additively.
    """
    return f.apply_symbol(np.exp(-1j * t * dispersion_symbol(f.grid, params.alpha)))


def dispersive_decay_fit(f: Field, params: EquationParams, tgrid) -> float:
    """Least-squares slope of log sup|V(t)f| against log t.

    The sup-norm of the free flow of integrable data decays like
    t^(-1/(alpha+1)); the fit recovers that exponent when the box is large
    enough that nothing wraps around within the sampled window.
    """
    tgrid = np.asarray(tgrid, dtype=float)
    if tgrid.size < 3:
        raise ValueError("decay fit needs at least 3 time samples")
    if not np.all(np.diff(tgrid) > 0) or tgrid[0] <= 0:
        raise ValueError("tgrid must be increasing and positive")
    sups = np.array([free_evolve(f, t, params).linf() for t in tgrid])
    if np.any(sups <= 0):
        raise ValueError("degenerate fit: flow has vanishing sup-norm")
    slope, _ = np.polyfit(np.log(tgrid), np.log(sups), 1)
    return float(slope)


def default_decay_tgrid(t_min: float = 1.0, t_max: float = 100.0, num: int = 25) -> np.ndarray:
    """Geometric time samples, discarding the pre-asymptotic t < 1 range."""
    if t_min < 1.0:
        t_min = 1.0
    return np.geomspace(t_min, t_max, num)


# ---------------------------------------------------------------------------
# exponent calculus
# ---------------------------------------------------------------------------

def strichartz_gamma(p: float, q: float, alpha: float) -> StrichartzTriple:
    """Derivative gain gamma = 1/p + (alpha+1)/q - 1/2 of an admissible pair.

    Admissibility: p in [4, inf], q in [2, inf], (p, q) != (inf, inf) and
    2/p + 1/q <= 1/2.  Infinite exponents are the honest float('inf').
    """
    if not p >= 4:
        raise ValueError(f"inadmissible: p = {p} < 4")
    if not q >= 2:
        raise ValueError(f"inadmissible: q = {q} < 2")
    if math.isinf(p) and math.isinf(q):
        raise ValueError("inadmissible: (p, q) = (inf, inf)")
    if 2.0 / p + 1.0 / q > 0.5 + 1e-15:
        raise ValueError(f"inadmissible: 2/p + 1/q = {2.0/p + 1.0/q} > 1/2")
    gamma = 1.0 / p + (alpha + 1.0) / q - 0.5
    return StrichartzTriple(p=p, q=q, gamma=gamma)


def critical_index(alpha: float, k: int) -> float:
    """Scaling-critical Sobolev index 1/2 - alpha/k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 0.5 - alpha / k


def subcritical_s_max(alpha: float, k: int) -> float:
    """Upper end of the homogeneous local-theory window above critical."""
    return critical_index(alpha, k) + 2.0 * (alpha**2 - 1.0) / ((2.0 * alpha + 1.0) * k)


def scattering_exponents(s: float, alpha: float, k: int) -> tuple[float, float]:
    """Space/time Lebesgue pair (p_s, q_s) of the scattering-control norm.

        p_s = (2a+1)k / (a+2)
        q_s = (2a+1)(a+1)k / (2(a^2-1) - (s - s_k)(2a+1)k)

    q_s blows up at the top of the subcritical window; beyond it the pair is
    rejected.
    """
    if not alpha > 1:
        raise ValueError("exponent pair requires alpha > 1")
    sk = critical_index(alpha, k)
    p_s = (2.0 * alpha + 1.0) * k / (alpha + 2.0)
    denom = 2.0 * (alpha**2 - 1.0) - (s - sk) * (2.0 * alpha + 1.0) * k
    if denom <= 0:
        raise ValueError(
            f"above subcritical LWP range: s = {s} >= {subcritical_s_max(alpha, k)}"
        )
    q_s = (2.0 * alpha + 1.0) * (alpha + 1.0) * k / denom
    assert q_s >= 2.0 - 1e-12, f"q_s = {q_s} fell below 2"
    return p_s, q_s


def resolution_exponents(alpha: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Mixed Lebesgue pairs of the solution space and its nonlinear dual.

    Returns ((pX, qX), (pN, qN)): the solution component carries s + 1/2
    derivatives in L^pX_x L^qX_t, the nonlinearity is measured with the same
    derivative load in L^pN_x L^qN_t.  The pairs are Holder-dual.
    """
    if not alpha > 1:
        raise ValueError("resolution exponents degenerate at alpha = 1")
    r = 4.0 * alpha + 2.0
    pX, qX = r / (alpha - 1.0), r / 3.0
    pN, qN = r / (3.0 * (alpha + 1.0)), r / (4.0 * alpha - 1.0)
    return (pX, qX), (pN, qN)


def gwp_growth_exponent(s: float, alpha: float) -> float:
    """Polynomial-in-time growth rate of the H^s norm below L^2.

        kappa(s, alpha) = 2s / ((2a-3)^2 (3-2a-6s) - 12 (2a-3)(a+1) s)

    Defined for alpha in (3/2, 2] and -(2a-3)^2/(24a-6) < s <= 0; positive
    for s < 0 and zero at s = 0.
    """
    if not (1.5 < alpha <= 2.0):
        raise ValueError(f"growth exponent requires alpha in (3/2, 2], got {alpha}")
    s_floor = -((2.0 * alpha - 3.0) ** 2) / (24.0 * alpha - 6.0)
    if not (s_floor < s <= 0.0):
        raise ValueError(f"s = {s} outside ({s_floor}, 0]")
    denom = (2.0 * alpha - 3.0) ** 2 * (3.0 - 2.0 * alpha - 6.0 * s) \
        - 12.0 * (2.0 * alpha - 3.0) * (alpha + 1.0) * s
    kappa = 2.0 * s / denom
    assert kappa >= 0.0
    return kappa
