"""Discrete mixed space-time Lebesgue norms L^p_x L^q_t over a time window.

The inner time norm is accumulated per grid point with the trapezoid rule
(running maximum for q = infinity), the outer spatial norm is the discrete
L^p with explicit dx weight.  Fractional derivatives are applied spectrally
snapshot by snapshot before accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .propagator import EquationParams, resolution_exponents, scattering_exponents
from .spectral import Field, Grid, SobolevIndex, fractional_symbol, sobolev_norm
from .trajectory import Trajectory

INF = math.inf


@dataclass
class MixedNormAccumulator:
    """Streaming accumulator for || |D|^a u ||_{L^p_x L^q_t}.

    Feed snapshots in time order with `ingest`; `value()` applies the outer
    exponents to a copy, so it can be read at any time without disturbing
    the accumulation.
    """

    grid: Grid
    p: float
    q: float
    deriv_order: float = 0.0
    per_x: np.ndarray = field(init=False)
    t_start: float | None = field(init=False, default=None)
    t_now: float | None = field(init=False, default=None)
    _prev_pow: np.ndarray | None = field(init=False, default=None)

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("Lebesgue exponents must be >= 1")
        self.per_x = np.zeros(self.grid.n)
        self._symbol = fractional_symbol(self.grid, self.deriv_order)

    def ingest(self, t: float, f: Field):
        if f.grid.n != self.grid.n or f.grid.L != self.grid.L:
            raise ValueError("snapshot grid mismatch")
        if self.t_now is not None and t <= self.t_now:
            raise ValueError("snapshots must arrive in increasing time order")
        g = np.abs(np.fft.ifft(f.coeffs * self._symbol).real)
        if math.isinf(self.q):
            self.per_x = np.maximum(self.per_x, g)
        else:
            gq = g**self.q
            if self._prev_pow is not None:
                self.per_x = self.per_x + 0.5 * (t - self.t_now) * (self._prev_pow + gq)
            self._prev_pow = gq
        if self.t_start is None:
            self.t_start = t
        self.t_now = t

    def value(self) -> float:
        """Current mixed norm; exponents are applied to a copy exactly once."""
        inner = self.per_x if math.isinf(self.q) else self.per_x ** (1.0 / self.q)
        if math.isinf(self.p):
            return float(np.max(inner))
        return float((np.sum(inner**self.p) * self.grid.dx) ** (1.0 / self.p))


def _accumulate(traj: Trajectory, p: float, q: float, deriv_order: float,
                running: bool = False):
    acc = MixedNormAccumulator(traj.grid, p=p, q=q, deriv_order=deriv_order)
    history = []
    for t, f in zip(traj.times, traj.fields):
        acc.ingest(t, f)
        if running:
            history.append(acc.value())
    return np.array(history) if running else acc.value()


def mixed_norm_S(traj: Trajectory, s: float, params: EquationParams) -> float:
    """Scattering-control norm L^{p_s}_x L^{q_s}_t (no derivative weight)."""
    p_s, q_s = scattering_exponents(s, params.alpha, params.k)
    return _accumulate(traj, p_s, q_s, 0.0)


def running_mixed_norm_S(traj: Trajectory, s: float, params: EquationParams) -> np.ndarray:
    """Running values of the scattering-control norm after each snapshot."""
    p_s, q_s = scattering_exponents(s, params.alpha, params.k)
    return _accumulate(traj, p_s, q_s, 0.0, running=True)


def mixed_norm_X2(traj: Trajectory, s: float, params: EquationParams) -> float:
    """Mixed component of the solution space: s + 1/2 derivatives in
    L^{pX}_x L^{qX}_t."""
    (pX, qX), _ = resolution_exponents(params.alpha)
    return _accumulate(traj, pX, qX, s + 0.5)


def mixed_norm_N(g_traj: Trajectory, s: float, params: EquationParams) -> float:
    """Nonlinearity-measuring norm: s + 1/2 derivatives in L^{pN}_x L^{qN}_t."""
    _, (pN, qN) = resolution_exponents(params.alpha)
    return _accumulate(g_traj, pN, qN, s + 0.5)


def sup_hs_dot(traj: Trajectory, s: float) -> float:
    return max(sobolev_norm(f, SobolevIndex(s, homogeneous=True)) for f in traj.fields)


def xdot_norm(traj: Trajectory, s: float, params: EquationParams) -> float:
    """Full solution-space norm: max of the sup-in-time homogeneous norm and
    the mixed component (the two pieces are combined by max, recorded as a
    design choice)."""
    return max(sup_hs_dot(traj, s), mixed_norm_X2(traj, s, params))
