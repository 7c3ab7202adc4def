"""Verification experiments on computed trajectories: asymptotic-state
extraction, nonlinear-estimate ratio probes, the smoothing-gain measurement,
low-regularity almost-conservation sweeps, and the exploratory blow-up probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .duhamel import _cumulative_simpson_c, _hs_dot_of_coeffs, duhamel_part
from .evolve import BlowUpError, RunResult, Stepper
from .propagator import EquationParams, dispersion_symbol
from .spectral import Field, Grid, SobolevIndex, sobolev_norm
from .trajectory import Trajectory
from .mixed_norms import mixed_norm_N, mixed_norm_S, xdot_norm


# ---------------------------------------------------------------------------
# scattering monitor
# ---------------------------------------------------------------------------

@dataclass
class ScatteringReport:
    u_plus: Field
    times: np.ndarray
    mismatch: np.ndarray        # ||u(t) - V(t) u_plus||_{Hdot^{s_k}}
    tail_estimate: float
    resolved: bool


def scattering_monitor(traj: Trajectory, params: EquationParams,
                       tail_tol: float = 1e-6) -> ScatteringReport:
    """Extract the candidate asymptotic free state from a forward run.

    u_plus = u0 + int_0^{T_end} V(-tau) N(u(tau)) dtau (the improper upper
    limit truncated at the trajectory end), together with the mismatch
    curve.  If the final integrand window is not yet negligible relative to
    the asymptotic-state norm, the report is flagged unresolved.
    """
    grid = traj.grid
    times = traj.times
    if abs(times[0]) > 1e-12:
        raise ValueError("trajectory must start at t = 0")
    if len(times) < 8:
        raise ValueError("trajectory too short for tail quadrature")
    if np.ptp(np.diff(times)) > 1e-9 * np.max(np.diff(times)):
        raise ValueError("scattering monitor needs uniformly sampled snapshots")
    dt = times[1] - times[0]
    omega = dispersion_symbol(grid, params.alpha)
    backward = np.exp(1j * np.outer(times, omega))
    stepper = Stepper(grid, params, params.k + 1)
    coeffs = traj.coeff_matrix()
    rhs = np.stack([stepper.nonlin(coeffs[i]) for i in range(len(times))])
    integrand = backward * rhs
    cumul = _cumulative_simpson_c(integrand, dx=dt, axis=0)
    u_plus_hat = coeffs[0] + cumul[-1]

    sk = params.critical_s
    mismatch = _hs_dot_of_coeffs(backward * coeffs - u_plus_hat, grid, sk)
    win = max(2, len(times) // 10)
    tail_int = _cumulative_simpson_c(integrand[-win:], dx=dt, axis=0)[-1]
    tail_estimate = float(_hs_dot_of_coeffs(tail_int, grid, sk))
    scale = float(_hs_dot_of_coeffs(u_plus_hat, grid, sk))
    resolved = tail_estimate <= tail_tol * max(scale, 1e-300)
    return ScatteringReport(Field(grid, coeffs=u_plus_hat), times, mismatch,
                            tail_estimate, resolved)


# ---------------------------------------------------------------------------
# nonlinear-estimate ratio probe
# ---------------------------------------------------------------------------

@dataclass
class RatioProbeReport:
    ratios: list[float]
    max_ratio: float
    skipped: int


def power_trajectory(traj: Trajectory, power: int) -> Trajectory:
    """Pointwise u^power per snapshot, dealiased for the product degree."""
    stepper_keep = np.abs(traj.grid.modes) <= traj.grid.n / (power + 1.0)
    fields = []
    for f in traj.fields:
        u = np.fft.ifft(np.where(stepper_keep, f.coeffs, 0.0)).real
        fields.append(Field(traj.grid, coeffs=np.where(stepper_keep, np.fft.fft(u**power), 0.0)))
    return Trajectory(traj.times, fields, traj.params)


def nonlinear_ratio_probe(trajs: list[Trajectory], s: float,
                          params: EquationParams) -> RatioProbeReport:
    """Max over an ensemble of ||u^(k+1)||_N / (||u||_S^k ||u||_X).

    The product estimate asserts this quotient is bounded; the probe
    reports it so refinement sweeps can check stability.  Members with a
    vanishing right-hand side are skipped and counted.
    """
    ratios = []
    skipped = 0
    for traj in trajs:
        denom = mixed_norm_S(traj, params.critical_s, params) ** params.k \
            * xdot_norm(traj, s, params)
        if denom == 0.0:
            skipped += 1
            continue
        g_traj = power_trajectory(traj, params.k + 1)
        ratios.append(mixed_norm_N(g_traj, s, params) / denom)
    return RatioProbeReport(ratios, max(ratios) if ratios else 0.0, skipped)


# ---------------------------------------------------------------------------
# smoothing gain
# ---------------------------------------------------------------------------

@dataclass
class SmoothingReport:
    eps_pred: float
    eps_hat: float
    slope_linear: float
    slope_duhamel: float
    fit_band: tuple[float, float]
    resolved: bool


def smoothing_prediction(s: float, alpha: float) -> float:
    """Upper end of the guaranteed extra-regularity window for the quartic
    nonlinearity: min(3s + alpha - 3/2, s + 1/2, alpha - 1)."""
    return min(3.0 * s + alpha - 1.5, s + 0.5, alpha - 1.0)


def _binned_spectral_slope(grid: Grid, coeff_power: np.ndarray,
                           band: tuple[float, float], n_bins: int = 14):
    """Slope of log |coeff| vs log xi, with |coeff|^2 bin-averaged over
    log-spaced |xi| bins to tame random phases.  Returns (slope, r2)."""
    k_abs = np.abs(grid.ks)
    lo, hi = band
    edges = np.geomspace(lo, hi, n_bins + 1)
    xs, ys = [], []
    for i in range(n_bins):
        sel = (k_abs >= edges[i]) & (k_abs < edges[i + 1])
        if not np.any(sel):
            continue
        mean_power = float(np.mean(coeff_power[sel]))
        if mean_power <= 0.0:
            continue
        xs.append(0.5 * (math.log(edges[i]) + math.log(edges[i + 1])))
        ys.append(0.5 * math.log(mean_power))
    if len(xs) < 4:
        raise ValueError("fit band resolves too few bins")
    xs, ys = np.array(xs), np.array(ys)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    return float(slope), float(r2)


def smoothing_gain(traj: Trajectory, s: float, params: EquationParams,
                   fit_band: tuple[float, float] | None = None,
                   min_r2: float = 0.8) -> SmoothingReport:
    """Measure the extra spectral decay of the integral (Duhamel) part.

    Protocol (the documented fit): the linear part of a trajectory keeps
    the initial coefficient magnitudes, the integral part decays faster by
    the smoothing gain.  Both tails are fitted by the binned log-log slope
    over `fit_band` (defaults to [0.12, 0.6] of the dealias cutoff), the
    integral-part slope averaged over the late-time half of the snapshots;
    eps_hat is the slope difference.  Fits with r^2 below `min_r2` flag the
    spectrum as unresolved.
    """
    if params.k != 3:
        raise ValueError("smoothing measurement is defined for the k = 3 flow")
    sk = params.critical_s
    if not s > sk:
        raise ValueError(f"need s > critical index {sk}")
    eps_pred = smoothing_prediction(s, params.alpha)
    grid = traj.grid
    cutoff_k = 2.0 * np.pi / grid.L * (grid.n / (params.k + 2.0))
    band = fit_band if fit_band is not None else (0.12 * cutoff_k, 0.6 * cutoff_k)

    slope_lin, r2_lin = _binned_spectral_slope(
        grid, np.abs(traj.fields[0].coeffs) ** 2, band)

    dpart = duhamel_part(traj)
    late = [i for i in range(len(traj)) if traj.times[i] >= 0.5 * traj.times[-1]]
    slopes, r2s = [], []
    for i in late:
        sl, r2 = _binned_spectral_slope(grid, np.abs(dpart.fields[i].coeffs) ** 2, band)
        slopes.append(sl)
        r2s.append(r2)
    slope_duh = float(np.mean(slopes))
    resolved = (r2_lin >= min_r2) and all(r >= min_r2 for r in r2s)
    eps_hat = slope_lin - slope_duh
    return SmoothingReport(eps_pred=eps_pred, eps_hat=eps_hat,
                           slope_linear=slope_lin, slope_duhamel=slope_duh,
                           fit_band=band, resolved=resolved)


# ---------------------------------------------------------------------------
# low-frequency smoothing operator and almost conservation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IMultiplier:
    """Low-pass-to-identity multiplier: 1 below N, (|xi|/N)^s above."""

    N: float
    s: float
    table: np.ndarray

    @classmethod
    def build(cls, grid: Grid, N: float, s: float) -> "IMultiplier":
        if not N > 1:
            raise ValueError("threshold N must exceed 1")
        if not s < 0:
            raise ValueError("the smoothing multiplier needs s < 0")
        k_abs = np.abs(grid.ks)
        with np.errstate(divide="ignore"):
            tail = np.where(k_abs > 0, (k_abs / N) ** s, 1.0)
        table = np.where(k_abs <= N, 1.0, tail)
        return cls(N=N, s=s, table=table)


def apply_I(f: Field, m: IMultiplier) -> Field:
    return f.apply_symbol(m.table)


@dataclass
class AlmostConservationReport:
    N_list: list[float]
    increments: list[float]
    slope: float
    excluded: list[float]        # thresholds whose increment sat under the noise floor


def almost_conservation_experiment(u0: Field, s: float, params: EquationParams,
                                   T: float, N_list, dt: float | None = None,
                                   noise_floor: float = 1e-13) -> AlmostConservationReport:
    """Fit the decay of | ||I_N u(T)||^2 - ||I_N u0||^2 | in the threshold N.

    The flow is run once from the fixed rough datum; the same initial/final
    pair is then reused across every threshold N.  Increments below the
    noise floor are excluded from the fit and reported.
    """
    from .evolve import SolverConfig, run

    if params.k != 3:
        raise ValueError("almost-conservation sweep is defined for the k = 3 flow")
    if not (1.5 < params.alpha <= 2.0):
        raise ValueError("requires alpha in (3/2, 2]")
    if not s < 0:
        raise ValueError("requires s < 0")
    if dt is None:
        dt = 0.2 * u0.grid.dx / max(1.0, u0.linf() ** params.k)
    result = run(u0, params, SolverConfig(dt=dt, t_end=T, store_every=10**9))
    uT = result.state.field
    u0 = result.trajectory.fields[0]   # band-limited projection actually evolved
    grid = u0.grid
    cutoff_k = 2.0 * np.pi / grid.L * (grid.n / (params.k + 2.0))
    incs, ns, excluded = [], [], []
    for N in N_list:
        if N >= cutoff_k:
            raise ValueError(f"threshold N = {N} at or above the dealias cutoff {cutoff_k:g}")
        m = IMultiplier.build(grid, N, s)
        a = _l2_sq(apply_I(uT, m))
        b = _l2_sq(apply_I(u0, m))
        inc = abs(a - b)
        if inc < noise_floor:
            excluded.append(float(N))
            continue
        ns.append(float(N))
        incs.append(inc)
    if len(ns) < 2:
        raise ValueError("not enough increments above the noise floor to fit")
    slope, _ = np.polyfit(np.log(ns), np.log(incs), 1)
    return AlmostConservationReport(ns, incs, float(slope), excluded)


def _l2_sq(f: Field) -> float:
    return float(np.sum(f.values**2) * f.grid.dx)


def lambda_scaling(N: float, s: float, alpha: float) -> float:
    """Box-dilation factor normalizing the low-pass L^2 norm: N^(6s/(3-2a-6s))."""
    return float(N ** (6.0 * s / (3.0 - 2.0 * alpha - 6.0 * s)))


# ---------------------------------------------------------------------------
# blow-up probe (exploratory)
# ---------------------------------------------------------------------------

@dataclass
class BlowupReport:
    status: str                     # "no blow-up" | "insufficient data" | "fitted"
    t_star: float | None = None
    fitted_exponent: float | None = None
    predicted_exponent: float | None = None
    samples: list[tuple[float, float]] | None = None


def blowup_probe(outcome: RunResult | BlowUpError, s: float,
                 params: EquationParams, min_samples: int = 5) -> BlowupReport:
    """Exploratory fit of the norm-inflation rate near a detected collapse.

    Pairs (T*-t, ||u(t)||_{Hdot^s}) from the partial trajectory are fitted
    in log-log; the predicted rate exponent -(s - s_k)/(alpha + 1) is
    reported alongside.  No acceptance criterion is attached to this probe.
    """
    predicted = -(s - params.critical_s) / (params.alpha + 1.0)
    if isinstance(outcome, RunResult):
        return BlowupReport(status="no blow-up")
    if not isinstance(outcome, BlowUpError):
        raise TypeError("expected a RunResult or a BlowUpError")
    traj = outcome.trajectory
    t_star = outcome.t
    idx = SobolevIndex(s, homogeneous=True)
    samples = []
    for t, f in zip(traj.times, traj.fields):
        gap = t_star - t
        if gap <= 0:
            continue
        try:
            norm = sobolev_norm(f, idx)
        except ValueError:
            continue
        if norm > 0:
            samples.append((float(gap), float(norm)))
    # collapse window: keep the latest snapshots, where the norm inflates
    samples = sorted(samples)[: max(min_samples, len(samples) // 2)]
    if len(samples) < min_samples:
        return BlowupReport(status="insufficient data", t_star=t_star,
                            predicted_exponent=predicted, samples=samples)
    gaps = np.array([g for g, _ in samples])
    norms = np.array([v for _, v in samples])
    slope, _ = np.polyfit(np.log(gaps), np.log(norms), 1)
    return BlowupReport(status="fitted", t_star=t_star, fitted_exponent=float(slope),
                        predicted_exponent=predicted, samples=samples)
