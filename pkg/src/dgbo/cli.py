"""Command-line orchestration: configuration, experiment pipelines,
persistence and reproduction recipes.

Every subcommand validates its configuration, runs the referenced pipeline,
writes a manifest plus CSV/JSON (and companion figures) into the output
directory, and exits nonzero when any attached criterion fails.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, report
from .analysis import (
    almost_conservation_experiment,
    lambda_scaling,
    running_mixed_norm_S,
    scattering_monitor,
    smoothing_gain,
)
from .duhamel import picard_solve, wave_operator
from .evolve import BlowUpError, SolverConfig, run
from .fieldio import load_checkpoint, save_checkpoint
from .frm import run_sweep
from .propagator import (
    EquationParams,
    critical_index,
    default_decay_tgrid,
    dispersive_decay_fit,
    free_evolve,
    resolution_exponents,
    scattering_exponents,
    strichartz_gamma,
)
from .spectral import Grid
from .synth import make_initial_field

DEFAULT_OUTPUT = "dgbo_out"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

DEFAULT_CONFIG = {
    "grid": {"n": 1024, "L": 100.0},
    "eq": {"alpha": 2.0, "k": 4, "mu": 1},
    "init": {"type": "gaussian", "amplitude": 0.5, "width": 2.0, "s": 0.25, "seed": 7},
    "time": {"dt": 2e-3, "t_end": 1.0, "adapt": False, "store_every": 20},
    "observers": [],
    "tolerances": {},
}


def _deep_merge(base: dict, extra: dict) -> dict:
    out = {k: v for k, v in base.items()}
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = v
    return out


def validate_config(cfg: dict) -> dict:
    g, eq, t = cfg["grid"], cfg["eq"], cfg["time"]
    if g["n"] <= 0 or g["n"] % 2:
        raise SystemExit(f"config: grid.n must be positive even, got {g['n']}")
    if g["L"] <= 0:
        raise SystemExit("config: grid.L must be positive")
    if not (1.0 <= eq["alpha"] <= 2.0):
        raise SystemExit(f"config: eq.alpha must lie in [1,2], got {eq['alpha']}")
    if eq["mu"] not in (-1, 1):
        raise SystemExit("config: eq.mu must be +1 or -1")
    if eq["k"] < 1:
        raise SystemExit("config: eq.k must be >= 1")
    if cfg["init"]["type"] not in ("gaussian", "random_hs", "band_limited", "file", "zero"):
        raise SystemExit(f"config: unknown init.type {cfg['init']['type']!r}")
    if not (0 < t["dt"] <= t["t_end"]):
        raise SystemExit("config: need 0 < time.dt <= time.t_end")
    return cfg


def load_config(args) -> dict:
    cfg = DEFAULT_CONFIG
    if getattr(args, "config", None):
        cfg = _deep_merge(cfg, json.loads(Path(args.config).read_text()))
    return load_config_from(cfg, args)


def load_config_from(cfg: dict, args) -> dict:
    overrides: dict = {"grid": {}, "eq": {}, "init": {}, "time": {}}
    for section, key, attr in (
        ("grid", "n", "n"), ("grid", "L", "L"),
        ("eq", "alpha", "alpha"), ("eq", "k", "k"), ("eq", "mu", "mu"),
        ("init", "type", "init_type"), ("init", "amplitude", "amplitude"),
        ("init", "width", "width"), ("init", "s", "s"), ("init", "seed", "seed"),
        ("init", "path", "init_path"), ("init", "m_max", "m_max"),
        ("time", "dt", "dt"), ("time", "t_end", "t_end"),
        ("time", "adapt", "adapt"), ("time", "store_every", "store_every"),
    ):
        val = getattr(args, attr, None)
        if val is not None:
            overrides[section][key] = val
    return validate_config(_deep_merge(cfg, overrides))


def _out_dir(args) -> Path:
    base = args.output_dir or os.environ.get("DGBO_OUTPUT_DIR", DEFAULT_OUTPUT)
    out = Path(base)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _equation(cfg) -> EquationParams:
    eq = cfg["eq"]
    return EquationParams(alpha=float(eq["alpha"]), k=int(eq["k"]), mu=int(eq["mu"]))


def _initial(cfg):
    grid = Grid(int(cfg["grid"]["n"]), float(cfg["grid"]["L"]))
    return make_initial_field(grid, cfg["init"], k=int(cfg["eq"]["k"]))


class Manifest:
    """Criterion collection written atomically at run end."""

    def __init__(self, command: str, cfg: dict):
        self.doc = {
            "command": command,
            "config": cfg,
            "version": __version__,
            "start_time": time.time(),
            "criteria": [],
        }

    def criterion(self, name: str, value: float, tolerance: float, passed: bool):
        self.doc["criteria"].append({
            "name": name,
            "value": None if value is None or math.isnan(value) else float(value),
            "tolerance": tolerance,
            "pass": bool(passed),
        })

    def finish(self, out: Path) -> int:
        self.doc["end_time"] = time.time()
        tmp = out / "manifest.json.tmp"
        tmp.write_text(json.dumps(self.doc, sort_keys=True, indent=2) + "\n")
        os.replace(tmp, out / "manifest.json")
        failed = [c["name"] for c in self.doc["criteria"] if not c["pass"]]
        for c in self.doc["criteria"]:
            status = "PASS" if c["pass"] else "FAIL"
            print(f"[{status}] {c['name']}: value={c['value']} tolerance={c['tolerance']}")
        if failed:
            print(f"{len(failed)} criterion(s) failed: {', '.join(failed)}", file=sys.stderr)
            return 1
        return 0


# ---------------------------------------------------------------------------
# subcommand pipelines
# ---------------------------------------------------------------------------

def cmd_evolve(args) -> int:
    cfg = load_config(args)
    out = _out_dir(args)
    manifest = Manifest("evolve", cfg)
    params = _equation(cfg)
    tcfg = cfg["time"]
    tol = {"mass": 1e-10, "energy": 1e-6, "imag": 1e-12, **cfg.get("tolerances", {})}

    if args.resume:
        state0 = load_checkpoint(args.resume)
        u0, t0, params = state0.field, state0.t, state0.params
    else:
        u0, t0 = _initial(cfg), 0.0
    horizon = float(tcfg["t_end"]) - t0
    if horizon <= 0:
        raise SystemExit("config: t_end does not extend past the resume time")
    scfg = SolverConfig(dt=float(tcfg["dt"]), t_end=horizon,
                        adapt=bool(tcfg.get("adapt", False)),
                        store_every=int(tcfg.get("store_every", 20)))
    try:
        result = run(u0, params, scfg)
    except BlowUpError as exc:
        if exc.diagnostics is not None:
            exc.diagnostics.write_csv(out / "diagnostics.csv")
        manifest.criterion("no_blowup", exc.t + t0, None, False)
        manifest.finish(out)
        return 1

    diag = result.diagnostics
    diag.write_csv(out / "diagnostics.csv")
    final = result.state
    final.t += t0
    save_checkpoint(out / "checkpoint", final)

    m = diag.column("mass")
    e = diag.column("energy")
    mass_drift = float(np.max(np.abs(m - m[0])) / max(abs(m[0]), 1e-300))
    energy_drift = float(np.max(np.abs(e - e[0])) / max(abs(e[0]), 1e-300))
    imag = float(np.max(diag.column("imag_residue")))
    manifest.criterion("mass_drift", mass_drift, tol["mass"], mass_drift <= tol["mass"])
    manifest.criterion("energy_drift", energy_drift, tol["energy"], energy_drift <= tol["energy"])
    manifest.criterion("imag_residue", imag, tol["imag"], imag <= tol["imag"])

    if not args.no_plot:
        report.save_figure(report.fig_diagnostics(diag, "nonlinear run"), out / "fig_diagnostics.png")
        report.save_figure(report.fig_field(final.field, f"u at t = {final.t:g}"), out / "fig_final_field.png")
    return manifest.finish(out)


LINEAR_DEFAULTS = {
    # narrow profile on a long box: t = 1 is already in the decay regime
    # and nothing fast wraps into the front region by t = 100
    "grid": {"n": 1 << 16, "L": 8192.0},
    "init": {"type": "gaussian", "amplitude": 1.0, "width": 0.35},
}


def cmd_linear(args) -> int:
    base = _deep_merge(DEFAULT_CONFIG, LINEAR_DEFAULTS)
    if getattr(args, "config", None):
        base = _deep_merge(base, json.loads(Path(args.config).read_text()))
    args.config = None
    cfg = load_config_from(base, args)
    out = _out_dir(args)
    manifest = Manifest("linear", cfg)
    params = _equation(cfg)
    u0 = _initial(cfg)
    tgrid = default_decay_tgrid(args.t_min, args.t_max, args.samples)
    slope = dispersive_decay_fit(u0, params, tgrid)
    predicted = -1.0 / (params.alpha + 1.0)
    sups = [free_evolve(u0, t, params).linf() for t in tgrid]
    report.write_json(out / "decay.json", {
        "experiment": "linear_decay",
        "alpha": params.alpha,
        "tgrid": list(tgrid),
        "sup_norms": sups,
        "fitted_slope": slope,
        "predicted_slope": predicted,
    })
    if not args.no_plot:
        report.save_figure(
            report.fig_loglog_fit(tgrid, sups, slope, "t", "sup|u|", "free-flow decay"),
            out / "fig_decay.png")
    err = abs(slope - predicted)
    manifest.criterion("decay_slope_error", err, 0.05, err <= 0.05)
    return manifest.finish(out)


def cmd_picard(args) -> int:
    cfg = load_config(args)
    out = _out_dir(args)
    manifest = Manifest("picard", cfg)
    params = _equation(cfg)
    u0 = _initial(cfg)
    T = float(cfg["time"]["t_end"])
    pic = picard_solve(u0, params, T, n_iter=args.iterations, n_quad=args.quadrature)

    # align the stepper grid so every oracle node is hit exactly
    node_dt = T / args.quadrature
    substeps = max(1, math.ceil(node_dt / float(cfg["time"]["dt"])))
    scfg = SolverConfig(dt=node_dt / substeps, t_end=T, store_every=substeps)
    res = run(u0, params, scfg)
    gaps = []
    for t, f in zip(pic.trajectory.times, pic.trajectory.fields):
        i = int(np.argmin(np.abs(res.trajectory.times - t)))
        if abs(res.trajectory.times[i] - t) < 1e-9 * max(T, 1.0):
            gaps.append((f - res.trajectory.fields[i]).l2())
    gap = max(gaps)
    report.write_json(out / "picard.json", {
        "experiment": "picard_oracle",
        "update_norms": pic.update_norms,
        "contraction_factor": pic.contraction_factor,
        "sup_l2_gap_vs_stepper": gap,
    })
    if not args.no_plot:
        report.save_figure(
            report.fig_curve(range(1, len(pic.update_norms) + 1), pic.update_norms,
                             "iteration", "update norm", "fixed-point updates", logy=True),
            out / "fig_picard_updates.png")
    manifest.criterion("contraction_factor", pic.contraction_factor, 1.0,
                       pic.contraction_factor < 1.0)
    manifest.criterion("oracle_gap", gap, args.gap_tol, gap <= args.gap_tol)
    return manifest.finish(out)


def cmd_waveop(args) -> int:
    cfg = load_config(args)
    out = _out_dir(args)
    manifest = Manifest("waveop", cfg)
    params = _equation(cfg)
    v0 = _initial(cfg)
    res = wave_operator(v0, params, args.t0, args.t_max,
                        n_iter=args.iterations, n_quad=args.quadrature)
    report.write_json(out / "waveop.json", {
        "experiment": "wave_operator",
        "T0": args.t0,
        "T_max": args.t_max,
        "times": list(res.trajectory.times),
        "mismatch": list(res.mismatch),
        "update_norms": res.update_norms,
        "contraction_factor": res.contraction_factor,
        "tail_estimate": res.tail_estimate,
    })
    if not args.no_plot:
        report.save_figure(
            report.fig_curve(res.trajectory.times, res.mismatch, "t",
                             "free-wave mismatch", "wave operator", logy=True),
            out / "fig_waveop_mismatch.png")
    nonincreasing = bool(np.all(np.diff(res.mismatch) <= 1e-8 * res.mismatch[0] + 1e-15))
    manifest.criterion("contraction_factor", res.contraction_factor, 1.0,
                       res.contraction_factor < 1.0)
    manifest.criterion("mismatch_nonincreasing", float(nonincreasing), None, nonincreasing)
    return manifest.finish(out)


SMOOTHING_DEFAULTS = {
    "grid": {"n": 4096, "L": 16.0 * np.pi},
    "eq": {"alpha": 2.0, "k": 3, "mu": 1},
    "init": {"type": "random_hs", "amplitude": 0.4, "s": 0.25, "seed": 11},
    "time": {"dt": 2e-4, "t_end": 0.5, "store_every": 250},
}


def cmd_smoothing(args) -> int:
    base = _deep_merge(DEFAULT_CONFIG, SMOOTHING_DEFAULTS)
    if getattr(args, "config", None):
        base = _deep_merge(base, json.loads(Path(args.config).read_text()))
    args.config = None
    cfg = validate_config(_deep_merge(base, {}))
    for attr, section, key in (("alpha", "eq", "alpha"), ("s", "init", "s"),
                               ("seed", "init", "seed"), ("n", "grid", "n"),
                               ("L", "grid", "L"), ("amplitude", "init", "amplitude"),
                               ("dt", "time", "dt"), ("t_end", "time", "t_end")):
        val = getattr(args, attr, None)
        if val is not None:
            cfg[section][key] = val
    validate_config(cfg)
    out = _out_dir(args)
    manifest = Manifest("smoothing", cfg)
    params = _equation(cfg)
    s = float(cfg["init"]["s"])
    u0 = _initial(cfg)
    tcfg = cfg["time"]
    scfg = SolverConfig(dt=float(tcfg["dt"]), t_end=float(tcfg["t_end"]),
                        store_every=int(tcfg["store_every"]))
    result = run(u0, params, scfg)
    rep = smoothing_gain(result.trajectory, s, params)
    report.write_json(out / "smoothing.json", {
        "experiment": "smoothing_gain",
        "params": {"alpha": params.alpha, "k": params.k, "mu": params.mu, "s": s},
        "eps_pred": rep.eps_pred,
        "eps_hat": rep.eps_hat,
        "slope_linear": rep.slope_linear,
        "slope_duhamel": rep.slope_duhamel,
        "fit_band": list(rep.fit_band),
        "resolved": rep.resolved,
        "tolerance_pass": bool(rep.eps_hat >= 0.5 * rep.eps_pred),
    })
    if not args.no_plot:
        from .duhamel import duhamel_part
        dp = duhamel_part(result.trajectory)
        layers = {"initial data": result.trajectory.fields[0].coeffs,
                  "integral part (final)": dp.fields[-1].coeffs}
        report.save_figure(report.fig_spectra(u0.grid, layers, "smoothing gain"),
                           out / "fig_smoothing_spectra.png")
    manifest.criterion("eps_hat_vs_half_pred", rep.eps_hat, 0.5 * rep.eps_pred,
                       rep.eps_hat >= 0.5 * rep.eps_pred)
    return manifest.finish(out)


def cmd_imethod(args) -> int:
    out = _out_dir(args)
    alpha = args.alpha if args.alpha is not None else 2.0
    s = args.s if args.s is not None else -0.1
    N_list = [float(x) for x in args.N.split(",")]
    cfg = {"alpha": alpha, "s": s, "N_list": N_list, "T": args.T, "seed": args.seed}
    manifest = Manifest("imethod", cfg)
    params = EquationParams(alpha=alpha, k=3, mu=int(args.mu or 1))
    from .synth import make_rough
    grid = Grid(args.n or 4096, 2.0 * np.pi)
    u0 = make_rough(grid, s=s, amplitude=args.amplitude or 0.5, seed=args.seed or 3)
    rep = almost_conservation_experiment(u0, s, params, args.T, N_list)
    lam = {N: lambda_scaling(N, s, alpha) for N in N_list}
    report.write_json(out / "imethod.json", {
        "experiment": "almost_conservation",
        "params": {"alpha": alpha, "k": 3, "s": s},
        "N_list": rep.N_list,
        "increments": rep.increments,
        "fitted_slope": rep.slope,
        "excluded": rep.excluded,
        "lambda_of_N": lam,
        "tolerance_pass": bool(rep.slope <= -0.2),
    })
    if not args.no_plot:
        report.save_figure(
            report.fig_loglog_fit(rep.N_list, rep.increments, rep.slope, "N",
                                  "|increment|", "almost conservation"),
            out / "fig_imethod.png")
    manifest.criterion("increment_slope", rep.slope, -0.2, rep.slope <= -0.2)
    return manifest.finish(out)


def cmd_frm(args) -> int:
    out = _out_dir(args)
    alpha = args.alpha if args.alpha is not None else 2.0
    s = args.s if args.s is not None else critical_index(alpha, 3) + 0.1
    names = args.integrals.split(",") if args.integrals else ["I1", "J1", "J2", "CS", "BAND"]
    manifest = Manifest("frm", {"alpha": alpha, "s": s, "integrals": names})
    reports = []
    for name in names:
        rep = run_sweep(name.strip().upper(), alpha, s)
        reports.append(rep)
        manifest.criterion(f"{rep['integral']}_slope", rep["fitted_slope"], 1.1, rep["pass"])
        if not args.no_plot:
            report.save_figure(
                report.fig_loglog_fit(rep["M_grid"], rep["sup_values"], rep["fitted_slope"],
                                      "M", "sup", f"{rep['integral']} sweep"),
                out / f"fig_frm_{rep['integral'].lower()}.png")
    report.write_json(out / "frm.json", {"experiment": "frm_sweeps", "alpha": alpha,
                                         "s": s, "sweeps": reports})
    return manifest.finish(out)


def cmd_strichartz(args) -> int:
    alpha = args.alpha
    if args.p is not None and args.q is not None:
        triple = strichartz_gamma(float(args.p), float(args.q), alpha)
        print(f"gamma = {triple.gamma:g}  (p = {triple.p:g}, q = {triple.q:g}, alpha = {alpha:g})")
    if args.k is not None:
        sk = critical_index(alpha, args.k)
        print(f"critical index s_k = {sk:g}")
        s = args.s if args.s is not None else sk
        try:
            ps, qs = scattering_exponents(s, alpha, args.k)
            print(f"scattering pair (p_s, q_s) = ({ps:g}, {qs:g}) at s = {s:g}")
        except ValueError as exc:
            print(f"scattering pair rejected: {exc}")
        (pX, qX), (pN, qN) = resolution_exponents(alpha)
        print(f"resolution pairs: X = ({pX:g}, {qX:g}), N = ({pN:g}, {qN:g})")
    return 0


def cmd_scatter(args) -> int:
    cfg = load_config(args)
    out = _out_dir(args)
    manifest = Manifest("scatter", cfg)
    params = _equation(cfg)
    u0 = _initial(cfg)
    tcfg = cfg["time"]
    scfg = SolverConfig(dt=float(tcfg["dt"]), t_end=float(tcfg["t_end"]),
                        store_every=int(tcfg.get("store_every", 20)))
    result = run(u0, params, scfg)
    traj = result.trajectory
    sk = params.critical_s
    running = running_mixed_norm_S(traj, sk, params)
    rep = scattering_monitor(traj, params)
    mid = int(np.argmin(np.abs(rep.times - 0.5 * rep.times[-1])))
    plateau = float((running[-1] - running[int(0.9 * (len(running) - 1))])
                    / max(running[-1], 1e-300))
    decay_ratio = float(rep.mismatch[-1] / max(rep.mismatch[mid], 1e-300))
    report.write_json(out / "scatter.json", {
        "experiment": "scattering_monitor",
        "times": list(rep.times),
        "mismatch": list(rep.mismatch),
        "running_S_norm": list(running),
        "plateau_increment": plateau,
        "mismatch_ratio_end_vs_half": decay_ratio,
        "tail_estimate": rep.tail_estimate,
        "resolved": rep.resolved,
    })
    if not args.no_plot:
        report.save_figure(report.fig_curve(rep.times, rep.mismatch, "t",
                                            "mismatch", "scattering monitor", logy=True),
                           out / "fig_scatter_mismatch.png")
        report.save_figure(report.fig_curve(traj.times, running, "T",
                                            "running S norm", "scattering control"),
                           out / "fig_scatter_snorm.png")
    manifest.criterion("plateau_increment", plateau, 0.01, plateau < 0.01)
    manifest.criterion("mismatch_ratio", decay_ratio, 0.10, decay_ratio < 0.10)
    return manifest.finish(out)


def _run_sweep_item(item: tuple[int, dict, str]) -> tuple[int, int]:
    idx, doc, out_base = item
    sub = doc["command"]
    arg_list = [sub, "--output-dir", str(Path(out_base) / f"run_{idx:03d}")]
    cfg_path = Path(out_base) / f"run_{idx:03d}_config.json"
    cfg_path.parent.mkdir(parents=True, exist_ok=True)
    cfg_path.write_text(json.dumps(doc.get("config", {})))
    if doc.get("config"):
        arg_list += ["--config", str(cfg_path)]
    arg_list += [str(a) for a in doc.get("args", [])]
    return idx, main(arg_list)


def cmd_sweep(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    runs = doc["runs"]
    out = _out_dir(args)
    items = [(i, r, str(out)) for i, r in enumerate(runs)]
    codes = {}
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for idx, code in pool.map(_run_sweep_item, items):
                codes[idx] = code
    else:
        for item in items:
            idx, code = _run_sweep_item(item)
            codes[idx] = code
    failed = [i for i, c in codes.items() if c != 0]
    report.write_json(out / "sweep.json", {"runs": len(runs), "failed": failed})
    if failed:
        print(f"sweep: {len(failed)} run(s) failed: {failed}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", help="JSON config document")
    p.add_argument("--output-dir", help="output directory (default $DGBO_OUTPUT_DIR)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.add_argument("--n", type=int)
    p.add_argument("--L", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--mu", type=int)
    p.add_argument("--init-type", dest="init_type")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--init-path", dest="init_path")
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--adapt", action="store_const", const=True, default=None)
    p.add_argument("--store-every", dest="store_every", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dgbo", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="nonlinear run with diagnostics CSV")
    _add_common(p)
    p.add_argument("--resume", help="checkpoint directory to continue from")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("linear", help="free flow and dispersive decay fit")
    _add_common(p)
    p.add_argument("--t-min", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=100.0)
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(fn=cmd_linear)

    p = sub.add_parser("picard", help="fixed-point oracle cross-check")
    _add_common(p)
    p.add_argument("--iterations", type=int, default=8)
    p.add_argument("--quadrature", type=int, default=64)
    p.add_argument("--gap-tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_picard)

    p = sub.add_parser("waveop", help="wave-operator construction")
    _add_common(p)
    p.add_argument("--t0", type=float, default=20.0)
    p.add_argument("--t-max-op", dest="t_max", type=float, default=60.0)
    p.add_argument("--iterations", type=int, default=6)
    p.add_argument("--quadrature", type=int, default=160)
    p.set_defaults(fn=cmd_waveop)

    p = sub.add_parser("scatter", help="long-run scattering monitor")
    _add_common(p)
    p.set_defaults(fn=cmd_scatter)

    p = sub.add_parser("smoothing", help="integral-part smoothing measurement")
    _add_common(p)
    p.set_defaults(fn=cmd_smoothing)

    p = sub.add_parser("imethod", help="almost-conservation sweep")
    _add_common(p)
    p.add_argument("--N", default="32,64,128,256", help="comma list of thresholds")
    p.add_argument("--T", type=float, default=1.0)
    p.set_defaults(fn=cmd_imethod)

    p = sub.add_parser("frm", help="restricted-integral sweeps and slope fits")
    _add_common(p)
    p.add_argument("--integrals", help="comma list from I1,J1,J2,CS,BAND")
    p.set_defaults(fn=cmd_frm)

    p = sub.add_parser("strichartz", help="exponent calculator")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=float)
    p.set_defaults(fn=cmd_strichartz)

    p = sub.add_parser("sweep", help="parallel grid over config lists")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
