"""Field persistence: raw little-endian float64 values next to a JSON
sidecar {n, L, t}, plus solver checkpoints built from that format."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .evolve import SolverState
from .propagator import EquationParams
from .spectral import Field, Grid


def save_field(path, f: Field, t: float = 0.0) -> None:
    """Write values as little-endian float64 and the {n, L, t} sidecar."""
    path = Path(path)
    f.values.astype("<f8").tofile(path)
    sidecar = {"n": f.grid.n, "L": f.grid.L, "t": t}
    Path(str(path) + ".json").write_text(json.dumps(sidecar))


def load_field(path) -> tuple[Field, float]:
    path = Path(path)
    sidecar = json.loads(Path(str(path) + ".json").read_text())
    values = np.fromfile(path, dtype="<f8")
    if values.size != sidecar["n"]:
        raise ValueError(f"{path}: expected {sidecar['n']} samples, found {values.size}")
    grid = Grid(int(sidecar["n"]), float(sidecar["L"]))
    return Field(grid, values=values), float(sidecar["t"])


def save_checkpoint(directory, state: SolverState) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_field(directory / "field.bin", state.field, t=state.t)
    meta = {
        "t": state.t,
        "steps": state.steps,
        "mass0": state.mass0,
        "energy0": state.energy0,
        "params": {"alpha": state.params.alpha, "k": state.params.k, "mu": state.params.mu},
    }
    (directory / "state.json").write_text(json.dumps(meta, sort_keys=True))


def load_checkpoint(directory) -> SolverState:
    directory = Path(directory)
    meta = json.loads((directory / "state.json").read_text())
    f, t = load_field(directory / "field.bin")
    params = EquationParams(**meta["params"])
    return SolverState(t=t, field=f, params=params, mass0=meta["mass0"],
                       energy0=meta["energy0"], steps=meta["steps"])
