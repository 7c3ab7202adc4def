"""Time-sampled solution snapshots shared by the solver, the fixed-point
oracle and the space-time norm machinery."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .propagator import EquationParams
from .spectral import Field, Grid


@dataclass
class Trajectory:
    """Snapshots u(t_i) on one grid at strictly increasing times."""

    times: np.ndarray
    fields: list[Field]
    params: EquationParams

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.size != len(self.fields):
            raise ValueError("times and fields disagree in length")
        if self.times.size and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        grids = {(f.grid.n, f.grid.L) for f in self.fields}
        if len(grids) > 1:
            raise ValueError("all snapshots must share one grid")

    @property
    def grid(self) -> Grid:
        return self.fields[0].grid

    def __len__(self) -> int:
        return len(self.fields)

    def coeff_matrix(self) -> np.ndarray:
        """(n_times, n_modes) complex array of stacked coefficients."""
        return np.stack([f.coeffs for f in self.fields])

    def value_matrix(self) -> np.ndarray:
        return np.stack([f.values for f in self.fields])

    def restrict(self, t_lo: float, t_hi: float) -> "Trajectory":
        mask = (self.times >= t_lo - 1e-12) & (self.times <= t_hi + 1e-12)
        idx = np.nonzero(mask)[0]
        return Trajectory(self.times[idx], [self.fields[i] for i in idx], self.params)

    @classmethod
    def from_coeff_matrix(cls, grid: Grid, times, coeffs: np.ndarray,
                          params: EquationParams) -> "Trajectory":
        fields = [Field(grid, coeffs=coeffs[i]) for i in range(coeffs.shape[0])]
        return cls(np.asarray(times, dtype=float), fields, params)
