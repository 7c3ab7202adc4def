"""Initial-data factories: smooth reference profiles and seeded rough data
of prescribed Sobolev regularity."""

from __future__ import annotations

import numpy as np

from .spectral import Field, Grid


def make_gaussian(grid: Grid, amplitude: float = 1.0, width: float = 2.0,
                  center: float | None = None) -> Field:
    """amplitude * exp(-(x-c)^2 / (2 width^2)), centered mid-box by default.

    Pick L >> width so the tails sit below round-off at the box edge.
    """
    c = 0.5 * grid.L if center is None else center
    return Field(grid, values=amplitude * np.exp(-((grid.xs - c) ** 2) / (2.0 * width**2)))


def make_band_limited(grid: Grid, m_max: int, amplitude: float = 1.0,
                      seed: int = 0) -> Field:
    """Random mean-zero real field supported on modes 1 <= |m| <= m_max."""
    if m_max >= grid.n // 2:
        raise ValueError("band exceeds resolvable modes")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.n, dtype=complex)
    mags = rng.uniform(0.5, 1.0, m_max)
    phases = rng.uniform(0.0, 2.0 * np.pi, m_max)
    for m in range(1, m_max + 1):
        c = mags[m - 1] * np.exp(1j * phases[m - 1])
        coeffs[m] = c
        coeffs[-m] = np.conj(c)
    f = Field(grid, coeffs=coeffs)
    return Field(grid, coeffs=coeffs * (amplitude / max(f.linf(), 1e-300)))


def make_rough(grid: Grid, s: float, amplitude: float = 1.0, seed: int = 0,
               delta: float = 0.01, m_max: int | None = None) -> Field:
    """Random-phase data with coefficient law <xi>^(-s - 1/2 - delta).

    The law places the sample exactly at regularity s (its H^s norm
    converges, any higher index diverges as the band widens).  Mean-zero,
    Hermitian, reproducible from the seed.  Modes above m_max (default: all
    resolvable) are left empty.
    """
    rng = np.random.default_rng(seed)
    if m_max is None:
        m_max = grid.n // 2 - 1
    coeffs = np.zeros(grid.n, dtype=complex)
    ks = grid.ks
    phases = rng.uniform(0.0, 2.0 * np.pi, m_max)
    for m in range(1, m_max + 1):
        mag = (1.0 + ks[m] ** 2) ** (0.5 * (-s - 0.5 - delta))
        c = mag * np.exp(1j * phases[m - 1])
        coeffs[m] = c
        coeffs[-m] = np.conj(c)
    # normalize so the sup-norm equals `amplitude`
    f = Field(grid, coeffs=coeffs)
    return Field(grid, coeffs=coeffs * (amplitude / max(f.linf(), 1e-300)))


def make_initial_field(grid: Grid, spec: dict, k: int | None = None) -> Field:
    """Build initial data from a config mapping (CLI `init` block)."""
    kind = spec.get("type", "gaussian")
    amplitude = float(spec.get("amplitude", 1.0))
    if kind == "gaussian":
        return make_gaussian(grid, amplitude=amplitude,
                             width=float(spec.get("width", 2.0)))
    if kind == "random_hs":
        m_max = int(spec["m_max"]) if spec.get("m_max") is not None else None
        return make_rough(grid, s=float(spec.get("s", 0.0)), amplitude=amplitude,
                          seed=int(spec.get("seed", 0)), m_max=m_max)
    if kind == "band_limited":
        return make_band_limited(grid, m_max=int(spec.get("m_max", grid.n // 8)),
                                 amplitude=amplitude, seed=int(spec.get("seed", 0)))
    if kind == "zero":
        return Field.zero(grid)
    if kind == "file":
        from .fieldio import load_field
        f, _ = load_field(spec["path"])
        return f
    raise ValueError(f"unknown initial data type {kind!r}")
