"""Periodic spectral calculus: transforms, fractional/Hilbert multipliers,
Sobolev norms and dealiasing.

Everything lives on a uniform periodic grid of n points over [0, L).  The
line problem is approximated by taking L large enough that the data decays
below round-off well inside the box, which keeps every Fourier multiplier
exact.

Transform convention (fixed once, asserted by the Parseval tests):
forward transform sums without prefactor, inverse carries 1/n, so

    sum(values**2) * dx  ==  (L / n**2) * sum(|coeffs|**2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "SobolevIndex",
    "fractional_derivative",
    "hilbert",
    "derivative",
    "bessel_potential",
    "check_symbol_identity",
    "sobolev_norm",
    "dealias",
    "dealias_cutoff",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: nodes j*L/n, wavenumbers 2*pi*m/L.

    The mode set is m in {-n/2, ..., n/2 - 1} stored in FFT order; n must be
    even, which leaves the single unpaired Nyquist mode m = -n/2.
    """

    n: int
    L: float

    def __post_init__(self):
        if self.n <= 0 or self.n % 2 != 0:
            raise ValueError(f"grid size must be a positive even integer, got {self.n}")
        if not (self.L > 0):
            raise ValueError(f"period length must be positive, got {self.L}")
        modes = np.fft.fftfreq(self.n, d=1.0 / self.n)  # integer mode numbers, FFT order
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "ks", 2.0 * np.pi * modes / self.L)
        object.__setattr__(self, "xs", np.arange(self.n) * (self.L / self.n))

    # populated in __post_init__; declared for introspection
    modes: np.ndarray = field(init=False, repr=False, compare=False)
    ks: np.ndarray = field(init=False, repr=False, compare=False)
    xs: np.ndarray = field(init=False, repr=False, compare=False)

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def nyquist_index(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class SobolevIndex:
    """Regularity index s, homogeneous (|xi|^s) or inhomogeneous (<xi>^s)."""

    s: float
    homogeneous: bool = False


class Field:
    """Real-valued grid function with synchronized Fourier coefficients.

    Either representation may be supplied; the other is derived.  The
    coefficients of a real field satisfy Hermitian symmetry, and values are
    always the real part of the inverse transform (the discarded imaginary
    part is available as ``imag_residue`` for diagnostics).
    """

    __slots__ = ("grid", "values", "coeffs")

    def __init__(self, grid: Grid, values: np.ndarray | None = None,
                 coeffs: np.ndarray | None = None):
        self.grid = grid
        if (values is None) == (coeffs is None):
            raise ValueError("provide exactly one of values or coeffs")
        if values is not None:
            values = np.array(values, dtype=float)  # copy: fields are immutable
            if values.shape != (grid.n,):
                raise ValueError(f"values shape {values.shape} != ({grid.n},)")
            coeffs = np.fft.fft(values)
        else:
            coeffs = np.array(coeffs, dtype=complex)
            if coeffs.shape != (grid.n,):
                raise ValueError(f"coeffs shape {coeffs.shape} != ({grid.n},)")
            values = np.fft.ifft(coeffs).real
        values.setflags(write=False)
        coeffs.setflags(write=False)
        self.values = values
        self.coeffs = coeffs

    @classmethod
    def from_values(cls, grid: Grid, values) -> "Field":
        return cls(grid, values=values)

    @classmethod
    def from_coeffs(cls, grid: Grid, coeffs) -> "Field":
        return cls(grid, coeffs=coeffs)

    @classmethod
    def zero(cls, grid: Grid) -> "Field":
        return cls(grid, values=np.zeros(grid.n))

    @property
    def imag_residue(self) -> float:
        """Max imaginary part discarded when realizing the inverse transform."""
        return float(np.max(np.abs(np.fft.ifft(self.coeffs).imag)))

    def mean(self) -> float:
        return float(self.coeffs[0].real) / self.grid.n

    def l2(self) -> float:
        return float(np.sqrt(np.sum(self.values**2) * self.grid.dx))

    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def apply_symbol(self, symbol: np.ndarray) -> "Field":
        """Return the field with coefficients multiplied pointwise by symbol."""
        return Field(self.grid, coeffs=self.coeffs * symbol)

    def __add__(self, other: "Field") -> "Field":
        self._check(other)
        return Field(self.grid, coeffs=self.coeffs + other.coeffs)

    def __sub__(self, other: "Field") -> "Field":
        self._check(other)
        return Field(self.grid, coeffs=self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.grid, coeffs=self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, coeffs=-self.coeffs)

    def _check(self, other: "Field"):
        if other.grid.n != self.grid.n or other.grid.L != self.grid.L:
            raise ValueError("fields live on different grids")

    def __repr__(self):
        return f"Field(n={self.grid.n}, L={self.grid.L:g}, linf={self.linf():.3e})"


# ---------------------------------------------------------------------------
# multiplier tables
# ---------------------------------------------------------------------------

def fractional_symbol(grid: Grid, a: float) -> np.ndarray:
    """|xi|^a with the convention |0|^0 := 1, so order zero is the identity."""
    if a < 0:
        raise ValueError("negative order not supported (inverse Riesz potential)")
    if a == 0:
        return np.ones(grid.n)
    with np.errstate(divide="ignore"):
        sym = np.abs(grid.ks) ** a
    sym[0] = 0.0  # mean mode annihilated for a > 0
    return sym


def hilbert_symbol(grid: Grid) -> np.ndarray:
    """-i*sgn(xi); the mean mode and the unpaired Nyquist mode map to zero."""
    sym = -1j * np.sign(grid.ks)
    sym[grid.nyquist_index] = 0.0
    return sym


def derivative_symbol(grid: Grid) -> np.ndarray:
    """i*xi with the asymmetric Nyquist mode zeroed (odd derivative cure)."""
    sym = 1j * grid.ks.astype(complex)
    sym[grid.nyquist_index] = 0.0
    return sym


def bessel_symbol(grid: Grid, s: float) -> np.ndarray:
    return (1.0 + grid.ks**2) ** (s / 2.0)


def fractional_derivative(f: Field, a: float) -> Field:
    """Fractional derivative of order a >= 0 (Fourier multiplier |xi|^a)."""
    return f.apply_symbol(fractional_symbol(f.grid, a))


def hilbert(f: Field) -> Field:
    """Hilbert transform, the principal-value convolution with 1/(pi x)."""
    return f.apply_symbol(hilbert_symbol(f.grid))


def derivative(f: Field) -> Field:
    return f.apply_symbol(derivative_symbol(f.grid))


def bessel_potential(f: Field, s: float) -> Field:
    """Smoothing/roughening by <xi>^s = (1 + xi^2)^(s/2)."""
    return f.apply_symbol(bessel_symbol(f.grid, s))


def check_symbol_identity(f: Field, a) -> float:
    """Max-norm gap between |xi|^a and the a-fold composition of H d/dx.

    Only integer a in {1, 2} compose directly.
    """
    if a not in (1, 2):
        raise ValueError(f"composition check requires a in {{1, 2}}, got {a}")
    lhs = fractional_derivative(f, float(a))
    rhs = f
    for _ in range(int(a)):
        rhs = hilbert(derivative(rhs))
    return float(np.max(np.abs(lhs.values - rhs.values)))


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def sobolev_norm(f: Field, idx: SobolevIndex) -> float:
    """L^2-based Sobolev norm by discrete Parseval.

    The homogeneous norm always excludes the mean mode; for s < 0 a nonzero
    mean is rejected outright (the |xi|^s weight diverges at xi = 0).
    """
    n, L = f.grid.n, f.grid.L
    power = np.abs(f.coeffs) ** 2
    if idx.homogeneous:
        if idx.s < 0 and abs(f.coeffs[0]) > 1e-10 * max(1.0, np.max(np.abs(f.coeffs))):
            raise ValueError(
                "homogeneous norm of negative order is undefined for nonzero mean"
            )
        with np.errstate(divide="ignore"):
            w = np.abs(f.grid.ks[1:]) ** (2.0 * idx.s)
        total = np.sum(w * power[1:])
    else:
        w = (1.0 + f.grid.ks**2) ** idx.s
        total = np.sum(w * power)
    return float(np.sqrt(L / n**2 * total))


def hs_norm(f: Field, s: float) -> float:
    return sobolev_norm(f, SobolevIndex(s, homogeneous=False))


def hs_dot_norm(f: Field, s: float) -> float:
    return sobolev_norm(f, SobolevIndex(s, homogeneous=True))


# ---------------------------------------------------------------------------
# dealiasing
# ---------------------------------------------------------------------------

def dealias_cutoff(n: int, degree: int) -> float:
    """Retained-band limit n/(degree+1) for an alias-free degree-`degree` product."""
    return n / (degree + 1.0)


def dealias(f: Field, degree: int) -> Field:
    """Zero all modes with |m| > n/(degree+1).

    A pointwise product of `degree` fields supported on the retained band
    then has exact coefficients on that band (generalized 2/3 rule).
    """
    if degree < 2:
        raise ValueError("dealiasing applies to products of degree >= 2")
    if degree > f.grid.n:
        raise ValueError("product degree exceeds grid size")
    keep = np.abs(f.grid.modes) <= dealias_cutoff(f.grid.n, degree)
    return Field(f.grid, coeffs=np.where(keep, f.coeffs, 0.0))
