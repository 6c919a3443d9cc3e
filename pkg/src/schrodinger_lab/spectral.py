"""Periodic-grid representation of band-limited functions on the line.

A function is stored by its Fourier transform sampled on the lattice
``xi_m = carrier + m * 2*pi/L``, with ``m`` in numpy FFT order.  The
normalization follows the continuum convention

    f(x) = int exp(i x xi) fhat(xi) dxi / (2 pi),

so that the Riemann sum over the lattice reproduces ``f`` at the grid
points ``x_j = j L / n`` (up to the periodization error of a finite
torus).  With this convention Plancherel reads
``||f||_2^2 = sum |fhat|^2 dxi / (2 pi)`` and every frequency-side norm
in this module carries the weight ``dxi / (2 pi)``.

The ``carrier`` offset lets narrow spectra centred at a large frequency
live on a small grid; synthesized samples always include the carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSpec",
    "SpectralFunction",
    "SobolevIndex",
    "build_grid",
    "synthesize",
    "analyze",
    "synthesize_at",
    "l2_norm",
    "physical_l2_norm",
    "sobolev_norm",
    "band_index",
    "band_project",
    "besov_norm_21",
    "max_band",
]


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid of ``n_points`` samples on a torus of length ``period``."""

    n_points: int
    period: float

    def __post_init__(self):
        if isinstance(self.n_points, bool) or int(self.n_points) != self.n_points:
            raise ValueError(f"n_points must be an integer, got {self.n_points!r}")
        n = int(self.n_points)
        if n < 8 or not _is_power_of_two(n):
            raise ValueError(f"n_points must be a power of two >= 8, got {n}")
        if not np.isfinite(self.period) or self.period <= 0:
            raise ValueError(f"period must be positive, got {self.period!r}")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "period", float(self.period))

    @property
    def dxi(self) -> float:
        """Frequency step 2*pi/L."""
        return 2.0 * np.pi / self.period

    @property
    def dx(self) -> float:
        return self.period / self.n_points

    @property
    def multipliers(self) -> np.ndarray:
        """Integer frequency multipliers in FFT order, spanning [-n/2, n/2)."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points).astype(np.int64)

    @property
    def frequencies(self) -> np.ndarray:
        return self.multipliers * self.dxi

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_points) * self.dx


def build_grid(n_points: int, period: float) -> GridSpec:
    return GridSpec(n_points, period)


@dataclass(frozen=True)
class SpectralFunction:
    """Fourier coefficients ``fhat(carrier + xi_m)`` on a :class:`GridSpec`.

    Coefficients are copied and frozen on construction.
    """

    grid: GridSpec
    coeffs: np.ndarray
    carrier: float = 0.0
    _xi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True)
        if c.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} coefficients, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if not np.isfinite(self.carrier):
            raise ValueError("carrier must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "carrier", float(self.carrier))
        xi = self.grid.frequencies + self.carrier
        xi.setflags(write=False)
        object.__setattr__(self, "_xi", xi)

    @property
    def xi(self) -> np.ndarray:
        """Actual frequency of every coefficient (FFT order)."""
        return self._xi

    def with_coeffs(self, coeffs) -> "SpectralFunction":
        return SpectralFunction(self.grid, coeffs, self.carrier)

    def support_mask(self, rtol: float = 0.0) -> np.ndarray:
        a = np.abs(self.coeffs)
        if rtol <= 0:
            return a > 0
        return a > rtol * a.max(initial=0.0)

    def top_frequency(self) -> float:
        """Largest |xi| carrying a nonzero coefficient (0 for the zero function)."""
        mask = self.support_mask()
        if not mask.any():
            return 0.0
        return float(np.abs(self.xi[mask]).max())

    @classmethod
    def from_spectrum(cls, grid: GridSpec, spectrum, carrier: float = 0.0):
        """Sample a callable ``xi -> fhat(xi)`` on the grid lattice."""
        xi = grid.frequencies + carrier
        return cls(grid, np.asarray(spectrum(xi), dtype=np.complex128), carrier)

    @classmethod
    def zeros(cls, grid: GridSpec, carrier: float = 0.0):
        return cls(grid, np.zeros(grid.n_points, dtype=np.complex128), carrier)


@dataclass(frozen=True)
class SobolevIndex:
    """Smoothness ``s`` paired with dispersion exponent ``a``.

    ``for_counterexample=True`` enforces ``0 < s < a/4``.
    """

    s: float
    a: float
    for_counterexample: bool = False

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.for_counterexample and not 0 < self.s < self.a / 4:
            raise ValueError(f"need 0 < s < a/4 = {self.a / 4}, got s = {self.s}")

    @property
    def is_wave(self) -> bool:
        return self.a == 1


def synthesize(f: SpectralFunction) -> np.ndarray:
    """Physical samples ``f(x_j)``, ``x_j = j L / n``."""
    g = f.grid
    samples = np.fft.ifft(f.coeffs) * (g.n_points / g.period)
    if f.carrier != 0.0:
        samples = samples * np.exp(1j * f.carrier * g.x)
    return samples


def analyze(samples, grid: GridSpec, carrier: float = 0.0) -> SpectralFunction:
    """Inverse of :func:`synthesize`."""
    u = np.asarray(samples, dtype=np.complex128)
    if carrier != 0.0:
        u = u * np.exp(-1j * carrier * grid.x)
    return SpectralFunction(grid, np.fft.fft(u) * (grid.period / grid.n_points), carrier)


def synthesize_at(f: SpectralFunction, x, chunk: int = 256) -> np.ndarray:
    """Evaluate the trigonometric sum at arbitrary points ``x`` (off-grid allowed)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mask = f.support_mask()
    c = f.coeffs[mask]
    xi = f.xi[mask]
    out = np.empty(x.shape, dtype=np.complex128)
    flat = x.ravel()
    res = out.reshape(-1)
    w = f.grid.dxi / (2.0 * np.pi)
    for i in range(0, flat.size, chunk):
        xs = flat[i : i + chunk]
        res[i : i + chunk] = np.exp(1j * np.outer(xs, xi)) @ c * w
    return out


def l2_norm(f: SpectralFunction) -> float:
    """Frequency-side L2 norm, equal to the physical one by Plancherel."""
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2) * f.grid.dxi / (2.0 * np.pi)))


def physical_l2_norm(samples, grid: GridSpec) -> float:
    return float(np.sqrt(np.sum(np.abs(samples) ** 2) * grid.dx))


def sobolev_norm(f: SpectralFunction, s: float) -> float:
    """``(sum (1 + xi^2)^s |fhat|^2 dxi/2pi)^(1/2)``; reduces to :func:`l2_norm` at s = 0."""
    weight = (1.0 + f.xi**2) ** s
    return float(
        np.sqrt(np.sum(weight * np.abs(f.coeffs) ** 2) * f.grid.dxi / (2.0 * np.pi))
    )


def band_index(xi) -> np.ndarray:
    """Dyadic band of each frequency.

    Band 0 is ``|xi| <= 1`` and band ``k >= 1`` is ``2^(k-1) < |xi| <= 2^k``;
    every frequency lands in exactly one band.
    """
    a = np.abs(np.asarray(xi, dtype=float))
    k = np.zeros(a.shape, dtype=np.int64)
    big = a > 1.0
    if np.any(big):
        kb = np.ceil(np.log2(a[big])).astype(np.int64)
        # guard the rounding of log2 near exact powers of two
        kb = np.where(np.ldexp(1.0, kb - 1) >= a[big], kb - 1, kb)
        kb = np.where(np.ldexp(1.0, kb) < a[big], kb + 1, kb)
        k[big] = kb
    return k


def max_band(f: SpectralFunction) -> int:
    mask = f.support_mask()
    if not mask.any():
        return 0
    return int(band_index(f.xi[mask]).max())


def band_project(f: SpectralFunction, k: int) -> SpectralFunction:
    if k < 0:
        raise ValueError("band index must be nonnegative")
    keep = band_index(f.xi) == k
    return f.with_coeffs(np.where(keep, f.coeffs, 0.0))


def besov_norm_21(f: SpectralFunction, s: float) -> float:
    """``sum_k 2^(k s) ||P_k f||_2`` over the sharp dyadic bands."""
    bands = band_index(f.xi)
    energy = np.abs(f.coeffs) ** 2 * f.grid.dxi / (2.0 * np.pi)
    per_band = np.bincount(bands, weights=energy)
    ks = np.arange(per_band.size)
    return float(np.sum(2.0 ** (ks * s) * np.sqrt(per_band)))
