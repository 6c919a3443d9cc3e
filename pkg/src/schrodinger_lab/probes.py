"""Test-function families for the maximal-function experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec, SpectralFunction, band_index

__all__ = [
    "GaussianMixture",
    "random_gaussian_mixture",
    "random_trig",
    "random_one_sided",
    "gaussian_packet",
    "packet_grid",
    "band_packet",
    "dk_tuned_packet",
]

TRUNCATION_SIGMAS = 8.0


@dataclass(frozen=True)
class GaussianMixture:
    """Spectrum ``sum_j c_j exp(-(xi - m_j)^2 / 2 s_j^2)`` truncated at 8 widths.

    Callable on frequency arrays; ``support`` bounds the truncated spectrum.
    """

    amplitudes: np.ndarray
    centers: np.ndarray
    widths: np.ndarray

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        z = (xi[..., None] - self.centers) / self.widths
        terms = np.where(np.abs(z) <= TRUNCATION_SIGMAS, np.exp(-0.5 * z**2), 0.0)
        return terms @ self.amplitudes

    @property
    def support(self) -> tuple:
        lo = self.centers - TRUNCATION_SIGMAS * self.widths
        hi = self.centers + TRUNCATION_SIGMAS * self.widths
        return float(lo.min()), float(hi.max())

    def on_grid(self, grid: GridSpec) -> SpectralFunction:
        return SpectralFunction.from_spectrum(grid, self)


def random_gaussian_mixture(
    rng: np.random.Generator,
    n_bumps: int = 3,
    center_range: tuple = (2.0, 10.0),
    width_range: tuple = (0.4, 1.0),
) -> GaussianMixture:
    """Random smooth spectrum with bumps at ``+-center_range``, vanishing near 0."""
    sign = rng.choice([-1.0, 1.0], size=n_bumps)
    centers = sign * rng.uniform(*center_range, size=n_bumps)
    widths = rng.uniform(*width_range, size=n_bumps)
    amps = rng.normal(size=n_bumps) + 1j * rng.normal(size=n_bumps)
    return GaussianMixture(amps, centers, widths)


def random_trig(
    grid: GridSpec, rng: np.random.Generator, top: float, decay: float = 0.0
) -> SpectralFunction:
    """Random complex coefficients on ``|xi| <= top`` weighted by ``(1+xi^2)^(-decay/2)``."""
    xi = grid.frequencies
    keep = np.abs(xi) <= top
    z = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    return SpectralFunction(grid, np.where(keep, z * (1 + xi**2) ** (-decay / 2), 0.0))


def random_one_sided(grid: GridSpec, rng: np.random.Generator, top: float, side: int = -1):
    xi = grid.frequencies
    keep = (np.sign(xi) == side) & (np.abs(xi) <= top)
    z = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    return SpectralFunction(grid, np.where(keep, z, 0.0))


def packet_grid(center: float, width: float, a: float, t_max: float, max_points: int = 1 << 20):
    """Torus large enough to hold a Gaussian packet during ``0 <= t <= t_max``.

    The spectrum has standard deviation ``width/6`` about ``center``; the
    packet travels with group velocities ``a |xi|^(a-1)`` (rightwards for
    negative ``center``) and needs a margin of ten envelope widths on each side.
    """
    sigma = width / 6.0
    half = TRUNCATION_SIGMAS * sigma
    speeds = a * np.abs([abs(center) - half, abs(center) + half]) ** (a - 1)
    travel = float(np.max(speeds)) * t_max
    margin = 12.0 / sigma
    period = travel + 2 * margin
    need = 2.2 * half * period / (2 * math.pi)
    n = max(64, 1 << int(math.ceil(math.log2(max(need, 1.0)))))
    if n > max_points:
        raise ValueError(f"packet needs {n} grid points, above the limit {max_points}")
    return GridSpec(n, period), margin


def gaussian_packet(grid: GridSpec, center: float, width: float, shift: float = 0.0):
    """Packet with spectrum ``exp(-(xi-center)^2 / 2 sigma^2)``, sigma = width/6, centred at ``x = shift``."""
    sigma = width / 6.0
    eta = grid.frequencies
    z = eta / sigma
    coeffs = np.where(np.abs(z) <= TRUNCATION_SIGMAS, np.exp(-0.5 * z**2), 0.0)
    coeffs = coeffs * np.exp(-1j * (center + eta) * shift)
    return SpectralFunction(grid, coeffs, carrier=center)


def band_packet(k: int, a: float, c: float = 0.5, t_max: float = 1.0):
    """Packet inside dyadic band k tuned to the dispersion time scale.

    Centre ``-0.75 * 2^k`` and width ``c * lam^(1 - a/2)``, the width at which
    the packet stays coherent for unit time while travelling ``a lam^(a-1)``.
    """
    lam = 2.0**k
    center = -0.75 * lam
    width = c * lam ** (1 - a / 2)
    if TRUNCATION_SIGMAS * width / 6 > 0.2 * lam:
        raise ValueError("packet too wide for its band; lower c")
    grid, margin = packet_grid(center, width, a, t_max)
    f = gaussian_packet(grid, center, width, shift=margin)
    assert np.all(band_index(f.xi[f.support_mask()]) == k)
    return f


def dk_tuned_packet(lam: float, a: float, r: float, c: float = 0.5, t_max: float = 1.0, b: float | None = None):
    """Narrow window probe for the sequence maximal operator at scale lam.

    With ``b = lam^(-a/(1+2r))`` (the balancing time scale for l^{r,inf}
    sequences) the width is ``c * b^(-1/2) * lam^(1-a/2)``: coherent for
    ``t <= b`` while the sequence points there sweep the packet across an
    interval of length ``~ a lam^(a-1) b``.
    """
    if b is None:
        b = lam ** (-a / (1 + 2 * r))
    center = -0.75 * lam
    width = c * b ** -0.5 * lam ** (1 - a / 2)
    if TRUNCATION_SIGMAS * width / 6 > 0.2 * lam:
        raise ValueError("probe too wide for the cutoff's flat region; lower c")
    grid, margin = packet_grid(center, width, a, t_max)
    return gaussian_packet(grid, center, width, shift=margin)
