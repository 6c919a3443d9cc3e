"""Narrow-window counterexamples showing the Sobolev thresholds are sharp.

A function whose spectrum sits in a window of width rho around ``-lam``
travels almost rigidly at speed ``a lam^(a-1)``.  When consecutive sequence
times are close enough, for every x in an interval I some time puts the
packet on top of x, which keeps ``sup_n |S^a f(x, t_n)|`` above 1/2 on I
while ``||f||_{H^s}`` is small.

Spectra here use the convention ``f(x) = int exp(i x eta) fhat(eta) d eta``
with ``int fhat = 1``; on the package grid such an f has coefficients
``2 pi fhat``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import _leggauss, gauss_legendre_panels, oscillatory_quad, phase_variation
from .sequences import (
    TimeSequence,
    as_times,
    critical_r,
    critical_rho,
    is_decreasing_convex,
    shell_count,
)
from .spectral import GridSpec, SpectralFunction

__all__ = [
    "PreconditionError",
    "BumpG",
    "make_bump",
    "DKParams",
    "DKParamsA1",
    "DKSpectrum",
    "PhaseBreakdown",
    "LowerBoundReport",
    "A1Report",
    "Verdict",
    "default_epsilon",
    "condition_bounds",
    "select_params",
    "a1_params",
    "dk_spectrum",
    "dk_sobolev_norm",
    "dk_modulus",
    "phase_breakdown",
    "reduced_phase",
    "index_map",
    "assign_index",
    "gap_bound",
    "build_schedule",
    "verify_lower_bound",
    "run_schedule",
    "schedule_csv",
    "a1_spectrum",
    "a1_modulus",
    "a1_profile_value",
    "a1_sobolev_norm",
    "a1_counterexample",
    "build_schedule_a1",
    "sharpness_verdict",
]


class PreconditionError(ValueError):
    """Inputs violate a hypothesis the construction depends on."""


# -- the bump ------------------------------------------------------------------


def _raw_bump(xi):
    xi = np.asarray(xi, dtype=float)
    u = 1.0 - (2.0 * xi) ** 2
    inside = u > 0
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(inside, np.exp(-1.0 / np.where(inside, u, 1.0)), 0.0)


@dataclass(frozen=True)
class BumpG:
    """``c exp(-1/(1-(2 xi)^2))`` on (-1/2, 1/2), zero elsewhere, with unit mass."""

    c: float

    def __call__(self, xi):
        return self.c * _raw_bump(xi)

    def integrate(self, func=None, panels: int = 64, order: int = 20) -> float:
        """``int g(xi) func(xi) d xi`` over the support (``func`` defaults to 1)."""
        nodes, w = gauss_legendre_panels(-0.5, 0.5, panels, order)
        vals = self(nodes)
        if func is not None:
            vals = vals * func(nodes)
        return float(np.sum(w * vals))

    @property
    def mass(self) -> float:
        return self.integrate()

    @property
    def l2_squared(self) -> float:
        return self.integrate(self)


def make_bump() -> BumpG:
    nodes, w = gauss_legendre_panels(-0.5, 0.5, 64, 20)
    return BumpG(1.0 / float(np.sum(w * _raw_bump(nodes))))


# -- parameters ------------------------------------------------------------------


def default_epsilon(a: float) -> float:
    return 0.8 / (10.0 * (a + 2.0))


def condition_bounds(a: float, s: float, b: float) -> tuple:
    """Range ``(lo, hi)`` of M allowed by ``a M^(2(a-1)/a) b^((1-4s)/(a-4s)) <= 1``."""
    p = 2.0 * (a - 1.0) / a
    log_rhs = -math.log(a) - (1 - 4 * s) / (a - 4 * s) * math.log(b)
    if p > 0:
        return 1.0, _exp(log_rhs / p)
    return max(1.0, _exp(log_rhs / p)), math.inf


def _exp(v: float) -> float:
    return math.exp(v) if v < 709.0 else math.inf


@dataclass(frozen=True)
class DKParams:
    a: float
    s: float
    epsilon: float
    b: float
    M: float
    lam: float
    rho: float
    interval: tuple
    regime: str

    @property
    def r(self) -> float:
        return critical_r(self.s, self.a)

    @property
    def speed(self) -> float:
        """Group velocity ``a lam^(a-1)`` of the window centre."""
        return self.a * self.lam ** (self.a - 1)

    @property
    def interval_length(self) -> float:
        return self.interval[1] - self.interval[0]

    @property
    def condition_value(self) -> float:
        a, s = self.a, self.s
        return a * self.M ** (2 * (a - 1) / a) * self.b ** ((1 - 4 * s) / (a - 4 * s))


def select_params(a: float, s: float, epsilon: float | None = None, b: float = 1e-6, M: float = 1.0) -> DKParams:
    """Validated window parameters ``lam = M^(2/a) b^(-1/(a-4s))``, ``rho = eps b^(-1/2) lam^(1-a/2)``.

    The regime is ``local`` for s < 1/4, where the interval must satisfy
    ``|I| <= 1/2`` (equivalently the M-condition), and ``global`` otherwise.
    """
    if not (a > 0 and a != 1):
        raise ValueError("the window construction needs a > 0, a != 1")
    if not 0 < s < a / 4:
        raise ValueError(f"s must lie in (0, a/4) = (0, {a / 4:g}), got {s}")
    eps_max = 1.0 / (10.0 * (a + 2.0))
    if epsilon is None:
        epsilon = default_epsilon(a)
    if not 0 < epsilon < eps_max:
        raise ValueError(f"epsilon must lie in (0, {eps_max:g}), got {epsilon}")
    if not 0 < b < 1:
        raise ValueError(f"b must lie in (0, 1), got {b}")
    if M < 1:
        raise ValueError(f"M must be at least 1, got {M}")
    log_lam = 2.0 / a * math.log(M) - math.log(b) / (a - 4 * s)
    if log_lam > 700:
        raise ValueError(f"lambda = exp({log_lam:.4g}) overflows double precision")
    lam = math.exp(log_lam)
    rho = epsilon * b**-0.5 * lam ** (1 - a / 2)
    length = a * lam ** (a - 1) * b / 2
    regime = "local" if s < 0.25 else "global"
    p = DKParams(float(a), float(s), float(epsilon), float(b), float(M), lam, rho, (0.0, length), regime)
    if regime == "local" and p.condition_value > 1 * (1 + 1e-12):
        raise PreconditionError(
            f"local regime needs a M^(2(a-1)/a) b^((1-4s)/(a-4s)) <= 1, got {p.condition_value:.4g}"
        )
    return p


@dataclass(frozen=True)
class DKParamsA1:
    s: float
    b: float
    M: float
    lam: float

    @property
    def rho_exponent(self) -> float:
        return critical_rho(self.s)


def a1_params(s: float, b: float | None = None, M: float = 1.0, *, lam: float | None = None) -> DKParamsA1:
    """``lam = M b^(-1/(1-2s))``; pass ``lam`` instead of ``b`` to solve for b."""
    if not 0 < s < 0.5:
        raise ValueError(f"s must lie in (0, 1/2), got {s}")
    if M < 1:
        raise ValueError("M must be at least 1")
    if (b is None) == (lam is None):
        raise ValueError("give exactly one of b and lam")
    if b is None:
        b = (M / lam) ** (1 - 2 * s)
    if not 0 < b < 1:
        raise ValueError(f"b must lie in (0, 1), got {b}")
    return DKParamsA1(float(s), float(b), float(M), float(M * b ** (-1.0 / (1 - 2 * s))))


# -- the spectrum ----------------------------------------------------------------


@dataclass(frozen=True)
class DKSpectrum:
    """``eta -> rho^-1 g((eta + lam) / rho)``, supported in ``[-lam - rho/2, -lam + rho/2]``."""

    lam: float
    rho: float
    g: BumpG

    def __call__(self, eta):
        return self.g((np.asarray(eta, dtype=float) + self.lam) / self.rho) / self.rho

    @property
    def support(self) -> tuple:
        return (-self.lam - self.rho / 2, -self.lam + self.rho / 2)

    def on_grid(self, grid: GridSpec) -> SpectralFunction:
        """The function with this spectrum as grid coefficients, carrier ``-lam``."""
        eta = grid.frequencies
        return SpectralFunction(grid, 2 * math.pi * self.g(eta / self.rho) / self.rho, carrier=-self.lam)


def dk_spectrum(params, g: BumpG | None = None, *, max_ratio: float | None = None) -> DKSpectrum:
    """Window spectrum for anything carrying ``lam`` and ``rho`` (``DKParams`` or similar)."""
    g = g or make_bump()
    lam, rho = float(params.lam), float(params.rho)
    if max_ratio is None:
        max_ratio = getattr(params, "epsilon", 0.1)
    if not (lam > 0 and rho > 0) or rho / lam > max_ratio * (1 + 1e-12):
        raise PreconditionError(f"window needs rho/lam <= {max_ratio:g}, got {rho / lam:.3g}")
    return DKSpectrum(lam, rho, g)


def dk_sobolev_norm(spec: DKSpectrum, s: float) -> float:
    """``||f||_{H^s}`` with ``||f||^2 = 2 pi rho^-1 int (1 + (lam - rho z)^2)^s g(z)^2 dz``."""
    lam, rho = spec.lam, spec.rho
    val = spec.g.integrate(lambda z: spec.g(z) * (1 + (lam - rho * z) ** 2) ** s)
    return math.sqrt(2 * math.pi * val / rho)


# -- phase ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseBreakdown:
    linear: np.ndarray
    quadratic: np.ndarray
    cubic_remainder: np.ndarray
    exact: np.ndarray

    @property
    def residual(self):
        return self.exact - (self.linear + self.quadratic + self.cubic_remainder)


def reduced_phase(params, xi, x, t):
    """``x rho xi + t lam^a ((1 - tau)^a - 1)``, ``tau = rho xi / lam``.

    This is the phase of ``exp(i(x eta + t |eta|^a))`` at ``eta = rho xi - lam``
    after removing the xi-independent part ``-x lam + t lam^a``.
    """
    a, lam, rho = params.a, params.lam, params.rho
    xi, x, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (xi, x, t)))
    tau = rho * xi / lam
    return x * rho * xi + t * lam**a * np.expm1(a * np.log1p(-tau))


def _cubic_factor(a: float, tau, order: int = 24):
    """``-a(a-1)(a-2)/2 tau^3 int_0^1 (1 - s tau)^(a-3) (1-s)^2 ds`` (Taylor remainder of (1-tau)^a)."""
    tau = np.asarray(tau, dtype=float)
    c = -0.5 * a * (a - 1) * (a - 2)
    if c == 0:
        return np.zeros_like(tau)
    nodes, w = _leggauss(order)
    sv = 0.5 * (nodes + 1)
    wv = 0.5 * w
    integral = np.tensordot((1 - tau[..., None] * sv) ** (a - 3) * (1 - sv) ** 2, wv, axes=([-1], [0]))
    return c * tau**3 * integral


def phase_breakdown(params: DKParams, xi, x, t) -> PhaseBreakdown:
    """Split the reduced phase into linear, quadratic and cubic-remainder parts (broadcasting)."""
    a, lam, rho = params.a, params.lam, params.rho
    xi, x, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (xi, x, t)))
    if np.any(np.abs(xi) > 0.5):
        raise ValueError("xi must lie in [-1/2, 1/2]")
    linear = (x - a * lam ** (a - 1) * t) * rho * xi
    quadratic = 0.5 * a * (a - 1) * rho**2 * lam ** (a - 2) * t * xi**2
    cubic = lam**a * t * _cubic_factor(a, rho * xi / lam)
    return PhaseBreakdown(linear, quadratic, cubic, reduced_phase(params, xi, x, t))


# -- index map -----------------------------------------------------------------------


def index_map(x, seq, speed: float):
    """Zero-based n with ``speed t_{n+1} < x <= speed t_n`` (vectorized)."""
    t = as_times(seq)
    v = speed * t
    xs = np.asarray(x, dtype=float)
    # number of v_n >= x, minus one
    n = np.searchsorted(-v, -xs, side="right") - 1
    bad = (n < 0) | (n >= t.size - 1) | (xs <= 0)
    if np.any(bad):
        first = np.atleast_1d(xs)[np.atleast_1d(bad)][0]
        raise PreconditionError(
            f"x = {first:.6g} is outside the covered range ({v[-1]:.6g}, {v[0]:.6g}]"
        )
    return n


def assign_index(x, seq, params):
    """The position n(x) for a window parameter set (uses ``a lam^(a-1)``)."""
    return index_map(x, seq, params.a * params.lam ** (params.a - 1))


def gap_bound(params: DKParams) -> float:
    """``2 M^-1 b^((a-2s)/(a-4s))``, the largest admissible gap below time b."""
    a, s = params.a, params.s
    return 2.0 / params.M * params.b ** ((a - 2 * s) / (a - 4 * s))


# -- modulus and verification --------------------------------------------------------


def dk_modulus(params, spec: DKSpectrum, x: float, t: float, *, tol: float = 1e-10) -> float:
    """``|S^a f(x, t)| = |int_{-1/2}^{1/2} exp(i phase(xi)) g(xi) d xi|`` by quadrature."""

    def phase(xi):
        return reduced_phase(params, xi, x, t)

    def integrand(xi):
        return spec.g(xi) * np.exp(1j * phase(xi))

    var = phase_variation(phase, -0.5, 0.5)
    return abs(oscillatory_quad(integrand, -0.5, 0.5, variation=var, tol=tol).value)


@dataclass(frozen=True)
class LowerBoundReport:
    params: DKParams
    min_sup: float
    measure_I: float
    Hs_norm_sq: float
    weak_constant: float
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    max_linear: float = 0.0
    max_quadratic: float = 0.0
    max_cubic: float = 0.0
    max_gap: float = 0.0

    def row(self, j: int) -> dict:
        p = self.params
        return {
            "j": j, "b": p.b, "M": p.M, "lambda": p.lam, "rho": p.rho,
            "interval_length": self.measure_I, "min_sup": self.min_sup,
            "weak_constant": self.weak_constant,
        }


def _check_counting(seq, params: DKParams):
    t = as_times(seq)
    ok, where = is_decreasing_convex(t)
    if not ok:
        raise PreconditionError(f"sequence is not decreasing and convex (position {where})")
    if not np.any(t <= params.b / 2):
        raise PreconditionError(f"sequence has no time below b/2 = {params.b / 2:.3g}")
    need = params.M * params.b ** (-params.r)
    have = shell_count(t, params.b)
    if have < need:
        raise PreconditionError(
            f"#{{b < t_n <= 2b}} = {have} is below M b^-r = {need:.4g} at b = {params.b:.3g}"
        )


def verify_lower_bound(params: DKParams, seq, x_samples: int = 200, g: BumpG | None = None, *, tol: float = 1e-10) -> LowerBoundReport:
    """Evaluate ``|S^a f(x, t_{n(x)})|`` at cell midpoints of I and report the weak-type ratio.

    ``weak_constant = |I| (1/2)^2 / ||f||_{H^s}^2``.
    """
    if x_samples < 1:
        raise ValueError("x_samples must be positive")
    _check_counting(seq, params)
    t = as_times(seq)
    spec = dk_spectrum(params, g)
    length = params.interval_length
    x = length * (np.arange(x_samples) + 0.5) / x_samples
    n = assign_index(x, t, params)
    tn = t[n]
    vals = np.array([dk_modulus(params, spec, float(xv), float(tv), tol=tol) for xv, tv in zip(x, tn)])

    xi = np.linspace(-0.5, 0.5, 65)
    br = phase_breakdown(params, xi[None, :], x[:, None], tn[:, None])
    gaps = tn - t[n + 1]
    hs2 = dk_sobolev_norm(spec, params.s) ** 2
    return LowerBoundReport(
        params, float(vals.min()), length, hs2, length * 0.25 / hs2, x, vals, n,
        float(np.abs(br.linear).max()), float(np.abs(br.quadratic).max()),
        float(np.abs(br.cubic_remainder).max()), float(gaps.max()),
    )


def build_schedule(
    seq,
    a: float,
    s: float,
    steps: int = 3,
    *,
    epsilon: float | None = None,
    m_ratio: float = 4.0,
    b_start: float = 0.5,
    b_min: float = 1e-300,
) -> list:
    """Scales ``b_j`` (powers of two) with amplitudes ``M_j`` growing by ``m_ratio``.

    At each dyadic b the counting ratio ``R = b^r #{b < t_n <= 2b}`` is
    measured; ``M = min(R, largest M allowed by the local condition)`` (just
    ``R`` in the global regime).  A scale is accepted once M reaches
    ``m_ratio`` times the previous amplitude (or 1 for the first step).
    """
    t = as_times(seq)
    r = critical_r(s, a)
    local = s < 0.25
    out, target = [], 1.0
    b = 2.0 ** math.floor(math.log2(b_start))
    while len(out) < steps:
        if b < max(b_min, t[-1]):
            raise PreconditionError(
                f"only {len(out)} of {steps} schedule steps fit before the sequence runs out"
            )
        R = b**r * shell_count(t, b)
        M = R
        if local:
            lo, hi = condition_bounds(a, s, b)
            if M < lo:
                b /= 2
                continue
            M = min(M, hi)
        if M >= target:
            out.append(select_params(a, s, epsilon, b, M))
            target = M * m_ratio
        b /= 2
    return out


def run_schedule(seq, schedule, x_samples: int = 200, g: BumpG | None = None) -> list:
    return [verify_lower_bound(p, seq, x_samples, g) for p in schedule]


SCHEDULE_COLUMNS = ("j", "b", "M", "lambda", "rho", "interval_length", "min_sup", "weak_constant")


def schedule_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCHEDULE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for j, rep in enumerate(reports):
        w.writerow({k: (repr(float(v)) if k != "j" else v) for k, v in rep.row(j).items()})
    return buf.getvalue()


# -- the wave case ---------------------------------------------------------------------


@dataclass(frozen=True)
class A1Spectrum:
    """``xi -> 10 lam^-1 g(10 lam^-1 (xi + lam))``."""

    lam: float
    g: BumpG

    def __call__(self, xi):
        return 10.0 / self.lam * self.g(10.0 / self.lam * (np.asarray(xi, dtype=float) + self.lam))

    @property
    def support(self) -> tuple:
        return (-1.05 * self.lam, -0.95 * self.lam)

    def on_grid(self, grid: GridSpec) -> SpectralFunction:
        return SpectralFunction(grid, 2 * math.pi * 10 / self.lam * self.g(10 / self.lam * grid.frequencies), carrier=-self.lam)


def a1_spectrum(lam: float, g: BumpG | None = None) -> A1Spectrum:
    if lam < 1:
        raise ValueError("lam must be at least 1")
    return A1Spectrum(float(lam), g or make_bump())


def a1_modulus(spec: A1Spectrum, x, t, *, tol: float = 1e-12) -> float:
    """``|S^1 f(x, t)|`` by quadrature in the rescaled variable ``z = 10 (xi + lam) / lam``.

    For ``xi < 0`` the phase is ``(x - t) xi``, which after removing the
    constant ``-(x - t) lam`` becomes ``(lam/10)(x - t) z``.
    """
    w = spec.lam / 10.0 * (float(x) - float(t))

    def integrand(z):
        return spec.g(z) * np.exp(1j * w * z)

    return abs(oscillatory_quad(integrand, -0.5, 0.5, variation=abs(w), tol=tol).value)


def a1_profile_value(spec: A1Spectrum, y, *, tol: float = 1e-12) -> float:
    """``|f(y)| = |int exp(i y xi) fhat(xi) d xi|`` evaluated in the original variable."""
    lo, hi = spec.support
    y = float(y)
    c = -spec.lam

    def integrand(eta):
        return spec(c + eta) * np.exp(1j * y * eta)

    return abs(oscillatory_quad(integrand, lo - c, hi - c, variation=abs(y) * (hi - lo), tol=tol).value)


def a1_sobolev_norm(spec: A1Spectrum, s: float) -> float:
    """``||f||^2 = 2 pi (10/lam) int (1 + (lam z/10 - lam)^2)^s g(z)^2 dz``."""
    lam = spec.lam
    val = spec.g.integrate(lambda z: spec.g(z) * (1 + (lam * z / 10 - lam) ** 2) ** s)
    return math.sqrt(2 * math.pi * 10 / lam * val)


@dataclass(frozen=True)
class A1Report:
    params: DKParamsA1
    min_sup: float
    min_near: float
    Hs_norm_sq: float
    weak_constant: float
    max_gap: float


def a1_counterexample(params: DKParamsA1, seq, g: BumpG | None = None, x_samples: int = 200, *, tol: float = 1e-12) -> A1Report:
    """Check the wave-case lower bounds along a sequence.

    ``min_near`` is the smallest ``|S^1 f(x, t)|`` over sampled ``|x - t| <= 1/lam``;
    ``min_sup`` the smallest ``max_n |S^1 f(x, t_n)|`` over midpoints of
    ``(0, b/2)``, using the time nearest to x.  The weak constant is
    ``(b/2) / (4 ||f||_{H^s}^2)``.
    """
    t = as_times(seq)
    lam, b = params.lam, params.b
    ok, where = is_decreasing_convex(t)
    if not ok:
        raise PreconditionError(f"sequence is not decreasing and convex (position {where})")
    below = t <= b
    if np.count_nonzero(below) < 2:
        raise PreconditionError(f"sequence has fewer than two times below b = {b:.3g}")
    gaps = -np.diff(t)[below[:-1]]
    max_gap = float(gaps.max()) if gaps.size else 0.0
    if max_gap > 2.0 / lam * (1 + 1e-12):
        raise PreconditionError(f"gap {max_gap:.3g} exceeds 2/lam = {2 / lam:.3g} below t = b")
    if t[-1] >= b / (2 * x_samples):
        raise PreconditionError("sequence does not reach down to the first sample point")
    spec = a1_spectrum(lam, g)
    near = min(a1_modulus(spec, d / lam, 0.0, tol=tol) for d in np.linspace(-1, 1, 21))
    x = (b / 2) * (np.arange(x_samples) + 0.5) / x_samples
    j = np.searchsorted(-t, -x)
    j = np.clip(j, 1, t.size - 1)
    nearest = np.where(np.abs(t[j] - x) < np.abs(t[j - 1] - x), t[j], t[j - 1])
    sup = min(a1_modulus(spec, xv, tv, tol=tol) for xv, tv in zip(x, nearest))
    hs2 = a1_sobolev_norm(spec, params.s) ** 2
    return A1Report(params, float(sup), float(near), hs2, (b / 2) / (4 * hs2), max_gap)


def build_schedule_a1(seq, s: float, steps: int = 3, *, m_ratio: float = 4.0, b_start: float = 0.5) -> list:
    """Wave-case analogue of :func:`build_schedule` with ``M = b^rho #{b < t_n <= 2b}``."""
    t = as_times(seq)
    rho = critical_rho(s)
    out, target = [], 1.0
    b = 2.0 ** math.floor(math.log2(b_start))
    while len(out) < steps:
        if b < t[-1]:
            raise PreconditionError(
                f"only {len(out)} of {steps} schedule steps fit before the sequence runs out"
            )
        M = b**rho * shell_count(t, b)
        if M >= target:
            out.append(a1_params(s, b, M))
            target = M * m_ratio
        b /= 2
    return out


# -- verdicts ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    threshold: float
    side: str
    predicted_convergence: bool
    statement: str


def sharpness_verdict(gamma: float, a: float, s: float, statement: str = "local") -> Verdict:
    """Threshold in s for ``t_n = n^-gamma`` and whether s meets it.

    ``local`` covers a.e. convergence and the local maximal bound:
    ``min(a/(2 gamma+4), 1/4)`` for a > 1, ``a/(2 gamma+4)`` for a < 1,
    ``1/(2 gamma+2)`` for a = 1.  ``global`` (a != 1) is ``a/(2 gamma+4)``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not a > 0:
        raise ValueError("a must be positive")
    if statement == "local":
        if a > 1:
            th = min(a / (2 * gamma + 4), 0.25)
        elif a < 1:
            th = a / (2 * gamma + 4)
        else:
            th = 1 / (2 * gamma + 2)
    elif statement == "global":
        if a == 1:
            raise ValueError("no global threshold is available for a = 1")
        th = a / (2 * gamma + 4)
    else:
        raise ValueError(f"statement must be 'local' or 'global', got {statement!r}")
    ok = s >= th
    return Verdict(th, "above" if s > th else ("at" if s == th else "below"), ok, statement)
