"""Maximal functions along time sequences and over time intervals.

Profiles are computed on the spatial grid of the input function.  Sequence
profiles take the exact maximum over every retained time; interval profiles
sweep a time grid fine enough for the band-limited time dependence and then
polish each point's maximum with a golden-section search.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .probes import dk_tuned_packet
from .propagator import BandCutoff, evolve, evolve_band
from .sequences import (
    LowConfidenceWarning,
    TimeSequence,
    as_times,
    bucket_exponent,
    dyadic_buckets,
    s_from_r,
    s_from_rho,
)
from .spectral import SpectralFunction, band_index, band_project, sobolev_norm

__all__ = [
    "BudgetExceededError",
    "MaximalProfile",
    "DecompositionReport",
    "GrowthFit",
    "phase_spread",
    "time_cutoff",
    "maximal_profile",
    "continuum_maximal",
    "weak_level_measure",
    "profile_l2",
    "ratio_Hs",
    "growth_exponent_fit",
    "growth_target",
    "decompose_E123",
]

TAIL_TOLERANCE = 1e-3
# smallest lambda range accepted by growth fits (six octaves)
MIN_SCALE_SPAN = 64.0
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BudgetExceededError(RuntimeError):
    """Raised when a time sweep would exceed the configured work budget."""


@dataclass(frozen=True)
class MaximalProfile:
    """Per-grid-point supremum of ``|S^a f(x, t)|`` over a set of times.

    ``argmax`` is the zero-based position (in the sequence, or in the
    sweep grid for interval profiles) attaining the maximum and
    ``arg_time`` the corresponding time.
    """

    grid: object
    values: np.ndarray
    argmax: np.ndarray
    arg_time: np.ndarray
    a: float
    tag: str = ""
    n_times: int = 0
    time_cutoff: float = 0.0
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "value", "argmax_n"])
        for x, v, n in zip(self.grid.x, self.values, self.argmax):
            w.writerow([repr(float(x)), repr(float(v)), int(n)])
        return buf.getvalue()


def phase_spread(f: SpectralFunction, a: float) -> float:
    """Range of ``|xi|^a`` over the support; the bandwidth of ``t -> |S^a f(x, t)|``."""
    mask = f.support_mask()
    if not mask.any():
        return 0.0
    w = np.abs(f.xi[mask]) ** a
    return float(w.max() - w.min())


def time_cutoff(f: SpectralFunction, a: float) -> float:
    """Times below this change ``|S^a f|`` by less than 1e-3 of ``sum |fhat| dxi/2pi``."""
    spread = phase_spread(f, a)
    return TAIL_TOLERANCE / spread if spread > 0 else 0.0


def _operator(f, a, lam, chi):
    if lam is None:
        return f, lambda g, t: evolve(g, t, a)
    # apply the cutoff once; evolve the localized function afterwards
    g = evolve_band(f, 0.0, a, lam, chi)
    return g, lambda h, t: evolve(h, t, a)


def _modulus(f: SpectralFunction) -> np.ndarray:
    g = f.grid
    return np.abs(np.fft.ifft(f.coeffs)) * (g.n_points / g.period)


def maximal_profile(
    f: SpectralFunction,
    seq,
    a: float,
    *,
    lam: float | None = None,
    chi: BandCutoff | None = None,
    cutoff: float | None = None,
) -> MaximalProfile:
    """``max_n |S^a f(x_j, t_n)|`` on the grid (``S^a_lam`` when ``lam`` is set).

    Times below ``cutoff`` (default :func:`time_cutoff`) are represented by the
    first of them only; the cutoff used is recorded on the profile.
    """
    t = as_times(seq)
    g, step = _operator(f, a, lam, chi)
    if cutoff is None:
        cutoff = time_cutoff(g, a)
    keep = np.nonzero(t >= cutoff)[0]
    tail = np.nonzero(t < cutoff)[0]
    idx = np.concatenate([keep, tail[:1]]) if tail.size else keep

    best = np.full(g.grid.n_points, -1.0)
    arg = np.zeros(g.grid.n_points, dtype=np.int64)
    for n in idx:
        u = _modulus(step(g, float(t[n])))
        better = u > best
        best = np.where(better, u, best)
        arg = np.where(better, n, arg)
    tag = seq.tag if isinstance(seq, TimeSequence) else "custom"
    return MaximalProfile(
        g.grid, best, arg, t[arg], float(a), tag, int(idx.size), float(cutoff),
        {"lam": lam, "dropped": int(max(tail.size - 1, 0))},
    )


def _taylor_refine(g, a, times, arg, best, arg_time, todo, order, golden_steps):
    """Maximize ``|u(x, t_i + d)|`` over ``|d| <= step`` around each point's sweep maximum.

    With ``w = |xi|^a - min |xi|^a`` (a constant phase does not change the
    modulus), ``u(x, t + d) = sum_k d^k/k! u_k(x, t)`` where ``u_k`` has
    coefficients ``(i w)^k c exp(i t w)``.  Since ``step * spread <= 1/4``
    the series converges fast; ``order`` terms give about 1e-10 relative
    accuracy.  The maximum over ``d`` is found by a coarse scan followed by
    golden-section search on the polynomial.
    """
    step = times[1] - times[0]
    w = np.abs(g.xi) ** a
    w = np.where(g.support_mask(), w - w[g.support_mask()].min(), 0.0)
    scale = g.grid.n_points / g.grid.period
    best = best.copy()
    arg_time = arg_time.copy()
    facts = np.array([math.factorial(k) for k in range(order + 1)], dtype=float)
    pts = np.nonzero(todo)[0]
    for i in np.unique(arg[pts]):
        idx = pts[arg[pts] == i]
        t = times[i]
        base = g.coeffs * np.exp(1j * t * w)
        derivs = np.empty((order + 1, idx.size), dtype=complex)
        term = base
        for k in range(order + 1):
            derivs[k] = np.fft.ifft(term)[idx] * scale
            term = term * (1j * w)
        lo = np.full(idx.size, -step if i > 0 else 0.0)
        hi = np.full(idx.size, step if i < times.size - 1 else 0.0)

        def value(d):
            powers = d[None, :] ** np.arange(order + 1)[:, None] / facts[:, None]
            return np.abs(np.sum(derivs * powers, axis=0))

        # coarse scan brackets the maximum, then golden-section search
        grid = np.linspace(0.0, 1.0, 17)
        cand = lo[None, :] + grid[:, None] * (hi - lo)[None, :]
        vals = np.array([value(c) for c in cand])
        j = np.argmax(vals, axis=0)
        h = (hi - lo) / 16
        left = np.maximum(cand[j, np.arange(idx.size)] - h, lo)
        right = np.minimum(cand[j, np.arange(idx.size)] + h, hi)
        p = right - GOLDEN * (right - left)
        q = left + GOLDEN * (right - left)
        fp, fq = value(p), value(q)
        for _ in range(golden_steps):
            first = fp >= fq
            right = np.where(first, q, right)
            left = np.where(first, left, p)
            newp = right - GOLDEN * (right - left)
            newq = left + GOLDEN * (right - left)
            fresh = value(np.where(first, newp, newq))
            fp, fq = np.where(first, fresh, fq), np.where(first, fp, fresh)
            p, q = newp, newq
        d = np.where(fp >= fq, p, q)
        v = np.maximum(fp, fq)
        scan = vals.max(axis=0)
        use_scan = scan > v
        d = np.where(use_scan, cand[j, np.arange(idx.size)], d)
        v = np.maximum(v, scan)
        up = v > best[idx]
        best[idx] = np.where(up, v, best[idx])
        arg_time[idx] = np.where(up, t + d, arg_time[idx])
    return best, arg_time


def continuum_maximal(
    f: SpectralFunction,
    a: float,
    J: tuple = (0.0, 1.0),
    oversample: int = 4,
    *,
    lam: float | None = None,
    chi: BandCutoff | None = None,
    refine: bool = True,
    refine_floor: float = 1e-3,
    golden_steps: int = 40,
    taylor_order: int = 8,
    budget: float = 4e9,
) -> MaximalProfile:
    """``sup_{t in J} |S^a f(x_j, t)|`` on the grid.

    The sweep step is ``|J| / (oversample * (1 + spread |J|))`` where
    ``spread`` is :func:`phase_spread`; each point whose sweep maximum is
    at least ``refine_floor`` times the global maximum is then polished
    between the neighbouring sweep times (see :func:`_taylor_refine`).
    """
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    t0, t1 = map(float, J)
    if not 0 <= t0 <= t1:
        raise ValueError("J must be an interval in [0, inf)")
    g, step = _operator(f, a, lam, chi)
    length = t1 - t0
    spread = phase_spread(g, a)
    n_steps = 0 if length == 0 else int(math.ceil(oversample * (1 + spread * length)))
    work = (n_steps + 1) * g.grid.n_points
    if work > budget:
        raise BudgetExceededError(
            f"time sweep needs {n_steps + 1} steps x {g.grid.n_points} points, over budget {budget:.3g}"
        )
    times = np.linspace(t0, t1, n_steps + 1) if n_steps else np.array([t0])

    best = np.full(g.grid.n_points, -1.0)
    arg = np.zeros(g.grid.n_points, dtype=np.int64)
    for i, t in enumerate(times):
        u = _modulus(step(g, float(t)))
        better = u > best
        best = np.where(better, u, best)
        arg = np.where(better, i, arg)
    arg_time = times[arg].copy()

    if refine and n_steps:
        todo = best >= refine_floor * best.max()
        best, arg_time = _taylor_refine(g, a, times, arg, best, arg_time, todo, taylor_order, golden_steps)

    return MaximalProfile(
        g.grid, best, arg, arg_time, float(a), f"interval[{t0:g},{t1:g}]", int(times.size), 0.0,
        {"lam": lam, "oversample": oversample, "spread": spread},
    )


def _cell_weights(grid, B) -> np.ndarray:
    if B is None:
        return np.full(grid.n_points, grid.dx)
    b0, b1 = map(float, B)
    if not (0 <= b0 <= b1 <= grid.period):
        raise ValueError(f"B = {B} must lie within [0, {grid.period}]")
    x = grid.x
    return np.clip(np.minimum(x + grid.dx, b1) - np.maximum(x, b0), 0.0, None)


def weak_level_measure(profile: MaximalProfile, alpha: float, B: tuple | None = None) -> float:
    """Measure of ``{x in B : profile(x) > alpha}``, counting grid cells by their overlap with B."""
    w = _cell_weights(profile.grid, B)
    return float(np.sum(w[profile.values > alpha]))


def profile_l2(profile: MaximalProfile, B: tuple | None = None) -> float:
    w = _cell_weights(profile.grid, B)
    return float(np.sqrt(np.sum(w * profile.values**2)))


def ratio_Hs(f: SpectralFunction, profile: MaximalProfile, s: float, B: tuple | None = None) -> float:
    denom = sobolev_norm(f, s)
    if denom == 0:
        raise ZeroDivisionError("H^s norm of f vanishes")
    return profile_l2(profile, B) / denom


# -- growth exponents --------------------------------------------------------


def growth_target(a: float, r: float) -> float:
    """Exponent of lam in the frequency-localized sequence bound."""
    return s_from_rho(r) if a == 1 else s_from_r(r, a)


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    stderr: float
    ci: tuple
    target: float
    lambdas: np.ndarray
    ratios: np.ndarray
    best_probe: tuple
    low_confidence: bool

    def rows(self):
        for lam, ratio in zip(self.lambdas, self.ratios):
            yield {
                "lambda": float(lam),
                "ratio": float(ratio),
                "log_lambda": math.log(lam),
                "log_ratio": math.log(ratio),
                "fitted_slope": self.slope,
            }


def growth_exponent_fit(
    a: float,
    seq,
    lambdas,
    r: float,
    probes=(0.25, 0.5, 1.0),
    *,
    depth: float = 20.0,
    n_random: int = 0,
    seed: int = 0,
    chi: BandCutoff | None = None,
    residual_threshold: float = 0.05,
) -> GrowthFit:
    """Fit ``log(best ratio)`` against ``log lam`` for ``||sup_n |S^a_lam f|||_2 / ||f||_2``.

    ``probes`` are width multipliers for :func:`dk_tuned_packet`; ``n_random``
    adds packets with random coefficients in the same frequency window.
    For each lam only times ``t_n >= b / depth`` are swept, where
    ``b = lam^(-a/(1+2r))``: smaller times only move the tuned packets
    inside ``[0, a lam^(a-1) b / depth]``.
    """
    lambdas = np.asarray(sorted(lambdas), dtype=float)
    if lambdas.size < 4 or lambdas[-1] / lambdas[0] < MIN_SCALE_SPAN:
        raise ValueError(f"need at least 4 scales spanning a factor {MIN_SCALE_SPAN:g}")
    t = as_times(seq)
    e = bucket_exponent(a, r)
    rng = np.random.default_rng(seed)
    ratios, best = [], []
    for lam in lambdas:
        b = lam ** (-e)
        times = t[t >= b / depth]
        cands = []
        for c in probes:
            try:
                f = dk_tuned_packet(lam, a, r, c=c, t_max=float(times[0]))
            except ValueError:
                # too wide for the band at this scale
                continue
            cands.append(((c, "tuned"), f))
            for i in range(n_random):
                z = rng.normal(size=f.grid.n_points) + 1j * rng.normal(size=f.grid.n_points)
                cands.append(((c, f"random{i}"), f.with_coeffs(np.where(f.support_mask(), z, 0))))
        if not cands:
            raise ValueError(f"no probe width fits the band at lam = {lam:g}")
        vals = []
        for key, f in cands:
            g = evolve_band(f, 0.0, a, lam, chi)
            prof = maximal_profile(g, times, a, cutoff=0.0)
            vals.append((profile_l2(prof) / _l2(g), key))
        ratio, key = max(vals, key=lambda v: v[0])
        ratios.append(ratio)
        best.append(key)
    ratios = np.array(ratios)
    res = stats.linregress(np.log(lambdas), np.log(ratios))
    dof = lambdas.size - 2
    half = stats.t.ppf(0.975, dof) * res.stderr
    pred = res.intercept + res.slope * np.log(lambdas)
    rms = float(np.sqrt(np.mean((np.log(ratios) - pred) ** 2)))
    low = rms > residual_threshold
    if low:
        import warnings

        warnings.warn(f"growth fit residual {rms:.3g}", LowConfidenceWarning, stacklevel=2)
    return GrowthFit(
        float(res.slope), float(res.intercept), float(res.stderr),
        (float(res.slope - half), float(res.slope + half)),
        growth_target(a, r), lambdas, ratios, tuple(best), low,
    )


def _l2(f: SpectralFunction) -> float:
    from .spectral import l2_norm

    return l2_norm(f)


# -- E1/E2/E3 decomposition -----------------------------------------------


@dataclass(frozen=True)
class DecompositionReport:
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray
    maximal: np.ndarray
    norms: tuple
    hs_norm: float
    a: float
    r: float
    s: float

    @property
    def ratios(self) -> tuple:
        return tuple(n / self.hs_norm for n in self.norms)

    @property
    def domination_gap(self) -> float:
        """``max(maximal - (E1 + E2 + E3))``; nonpositive when domination holds."""
        return float(np.max(self.maximal - (self.E1 + self.E2 + self.E3)))


def decompose_E123(f: SpectralFunction, seq, a: float, r: float) -> DecompositionReport:
    """Envelope fields bounding ``sup_n |S^a f(x, t_n)|`` pointwise.

    For ``a != 1`` the bands are split per bucket l as ``k < l/(1+2r)``,
    ``l/(1+2r) <= k < l`` and ``k >= l``, each field being
    ``sup_l sup_{n in N_l} |sum_k S^a P_k f(x, t_n)|`` over its range.
    For ``a = 1`` the square-function fields
    ``E1 = sum_{j>=0} (sum_{l>=j} sup_{N(l)} |S P_{l-j} f|^2)^(1/2)`` and
    ``E2 = sum_{m>=0} (sum_l sup_{N(l)} |S P_{l+m} f|^2)^(1/2)`` are
    returned with ``E3 = 0``.
    """
    t = as_times(seq)
    fam = dyadic_buckets(t, a, r)
    s = s_from_rho(r) if a == 1 else s_from_r(r, a)
    bands = band_index(f.xi)
    K = int(bands[f.support_mask()].max()) if f.support_mask().any() else 0
    parts = [band_project(f, k) for k in range(K + 1)]
    n_pts = f.grid.n_points
    scale = n_pts / f.grid.period

    def evolved(k, tn):
        return np.fft.ifft(evolve(parts[k], float(tn), a).coeffs) * scale

    maximal = np.zeros(n_pts)
    for tn in t:
        maximal = np.maximum(maximal, np.abs(np.fft.ifft(evolve(f, float(tn), a).coeffs) * scale))

    if a != 1:
        E = [np.zeros(n_pts) for _ in range(3)]
        for l, idx in fam.buckets.items():
            cut = l / (1 + 2 * r)
            groups = [
                [k for k in range(K + 1) if k < cut],
                [k for k in range(K + 1) if cut <= k < l],
                [k for k in range(K + 1) if k >= l],
            ]
            for n in idx:
                u = [evolved(k, t[n]) for k in range(K + 1)]
                for i, ks in enumerate(groups):
                    if ks:
                        E[i] = np.maximum(E[i], np.abs(sum(u[k] for k in ks)))
        E1, E2, E3 = E
    else:
        L = max(fam.buckets)
        # sup over each bucket of |S P_k f|, for every band k
        sup = np.zeros((L + 1, K + 1, n_pts))
        for l, idx in fam.buckets.items():
            for n in idx:
                for k in range(K + 1):
                    sup[l, k] = np.maximum(sup[l, k], np.abs(evolved(k, t[n])))
        E1 = np.zeros(n_pts)
        for j in range(0, L + 1):
            acc = np.zeros(n_pts)
            for l in range(j, L + 1):
                if 0 <= l - j <= K:
                    acc += sup[l, l - j] ** 2
            E1 += np.sqrt(acc)
        E2 = np.zeros(n_pts)
        for m in range(0, K + 1):
            acc = np.zeros(n_pts)
            for l in range(0, L + 1):
                if l + m <= K:
                    acc += sup[l, l + m] ** 2
            E2 += np.sqrt(acc)
        E3 = np.zeros(n_pts)

    dx = f.grid.dx
    norms = tuple(float(np.sqrt(np.sum(e**2) * dx)) for e in (E1, E2, E3))
    return DecompositionReport(E1, E2, E3, maximal, norms, sobolev_norm(f, s), float(a), float(r), s)
