"""Decreasing time sequences and their Lorentz-space classification.

All statements refer to the stored finite truncation.  Positions are
zero-based: ``seq.values[n]`` is the (n+1)-th time of the usual 1-based
notation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "TimeSequence",
    "BucketFamily",
    "ExponentMap",
    "LowConfidenceWarning",
    "generate_sequence",
    "lorentz_quasinorm",
    "critical_exponent",
    "is_decreasing_convex",
    "dyadic_buckets",
    "bucket_exponent",
    "doubling_bound",
    "shell_count",
    "exponent_map",
    "critical_r",
    "critical_rho",
    "s_from_r",
    "s_from_rho",
    "as_times",
    "write_sequence",
    "read_sequence",
]


class LowConfidenceWarning(UserWarning):
    """A regression fit whose residual exceeds the acceptance threshold."""


@dataclass(frozen=True)
class TimeSequence:
    """Nonincreasing times in (0, 1] with a provenance tag."""

    values: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        if v.size < 2:
            raise ValueError("a time sequence needs at least two terms")
        if not np.all(np.isfinite(v)) or np.any(v <= 0) or np.any(v > 1):
            raise ValueError("times must lie in (0, 1]")
        if np.any(np.diff(v) > 0):
            raise ValueError("times must be nonincreasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "params", dict(self.params))

    def __len__(self):
        return self.values.size

    @property
    def tag(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({inner})"

    def scaled(self, c: float) -> "TimeSequence":
        if not 0 < c <= 1:
            raise ValueError("scale must lie in (0, 1]")
        return TimeSequence(self.values * c, self.kind, {**self.params, "scale": c})

    def truncated(self, n: int) -> "TimeSequence":
        return TimeSequence(self.values[:n], self.kind, self.params)


def as_times(seq) -> np.ndarray:
    """Times of a :class:`TimeSequence` or a 1-D array-like (length 1 allowed)."""
    if isinstance(seq, TimeSequence):
        return seq.values
    v = np.atleast_1d(np.asarray(seq, dtype=float)).ravel()
    if v.size == 0 or np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("times must be finite and nonnegative")
    return v


def generate_sequence(kind: str, N: int, *, gamma: float | None = None, q: float | None = None):
    """Model sequences: ``power`` n^-gamma, ``power_log`` n^-gamma log(n+1), ``geometric`` q^n.

    ``power_log`` starts at the maximum of n^-gamma log(n+1) (dropping the
    initial increasing terms) and is divided by that maximum.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if kind in ("power", "power_log"):
        if gamma is None or not gamma > 0:
            raise ValueError("power sequences need gamma > 0")
    n = np.arange(1, N + 1, dtype=float)
    if kind == "power":
        return TimeSequence(n**-gamma, kind, {"gamma": gamma})
    if kind == "power_log":
        # n^-gamma log(n+1) increases until roughly log(n+1) = 1/gamma
        head = max(8, int(math.ceil(math.exp(1.0 / gamma))) + 2)
        m = np.arange(1, head + N + 1, dtype=float)
        vals = m**-gamma * np.log(m + 1)
        start = int(np.argmax(vals[:head]))
        vals = vals[start : start + N]
        return TimeSequence(vals / vals[0], kind, {"gamma": gamma})
    if kind == "geometric":
        if q is None or not 0 < q < 1:
            raise ValueError("geometric sequences need 0 < q < 1")
        return TimeSequence(q**n, kind, {"q": q})
    raise ValueError(f"unknown sequence kind {kind!r}")


def _count_geq(desc: np.ndarray, b) -> np.ndarray:
    """#{n : t_n >= b} for a nonincreasing array."""
    return np.searchsorted(-desc, -np.asarray(b, dtype=float), side="right")


def _count_gt(desc: np.ndarray, b) -> np.ndarray:
    return np.searchsorted(-desc, -np.asarray(b, dtype=float), side="left")


def lorentz_quasinorm(seq, r: float) -> float:
    """``sup_b b^r #{n : t_n > b}``, attained in the limit b -> t_k from below."""
    t = as_times(seq)
    counts = _count_geq(t, t)
    return float(np.max(t**r * counts))


def shell_count(seq, b: float) -> int:
    """``#{n : b < t_n <= 2b}``."""
    t = as_times(seq)
    return int(_count_gt(t, b) - _count_gt(t, 2 * b))


def doubling_bound(seq, r: float) -> float:
    """``sup_b b^r #{n : b < t_n <= 2b}``.

    The shell count, as a function of b, drops only at b = t_k, so the
    supremum is the max over k of ``t_k^r #{n : t_k <= t_n < 2 t_k}``.
    """
    t = as_times(seq)
    counts = _count_geq(t, t) - _count_geq(t, 2 * t)
    return float(np.max(t**r * counts))


def critical_exponent(seq, *, residual_threshold: float = 0.05, min_points: int = 4) -> float:
    """Estimate the infimal r with the sequence in weak-l^r.

    Fits the slope of ``log #{t_n > b}`` against ``log(1/b)`` for dyadic
    ``b`` in the middle half (in log scale) of the range spanned by the
    truncation.
    """
    t = as_times(seq)
    if t.size < 100:
        raise ValueError("critical_exponent needs at least 100 terms")
    hi, lo = math.log2(t[0]), math.log2(t[-1])
    span = hi - lo
    j = np.arange(math.ceil(lo + 0.25 * span), math.floor(hi - 0.25 * span) + 1)
    if j.size < min_points:
        j = np.linspace(lo + 0.25 * span, hi - 0.25 * span, min_points)
    b = np.exp2(j)
    counts = _count_gt(t, b)
    keep = counts > 0
    xs, ys = -np.log(b[keep]), np.log(counts[keep])
    if xs.size < 2:
        raise ValueError("sequence too short to resolve a counting slope")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    if rms > residual_threshold:
        warnings.warn(
            f"critical exponent fit residual {rms:.3g} exceeds {residual_threshold}",
            LowConfidenceWarning,
            stacklevel=2,
        )
    return float(max(slope, 0.0))


def is_decreasing_convex(seq, rtol: float = 1e-12):
    """``(ok, first_violation)`` for t_n and t_n - t_{n+1} both nonincreasing.

    ``first_violation`` is the zero-based position ``n`` of the first failing
    comparison (``t_{n+1} > t_n`` or gap ``n+1`` exceeding gap ``n``), else ``None``.
    """
    t = as_times(seq)
    slack = rtol * np.abs(t)
    rise = np.nonzero(t[1:] > t[:-1] + slack[:-1])[0]
    gaps = t[:-1] - t[1:]
    grow = np.nonzero(gaps[1:] > gaps[:-1] + slack[:-2])[0]
    bad = [int(v[0]) for v in (rise, grow) if v.size]
    if not bad:
        return True, None
    return False, min(bad)


def bucket_exponent(a: float, r: float) -> float:
    """Width exponent e of the dyadic time buckets: a/(1+2r), or 1/(1+r) when a = 1."""
    if not (a > 0 and r > 0):
        raise ValueError("a and r must be positive")
    return 1.0 / (1.0 + r) if a == 1 else a / (1.0 + 2.0 * r)


@dataclass(frozen=True)
class BucketFamily:
    """Index sets ``{n : 2^-(l+1)e < t_n <= 2^-le}`` keyed by l."""

    buckets: dict
    exponent: float
    a: float
    r: float

    @property
    def regime(self) -> str:
        return "wave" if self.a == 1 else "dispersive"

    @property
    def labels(self) -> np.ndarray:
        """Bucket index l of every sequence position."""
        n = sum(len(v) for v in self.buckets.values())
        out = np.empty(n, dtype=np.int64)
        for l, idx in self.buckets.items():
            out[idx] = l
        return out

    def interval(self, l: int) -> tuple:
        """Interval [0, 2^-le] containing the times of bucket l."""
        return (0.0, 2.0 ** (-l * self.exponent))


def dyadic_buckets(seq, a: float, r: float) -> BucketFamily:
    t = as_times(seq)
    if np.any(t <= 0) or np.any(t > 1):
        raise ValueError("bucketing needs times in (0, 1]")
    e = bucket_exponent(a, r)
    l = np.floor(-np.log2(t) / e).astype(np.int64)
    # repair floating-point misplacement at the thresholds
    l = np.where(t > np.exp2(-l * e), l - 1, l)
    l = np.where(t <= np.exp2(-(l + 1) * e), l + 1, l)
    l = np.maximum(l, 0)
    buckets = {int(k): np.nonzero(l == k)[0] for k in np.unique(l)}
    return BucketFamily(buckets, e, float(a), float(r))


def critical_r(s: float, a: float) -> float:
    if not 0 < s < a / 4:
        raise ValueError(f"r(s) needs 0 < s < a/4 = {a / 4}, got s = {s}")
    return 2 * s / (a - 4 * s)


def critical_rho(s: float) -> float:
    if not 0 < s < 0.5:
        raise ValueError(f"rho(s) needs 0 < s < 1/2, got s = {s}")
    return 2 * s / (1 - 2 * s)


def s_from_r(r: float, a: float) -> float:
    return a * r / (2 + 4 * r)


def s_from_rho(rho: float) -> float:
    return rho / (2 + 2 * rho)


@dataclass(frozen=True)
class ExponentMap:
    s: float
    a: float
    r: float | None
    rho: float | None
    s_back: float | None


def exponent_map(s: float, a: float) -> ExponentMap:
    """Critical Lorentz indices for smoothness ``s``; ``None`` where undefined."""
    r = critical_r(s, a) if 0 < s < a / 4 else None
    rho = critical_rho(s) if 0 < s < 0.5 else None
    if r is None and rho is None:
        raise ValueError(f"s = {s} outside both (0, a/4) and (0, 1/2)")
    s_back = s_from_r(r, a) if r is not None else None
    return ExponentMap(s, a, r, rho, s_back)


def write_sequence(seq: TimeSequence, path) -> None:
    """One time per line; ``#`` header lines carry kind and parameters."""
    lines = [f"# kind: {seq.kind}"]
    lines += [f"# {k}: {v!r}" for k, v in sorted(seq.params.items())]
    lines += [repr(float(v)) for v in seq.values]
    Path(path).write_text("\n".join(lines) + "\n")


def read_sequence(path) -> TimeSequence:
    kind, params, vals = "custom", {}, []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, val = (p.strip() for p in body.split(":", 1))
                if key == "kind":
                    kind = val
                else:
                    try:
                        params[key] = float(val)
                    except ValueError:
                        pass
            continue
        vals.append(float(line))
    return TimeSequence(np.array(vals), kind, params)
