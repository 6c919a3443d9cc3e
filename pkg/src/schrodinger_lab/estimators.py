"""scikit-learn style wrappers around the maximal-function computations."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .maximal import continuum_maximal, growth_exponent_fit, maximal_profile
from .sequences import as_times, bucket_exponent, generate_sequence
from .spectral import GridSpec, SpectralFunction

__all__ = ["SchrodingerMaximalTransformer", "GrowthExponentEstimator", "check_coefficients", "check_scales"]


def check_coefficients(X, n_features=None) -> np.ndarray:
    """2-D complex array of finite Fourier coefficients, one function per row.

    ``sklearn.utils.check_array`` rejects complex input, so this does the
    equivalent checks by hand.
    """
    X = np.asarray(X)
    if X.ndim == 1:
        raise ValueError("expected a 2-D array (n_samples, n_points); reshape a single function with X[None, :]")
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {X.shape}")
    if not (np.issubdtype(X.dtype, np.number) or X.dtype == bool):
        raise ValueError(f"coefficients must be numeric, got dtype {X.dtype}")
    X = X.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(X)):
        raise ValueError("coefficients contain NaN or infinity")
    n = X.shape[1]
    if n < 8 or n & (n - 1):
        raise ValueError(f"the number of coefficients per row must be a power of two >= 8, got {n}")
    if n_features is not None and n != n_features:
        raise ValueError(f"X has {n} coefficients per row, but the transformer was fitted with {n_features}")
    return X


def check_scales(X) -> np.ndarray:
    lam = np.asarray(X, dtype=float)
    if lam.ndim == 2 and lam.shape[1] == 1:
        lam = lam[:, 0]
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("scales must be a 1-D array or a single column")
    if not np.all(np.isfinite(lam)) or np.any(lam < 1):
        raise ValueError("scales must be finite and at least 1")
    return lam


class SchrodingerMaximalTransformer(TransformerMixin, BaseEstimator):
    """Map coefficient rows (FFT order on a torus of length ``period``) to maximal profiles.

    With ``times=None`` the sequence ``n^-gamma``, ``n <= n_times`` is used;
    ``mode="interval"`` takes the supremum over ``t in [0, 1]`` instead.
    """

    def __init__(self, a=2.0, period=2 * math.pi, times=None, gamma=1.0, n_times=64, mode="sequence", oversample=4):
        self.a = a
        self.period = period
        self.times = times
        self.gamma = gamma
        self.n_times = n_times
        self.mode = mode
        self.oversample = oversample

    def fit(self, X, y=None):
        X = check_coefficients(X)
        if not self.a > 0:
            raise ValueError("a must be positive")
        if self.mode not in ("sequence", "interval"):
            raise ValueError(f"mode must be 'sequence' or 'interval', got {self.mode!r}")
        self.grid_ = GridSpec(X.shape[1], self.period)
        if self.times is None:
            self.times_ = generate_sequence("power", self.n_times, gamma=self.gamma).values
        else:
            self.times_ = as_times(self.times)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = check_coefficients(X, self.n_features_in_)
        out = np.empty(X.shape, dtype=float)
        for i, row in enumerate(X):
            f = SpectralFunction(self.grid_, row)
            if self.mode == "sequence":
                prof = maximal_profile(f, self.times_, self.a, cutoff=0.0)
            else:
                prof = continuum_maximal(f, self.a, (0.0, 1.0), self.oversample)
            out[i] = prof.values
        return out


class GrowthExponentEstimator(RegressorMixin, BaseEstimator):
    """Fit ``ratio ~ C lam^slope`` for the frequency-localized sequence maximal operator.

    ``fit`` takes the scales lam (1-D or one column); the sequence defaults to
    ``n^(-1/r)``, the slowest power sequence in ``l^{r,inf}``.  ``predict``
    returns the fitted ratio at new scales.
    """

    def __init__(self, a=2.0, r=1.0, probes=(0.25, 0.5, 1.0), depth=20.0, n_random=0, random_state=0):
        self.a = a
        self.r = r
        self.probes = probes
        self.depth = depth
        self.n_random = n_random
        self.random_state = random_state

    def fit(self, X, y=None):
        lam = check_scales(X)
        e = bucket_exponent(self.a, self.r)
        floor = lam.max() ** (-e) / self.depth
        seq = generate_sequence("power", int(math.ceil(floor ** (-self.r))) + 2, gamma=1.0 / self.r)
        fit = growth_exponent_fit(
            self.a, seq, lam, self.r, tuple(self.probes), depth=self.depth,
            n_random=self.n_random, seed=self.random_state,
        )
        self.fit_ = fit
        self.slope_ = fit.slope
        self.intercept_ = fit.intercept
        self.ci_ = fit.ci
        self.target_ = fit.target
        self.ratios_ = fit.ratios
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        lam = check_scales(X)
        return np.exp(self.intercept_ + self.slope_ * np.log(lam))
