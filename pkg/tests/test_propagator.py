import math

import numpy as np
import pytest
from hypothesis import given
from scipy.integrate import quad
from hypothesis import strategies as st

from schrodinger_lab.counterexample import dk_modulus, make_bump, select_params, dk_spectrum
from schrodinger_lab.probes import random_gaussian_mixture, random_one_sided
from schrodinger_lab.propagator import (
    BandCutoff,
    KernelProbe,
    evaluate_direct,
    evolve,
    evolve_band,
    smooth_step,
    translate_a1,
    ttstar_kernel,
)
from schrodinger_lab.quadrature import QuadratureError, oscillatory_quad, power_increment
from schrodinger_lab.spectral import GridSpec, SpectralFunction, l2_norm, synthesize, synthesize_at

# (2 pi)^-1 int chi^2 over both halves, by 8000-node Gauss-Legendre
CHI_SQUARED_MASS = 0.1402379537569614


def random_f(rng, n=512, period=40.0, top=None):
    g = GridSpec(n, period)
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    if top is not None:
        c[np.abs(g.frequencies) > top] = 0
    return SpectralFunction(g, c)


class TestCutoff:
    def test_support_and_range(self):
        chi = BandCutoff()
        xi = np.linspace(-1.5, 1.5, 30001)
        v = chi(xi)
        assert np.all(v[(np.abs(xi) < 0.5 - 1e-12) | (np.abs(xi) > 1 + 1e-12)] == 0)
        assert v.min() >= 0 and v.max() <= 1
        assert np.array_equal(chi(-xi), v)
        assert np.all(chi(np.linspace(0.55, 0.95, 50)) == 1)

    def test_smooth_step(self):
        assert smooth_step(-1) == 0 and smooth_step(2) == 1 and smooth_step(0.5) == pytest.approx(0.5)

    def test_bad_transitions(self):
        with pytest.raises(ValueError):
            BandCutoff(rise=(0.4, 0.6))


class TestEvolve:
    def test_identity_at_zero(self, rng):
        f = random_f(rng)
        assert np.array_equal(evolve(f, 0.0, 2.0).coeffs, f.coeffs)

    def test_rejects_negative_time_and_exponent(self, rng):
        f = random_f(rng)
        with pytest.raises(ValueError):
            evolve(f, -0.1, 2.0)
        with pytest.raises(ValueError):
            evolve(f, 0.1, 0.0)

    @given(st.floats(0, 1), st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]), st.integers(0, 2**32 - 1))
    def test_unitary(self, t, a, seed):
        f = random_f(np.random.default_rng(seed), n=256)
        assert abs(l2_norm(evolve(f, t, a)) / l2_norm(f) - 1) <= 1e-12

    @given(st.floats(0, 0.5), st.floats(0, 0.5), st.integers(0, 2**32 - 1))
    def test_group_law(self, t1, t2, seed):
        f = random_f(np.random.default_rng(seed), n=128)
        lhs = evolve(evolve(f, t1, 2.0), t2, 2.0).coeffs
        rhs = evolve(f, t1 + t2, 2.0).coeffs
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(f.coeffs))

    def test_band_disjoint_support_vanishes(self, rng):
        f = random_f(rng, top=10.0)
        assert not evolve_band(f, 0.3, 2.0, 64.0).coeffs.any()

    def test_band_at_zero_is_cutoff(self, rng):
        f = random_f(rng)
        g = evolve_band(f, 0.0, 2.0, 30.0)
        assert np.array_equal(g.coeffs, f.coeffs * BandCutoff()(f.xi / 30.0))

    def test_band_contracts(self, rng):
        f = random_f(rng)
        assert l2_norm(evolve_band(f, 0.4, 1.5, 20.0)) <= l2_norm(f)
        with pytest.raises(ValueError):
            evolve_band(f, 0.1, 2.0, 0.5)


class TestDirect:
    def test_no_dispersion(self):
        mix = random_gaussian_mixture(np.random.default_rng(3))
        lo, hi = mix.support
        x = 0.37
        val = evaluate_direct(mix, mix.support, x, 0.0, 2.0)
        ref = quad(lambda v: mix(v) * np.exp(1j * x * v), lo, hi, complex_func=True, limit=400, epsabs=1e-13)[0]
        ref /= 2 * math.pi
        assert abs(val - ref) <= 1e-8

    def test_matches_grid_at_a_1_5(self, rng):
        mix = random_gaussian_mixture(rng)
        g = GridSpec(4096, 256.0)
        f = mix.on_grid(g)
        ft = evolve(f, 0.1, 1.5)
        xs = rng.uniform(0, 10, 32)
        ref = synthesize_at(ft, xs)
        got = np.array([evaluate_direct(mix, mix.support, x, 0.1, 1.5) for x in xs])
        assert np.max(np.abs(got - ref)) <= 1e-6

    def test_gaussian_a2_t_quarter(self, rng):
        mix = random_gaussian_mixture(rng, n_bumps=1)
        g = GridSpec(4096, 256.0)
        ft = evolve(mix.on_grid(g), 0.25, 2.0)
        x = 1.3
        assert abs(evaluate_direct(mix, mix.support, x, 0.25, 2.0) - synthesize_at(ft, [x])[0]) <= 1e-6

    def test_centered_mode_keeps_modulus(self, rng):
        mix = random_gaussian_mixture(rng, center_range=(40, 42), width_range=(0.3, 0.5), n_bumps=1)
        c = float(mix.centers[0])
        plain = evaluate_direct(mix, mix.support, 0.8, 0.3, 2.0)
        shifted = evaluate_direct(mix, mix.support, 0.8, 0.3, 2.0, center=c)
        assert abs(abs(plain) - abs(shifted)) <= 1e-9

    def test_dk_modulus_on_interval(self):
        p = select_params(2.0, 0.2, 0.02, 1e-9, 10.0)
        spec = dk_spectrum(p, make_bump())
        x = 0.5 * p.interval_length
        t = x / p.speed
        assert dk_modulus(p, spec, x, t) >= 0.5

    def test_rejects_bad_support(self):
        with pytest.raises(ValueError):
            evaluate_direct(lambda x: x, (1.0, 1.0), 0.0, 0.0, 2.0)
        with pytest.raises(ValueError):
            evaluate_direct(lambda x: x, (0.0, 1.0), 0.0, 0.0, 2.0, nodes=8)


class TestQuadrature:
    def test_polynomial_exact(self):
        r = oscillatory_quad(lambda x: x**5 + 0j, 0.0, 2.0)
        assert r.value == pytest.approx(64 / 6, rel=1e-14)

    def test_oscillatory(self):
        w = 500.0
        r = oscillatory_quad(lambda x: np.exp(1j * w * x), 0.0, 1.0, variation=w)
        assert abs(r.value - (np.exp(1j * w) - 1) / (1j * w)) <= 1e-12

    def test_budget(self):
        with pytest.raises(QuadratureError):
            oscillatory_quad(lambda x: np.exp(1j * 1e7 * x**2), 0.0, 1.0, max_nodes=4096)

    @given(st.floats(1, 1e6), st.floats(-0.5, 0.5), st.sampled_from([0.5, 1.5, 2.0, 3.0]), st.sampled_from([-1, 1]))
    def test_power_increment(self, c, frac, a, sign):
        center = sign * c
        eta = frac * c
        exact = abs(center + eta) ** a - abs(center) ** a
        assert power_increment(center, eta, a) == pytest.approx(exact, rel=1e-9, abs=1e-9 * c**a)


class TestTranslate:
    def test_identity(self, rng):
        f = random_one_sided(GridSpec(64, 10.0), rng, 20.0)
        assert translate_a1(f, 0.0) is f

    def test_single_mode(self):
        g = GridSpec(64, 2 * math.pi)
        c = np.zeros(64, complex)
        c[-5] = 1.0
        f = SpectralFunction(g, c)
        out = translate_a1(f, 0.2)
        assert out.coeffs[-5] == pytest.approx(np.exp(1j * 0.2 * 5), abs=1e-15)
        xs = g.x
        assert np.allclose(synthesize(out), np.exp(-5j * (xs - 0.2)) / (2 * math.pi), atol=1e-14)

    @pytest.mark.parametrize("side", [-1, 1])
    def test_matches_evolve(self, rng, side):
        f = random_one_sided(GridSpec(256, 30.0), rng, 40.0, side=side)
        a = synthesize(translate_a1(f, 0.7))
        b = synthesize(evolve(f, 0.7, 1.0))
        assert np.max(np.abs(a - b)) <= 1e-12

    def test_two_sided_rejected(self, rng):
        f = random_f(rng, n=64)
        with pytest.raises(ValueError):
            translate_a1(f, 0.1)


class TestKernel:
    def test_diagonal(self):
        k = ttstar_kernel(KernelProbe(256.0, 2.0, 0.3, 0.3, 1.0, 1.0))
        assert abs(k.imag) <= 1e-15 and k.real == pytest.approx(CHI_SQUARED_MASS, rel=1e-12)

    def test_stationary_example(self):
        lam, dt = 256.0, 0.1
        k = ttstar_kernel(KernelProbe(lam, 2.0, dt, 0.0, lam * dt, 0.0))
        assert abs(k) <= 5 * lam**-1 * dt**-0.5

    def test_probe_validation(self):
        with pytest.raises(ValueError):
            KernelProbe(0.5, 2.0, 0.1, 0.1, 0, 0)
        with pytest.raises(ValueError):
            KernelProbe(2.0, 2.0, 1.5, 0.1, 0, 0)
        p = KernelProbe(2.0, 2.0, 0.4, 0.1, 3.0, 1.0)
        assert p.dt == pytest.approx(0.3) and p.dx == 2.0
