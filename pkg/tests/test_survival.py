import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamowlab.errors import InfiniteMoment, OscillationLimit, ValidationError, WindowTooEarly, WrongTimeDomain
from gamowlab.gamow import ResonancePole, decaying, time_evolution_factor
from gamowlab.numerics import integrate_half_line, integrate_real_line
from gamowlab.survival import (
    SpectralDensity,
    amplitude,
    background,
    crossover_time,
    energy_variance,
    fit_longtime,
    longtime_exponent,
    nondecay_probability,
    powerlaw_onset,
    reference_probability,
    zeno_check,
)


class TestDensity:
    @pytest.mark.parametrize(
        "kind, e, w", [("bw_full_line", 1.0, 0.5), ("bw_truncated", 2.0, 3.0), ("gaussian_truncated", 0.5, 1.0)]
    )
    def test_unit_weight(self, kind, e, w):
        d = SpectralDensity(kind, e, w)
        f = d.pdf
        if d.lower == 0.0:
            r = integrate_half_line(f, center=e, scale=w)
        else:
            r = integrate_real_line(f, center=e, scale=w)
        assert abs(r.value - 1) < 1e-8

    def test_support(self):
        d = SpectralDensity("bw_truncated", 2.0, 1.0)
        assert d.pdf(-0.1) == 0
        assert d.pdf(0.1) > 0

    @pytest.mark.parametrize("kwargs", [dict(kind="square", energy=1, width=1), dict(kind="bw_truncated", energy=1, width=0)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            SpectralDensity(**kwargs)


class TestAmplitude:
    @pytest.mark.parametrize("kind", ["bw_full_line", "bw_truncated", "gaussian_truncated"])
    def test_t_zero(self, kind):
        assert amplitude(SpectralDensity(kind, 3.0, 1.0), 0.0) == 1

    def test_negative_time(self):
        with pytest.raises(WrongTimeDomain):
            amplitude(SpectralDensity("bw_truncated", 3.0, 1.0), -1.0)

    @pytest.mark.parametrize("t", [0.1, 1.0, 7.5, 40.0])
    def test_full_line_matches_gamow_factor(self, t):
        e_r, w = 2.0, 0.5
        expected = time_evolution_factor(decaying(ResonancePole(e_r, w)), t)
        assert abs(amplitude(SpectralDensity("bw_full_line", e_r, w), t) - expected) < 1e-10

    def test_truncation_negligible_early(self):
        full = amplitude(SpectralDensity("bw_full_line", 10.0, 0.5), 1.0)
        trunc = amplitude(SpectralDensity("bw_truncated", 10.0, 0.5), 1.0)
        assert abs(full - trunc) < 1e-2

    @pytest.mark.parametrize("t", [0.3, 2.0, 9.0])
    def test_contour_and_panels_agree(self, t):
        d = SpectralDensity("bw_truncated", 5.0, 1.0)
        assert abs(amplitude(d, t, method="contour") - amplitude(d, t, method="panels")) < 1e-8

    def test_gaussian_closed_form(self):
        # far from the edge the truncated Gaussian is a plain Gaussian
        e_r, s, t = 30.0, 1.0, 1.7
        expected = np.exp(-1j * e_r * t - 0.5 * (s * t) ** 2)
        assert abs(amplitude(SpectralDensity("gaussian_truncated", e_r, s), t) - expected) < 1e-9

    def test_oscillation_limit(self):
        with pytest.raises(OscillationLimit):
            amplitude(SpectralDensity("gaussian_truncated", 10.0, 1.0), 5e3)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0, 30), st.floats(1e-4, 1e-2))
    def test_continuity(self, t, dt):
        d = SpectralDensity("gaussian_truncated", 4.0, 1.0)
        first_moment = 4.0 + 1.0  # bound on int |E| rho
        assert abs(amplitude(d, t + dt) - amplitude(d, t)) <= first_moment * dt + 1e-9


class TestProbability:
    def test_t_zero(self):
        assert nondecay_probability(SpectralDensity("bw_truncated", 3.0, 1.0), 0.0) == 1

    def test_full_line_two_lifetimes(self):
        w = 0.4
        p = nondecay_probability(SpectralDensity("bw_full_line", 3.0, w), 2 / w)
        assert p == pytest.approx(math.exp(-2), rel=1e-9)

    def test_quadratic_onset(self):
        d = SpectralDensity("gaussian_truncated", 10.0, 1.0)
        var = energy_variance(d)
        for t in (1e-3, 1e-2, 3e-2):
            assert (1 - nondecay_probability(d, t)) / t**2 == pytest.approx(var, rel=1e-3)

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(["bw_full_line", "bw_truncated", "gaussian_truncated"]), st.floats(0.5, 10), st.floats(0.1, 2), st.floats(0, 100))
    def test_bounded(self, kind, e, w, t):
        d = SpectralDensity(kind, e, w)
        if kind == "gaussian_truncated":
            t = min(t, 50.0)
        p = nondecay_probability(d, t)
        assert 0 <= p <= 1

    def test_background(self):
        assert abs(background(SpectralDensity("bw_full_line", 5.0, 1.0), 3.0)) < 1e-10
        assert background(SpectralDensity("bw_truncated", 5.0, 1.0), 100.0) > 0
        assert background(SpectralDensity("gaussian_truncated", 5.0, 1.0), 1.0) is None

    def test_reference(self):
        assert reference_probability(SpectralDensity("bw_truncated", 5.0, 0.5), 2.0) == math.exp(-1.0)


class TestLongTime:
    def test_inverse_square(self):
        d = SpectralDensity("bw_truncated", 5.0, 1.0)
        assert longtime_exponent(d, 60, 200) == pytest.approx(-2.0, abs=0.2)

    def test_power_law_dominates_at_window_edge(self):
        d = SpectralDensity("bw_truncated", 5.0, 1.0)
        fit = fit_longtime(d, 60, 200)
        assert fit.probabilities[-1] > reference_probability(d, fit.times[-1])

    def test_edge_oracle(self):
        # |A| ~ rho(0) / t from the lower spectral edge
        d = SpectralDensity("bw_truncated", 5.0, 1.0)
        t = 500.0
        assert abs(amplitude(d, t)) == pytest.approx(float(d.pdf(0.0)) / t, rel=1e-2)

    def test_full_line_rejected(self):
        with pytest.raises(ValidationError):
            longtime_exponent(SpectralDensity("bw_full_line", 5.0, 1.0), 60, 200)

    def test_too_early(self):
        with pytest.raises(WindowTooEarly):
            longtime_exponent(SpectralDensity("bw_truncated", 5.0, 1.0), 1, 20)

    def test_crossover_moves_later(self):
        times = [crossover_time(SpectralDensity("bw_truncated", e, 1.0)) for e in (2.0, 5.0, 10.0)]
        assert times[0] < times[1] < times[2]

    def test_onset_moves_later(self):
        grid = np.geomspace(1, 60, 40)
        onsets = [powerlaw_onset(SpectralDensity("bw_truncated", e, 1.0), grid) for e in (2.0, 5.0)]
        assert onsets[0] is not None and onsets[1] is not None
        assert onsets[0] < onsets[1]


class TestZeno:
    d = SpectralDensity("gaussian_truncated", 10.0, 1.0)

    def test_small(self):
        assert abs(zeno_check(self.d, 1e-3)) < 1e-2

    def test_linear_in_step(self):
        est = [zeno_check(self.d, h) for h in (1e-2, 1e-3, 1e-4)]
        for a, b in zip(est, est[1:]):
            assert a / b == pytest.approx(10.0, rel=1e-2)

    def test_slope_is_variance(self):
        h = 1e-4
        assert -zeno_check(self.d, h) / h == pytest.approx(energy_variance(self.d), rel=1e-3)

    def test_lorentzian_rejected(self):
        with pytest.raises(InfiniteMoment):
            zeno_check(SpectralDensity("bw_truncated", 10.0, 1.0), 1e-3)
