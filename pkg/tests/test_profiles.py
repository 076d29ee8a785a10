import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airtap.profiles import (AmTapParams, LmTapParams, StationaryLmParams,
                             am_tap_sample, generator_for, lm_tap_sample,
                             sample_profile, stationary_lm_sample)

TWO_PI = 2.0 * math.pi


def period_span(params, j, samples_per_period=200):
    """Amplitude span over the j-th oscillation period, densely sampled."""
    T = 1.0 / params.f_am
    ts = j * T + np.arange(samples_per_period) * (T / samples_per_period)
    vals = [am_tap_sample(float(t), params).amplitude_scale for t in ts]
    return max(vals) - min(vals)


class TestAmTap:
    def test_starts_at_zero(self):
        s = am_tap_sample(0.0, AmTapParams())
        assert s.amplitude_scale == 0.0
        assert s.focus_offset == (0.0, 0.0)

    def test_exactly_max_after_attenuation(self):
        p = AmTapParams(a_max=0.8)
        for t in (p.t_att, p.t_att + 1e-9, p.t_att * 3, 10.0):
            assert am_tap_sample(t, p).amplitude_scale == 0.8

    def test_closed_form_at_tau(self):
        # f_am * tau integer puts the oscillation at its minimum, so the
        # independent closed form gives a_max * (1 - exp(-1)). (The value
        # 1 - e^-1/2 would need the sine term to vanish, which it does not
        # at whole periods.)
        p = AmTapParams(f_am=100.0, tau=0.03, t_att=0.1, a_max=1.0)
        assert p.f_am * p.tau == pytest.approx(3.0)
        expect = 1.0 - math.exp(-1.0)  # 0.6321205588285577
        assert am_tap_sample(p.tau, p).amplitude_scale == pytest.approx(expect,
                                                                        rel=1e-12)

    def test_span_decays_and_vanishes(self):
        p = AmTapParams()
        spans = [period_span(p, j) for j in range(int(p.t_att * p.f_am))]
        for a, b in zip(spans, spans[1:]):
            assert b <= a + 1e-12
        # beyond t_att the amplitude is pinned at a_max
        ts = p.t_att + np.linspace(0.0, 0.05, 300)
        vals = {am_tap_sample(float(t), p).amplitude_scale for t in ts}
        assert vals == {p.a_max}

    def test_amplitude_within_bounds(self):
        p = AmTapParams(a_max=0.7)
        for t in np.linspace(0.0, 0.2, 1000):
            a = am_tap_sample(float(t), p).amplitude_scale
            assert 0.0 <= a <= 0.7

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            am_tap_sample(-1e-9, AmTapParams())

    @pytest.mark.parametrize("kw", [dict(f_am=0.0), dict(tau=0.0),
                                    dict(t_att=-1.0), dict(a_max=0.0),
                                    dict(a_max=1.5)])
    def test_invalid_params(self, kw):
        with pytest.raises(ValueError):
            AmTapParams(**kw)


class TestLmTap:
    def test_initial_sample(self):
        p = LmTapParams()
        s = lm_tap_sample(0.0, p)
        assert s.focus_offset == (0.0, 0.0)
        assert s.amplitude_scale == p.a_max

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 1.0))
    def test_amplitude_always_max(self, t):
        p = LmTapParams(a_max=0.9)
        assert lm_tap_sample(t, p).amplitude_scale == 0.9

    def test_envelope_decay_oracle(self):
        # with many oscillations per tau, the peak offset in the period
        # right after t = tau is size_max/(2e); oracle: dense sampling of
        # the closed form envelope * sine
        p = LmTapParams(f_lm=500.0, size_max=0.01, size_min=0.0, tau=0.1,
                        t_att=1.0)
        T = 1.0 / p.f_lm
        ts = p.tau + np.arange(20000) * (T / 20000)
        oracle = max(
            (p.size_max * math.exp(-t / p.tau) / 2.0) * abs(math.sin(TWO_PI * p.f_lm * t))
            for t in ts)
        got = max(abs(lm_tap_sample(float(t), p).focus_offset[0]) for t in ts)
        assert got == oracle
        assert got == pytest.approx(p.size_max / (2.0 * math.e), rel=0.02)

    def test_peak_offset_non_increasing(self):
        p = LmTapParams()
        T = 1.0 / p.f_lm
        peaks = []
        for j in range(int(p.t_att / T)):
            ts = j * T + np.arange(400) * (T / 400)
            peaks.append(max(math.hypot(*lm_tap_sample(float(t), p).focus_offset)
                             for t in ts))
        for a, b in zip(peaks, peaks[1:]):
            assert b <= a + 1e-15

    def test_floor_at_size_min(self):
        p = LmTapParams(size_min=0.002, size_max=0.01, tau=0.01, t_att=0.5)
        ts = np.linspace(0.2, 0.5, 500)  # envelope long since decayed
        peak = max(math.hypot(*lm_tap_sample(float(t), p).focus_offset) for t in ts)
        assert peak == pytest.approx(p.size_min / 2.0, rel=1e-3)

    def test_offset_follows_axis(self):
        p = LmTapParams(axis=(0.0, 1.0))
        s = lm_tap_sample(0.0021, p)
        assert s.focus_offset[0] == 0.0
        assert s.focus_offset[1] != 0.0

    def test_axis_normalized(self):
        p = LmTapParams(axis=(3.0, 4.0))
        assert math.hypot(*p.axis) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("kw", [dict(f_lm=0.0), dict(size_max=0.0005, size_min=0.001),
                                    dict(size_min=-1e-6), dict(axis=(0.0, 0.0))])
    def test_invalid_params(self, kw):
        with pytest.raises(ValueError):
            LmTapParams(**kw)


class TestStationaryLm:
    def test_initial_sample(self):
        p = StationaryLmParams()
        s = stationary_lm_sample(0.0, p)
        assert s.focus_offset == (0.0, 0.0)
        assert s.amplitude_scale == p.a_max

    def test_quarter_period_peak(self):
        p = StationaryLmParams(f_lm=10.0, size=0.0006)
        s = stationary_lm_sample(0.025, p)
        assert abs(s.focus_offset[0]) == pytest.approx(p.size / 2.0, rel=1e-12)

    @pytest.mark.parametrize("kw", [dict(f_lm=4.0), dict(f_lm=16.0),
                                    dict(f_lm=4.999), dict(size=0.002),
                                    dict(size=0.0010001), dict(size=0.0)])
    def test_out_of_regime_rejected(self, kw):
        with pytest.raises(ValueError):
            StationaryLmParams(**kw)

    def test_bounds_inclusive(self):
        StationaryLmParams(f_lm=5.0)
        StationaryLmParams(f_lm=15.0)
        StationaryLmParams(size=0.001)

    def test_rejection_names_the_bound(self):
        with pytest.raises(ValueError, match=r"\[5, 15\]"):
            StationaryLmParams(f_lm=20.0)
        with pytest.raises(ValueError, match="1] mm"):
            StationaryLmParams(size=0.002)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 100.0))
    def test_offset_never_exceeds_half_millimeter(self, t):
        p = StationaryLmParams(f_lm=15.0, size=0.001)
        s = stationary_lm_sample(t, p)
        assert math.hypot(*s.focus_offset) <= 0.0005 + 1e-18


class TestSampleProfile:
    def test_frame_count(self):
        series = sample_profile(AmTapParams(), 1000.0, 0.1)
        assert len(series) == 100

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 199))
    def test_bit_identical_to_pointwise(self, n):
        p = LmTapParams()
        series = sample_profile(p, 1000.0, 0.2, t0=0.013)
        t = 0.013 + n / 1000.0
        assert series.samples[n] == lm_tap_sample(t, p)
        assert series.time(n) == t

    def test_am_terminal_convergence(self):
        # fast decay: every sample in the last 10 ms of the attenuation
        # window is within 1e-6 of a_max (closed-form oracle below)
        p = AmTapParams(f_am=200.0, tau=0.005, t_att=0.1, a_max=1.0)
        series = sample_profile(p, 1000.0, p.t_att)
        last = [s.amplitude_scale for s in series.samples[-10:]]
        oracle = []
        for n in range(len(series) - 10, len(series)):
            t = n / 1000.0
            m = math.exp(-t / p.tau)
            osc = (1.0 + math.sin(TWO_PI * p.f_am * t - math.pi / 2.0)) / 2.0
            oracle.append(p.a_max * ((1.0 - m) + m * osc))
        assert last == oracle
        assert max(last) >= p.a_max - 1e-6
        assert abs(max(last) - p.a_max) <= 1e-6

    def test_accepts_plain_callable(self):
        from airtap.profiles import DriveSample
        series = sample_profile(lambda t: DriveSample(0.5, (t, 0.0)), 100.0, 0.05)
        assert len(series) == 5
        assert series.samples[3].focus_offset[0] == 3 / 100.0

    @pytest.mark.parametrize("rate,duration", [(0.0, 1.0), (-5.0, 1.0),
                                               (1000.0, 0.0), (1000.0, -0.1),
                                               (1.0, 0.5)])
    def test_invalid_sampling(self, rate, duration):
        with pytest.raises(ValueError):
            sample_profile(AmTapParams(), rate, duration)

    def test_generator_dispatch(self):
        for params, fn in ((AmTapParams(), am_tap_sample),
                           (LmTapParams(), lm_tap_sample),
                           (StationaryLmParams(), stationary_lm_sample)):
            gen = generator_for(params)
            assert gen(0.01) == fn(0.01, params)
        with pytest.raises(TypeError):
            generator_for("am")
