import math

import numpy as np
import pytest

from udw_response.kernels import ParticleState, phi_squared_matter
from udw_response.quadrature import QuadratureSpec
from udw_response.response import (
    DetectorConfig,
    MatterUnderflowError,
    ResonanceProximityError,
    avg_to_matter_ratio,
    p_avg,
    p_matter_analytic,
    p_matter_quad,
    p_matter_quad2d,
    p_matter_resonance,
    p_total,
    p_vacuum,
    ratio_normalized,
)

SPEC = QuadratureSpec()
CENTERED = ParticleState(m=10.0)


def det(omega, tau_i=0.0, delta_tau=4.0, lam=1.0):
    return DetectorConfig(omega=omega, lam=lam, tau_i=tau_i, tau_f=tau_i + delta_tau)


class TestDetectorConfig:
    @pytest.mark.parametrize("kwargs", [
        {"omega": 5.0, "tau_i": -1.0, "tau_f": 2.0},
        {"omega": 5.0, "tau_i": 3.0, "tau_f": 2.0},
        {"omega": np.nan, "tau_i": 0.0, "tau_f": 1.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            DetectorConfig(**kwargs)

    def test_delta_tau(self):
        assert det(5.0, tau_i=1.0, delta_tau=3.0).delta_tau == 3.0


class TestPVacuum:
    def test_zero_window(self):
        value, err = p_vacuum(10.0, det(5.0, delta_tau=0.0), SPEC)
        assert value == 0.0 and err == 0.0

    def test_independent_of_switch_on(self):
        a, _ = p_vacuum(10.0, det(5.0, tau_i=0.0, delta_tau=3.0), SPEC)
        b, _ = p_vacuum(10.0, det(5.0, tau_i=4.0, delta_tau=3.0), SPEC)
        assert a == b

    def test_nonnegative(self):
        for omega in (-12.0, -5.0, 0.0, 5.0, 12.0):
            value, _ = p_vacuum(10.0, det(omega), SPEC)
            assert value >= 0.0

    def test_deexcitation_dominates(self):
        minus, _ = p_vacuum(10.0, det(-10.0), SPEC)
        plus, _ = p_vacuum(10.0, det(10.0), SPEC)
        assert minus > plus

    def test_scales_with_coupling_squared(self):
        base, _ = p_vacuum(10.0, det(5.0, delta_tau=2.0), SPEC)
        scaled, _ = p_vacuum(10.0, det(5.0, delta_tau=2.0, lam=3.0), SPEC)
        assert scaled == pytest.approx(9.0 * base, rel=1e-12)


class TestPMatterQuad:
    def test_zero_window(self):
        assert p_matter_quad(CENTERED, det(5.0, delta_tau=0.0), SPEC) == (0.0, 0.0)

    def test_gap_symmetry(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            st = ParticleState(m=10.0, x0=rng.uniform(-2, 2), k0=rng.uniform(-1, 1))
            omega = rng.uniform(0.5, 15.0)
            a, _ = p_matter_quad(st, det(omega), SPEC)
            b, _ = p_matter_quad(st, det(-omega), SPEC)
            assert abs(a - b) <= 1e-10 * abs(a)

    def test_nonnegative(self):
        st = ParticleState(m=10.0, x0=3.0, k0=-0.7)
        value, _ = p_matter_quad(st, det(17.0), SPEC)
        assert value >= 0.0

    def test_against_2d_oracle(self):
        # generic displaced, boosted parameter set
        st = ParticleState(m=10.0, x0=1.0, k0=0.5)
        d = det(8.0)
        one_d, _ = p_matter_quad(st, d, SPEC)
        spec2d = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-14, oscillation_panels_per_period=4)
        two_d, _ = p_matter_quad2d(st, d, spec2d)
        assert one_d == pytest.approx(two_d, rel=1e-6)


class TestPMatterAnalytic:
    def test_zero_window(self):
        assert p_matter_analytic(CENTERED, det(5.0, delta_tau=0.0), SPEC) == (0.0, 0.0)

    def test_requires_centered_packet(self):
        with pytest.raises(ValueError):
            p_matter_analytic(ParticleState(m=10.0, x0=1.0), det(5.0), SPEC)

    def test_resonance_window_rejected(self):
        with pytest.raises(ResonanceProximityError):
            p_matter_analytic(CENTERED, det(10.0 + 1e-7), SPEC)

    def test_matches_quadrature(self):
        for omega in (0.0, 5.0, -5.0, 20.0, -20.0):
            for tau_i in (0.0, 2.0):
                d = det(omega, tau_i=tau_i, delta_tau=2.0)
                pa, _ = p_matter_analytic(CENTERED, d, SPEC)
                pq, _ = p_matter_quad(CENTERED, d, SPEC)
                assert pa == pytest.approx(pq, rel=1e-6)

    def test_oscillation_period(self):
        # peaks of P_m vs delta_tau spaced by 2 pi / (m - omega)
        omega = 10.0 - np.pi
        dts = np.linspace(0.0, 20.0, 401)
        pm = np.array([
            p_matter_analytic(CENTERED, det(omega, delta_tau=float(t)), SPEC)[0]
            if t > 0 else 0.0
            for t in dts
        ])
        peaks = [dts[i] for i in range(1, len(dts) - 1)
                 if pm[i] > pm[i - 1] and pm[i] > pm[i + 1]]
        spacing = np.diff(peaks)
        assert np.mean(spacing) == pytest.approx(2.0, rel=0.05)

    def test_switch_on_monotonicity(self):
        values = [p_matter_analytic(CENTERED, det(10.0 - np.pi, tau_i=ti), SPEC)[0]
                  for ti in (0.0, 2.0, 4.0)]
        assert values[0] > values[1] > values[2]


class TestPMatterResonance:
    def test_zero_window(self):
        assert p_matter_resonance(CENTERED, det(10.0, delta_tau=0.0), SPEC) == (0.0, 0.0)

    def test_requires_exact_resonance(self):
        with pytest.raises(ValueError):
            p_matter_resonance(CENTERED, det(9.0), SPEC)

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_matches_quadrature(self, sign):
        for delta_tau in (0.5, 2.0, 6.0):
            d = det(sign * 10.0, delta_tau=delta_tau)
            pr, _ = p_matter_resonance(CENTERED, d, SPEC)
            pq, _ = p_matter_quad(CENTERED, d, SPEC)
            assert pr == pytest.approx(pq, rel=1e-6)

    def test_unbounded_growth(self):
        values = [p_matter_resonance(CENTERED, det(10.0, delta_tau=t), SPEC)[0]
                  for t in (10.0, 30.0, 55.0, 100.0)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert values[-1] > 1.0  # first-order result escapes perturbativity


class TestPTotal:
    def test_zero_coupling(self):
        res = p_total(CENTERED, det(5.0, lam=0.0), SPEC)
        assert res.p_v == res.p_m == res.p_p == 0.0

    def test_sum_is_exact(self):
        res = p_total(ParticleState(m=10.0, x0=1.0, k0=0.3), det(7.0), SPEC)
        assert res.p_p == res.p_v + res.p_m

    def test_vacuum_dominates_far_away(self):
        res = p_total(ParticleState(m=10.0, x0=8.0), det(10.0 - np.pi), SPEC)
        assert res.p_v > res.p_m

    def test_dispatch_methods(self):
        assert p_total(CENTERED, det(5.0), SPEC).method == "analytic"
        assert p_total(CENTERED, det(10.0), SPEC).method == "analytic"
        assert p_total(CENTERED, det(10.0), SPEC).resonance_flag
        assert p_total(ParticleState(m=10.0, x0=1.0), det(5.0), SPEC).method == "quad1d"
        near = p_total(CENTERED, det(10.0 + 1e-7), SPEC)
        assert near.method == "quad1d" and near.resonance_flag

    def test_perturbativity_flag(self):
        res = p_total(CENTERED, det(10.0, delta_tau=50.0), SPEC)
        assert res.perturbativity_flag and res.p_p > 0.1
        res = p_total(CENTERED, det(5.0, delta_tau=1.0), SPEC)
        assert not res.perturbativity_flag

    def test_resonance_peak_on_gap_grid(self):
        m = 10.0
        omegas = np.arange(-2.0 * m, 2.0 * m + 0.25, m / 20.0)
        pm = np.array([p_total(CENTERED, det(float(o)), SPEC).p_m for o in omegas])
        top_two = np.argsort(pm)[-2:]
        assert sorted(abs(omegas[i]) for i in top_two) == pytest.approx([m, m])

    def test_momentum_shifts_peak_toward_negative_x0(self):
        x0s = np.linspace(-2.0, 2.0, 41)
        pm = [p_total(ParticleState(m=10.0, x0=float(x), k0=1.0), det(10.0), SPEC).p_m
              for x in x0s]
        assert x0s[int(np.argmax(pm))] < 0.0


class TestPAvg:
    def test_degenerate_window_limit(self):
        value = p_avg(CENTERED, det(5.0, delta_tau=0.0), SPEC)
        assert value == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)

    def test_trapezoid_oracle(self):
        st = ParticleState(m=10.0, x0=1.0, k0=0.5)
        d = det(8.0, tau_i=0.5)
        taus = np.linspace(d.tau_i, d.tau_f, 100001)
        oracle = st.m / d.delta_tau * np.trapezoid(phi_squared_matter(st, taus, 0.0), taus)
        assert p_avg(st, d, SPEC) == pytest.approx(oracle, rel=1e-8)

    def test_decreasing_in_x0(self):
        values = [p_avg(ParticleState(m=10.0, x0=x), det(5.0), SPEC)
                  for x in (0.0, 1.0, 2.0, 3.0)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestRatioNormalized:
    def test_reference_point_is_exactly_one(self):
        states = [CENTERED, ParticleState(m=10.0, x0=2.0)]
        ratios = ratio_normalized(states, det(10.0), SPEC)
        assert ratios[0] == 1.0

    def test_requires_reference(self):
        with pytest.raises(ValueError):
            ratio_normalized([ParticleState(m=10.0, x0=1.0)], det(10.0), SPEC)

    def test_increases_with_separation(self):
        states = [ParticleState(m=10.0, x0=x) for x in (0.0, 2.0, 3.0, 4.0)]
        ratios = ratio_normalized(states, det(10.0), SPEC)
        assert all(a < b for a, b in zip(ratios, ratios[1:]))

    def test_consistent_with_components(self):
        st = ParticleState(m=10.0, x0=1.5, k0=0.5)
        d = det(10.0)
        direct = avg_to_matter_ratio(st, d, SPEC) / avg_to_matter_ratio(CENTERED, d, SPEC)
        via_grid = ratio_normalized([CENTERED, st], d, SPEC)[1]
        assert via_grid == pytest.approx(direct, rel=1e-12)

    def test_underflow_guard(self):
        with pytest.raises(MatterUnderflowError):
            avg_to_matter_ratio(ParticleState(m=10.0, x0=100.0), det(10.0), SPEC)
