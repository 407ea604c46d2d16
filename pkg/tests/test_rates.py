"""Instantaneous NOMA/OMA rates and the hardware-impairment power budget."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ios_hmimo.errors import SicOrderWarning
from ios_hmimo.rates import (
    HardwareQuality,
    LinkBudget,
    PowerSplit,
    geometric_mean_rate,
    hwi_power_budget,
    noma_rates,
    oma_rates,
    sic_order_holds,
)
from ios_hmimo.theory import asymptotic_rho

PERFECT = HardwareQuality(eps_v=1.0, eps_u1=1.0, eps_u2=1.0)


def budget(rho=1.0, s1=1.0, s2=1.0):
    return LinkBudget(rho=rho, sigma2_1=s1, sigma2_2=s2)


class TestHwiPowerBudget:
    def test_perfect_hardware_no_distortion(self):
        b = hwi_power_budget(2.0, 1, PowerSplit.of(0.3), PERFECT, budget(rho=5.0))
        assert b.bs_distortion_s1 == b.bs_distortion_s2 == 0.0
        assert b.ue_distortion_s1 == b.ue_distortion_s2 == 0.0
        assert b.desired_s1 == pytest.approx(5.0 * 0.3 * 2.0)

    def test_shares_sum_to_symbol_power(self):
        hq = HardwareQuality(eps_v=0.7, eps_u1=0.9, eps_u2=0.8)
        b = hwi_power_budget(1.5, 2, PowerSplit.of(0.4), hq, budget(rho=3.0))
        s1_power = b.desired_s1 + b.bs_distortion_s1 + b.ue_distortion_s1
        assert s1_power == pytest.approx(0.4 * 3.0 * 1.5)

    def test_zero_ue_quality_all_distortion(self):
        hq = HardwareQuality(eps_v=1.0, eps_u1=0.0, eps_u2=1.0)
        b = hwi_power_budget(1.0, 1, PowerSplit.of(0.5), hq, budget())
        assert b.desired_s1 == 0.0
        assert b.ue_distortion_s1 == pytest.approx(0.5)

    def test_total_power_identity_randomized(self):
        rng = np.random.default_rng(17)
        for _ in range(10_000):
            hq = HardwareQuality(*rng.uniform(0.0, 1.0, size=3))
            split = PowerSplit.of(float(rng.uniform(0.0, 1.0)))
            bud = budget(*rng.uniform(0.1, 10.0, size=3))
            h_sq = float(rng.uniform(0.0, 100.0))
            b = hwi_power_budget(h_sq, int(rng.integers(1, 3)), split, hq, bud)
            expected = bud.rho * h_sq + b.noise
            assert b.total == pytest.approx(expected, rel=1e-10)


class TestNomaRates:
    def test_single_user_reduction(self):
        r1, r2 = noma_rates(4.0, 1.0, PowerSplit.of(1.0), PERFECT, budget(rho=2.0))
        assert r1 == pytest.approx(math.log2(1.0 + 2.0 * 4.0))
        assert r2 == 0.0

    def test_equal_split_interference_limit(self):
        for h2 in (0.1, 1.0, 100.0, 1e6):
            _, r2 = noma_rates(2 * h2, h2, PowerSplit.of(0.5), PERFECT, budget(rho=10.0))
            assert r2 <= 1.0

    def test_worked_example(self):
        r1, r2 = noma_rates(
            1.0, 0.01, PowerSplit.of(0.2), PERFECT, budget(rho=100.0)
        )
        assert r1 == pytest.approx(math.log2(21.0), rel=1e-12)
        assert r2 == pytest.approx(math.log2(5.0 / 3.0), rel=1e-12)

    def test_sic_warning_emitted(self):
        with pytest.warns(SicOrderWarning):
            noma_rates(0.5, 1.0, PowerSplit.of(0.5), PERFECT, budget(), check_sic=True)

    def test_r1_increasing_r2_decreasing_in_kappa1(self):
        hq = HardwareQuality(eps_v=0.99, eps_u1=0.98, eps_u2=0.97)
        kappas = np.linspace(0.05, 0.95, 19)
        r1s, r2s = zip(
            *(noma_rates(5.0, 0.5, PowerSplit.of(float(k)), hq, budget(rho=2.0)) for k in kappas)
        )
        assert all(b > a for a, b in zip(r1s, r1s[1:]))
        assert all(b < a for a, b in zip(r2s, r2s[1:]))

    def test_bounded_by_power_limits(self):
        hq = HardwareQuality(eps_v=0.99, eps_u1=0.99, eps_u2=0.99)
        split = PowerSplit.of(0.3)
        lim1, lim2 = asymptotic_rho(split, hq)
        for rho in (1.0, 1e3, 1e6, 1e12):
            r1, r2 = noma_rates(1.0, 1.0, split, hq, budget(rho=rho))
            assert r1 < lim1 and r2 < lim2

    def test_vectorized(self):
        h1 = np.array([1.0, 2.0, 4.0])
        r1, r2 = noma_rates(h1, h1 / 10, PowerSplit.of(0.5), PERFECT, budget())
        assert r1.shape == (3,)
        assert np.all(np.diff(r1) > 0)


class TestOmaRates:
    def test_full_resource_single_user(self):
        r1, r2 = oma_rates(3.0, 1.0, PowerSplit.of(1.0), PERFECT, budget(rho=1.0))
        assert r1 == pytest.approx(math.log2(4.0))
        assert r2 == 0.0

    def test_exact_half_split_value(self):
        r1, _ = oma_rates(3.0, 1.0, PowerSplit.of(0.5), PERFECT, budget(rho=1.0))
        assert r1 == pytest.approx(1.0, rel=1e-12)

    def test_impairment_strictly_reduces_rate(self):
        impaired = HardwareQuality(eps_v=0.99, eps_u1=1.0, eps_u2=1.0)
        r_perf, _ = oma_rates(2.0, 1.0, PowerSplit.of(0.5), PERFECT, budget(rho=10.0))
        r_impr, _ = oma_rates(2.0, 1.0, PowerSplit.of(0.5), impaired, budget(rho=10.0))
        assert r_impr < r_perf

    def test_noma_sum_beats_oma_with_matched_split(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            h2 = float(rng.uniform(0.01, 1.0))
            h1 = h2 * float(rng.uniform(1.5, 100.0))
            split = PowerSplit.of(float(rng.uniform(0.05, 0.95)))
            bud = budget(rho=float(rng.uniform(0.1, 100.0)))
            n1, n2 = noma_rates(h1, h2, split, PERFECT, bud)
            o1, o2 = oma_rates(h1, h2, split, PERFECT, bud)
            assert n1 + n2 >= o1 + o2 - 1e-12


class TestGeometricMean:
    def test_zero_absorbing(self):
        assert geometric_mean_rate(0.0, 123.0) == 0.0

    def test_equal_rates(self):
        assert geometric_mean_rate(2.0, 2.0) == pytest.approx(2.0)

    def test_four_and_one(self):
        assert geometric_mean_rate(4.0, 1.0) == pytest.approx(2.0)


class TestSicOrder:
    def test_ordered(self):
        assert sic_order_holds(1.0, 0.5, budget())

    def test_reversed(self):
        assert not sic_order_holds(0.5, 1.0, budget())

    def test_noise_normalization(self):
        assert not sic_order_holds(1.0, 1.0, budget(s1=1.0, s2=0.5))


class TestValidation:
    def test_power_split_sum(self):
        with pytest.raises(ValueError):
            PowerSplit(0.6, 0.6)

    def test_power_split_nonnegative(self):
        with pytest.raises(ValueError):
            PowerSplit(-0.1, 1.1)

    def test_quality_range(self):
        with pytest.raises(ValueError):
            HardwareQuality(eps_v=1.2, eps_u1=1.0, eps_u2=1.0)

    def test_budget_positive(self):
        with pytest.raises(ValueError):
            LinkBudget(rho=0.0, sigma2_1=1.0, sigma2_2=1.0)


@settings(max_examples=50, deadline=None)
@given(
    h1=st.floats(min_value=1e-6, max_value=1e6),
    h2=st.floats(min_value=1e-6, max_value=1e6),
    kappa1=st.floats(min_value=0.0, max_value=1.0),
    rho=st.floats(min_value=1e-3, max_value=1e9),
)
def test_rates_always_nonnegative(h1, h2, kappa1, rho):
    hq = HardwareQuality(eps_v=0.95, eps_u1=0.9, eps_u2=0.85)
    split = PowerSplit.of(kappa1)
    r1, r2 = noma_rates(h1, h2, split, hq, budget(rho=rho))
    o1, o2 = oma_rates(h1, h2, split, hq, budget(rho=rho))
    assert r1 >= 0 and r2 >= 0 and o1 >= 0 and o2 >= 0
