import math

import numpy as np
import pytest

from ottosim import (
    AtomBath,
    DomainError,
    entropy,
    nbar_evolve,
    nbar_rate,
    temperature_from_nbar,
    thermal_population,
)

from conftest import assert_rel


def rk4_fixed(nbar0, t, bath, steps):
    """Plain fixed-step classical 4th-order integration of the rate equation."""
    h = t / steps
    y = nbar0
    for _ in range(steps):
        k1 = nbar_rate(y, bath)
        k2 = nbar_rate(y + 0.5 * h * k1, bath)
        k3 = nbar_rate(y + 0.5 * h * k2, bath)
        k4 = nbar_rate(y + h * k3, bath)
        y += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def ode_oracle(nbar0, t, bath, tol=1e-10):
    """Step-halving Richardson control around the fixed-step integrator."""
    steps = max(8, math.ceil(10.0 * bath.delta * t))
    prev = rk4_fixed(nbar0, t, bath, steps)
    while True:
        steps *= 2
        cur = rk4_fixed(nbar0, t, bath, steps)
        if abs(cur - prev) < tol:
            return cur
        prev = cur


class TestRate:
    def test_steady_state_is_stationary(self):
        bath = AtomBath(E=0.2, G=0.4)
        assert nbar_rate(bath.nbar_ss, bath) == pytest.approx(0.0, abs=1e-16)

    def test_vacuum_gain(self):
        assert nbar_rate(0.0, AtomBath(E=0.2, G=0.4)) == pytest.approx(0.2)

    def test_arithmetic(self):
        assert nbar_rate(3.0, AtomBath(E=0.2, G=0.4)) == pytest.approx(0.2 * 4 - 0.4 * 3)


class TestEvolve:
    def test_identity_at_zero_time(self):
        bath = AtomBath(E=0.2, G=0.4)
        assert nbar_evolve(1.7, 0.0, bath) == pytest.approx(1.7, rel=1e-15)

    def test_long_time_limit(self):
        bath = AtomBath(E=0.2, G=0.4)
        assert nbar_evolve(5.0, 400.0, bath) == pytest.approx(bath.nbar_ss, rel=1e-14)

    def test_against_ode_oracle(self):
        bath = AtomBath(E=0.2, G=0.4)
        got = nbar_evolve(0.0, 5.0, bath)
        want = ode_oracle(0.0, 5.0, bath)
        assert abs(got - want) < 1e-8
        # frozen value: (0 - 1) e^{-1} + 1 computed independently above
        assert got == pytest.approx(0.6321205588285577, abs=1e-12)

    def test_against_ode_oracle_random(self):
        rng = np.random.default_rng(20240711)
        for _ in range(20):
            e = rng.uniform(0.0, 0.4)
            g = rng.uniform(e + 0.05, min(1.0 - e, e + 0.55))
            bath = AtomBath(E=e, G=g)
            n0 = rng.uniform(0.0, 8.0)
            t = rng.uniform(0.0, 12.0)
            assert abs(nbar_evolve(n0, t, bath) - ode_oracle(n0, t, bath)) < 1e-8

    def test_semigroup(self):
        rng = np.random.default_rng(7)
        bath = AtomBath(E=0.13, G=0.37)
        for _ in range(50):
            n0 = rng.uniform(0.0, 6.0)
            t1, t2 = rng.uniform(0.0, 15.0, size=2)
            assert abs(
                nbar_evolve(nbar_evolve(n0, t1, bath), t2, bath)
                - nbar_evolve(n0, t1 + t2, bath)
            ) <= 1e-12

    def test_exact_exponential_contraction(self):
        # |n(t) - nss| must follow the decay exactly over several decades
        bath = AtomBath(E=0.2, G=0.4)
        n0 = 4.0
        for t in (5.0, 20.0, 35.0):  # e^{-1} to e^{-7}: ~3 decades
            gap = abs(nbar_evolve(n0, t, bath) - bath.nbar_ss)
            assert_rel(gap, abs(n0 - bath.nbar_ss) * math.exp(-bath.delta * t), 1e-12)

    def test_monotone_toward_steady_state(self):
        bath = AtomBath(E=0.2, G=0.4)
        ts = np.linspace(0.0, 30.0, 300)
        from_above = nbar_evolve(5.0, ts, bath)
        from_below = nbar_evolve(0.0, ts, bath)
        assert np.all(np.diff(from_above) < 0)
        assert np.all(np.diff(from_below) > 0)


class TestTemperature:
    def test_values(self):
        assert temperature_from_nbar(1.0, math.log(2.0)) == pytest.approx(1.0, rel=1e-14)
        assert temperature_from_nbar(2.0, 1.0) == pytest.approx(math.log(1.5), rel=1e-14)

    def test_round_trip_with_bath(self):
        bath = AtomBath(E=0.17, G=0.29)
        omega = 1.3
        assert_rel(
            temperature_from_nbar(bath.nbar_ss, omega), bath.effective_beta(omega), 1e-12
        )

    def test_monotone_decreasing(self):
        nbars = np.linspace(0.05, 10.0, 200)
        betas = [temperature_from_nbar(n, 1.0) for n in nbars]
        assert np.all(np.diff(betas) < 0)

    def test_domain_error_at_zero(self):
        with pytest.raises(DomainError):
            temperature_from_nbar(0.0, 1.0)


class TestEntropy:
    def test_zero_limit(self):
        assert entropy(0.0) == 0.0

    def test_one(self):
        assert entropy(1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-14)

    def test_slope_matches_temperature(self):
        # dS/dnbar = ln((nbar+1)/nbar), by central finite difference
        nbar, h = 2.0, 1e-6
        fd = (entropy(nbar + h) - entropy(nbar - h)) / (2.0 * h)
        assert_rel(fd, math.log((nbar + 1.0) / nbar), 1e-8)


class TestThermalPopulation:
    def test_ground_value(self):
        assert thermal_population(0, AtomBath(E=0.2, G=0.4)) == pytest.approx(0.5)

    def test_normalization(self):
        for ratio in (0.3, 0.6, 0.9):
            bath = AtomBath(E=0.4 * ratio, G=0.4)
            total = thermal_population(np.arange(201), bath).sum()
            assert abs(total - 1.0) <= 1e-12 + ratio**201

    def test_mean_is_nbar_ss(self):
        bath = AtomBath(E=0.2, G=0.4)
        n = np.arange(400)
        mean = float((n * thermal_population(n, bath)).sum())
        assert_rel(mean, bath.nbar_ss, 1e-12)
