import math

import numpy as np
import pytest

from ottosim import (
    AtomBath,
    CollisionParams,
    DomainError,
    FockDensity,
    NegativityError,
    TruncationError,
    collision_map,
    lindblad_step,
    nbar_evolve,
    propagate,
)
from ottosim.fock import default_dt, default_n_cut, generator_matrix, propagate_samples


@pytest.fixture
def bath():
    return AtomBath(E=0.2, G=0.4)


def tv_distance(a: FockDensity, b: FockDensity) -> float:
    return 0.5 * float(np.abs(a.populations - b.populations).sum())


class TestFockDensity:
    def test_vacuum(self):
        rho = FockDensity.vacuum(10)
        assert rho.nbar == 0.0 and rho.norm == 1.0 and rho.n_cut == 10

    def test_geometric_mean(self, bath):
        rho = FockDensity.geometric(bath.E / bath.G, 200)
        assert rho.nbar == pytest.approx(bath.nbar_ss, abs=1e-12)

    def test_from_nbar(self):
        rho = FockDensity.from_nbar(1.5, 300)
        assert rho.nbar == pytest.approx(1.5, abs=1e-10)

    def test_rejects_negative(self):
        with pytest.raises(NegativityError):
            FockDensity(np.array([0.5, -0.1, 0.6]))


class TestGenerator:
    def test_columns_conserve_probability_below_cutoff(self, bath):
        L = generator_matrix(bath, 30)
        col_sums = L.sum(axis=0)
        # every column except the top one sums to zero; the top level leaks
        # upward at rate E*(n_cut+1)
        assert np.max(np.abs(col_sums[:-1])) < 1e-14
        assert col_sums[-1] == pytest.approx(-bath.E * 31)

    def test_matches_rate_equation_for_mean(self, bath):
        # d<n>/dt from the generator equals E(nbar+1) - G nbar on a safe state
        rho = FockDensity.from_nbar(1.2, 120)
        n = np.arange(121)
        L = generator_matrix(bath, 120)
        mean_rate = float(n @ (L @ rho.populations))
        assert mean_rate == pytest.approx(bath.E * (1.2 + 1.0) - bath.G * 1.2, abs=1e-10)


class TestLindblad:
    def test_geometric_state_stationary(self, bath):
        rho = FockDensity.geometric(bath.E / bath.G, 120)
        out = propagate(rho, 1.0, bath)
        assert tv_distance(out, rho) < 1e-9

    def test_vacuum_stays_vacuum_without_gain(self):
        bath = AtomBath(E=0.0, G=0.4)
        rho = FockDensity.vacuum(40)
        out = propagate(rho, 5.0, bath)
        assert out.populations[0] == pytest.approx(1.0, abs=1e-12)
        assert out.nbar == pytest.approx(0.0, abs=1e-14)

    def test_mean_matches_closed_form(self, bath):
        times = np.linspace(0.0, 10.0 / bath.delta, 21)
        means = propagate_samples(FockDensity.vacuum(120), times, bath)
        closed = nbar_evolve(0.0, times, bath)
        assert np.max(np.abs(means - closed)) < 1e-6

    def test_single_step_matches_propagate(self, bath):
        rho = FockDensity.from_nbar(0.8, 60)
        dt = default_dt(bath, 60)
        a = lindblad_step(rho, dt, bath)
        b = propagate(rho, dt, bath)
        assert tv_distance(a, b) < 1e-14

    def test_trace_conserved_away_from_cutoff(self, bath):
        rho = FockDensity.from_nbar(1.0, 120)
        out = propagate(rho, 2.0, bath)
        assert abs(out.norm - rho.norm) < 1e-10

    def test_stability_precondition_enforced(self, bath):
        rho = FockDensity.vacuum(120)
        with pytest.raises(DomainError):
            lindblad_step(rho, 1.0, bath)

    def test_truncation_error_reported(self):
        # a hot bath against a tiny cutoff must overflow the top level
        bath = AtomBath(E=0.30, G=0.35)  # nbar_ss = 6
        rho = FockDensity.vacuum(5)
        with pytest.raises(TruncationError):
            propagate(rho, 40.0, bath, max_leak=1e-6)

    def test_default_n_cut_tail_bound(self, bath):
        n_cut = default_n_cut(bath, tail_mass=1e-12)
        ratio = bath.E / bath.G
        base = math.ceil(n_cut / 1.2)
        assert ratio ** (base + 1) < 1e-12


class TestCollisionMap:
    def test_zero_strength_is_identity(self, bath):
        rho = FockDensity.from_nbar(1.0, 40)
        tiny = collision_map(rho, CollisionParams(lambda_tau=1e-9, bath=bath))
        assert tv_distance(tiny, rho) < 1e-15

    def test_single_collision_mean_update(self, bath):
        # one collision changes nbar by (lambda tau)^2 (E(nbar+1) - G nbar)
        # up to the fourth-order terms dropped from the expansion
        rho = FockDensity.from_nbar(1.3, 60)
        lt = 0.03
        out = collision_map(rho, CollisionParams(lambda_tau=lt, bath=bath))
        predicted = lt**2 * (bath.E * (rho.nbar + 1.0) - bath.G * rho.nbar)
        assert out.nbar - rho.nbar == pytest.approx(predicted, abs=1e-12)

    def test_composition_converges_to_lindblad(self, bath):
        dt = 0.025
        start = FockDensity.from_nbar(1.5, 40)
        reference = propagate(start, dt, bath)
        errors = []
        counts = (10, 100, 1000)
        for n in counts:
            state = start
            params = CollisionParams(lambda_tau=math.sqrt(dt / n), bath=bath)
            for _ in range(n):
                state = collision_map(state, params)
            errors.append(tv_distance(state, reference))
        slope = np.polyfit(np.log(counts), np.log(errors), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.15)

    def test_negativity_guard(self, bath):
        # a strong collision on a sharply peaked state drives p negative
        rho = FockDensity(np.array([0.0] * 39 + [1.0, 0.0]))
        with pytest.raises(NegativityError):
            collision_map(rho, CollisionParams(lambda_tau=0.5, bath=bath))
