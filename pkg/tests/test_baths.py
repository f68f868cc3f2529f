import math

import numpy as np
import pytest

from ottosim import (
    AtomBath,
    InfeasibleCoherenceError,
    NonThermalizingError,
    ThermalAtomSpec,
    bath_from_spec,
    beta_from_nbar,
    derive_pair,
    incoherent_pair,
    make_pair,
    make_pair_pi,
    pair_record,
)

from conftest import assert_rel


class TestBathFromSpec:
    def test_worked_example(self):
        # beta_r * omega = ln 2, ell = 2, coherence 1/2:
        # Z = 2 + 1/2, E = 1/5, G = (4/5)(1/2) = 2/5
        bath = bath_from_spec(ThermalAtomSpec(math.log(2.0), 1.0, 2, 0.5))
        assert bath.E == pytest.approx(0.2, rel=1e-15)
        assert bath.G == pytest.approx(0.4, rel=1e-15)
        assert bath.delta == pytest.approx(0.2, rel=1e-14)

    def test_incoherent_preparation_reproduces_population_temperature(self):
        for beta_r in (0.2, 0.9, 3.0):
            for omega in (0.5, 1.0, 2.0):
                bath = bath_from_spec(ThermalAtomSpec(beta_r, omega, 2, 0.5))
                assert_rel(bath.effective_beta(omega), beta_r, 1e-12)

    def test_heating_toward_infinite_temperature(self):
        # As the ground-space weight drops toward exp(-beta_r omega)/ell the
        # relaxation temperature diverges; at or past it the bath is rejected.
        beta_r, omega, ell = 1.0, 1.0, 2
        critical = math.exp(-beta_r * omega) / ell
        bath = bath_from_spec(ThermalAtomSpec(beta_r, omega, ell, critical * 1.0001))
        assert bath.effective_beta(omega) < 2e-4  # essentially infinite temperature
        with pytest.raises(NonThermalizingError):
            bath_from_spec(ThermalAtomSpec(beta_r, omega, ell, critical))
        with pytest.raises(NonThermalizingError):
            bath_from_spec(ThermalAtomSpec(beta_r, omega, ell, critical * 0.9))

    def test_invariant_violations_rejected(self):
        with pytest.raises(NonThermalizingError):
            AtomBath(E=0.3, G=0.3)
        with pytest.raises(InfeasibleCoherenceError):
            AtomBath(E=0.6, G=0.5)


class TestEffectiveBeta:
    def test_direct_value(self):
        bath = AtomBath(E=0.2, G=0.4)
        assert_rel(bath.effective_beta(math.log(2.0)), 1.0, 1e-14)

    def test_maximal_coherence_shift(self):
        # coherence_g = 1 lowers the temperature by exactly ln(ell)/omega
        for ell in (2, 3, 4):
            for beta_r, omega in ((0.4, 1.0), (1.2, 0.7)):
                bath = bath_from_spec(ThermalAtomSpec(beta_r, omega, ell, 1.0))
                assert_rel(bath.effective_beta(omega), beta_r + math.log(ell) / omega, 1e-12)

    def test_definition_inversion(self):
        for x in (0.05, 0.7, 2.3):
            g = 0.5
            bath = AtomBath(E=g * math.exp(-x), G=g)
            assert_rel(bath.effective_beta(1.0), x, 1e-13)

    def test_composition_identity_on_grid(self):
        # effective beta == beta_r + ln(ell * coherence)/omega wherever valid
        for beta_r in (0.1, 0.8, 2.0):
            for ell in (2, 3, 4):
                for coherence in (0.35, 1.0 / ell, 0.8, 1.0):
                    for omega in (0.6, 1.0, 1.7):
                        spec = ThermalAtomSpec(beta_r, omega, ell, coherence)
                        try:
                            bath = bath_from_spec(spec)
                        except NonThermalizingError:
                            continue
                        expected = beta_r + math.log(ell * coherence) / omega
                        assert_rel(bath.effective_beta(omega), expected, 1e-12)

    def test_cooling_limit(self):
        # with maximal coherence the reachable temperature obeys T <= omega/ln(ell)
        for beta_r in (0.0, 0.5, 1.5, 4.0):
            for ell in (2, 3, 4):
                for omega in (0.5, 1.0, 2.0):
                    bath = bath_from_spec(ThermalAtomSpec(beta_r, omega, ell, 1.0))
                    temperature = 1.0 / bath.effective_beta(omega)
                    assert temperature <= omega / math.log(ell) + 1e-15


class TestNbarSS:
    def test_values(self):
        assert AtomBath(E=0.2, G=0.3).nbar_ss == pytest.approx(2.0, rel=1e-14)
        assert AtomBath(E=0.0, G=0.4).nbar_ss == 0.0

    def test_consistent_with_effective_beta(self):
        bath = AtomBath(E=0.2, G=0.4)
        beta_omega = bath.effective_beta(1.0)
        assert_rel(bath.nbar_ss, 1.0 / (math.exp(beta_omega) - 1.0), 1e-13)


class TestMakePair:
    def test_target_nbar_roundtrip(self):
        beta_h = beta_from_nbar(2.0, 1.0)
        beta_c = beta_from_nbar(0.55, 1.0)
        hot, cold = make_pair("I", beta_h, beta_c, 1.0)
        assert_rel(hot.nbar_ss, 2.0, 1e-12)
        assert_rel(cold.nbar_ss, 0.55, 1e-12)

    @pytest.mark.parametrize("kind", ["CH", "CC"])
    def test_effective_temperatures_shared(self, kind, preset_betas):
        beta_h, beta_c = preset_betas
        base = make_pair("I", beta_h, beta_c, 1.0)
        pair = make_pair(kind, beta_h, beta_c, 1.0)
        for member, ref in zip(pair, base):
            assert_rel(member.nbar_ss, ref.nbar_ss, 1e-12)
            assert_rel(member.effective_beta(1.0), ref.effective_beta(1.0), 1e-12)

    def test_delta_orderings(self, preset_betas):
        beta_h, beta_c = preset_betas
        i_pair = make_pair("I", beta_h, beta_c, 1.0)
        ch = make_pair("CH", beta_h, beta_c, 1.0)
        cc = make_pair("CC", beta_h, beta_c, 1.0)
        assert ch[0].delta < i_pair[0].delta
        assert cc[1].delta > i_pair[1].delta

    def test_ch_construction_weights(self, preset_betas):
        beta_h, beta_c = preset_betas
        i_hot, i_cold = make_pair("I", beta_h, beta_c, 1.0)
        ch_hot, ch_cold = make_pair("CH", beta_h, beta_c, 1.0)
        assert ch_hot.E == pytest.approx(i_cold.E, rel=1e-15)
        assert ch_cold.E == pytest.approx(i_cold.E, rel=1e-15)
        assert_rel(ch_hot.delta, i_hot.delta * i_cold.E / i_hot.E, 1e-14)
        assert ch_cold.delta == pytest.approx(i_cold.delta, rel=1e-15)

    def test_cc_construction_weights(self, preset_betas):
        beta_h, beta_c = preset_betas
        i_hot, i_cold = make_pair("I", beta_h, beta_c, 1.0)
        cc_hot, cc_cold = make_pair("CC", beta_h, beta_c, 1.0)
        assert cc_hot.E == pytest.approx(i_hot.E, rel=1e-15)
        assert cc_cold.E == pytest.approx(i_hot.E, rel=1e-15)
        assert_rel(cc_cold.delta, i_cold.delta * i_hot.E / i_cold.E, 1e-14)

    def test_cooling_limit_infeasible(self):
        # a very cold target from hot populations needs coherence beyond 1
        beta_h = 0.1
        beta_c = beta_h + math.log(2.0) + 0.05  # just past the reachable window
        with pytest.raises(InfeasibleCoherenceError):
            make_pair("CC", beta_h, beta_c, 1.0)
        # right inside the window it works
        ok_c = beta_h + math.log(2.0) - 0.05
        make_pair("CC", beta_h, ok_c, 1.0)

    def test_provenance_attached(self, preset_betas):
        beta_h, beta_c = preset_betas
        hot, cold = make_pair("CC", beta_h, beta_c, 1.0)
        assert cold.origin is not None
        rebuilt = bath_from_spec(cold.origin)
        assert rebuilt.isclose(cold, rtol=1e-12)


class TestPiFamily:
    def test_endpoints(self, preset_betas):
        beta_h, beta_c = preset_betas
        base = make_pair("I", beta_h, beta_c, 1.0)
        for pi, kind in ((0.0, "CH"), (1.0, "CC")):
            got = make_pair_pi(pi, base)
            want = make_pair(kind, beta_h, beta_c, 1.0)
            for g, w in zip(got, want):
                assert abs(g.E - w.E) <= 1e-15
                assert abs(g.G - w.G) <= 1e-15

    def test_temperatures_pi_independent(self, preset_betas):
        beta_h, beta_c = preset_betas
        base = make_pair("I", beta_h, beta_c, 1.0)
        for pi in np.linspace(0.0, 1.0, 11):
            hot, cold = make_pair_pi(float(pi), base)
            assert_rel(hot.nbar_ss, base[0].nbar_ss, 1e-12)
            assert_rel(cold.nbar_ss, base[1].nbar_ss, 1e-12)

    def test_continuity(self, preset_betas):
        beta_h, beta_c = preset_betas
        base = make_pair("I", beta_h, beta_c, 1.0)
        pis = np.linspace(0.0, 1.0, 201)
        e_values = np.array([make_pair_pi(float(pi), base)[0].E for pi in pis])
        d_values = np.array([make_pair_pi(float(pi), base)[0].delta for pi in pis])
        assert np.max(np.abs(np.diff(e_values))) < 2.0 * abs(base[0].E - base[1].E) / 200
        assert np.all(np.diff(e_values) > 0)
        assert np.all(np.diff(d_values) > 0)


def test_pair_record_roundtrip(preset_betas):
    beta_h, beta_c = preset_betas
    hot, cold = make_pair("CH", beta_h, beta_c, 1.0)
    rec = pair_record("CH", hot, cold, beta_h, beta_c, 1.0)
    assert set(rec) == {"kind", "beta_h", "beta_c", "omega", "ell", "E_h", "G_h", "E_c", "G_c"}
    again = AtomBath(E=rec["E_h"], G=rec["G_h"], ell=rec["ell"])
    assert again.isclose(hot)


def test_incoherent_pair_requires_ordering():
    from ottosim import DomainError

    with pytest.raises(DomainError):
        incoherent_pair(1.0, 0.5, 1.0)
