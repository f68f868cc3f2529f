import math

import pytest

from ottosim import AtomBath, OttoConfig, beta_from_nbar, make_pair

#: Effective steady photon numbers of the standard experiment preset.
PRESET_NBAR_HOT = 2.0
PRESET_NBAR_COLD = 0.55
PRESET_OMEGA = 1.0
PRESET_OMEGA_H = 1.0
PRESET_OMEGA_C = 0.5


@pytest.fixture(scope="session")
def preset_betas():
    return (
        beta_from_nbar(PRESET_NBAR_HOT, PRESET_OMEGA),
        beta_from_nbar(PRESET_NBAR_COLD, PRESET_OMEGA),
    )


@pytest.fixture(scope="session")
def preset_pairs(preset_betas):
    beta_h, beta_c = preset_betas
    return {
        kind: make_pair(kind, beta_h, beta_c, PRESET_OMEGA)
        for kind in ("I", "CH", "CC")
    }


@pytest.fixture
def quarters_cfg(preset_pairs):
    """Quarter-split schedule at the preset operating point."""

    def build(kind="I", t_cycle=20.0, p=0.5, q=0.5, r=0.5, kappa=1.0):
        hot, cold = preset_pairs[kind]
        return OttoConfig.from_fractions(
            hot, cold, PRESET_OMEGA_H, PRESET_OMEGA_C, t_cycle, p, q, r, kappa
        )

    return build


@pytest.fixture
def simple_baths():
    """Hand-sized baths used across the closed-form examples."""
    return {
        "fast": AtomBath(E=0.2, G=0.4, label="fast"),
        "slow": AtomBath(E=0.2, G=0.3, label="slow"),
        "cold": AtomBath(E=0.11, G=0.31, label="cold"),
    }


def assert_rel(actual, expected, tol, msg=""):
    scale = max(abs(expected), 1e-300)
    assert abs(actual - expected) / scale <= tol, (
        msg or f"{actual} vs {expected} (rel err {abs(actual - expected) / scale:.3e} > {tol})"
    )
