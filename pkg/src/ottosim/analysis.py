"""Closed-form sensitivities of the steady cycle and the bath-ordering rules.

The comparisons between bath pairs all reduce to how the steady cycle
responds when a relaxation rate Delta changes *at fixed effective
temperature*, i.e. varying Delta while co-varying E so the steady photon
number R = E/Delta stays put.  This module exposes those constrained
derivatives in closed form, each validated against a central finite
difference of the corresponding cycle quantity:

- alpha_h/alpha_c: response of the photon swing nbar_h - nbar_c (work),
- gamma_h/gamma_c: response of the cycle-start photon number nbar_sc,
- xi_h/xi_c:       response of the post-hot-stroke photon number nbar_h,
- zeta_h/zeta_c:   cost-to-heat ratios nbar_h/(nbar_h - nbar_c) and
                   nbar_c/(nbar_h - nbar_c), whose common (negative) slope
                   in either Delta drives the efficiency orderings,
- the power slope dP/dDelta_h and the threshold condition
  exp(Delta_c t_c) > (w + I_c)/(w - I_e), w = omega_h - omega_c,
  that decides whether slowing the hot bath can ever help the power.

With abbreviations a = Delta_h t_h, c = Delta_c t_c, R = E/Delta and
S = sinh((a+c)/2):

    alpha_h = t_h (cosh c - 1) / (cosh(a+c) - 1)
    gamma_h = (t_h/2) e^(-c/2) sinh(c/2) / S^2
    xi_h    = (t_h/2) e^(+c/2) sinh(c/2) / S^2      (and h<->c mirrored)
    zeta_h  = 1/2 + (R_h coth(c/2) + R_c coth(a/2)) / (2 (R_h - R_c))
    dzeta/dDelta_h = -(t_h/4) R_c / ((R_h - R_c) sinh^2(a/2))

so that d(nbar_h - nbar_c)/dDelta_h = alpha_h (R_h - R_c),
dnbar_sc/dDelta_h = +gamma_h (R_h - R_c), dnbar_sc/dDelta_c =
-gamma_c (R_h - R_c), and likewise xi for nbar_h.  All of alpha, gamma, xi
are positive, zeta_h - zeta_c = 1 identically, and alpha = xi - gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .baths import AtomBath
from .cycle import OttoConfig, delta_nbar, nbar_hot, power_curve, run_cycle, steady_cycle_nbar
from .errors import DomainError, InconsistentOrderingError
from .sta import cost_geometry

#: Relative step used by the built-in finite-difference cross-checks.
FD_STEP = 1e-6


@dataclass(frozen=True)
class DerivativeReport:
    """All constrained-derivative prefactors of one operating point."""

    alpha_h: float
    alpha_c: float
    gamma_h: float
    gamma_c: float
    xi_h: float
    xi_c: float
    zeta_h: float
    zeta_c: float
    dP_dDelta_h: float


@dataclass(frozen=True)
class OrderingVerdict:
    """Outcome of an efficiency comparison between two same-temperature pairs."""

    changed: str  # which relaxation rate differs: "hot" or "cold"
    delta_base: float
    delta_other: float
    eta_base: float
    eta_other: float
    predicted: str  # "other>base" or "other<base"
    observed: str


@dataclass(frozen=True)
class PowerMonotonicityVerdict:
    """Slope of the power in Delta_h and the closed-form threshold test."""

    applicable: bool  # omega_h - omega_c > I_e, else the threshold is void
    condition_holds: bool
    dP_dDelta_h: float
    dP_dDelta_h_fd: float
    i_e: float
    i_c: float


def _exposures(cfg: OttoConfig) -> tuple[float, float, float, float]:
    a = cfg.hot.delta * cfg.t_h
    c = cfg.cold.delta * cfg.t_c
    return a, c, cfg.hot.nbar_ss, cfg.cold.nbar_ss


def work_derivatives(cfg: OttoConfig) -> tuple[float, float]:
    """d(nbar_h - nbar_c)/dDelta_h and /dDelta_c at fixed temperatures."""
    a, c, r_h, r_c = _exposures(cfg)
    denom = math.cosh(a + c) - 1.0
    alpha_h = cfg.t_h * (math.cosh(c) - 1.0) / denom
    alpha_c = cfg.t_c * (math.cosh(a) - 1.0) / denom
    return alpha_h * (r_h - r_c), alpha_c * (r_h - r_c)


def cost_derivatives(cfg: OttoConfig) -> tuple[float, float, float, float]:
    """Constrained derivatives of (nbar_sc, nbar_h) in (Delta_h, Delta_c).

    Returns (dnsc/dDh, dnsc/dDc, dnh/dDh, dnh/dDc); the signs are
    (+, -, +, -) times the temperature gap R_h - R_c.
    """
    a, c, r_h, r_c = _exposures(cfg)
    s2 = math.sinh(0.5 * (a + c)) ** 2
    gamma_h = 0.5 * cfg.t_h * math.exp(-0.5 * c) * math.sinh(0.5 * c) / s2
    gamma_c = 0.5 * cfg.t_c * math.exp(0.5 * a) * math.sinh(0.5 * a) / s2
    xi_h = 0.5 * cfg.t_h * math.exp(0.5 * c) * math.sinh(0.5 * c) / s2
    xi_c = 0.5 * cfg.t_c * math.exp(-0.5 * a) * math.sinh(0.5 * a) / s2
    gap = r_h - r_c
    return gamma_h * gap, -gamma_c * gap, xi_h * gap, -xi_c * gap


def zeta_pair(cfg: OttoConfig) -> tuple[float, float]:
    """Cost-to-heat ratios (zeta_h, zeta_c); their difference is exactly 1."""
    a, c, r_h, r_c = _exposures(cfg)
    common = 0.5 * (r_h / math.tanh(0.5 * c) + r_c / math.tanh(0.5 * a)) / (r_h - r_c)
    return 0.5 + common, -0.5 + common


def zeta_slopes(cfg: OttoConfig) -> tuple[float, float]:
    """d zeta/dDelta_h and d zeta/dDelta_c (same for zeta_h and zeta_c).

    Both slopes are negative whenever the hot bath is hotter: increasing
    either relaxation rate at fixed temperatures lowers the cost-to-heat
    ratios and therefore raises the efficiency.
    """
    a, c, r_h, r_c = _exposures(cfg)
    gap = r_h - r_c
    d_dh = -0.25 * cfg.t_h * r_c / (gap * math.sinh(0.5 * a) ** 2)
    d_dc = -0.25 * cfg.t_c * r_h / (gap * math.sinh(0.5 * c) ** 2)
    return d_dh, d_dc


def cost_integrals(cfg: OttoConfig) -> tuple[float, float]:
    """Bath-independent cost factors (I_e, I_c) with V = nbar * I."""
    i_e = cost_geometry(cfg.omega_h, cfg.omega_c) * (cfg.kappa / cfg.t_we) ** 2
    i_c = cost_geometry(cfg.omega_c, cfg.omega_h) * (cfg.kappa / cfg.t_wc) ** 2
    return i_e, i_c


def derivative_report(cfg: OttoConfig) -> DerivativeReport:
    """Assemble every closed-form sensitivity at one operating point."""
    a, c, r_h, r_c = _exposures(cfg)
    gap = r_h - r_c
    denom = math.cosh(a + c) - 1.0
    s2 = math.sinh(0.5 * (a + c)) ** 2
    zeta_h, zeta_c = zeta_pair(cfg)
    i_e, i_c = cost_integrals(cfg)
    alpha_h = cfg.t_h * (math.cosh(c) - 1.0) / denom
    gamma_h = 0.5 * cfg.t_h * math.exp(-0.5 * c) * math.sinh(0.5 * c) / s2
    xi_h = 0.5 * cfg.t_h * math.exp(0.5 * c) * math.sinh(0.5 * c) / s2
    dP = (
        ((cfg.omega_h - cfg.omega_c) * alpha_h - i_e * xi_h - i_c * gamma_h)
        * gap
        / cfg.t_cycle
    )
    return DerivativeReport(
        alpha_h=alpha_h,
        alpha_c=cfg.t_c * (math.cosh(a) - 1.0) / denom,
        gamma_h=gamma_h,
        gamma_c=0.5 * cfg.t_c * math.exp(0.5 * a) * math.sinh(0.5 * a) / s2,
        xi_h=xi_h,
        xi_c=0.5 * cfg.t_c * math.exp(-0.5 * a) * math.sinh(0.5 * a) / s2,
        zeta_h=zeta_h,
        zeta_c=zeta_c,
        dP_dDelta_h=dP,
    )


def rescale_delta(bath: AtomBath, new_delta: float) -> AtomBath:
    """Change a bath's relaxation rate without moving its temperature.

    E is co-scaled so E/Delta is untouched; this is the variation all the
    constrained derivatives refer to.
    """
    ratio = bath.nbar_ss
    return AtomBath(E=ratio * new_delta, G=(ratio + 1.0) * new_delta, ell=bath.ell)


def fd_derivative(func, cfg: OttoConfig, which: str, step: float = FD_STEP) -> float:
    """Central finite difference of ``func(cfg)`` in one Delta at fixed R."""
    if which not in ("hot", "cold"):
        raise DomainError("which must be 'hot' or 'cold'")
    bath = cfg.hot if which == "hot" else cfg.cold
    h = step * bath.delta
    plus = rescale_delta(bath, bath.delta + h)
    minus = rescale_delta(bath, bath.delta - h)
    cfg_p = replace(cfg, **{which: plus})
    cfg_m = replace(cfg, **{which: minus})
    return (func(cfg_p) - func(cfg_m)) / (2.0 * h)


def efficiency_ordering(
    pair_base: tuple[AtomBath, AtomBath],
    pair_other: tuple[AtomBath, AtomBath],
    cfg: OttoConfig,
) -> OrderingVerdict:
    """Compare efficiencies of two same-temperature pairs on one schedule.

    The prediction comes from the sign of the zeta slope: the pair with the
    larger (changed) relaxation rate has the smaller cost-to-heat ratio and
    hence the higher efficiency.  The directly computed efficiencies must
    agree with the prediction; a mismatch raises InconsistentOrderingError
    because it can only mean the derivative bookkeeping is broken.
    """
    base_h, base_c = pair_base
    oth_h, oth_c = pair_other
    if not math.isclose(base_h.nbar_ss, oth_h.nbar_ss, rel_tol=1e-9) or not math.isclose(
        base_c.nbar_ss, oth_c.nbar_ss, rel_tol=1e-9
    ):
        raise DomainError("pairs must share their effective temperatures")
    hot_differs = not math.isclose(base_h.delta, oth_h.delta, rel_tol=1e-12)
    cold_differs = not math.isclose(base_c.delta, oth_c.delta, rel_tol=1e-12)
    if hot_differs == cold_differs:
        raise DomainError("exactly one relaxation rate may differ between the pairs")
    if hot_differs:
        changed, d_base, d_other = "hot", base_h.delta, oth_h.delta
    else:
        changed, d_base, d_other = "cold", base_c.delta, oth_c.delta
    predicted = "other>base" if d_other > d_base else "other<base"
    eta_base = run_cycle(cfg.with_pair(base_h, base_c)).efficiency
    eta_other = run_cycle(cfg.with_pair(oth_h, oth_c)).efficiency
    observed = "other>base" if eta_other > eta_base else "other<base"
    if observed != predicted:
        raise InconsistentOrderingError(
            f"zeta-slope prediction {predicted} but efficiencies are "
            f"{eta_other:.6g} vs {eta_base:.6g}"
        )
    return OrderingVerdict(
        changed=changed,
        delta_base=d_base,
        delta_other=d_other,
        eta_base=eta_base,
        eta_other=eta_other,
        predicted=predicted,
        observed=observed,
    )


def power_monotonicity(cfg: OttoConfig) -> PowerMonotonicityVerdict:
    """Evaluate the power slope in Delta_h and its closed-form sign test.

    The slope is positive iff
        exp(Delta_c t_c) > (w + I_c) / (w - I_e),  w = omega_h - omega_c,
    provided w > I_e (otherwise the right side is not positive and the test
    is inapplicable: the slope is then negative outright).  The analytic
    slope is cross-checked against a finite difference of the power.
    """
    i_e, i_c = cost_integrals(cfg)
    w = cfg.omega_h - cfg.omega_c
    applicable = w > i_e
    condition = False
    if applicable:
        condition = math.exp(cfg.cold.delta * cfg.t_c) > (w + i_c) / (w - i_e)
    dP = derivative_report(cfg).dP_dDelta_h
    p, q, r = cfg.fractions

    def power_of(c: OttoConfig) -> float:
        # Durations are held fixed while Delta_h varies, so evaluate the
        # power at this config's own schedule.
        return float(
            power_curve(
                c.hot, c.cold, c.omega_h, c.omega_c, c.t_cycle, p, q, r, c.kappa
            )
        )

    dP_fd = fd_derivative(power_of, cfg, "hot")
    return PowerMonotonicityVerdict(
        applicable=applicable,
        condition_holds=condition,
        dP_dDelta_h=dP,
        dP_dDelta_h_fd=dP_fd,
        i_e=i_e,
        i_c=i_c,
    )


def draw_config(
    rng: np.random.Generator,
    omega_h: float = 1.0,
    omega_c: float = 0.5,
    kappa: float = 1.0,
) -> OttoConfig:
    """One random valid operating point for derivative and ordering checks.

    Relaxation rates are log-uniform on [1e-2, 1], the hot steady photon
    number uniform on [1, 5], the cold one uniform on [0.1, 0.9] of it, and
    all four stroke durations uniform on [0.1, 20].  Draws whose weights
    cannot come from a normalized atomic state are rejected and redrawn.
    """
    while True:
        d_h, d_c = np.exp(rng.uniform(np.log(1e-2), 0.0, size=2))
        r_h = rng.uniform(1.0, 5.0)
        r_c = rng.uniform(0.1, 0.9) * r_h
        if r_h * d_h + (r_h + 1.0) * d_h > 1.0 or r_c * d_c + (r_c + 1.0) * d_c > 1.0:
            continue
        t_h, t_c, t_we, t_wc = rng.uniform(0.1, 20.0, size=4)
        hot = AtomBath(E=r_h * d_h, G=(r_h + 1.0) * d_h, label="draw-hot")
        cold = AtomBath(E=r_c * d_c, G=(r_c + 1.0) * d_c, label="draw-cold")
        return OttoConfig(
            hot=hot,
            cold=cold,
            omega_h=omega_h,
            omega_c=omega_c,
            t_h=float(t_h),
            t_c=float(t_c),
            t_we=float(t_we),
            t_wc=float(t_wc),
            kappa=kappa,
        )


# re-exported cycle quantities used by the checks above
__all__ = [
    "DerivativeReport",
    "OrderingVerdict",
    "PowerMonotonicityVerdict",
    "work_derivatives",
    "cost_derivatives",
    "zeta_pair",
    "zeta_slopes",
    "cost_integrals",
    "derivative_report",
    "rescale_delta",
    "fd_derivative",
    "efficiency_ordering",
    "power_monotonicity",
    "draw_config",
    "delta_nbar",
    "nbar_hot",
    "steady_cycle_nbar",
]
