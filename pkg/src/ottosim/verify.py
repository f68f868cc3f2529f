"""Self-contained property checks behind the ``verify`` command.

Each check recomputes a closed-form claim through an independent route
(brute-force propagation, explicit iteration, finite differences, a second
quadrature rule) and reports the measured discrepancy against its bound.
The same physics is asserted by the test suite; this module exists so a
built artifact can re-certify itself from the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, baths, cycle, dynamics, fock, optimize, sta


@dataclass(frozen=True)
class CheckResult:
    """One property check: ``measured`` must stay at or below ``threshold``."""

    name: str
    measured: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.measured <= self.threshold


def _draw_pair_set(rng: np.random.Generator, omega: float = 1.0, ell: int = 2):
    """Random I/CH/CC pair triple sharing temperatures, plus a schedule."""
    while True:
        nbar_h = rng.uniform(1.0, 5.0)
        nbar_c = rng.uniform(0.1, 0.9) * nbar_h
        beta_h = baths.beta_from_nbar(nbar_h, omega)
        beta_c = baths.beta_from_nbar(nbar_c, omega)
        try:
            triple = {
                kind: baths.make_pair(kind, beta_h, beta_c, omega, ell)
                for kind in baths.PAIR_KINDS
            }
        except baths.InfeasibleCoherenceError:
            continue  # cold bath beyond the cooling limit; redraw
        t_h, t_c, t_we, t_wc = rng.uniform(0.1, 20.0, size=4)
        return triple, (float(t_h), float(t_c), float(t_we), float(t_wc))


def _schedule_cfg(pair, times, omega_h=1.0, omega_c=0.5, kappa=1.0) -> cycle.OttoConfig:
    t_h, t_c, t_we, t_wc = times
    return cycle.OttoConfig(
        hot=pair[0], cold=pair[1], omega_h=omega_h, omega_c=omega_c,
        t_h=t_h, t_c=t_c, t_we=t_we, t_wc=t_wc, kappa=kappa,
    )


def _gauss_legendre_cost(omega_i: float, omega_f: float, nodes: int = 16) -> float:
    """Fixed high-order rule for the cost geometry (independent of scipy)."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (x + 1.0)
    from .sta import _ramp  # same integrand, different quadrature

    val, d1, d2 = _ramp(u, omega_i, omega_f)
    return 0.5 * float(np.dot(w, d2 / (4.0 * val**2) - d1**2 / (4.0 * val**3)))


def _rk4_richardson(nbar0: float, t: float, bath, tol: float = 1e-10) -> float:
    """Fixed-step explicit 4th-order integration with step halving."""

    def sweep(steps: int) -> float:
        h = t / steps
        y = nbar0
        for _ in range(steps):
            k1 = dynamics.nbar_rate(y, bath)
            k2 = dynamics.nbar_rate(y + 0.5 * h * k1, bath)
            k3 = dynamics.nbar_rate(y + 0.5 * h * k2, bath)
            k4 = dynamics.nbar_rate(y + h * k3, bath)
            y += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        return y

    steps = max(8, int(math.ceil(10.0 * bath.delta * t)))
    prev = sweep(steps)
    while True:
        steps *= 2
        cur = sweep(steps)
        if abs(cur - prev) < tol or steps > 2**20:
            return cur
        prev = cur


def run_checks(
    seed: int = 20240709,
    draws: int = 100,
    quad_agreement_tol: float = 1e-9,
    fast: bool = False,
) -> list[CheckResult]:
    """Run every property check and return one result row per property."""
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    n_draws = max(10, draws // 4) if fast else draws

    # --- bath algebra -----------------------------------------------------
    err = 0.0
    for beta_r in (0.2, 0.7, 1.5):
        for ell in (2, 3, 4):
            for coh_scale in (0.6, 1.0, 1.6):
                for omega in (0.7, 1.3):
                    coherence = min(1.0, coh_scale / ell)
                    spec = baths.ThermalAtomSpec(beta_r, omega, ell, coherence)
                    try:
                        bath = baths.bath_from_spec(spec)
                    except baths.NonThermalizingError:
                        continue
                    expected = beta_r + math.log(ell * coherence) / omega
                    err = max(err, abs(bath.effective_beta(omega) - expected) / abs(expected))
    results.append(CheckResult("bath_beta_composition", err, 1e-12))

    margin = -math.inf
    for beta_r in (0.0, 0.3, 1.0, 2.5):
        for ell in (2, 3, 4):
            for omega in (0.5, 1.0, 2.0):
                bath = baths.bath_from_spec(baths.ThermalAtomSpec(beta_r, omega, ell, 1.0))
                temp = 1.0 / bath.effective_beta(omega)
                margin = max(margin, temp - omega / math.log(ell))
    results.append(CheckResult("bath_cooling_limit", margin, 1e-15))

    err = 0.0
    for beta_h, beta_c in ((0.405, 1.036), (0.2, 0.8), (0.9, 1.4)):
        ref = baths.make_pair("I", beta_h, beta_c, 1.0)
        for kind in ("CH", "CC"):
            hot, cold = baths.make_pair(kind, beta_h, beta_c, 1.0)
            err = max(
                err,
                abs(hot.nbar_ss - ref[0].nbar_ss) / ref[0].nbar_ss,
                abs(cold.nbar_ss - ref[1].nbar_ss) / ref[1].nbar_ss,
            )
    results.append(CheckResult("pair_nbar_preserved", err, 1e-12))

    base = baths.make_pair("I", 0.405465, 1.036737, 1.0)
    err = 0.0
    for pi, kind in ((0.0, "CH"), (1.0, "CC")):
        got = baths.make_pair_pi(pi, base)
        want = baths.derive_pair(kind, *base)
        for g, w in zip(got, want):
            err = max(err, abs(g.E - w.E), abs(g.G - w.G))
    results.append(CheckResult("pi_endpoints", err, 1e-12))

    # --- mean dynamics ----------------------------------------------------
    err = 0.0
    for _ in range(n_draws):
        e = rng.uniform(0.0, 0.4)
        g = rng.uniform(e + 0.05, min(1.0 - e, e + 0.6))
        bath = baths.AtomBath(E=e, G=g)
        n0 = rng.uniform(0.0, 6.0)
        t1, t2 = rng.uniform(0.0, 10.0, size=2)
        two = dynamics.nbar_evolve(dynamics.nbar_evolve(n0, t1, bath), t2, bath)
        one = dynamics.nbar_evolve(n0, t1 + t2, bath)
        err = max(err, abs(two - one))
    results.append(CheckResult("evolve_semigroup", err, 1e-12))

    err = 0.0
    for _ in range(5 if fast else 12):
        e = rng.uniform(0.05, 0.35)
        g = rng.uniform(e + 0.05, min(1.0 - e, e + 0.5))
        bath = baths.AtomBath(E=e, G=g)
        n0 = rng.uniform(0.0, 5.0)
        t = rng.uniform(0.5, 8.0)
        err = max(err, abs(dynamics.nbar_evolve(n0, t, bath) - _rk4_richardson(n0, t, bath)))
    results.append(CheckResult("evolve_vs_ode", err, 1e-8))

    # --- brute-force photon-space oracle -----------------------------------
    bath = baths.AtomBath(E=0.2, G=0.4, label="oracle")
    horizon = 10.0 if fast else 25.0
    times = np.linspace(0.0, horizon, 26)
    means = fock.propagate_samples(fock.FockDensity.vacuum(120), times, bath)
    closed = dynamics.nbar_evolve(0.0, times, bath)
    results.append(
        CheckResult("fock_mean_equivalence", float(np.max(np.abs(means - closed))), 1e-6)
    )

    stationary = fock.FockDensity.geometric(bath.E / bath.G, 120)
    out = fock.propagate(stationary, 1.0, bath)
    drift = 0.5 * float(np.abs(out.populations - stationary.populations).sum())
    results.append(CheckResult("fock_stationarity_tv", drift, 1e-8))

    dt, n_cut = 0.025, 40
    start = fock.FockDensity.from_nbar(1.5, n_cut)
    reference = fock.propagate(start, dt, bath)
    errs = []
    counts = (10, 100, 1000)
    for n in counts:
        state = start
        params = fock.CollisionParams(lambda_tau=math.sqrt(dt / n), bath=bath)
        for _ in range(n):
            state = fock.collision_map(state, params)
        errs.append(0.5 * float(np.abs(state.populations - reference.populations).sum()))
    slope = float(np.polyfit(np.log(counts), np.log(errs), 1)[0])
    results.append(CheckResult("collision_slope_minus_one", abs(slope + 1.0), 0.15))

    # --- ramp cost laws -----------------------------------------------------
    err = 0.0
    taus = (0.1, 1.0, 10.0, 100.0)
    for tau in taus:
        v1 = sta.sta_cost(sta.FrequencyProtocol(1.0, 0.5, tau), 2.0).value
        v2 = sta.sta_cost(sta.FrequencyProtocol(1.0, 0.5, 2.0 * tau), 2.0).value
        err = max(err, abs(4.0 * v2 - v1) / abs(v1))
    results.append(CheckResult("sta_scaling_quarter", err, 1e-8))

    values = [sta.sta_cost(sta.FrequencyProtocol(1.0, 0.5, tau), 2.0).value for tau in taus]
    worst = max(values[i + 1] - values[i] for i in range(len(values) - 1))
    results.append(CheckResult("sta_monotone_decreasing", worst, 0.0))

    err = 0.0
    for wi, wf in ((1.0, 0.5), (0.5, 1.0), (2.0, 1.0)):
        adaptive = sta.cost_geometry(wi, wf)
        fixed = _gauss_legendre_cost(wi, wf)
        err = max(err, abs(adaptive - fixed) / abs(adaptive))
    results.append(CheckResult("sta_dual_quadrature", err, quad_agreement_tol))

    # --- steady cycle -------------------------------------------------------
    fixed_err = 0.0
    closed_err = 0.0
    first_law = 0.0
    for _ in range(n_draws):
        cfg = analysis.draw_config(rng)
        nsc = cycle.steady_cycle_nbar(cfg)
        mapped = dynamics.nbar_evolve(
            dynamics.nbar_evolve(nsc, cfg.t_h, cfg.hot), cfg.t_c, cfg.cold
        )
        fixed_err = max(fixed_err, abs(mapped - nsc))
        n = n0 = rng.uniform(0.0, 8.0)
        for delta in range(1, 21):
            n = dynamics.nbar_evolve(
                dynamics.nbar_evolve(n, cfg.t_h, cfg.hot), cfg.t_c, cfg.cold
            )
            closed_err = max(
                closed_err, abs(n - cycle.nbar_after_cycles(n0, delta, cfg))
            )
        report = cycle.run_cycle(cfg)
        first_law = max(
            first_law, abs(report.work - (report.heat_hot + report.heat_cold))
        )
    results.append(CheckResult("cycle_fixed_point", fixed_err, 1e-12))
    results.append(CheckResult("cycle_closed_delta_form", closed_err, 1e-12))
    results.append(CheckResult("cycle_first_law", first_law, 0.0))

    # --- constrained derivatives vs finite differences ----------------------
    fd_err = 0.0
    positivity = -math.inf
    zeta_err = 0.0
    for _ in range(n_draws):
        cfg = analysis.draw_config(rng)
        rep = analysis.derivative_report(cfg)
        checks = (
            (rep.alpha_h * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.delta_nbar, cfg, "hot")),
            (rep.alpha_c * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.delta_nbar, cfg, "cold")),
            (rep.gamma_h * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.steady_cycle_nbar, cfg, "hot")),
            (-rep.gamma_c * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.steady_cycle_nbar, cfg, "cold")),
            (rep.xi_h * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.nbar_hot, cfg, "hot")),
            (-rep.xi_c * (cfg.hot.nbar_ss - cfg.cold.nbar_ss),
             analysis.fd_derivative(cycle.nbar_hot, cfg, "cold")),
        )
        for analytic, numeric in checks:
            fd_err = max(fd_err, abs(analytic - numeric) / max(abs(analytic), 1e-300))
        verdict = analysis.power_monotonicity(cfg)
        fd_err = max(
            fd_err,
            abs(verdict.dP_dDelta_h - verdict.dP_dDelta_h_fd)
            / max(abs(verdict.dP_dDelta_h), 1e-12),
        )
        positivity = max(
            positivity,
            -min(rep.alpha_h, rep.alpha_c, rep.gamma_h, rep.gamma_c, rep.xi_h, rep.xi_c),
        )
        zeta_err = max(zeta_err, abs(rep.zeta_h - rep.zeta_c - 1.0))
    results.append(CheckResult("derivatives_vs_fd", fd_err, 1e-6))
    results.append(CheckResult("derivative_positivity", positivity, 0.0))
    results.append(CheckResult("zeta_difference_one", zeta_err, 1e-12))

    # --- bath-pair orderings -------------------------------------------------
    violations = 0
    pointwise = -math.inf
    for _ in range(n_draws):
        triple, times = _draw_pair_set(rng)
        cfg_i = _schedule_cfg(triple["I"], times)
        rep = {k: cycle.run_cycle(_schedule_cfg(triple[k], times)) for k in triple}
        if not rep["CC"].efficiency > rep["I"].efficiency:
            violations += 1
        if not rep["CH"].efficiency < rep["I"].efficiency:
            violations += 1
        if not rep["CC"].power > rep["I"].power:
            violations += 1
        verdict = analysis.power_monotonicity(cfg_i)
        if verdict.applicable and verdict.condition_holds:
            if not rep["CH"].power <= rep["I"].power:
                violations += 1
        pointwise = max(pointwise, rep["I"].power - rep["CC"].power)
    results.append(CheckResult("ordering_violations", float(violations), 0.0))
    results.append(CheckResult("power_cc_above_i", pointwise, 0.0))

    # --- optimizer certificate -----------------------------------------------
    hot, cold = baths.make_pair(
        "CC", baths.beta_from_nbar(2.0, 1.0), baths.beta_from_nbar(0.55, 1.0), 1.0
    )
    spec = optimize.SweepSpec(hot=hot, cold=cold)
    if fast:
        spec = replace_spec(spec, coord_grid=17, max_rounds=4)
    optimum, _ = optimize.max_power_pqr(spec)
    worst = max(
        value - optimum.power
        for entries in optimum.certificate.values()
        for _, value in entries
    )
    results.append(CheckResult("optimum_dominates_neighbors", worst, 1e-12))

    return results


def replace_spec(spec: optimize.SweepSpec, **kwargs) -> optimize.SweepSpec:
    """Dataclass replace that tolerates SweepSpec being non-frozen."""
    return replace(spec, **kwargs)


def format_results(results: list[CheckResult]) -> str:
    lines = []
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.name:<{width}}  measured={r.measured:.3e}  bound={r.threshold:.3e}"
        )
    return "\n".join(lines)
