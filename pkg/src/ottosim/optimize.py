"""Max-power search over the cycle time and the stroke-split fractions.

The power of one engine depends on the total cycle time and on how that
time is split: p (heat vs work), q (hot vs cold heat), r (expansion vs
compression work).  The inner problem

    MaxPower(p, q, r) = max over t_cycle of P(t_cycle, p, q, r)

is solved by a coarse logarithmic grid scan followed by golden-section
refinement of the bracketed peak; the outer problem is cyclic coordinate
ascent over (p, q, r), mirroring how the cross-sections of MaxPower are
read one variable at a time.  Every returned optimum carries a bracketing
certificate: the objective re-evaluated at small perturbations of each
coordinate, none of which may beat the optimum.

All searches are deterministic: same spec, same result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baths import AtomBath, make_pair_pi
from .cycle import nbar_gap, power_curve
from .errors import DomainError, NoProfitableCycleError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: A coordinate move must improve the objective by more than this, so flat
#: directions never drift.
_TIE_EPS = 1e-12


@dataclass
class SweepSpec:
    """Search space and tolerances for the power optimization."""

    hot: AtomBath
    cold: AtomBath
    omega_h: float = 1.0
    omega_c: float = 0.5
    kappa: float = 1.0
    p: float = 0.5
    q: float = 0.5
    r: float = 0.5
    t_range: tuple[float, float] = (1e-2, 1e3)
    t_grid: int = 200
    t_rel_tol: float = 1e-6
    coord_bounds: tuple[float, float] = (0.02, 0.98)
    coord_grid: int = 49
    improve_tol: float = 1e-8
    max_rounds: int = 20
    t_ref: float = 20.0  # reference cycle time for per-cycle work reporting

    def __post_init__(self):
        if not 0 < self.t_range[0] < self.t_range[1]:
            raise DomainError(f"bad t_range {self.t_range}")
        lo, hi = self.coord_bounds
        if not 0.0 < lo < hi < 1.0:
            raise DomainError(f"coord_bounds must be inside (0, 1), got {self.coord_bounds}")
        for name in ("p", "q", "r"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise DomainError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class Optimum:
    """An argmax with the neighbor evaluations that certify it."""

    t_cycle: float
    p: float
    q: float
    r: float
    power: float
    certificate: dict = field(default_factory=dict)


def _golden_max(f, lo: float, hi: float, abs_tol: float) -> tuple[float, float]:
    """Golden-section maximization of a unimodal scalar function."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > abs_tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def _power_at(spec: SweepSpec, t, p: float, q: float, r: float):
    return power_curve(
        spec.hot, spec.cold, spec.omega_h, spec.omega_c, t, p, q, r, spec.kappa
    )


def scan_max_power(
    spec: SweepSpec, p: float | None = None, q: float | None = None, r: float | None = None
) -> tuple[float, float]:
    """Best (t_cycle, power) over the cycle-time range, profitable or not.

    Coarse log grid of ``spec.t_grid`` points, then golden-section
    refinement in log t of the bracketed peak down to a relative width of
    ``spec.t_rel_tol``.
    """
    p = spec.p if p is None else p
    q = spec.q if q is None else q
    r = spec.r if r is None else r
    log_lo, log_hi = math.log(spec.t_range[0]), math.log(spec.t_range[1])
    grid = np.exp(np.linspace(log_lo, log_hi, spec.t_grid))
    values = _power_at(spec, grid, p, q, r)
    i = int(np.argmax(values))
    lo = math.log(grid[max(i - 1, 0)])
    hi = math.log(grid[min(i + 1, grid.size - 1)])

    def f(log_t: float) -> float:
        return float(_power_at(spec, math.exp(log_t), p, q, r))

    log_t, best = _golden_max(f, lo, hi, spec.t_rel_tol)
    if values[i] > best:  # grid point can win when the peak sits on a grid node
        log_t, best = math.log(grid[i]), float(values[i])
    return math.exp(log_t), best


def _certified(spec: SweepSpec, t: float, p: float, q: float, r: float, power: float,
               with_fractions: bool) -> Optimum:
    """Attach neighbor evaluations at +-0.1% (coords clipped to bounds)."""
    cert = {}
    for t_n in (t * (1.0 - 1e-3), t * (1.0 + 1e-3)):
        cert.setdefault("t_cycle", []).append(
            [t_n, float(_power_at(spec, t_n, p, q, r))]
        )
    if with_fractions:
        lo, hi = spec.coord_bounds
        for name, val in (("p", p), ("q", q), ("r", r)):
            for x in (max(lo, val - 1e-3), min(hi, val + 1e-3)):
                kwargs = {"p": p, "q": q, "r": r}
                kwargs[name] = x
                cert.setdefault(name, []).append(
                    [x, scan_max_power(spec, **kwargs)[1]]
                )
    return Optimum(t_cycle=t, p=p, q=q, r=r, power=power, certificate=cert)


def max_power_tcycle(
    spec: SweepSpec, p: float | None = None, q: float | None = None, r: float | None = None
) -> Optimum:
    """Maximize power over the cycle time at a fixed stroke split.

    Raises NoProfitableCycleError when no cycle time in the range yields
    positive power (equal effective temperatures, or costs beyond the work
    everywhere).
    """
    p = spec.p if p is None else p
    q = spec.q if q is None else q
    r = spec.r if r is None else r
    t, best = scan_max_power(spec, p, q, r)
    if best <= 0.0:
        raise NoProfitableCycleError(
            f"max power over t in {spec.t_range} is {best:.3e} <= 0"
        )
    return _certified(spec, t, p, q, r, best, with_fractions=False)


def max_power_pqr(spec: SweepSpec) -> tuple[Optimum, dict]:
    """Cyclic coordinate ascent of MaxPower over (p, q, r).

    Optimizes p, then q, then r (grid scan plus golden refinement each),
    and repeats rounds until a full round improves the objective by less
    than ``spec.improve_tol`` or ``spec.max_rounds`` is hit.  Also returns
    the first-round cross-section curves, one per coordinate, each taken
    with the other two coordinates at their then-current values.

    Raises NoProfitableCycleError if the objective never turns positive.
    """
    lo, hi = spec.coord_bounds
    grid = np.linspace(lo, hi, spec.coord_grid)
    coords = {"p": spec.p, "q": spec.q, "r": spec.r}
    current = scan_max_power(spec, **coords)[1]
    cross_sections: dict[str, np.ndarray] = {}

    for round_idx in range(spec.max_rounds):
        round_start = current
        for name in ("p", "q", "r"):
            def objective(x: float) -> float:
                trial = dict(coords)
                trial[name] = x
                return scan_max_power(spec, **trial)[1]

            values = np.array([objective(x) for x in grid])
            if round_idx == 0:
                cross_sections[name] = np.column_stack([grid, values])
            i = int(np.argmax(values))
            bracket_lo = grid[max(i - 1, 0)]
            bracket_hi = grid[min(i + 1, grid.size - 1)]
            x_ref, v_ref = _golden_max(objective, bracket_lo, bracket_hi, 1e-7)
            if values[i] > v_ref:
                x_ref, v_ref = float(grid[i]), float(values[i])
            if v_ref > current + _TIE_EPS:
                coords[name] = float(x_ref)
                current = float(v_ref)
        if current - round_start < spec.improve_tol:
            break

    if current <= 0.0:
        raise NoProfitableCycleError(
            f"max power stays at {current:.3e} <= 0 over the whole search space"
        )
    t, best = scan_max_power(spec, **coords)
    optimum = _certified(
        spec, t, coords["p"], coords["q"], coords["r"], best, with_fractions=True
    )
    return optimum, cross_sections


def work_per_cycle(
    hot: AtomBath, cold: AtomBath, omega_h: float, omega_c: float,
    t_cycle: float, p: float, q: float, r: float,
) -> float:
    """Per-cycle work extracted on a fixed schedule (no cost subtracted)."""
    t_h = p * q * t_cycle
    t_c = p * (1.0 - q) * t_cycle
    gap = nbar_gap(hot.E, hot.delta, cold.E, cold.delta, t_h, t_c)
    return float((omega_h - omega_c) * gap)


def pi_sweep(
    spec: SweepSpec,
    base_pair: tuple[AtomBath, AtomBath],
    pis=None,
) -> list[dict]:
    """Max power and per-cycle work along the coherence interpolation.

    ``base_pair`` must be the incoherent pair; pi = 0 is the coherent-hot
    construction and pi = 1 the coherent-cold one.  For each pi the row
    carries the bath weights, the (sign-unrestricted) best power with its
    cycle time at the spec's stroke split, and the per-cycle work on the
    reference schedule (t_ref, p, q, r) where the work ordering in pi is
    schedule-independent.
    """
    if pis is None:
        pis = np.linspace(0.0, 1.0, 21)
    rows = []
    for pi in np.asarray(pis, dtype=float):
        hot, cold = make_pair_pi(float(pi), base_pair)
        sub = SweepSpec(
            hot=hot, cold=cold, omega_h=spec.omega_h, omega_c=spec.omega_c,
            kappa=spec.kappa, p=spec.p, q=spec.q, r=spec.r,
            t_range=spec.t_range, t_grid=spec.t_grid, t_rel_tol=spec.t_rel_tol,
        )
        t_best, p_best = scan_max_power(sub)
        rows.append(
            {
                "pi": float(pi),
                "E": hot.E,
                "delta_h": hot.delta,
                "delta_c": cold.delta,
                "max_power": p_best,
                "t_at_max": t_best,
                "work_at_max": work_per_cycle(
                    hot, cold, spec.omega_h, spec.omega_c, t_best, spec.p, spec.q, spec.r
                ),
                "work_ref": work_per_cycle(
                    hot, cold, spec.omega_h, spec.omega_c, spec.t_ref, spec.p, spec.q, spec.r
                ),
            }
        )
    return rows
