"""Photon-number-resolved reference dynamics in a truncated Fock space.

Everything downstream runs on the closed-form mean dynamics; this module
keeps the full (diagonal) master equation alive so those closed forms can be
cross-checked against a brute-force propagation.  Both the continuous
generator and the per-collision map send number-basis-diagonal states to
diagonal states, and every initial state used anywhere in this project is
diagonal, so the state is stored as a probability vector over photon numbers
0..n_cut rather than a density matrix.

Two generators are provided:

- ``lindblad_step`` / ``propagate``: the rate equation
  dp_n/dt = E [n p_{n-1} - (n+1) p_n] + G [(n+1) p_{n+1} - n p_n],
  integrated with a classical explicit 4th-order scheme.
- ``collision_map``: one second-order collision,
  p -> p + (lambda tau)^2 L p, whose composition converges to the
  continuous evolution as the collisions weaken.

Truncation leaks probability out of the top level at rate E (n_cut+1)
p_{n_cut}; the leak is monitored and bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .baths import AtomBath
from .errors import DomainError, NegativityError, TruncationError

#: Populations may dip this far below zero before we call it an error.
_NEG_TOL = 1e-12


@dataclass(frozen=True)
class FockDensity:
    """Diagonal of the oscillator state over photon numbers 0..n_cut."""

    populations: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.populations, dtype=float)
        object.__setattr__(self, "populations", p)
        if p.ndim != 1 or p.size < 2:
            raise DomainError("populations must be a 1-D vector over 0..n_cut")
        if np.any(p < -_NEG_TOL):
            raise NegativityError(f"population below {-_NEG_TOL}: min = {p.min()}")

    @property
    def n_cut(self) -> int:
        return self.populations.size - 1

    @property
    def norm(self) -> float:
        return float(self.populations.sum())

    @property
    def nbar(self) -> float:
        n = np.arange(self.populations.size)
        return float(np.dot(n, self.populations))

    @classmethod
    def vacuum(cls, n_cut: int) -> "FockDensity":
        p = np.zeros(n_cut + 1)
        p[0] = 1.0
        return cls(p)

    @classmethod
    def geometric(cls, ratio: float, n_cut: int) -> "FockDensity":
        """Geometric distribution (1 - ratio) ratio^n truncated at n_cut.

        With ratio = E/G this is the bath's stationary state; the norm falls
        short of 1 by the (untouched) tail mass ratio^(n_cut+1).
        """
        if not 0.0 <= ratio < 1.0:
            raise DomainError(f"ratio must lie in [0, 1), got {ratio}")
        n = np.arange(n_cut + 1)
        p = (1.0 - ratio) * ratio ** n
        return cls(p)

    @classmethod
    def from_nbar(cls, nbar: float, n_cut: int) -> "FockDensity":
        """Thermal diagonal state with the given mean photon number."""
        if nbar < 0:
            raise DomainError(f"nbar must be >= 0, got {nbar}")
        if nbar == 0:
            return cls.vacuum(n_cut)
        return cls.geometric(nbar / (nbar + 1.0), n_cut)


@dataclass(frozen=True)
class CollisionParams:
    """Strength of one collision: the dimensionless product lambda*tau.

    The second-order expansion behind ``collision_map`` assumes
    lambda_tau << 1; values up to ~0.05 are comfortably inside that regime.
    """

    lambda_tau: float
    bath: AtomBath

    def __post_init__(self):
        if not 0.0 < self.lambda_tau < 1.0:
            raise DomainError(f"lambda_tau must lie in (0, 1), got {self.lambda_tau}")


def generator_matrix(bath: AtomBath, n_cut: int) -> np.ndarray:
    """Dense matrix of the diagonal-sector master-equation generator."""
    n = np.arange(n_cut + 1)
    L = np.zeros((n_cut + 1, n_cut + 1))
    L[n, n] = -bath.E * (n + 1) - bath.G * n
    L[n[1:], n[1:] - 1] = bath.E * n[1:]
    L[n[:-1], n[:-1] + 1] = bath.G * n[1:]
    return L


def default_n_cut(bath: AtomBath, tail_mass: float = 1e-12, headroom: float = 1.2) -> int:
    """Smallest cutoff whose stationary tail mass is below ``tail_mass``, padded.

    The stationary tail beyond N has mass (E/G)^(N+1); the result is scaled
    by ``headroom`` to leave room for transients hotter than the steady state.
    """
    ratio = bath.E / bath.G
    if ratio == 0.0:
        base = 1
    else:
        base = max(1, math.ceil(math.log(tail_mass) / math.log(ratio) - 1))
    return math.ceil(headroom * base)


def default_dt(bath: AtomBath, n_cut: int) -> float:
    """Conservative fixed step for the explicit integrator."""
    return 0.01 / ((bath.E + bath.G) * n_cut)


def _check_leak(p: np.ndarray, max_leak: float):
    deficit = 1.0 - p.sum()
    if deficit > max_leak:
        raise TruncationError(
            f"trace deficit {deficit:.3e} exceeds allowed leak {max_leak:.3e};"
            " raise n_cut"
        )


def lindblad_step(
    rho: FockDensity, dt: float, bath: AtomBath, max_leak: float = 1e-6
) -> FockDensity:
    """One explicit 4th-order step of the diagonal master equation.

    The step must satisfy dt * (E + G) * n_cut < 0.5; larger steps are
    rejected rather than integrated unstably.
    """
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    if dt * (bath.E + bath.G) * rho.n_cut >= 0.5:
        raise DomainError(
            f"dt = {dt} too large for n_cut = {rho.n_cut}: "
            "need dt * (E + G) * n_cut < 0.5"
        )
    L = generator_matrix(bath, rho.n_cut)
    p = rho.populations
    k1 = L @ p
    k2 = L @ (p + 0.5 * dt * k1)
    k3 = L @ (p + 0.5 * dt * k2)
    k4 = L @ (p + dt * k3)
    out = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_leak(out, max_leak)
    return FockDensity(out)


def propagate(
    rho: FockDensity,
    t: float,
    bath: AtomBath,
    dt: float | None = None,
    max_leak: float = 1e-6,
) -> FockDensity:
    """Propagate the diagonal master equation for time ``t``.

    Runs the same explicit 4th-order update as ``lindblad_step`` with a fixed
    substep of at most ``dt`` (default ``default_dt``).  The generator is
    constant, so the per-step update p -> (I + hL + (hL)^2/2 + (hL)^3/6 +
    (hL)^4/24) p is precomputed once and applied repeatedly; this is
    arithmetically the 4th-order scheme, just without rebuilding the stage
    vectors every step.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return rho
    h_target = default_dt(bath, rho.n_cut) if dt is None else dt
    steps = max(1, math.ceil(t / h_target))
    h = t / steps
    if h * (bath.E + bath.G) * rho.n_cut >= 0.5:
        raise DomainError("requested dt violates the stability bound")
    hL = h * generator_matrix(bath, rho.n_cut)
    A = np.eye(rho.n_cut + 1) + hL + hL @ hL / 2.0 + hL @ hL @ hL / 6.0 + hL @ hL @ hL @ hL / 24.0
    p = rho.populations.copy()
    for _ in range(steps):
        p = A @ p
    _check_leak(p, max_leak)
    return FockDensity(p)


def propagate_samples(
    rho: FockDensity,
    times,
    bath: AtomBath,
    dt: float | None = None,
    max_leak: float = 1e-6,
) -> np.ndarray:
    """Mean photon number at each requested time (sorted, starting >= 0)."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise DomainError("times must be sorted and non-negative")
    out = np.empty(times.size)
    current = rho
    t_now = 0.0
    for i, t in enumerate(times):
        if t > t_now:
            current = propagate(current, t - t_now, bath, dt=dt, max_leak=max_leak)
            t_now = t
        out[i] = current.nbar
    return out


def collision_map(rho: FockDensity, params: CollisionParams) -> FockDensity:
    """Apply one weak collision to second order in lambda_tau.

    The diagonal update is p -> p + (lambda tau)^2 L p.  Trace is preserved
    exactly apart from truncation leakage at the top level.  Populations
    driven below -1e-12 signal a collision too strong for the second-order
    expansion and raise NegativityError.
    """
    step = params.lambda_tau**2
    L = generator_matrix(params.bath, rho.n_cut)
    out = rho.populations + step * (L @ rho.populations)
    if np.any(out < -_NEG_TOL):
        raise NegativityError(
            f"collision with lambda_tau = {params.lambda_tau} drove a population "
            f"to {out.min():.3e}; reduce the collision strength"
        )
    return FockDensity(out)
