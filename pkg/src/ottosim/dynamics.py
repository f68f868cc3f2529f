"""Mean-photon-number dynamics of the oscillator under one bath.

Under a stream of weak collisions the diagonal of the oscillator state obeys
a rate equation whose mean is closed:

    d nbar / dt = E (nbar + 1) - G nbar,

relaxing exponentially at rate Delta = G - E toward E/Delta.  Time is the
dimensionless collision clock.  The helpers below also carry the thermal
bookkeeping (temperature, entropy, number populations) used by the cycle
accounting.
"""

from __future__ import annotations

import numpy as np

from .baths import AtomBath
from .errors import DomainError


def nbar_rate(nbar, bath: AtomBath):
    """Instantaneous drift of the mean photon number, E(nbar+1) - G nbar."""
    return bath.E * (nbar + 1.0) - bath.G * nbar


def nbar_evolve(nbar0, t, bath: AtomBath):
    """Mean photon number after relaxing under ``bath`` for time ``t``.

    Closed form (nbar0 - E/Delta) exp(-Delta t) + E/Delta; accepts scalar or
    array ``t``.
    """
    nss = bath.nbar_ss
    return (nbar0 - nss) * np.exp(-bath.delta * np.asarray(t, dtype=float)) + nss


def temperature_from_nbar(nbar: float, omega: float) -> float:
    """Inverse temperature of a thermal oscillator state with mean ``nbar``."""
    if nbar <= 0:
        raise DomainError(f"nbar must be > 0 for a finite temperature, got {nbar}")
    if omega <= 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    return np.log((nbar + 1.0) / nbar) / omega


def entropy(nbar: float) -> float:
    """Thermal-state entropy (nbar+1) ln(nbar+1) - nbar ln(nbar).

    The nbar = 0 value is the limit 0 (convention 0 ln 0 = 0).
    """
    if nbar < 0:
        raise DomainError(f"nbar must be >= 0, got {nbar}")
    if nbar == 0:
        return 0.0
    return float((nbar + 1.0) * np.log(nbar + 1.0) - nbar * np.log(nbar))


def thermal_population(n, bath: AtomBath):
    """Steady-state probability of photon number ``n``: geometric in E/G."""
    ratio = bath.E / bath.G
    n = np.asarray(n)
    if np.any(n < 0):
        raise DomainError("photon number must be >= 0")
    return (1.0 - ratio) * ratio ** n
