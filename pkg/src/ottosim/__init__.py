"""Finite-time quantum Otto engine driven by coherence-tunable atom baths.

A harmonic oscillator is alternately coupled to two streams of three-level
atoms (the heat baths) and ramped between two frequencies by counterdiabatic
driving.  Ground-space coherence in the atoms shifts both the temperature a
bath imposes and the rate at which it thermalizes the oscillator, which is
what makes the power/efficiency trade-off of this engine tunable.

The package is organized as a small numpy/scipy library:

- ``baths``:    bath construction, effective temperatures, the I/CH/CC and
                pi-interpolated pair families
- ``dynamics``: closed-form photon-number relaxation and thermal bookkeeping
- ``fock``:     brute-force truncated photon-space reference dynamics
- ``sta``:      counterdiabatic frequency ramps and their energy cost
- ``cycle``:    steady-cycle work/heat/efficiency/power accounting
- ``analysis``: closed-form sensitivities and bath-ordering theorems
- ``optimize``: max-power searches over cycle time and stroke splits
- ``verify``:   self-check suite behind the ``verify`` CLI command
- ``cli``:      ``ottosim`` command-line entry point
"""

__version__ = "0.1.0"

from .baths import (
    AtomBath,
    ThermalAtomSpec,
    bath_from_spec,
    beta_from_nbar,
    derive_pair,
    incoherent_pair,
    make_pair,
    make_pair_pi,
    pair_record,
)
from .cycle import (
    CycleReport,
    OttoConfig,
    delta_nbar,
    nbar_after_cycles,
    nbar_hot,
    power_curve,
    run_cycle,
    steady_cycle_nbar,
    transient_trajectory,
)
from .dynamics import entropy, nbar_evolve, nbar_rate, temperature_from_nbar, thermal_population
from .errors import (
    DomainError,
    EngineError,
    InconsistentOrderingError,
    InfeasibleCoherenceError,
    NegativityError,
    NoProfitableCycleError,
    NonThermalizingError,
    ProtocolError,
    QuadratureError,
    TruncationError,
)
from .fock import CollisionParams, FockDensity, collision_map, lindblad_step, propagate
from .optimize import Optimum, SweepSpec, max_power_pqr, max_power_tcycle, pi_sweep
from .sta import FrequencyProtocol, StaCost, cost_geometry, counterdiabatic_coefficient, omega_at, sta_cost

__all__ = [
    "__version__",
    "AtomBath", "ThermalAtomSpec", "bath_from_spec", "beta_from_nbar",
    "derive_pair", "incoherent_pair", "make_pair", "make_pair_pi", "pair_record",
    "CycleReport", "OttoConfig", "delta_nbar", "nbar_after_cycles", "nbar_hot",
    "power_curve", "run_cycle", "steady_cycle_nbar", "transient_trajectory",
    "entropy", "nbar_evolve", "nbar_rate", "temperature_from_nbar", "thermal_population",
    "EngineError", "DomainError", "InconsistentOrderingError", "InfeasibleCoherenceError",
    "NegativityError", "NoProfitableCycleError", "NonThermalizingError", "ProtocolError",
    "QuadratureError", "TruncationError",
    "CollisionParams", "FockDensity", "collision_map", "lindblad_step", "propagate",
    "Optimum", "SweepSpec", "max_power_pqr", "max_power_tcycle", "pi_sweep",
    "FrequencyProtocol", "StaCost", "cost_geometry", "counterdiabatic_coefficient",
    "omega_at", "sta_cost",
]
