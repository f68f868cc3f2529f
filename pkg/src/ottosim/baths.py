"""Atom-stream heat baths.

A bath is a stream of (ell+1)-level atoms, each carrying an excited state
and ``ell`` degenerate ground states.  After tracing out the atoms, only two
scalars survive into the oscillator dynamics: the excited-state weight
E = <e|rho|e> and the ground-capture weight G = <G|rho|G>, where |G> is the
symmetric ground superposition.  E drives photon gain, G drives photon loss,
and their difference Delta = G - E sets both the relaxation rate and the
steady photon number E/Delta.

Coherence between the degenerate ground states tunes G at fixed atomic
populations, which shifts the temperature the oscillator relaxes to.  The
pair constructors below exploit this to build hot/cold bath pairs that share
their steady photon numbers (effective temperatures) while differing in
relaxation rate.

Natural units throughout: the quantum of action is 1, so ``beta * omega`` is
dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, InfeasibleCoherenceError, NonThermalizingError

#: Relative tolerance used when comparing baths on (E, Delta).
BATH_RTOL = 1e-9

PAIR_KINDS = ("I", "CH", "CC")


@dataclass(frozen=True)
class ThermalAtomSpec:
    """Preparation recipe for one atom species.

    Populations are thermal at inverse temperature ``beta_r`` for an atom
    with gap ``omega`` and ``ell`` degenerate ground states; ``coherence_g``
    is the weight <G|rho_g|G> of the symmetric state within the ground
    subspace.  ``coherence_g = 1/ell`` is the fully incoherent preparation.
    """

    beta_r: float
    omega: float
    ell: int = 2
    coherence_g: float | None = None

    def __post_init__(self):
        if self.coherence_g is None:
            object.__setattr__(self, "coherence_g", 1.0 / self.ell)
        if self.beta_r < 0:
            raise DomainError(f"beta_r must be >= 0, got {self.beta_r}")
        if self.omega <= 0:
            raise DomainError(f"omega must be > 0, got {self.omega}")
        if self.ell < 1:
            raise DomainError(f"ell must be >= 1, got {self.ell}")
        if not 0.0 <= self.coherence_g <= 1.0:
            raise InfeasibleCoherenceError(
                f"coherence_g must lie in [0, 1], got {self.coherence_g}"
            )

    @property
    def excited_weight(self) -> float:
        """Thermal excited-state population p_e = exp(-beta_r omega) / Z."""
        x = math.exp(-self.beta_r * self.omega)
        return x / (self.ell + x)


@dataclass(frozen=True)
class AtomBath:
    """One emulated bath, reduced to its two transition weights.

    ``origin`` keeps the preparation recipe when the bath was built from one
    (or reverse-engineered from E, G); it is bookkeeping only and never
    enters the dynamics.
    """

    E: float
    G: float
    ell: int = 2
    label: str = ""
    origin: ThermalAtomSpec | None = None

    def __post_init__(self):
        if not 0.0 <= self.E <= 1.0:
            raise DomainError(f"E must lie in [0, 1], got {self.E}")
        if not 0.0 <= self.G <= 1.0:
            raise DomainError(f"G must lie in [0, 1], got {self.G}")
        if self.E + self.G > 1.0 + 1e-15:
            raise InfeasibleCoherenceError(
                f"E + G = {self.E + self.G} exceeds 1; no atomic state realizes these weights"
            )
        if self.G <= self.E:
            raise NonThermalizingError(
                f"G = {self.G} <= E = {self.E}: photon number grows without bound"
            )

    @property
    def delta(self) -> float:
        """Relaxation rate Delta = G - E (dimensionless collision clock)."""
        return self.G - self.E

    @property
    def nbar_ss(self) -> float:
        """Steady-state mean photon number E / Delta."""
        return self.E / self.delta

    def effective_beta(self, omega: float) -> float:
        """Inverse temperature the oscillator relaxes to, ln(G/E) / omega."""
        if omega <= 0:
            raise DomainError(f"omega must be > 0, got {omega}")
        if self.E == 0.0:
            return math.inf
        return math.log(self.G / self.E) / omega

    def isclose(self, other: "AtomBath", rtol: float = BATH_RTOL) -> bool:
        """Compare two baths on (E, Delta) with relative tolerance."""
        return math.isclose(self.E, other.E, rel_tol=rtol, abs_tol=1e-300) and math.isclose(
            self.delta, other.delta, rel_tol=rtol, abs_tol=1e-300
        )


def bath_from_spec(spec: ThermalAtomSpec, label: str = "") -> AtomBath:
    """Build the bath realized by a stream of atoms prepared per ``spec``.

    E equals the thermal excited population p_e; G = (1 - p_e) * coherence_g.
    Raises NonThermalizingError when the coherence is tuned so far toward
    heating that G <= E.
    """
    p_e = spec.excited_weight
    g = (1.0 - p_e) * spec.coherence_g
    return AtomBath(E=p_e, G=g, ell=spec.ell, label=label, origin=spec)


def spec_from_weights(E: float, G: float, omega: float, ell: int = 2) -> ThermalAtomSpec:
    """Reverse-engineer a preparation recipe that realizes weights (E, G).

    Populations fix p_e = E, hence beta_r; the ground-space weight must then
    be G / (1 - E).  Raises InfeasibleCoherenceError when that exceeds 1.
    """
    if not 0.0 <= E < 1.0:
        raise DomainError(f"E must lie in [0, 1), got {E}")
    coherence = G / (1.0 - E)
    if coherence > 1.0 + 1e-15:
        raise InfeasibleCoherenceError(
            f"weights (E={E}, G={G}) need ground-space weight {coherence} > 1"
        )
    if E == 0.0:
        beta_r = math.inf
    else:
        beta_r = -math.log(ell * E / (1.0 - E)) / omega
        if beta_r < 0:
            # Hotter than infinite temperature is not a thermal population;
            # record the recipe at beta_r = 0 with the same weights instead.
            raise DomainError(
                f"E = {E} exceeds the infinite-temperature population 1/(ell+1)"
            )
    return ThermalAtomSpec(beta_r=beta_r, omega=omega, ell=ell, coherence_g=min(coherence, 1.0))


def incoherent_pair(
    beta_h: float, beta_c: float, omega: float, ell: int = 2
) -> tuple[AtomBath, AtomBath]:
    """Fully incoherent hot/cold pair at inverse temperatures beta_h < beta_c."""
    if not 0.0 <= beta_h < beta_c:
        raise DomainError(
            f"need beta_c > beta_h >= 0, got beta_h={beta_h}, beta_c={beta_c}"
        )
    hot = bath_from_spec(ThermalAtomSpec(beta_h, omega, ell), label="I-hot")
    cold = bath_from_spec(ThermalAtomSpec(beta_c, omega, ell), label="I-cold")
    return hot, cold


def derive_pair(
    kind: str, hot: AtomBath, cold: AtomBath, omega: float | None = None
) -> tuple[AtomBath, AtomBath]:
    """Transform a base pair into its coherent counterpart of the given kind.

    "I" returns the pair re-labelled.  "CH" rebuilds the hot bath from cold
    populations plus heating coherence: both E equal the cold E, and the hot
    Delta is rescaled by E_c/E_h so E/Delta (the effective temperature) is
    unchanged.  "CC" is the mirror image: both E equal the hot E and the
    cold Delta is rescaled by E_h/E_c.  Every kind preserves both steady
    photon numbers.

    ``omega`` is only used to attach preparation recipes to the new baths.
    """
    if kind not in PAIR_KINDS:
        raise DomainError(f"kind must be one of {PAIR_KINDS}, got {kind!r}")
    ell = hot.ell
    if kind == "I":
        return (replace(hot, label="I-hot"), replace(cold, label="I-cold"))
    if kind == "CH":
        e = cold.E
        new_hot = _bath_from_e_delta(e, hot.delta * cold.E / hot.E, ell, "CH-hot", omega)
        new_cold = replace(cold, label="CH-cold")
        return new_hot, new_cold
    e = hot.E
    new_hot = replace(hot, label="CC-hot")
    new_cold = _bath_from_e_delta(e, cold.delta * hot.E / cold.E, ell, "CC-cold", omega)
    return new_hot, new_cold


def _bath_from_e_delta(
    e: float, delta: float, ell: int, label: str, omega: float | None
) -> AtomBath:
    g = e + delta
    origin = None
    if omega is not None:
        origin = spec_from_weights(e, g, omega, ell)
    return AtomBath(E=e, G=g, ell=ell, label=label, origin=origin)


def make_pair(
    kind: str, beta_h: float, beta_c: float, omega: float, ell: int = 2
) -> tuple[AtomBath, AtomBath]:
    """Build one of the three standard bath pairs at the given temperatures.

    All three kinds share their effective temperatures with the incoherent
    pair at (beta_h, beta_c); they differ in which member is synthesized via
    ground-space coherence and hence in relaxation rates:

    - "I":  both members incoherent.
    - "CH": hot member made from cold populations (Delta_h shrinks).
    - "CC": cold member made from hot populations (Delta_c grows).

    Raises InfeasibleCoherenceError when the requested member would need a
    ground-space weight above 1 (the cooling limit), and
    NonThermalizingError if any member ends with Delta <= 0.
    """
    hot, cold = incoherent_pair(beta_h, beta_c, omega, ell)
    return derive_pair(kind, hot, cold, omega=omega)


def make_pair_pi(
    pi: float, base: tuple[AtomBath, AtomBath], omega: float | None = None
) -> tuple[AtomBath, AtomBath]:
    """Interpolate between the CH (pi=0) and CC (pi=1) pairs.

    Both members share E = pi*E_h + (1-pi)*E_c of the base incoherent pair,
    and each Delta is rescaled so that E/Delta stays at its base value.
    Effective temperatures are therefore pi-independent, while both
    relaxation rates increase monotonically with pi.
    """
    if not 0.0 <= pi <= 1.0:
        raise DomainError(f"pi must lie in [0, 1], got {pi}")
    hot, cold = base
    e = pi * hot.E + (1.0 - pi) * cold.E
    new_hot = _bath_from_e_delta(
        e, e * hot.delta / hot.E, hot.ell, f"pi={pi:g}-hot", omega
    )
    new_cold = _bath_from_e_delta(
        e, e * cold.delta / cold.E, cold.ell, f"pi={pi:g}-cold", omega
    )
    return new_hot, new_cold


def beta_from_nbar(nbar: float, omega: float) -> float:
    """Inverse temperature whose steady photon number is ``nbar``."""
    if nbar <= 0:
        raise DomainError(f"nbar must be > 0, got {nbar}")
    return math.log((nbar + 1.0) / nbar) / omega


def pair_record(
    kind: str,
    hot: AtomBath,
    cold: AtomBath,
    beta_h: float,
    beta_c: float,
    omega: float,
) -> dict:
    """Flat serialization of a bath pair for run records."""
    return {
        "kind": kind,
        "beta_h": beta_h,
        "beta_c": beta_c,
        "omega": omega,
        "ell": hot.ell,
        "E_h": hot.E,
        "G_h": hot.G,
        "E_c": cold.E,
        "G_c": cold.G,
    }
