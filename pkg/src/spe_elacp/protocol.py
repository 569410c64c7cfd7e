"""Linear amplification and concentration of single-photon entanglement.

Alice and Bob share ``eta |Psi><Psi| + (1 - eta) |vac><vac|`` with
``|Psi> = alpha |1,0> + beta |0,1>`` on modes (a1, b1).  Each party splits a
local single photon on a variable beam splitter (transmissivities t1, t2),
interferes one output with their half of the shared state on a 50:50 beam
splitter and keeps the run only when exactly one photon reaches their
detector pair.  The undetected ports (d2, c2) carry the heralded state.

Closed-form quantities live next to the circuit simulation so the two can be
checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import optics
from .detection import postselect
from .fock import (
    MixedState,
    PureState,
    basis_state,
    ensemble,
    inner_product,
    map_branches,
    project_photon_number,
    relabel,
    superposition,
    tensor_product,
)

INPUT_MODES = ("a1", "b1")
OUTPUT_MODES = ("d2", "c2")

# Alice's detectors D1, D2 sit behind her 50:50 splitter, Bob's D3, D4 behind his.
DETECTORS = {"D1": "f1", "D2": "f2", "D3": "e1", "D4": "e2"}

# Detector pairs whose heralded state carries a relative minus sign.
FLIP_PATTERNS = frozenset({("D2", "D3"), ("D1", "D4")})


def _check_unit(name: str, value: float, *, open_interval: bool = False) -> None:
    if not isinstance(value, (int, float)) or math.isnan(value):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    if open_interval:
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name}={value} must lie in the open interval (0, 1)")
    elif not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value} must lie in [0, 1]")


@dataclass(frozen=True)
class ProtocolParams:
    eta: float
    alpha2: float
    t1: float
    t2: float

    def __post_init__(self):
        for name in ("eta", "alpha2", "t1", "t2"):
            _check_unit(name, getattr(self, name))

    @property
    def beta2(self) -> float:
        return 1.0 - self.alpha2

    @classmethod
    def on_concentration_curve(cls, eta: float, alpha2: float, t1: float) -> ProtocolParams:
        return cls(eta, alpha2, t1, concentration_t2(alpha2, t1))


@dataclass(frozen=True)
class ProtocolOutcome:
    params: ProtocolParams
    success_probability: float
    eta_prime: float
    fidelity: float
    heralded_state: MixedState
    per_pattern: dict[str, float] = field(default_factory=dict)

    @property
    def gain(self) -> float:
        if self.params.eta == 0:
            raise ValueError("gain is undefined for eta=0")
        return self.eta_prime / self.params.eta

    @property
    def mixture_fidelity(self) -> float:
        """Fidelity of the whole heralded mixture, vacuum branch included."""
        return fidelity_to_maximal(self.heralded_state)


def maximally_entangled(modes=INPUT_MODES) -> PureState:
    s = 1.0 / math.sqrt(2.0)
    return superposition(modes, {(1, 0): s, (0, 1): s})


def less_entangled(alpha2: float, modes=INPUT_MODES) -> PureState:
    _check_unit("alpha2", alpha2)
    return superposition(modes, {(1, 0): math.sqrt(alpha2), (0, 1): math.sqrt(1.0 - alpha2)})


def build_input_state(eta: float, alpha2: float) -> MixedState:
    """``eta |Psi><Psi| + (1 - eta) |vac><vac|`` on (a1, b1)."""
    _check_unit("eta", eta)
    psi = less_entangled(alpha2)
    vac = basis_state(INPUT_MODES, (0, 0))
    return ensemble(INPUT_MODES, [(eta, psi), (1.0 - eta, vac)])


def build_input_via_lossy_channels(alpha2: float, eta: float) -> MixedState:
    """Same mixture, prepared physically.

    A single photon on a beam splitter of transmissivity ``alpha2`` gives
    ``|Psi>``; identical loss channels of transmissivity ``eta`` on both arms
    then degrade it.
    """
    _check_unit("alpha2", alpha2)
    _check_unit("eta", eta)
    photon = basis_state(INPUT_MODES, (1, 0))
    psi = optics.apply_beam_splitter(photon, optics.BeamSplitterSetting(*INPUT_MODES, alpha2))
    m = MixedState.pure(psi)
    for mode in INPUT_MODES:
        m = optics.loss_channel(m, mode, eta)
    return m


def concentration_t2(alpha2: float, t1: float) -> float:
    """t2 that balances the heralded amplitudes for a given t1.

    Solves ``alpha2 * t2 * (1 - t1) = beta2 * t1 * (1 - t2)``.
    """
    _check_unit("alpha2", alpha2, open_interval=True)
    _check_unit("t1", t1)
    if t1 == 1.0:
        raise ValueError("t1=1 leaves no heralded single-photon branch to balance")
    beta2 = 1.0 - alpha2
    return beta2 * t1 / (alpha2 * (1.0 - t1) + beta2 * t1)


def _single_photon_weight(p: ProtocolParams) -> float:
    # alpha2 t2 (1 - t1) + beta2 t1 (1 - t2), written as in the closed form
    return p.alpha2 * p.t2 + p.beta2 * p.t1 - p.t1 * p.t2


def analytic_success_probability(p: ProtocolParams) -> float:
    return p.eta * (p.alpha2 * p.t2 + p.beta2 * p.t1) + p.t1 * p.t2 - 2.0 * p.eta * p.t1 * p.t2


def analytic_eta_prime(p: ProtocolParams) -> float:
    prob = analytic_success_probability(p)
    if prob <= 0.0:
        raise ValueError(f"success probability is zero at {p}; eta' undefined")
    return p.eta * _single_photon_weight(p) / prob


def analytic_g(p: ProtocolParams) -> float:
    if p.eta == 0.0:
        raise ValueError("gain g = eta'/eta is undefined for eta=0")
    prob = analytic_success_probability(p)
    if prob <= 0.0:
        raise ValueError(f"success probability is zero at {p}; g undefined")
    return _single_photon_weight(p) / prob


def g_limit(eta: float) -> float:
    """Gain as t1, t2 -> 0 along the concentration curve."""
    _check_unit("eta", eta)
    if eta == 0.0:
        raise ValueError("g limit 1/eta is undefined for eta=0")
    return 1.0 / eta


def amplification_boundary(alpha2: float) -> tuple[float, float]:
    """(t1*, t2*) where g crosses 1 on the concentration curve, for any eta.

    Combining ``alpha2 t2 + beta2 t1 = 2 t1 t2`` with the concentration
    condition gives ``t1* = 2 alpha2 / (1 + 2 alpha2)``.
    """
    _check_unit("alpha2", alpha2, open_interval=True)
    t1 = 2.0 * alpha2 / (1.0 + 2.0 * alpha2)
    return t1, concentration_t2(alpha2, t1)


def fidelity_to_maximal(m: MixedState) -> float:
    """``sum_i w_i |<Phi|psi_i>|^2`` against ``(|1,0> + |0,1>)/sqrt(2)``."""
    if len(m.layout) != 2:
        raise ValueError(f"fidelity needs a two-mode state, got modes {m.modes}")
    phi = maximally_entangled(m.modes)
    return math.fsum(w * abs(inner_product(phi, s)) ** 2 for w, s in m.branches)


def _circuit(t1: float, t2: float):
    """Unitary part of the circuit, acting on a (a1, b1) ket."""
    ancillas = tensor_product(basis_state(("d1", "d2"), (1, 0)), basis_state(("c1", "c2"), (1, 0)))
    vbs1 = optics.BeamSplitterSetting("d1", "d2", t1)
    vbs2 = optics.BeamSplitterSetting("c1", "c2", t2)
    # a1 -> (f1 + f2)/sqrt2, d1 -> (f1 - f2)/sqrt2; same for (b1, c1) -> (e1, e2)
    bs_alice = optics.BeamSplitterSetting("a1", "d1", 0.5)
    bs_bob = optics.BeamSplitterSetting("b1", "c1", 0.5)

    def evolve(s: PureState) -> PureState:
        s = tensor_product(s, ancillas)
        s = optics.apply_beam_splitter(s, vbs1)
        s = optics.apply_beam_splitter(s, vbs2)
        s = optics.apply_beam_splitter(s, bs_alice)
        s = optics.apply_beam_splitter(s, bs_bob)
        return relabel(s, {"a1": "f1", "d1": "f2", "b1": "e1", "c1": "e2"})

    return evolve


def heralding_patterns():
    """The four one-click-per-party patterns as (label pair, count map)."""
    for alice in ("D1", "D2"):
        for bob in ("D3", "D4"):
            counts = {mode: 0 for mode in DETECTORS.values()}
            counts[DETECTORS[alice]] = 1
            counts[DETECTORS[bob]] = 1
            yield (alice, bob), counts


def detector_state(p: ProtocolParams) -> MixedState:
    """Full state just before the detectors; layout f1, e1, f2, d2, e2, c2 in circuit order."""
    return map_branches(build_input_state(p.eta, p.alpha2), _circuit(p.t1, p.t2))


def run_protocol(p: ProtocolParams, feed_forward: bool = True) -> ProtocolOutcome:
    """Simulate the heralded circuit and summarise the accepted output."""
    _check_unit("t1", p.t1, open_interval=True)
    _check_unit("t2", p.t2, open_interval=True)
    before = detector_state(p)

    per_pattern: dict[str, float] = {}
    accepted = []
    for pair, counts in heralding_patterns():
        prob, cond = postselect(before, counts)
        per_pattern["".join(pair)] = prob
        if prob == 0.0:
            continue
        if feed_forward and pair in FLIP_PATTERNS:
            cond = map_branches(cond, lambda s: optics.phase_flip(s, "c2"))
        accepted.extend((prob * w, s) for w, s in cond.branches)

    total = math.fsum(per_pattern.values())
    if total <= 0.0:
        raise ValueError(f"no heralding event is possible at {p}")
    heralded = ensemble(OUTPUT_MODES, accepted).merged()

    eta_prime = math.fsum(w * project_photon_number(s, 1).norm() ** 2 for w, s in heralded.branches)
    phi = maximally_entangled(OUTPUT_MODES)
    if eta_prime > 0.0:
        overlap = math.fsum(w * abs(inner_product(phi, s)) ** 2 for w, s in heralded.branches)
        fidelity = overlap / eta_prime
    else:
        fidelity = 0.0
    return ProtocolOutcome(
        params=p,
        success_probability=total,
        eta_prime=eta_prime,
        fidelity=min(fidelity, 1.0),
        heralded_state=heralded,
        per_pattern=per_pattern,
    )
