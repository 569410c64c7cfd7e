"""Self-check suite: circuit simulation against closed forms plus kernel properties."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import optics
from .detection import detection_distribution, sample_detection
from .fock import MixedState, basis_state, mixture_distance, superposition
from .protocol import (
    DETECTORS,
    ProtocolParams,
    amplification_boundary,
    analytic_eta_prime,
    analytic_g,
    analytic_success_probability,
    build_input_state,
    build_input_via_lossy_channels,
    detector_state,
    g_limit,
    run_protocol,
)

ALGEBRAIC_TOL = 1e-12
LIMIT_TOL = 1e-3
HOM_TOL = 1e-15
SIGMA_BOUND = 5.0
LIMIT_T1 = 1e-6
ETAS = (0.2, 0.4, 0.6, 0.8)


@dataclass
class CheckResult:
    name: str
    deviation: float
    limit: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        text = f"{flag}  {self.name:<22} max_dev={self.deviation:.3e}  limit={self.limit:.0e}"
        return f"{text}  {self.detail}" if self.detail else text


def _run(name: str, limit: float, fn: Callable[[], tuple[float, str]]) -> CheckResult:
    try:
        dev, detail = fn()
    except Exception as exc:  # a broken kernel must show up as a failed row
        return CheckResult(name, math.inf, limit, False, f"raised {type(exc).__name__}: {exc}")
    return CheckResult(name, dev, limit, dev < limit, detail)


def oracle_grid(etas, alpha2s, t1s) -> dict[str, float]:
    """Max deviations of simulated P, eta' and fidelity over a grid."""
    dev = {"P": 0.0, "eta_prime": 0.0, "fidelity": 0.0}
    for eta in etas:
        for a2 in alpha2s:
            for t1 in t1s:
                p = ProtocolParams.on_concentration_curve(eta, a2, t1)
                out = run_protocol(p)
                dev["P"] = max(dev["P"], abs(out.success_probability - analytic_success_probability(p)))
                dev["eta_prime"] = max(dev["eta_prime"], abs(out.eta_prime - analytic_eta_prime(p)))
                dev["fidelity"] = max(dev["fidelity"], 1.0 - out.fidelity)
    return dev


def hom_coincidence() -> float:
    s = basis_state(("x", "y"), (1, 1))
    out = optics.apply_beam_splitter(s, optics.BeamSplitterSetting("x", "y", 0.5))
    return abs(out.amplitude((1, 1)))


def bs_involution_deviation(seed: int = 7, trials: int = 20) -> float:
    rng = np.random.default_rng(seed)
    layout = ("x", "y", "z")
    kets = [(i, j, k) for i in range(4) for j in range(4) for k in range(4) if i + j + k <= 3]
    worst = 0.0
    for _ in range(trials):
        amps = rng.normal(size=len(kets)) + 1j * rng.normal(size=len(kets))
        s = superposition(layout, dict(zip(kets, amps / np.linalg.norm(amps))))
        bs = optics.BeamSplitterSetting("x", "y", float(rng.uniform()))
        back = optics.apply_beam_splitter(optics.apply_beam_splitter(s, bs), bs)
        keys = set(s.amplitudes) | set(back.amplitudes)
        worst = max(worst, max(abs(s.amplitude(k) - back.amplitude(k)) for k in keys))
    return worst


def loss_composition_deviation() -> float:
    worst = 0.0
    state = MixedState.pure(superposition(("x", "y"), {(2, 0): 0.6, (1, 1): 0.48j, (0, 1): 0.64}))
    for e1, e2 in [(0.3, 0.7), (0.9, 0.5), (0.25, 0.25), (1.0, 0.4)]:
        twice = optics.loss_channel(optics.loss_channel(state, "x", e2), "x", e1)
        once = optics.loss_channel(state, "x", e1 * e2)
        worst = max(worst, mixture_distance(twice, once))
    return worst


def lossy_input_deviation(alpha2s, etas) -> float:
    return max(
        mixture_distance(build_input_via_lossy_channels(a2, eta), build_input_state(eta, a2))
        for a2 in alpha2s
        for eta in etas
    )


def monte_carlo_deviation(shots: int, seed: int) -> tuple[float, str]:
    """Largest |count - expected| in units of the binomial sigma."""
    p = ProtocolParams.on_concentration_curve(0.6, 0.4, 0.3)
    m = detector_state(p)
    modes = tuple(DETECTORS.values())
    counts = sample_detection(m, modes, shots, seed)
    if counts != sample_detection(m, modes, shots, seed):
        return math.inf, "same seed gave different counts"
    worst = 0.0
    for outcome, prob in detection_distribution(m, modes):
        sigma = math.sqrt(shots * prob * (1.0 - prob))
        diff = abs(counts.get(outcome, 0) - shots * prob)
        if sigma > 0:
            worst = max(worst, diff / sigma)
        elif diff > 0:
            worst = math.inf
    return worst, f"shots={shots} seed={seed}"


def run_checks(grid: int = 5, tol: float = 1e-10, shots: int = 0, seed: int = 42) -> list[CheckResult]:
    if grid < 2:
        raise ValueError(f"grid density must be >= 2, got {grid}")
    etas = np.linspace(0.2, 1.0, grid)
    alpha2s = np.linspace(0.1, 0.9, grid)
    t1s = np.linspace(0.05, 0.95, grid)
    results = []

    cache: dict[str, float] = {}

    def grid_dev(key):
        if not cache:
            cache.update(oracle_grid(etas, alpha2s, t1s))
        return cache[key], f"{grid}^3 grid"

    results.append(_run("oracle_P", tol, lambda: grid_dev("P")))
    results.append(_run("oracle_eta_prime", tol, lambda: grid_dev("eta_prime")))
    results.append(_run("heralded_fidelity", tol, lambda: grid_dev("fidelity")))

    def point_k():
        worst = 0.0
        for a2 in (0.4, 0.8):
            t1, t2 = amplification_boundary(a2)
            for eta in ETAS:
                worst = max(worst, abs(run_protocol(ProtocolParams(eta, a2, t1, t2)).gain - 1.0))
        return worst, "alpha2 in {0.4, 0.8}"

    results.append(_run("point_K", tol, point_k))

    def limit():
        worst = 0.0
        for eta in ETAS:
            g = analytic_g(ProtocolParams.on_concentration_curve(eta, 0.4, LIMIT_T1))
            worst = max(worst, abs(g - g_limit(eta)))
        return worst, f"t1={LIMIT_T1:g}"

    results.append(_run("g_limit", LIMIT_TOL, limit))
    results.append(_run("hom_dip", HOM_TOL, lambda: (hom_coincidence(), "t=0.5")))
    results.append(_run("bs_involution", ALGEBRAIC_TOL, lambda: (bs_involution_deviation(), "")))
    results.append(_run("loss_composition", ALGEBRAIC_TOL, lambda: (loss_composition_deviation(), "")))
    results.append(
        _run("lossy_input", ALGEBRAIC_TOL, lambda: (lossy_input_deviation(alpha2s, etas), ""))
    )

    def patterns():
        worst = 0.0
        for a2 in alpha2s:
            out = run_protocol(ProtocolParams.on_concentration_curve(0.6, a2, 0.3))
            quarter = out.success_probability / 4.0
            worst = max(worst, max(abs(v - quarter) for v in out.per_pattern.values()))
        return worst, "each pattern P/4"

    results.append(_run("pattern_symmetry", tol, patterns))
    if shots > 0:
        results.append(_run("monte_carlo", SIGMA_BOUND, lambda: monte_carlo_deviation(shots, seed)))
    return results
