"""Ideal photon-number-resolving detection on selected modes."""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

from .fock import FockError, MixedState, drop_modes, ensemble, project_counts

# mode name -> required photon count
DetectionPattern = Mapping[str, int]


def _check_modes(m: MixedState, modes) -> tuple[str, ...]:
    modes = tuple(modes)
    for name in modes:
        m.layout.index(name)
    if len(set(modes)) != len(modes):
        raise FockError(f"repeated mode in {modes}")
    return modes


def detection_distribution(m: MixedState, modes: Sequence[str]) -> list[tuple[tuple[int, ...], float]]:
    """Joint photon-count distribution on ``modes``, sorted by outcome.

    Outcome tuples are ordered like ``modes``.
    """
    modes = _check_modes(m, modes)
    idx = [m.layout.index(name) for name in modes]
    probs: dict[tuple[int, ...], list[float]] = {}
    for w, s in m.branches:
        for occ, amp in s.amplitudes.items():
            key = tuple(occ[i] for i in idx)
            probs.setdefault(key, []).append(w * abs(amp) ** 2)
    return [(k, math.fsum(v)) for k, v in sorted(probs.items())]


def postselect(m: MixedState, pattern: DetectionPattern) -> tuple[float, MixedState]:
    """Probability of ``pattern`` and the renormalized state of the other modes.

    A zero-probability pattern returns ``(0.0, MixedState.empty(...))``.
    """
    modes = _check_modes(m, pattern.keys())
    for name, c in pattern.items():
        if int(c) < 0:
            raise FockError(f"negative count {c} requested on {name!r}")
    remaining = m.layout.without(modes)
    pairs = []
    for w, s in m.branches:
        hit = project_counts(s, pattern)
        pairs.append((w, drop_modes(hit, modes)))
    prob = math.fsum(w * s.norm() ** 2 for w, s in pairs)
    if prob <= 0.0:
        return 0.0, MixedState.empty(remaining)
    cond = ensemble(remaining, pairs)
    if cond.is_empty:
        return 0.0, cond
    return prob, cond


def sample_detection(
    m: MixedState, modes: Sequence[str], shots: int, seed: int
) -> dict[tuple[int, ...], int]:
    """Seeded multinomial draw of ``shots`` detection records."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    dist = detection_distribution(m, modes)
    outcomes = [k for k, _ in dist]
    p = np.array([v for _, v in dist], dtype=float)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    return {k: int(c) for k, c in zip(outcomes, counts) if c}
