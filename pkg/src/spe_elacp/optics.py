"""Linear-optical primitives: variable beam splitter, pure loss, phase flip."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    FockError,
    MixedState,
    PureState,
    basis_state,
    map_branches,
    tensor_product,
    trace_out_mode,
)

ENV_MODE = "_env"


@dataclass(frozen=True)
class BeamSplitterSetting:
    """Two-mode beam splitter; ``t`` is the intensity transmissivity."""

    mode_a: str
    mode_b: str
    t: float

    def __post_init__(self):
        if self.mode_a == self.mode_b:
            raise ValueError(f"beam splitter needs two distinct modes, got {self.mode_a!r} twice")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"transmissivity t={self.t} outside [0, 1]")


def beam_splitter_matrix(t: float) -> np.ndarray:
    """Row ``i`` is the image of input creation operator ``i`` over (a, b).

    Real, symmetric and involutory: ``a+ -> sqrt(t) a+ + sqrt(1-t) b+`` and
    ``b+ -> sqrt(1-t) a+ - sqrt(t) b+``.
    """
    r, s = math.sqrt(t), math.sqrt(1.0 - t)
    return np.array([[r, s], [s, -r]])


def apply_beam_splitter(state: PureState, bs: BeamSplitterSetting) -> PureState:
    ia, ib = state.layout.index(bs.mode_a), state.layout.index(bs.mode_b)
    (u, v), (w, x) = beam_splitter_matrix(bs.t)
    fact = math.factorial
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.amplitudes.items():
        n, m = occ[ia], occ[ib]
        # (u a+ + v b+)^n (w a+ + x b+)^m |0> / sqrt(n! m!)
        norm_in = math.sqrt(fact(n) * fact(m))
        for k in range(n + 1):
            ck = math.comb(n, k) * u**k * v ** (n - k)
            if ck == 0:
                continue
            for j in range(m + 1):
                cj = math.comb(m, j) * w**j * x ** (m - j)
                if cj == 0:
                    continue
                na, nb = k + j, n + m - k - j
                coeff = ck * cj * math.sqrt(fact(na) * fact(nb)) / norm_in
                new = list(occ)
                new[ia], new[ib] = na, nb
                key = tuple(new)
                out[key] = out.get(key, 0j) + amp * coeff
    return PureState(state.layout, out, state.cap)


def loss_channel(m: MixedState, mode: str, transmissivity: float) -> MixedState:
    """Pure-loss channel by dilation: vacuum ancilla, beam splitter, trace."""
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError(f"loss transmissivity {transmissivity} outside [0, 1]")
    m.layout.index(mode)
    if ENV_MODE in m.layout:
        raise FockError(f"mode name {ENV_MODE!r} is reserved for the loss environment")
    bs = BeamSplitterSetting(mode, ENV_MODE, transmissivity)

    def dilate(s: PureState) -> PureState:
        env = basis_state([ENV_MODE], (0,), s.cap)
        return apply_beam_splitter(tensor_product(s, env), bs)

    return trace_out_mode(map_branches(m, dilate), ENV_MODE).merged()


def phase_flip(state: PureState, mode: str) -> PureState:
    """Multiply each ket by ``(-1)**n`` where ``n`` is the count in ``mode``."""
    i = state.layout.index(mode)
    return PureState(
        state.layout,
        {occ: (-amp if occ[i] % 2 else amp) for occ, amp in state.amplitudes.items()},
        state.cap,
    )
