"""Sparse Fock-space states over named optical modes.

A :class:`PureState` is a map from occupation vectors (photon counts per
mode) to complex amplitudes.  A :class:`MixedState` is a finite ensemble of
normalized pure states; every mixture that arises from photon loss or
number-resolving detection branches in the number basis, so the ensemble
form is exact and stays small.

All objects are immutable; every operation returns a new state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_CAP = 4
PRUNE_TOL = 1e-15
NORM_TOL = 1e-12

Occupation = tuple[int, ...]


class FockError(ValueError):
    """Invalid state construction or mode addressing."""


class PhotonCapError(FockError):
    """An occupation vector carries more photons than the configured cap."""


@dataclass(frozen=True)
class ModeLayout:
    """Ordered, uniquely named optical modes."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise FockError(f"duplicate mode names in {names}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise FockError(f"unknown mode {name!r}; layout is {self.names}") from None

    def concat(self, other: ModeLayout) -> ModeLayout:
        clash = set(self.names) & set(other.names)
        if clash:
            raise FockError(f"modes {sorted(clash)} appear in both factors")
        return ModeLayout(self.names + other.names)

    def without(self, names: Iterable[str]) -> ModeLayout:
        drop = set(names)
        for n in drop:
            self.index(n)
        return ModeLayout(tuple(n for n in self.names if n not in drop))


def _as_layout(modes) -> ModeLayout:
    return modes if isinstance(modes, ModeLayout) else ModeLayout(tuple(modes))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unnormalized or normalized ket stored as ``{occupation: amplitude}``.

    Amplitudes below ``PRUNE_TOL`` in magnitude are dropped on construction.
    """

    layout: ModeLayout
    amplitudes: Mapping[Occupation, complex] = field(default_factory=dict)
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        layout = _as_layout(self.layout)
        clean: dict[Occupation, complex] = {}
        for occ, amp in self.amplitudes.items():
            occ = _check_occupation(occ, len(layout), self.cap)
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                clean[occ] = clean.get(occ, 0j) + amp
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "amplitudes", clean)

    @property
    def modes(self) -> tuple[str, ...]:
        return self.layout.names

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, occ: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def is_zero(self) -> bool:
        return self.norm() <= PRUNE_TOL

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.amplitudes}

    def scaled(self, factor: complex) -> PureState:
        return PureState(self.layout, {k: factor * v for k, v in self.amplitudes.items()}, self.cap)

    def __add__(self, other: PureState) -> PureState:
        _require_same_layout(self, other)
        out = dict(self.amplitudes)
        for k, v in other.amplitudes.items():
            out[k] = out.get(k, 0j) + v
        return PureState(self.layout, out, max(self.cap, other.cap))

    def __sub__(self, other: PureState) -> PureState:
        return self + other.scaled(-1)

    def __rmul__(self, factor: complex) -> PureState:
        return self.scaled(factor)

    def __repr__(self) -> str:
        terms = " + ".join(
            f"({amp:.6g})|{','.join(map(str, occ))}>" for occ, amp in sorted(self.amplitudes.items())
        )
        return f"PureState[{','.join(self.modes)}]({terms or '0'})"


def _check_occupation(occ, n_modes: int, cap: int) -> Occupation:
    occ = tuple(int(c) for c in occ)
    if len(occ) != n_modes:
        raise FockError(f"occupation {occ} has {len(occ)} entries, layout has {n_modes} modes")
    if any(c < 0 for c in occ):
        raise FockError(f"negative photon count in {occ}")
    if sum(occ) > cap:
        raise PhotonCapError(f"occupation {occ} holds {sum(occ)} photons, cap is {cap}")
    return occ


def _require_same_layout(a: PureState, b: PureState) -> None:
    if a.layout != b.layout:
        raise FockError(f"layout mismatch: {a.modes} vs {b.modes}")


def basis_state(layout, occ: Sequence[int], cap: int = DEFAULT_CAP) -> PureState:
    """Unit-amplitude number state ``|occ>`` on ``layout``."""
    layout = _as_layout(layout)
    occ = _check_occupation(occ, len(layout), cap)
    return PureState(layout, {occ: 1.0}, cap)


def vacuum(layout, cap: int = DEFAULT_CAP) -> PureState:
    layout = _as_layout(layout)
    return basis_state(layout, (0,) * len(layout), cap)


def superposition(layout, terms: Mapping[Sequence[int], complex], cap: int = DEFAULT_CAP) -> PureState:
    """Build ``sum_k c_k |occ_k>`` from a plain mapping."""
    return PureState(_as_layout(layout), {tuple(k): v for k, v in terms.items()}, cap)


def tensor_product(a: PureState, b: PureState) -> PureState:
    layout = a.layout.concat(b.layout)
    cap = max(a.cap, b.cap)
    out = {}
    for occ_a, amp_a in a.amplitudes.items():
        for occ_b, amp_b in b.amplitudes.items():
            out[occ_a + occ_b] = amp_a * amp_b
    return PureState(layout, out, cap)


def inner_product(a: PureState, b: PureState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _require_same_layout(a, b)
    small, large = (a, b) if len(a.amplitudes) <= len(b.amplitudes) else (b, a)
    total = 0j
    for occ in small.amplitudes:
        if occ in large.amplitudes:
            total += a.amplitudes[occ].conjugate() * b.amplitudes[occ]
    return total


def normalize(s: PureState) -> PureState:
    n = s.norm()
    if n <= PRUNE_TOL:
        raise FockError("cannot normalize the zero state")
    return s.scaled(1.0 / n)


def relabel(s: PureState, mapping: Mapping[str, str]) -> PureState:
    """Rename modes; amplitudes untouched."""
    for old in mapping:
        s.layout.index(old)
    layout = ModeLayout(tuple(mapping.get(n, n) for n in s.modes))
    return PureState(layout, s.amplitudes, s.cap)


def project_counts(s: PureState, counts: Mapping[str, int]) -> PureState:
    """Keep only kets whose occupation matches ``counts``; measured modes stay."""
    idx = {s.layout.index(m): int(c) for m, c in counts.items()}
    kept = {occ: amp for occ, amp in s.amplitudes.items() if all(occ[i] == c for i, c in idx.items())}
    return PureState(s.layout, kept, s.cap)


def drop_modes(s: PureState, modes: Iterable[str]) -> PureState:
    """Delete modes from the layout, summing amplitudes of kets that collide.

    Only meaningful after projecting those modes onto fixed counts.
    """
    modes = list(modes)
    layout = s.layout.without(modes)
    drop = {s.layout.index(m) for m in modes}
    out: dict[Occupation, complex] = {}
    for occ, amp in s.amplitudes.items():
        key = tuple(c for i, c in enumerate(occ) if i not in drop)
        out[key] = out.get(key, 0j) + amp
    return PureState(layout, out, s.cap)


def project_photon_number(s: PureState, n: int) -> PureState:
    return PureState(s.layout, {k: v for k, v in s.amplitudes.items() if sum(k) == n}, s.cap)


@dataclass(frozen=True, eq=False)
class MixedState:
    """Ensemble ``sum_i w_i |psi_i><psi_i|`` of normalized pure states.

    An ensemble with no branches is the empty sentinel returned by
    zero-probability post-selection.
    """

    layout: ModeLayout
    branches: tuple[tuple[float, PureState], ...] = ()

    def __post_init__(self):
        layout = _as_layout(self.layout)
        branches = tuple((float(w), s) for w, s in self.branches)
        for w, s in branches:
            if s.layout != layout:
                raise FockError(f"branch layout {s.modes} differs from mixture layout {layout.names}")
            if not w > PRUNE_TOL or w > 1 + NORM_TOL:
                raise FockError(f"branch weight {w} outside ({PRUNE_TOL}, 1]")
            if abs(s.norm() - 1.0) > NORM_TOL:
                raise FockError(f"branch state has norm {s.norm()}, expected 1")
        if branches:
            total = math.fsum(w for w, _ in branches)
            if abs(total - 1.0) > NORM_TOL:
                raise FockError(f"branch weights sum to {total}, expected 1")
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "branches", branches)

    @classmethod
    def pure(cls, state: PureState) -> MixedState:
        return cls(state.layout, ((1.0, normalize(state)),))

    @classmethod
    def empty(cls, layout) -> MixedState:
        return cls(_as_layout(layout), ())

    @property
    def modes(self) -> tuple[str, ...]:
        return self.layout.names

    @property
    def is_empty(self) -> bool:
        return not self.branches

    @property
    def weights(self) -> list[float]:
        return [w for w, _ in self.branches]

    def __iter__(self):
        return iter(self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def merged(self, tol: float = NORM_TOL) -> MixedState:
        """Combine branches that are the same ray (equal up to global phase)."""
        groups: list[list] = []
        for w, s in self.branches:
            for g in groups:
                if abs(inner_product(g[1], s)) ** 2 >= 1.0 - tol:
                    g[0] += w
                    break
            else:
                groups.append([w, s])
        return MixedState(self.layout, tuple((w, s) for w, s in groups))

    def __repr__(self) -> str:
        inner = ", ".join(f"{w:.6g}: {s!r}" for w, s in self.branches)
        return f"MixedState{{{inner}}}"


def ensemble(layout, pairs: Iterable[tuple[float, PureState]]) -> MixedState:
    """Mixture from ``(weight, state)`` pairs with unnormalized states.

    Each branch's effective weight is ``weight * ||state||**2``; weights are
    then rescaled to sum to one and negligible branches dropped.  Returns the
    empty sentinel if nothing survives.
    """
    layout = _as_layout(layout)
    raw = []
    for w, s in pairs:
        p = w * s.norm() ** 2
        if p > PRUNE_TOL:
            raw.append((p, normalize(s)))
    total = math.fsum(p for p, _ in raw)
    if total <= PRUNE_TOL:
        return MixedState.empty(layout)
    kept = [(p / total, s) for p, s in raw if p / total > PRUNE_TOL]
    total = math.fsum(p for p, _ in kept)
    return MixedState(layout, tuple((p / total, s) for p, s in kept))


def trace_out_mode(m: MixedState, mode: str) -> MixedState:
    """Partial trace over ``mode``, exact in the number basis.

    Every branch splits into one sub-branch per photon number found in the
    traced mode.
    """
    i = m.layout.index(mode)
    layout = m.layout.without([mode])
    pairs = []
    for w, s in m.branches:
        by_count: dict[int, dict[Occupation, complex]] = {}
        for occ, amp in s.amplitudes.items():
            by_count.setdefault(occ[i], {})[occ[:i] + occ[i + 1:]] = amp
        for n in sorted(by_count):
            pairs.append((w, PureState(layout, by_count[n], s.cap)))
    return ensemble(layout, pairs)


def density_matrix(m: MixedState) -> dict[tuple[Occupation, Occupation], complex]:
    """Sparse ``rho[(row, col)]`` over the kets the ensemble touches."""
    rho: dict[tuple[Occupation, Occupation], complex] = {}
    for w, s in m.branches:
        for r, ar in s.amplitudes.items():
            for c, ac in s.amplitudes.items():
                rho[(r, c)] = rho.get((r, c), 0j) + w * ar * ac.conjugate()
    return rho


def mixture_distance(a: MixedState, b: MixedState) -> float:
    """Largest absolute density-matrix entry difference."""
    if a.layout != b.layout:
        raise FockError(f"layout mismatch: {a.modes} vs {b.modes}")
    ra, rb = density_matrix(a), density_matrix(b)
    keys = set(ra) | set(rb)
    return max((abs(ra.get(k, 0j) - rb.get(k, 0j)) for k in keys), default=0.0)


def map_branches(m: MixedState, op) -> MixedState:
    """Apply a norm-preserving map ``op: PureState -> PureState`` to every branch."""
    if m.is_empty:
        raise FockError("cannot evolve the empty mixture")
    pairs = [(w, op(s)) for w, s in m.branches]
    return ensemble(pairs[0][1].layout, pairs)
