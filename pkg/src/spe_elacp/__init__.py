"""Fock-space simulation of heralded amplification and concentration of single-photon entanglement."""

from .fock import MixedState, ModeLayout, PureState
from .protocol import ProtocolOutcome, ProtocolParams, run_protocol

__all__ = ["MixedState", "ModeLayout", "PureState", "ProtocolOutcome", "ProtocolParams", "run_protocol"]
