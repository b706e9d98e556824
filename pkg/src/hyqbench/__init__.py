"""Hybrid CV-DV circuit simulator and benchmark harness."""

from __future__ import annotations

from .engine import Circuit, GateOp, circuit_features, run_density, run_pure
from .gates import GateKind
from .hilbert import MixedState, PureState, SystemLayout, fock_state, vacuum_state
from .noise import NoiseModel

__all__ = [
    "Circuit",
    "GateKind",
    "GateOp",
    "MixedState",
    "NoiseModel",
    "PureState",
    "SystemLayout",
    "circuit_features",
    "fock_state",
    "run_density",
    "run_pure",
    "vacuum_state",
]

__version__ = "0.1.0"
