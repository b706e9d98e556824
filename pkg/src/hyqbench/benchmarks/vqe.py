"""Hybrid variational eigensolver for a knapsack QUBO on one qubit and two qumodes.

Bits are read as the qubit followed by the binary Fock numbers of the two
modes: the qubit and mode 1 hold the item choices, mode 2 holds the slack.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from ..engine import Circuit, run_pure
from ..hilbert import SystemLayout, vacuum_state
from .common import BenchmarkReport, Timer, feature_report, optimize_restarts

PARAMS_PER_LAYER = 8

PAPER_VALUES = (1.0, 4.0, 5.0, 10.0)
PAPER_WEIGHTS = (2.5, 1.0, 2.0, 3.0)
PAPER_CAPACITY = 7.0


def bits_per_mode(cutoff: int) -> int:
    b = int(round(math.log2(cutoff)))
    if 2**b != cutoff:
        raise ValueError("cutoffs must be powers of two")
    return b


def penalty_weight(values: Sequence[float]) -> float:
    """Smallest integer strictly above the total value."""
    return float(math.floor(sum(values)) + 1)


def qubo_energy(items: Sequence[int], slack: int, values, weights, capacity, lam) -> float:
    items = np.asarray(items)
    load = float(np.dot(weights, items)) + slack - capacity
    return -float(np.dot(values, items)) + lam * load**2


def decode(q: int, n1: int, n2: int, b1: int, b2: int) -> tuple[tuple[int, ...], int, str]:
    bits = f"{q}{n1:0{b1}b}{n2:0{b2}b}"
    items = tuple(int(c) for c in bits[: 1 + b1])
    return items, n2, bits


def energy_table(values, weights, capacity, lam, cutoffs: tuple[int, int]) -> np.ndarray:
    """QUBO energy of every basis state, shape ``(2, N1, N2)``."""
    b1, b2 = bits_per_mode(cutoffs[0]), bits_per_mode(cutoffs[1])
    if 1 + b1 != len(values):
        raise ValueError(f"{len(values)} items need 1 + log2(N1) = {1 + b1} bits")
    table = np.empty((2, cutoffs[0], cutoffs[1]))
    for q, n1, n2 in itertools.product(range(2), range(cutoffs[0]), range(cutoffs[1])):
        items, slack, _ = decode(q, n1, n2, b1, b2)
        table[q, n1, n2] = qubo_energy(items, slack, values, weights, capacity, lam)
    return table


def brute_force(values, weights, capacity) -> dict:
    """Best feasible item choice by enumeration."""
    best = None
    for items in itertools.product((0, 1), repeat=len(values)):
        w = float(np.dot(weights, items))
        v = float(np.dot(values, items))
        if w <= capacity and (best is None or v > best["value"]):
            best = {"items": items, "value": v, "weight": w}
    return best


def build_vqe_ansatz(params: np.ndarray, depth: int = 5, cutoffs: tuple[int, int] = (8, 8)) -> Circuit:
    """Per layer: U3, ECD to mode 1, U3, ECD to mode 2."""
    params = np.asarray(params, dtype=float)
    if params.size != PARAMS_PER_LAYER * depth:
        raise ValueError(f"need {PARAMS_PER_LAYER * depth} parameters, got {params.size}")
    layout = SystemLayout(1, tuple(cutoffs))
    c = Circuit(layout, name="vqe", metadata={"depth": depth})
    for layer in params.reshape(depth, PARAMS_PER_LAYER):
        for k, mode in enumerate((1, 2)):
            th, ph, br, bi = layer[4 * k: 4 * k + 4]
            c.append("U3", [0], theta=th, phi=ph)
            c.append("ECD", [0, mode], beta=complex(br, bi))
    return c


def vqe_objective(params, table: np.ndarray, depth: int, cutoffs) -> float:
    circuit = build_vqe_ansatz(params, depth, cutoffs)
    psi = run_pure(circuit, vacuum_state(circuit.layout))
    probs = np.abs(psi.amplitudes.reshape(table.shape)) ** 2
    return float(np.sum(probs * table))


def run_vqe(values=PAPER_VALUES, weights=PAPER_WEIGHTS, capacity=PAPER_CAPACITY, depth: int = 5,
            cutoffs: tuple[int, int] = (8, 8), seed: int = 7, restarts: int = 5,
            method: str = "BFGS", maxiter: int = 300,
            penalty_schedule: Sequence[float] = (1.0,)) -> BenchmarkReport:
    """Best-of-restarts knapsack VQE.

    Each restart first minimises the objective with the smaller penalty
    weights in ``penalty_schedule`` and then with the full weight.  The
    full-weight landscape alone traps BFGS in infeasible local minima.
    """
    values, weights = tuple(values), tuple(weights)
    lam = penalty_weight(values)
    table = energy_table(values, weights, capacity, lam, cutoffs)
    b1, b2 = bits_per_mode(cutoffs[0]), bits_per_mode(cutoffs[1])
    warm_tables = [energy_table(values, weights, capacity, w, cutoffs) for w in penalty_schedule]
    warmups = [lambda p, tb=tb: vqe_objective(p, tb, depth, cutoffs) for tb in warm_tables]
    with Timer() as t:
        result = optimize_restarts(lambda p: vqe_objective(p, table, depth, cutoffs),
                                   PARAMS_PER_LAYER * depth, seed, restarts, method=method, maxiter=maxiter,
                                   warmups=warmups)
        circuit = build_vqe_ansatz(result.x, depth, cutoffs)
        psi = run_pure(circuit, vacuum_state(circuit.layout))
        probs = np.abs(psi.amplitudes.reshape(table.shape)) ** 2
    q, n1, n2 = np.unravel_index(int(np.argmax(probs)), probs.shape)
    items, slack, bits = decode(int(q), int(n1), int(n2), b1, b2)
    oracle = brute_force(values, weights, capacity)
    ground = np.unravel_index(int(np.argmin(table)), table.shape)
    g_items, _, g_bits = decode(*(int(v) for v in ground), b1, b2)
    feats, notes = feature_report("vqe", circuit)
    return BenchmarkReport(
        "vqe", {"values": list(values), "weights": list(weights), "capacity": capacity, "depth": depth,
                "cutoffs": list(cutoffs), "seed": seed, "restarts": restarts, "method": method,
                "penalty": lam, "penalty_schedule": list(penalty_schedule)}, feats,
        outputs={
            "bitstring": bits,
            "items": list(items),
            "slack": slack,
            "value": float(np.dot(values, items)),
            "weight": float(np.dot(weights, items)),
            "probability": float(probs.max()),
            "objective": result.fun,
            "initial_objective": result.initial_fun,
            "restarts": result.restarts,
            "best_restart": result.best_restart,
            "evaluations": result.evaluations,
            "qubo_ground_bits": g_bits,
            "qubo_ground_items": list(g_items),
            "enumeration_optimum": {"items": list(oracle["items"]), "value": oracle["value"],
                                    "weight": oracle["weight"]},
            "params": result.x.tolist(),
        },
        notes=notes, runtime_s=t.elapsed,
    )
