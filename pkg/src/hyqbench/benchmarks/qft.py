"""Quantum Fourier transform on a qubit register through one oscillator.

The register is written into the oscillator position, the Fourier gate
swaps position and momentum, and the register is read back.  Displacements
before and after the Fourier gate centre the oscillator state.
"""

from __future__ import annotations

import numpy as np

from ..engine import Circuit, run_pure
from ..hilbert import SystemLayout, basis_state, partial_trace
from .common import BenchmarkReport, Timer, feature_report
from .transfer import append_cv_to_dv, append_dv_to_cv

TRANSFER_SPACING = 0.6


def qft_wires(n: int, ancilla: int, append: int) -> dict[str, list[int]]:
    """Wire roles: ancillas first, then input qubits (MSB first), then appended qubits."""
    return {
        "ancilla": list(range(ancilla)),
        "input": list(range(ancilla, ancilla + n)),
        "append": list(range(ancilla + n, ancilla + n + append)),
    }


def default_register_order(n: int, ancilla: int, append: int) -> list[int]:
    """Register positions, MSB first, for the transfer.

    Appended qubits take the most significant positions, then the input
    bits from least to most significant with the ancillas placed just above
    the input MSB.
    """
    roles = qft_wires(n, ancilla, append)
    inputs = roles["input"]
    order = list(reversed(roles["append"]))
    order += list(reversed(inputs[1:])) + roles["ancilla"] + inputs[:1]
    return order


def build_qft(n: int = 2, ancilla: int = 1, append: int = 2, delta: float = 2.33, delta_prime: float = 0.29,
              cutoff: int = 16, spacing: float = TRANSFER_SPACING, input_bits: str | None = None,
              register_order: list[int] | None = None) -> Circuit:
    if n < 1:
        raise ValueError("n must be >= 1")
    total = n + ancilla + append
    layout = SystemLayout(total, (cutoff,))
    roles = qft_wires(n, ancilla, append)
    order = register_order or default_register_order(n, ancilla, append)
    if sorted(order) != list(range(total)):
        raise ValueError("register_order must be a permutation of all qubits")
    c = Circuit(layout, name="qft", metadata={
        "n": n, "ancilla": ancilla, "append": append, "delta": delta, "delta_prime": delta_prime,
        "cutoff": cutoff, "spacing": spacing, "register_order": order, "roles": roles,
        "depth_note": ("depth counts each transfer block's Hadamard layer as one step; "
                       "the reference row reports one more per block"),
    })
    if input_bits:
        for q, b in zip(roles["input"], input_bits):
            if b == "1":
                c.append("X", [q])
    for q in roles["ancilla"]:
        c.append("H", [q])
    mode = total
    append_dv_to_cv(c, order, mode, spacing)
    c.append("D", [mode], alpha=-delta)
    c.append("F", [mode])
    c.append("D", [mode], alpha=delta_prime)
    append_cv_to_dv(c, order, mode, spacing)
    return c


def qft_vector(bits: str) -> np.ndarray:
    n = len(bits)
    k = int(bits, 2)
    d = 2**n
    return np.exp(2j * np.pi * k * np.arange(d) / d) / np.sqrt(d)


def input_fidelity(state, circuit: Circuit, bits: str) -> float:
    """Fidelity of the input qubits' reduced state with the exact DV QFT of ``bits``."""
    inputs = circuit.metadata["roles"]["input"]
    rho = partial_trace(state, inputs).matrix
    v = qft_vector(bits)
    return float(np.real(np.vdot(v, rho @ v)))


def run_qft(n: int = 2, ancilla: int = 1, append: int = 2, delta: float = 2.33, delta_prime: float = 0.29,
            cutoff: int = 16, spacing: float = TRANSFER_SPACING, input_bits: str = "00") -> BenchmarkReport:
    if len(input_bits) != n:
        raise ValueError("input_bits must have n characters")
    with Timer() as t:
        circuit = build_qft(n, ancilla, append, delta, delta_prime, cutoff, spacing)
        levels = [0] * circuit.layout.wire_count
        for q, b in zip(circuit.metadata["roles"]["input"], input_bits):
            levels[q] = int(b)
        start = basis_state(circuit.layout, levels)
        out = run_pure(circuit, start)
        fid = input_fidelity(out, circuit, input_bits)
    feats, notes = feature_report("qft", circuit)
    return BenchmarkReport(
        "qft", {"n": n, "ancilla": ancilla, "append": append, "delta": delta, "delta_prime": delta_prime,
                "cutoff": cutoff, "spacing": spacing, "input_bits": input_bits}, feats,
        fidelities={"ideal": fid},
        outputs={"register_order": circuit.metadata["register_order"]},
        notes=notes, runtime_s=t.elapsed,
    )
