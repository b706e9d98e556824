from __future__ import annotations

import math

import numpy as np
import pytest

from hyqbench import gates
from hyqbench.gates import GateKind, gate_matrix, unitarity_error

SWEEP = [-1.7, -0.4, 0.0, 0.35, 1.2]
MODE_PARAMS = {
    "D": lambda v: {"alpha": v + 0.5j * v},
    "S": lambda v: {"z": 0.5 * v},
    "R": lambda v: {"theta": v},
    "F": lambda v: {},
    "BS": lambda v: {"theta": v, "phi": 0.3 * v},
    "HOP": lambda v: {"theta": v},
    "CD": lambda v: {"alpha": v - 0.2j},
    "CDA": lambda v: {"alpha": v, "beta": -0.5 * v + 0.1j},
    "CDX": lambda v: {"alpha": v},
    "CDY": lambda v: {"alpha": 1j * v},
    "CR": lambda v: {"theta": v},
    "JC": lambda v: {"theta": v},
    "ECD": lambda v: {"beta": v + 0.3j},
}
QUBIT_PARAMS = {
    "X": lambda v: {}, "Y": lambda v: {}, "Z": lambda v: {}, "H": lambda v: {}, "SG": lambda v: {},
    "SDG": lambda v: {}, "CNOT": lambda v: {}, "SWAP": lambda v: {},
    "RX": lambda v: {"theta": v}, "RY": lambda v: {"theta": v}, "RZ": lambda v: {"theta": v},
    "U3": lambda v: {"theta": v, "phi": 0.5 * v, "lam": -v},
}


def _dims(kind: str, n: int) -> tuple[int, ...]:
    sig = gates.SIGNATURES[GateKind(kind)]
    return tuple(2 if s == "q" else n for s in sig)


def test_every_named_gate_is_covered():
    named = {k.value for k in GateKind} - {"U"}
    assert named == set(MODE_PARAMS) | set(QUBIT_PARAMS)


@pytest.mark.parametrize("kind", sorted(MODE_PARAMS) + sorted(QUBIT_PARAMS))
def test_unitarity_sweep(kind):
    make = MODE_PARAMS.get(kind) or QUBIT_PARAMS[kind]
    for n in (4, 16):
        for v in SWEEP:
            u = gate_matrix(kind, make(v), _dims(kind, n))
            assert unitarity_error(u) < 1e-10, (kind, n, v)


def test_displacement_matches_coherent_amplitudes():
    vec = gates.displacement(1.0, 64)[:, 0]
    for n in range(11):
        want = math.exp(-0.5) / math.sqrt(math.factorial(n))
        assert abs(vec[n] - want) < 1e-8


def test_displacement_inverse():
    for alpha in (0.5, 1.0 - 1.0j, 2.0):
        prod = gates.displacement(alpha, 64) @ gates.displacement(-alpha, 64)
        assert np.max(np.abs(prod - np.eye(64))) < 1e-8


def test_displacement_shifts_position():
    x = gates.position(64)
    vec = gates.displacement(0.7 + 0.2j, 64)[:, 0]
    assert np.vdot(vec, x @ vec).real == pytest.approx(math.sqrt(2) * 0.7, abs=1e-8)


def test_squeezed_vacuum_position_variance():
    vec = gates.squeeze(0.5, 64)[:, 0]
    x = gates.position(128)[:64, :64]
    var = np.vdot(vec, x @ x @ vec).real
    assert var == pytest.approx(math.exp(-1.0) / 2, abs=1e-4)


def test_fourier_maps_position_to_momentum():
    n = 64
    vec = gates.fourier(n) @ gates.displacement(0.8, n)[:, 0]
    x_before = math.sqrt(2) * 0.8
    assert np.vdot(vec, gates.momentum(n) @ vec).real == pytest.approx(x_before, abs=1e-8)
    assert abs(np.vdot(vec, gates.position(n) @ vec)) < 1e-8


def test_hopping_single_excitation():
    n = 4
    theta = 0.37
    u = gates.hopping(theta, n, n)
    out = u[:, 1 * n + 0]
    assert abs(out[1 * n + 0]) ** 2 == pytest.approx(math.cos(theta) ** 2, abs=1e-8)
    assert abs(out[0 * n + 1]) ** 2 == pytest.approx(math.sin(theta) ** 2, abs=1e-8)


def test_hopping_conserves_photon_number(rng):
    n = 5
    num = np.kron(gates.number(n), np.eye(n)) + np.kron(np.eye(n), gates.number(n))
    v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    v /= np.linalg.norm(v)
    out = gates.hopping(0.9, n, n) @ v
    assert abs(np.vdot(out, num @ out).real - np.vdot(v, num @ v).real) < 1e-9


def test_conditional_displacement_blocks():
    n = 8
    alpha = 0.4 - 0.3j
    u = gates.conditional_displacement_asym(alpha, -0.2, n)
    want = np.kron(np.diag([1, 0]), gates.displacement(alpha, n)) + np.kron(np.diag([0, 1]), gates.displacement(-0.2, n))
    assert np.max(np.abs(u - want)) < 1e-12
    cd = gates.conditional_displacement(alpha, n)
    assert np.max(np.abs(cd - gates.conditional_displacement_asym(alpha, -alpha, n))) < 1e-12


def test_jaynes_cummings_closed_form():
    n = 6
    theta = 0.61
    out = gates.jaynes_cummings(theta, n)[:, 1 * n + 0]
    want = np.zeros(2 * n, dtype=complex)
    want[1 * n + 0] = math.cos(theta)
    want[0 * n + 1] = -1j * math.sin(theta)
    assert np.max(np.abs(out - want)) < 1e-10


def test_jaynes_cummings_conserves_excitations(rng):
    n = 6
    exc = np.kron(gates.SIGMA_PLUS @ gates.SIGMA_MINUS, np.eye(n)) + np.kron(np.eye(2), gates.number(n))
    v = np.zeros(2 * n, dtype=complex)
    v[: 2 * n - 1] = rng.normal(size=2 * n - 1)
    v[n - 1] = 0.0  # keep the truncation edge empty
    v /= np.linalg.norm(v)
    out = gates.jaynes_cummings(1.3, n) @ v
    assert abs(np.vdot(out, exc @ out).real - np.vdot(v, exc @ v).real) < 1e-9


def test_ecd_is_x_times_cd():
    n = 8
    beta = 0.5 + 0.25j
    want = np.kron(gates.PAULI_X, np.eye(n)) @ gates.conditional_displacement(beta, n)
    assert np.max(np.abs(gates.ecd(beta, n) - want)) < 1e-12


def test_truncation_convergence():
    cases = [("D", {"alpha": 0.3}), ("S", {"z": 0.2}), ("R", {"theta": 0.4}), ("CD", {"alpha": 0.25})]
    n = 32
    for kind, params in cases:
        small = gate_matrix(kind, params, _dims(kind, n))[: n // 2, : n // 2]
        big = gate_matrix(kind, params, _dims(kind, 2 * n))[: n // 2, : n // 2]
        assert np.max(np.abs(small - big)) < 1e-6, kind


def test_expm_paths_agree(rng):
    h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    g = 1j * (h + h.conj().T)
    a = gates.expm_antihermitian(g)
    b = gates.expm_pade(g)
    assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))
