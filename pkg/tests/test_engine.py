from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_vector
from hyqbench.engine import (
    Circuit,
    circuit_depth,
    circuit_features,
    dumps,
    fock_distribution,
    loads,
    measure_fock,
    measure_quadrature,
    quadrature_distribution,
    run_density,
    run_pure,
)
from hyqbench.hilbert import PureState, SystemLayout, vacuum_state
from hyqbench.oracle import dense_circuit_unitary


def _random_circuit(rng: np.random.Generator) -> Circuit:
    c = Circuit(SystemLayout(2, (8,)))
    menu = [
        ("H", [0], {}), ("RX", [1], {"theta": 0.0}), ("CNOT", [0, 1], {}), ("D", [2], {"alpha": 0.0}),
        ("S", [2], {"z": 0.0}), ("CD", [1, 2], {"alpha": 0.0}), ("JC", [0, 2], {"theta": 0.0}),
        ("ECD", [0, 2], {"beta": 0.0}), ("RZ", [0], {"theta": 0.0}),
    ]
    for _ in range(10):
        kind, targets, params = menu[rng.integers(len(menu))]
        c.append(kind, targets, **{k: 0.4 * rng.normal() for k in params})
    return c


def test_random_circuit_matches_oracle(rng):
    c = _random_circuit(rng)
    psi = PureState(c.layout, random_vector(rng, c.layout.dim))
    out = run_pure(c, psi)
    ref = dense_circuit_unitary(c).apply(psi)
    assert 1 - abs(np.vdot(out.amplitudes, ref.amplitudes)) ** 2 < 1e-10
    assert abs(out.norm() - 1) < 1e-10


def test_density_run_without_noise_equals_pure(rng):
    c = _random_circuit(rng)
    psi = PureState(c.layout, random_vector(rng, c.layout.dim))
    out = run_pure(c, psi).amplitudes
    rho = run_density(c, psi).matrix
    assert np.max(np.abs(rho - np.outer(out, out.conj()))) < 1e-9


def test_invalid_targets_rejected():
    c = Circuit(SystemLayout(1, (4,)))
    with pytest.raises(ValueError):
        c.append("D", [0], alpha=1.0)
    with pytest.raises(ValueError):
        c.append("CD", [1, 0], alpha=1.0)
    with pytest.raises(IndexError):
        c.append("H", [5])


def test_coherent_fock_distribution_is_poisson():
    c = Circuit(SystemLayout(0, (64,)))
    c.append("D", [0], alpha=1.0)
    p = fock_distribution(run_pure(c, vacuum_state(c.layout)), 0)
    want = np.array([math.exp(-1) / math.factorial(n) for n in range(64)])
    assert np.max(np.abs(p - want)) < 1e-6


def test_quadrature_variances():
    layout = SystemLayout(0, (64,))
    grid, dens = quadrature_distribution(vacuum_state(layout), 0)
    assert np.trapezoid(dens * grid**2, grid) == pytest.approx(0.5, abs=1e-3)
    c = Circuit(layout)
    c.append("S", [0], z=0.5)
    grid, dens = quadrature_distribution(run_pure(c, vacuum_state(layout)), 0)
    assert np.trapezoid(dens * grid**2, grid) == pytest.approx(math.exp(-1) / 2, abs=1e-3)


def test_measurements_are_seeded():
    c = Circuit(SystemLayout(0, (16,)))
    c.append("D", [0], alpha=1.0)
    s = run_pure(c, vacuum_state(c.layout))
    a = measure_quadrature(s, 0, shots=20, seed=3)
    b = measure_quadrature(s, 0, shots=20, seed=3)
    assert np.array_equal(a, b)
    assert np.array_equal(measure_fock(s, 0, shots=50, seed=3), measure_fock(s, 0, shots=50, seed=3))


def test_features_and_depth():
    c = Circuit(SystemLayout(2, (4,)))
    c.append("H", [0])
    c.append("H", [1])
    c.append("CD", [0, 2], alpha=0.5)
    c.append("D", [2], alpha=0.1)
    f = circuit_features(c)
    assert (f["qubits"], f["qumodes"], f["qubit_gates"], f["qumode_gates"], f["hybrid_gates"]) == (2, 1, 2, 1, 1)
    assert circuit_depth(c) == 3


def test_serialisation_round_trip(rng):
    c = _random_circuit(rng)
    c.custom(np.eye(2), [1], label="idle")
    back = loads(dumps(c))
    assert back.layout.dims == c.layout.dims
    assert [op.kind for op in back.ops] == [op.kind for op in c.ops]
    psi = PureState(c.layout, random_vector(rng, c.layout.dim))
    assert np.allclose(run_pure(back, psi).amplitudes, run_pure(c, psi).amplitudes, atol=1e-12)
