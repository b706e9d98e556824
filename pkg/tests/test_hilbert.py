from __future__ import annotations

import numpy as np
import pytest

from conftest import random_unitary, random_vector
from hyqbench.gates import conditional_displacement, HADAMARD
from hyqbench.hilbert import (
    DimensionError,
    PureState,
    SystemLayout,
    apply_unitary,
    basis_state,
    fock_state,
    partial_trace,
    product_state,
    state_fidelity,
    vacuum_state,
)
from hyqbench.oracle import embed


def test_layout_dims_qubits_first():
    layout = SystemLayout(2, (4, 3))
    assert layout.dims == (2, 2, 4, 3)
    assert layout.dim == 48
    assert layout.mode_wire(1) == 3
    assert layout.qubit_wires == [0, 1]
    assert layout.mode_wires == [2, 3]


def test_layout_rejects_bad_cutoff_and_cap():
    with pytest.raises(ValueError):
        SystemLayout(1, (1,))
    with pytest.raises(DimensionError):
        SystemLayout(4, (64,), max_dim=512)


def test_basis_state_index_is_msb_first():
    layout = SystemLayout(1, (3,))
    s = basis_state(layout, [1, 2])
    assert np.argmax(np.abs(s.amplitudes)) == 1 * 3 + 2


def test_fock_state_and_vacuum_normalised():
    layout = SystemLayout(1, (5, 4))
    assert vacuum_state(layout).norm() == pytest.approx(1.0, abs=1e-12)
    s = fock_state(layout, 1, 3)
    assert s.tensor()[0, 0, 3] == pytest.approx(1.0)


def test_strided_application_matches_dense_kronecker(rng):
    layout = SystemLayout(1, (4,))
    psi = PureState(layout, random_vector(rng, layout.dim))
    u = random_unitary(rng, 8)
    out = apply_unitary(psi, u, [0, 1])
    assert np.max(np.abs(out.amplitudes - u @ psi.amplitudes)) < 1e-12


def test_embedding_consistency_on_scattered_wires(rng):
    layout = SystemLayout(2, (3, 4))
    psi = PureState(layout, random_vector(rng, layout.dim))
    for wires in ([3, 0], [1], [2, 1, 3]):
        size = int(np.prod([layout.dims[w] for w in wires]))
        u = random_unitary(rng, size)
        out = apply_unitary(psi, u, wires)
        assert np.max(np.abs(out.amplitudes - embed(u, layout, wires) @ psi.amplitudes)) < 1e-12
        assert abs(out.norm() - 1) < 1e-10


def test_partial_trace_of_entangled_qubit_is_maximally_mixed():
    layout = SystemLayout(1, (64,))
    plus = HADAMARD @ np.array([1, 0], dtype=complex)
    psi = product_state(layout, [plus, np.eye(64)[0]])
    psi = apply_unitary(psi, conditional_displacement(4.0, 64), [0, 1])
    red = partial_trace(psi, [0]).matrix
    assert np.max(np.abs(red - np.eye(2) / 2)) < 1e-10


def test_partial_trace_of_product_is_pure(rng):
    layout = SystemLayout(1, (4,))
    psi = product_state(layout, [random_vector(rng, 2), random_vector(rng, 4)])
    red = partial_trace(psi, [1]).matrix
    assert abs(np.trace(red @ red).real - 1) < 1e-9


def test_partial_trace_mixed_preserves_trace_and_positivity(rng):
    layout = SystemLayout(2, (3,))
    vecs = [random_vector(rng, layout.dim) for _ in range(3)]
    rho = sum(w * np.outer(v, v.conj()) for w, v in zip((0.5, 0.3, 0.2), vecs))
    mixed = PureState(layout, vecs[0]).to_density()
    mixed = type(mixed)(mixed.layout, rho)
    for keep in ([0], [1, 2], [0, 2]):
        red = partial_trace(mixed, keep).matrix
        assert abs(np.trace(red) - 1) < 1e-10
        assert np.linalg.eigvalsh(red).min() > -1e-9


def test_state_fidelity_pure_and_mixed(rng):
    layout = SystemLayout(0, (6,))
    a = PureState(layout, random_vector(rng, 6))
    b = PureState(layout, random_vector(rng, 6))
    want = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    assert state_fidelity(a, b) == pytest.approx(want, abs=1e-12)
    assert state_fidelity(a.to_density(), b) == pytest.approx(want, abs=1e-9)
    assert state_fidelity(a.to_density(), b.to_density()) == pytest.approx(want, abs=1e-6)
