from __future__ import annotations

import numpy as np
import pytest

from hyqbench.benchmarks.common import even_cat_vector
from hyqbench.benchmarks.jch import build_jch, initial_state, jch_hamiltonian_terms
from hyqbench.benchmarks.qaoa import build_cv_qaoa, shifted_square
from hyqbench.benchmarks.qft import build_qft
from hyqbench.benchmarks.shor import build_shor
from hyqbench.benchmarks.states import build_cat, build_gkp, rounds_for
from hyqbench.benchmarks.suite import _qft_start
from hyqbench.benchmarks.transfer import build_state_transfer, mode_input
from hyqbench.benchmarks.vqe import PARAMS_PER_LAYER, build_vqe_ansatz
from hyqbench.engine import Circuit, run_pure
from hyqbench.gates import conditional_displacement
from hyqbench.hilbert import SystemLayout, vacuum_state
from hyqbench.oracle import dense_circuit_unitary, dense_hamiltonian_exp


def _reduced_benchmarks():
    rng = np.random.default_rng(5)
    st = build_state_transfer(4, 0.39, "cv_to_dv", 64)
    qft = build_qft(cutoff=16)
    vqe = build_vqe_ansatz(rng.normal(size=5 * PARAMS_PER_LAYER), 5, (8, 8))
    qaoa = build_cv_qaoa(shifted_square(3.0), 0.3 * rng.normal(size=10), 5, 32, -0.5, allow_custom=True)
    jch = build_jch(3, steps=2, cutoff=4)
    shor = build_shor(2, 9, 2, cutoffs=(4, 4, 16), rounds=2)
    return {
        "state_transfer": (st, mode_input(st.layout, even_cat_vector(1.25, 64))),
        "cat": (build_cat(2.0, 16), None),
        "gkp": (build_gkp(rounds_for(9), 0.222, 32), None),
        "qft": (qft, _qft_start(qft, "00")),
        "vqe": (vqe, None),
        "qaoa": (qaoa, None),
        "jch": (jch, initial_state(jch.layout, 2)),
        "shor": (shor, None),
    }


@pytest.mark.parametrize("name", ["state_transfer", "cat", "gkp", "qft", "vqe", "qaoa", "jch", "shor"])
def test_engine_matches_dense_oracle(name):
    circuit, start = _reduced_benchmarks()[name]
    assert circuit.layout.dim <= 2**10
    start = start or vacuum_state(circuit.layout)
    out = run_pure(circuit, start).amplitudes
    ref = dense_circuit_unitary(circuit).apply(start).amplitudes
    assert abs(np.vdot(out, ref)) ** 2 >= 1 - 1e-9


def test_single_conditional_displacement():
    c = Circuit(SystemLayout(1, (8,)))
    c.append("CD", [0, 1], alpha=0.3 + 0.1j)
    assert np.max(np.abs(dense_circuit_unitary(c).matrix - conditional_displacement(0.3 + 0.1j, 8))) < 1e-12


def test_cat_dense_versus_engine():
    c = build_cat(2.0, 16)
    start = vacuum_state(c.layout)
    out = run_pure(c, start).amplitudes
    ref = dense_circuit_unitary(c).apply(start).amplitudes
    assert abs(np.vdot(out, ref)) ** 2 >= 1 - 1e-10


def _trotter_vs_exact(n_sites: int, cutoff: int, dt: float, t: float, **params) -> float:
    steps = int(round(t / dt))
    c = build_jch(n_sites, dt=dt, steps=steps, cutoff=cutoff, **params)
    start = initial_state(c.layout, 1)
    full = dict(omega_c=4 * np.pi, omega_tls=4 * np.pi, kappa=1.0, eta=0.5)
    full.update(params)
    exact = dense_hamiltonian_exp(jch_hamiltonian_terms(n_sites, cutoff=cutoff, **full), c.layout, t)
    return abs(np.vdot(run_pure(c, start).amplitudes, exact.apply(start).amplitudes)) ** 2


def test_trotter_matches_exact_two_sites():
    assert _trotter_vs_exact(2, 4, 0.01, 0.5) >= 0.999


def test_trotter_exact_for_commuting_terms():
    assert _trotter_vs_exact(2, 4, 0.1, 0.5, kappa=0.0, eta=0.0) == pytest.approx(1.0, abs=1e-12)


def test_tiny_step_is_near_identity():
    c = build_jch(2, dt=1e-4, steps=1, cutoff=4)
    start = initial_state(c.layout, 1)
    assert abs(np.vdot(start.amplitudes, run_pure(c, start).amplitudes)) ** 2 >= 1 - 1e-4


def test_oracle_dimension_cap():
    with pytest.raises(ValueError):
        dense_circuit_unitary(build_cat(2.0, 4096))
