"""Jaynes-Cummings-Hubbard chain by first-order Trotterization.

Site ``n`` pairs qubit ``n`` with qumode ``n``.  One Trotter step applies the
photon energy as phase rotations, the two-level energy as ``Rz``, photon
hopping between open-chain neighbours, and the Jaynes-Cummings coupling.
"""

from __future__ import annotations

import numpy as np

from ..engine import Circuit, run_density, run_pure
from ..gates import ladder, number
from ..hilbert import PureState, SystemLayout, basis_state, expectation
from ..noise import NoiseModel, assign_durations, circuit_duration
from .common import BenchmarkReport, Timer, feature_report

FOUR_PI = 4 * np.pi


def append_jch_step(c: Circuit, n_sites: int, omega_c: float, omega_tls: float, kappa: float, eta: float,
                    dt: float) -> None:
    modes = [n_sites + k for k in range(n_sites)]
    for q in range(n_sites):
        # exp(-i w dt |1><1|) up to a global phase
        c.append("RZ", [q], theta=-omega_tls * dt)
    for m in modes:
        c.append("R", [m], theta=-omega_c * dt)
    for m1, m2 in zip(modes[:-1], modes[1:]):
        c.append("HOP", [m1, m2], label="BS", theta=kappa * dt)
    for q, m in zip(range(n_sites), modes):
        c.append("JC", [q, m], theta=eta * dt)


def build_jch(n_sites: int = 3, omega_c: float = FOUR_PI, omega_tls: float = FOUR_PI, kappa: float = 1.0,
              eta: float = 0.5, dt: float = 0.1, steps: int = 1, cutoff: int = 8) -> Circuit:
    """``steps`` Trotter steps on ``n_sites`` qubits followed by ``n_sites`` qumodes."""
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    layout = SystemLayout(n_sites, (cutoff,) * n_sites)
    c = Circuit(layout, name="jch", metadata={
        "n_sites": n_sites, "omega_c": omega_c, "omega_tls": omega_tls, "kappa": kappa, "eta": eta,
        "dt": dt, "steps": steps, "cutoff": cutoff})
    for _ in range(steps):
        append_jch_step(c, n_sites, omega_c, omega_tls, kappa, eta, dt)
    return c


def jch_hamiltonian_terms(n_sites: int, omega_c: float, omega_tls: float, kappa: float, eta: float,
                          cutoff: int) -> list[tuple[np.ndarray, list[int]]]:
    """Local Hamiltonian terms as ``(matrix, wires)`` pairs, in the step's order."""
    n_op, a = number(cutoff), ladder(cutoff)
    excited = np.diag([0.0, 1.0]).astype(complex)
    sp = np.array([[0, 0], [1, 0]], dtype=complex)
    terms = [(omega_tls * excited, [q]) for q in range(n_sites)]
    terms += [(omega_c * n_op, [n_sites + k]) for k in range(n_sites)]
    ad = a.conj().T
    for k in range(n_sites - 1):
        terms.append((kappa * (np.kron(ad, a) + np.kron(a, ad)), [n_sites + k, n_sites + k + 1]))
    for k in range(n_sites):
        terms.append((eta * (np.kron(sp, a) + np.kron(sp.conj().T, ad)), [k, n_sites + k]))
    return terms


def initial_state(layout: SystemLayout, photons: int = 2) -> PureState:
    """All qubits in ``|0>`` and ``photons`` photons in the first site."""
    levels = [0] * layout.wire_count
    levels[layout.qubit_count] = photons
    return basis_state(layout, levels)


def occupations(state, layout: SystemLayout) -> tuple[list[float], list[float]]:
    """Mean photon number per qumode and excited population per qubit."""
    excited = np.diag([0.0, 1.0])
    photons = [float(np.real(expectation(state, number(layout.dims[w]), [w]))) for w in layout.mode_wires]
    tls = [float(np.real(expectation(state, excited, [w]))) for w in layout.qubit_wires]
    return photons, tls


def photon_traces(n_sites: int = 3, steps: int = 50, cutoff: int = 8, photons: int = 2, **params) -> dict:
    """Per-step photon and two-level occupations of the noiseless Trotter evolution."""
    step = build_jch(n_sites, steps=1, cutoff=cutoff, **params)
    state = initial_state(step.layout, photons)
    modes, tls = [], []
    for _ in range(steps + 1):
        p, e = occupations(state, step.layout)
        modes.append(p)
        tls.append(e)
        state = run_pure(step, state)
    return {"photons": np.array(modes), "tls": np.array(tls)}


def noisy_fidelity(n_sites: int = 3, steps: int = 10, cutoff: int = 4, photons: int = 2,
                   noise: NoiseModel | None = None, **params) -> tuple[float, float]:
    """Fidelity of the noisy Trotter evolution to the noiseless one, and the circuit duration."""
    noise = noise or NoiseModel(qubit_noise=False)
    circuit = assign_durations(build_jch(n_sites, steps=steps, cutoff=cutoff, **params), noise)
    start = initial_state(circuit.layout, photons)
    ideal = run_pure(circuit, start).amplitudes
    rho = run_density(circuit, start, noise).matrix
    return float(np.real(np.vdot(ideal, rho @ ideal))), circuit_duration(circuit)


def run_jch(n_sites: int = 3, omega_c: float = FOUR_PI, omega_tls: float = FOUR_PI, kappa: float = 1.0,
            eta: float = 0.5, dt: float = 0.1, steps: int = 50, cutoff: int = 8, photons: int = 2,
            noisy_steps: int = 10, noisy_cutoff: int = 4, noise: NoiseModel | None = None) -> BenchmarkReport:
    params = dict(omega_c=omega_c, omega_tls=omega_tls, kappa=kappa, eta=eta, dt=dt)
    with Timer() as t:
        traces = photon_traces(n_sites, steps, cutoff, photons, **params)
        fid = dur = None
        if noisy_steps:
            fid, dur = noisy_fidelity(n_sites, noisy_steps, noisy_cutoff, photons, noise, **params)
    total = traces["photons"].sum(axis=1)
    excitations = total + traces["tls"].sum(axis=1)
    feats, notes = feature_report("jch", build_jch(n_sites, steps=1, cutoff=cutoff, **params))
    notes.append("features are per Trotter step")
    report = BenchmarkReport(
        "jch", {"n_sites": n_sites, **params, "steps": steps, "cutoff": cutoff, "photons": photons,
                "noisy_steps": noisy_steps, "noisy_cutoff": noisy_cutoff}, feats,
        outputs={
            "photon_traces": traces["photons"].tolist(),
            "tls_traces": traces["tls"].tolist(),
            "total_photons": total.tolist(),
            "total_excitations": excitations.tolist(),
            "max_occupancy": traces["photons"].max(axis=0).tolist(),
        },
        notes=notes, runtime_s=t.elapsed,
    )
    if fid is not None:
        report.fidelities["noisy"] = fid
        report.durations["noisy_circuit"] = dur
    return report
