from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_vector
from hyqbench.benchmarks.common import coherent_vector
from hyqbench.benchmarks.states import build_cat, build_gkp, rounds_for
from hyqbench.engine import Circuit, run_density
from hyqbench.gates import number
from hyqbench.hilbert import SystemLayout, vacuum_state
from hyqbench.noise import (
    NoiseModel,
    apply_channel,
    assign_durations,
    cf_fidelity,
    characteristic_function,
    circuit_duration,
    default_beta_grid,
    kraus_completeness,
    photon_loss_kraus,
    qubit_decay_kraus,
    uhlmann_fidelity,
)


def test_photon_loss_completeness():
    for n in (4, 16, 32):
        for kt in (0.001, 0.1, 1.0):
            assert kraus_completeness(photon_loss_kraus(kt, 1.0, n, order=n - 1)) < 1e-9


def test_photon_loss_maps_coherent_to_coherent():
    n, kt = 64, 0.1
    v = coherent_vector(1.0, n)
    rho = apply_channel(np.outer(v, v.conj()), (n,), photon_loss_kraus(kt, 1.0, n), 0)
    w = coherent_vector(math.exp(-kt / 2), n)
    assert np.vdot(w, rho @ w).real >= 1 - 1e-6
    assert np.trace(number(n) @ rho).real == pytest.approx(math.exp(-kt), abs=1e-6)


def test_explicit_low_order_warns_or_raises():
    with pytest.warns(RuntimeWarning):
        photon_loss_kraus(1.0, 1.0, 8, order=1)
    with pytest.raises(ValueError):
        photon_loss_kraus(1.0, 1.0, 8, order=1, strict=True)


def test_qubit_decay_definitions():
    t1, t2 = 30e-6, 50e-6
    kraus = qubit_decay_kraus(t1, t2, t1)
    assert kraus_completeness(kraus) < 1e-10
    rho = apply_channel(np.diag([0, 1]).astype(complex), (2,), kraus, 0)
    assert rho[1, 1].real == pytest.approx(math.exp(-1), abs=1e-9)
    plus = np.full((2, 2), 0.5, dtype=complex)
    rho = apply_channel(plus, (2,), qubit_decay_kraus(t1, t2, t2), 0)
    assert abs(rho[0, 1]) == pytest.approx(0.5 * math.exp(-1), abs=1e-9)


def test_model_rejects_unphysical_t2():
    with pytest.raises(ValueError):
        NoiseModel(t1=30e-6, t2=65e-6)


def test_uhlmann_reduces_to_overlap(rng):
    a, b = random_vector(rng, 5), random_vector(rng, 5)
    want = abs(np.vdot(a, b)) ** 2
    assert uhlmann_fidelity(np.outer(a, a.conj()), np.outer(b, b.conj())) == pytest.approx(want, abs=1e-9)


def test_uhlmann_rejects_non_psd():
    with pytest.raises(ValueError):
        uhlmann_fidelity(np.diag([1.2, -0.2]), np.eye(2) / 2)


def test_cf_fidelity_vacuum():
    re, im = default_beta_grid()
    vac = np.zeros((8, 8))
    vac[0, 0] = 1
    chi = characteristic_function(vac, re, im)
    assert cf_fidelity(chi, chi, re, im) == pytest.approx(1.0, abs=1e-3)


def test_cf_fidelity_matches_uhlmann(rng):
    re, im = default_beta_grid(121, 6.0)
    for _ in range(4):
        a, b = random_vector(rng, 6), random_vector(rng, 6)
        ra, rb = np.outer(a, a.conj()), np.outer(b, b.conj())
        f = cf_fidelity(characteristic_function(ra, re, im), characteristic_function(rb, re, im), re, im)
        assert f == pytest.approx(uhlmann_fidelity(ra, rb), abs=1e-3)


def test_duration_calibration():
    model = NoiseModel(qubit_noise=False)
    assert circuit_duration(assign_durations(build_cat(2.0), model)) == pytest.approx(0.8e-6, abs=0.05e-6)
    assert circuit_duration(assign_durations(build_gkp(rounds_for(9)), model)) == pytest.approx(5.6e-6, abs=0.1e-6)


def test_noisy_run_preserves_trace():
    c = Circuit(SystemLayout(1, (8,)))
    for _ in range(50):
        c.append("H", [0])
        c.append("CD", [0, 1], alpha=0.3)
    c = assign_durations(c, NoiseModel(kappa=1e5))
    rho = run_density(c, vacuum_state(c.layout), NoiseModel(kappa=1e5)).matrix
    assert abs(np.trace(rho) - 1) < 1e-8
    assert np.linalg.eigvalsh(rho).min() > -1e-9
