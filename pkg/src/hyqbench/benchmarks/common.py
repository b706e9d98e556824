"""Shared pieces of the benchmark drivers: reports, reference states, optimizers."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from ..engine import Circuit, circuit_features, hermite_functions

# Structural rows of the reference feature table, keyed by benchmark name.
REFERENCE_FEATURES: dict[str, dict[str, int]] = {
    "state_transfer": dict(qubits=4, qumodes=1, qubit_gates=9, qumode_gates=0, hybrid_gates=8, depth=12),
    "cat": dict(qubits=1, qumodes=1, qubit_gates=6, qumode_gates=0, hybrid_gates=2, depth=8),
    "gkp": dict(qubits=1, qumodes=1, qubit_gates=48, qumode_gates=1, hybrid_gates=16, depth=64),
    "qft": dict(qubits=5, qumodes=1, qubit_gates=23, qumode_gates=3, hybrid_gates=20, depth=29),
    "vqe": dict(qubits=1, qumodes=2, qubit_gates=10, qumode_gates=0, hybrid_gates=10, depth=20),
    "qaoa": dict(qubits=0, qumodes=1, qubit_gates=0, qumode_gates=11, hybrid_gates=0, depth=11),
    "jch": dict(qubits=3, qumodes=3, qubit_gates=3, qumode_gates=5, hybrid_gates=3, depth=4),
    "shor": dict(qubits=1, qumodes=3, qubit_gates=128, qumode_gates=32, hybrid_gates=80, depth=209),
}

# Normalised CV-DV metrics of the reference table (energy, negativity, truncation).
REFERENCE_METRICS: dict[str, tuple[float, float, float]] = {
    "state_transfer": (0.12, 0.14, 0.24),
    "cat": (0.15, 0.09, 0.19),
    "gkp": (0.23, 0.30, 0.90),
    "qft": (0.19, 0.19, 0.58),
    "vqe": (0.09, 0.13, 1.00),
    "qaoa": (0.28, 1.00, 0.26),
    "jch": (0.08, 0.05, 0.00),
    "shor": (1.00, 0.59, 0.06),
}

# Reference noisy fidelities and circuit durations (seconds).
REFERENCE_NOISY: dict[str, tuple[float, float]] = {
    "state_transfer": (0.99, 4.7e-6),
    "cat": (0.99, 0.8e-6),
    "gkp": (0.97, 5.6e-6),
    "qft": (0.99, 9.4e-6),
    "vqe": (0.91, 5.2e-6),
    "jch": (0.92, 20.6e-6),
}


@dataclass
class BenchmarkReport:
    name: str
    spec: dict[str, Any]
    features: dict[str, int]
    fidelities: dict[str, float] = field(default_factory=dict)
    outputs: dict[str, Any] = field(default_factory=dict)
    durations: dict[str, float] = field(default_factory=dict)
    cvdv_raw: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    runtime_s: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return _plain(asdict(self))


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(np.real(value)), float(np.imag(value))]
    return value


def feature_report(name: str, circuit: Circuit) -> tuple[dict[str, int], list[str]]:
    """Structural features of ``circuit`` and notes on any mismatch with the reference row."""
    feats = circuit_features(circuit)
    ref = REFERENCE_FEATURES.get(name)
    notes = []
    if ref is not None:
        for key, want in ref.items():
            if feats[key] != want:
                notes.append(f"{key}: built {feats[key]}, reference {want}")
    note = circuit.metadata.get("depth_note")
    if note:
        notes.append(note)
    return feats, notes


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# ------------------------------------------------------------ reference states


def coherent_vector(alpha: complex, n: int) -> np.ndarray:
    k = np.arange(n)
    logmag = -0.5 * abs(alpha) ** 2 - 0.5 * gammaln(k + 1)
    if alpha == 0:
        out = np.zeros(n, dtype=complex)
        out[0] = 1.0
        return out
    return np.exp(logmag + k * np.log(abs(alpha))) * np.exp(1j * k * np.angle(alpha))


def even_cat_vector(alpha: complex, n: int) -> np.ndarray:
    v = coherent_vector(alpha, n) + coherent_vector(-alpha, n)
    return v / np.linalg.norm(v)


def wavefunction_to_fock(psi: np.ndarray, x: np.ndarray, n: int) -> np.ndarray:
    """Project a sampled position wavefunction onto the first ``n`` Fock states."""
    dx = x[1] - x[0]
    coeffs = hermite_functions(n, x) @ psi * dx
    return coeffs / np.linalg.norm(coeffs)


def gkp_vector(r: float, n: int, logical: int = 0, teeth: int = 20, spacing: float = 2 * math.sqrt(math.pi)) -> np.ndarray:
    """Finite-energy GKP codeword on ``n`` Fock levels.

    Peaks of width ``e^{-r}`` sit at ``(k + logical/2) * spacing`` under a
    Gaussian envelope of width ``1 / e^{-r}``, so peak and envelope
    squeezing are both set by the single parameter ``r``.
    """
    delta = math.exp(-r)
    half = math.sqrt(2 * n) + 8
    x = np.linspace(-half, half, 8001)
    psi = np.zeros_like(x)
    for k in range(-teeth, teeth + 1):
        c = (k + 0.5 * logical) * spacing
        psi += np.exp(-0.5 * delta**2 * c**2) * np.exp(-((x - c) ** 2) / (2 * delta**2))
    return wavefunction_to_fock(psi, x, n)


# ------------------------------------------------------------------ optimizer


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    initial_fun: float
    restarts: list[dict[str, Any]]
    best_restart: int
    evaluations: int


def optimize_restarts(
    objective: Callable[[np.ndarray], float],
    dim: int,
    seed: int,
    restarts: int = 5,
    init_scale: float = 0.5,
    method: str = "BFGS",
    maxiter: int = 400,
    x0: np.ndarray | None = None,
    warmups: Sequence[Callable[[np.ndarray], float]] = (),
) -> OptimizeResult:
    """Best-of-``restarts`` local minimisation with seeded starting points.

    Restart ``i`` draws its start from ``default_rng((seed, i))`` unless ``x0``
    is given for restart 0.  BFGS uses finite-difference gradients; a run
    that fails to improve on its start falls back to Nelder-Mead.  The
    returned objective is never worse than the best starting objective.
    Each start is first carried through the ``warmups`` objectives in order
    (a continuation path) before the final minimisation of ``objective``.
    """
    count = [0]

    def f(v):
        count[0] += 1
        return float(objective(v))

    runs = []
    best = None
    first_fun = None
    for i in range(restarts):
        rng = np.random.default_rng((seed, i))
        start = np.asarray(x0, float) if (i == 0 and x0 is not None) else rng.normal(0, init_scale, dim)
        f0 = f(start)
        if first_fun is None:
            first_fun = f0
        x = start
        for g in warmups:
            x = minimize(g, x, method=method, options={"maxiter": maxiter}).x
        res = minimize(f, x, method=method, options={"maxiter": maxiter})
        xb, fb, used = res.x, float(res.fun), method
        if not np.isfinite(fb) or fb > f0 - 1e-12:
            res2 = minimize(f, start, method="Nelder-Mead", options={"maxiter": 20 * maxiter})
            if res2.fun < fb:
                xb, fb, used = res2.x, float(res2.fun), "Nelder-Mead"
        if fb > f0:
            xb, fb = start, f0
        runs.append({"restart": i, "start_objective": f0, "objective": fb, "method": used,
                     "iterations": int(getattr(res, "nit", 0))})
        if best is None or fb < best[1]:
            best = (np.array(xb), fb, i)
    return OptimizeResult(best[0], best[1], first_fun, runs, best[2], count[0])


def coprime_choices(n: int) -> list[int]:
    return [a for a in range(2, n - 1) if math.gcd(a, n) == 1]


def sequence_stats(values: Sequence[float]) -> dict[str, float]:
    arr = np.asarray(values, dtype=float)
    return {"min": float(arr.min()), "max": float(arr.max()), "mean": float(arr.mean())}
