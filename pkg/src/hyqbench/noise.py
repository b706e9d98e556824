"""Photon-loss and qubit T1/T2 channels, gate durations, and mixed-state fidelities."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .gates import GateKind, displacement
from .hilbert import MixedState, PureState, SystemLayout, apply_operator

COMPLETENESS_TOL = 1e-6

# Per-gate time of a single- or two-qubit gate.  Calibrated once so the cat
# benchmark (alpha=2) totals 0.8 us and the GKP benchmark totals 5.6 us under
# the hybrid rule |param| / (2 pi chi); see tests/test_noise.py.
QUBIT_GATE_TIME = 75e-9


@dataclass(frozen=True)
class NoiseModel:
    kappa: float = 1000.0
    chi: float = 1e6
    t1: float = 30e-6
    t2: float = 60e-6  # the quoted 65 us exceeds 2*T1; clamped to the physical bound
    kraus_order: int | None = None
    qubit_gate_time: float = QUBIT_GATE_TIME
    qubit_noise: bool = True
    durations: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("kappa", "chi", "t1", "t2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.t2 > 2 * self.t1:
            raise ValueError("T2 cannot exceed 2*T1")
        if self.kraus_order is not None and self.kraus_order < 1:
            raise ValueError("kraus_order must be >= 1")

    def apply_idle(self, rho: np.ndarray, layout: SystemLayout, t: float) -> np.ndarray:
        """Decay every wire of ``layout`` for time ``t``."""
        dims = layout.dims
        for w in layout.mode_wires:
            rho = apply_channel(rho, dims, photon_loss_kraus(self.kappa, t, dims[w], self.kraus_order), w)
        if self.qubit_noise:
            for w in layout.qubit_wires:
                rho = apply_channel(rho, dims, qubit_decay_kraus(self.t1, self.t2, t), w)
        return rho

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "chi": self.chi,
            "t1": self.t1,
            "t2": self.t2,
            "kraus_order": self.kraus_order,
            "qubit_gate_time": self.qubit_gate_time,
            "qubit_noise": self.qubit_noise,
            "durations": dict(self.durations),
        }


# ------------------------------------------------------------------ channels


def photon_loss_kraus(kappa: float, t: float, n: int, order: int | None = None, strict: bool = False) -> list[np.ndarray]:
    """Kraus operators ``K_m = sqrt((1-e^{-kt})^m / m!) e^{-kt n/2} a^m``.

    With ``order=None`` the smallest order whose completeness defect is below
    1e-12 is used.  An explicit order that leaves a defect above 1e-6 warns,
    or raises when ``strict``.
    """
    if t < 0:
        raise ValueError("duration must be non-negative")
    return [k.copy() for k in _loss_kraus(float(kappa) * float(t), int(n), order, strict)]


@lru_cache(maxsize=256)
def _loss_kraus(kt: float, n: int, order: int | None, strict: bool) -> tuple[np.ndarray, ...]:
    if kt == 0:
        return (np.eye(n, dtype=complex),)
    gamma = -math.expm1(-kt)
    levels = np.arange(n)
    damp = np.exp(-kt * levels / 2)
    max_order = n - 1 if order is None else min(order, n - 1)
    ops = []
    total = np.zeros(n)
    for m in range(max_order + 1):
        # <k-m| K_m |k> = sqrt(C(k,m) gamma^m) e^{-kt (k-m)/2}
        k = levels[m:]
        logc = 0.5 * (gammaln(k + 1) - gammaln(m + 1) - gammaln(k - m + 1))
        amp = np.exp(logc) * gamma ** (m / 2) * damp[k - m] if m else damp.copy()
        mat = np.zeros((n, n), dtype=complex)
        if m:
            mat[k - m, k] = amp
        else:
            mat[levels, levels] = amp
        ops.append(mat)
        total[k] += np.abs(amp) ** 2
        if order is None and np.max(np.abs(total - 1)) < 1e-12:
            break
    defect = float(np.max(np.abs(total - 1)))
    if defect > COMPLETENESS_TOL:
        msg = f"photon-loss Kraus set truncated at order {max_order}: completeness defect {defect:.2e}"
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
    for op in ops:
        op.setflags(write=False)
    return tuple(ops)


def qubit_decay_kraus(t1: float, t2: float, t: float) -> list[np.ndarray]:
    """Amplitude damping towards ``|0>`` composed with the pure dephasing that makes coherences decay as ``e^{-t/T2}``."""
    if t < 0:
        raise ValueError("duration must be non-negative")
    if t2 > 2 * t1:
        raise ValueError("T2 cannot exceed 2*T1")
    gamma = -math.expm1(-t / t1)
    amp = [
        np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex),
    ]
    lam = math.exp(-t / t2 + t / (2 * t1))
    deph = [math.sqrt((1 + lam) / 2) * np.eye(2), math.sqrt((1 - lam) / 2) * np.diag([1.0, -1.0])]
    return [d @ a for d in deph for a in amp]


def kraus_completeness(kraus: Sequence[np.ndarray]) -> float:
    total = sum(k.conj().T @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def apply_channel(rho: np.ndarray, dims: Sequence[int], kraus: Sequence[np.ndarray], wire: int) -> np.ndarray:
    """``sum_m K_m rho K_m^dagger`` with every ``K_m`` acting on ``wire``."""
    if len(kraus) == 1 and np.array_equal(kraus[0], np.eye(kraus[0].shape[0])):
        return rho
    nw = len(dims)
    t = rho.reshape(tuple(dims) * 2)
    out = np.zeros_like(t)
    for k in kraus:
        s = apply_operator(t, k, dims, [wire], axis_offset=0)
        out += apply_operator(s, k.conj(), dims, [wire], axis_offset=nw)
    return out.reshape(rho.shape)


def apply_kraus_state(state: MixedState | PureState, kraus: Sequence[np.ndarray], wire: int) -> MixedState:
    if isinstance(state, PureState):
        state = state.to_density()
    return MixedState(state.layout, apply_channel(state.matrix, state.layout.dims, kraus, wire))


# ------------------------------------------------------------------ durations

_HYBRID_PARAM = {
    GateKind.CD: "alpha",
    GateKind.CD_X: "alpha",
    GateKind.CD_Y: "alpha",
    GateKind.ECD: "beta",
    GateKind.CR: "theta",
    GateKind.JC: "theta",
}
_QUMODE_PARAM = {
    GateKind.DISPLACEMENT: "alpha",
    GateKind.SQUEEZE: "z",
    GateKind.ROTATION: "theta",
    GateKind.BEAMSPLITTER: "theta",
    GateKind.HOPPING: "theta",
}


def gate_duration(op, model: NoiseModel, layout: SystemLayout | None = None) -> float:
    """Physical duration of one gate in seconds.

    Hybrid and bosonic gates take ``|parameter| / (2 pi chi)``; qubit gates
    take ``model.qubit_gate_time``; the Fourier gate is a frame change and
    takes no time.  ``model.durations`` overrides any kind by its code.
    """
    kind = op.kind
    if kind.value in model.durations:
        return float(model.durations[kind.value])
    rate = 2 * math.pi * model.chi
    if kind in _HYBRID_PARAM:
        return abs(op.params[_HYBRID_PARAM[kind]]) / rate
    if kind is GateKind.CD_ASYM:
        return max(abs(op.params["alpha"]), abs(op.params["beta"])) / rate
    if kind in _QUMODE_PARAM:
        return abs(op.params.get(_QUMODE_PARAM[kind], 0.0)) / rate
    if kind is GateKind.FOURIER:
        return 0.0
    if kind is GateKind.CUSTOM:
        if "t" in op.params:
            return abs(op.params["t"]) / rate
        if layout is not None and op.wire_class(layout) == "qubit":
            return model.qubit_gate_time
        return 0.0
    return model.qubit_gate_time


def assign_durations(circuit, model: NoiseModel):
    """Copy of ``circuit`` with every op's ``duration`` filled in from ``model``."""
    from .engine import Circuit

    ops = [replace(op, duration=gate_duration(op, model, circuit.layout)) for op in circuit.ops]
    return Circuit(circuit.layout, ops, name=circuit.name, metadata=dict(circuit.metadata))


def circuit_duration(circuit) -> float:
    return float(sum(op.duration for op in circuit.ops))


# ------------------------------------------------------------------ fidelity


def _as_matrix(state: MixedState | PureState | np.ndarray) -> np.ndarray:
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    if isinstance(state, MixedState):
        return state.matrix
    return np.asarray(state, dtype=complex)


def _psd_factor(rho: np.ndarray, tol: float) -> np.ndarray:
    """``A`` with ``rho = A A^dagger``, dropping eigenvalues at roundoff level."""
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if w.min() < -tol:
        raise ValueError(f"input is not positive semidefinite (eigenvalue {w.min():.2e})")
    keep = w > 1e-14 * max(w.max(), 1.0)
    return v[:, keep] * np.sqrt(w[keep])


def uhlmann_fidelity(rho, sigma, tol: float = 1e-8) -> float:
    """``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` as the squared trace norm of ``A^dagger B``, clamped to [0, 1]."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError("states have different dimensions")
    fa, fb = _psd_factor(a, tol), _psd_factor(b, tol)
    f = float(np.sum(np.linalg.svd(fa.conj().T @ fb, compute_uv=False)) ** 2)
    return min(max(f, 0.0), 1.0)


# ------------------------------------------------------ characteristic function


def default_beta_grid(points: int = 81, extent: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    axis = np.linspace(-extent, extent, points)
    return axis, axis.copy()


def displacement_elements(beta: np.ndarray, n: int) -> np.ndarray:
    """``<m|D(beta)|k>`` of the untruncated displacement for ``m, k < n``; shape ``(n, n, *beta.shape)``."""
    beta = np.asarray(beta, dtype=complex)
    r2 = np.abs(beta) ** 2
    out = np.empty((n, n) + beta.shape, dtype=complex)
    env = np.exp(-r2 / 2)
    for m in range(n):
        for k in range(m + 1):
            d = m - k
            pref = np.exp(0.5 * (gammaln(k + 1) - gammaln(m + 1)))
            lag = eval_genlaguerre(k, d, r2)
            out[m, k] = pref * beta**d * env * lag
            if k != m:
                out[k, m] = pref * (-np.conj(beta)) ** d * env * lag
    return out


def characteristic_function(rho, beta_re: np.ndarray | None = None, beta_im: np.ndarray | None = None,
                            check_boundary: bool = True) -> np.ndarray:
    """``chi(beta) = Tr[rho D(beta)]`` on the grid ``beta = re + i im`` (array indexed ``[re, im]``)."""
    mat = _as_matrix(rho)
    if beta_re is None or beta_im is None:
        beta_re, beta_im = default_beta_grid()
    b = beta_re[:, None] + 1j * beta_im[None, :]
    d = displacement_elements(b, mat.shape[0])
    chi = np.einsum("km,mk...->...", mat, d)
    if check_boundary:
        edge = np.concatenate([chi[0], chi[-1], chi[:, 0], chi[:, -1]])
        if np.max(np.abs(edge)) > 0.01:
            raise ValueError(f"beta grid too small: |chi| reaches {np.max(np.abs(edge)):.3f} on the boundary")
    return chi


def cf_fidelity(chi_a: np.ndarray, chi_b: np.ndarray, beta_re: np.ndarray, beta_im: np.ndarray) -> float:
    """``(1/pi) int chi_a chi_b^* d^2 beta`` by 2-D trapezoid."""
    integrand = chi_a * np.conj(chi_b)
    val = np.trapezoid(np.trapezoid(integrand, beta_im, axis=1), beta_re)
    return float(np.real(val) / np.pi)


def truncated_displacement_trace(rho, beta: complex) -> complex:
    """``Tr[rho D_N(beta)]`` with the truncated-generator displacement (for comparison)."""
    mat = _as_matrix(rho)
    return complex(np.trace(mat @ displacement(beta, mat.shape[0])))
