"""Gate matrices on truncated Fock spaces, qubits, and qubit-qumode pairs.

Every bosonic gate is the exponential of its generator built from the
*truncated* ladder operator, so it is exactly unitary on the truncated space.

Conventions (used everywhere in the package)::

    a[n-1, n] = sqrt(n)
    x = (a + a^dag) / sqrt(2),   p = -i (a - a^dag) / sqrt(2)
    D(alpha)  = exp(alpha a^dag - conj(alpha) a)      shifts <x> by sqrt(2) Re(alpha),
                                                     <p> by sqrt(2) Im(alpha)
    S(z)      = exp((conj(z) a^2 - z a^dag^2) / 2)     real z > 0 squeezes x
    R(theta)  = exp(i theta n)                         Fourier F = R(pi/2)
    BS(theta, phi) = exp(theta (e^{i phi} a b^dag - e^{-i phi} a^dag b))
    hopping(theta) = exp(-i theta (a^dag b + a b^dag))
    CD(alpha) = exp(Z (x) (alpha a^dag - conj(alpha) a))    qubit wire first
    CR(theta) = exp(-i theta/2 Z (x) n)
    JC(theta) = exp(-i theta (sp (x) a + sm (x) a^dag)),  sp = |1><0| = |e><g|
    ECD(beta) = (X (x) I) CD(beta)
    U3(theta, phi, lam) = [[cos t/2, -e^{i lam} sin t/2],
                           [e^{i phi} sin t/2, e^{i(phi+lam)} cos t/2]]
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
import scipy.linalg

UNITARITY_TOL = 1e-10


class GateKind(str, Enum):
    DISPLACEMENT = "D"
    SQUEEZE = "S"
    ROTATION = "R"
    FOURIER = "F"
    BEAMSPLITTER = "BS"
    HOPPING = "HOP"
    CD = "CD"
    CD_ASYM = "CDA"
    CD_X = "CDX"
    CD_Y = "CDY"
    CR = "CR"
    JC = "JC"
    ECD = "ECD"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    SGATE = "SG"
    SDG = "SDG"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    U3 = "U3"
    CNOT = "CNOT"
    SWAP = "SWAP"
    CUSTOM = "U"


# ---------------------------------------------------------------- operators


@lru_cache(maxsize=64)
def _ladder(n: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)
    a.setflags(write=False)
    return a


def ladder(n: int) -> np.ndarray:
    """Truncated annihilation operator on ``n`` Fock levels."""
    if n < 2:
        raise ValueError("cutoff must be >= 2")
    return _ladder(n).copy()


def number(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def position(n: int) -> np.ndarray:
    a = _ladder(n)
    return (a + a.conj().T) / np.sqrt(2)


def momentum(n: int) -> np.ndarray:
    a = _ladder(n)
    return -1j * (a - a.conj().T) / np.sqrt(2)


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
SIGMA_MINUS = SIGMA_PLUS.T.copy()
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S_GATE = np.diag([1, 1j]).astype(complex)


# ------------------------------------------------------------ exponentials


def expm_antihermitian(generator: np.ndarray) -> np.ndarray:
    """``exp(G)`` for anti-Hermitian ``G`` via the Hermitian eigenproblem of ``iG``."""
    herm = 1j * generator
    if not np.allclose(herm, herm.conj().T, atol=1e-12, rtol=0):
        raise ValueError("generator is not anti-Hermitian")
    w, v = np.linalg.eigh(0.5 * (herm + herm.conj().T))
    return (v * np.exp(-1j * w)) @ v.conj().T


def expm_pade(generator: np.ndarray) -> np.ndarray:
    """``exp(G)`` by scaling and squaring with a Pade approximant (scipy)."""
    return scipy.linalg.expm(generator)


def evolve(hamiltonian: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(-i H t)`` for Hermitian ``H``."""
    return expm_antihermitian(-1j * t * np.asarray(hamiltonian, dtype=complex))


# --------------------------------------------------------------- qumode gates


def displacement(alpha: complex, n: int) -> np.ndarray:
    a = _ladder(n)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm_antihermitian(gen)


def squeeze(z: complex, n: int) -> np.ndarray:
    a = _ladder(n)
    a2 = a @ a
    gen = 0.5 * (np.conj(z) * a2 - z * a2.conj().T)
    return expm_antihermitian(gen)


def rotation(theta: float, n: int) -> np.ndarray:
    return np.diag(np.exp(1j * theta * np.arange(n))).astype(complex)


def fourier(n: int) -> np.ndarray:
    return rotation(np.pi / 2, n)


def beamsplitter(theta: float, phi: float, n1: int, n2: int) -> np.ndarray:
    a = np.kron(_ladder(n1), np.eye(n2))
    b = np.kron(np.eye(n1), _ladder(n2))
    gen = theta * (np.exp(1j * phi) * a @ b.conj().T - np.exp(-1j * phi) * a.conj().T @ b)
    return expm_antihermitian(gen)


def hopping(theta: float, n1: int, n2: int) -> np.ndarray:
    a = np.kron(_ladder(n1), np.eye(n2))
    b = np.kron(np.eye(n1), _ladder(n2))
    h = a.conj().T @ b + a @ b.conj().T
    return evolve(h, theta)


def quadratic_phase(coeffs: tuple[float, ...], t: float, n: int, quadrature: str = "x") -> np.ndarray:
    """``exp(-i t f(q))`` with ``f(q) = sum_k coeffs[k] q**k`` on the truncated quadrature.

    The polynomial is evaluated on the truncated ``x`` (or ``p``) matrix, so
    the result is diagonal in that operator's eigenbasis.
    """
    q = position(n) if quadrature == "x" else momentum(n)
    w, v = np.linalg.eigh(q)
    f = np.polynomial.polynomial.polyval(w, np.asarray(coeffs, dtype=float))
    return (v * np.exp(-1j * t * f)) @ v.conj().T


# --------------------------------------------------------------- hybrid gates


def _controlled_blocks(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    n = top.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = top
    out[n:, n:] = bottom
    return out


def conditional_displacement(alpha: complex, n: int) -> np.ndarray:
    """Symmetric CD: ``|0><0| (x) D(alpha) + |1><1| (x) D(-alpha)``."""
    return _controlled_blocks(displacement(alpha, n), displacement(-alpha, n))


def conditional_displacement_asym(alpha: complex, beta: complex, n: int) -> np.ndarray:
    return _controlled_blocks(displacement(alpha, n), displacement(beta, n))


def _qubit_basis(axis: str) -> np.ndarray:
    # columns are the +1, -1 eigenvectors of the Pauli along ``axis``
    if axis == "z":
        return PAULI_I
    if axis == "x":
        return HADAMARD
    if axis == "y":
        return S_GATE @ HADAMARD
    raise ValueError(f"unknown axis {axis!r}")


def pauli_conditional_displacement(alpha: complex, n: int, axis: str) -> np.ndarray:
    """``exp(sigma_axis (x) (alpha a^dag - conj(alpha) a))``."""
    v = np.kron(_qubit_basis(axis), np.eye(n))
    return v @ conditional_displacement(alpha, n) @ v.conj().T


def conditional_rotation(theta: float, n: int) -> np.ndarray:
    return _controlled_blocks(rotation(-theta / 2, n), rotation(theta / 2, n))


def jaynes_cummings(theta: float, n: int) -> np.ndarray:
    a = _ladder(n)
    h = np.kron(SIGMA_PLUS, a) + np.kron(SIGMA_MINUS, a.conj().T)
    return evolve(h, theta)


def ecd(beta: complex, n: int) -> np.ndarray:
    return np.kron(PAULI_X, np.eye(n)) @ conditional_displacement(beta, n)


# ---------------------------------------------------------------- qubit gates


def rx(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * PAULI_I - 1j * np.sin(theta / 2) * PAULI_X


def ry(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * PAULI_I - 1j * np.sin(theta / 2) * PAULI_Y


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def qubit_gate(kind: GateKind | str, **params) -> np.ndarray:
    kind = GateKind(kind)
    fixed = {
        GateKind.X: PAULI_X,
        GateKind.Y: PAULI_Y,
        GateKind.Z: PAULI_Z,
        GateKind.H: HADAMARD,
        GateKind.SGATE: S_GATE,
        GateKind.SDG: S_GATE.conj().T,
        GateKind.CNOT: CNOT,
        GateKind.SWAP: SWAP,
    }
    if kind in fixed:
        return fixed[kind].copy()
    if kind is GateKind.RX:
        return rx(params["theta"])
    if kind is GateKind.RY:
        return ry(params["theta"])
    if kind is GateKind.RZ:
        return rz(params["theta"])
    if kind is GateKind.U3:
        return u3(params["theta"], params.get("phi", 0.0), params.get("lam", 0.0))
    raise ValueError(f"{kind.value} is not a qubit gate")


# ------------------------------------------------------------------ registry

# wire signature per kind: "q" qubit, "m" qumode, "*" any (custom)
SIGNATURES: dict[GateKind, str] = {
    GateKind.DISPLACEMENT: "m",
    GateKind.SQUEEZE: "m",
    GateKind.ROTATION: "m",
    GateKind.FOURIER: "m",
    GateKind.BEAMSPLITTER: "mm",
    GateKind.HOPPING: "mm",
    GateKind.CD: "qm",
    GateKind.CD_ASYM: "qm",
    GateKind.CD_X: "qm",
    GateKind.CD_Y: "qm",
    GateKind.CR: "qm",
    GateKind.JC: "qm",
    GateKind.ECD: "qm",
    GateKind.X: "q",
    GateKind.Y: "q",
    GateKind.Z: "q",
    GateKind.H: "q",
    GateKind.SGATE: "q",
    GateKind.SDG: "q",
    GateKind.RX: "q",
    GateKind.RY: "q",
    GateKind.RZ: "q",
    GateKind.U3: "q",
    GateKind.CNOT: "qq",
    GateKind.SWAP: "qq",
    GateKind.CUSTOM: "*",
}

_BUILDERS: dict[GateKind, Callable[..., np.ndarray]] = {
    GateKind.DISPLACEMENT: lambda p, d: displacement(p["alpha"], d[0]),
    GateKind.SQUEEZE: lambda p, d: squeeze(p["z"], d[0]),
    GateKind.ROTATION: lambda p, d: rotation(p["theta"].real, d[0]),
    GateKind.FOURIER: lambda p, d: fourier(d[0]),
    GateKind.BEAMSPLITTER: lambda p, d: beamsplitter(p["theta"].real, p.get("phi", 0).real, d[0], d[1]),
    GateKind.HOPPING: lambda p, d: hopping(p["theta"].real, d[0], d[1]),
    GateKind.CD: lambda p, d: conditional_displacement(p["alpha"], d[1]),
    GateKind.CD_ASYM: lambda p, d: conditional_displacement_asym(p["alpha"], p["beta"], d[1]),
    GateKind.CD_X: lambda p, d: pauli_conditional_displacement(p["alpha"], d[1], "x"),
    GateKind.CD_Y: lambda p, d: pauli_conditional_displacement(p["alpha"], d[1], "y"),
    GateKind.CR: lambda p, d: conditional_rotation(p["theta"].real, d[1]),
    GateKind.JC: lambda p, d: jaynes_cummings(p["theta"].real, d[1]),
    GateKind.ECD: lambda p, d: ecd(p["beta"], d[1]),
}


def gate_matrix(kind: GateKind | str, params: Mapping[str, complex], dims: tuple[int, ...]) -> np.ndarray:
    """Matrix of a named gate on target wires of dimensions ``dims``."""
    kind = GateKind(kind)
    if kind is GateKind.CUSTOM:
        raise ValueError("custom gates carry their own matrix")
    key = tuple(sorted((k, complex(v)) for k, v in params.items()))
    return _cached_matrix(kind, key, tuple(dims)).copy()


@lru_cache(maxsize=512)
def _cached_matrix(kind: GateKind, key: tuple, dims: tuple[int, ...]) -> np.ndarray:
    params = dict(key)
    if kind in _BUILDERS:
        mat = _BUILDERS[kind](params, dims)
    else:
        mat = qubit_gate(kind, **{k: v.real for k, v in params.items()})
    mat.setflags(write=False)
    return mat


def unitarity_error(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
