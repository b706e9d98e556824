"""Dense reference backend: full-space unitaries by Kronecker products.

Each gate is embedded as ``kron(U, I)`` over its target wires followed by
the rest, then the basis is permuted back to the natural wire order.  This
path shares nothing with the engine's strided tensor contraction, so
agreement between the two is a meaningful check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import Circuit
from .hilbert import PureState, SystemLayout

DENSE_DIM_CAP = 2**12
UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class DenseUnitary:
    layout: SystemLayout
    matrix: np.ndarray

    def apply(self, state: PureState) -> PureState:
        return PureState(self.layout, self.matrix @ state.amplitudes)

    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def _check_dim(layout: SystemLayout, cap: int) -> None:
    if layout.dim > cap:
        raise ValueError(f"dense oracle limited to dimension {cap}, layout has {layout.dim}")


def _permutation(dims: Sequence[int], wires: Sequence[int]) -> np.ndarray:
    """``perm[i]`` = index in the (wires, rest) ordering of natural basis index ``i``."""
    rest = [w for w in range(len(dims)) if w not in wires]
    order = list(wires) + rest
    digits = np.unravel_index(np.arange(int(np.prod(dims))), dims)
    return np.ravel_multi_index([digits[w] for w in order], [dims[w] for w in order])


def embed(local: np.ndarray, layout: SystemLayout, wires: Sequence[int]) -> np.ndarray:
    """Full-space matrix of ``local`` acting on ``wires`` (in the given order)."""
    dims = layout.dims
    rest = int(np.prod([dims[w] for w in range(len(dims)) if w not in wires]))
    big = np.kron(np.asarray(local, dtype=complex), np.eye(rest))
    perm = _permutation(dims, wires)
    return big[np.ix_(perm, perm)]


def dense_circuit_unitary(circuit: Circuit, cap: int = DENSE_DIM_CAP) -> DenseUnitary:
    """Ordered product of embedded gate matrices."""
    layout = circuit.layout
    _check_dim(layout, cap)
    u = np.eye(layout.dim, dtype=complex)
    for op in circuit.ops:
        op.validate(layout)
        u = embed(op.unitary(layout), layout, op.targets) @ u
    out = DenseUnitary(layout, u)
    err = out.unitarity_error()
    if err > UNITARITY_TOL:
        raise ArithmeticError(f"dense circuit unitary deviates from unitarity by {err:.2e}")
    return out


def dense_hamiltonian(terms: Sequence[tuple[np.ndarray, Sequence[int]]], layout: SystemLayout) -> np.ndarray:
    _check_dim(layout, DENSE_DIM_CAP)
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    for local, wires in terms:
        h += embed(local, layout, wires)
    return h


def dense_hamiltonian_exp(terms: Sequence[tuple[np.ndarray, Sequence[int]]], layout: SystemLayout,
                          t: float) -> DenseUnitary:
    """``exp(-i H t)`` of the summed local terms by Hermitian eigendecomposition."""
    h = dense_hamiltonian(terms, layout)
    if not np.allclose(h, h.conj().T, atol=1e-10):
        raise ValueError("Hamiltonian is not Hermitian")
    w, v = np.linalg.eigh(h)
    out = DenseUnitary(layout, (v * np.exp(-1j * w * t)) @ v.conj().T)
    err = out.unitarity_error()
    if err > UNITARITY_TOL:
        raise ArithmeticError(f"exponential deviates from unitarity by {err:.2e}")
    return out
