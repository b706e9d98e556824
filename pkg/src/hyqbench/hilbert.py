"""Register layouts, states and the tensor plumbing shared by the simulator.

Wire order is fixed for the whole package: qubits ``0 .. Q-1`` come first,
followed by qumodes ``Q .. Q+M-1``.  Amplitudes are stored in C order over
that wire list, so wire 0 is the most significant index of the flat vector
(the same ordering ``np.kron(w0, np.kron(w1, ...))`` produces).  A qubit is
``|0>`` at local index 0 and ``<0|Z|0> = +1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PURE_DIM_CAP = 2**26
DENSITY_DIM_CAP = 2**13


class DimensionError(ValueError):
    """Raised when a layout exceeds the configured dimension cap."""


@dataclass(frozen=True)
class SystemLayout:
    qubit_count: int = 0
    qumode_cutoffs: tuple[int, ...] = ()
    max_dim: int = PURE_DIM_CAP

    def __post_init__(self):
        object.__setattr__(self, "qumode_cutoffs", tuple(int(n) for n in self.qumode_cutoffs))
        if self.qubit_count < 0:
            raise ValueError("qubit_count must be non-negative")
        if any(n < 2 for n in self.qumode_cutoffs):
            raise ValueError(f"qumode cutoffs must be >= 2, got {self.qumode_cutoffs}")
        if self.dim > self.max_dim:
            raise DimensionError(
                f"layout dimension {self.dim} exceeds cap {self.max_dim} "
                f"({self.qubit_count} qubits, cutoffs {list(self.qumode_cutoffs)})"
            )

    @property
    def mode_count(self) -> int:
        return len(self.qumode_cutoffs)

    @property
    def wire_count(self) -> int:
        return self.qubit_count + self.mode_count

    @property
    def dims(self) -> tuple[int, ...]:
        return (2,) * self.qubit_count + self.qumode_cutoffs

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1

    def is_qubit(self, wire: int) -> bool:
        self.check_wires([wire])
        return wire < self.qubit_count

    def mode_wire(self, mode_index: int) -> int:
        """Wire index of qumode ``mode_index``."""
        if not 0 <= mode_index < self.mode_count:
            raise IndexError(f"mode {mode_index} out of range for {self.mode_count} qumodes")
        return self.qubit_count + mode_index

    @property
    def qubit_wires(self) -> list[int]:
        return list(range(self.qubit_count))

    @property
    def mode_wires(self) -> list[int]:
        return list(range(self.qubit_count, self.wire_count))

    def check_wires(self, wires: Sequence[int]) -> None:
        if len(set(wires)) != len(wires):
            raise ValueError(f"duplicate wires in {list(wires)}")
        for w in wires:
            if not 0 <= w < self.wire_count:
                raise IndexError(f"wire {w} out of range for {self.wire_count} wires")

    def sublayout(self, wires: Sequence[int]) -> "SystemLayout":
        """Layout of the given wires, which must be in canonical order."""
        self.check_wires(wires)
        if list(wires) != sorted(wires):
            raise ValueError("sublayout wires must be ascending")
        q = sum(1 for w in wires if w < self.qubit_count)
        cut = tuple(self.dims[w] for w in wires if w >= self.qubit_count)
        return SystemLayout(q, cut, max_dim=self.max_dim)

    def with_cap(self, max_dim: int) -> "SystemLayout":
        return SystemLayout(self.qubit_count, self.qumode_cutoffs, max_dim=max_dim)

    def to_dict(self) -> dict:
        return {"qubits": self.qubit_count, "cutoffs": list(self.qumode_cutoffs)}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemLayout":
        return cls(int(data["qubits"]), tuple(data["cutoffs"]))


@dataclass
class PureState:
    layout: SystemLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != self.layout.dim:
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.size}, layout needs {self.layout.dim}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def copy(self) -> "PureState":
        return PureState(self.layout, self.amplitudes.copy())

    def to_density(self) -> "MixedState":
        layout = self.layout.with_cap(max(self.layout.max_dim, DENSITY_DIM_CAP))
        check_density_dim(layout)
        psi = self.amplitudes
        return MixedState(layout, np.outer(psi, psi.conj()))


@dataclass
class MixedState:
    layout: SystemLayout
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = self.layout.dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"density matrix shape {self.matrix.shape} does not match dim {d}")

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def copy(self) -> "MixedState":
        return MixedState(self.layout, self.matrix.copy())

    def validate(self, atol: float = 1e-9) -> None:
        """Check Hermiticity, unit trace and positivity."""
        rho = self.matrix
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 10 * atol:
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace() - 1.0) > atol:
            raise ValueError(f"density matrix trace {self.trace()} != 1")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -atol:
            raise ValueError("density matrix has negative eigenvalues")


def check_density_dim(layout: SystemLayout, cap: int = DENSITY_DIM_CAP) -> None:
    if layout.dim > cap:
        raise DimensionError(
            f"density matrix of dimension {layout.dim} exceeds the density cap {cap} per side"
        )


def vacuum_state(layout: SystemLayout) -> PureState:
    amps = np.zeros(layout.dim, dtype=complex)
    amps[0] = 1.0
    return PureState(layout, amps)


def basis_state(layout: SystemLayout, levels: Sequence[int]) -> PureState:
    """Product basis state with ``levels[w]`` on wire ``w``."""
    if len(levels) != layout.wire_count:
        raise ValueError(f"need {layout.wire_count} levels, got {len(levels)}")
    for w, (lvl, d) in enumerate(zip(levels, layout.dims)):
        if not 0 <= lvl < d:
            raise ValueError(f"level {lvl} on wire {w} outside dimension {d}")
    amps = np.zeros(layout.dim, dtype=complex)
    amps[np.ravel_multi_index(tuple(levels), layout.dims)] = 1.0
    return PureState(layout, amps)


def fock_state(layout: SystemLayout, mode_index: int, n: int) -> PureState:
    wire = layout.mode_wire(mode_index)
    if not 0 <= n < layout.dims[wire]:
        raise ValueError(f"Fock level {n} not below cutoff {layout.dims[wire]}")
    levels = [0] * layout.wire_count
    levels[wire] = n
    return basis_state(layout, levels)


def product_state(layout: SystemLayout, local_vectors: Sequence[np.ndarray]) -> PureState:
    """Tensor product of one normalised vector per wire, in wire order."""
    if len(local_vectors) != layout.wire_count:
        raise ValueError(f"need {layout.wire_count} local vectors, got {len(local_vectors)}")
    amps = np.ones(1, dtype=complex)
    for v, d in zip(local_vectors, layout.dims):
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != d:
            raise ValueError(f"local vector of size {v.size} on a wire of dimension {d}")
        amps = np.kron(amps, v / np.linalg.norm(v))
    return PureState(layout, amps)


def _target_dims(dims: Sequence[int], wires: Sequence[int]) -> tuple[int, ...]:
    return tuple(dims[w] for w in wires)


def apply_operator(
    tensor: np.ndarray, matrix: np.ndarray, dims: Sequence[int], wires: Sequence[int], axis_offset: int = 0
) -> np.ndarray:
    """Contract ``matrix`` into the ``wires`` axes of a state tensor.

    ``tensor`` has shape ``(*prefix, *dims, *suffix)`` where the wire axes
    start at ``axis_offset``.  The full Kronecker product is never formed.
    """
    tdims = _target_dims(dims, wires)
    k = len(wires)
    size = int(np.prod(tdims))
    if matrix.shape != (size, size):
        raise ValueError(f"operator shape {matrix.shape} does not match target dims {tdims}")
    op = matrix.reshape(tdims + tdims)
    axes = [axis_offset + w for w in wires]
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def embed_operator(local_matrix: np.ndarray, layout: SystemLayout, target_wires: Sequence[int]):
    """Return a callable applying ``local_matrix`` on ``target_wires`` to a state vector."""
    layout.check_wires(target_wires)
    size = int(np.prod(_target_dims(layout.dims, target_wires)))
    if np.shape(local_matrix) != (size, size):
        raise ValueError(
            f"local operator shape {np.shape(local_matrix)} does not match wires {list(target_wires)}"
        )

    def action(vector: np.ndarray) -> np.ndarray:
        t = np.asarray(vector).reshape(layout.dims)
        return apply_operator(t, local_matrix, layout.dims, target_wires).reshape(-1)

    return action


def apply_unitary(state: PureState, matrix: np.ndarray, wires: Sequence[int]) -> PureState:
    out = apply_operator(state.tensor(), matrix, state.layout.dims, wires)
    return PureState(state.layout, out.reshape(-1))


def conjugate_density(state: MixedState, matrix: np.ndarray, wires: Sequence[int]) -> MixedState:
    """Return ``U rho U^dagger`` with ``U`` acting on ``wires``."""
    return MixedState(state.layout, conjugate_matrix(state.matrix, state.layout.dims, matrix, wires))


def conjugate_matrix(rho: np.ndarray, dims: Sequence[int], matrix: np.ndarray, wires: Sequence[int]) -> np.ndarray:
    n = len(dims)
    t = rho.reshape(tuple(dims) * 2)
    t = apply_operator(t, matrix, dims, wires, axis_offset=0)
    t = apply_operator(t, matrix.conj(), dims, wires, axis_offset=n)
    d = rho.shape[0]
    return t.reshape(d, d)


def partial_trace(state: PureState | MixedState, keep_wires: Sequence[int]) -> MixedState:
    """Reduced density matrix on ``keep_wires`` (returned in ascending wire order)."""
    layout = state.layout
    keep = sorted(keep_wires)
    if not keep:
        raise ValueError("keep_wires must be non-empty")
    layout.check_wires(keep)
    dims = layout.dims
    rest = [w for w in range(layout.wire_count) if w not in keep]
    dk = int(np.prod([dims[w] for w in keep]))
    sub = layout.sublayout(keep).with_cap(max(layout.max_dim, DENSITY_DIM_CAP))
    if isinstance(state, PureState):
        t = np.transpose(state.tensor(), keep + rest).reshape(dk, -1)
        return MixedState(sub, t @ t.conj().T)
    n = len(dims)
    t = state.matrix.reshape(dims * 2)
    perm = keep + rest + [n + w for w in keep] + [n + w for w in rest]
    dr = layout.dim // dk
    t = np.transpose(t, perm).reshape(dk, dr, dk, dr)
    return MixedState(sub, np.einsum("arbr->ab", t))


def overlap_fidelity(a: PureState, b: PureState) -> float:
    if a.layout.dims != b.layout.dims:
        raise ValueError("states have different layouts")
    f = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(max(f, 0.0), 1.0))


def state_fidelity(a: PureState | MixedState, b: PureState | MixedState) -> float:
    """Fidelity when at least one argument is pure; mixed-mixed goes through Uhlmann."""
    if a.layout.dims != b.layout.dims:
        raise ValueError("states have different layouts")
    if isinstance(a, PureState) and isinstance(b, PureState):
        return overlap_fidelity(a, b)
    if isinstance(a, MixedState) and isinstance(b, PureState):
        a, b = b, a
    if isinstance(a, PureState):
        psi = a.amplitudes
        f = float(np.real(np.vdot(psi, b.matrix @ psi)))
        return min(max(f, 0.0), 1.0)
    from .noise import uhlmann_fidelity

    return uhlmann_fidelity(a, b)


def expectation(state: PureState | MixedState, matrix: np.ndarray, wires: Sequence[int]) -> complex:
    """``<O>`` for a local operator ``O`` on ``wires``."""
    if isinstance(state, PureState):
        out = apply_operator(state.tensor(), matrix, state.layout.dims, wires).reshape(-1)
        return complex(np.vdot(state.amplitudes, out))
    red = partial_trace(state, sorted(wires))
    order = sorted(wires)
    if list(wires) != order:
        raise ValueError("expectation on mixed states needs ascending wires")
    return complex(np.trace(red.matrix @ matrix))
