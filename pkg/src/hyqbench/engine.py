"""Circuit representation, pure/density execution, measurement and structure features."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import gates
from .gates import GateKind
from .hilbert import (
    MixedState,
    PureState,
    SystemLayout,
    apply_operator,
    check_density_dim,
    conjugate_matrix,
    partial_trace,
)

NORM_TOL = 1e-10

TraceHook = Callable[[int, "PureState | MixedState"], None]


@dataclass
class GateOp:
    kind: GateKind
    targets: tuple[int, ...]
    params: dict[str, complex] = field(default_factory=dict)
    duration: float = 0.0
    label: str = ""
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.kind = GateKind(self.kind)
        self.targets = tuple(int(t) for t in self.targets)
        self.params = {k: complex(v) for k, v in self.params.items()}
        if self.kind is GateKind.CUSTOM and self.matrix is None:
            raise ValueError("custom gate needs a matrix")

    def validate(self, layout: SystemLayout) -> None:
        layout.check_wires(self.targets)
        sig = gates.SIGNATURES[self.kind]
        if sig == "*":
            size = int(np.prod([layout.dims[w] for w in self.targets]))
            if self.matrix.shape != (size, size):
                raise ValueError(f"custom gate {self.label!r}: matrix {self.matrix.shape} vs wires {self.targets}")
            return
        if len(sig) != len(self.targets):
            raise ValueError(f"{self.kind.value} expects {len(sig)} targets, got {self.targets}")
        for s, w in zip(sig, self.targets):
            if (s == "q") != layout.is_qubit(w):
                kind = "qubit" if s == "q" else "qumode"
                raise ValueError(f"{self.kind.value} target {w} must be a {kind}")

    def unitary(self, layout: SystemLayout) -> np.ndarray:
        if self.kind is GateKind.CUSTOM:
            return self.matrix
        return gates.gate_matrix(self.kind, self.params, tuple(layout.dims[w] for w in self.targets))

    def wire_class(self, layout: SystemLayout) -> str:
        kinds = {layout.is_qubit(w) for w in self.targets}
        if kinds == {True}:
            return "qubit"
        if kinds == {False}:
            return "qumode"
        return "hybrid"


@dataclass
class Circuit:
    layout: SystemLayout
    ops: list[GateOp] = field(default_factory=list)
    name: str = ""
    metadata: dict[str, Any] = field(default_factory=dict)

    def append(self, kind: GateKind | str, targets: Sequence[int], label: str = "", **params) -> GateOp:
        op = GateOp(GateKind(kind), tuple(targets), params, label=label)
        op.validate(self.layout)
        self.ops.append(op)
        return op

    def custom(self, matrix: np.ndarray, targets: Sequence[int], label: str = "", **params) -> GateOp:
        op = GateOp(GateKind.CUSTOM, tuple(targets), params, label=label, matrix=np.asarray(matrix, dtype=complex))
        op.validate(self.layout)
        self.ops.append(op)
        return op

    def extend(self, other: "Circuit") -> "Circuit":
        if other.layout.dims != self.layout.dims:
            raise ValueError("cannot extend with a circuit on a different layout")
        self.ops.extend(replace(op) for op in other.ops)
        return self

    def validate(self) -> None:
        for op in self.ops:
            op.validate(self.layout)

    def __len__(self) -> int:
        return len(self.ops)


# ----------------------------------------------------------------- execution


def run_pure(circuit: Circuit, initial: PureState, hook: TraceHook | None = None) -> PureState:
    layout = circuit.layout
    if initial.layout.dims != layout.dims:
        raise ValueError("initial state layout does not match the circuit")
    psi = initial.amplitudes.reshape(layout.dims).copy()
    for i, op in enumerate(circuit.ops):
        op.validate(layout)
        psi = apply_operator(psi, op.unitary(layout), layout.dims, op.targets)
        if hook is not None:
            view = psi.reshape(-1).view()
            view.setflags(write=False)
            hook(i, PureState(layout, view))
    out = PureState(layout, psi.reshape(-1))
    drift = abs(out.norm() - 1.0)
    if drift > NORM_TOL * max(1, len(circuit.ops)):
        raise RuntimeError(f"norm drifted by {drift:.2e} in circuit {circuit.name!r}")
    return out


def run_density(
    circuit: Circuit,
    initial: MixedState | PureState,
    noise=None,
    hook: TraceHook | None = None,
) -> MixedState:
    """Evolve a density matrix, applying the noise channel after every gate.

    Each gate's ``duration`` (see :func:`hyqbench.noise.assign_durations`)
    drives photon loss on every qumode and T1/T2 decay on every qubit,
    touched or idle.  Without ``noise`` or with zero durations the run is
    purely unitary.
    """
    layout = circuit.layout
    if isinstance(initial, PureState):
        check_density_dim(layout)
        psi = initial.amplitudes
        rho = np.outer(psi, psi.conj())
    else:
        rho = initial.matrix.copy()
    check_density_dim(layout)
    if rho.shape[0] != layout.dim:
        raise ValueError("initial state layout does not match the circuit")
    for i, op in enumerate(circuit.ops):
        op.validate(layout)
        rho = conjugate_matrix(rho, layout.dims, op.unitary(layout), op.targets)
        if noise is not None and op.duration > 0:
            rho = noise.apply_idle(rho, layout, op.duration)
        if hook is not None:
            view = rho.view()
            view.setflags(write=False)
            hook(i, MixedState(layout.with_cap(max(layout.max_dim, layout.dim)), view))
    return MixedState(layout.with_cap(max(layout.max_dim, layout.dim)), rho)


# --------------------------------------------------------------- measurement


def qubit_probabilities(state: PureState | MixedState) -> np.ndarray:
    """Joint distribution of all qubits, flat index in wire order (qubit 0 first)."""
    layout = state.layout
    q = layout.qubit_count
    if q == 0:
        raise ValueError("layout has no qubits")
    if isinstance(state, PureState):
        p = np.abs(state.amplitudes.reshape(2**q, -1)) ** 2
        probs = p.sum(axis=1)
    else:
        probs = np.real(np.diag(partial_trace(state, layout.qubit_wires).matrix))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def measure_qubits(state: PureState | MixedState, shots: int, seed: int | None = None) -> dict[str, int]:
    probs = qubit_probabilities(state)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    q = state.layout.qubit_count
    return {format(i, f"0{q}b"): int(c) for i, c in enumerate(counts) if c}


def fock_distribution(state: PureState | MixedState, mode: int) -> np.ndarray:
    wire = state.layout.mode_wire(mode)
    rho = partial_trace(state, [wire]).matrix
    return np.clip(np.real(np.diag(rho)), 0.0, None)


def measure_fock(state: PureState | MixedState, mode: int, shots: int | None = None, seed: int | None = None):
    """Exact Fock marginal of ``mode``; with ``shots`` returns sampled counts instead."""
    probs = fock_distribution(state, mode)
    if shots is None:
        return probs
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, probs / probs.sum())


def hermite_functions(nmax: int, x: np.ndarray) -> np.ndarray:
    """Normalised oscillator eigenfunctions ``phi_n(x)`` for ``n < nmax``, shape ``(nmax, len(x))``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax, x.size))
    out[0] = np.pi**-0.25 * np.exp(-(x**2) / 2)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def default_quadrature_grid(cutoff: int, points: int = 1001) -> np.ndarray:
    half = np.sqrt(2 * cutoff) + 4
    return np.linspace(-half, half, points)


def _basis_phases(cutoff: int, basis: str) -> np.ndarray:
    # <p|n> = (-i)^n phi_n(p): rotate by -pi/2 (inverse Fourier) and read x
    if basis == "x":
        return np.ones(cutoff, dtype=complex)
    if basis == "p":
        return (-1j) ** np.arange(cutoff)
    raise ValueError(f"basis must be 'x' or 'p', got {basis!r}")


def _check_normalised(grid: np.ndarray, density: np.ndarray) -> None:
    total = np.trapezoid(density, grid)
    if not 0.99 <= total <= 1.01:
        raise ValueError(f"quadrature grid too coarse or narrow: density integrates to {total:.4f}")


def quadrature_wavefunction(
    state: PureState | MixedState, mode: int, basis: str = "x", grid: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``psi(q)`` of a (near-)pure reduced mode state; returns ``(grid, values)``."""
    wire = state.layout.mode_wire(mode)
    cutoff = state.layout.dims[wire]
    grid = default_quadrature_grid(cutoff) if grid is None else np.asarray(grid, dtype=float)
    rho = partial_trace(state, [wire]).matrix
    w, v = np.linalg.eigh(rho)
    if w[-1] < 1 - 1e-6:
        raise ValueError(f"mode {mode} is mixed (largest eigenvalue {w[-1]:.6f}); use quadrature_distribution")
    coeffs = v[:, -1] * _basis_phases(cutoff, basis)
    psi = coeffs @ hermite_functions(cutoff, grid)
    _check_normalised(grid, np.abs(psi) ** 2)
    return grid, psi


def quadrature_distribution(
    state: PureState | MixedState, mode: int, basis: str = "x", grid: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``P(q) = <q|rho|q>`` for the reduced state of ``mode``."""
    wire = state.layout.mode_wire(mode)
    cutoff = state.layout.dims[wire]
    grid = default_quadrature_grid(cutoff) if grid is None else np.asarray(grid, dtype=float)
    rho = partial_trace(state, [wire]).matrix
    ph = _basis_phases(cutoff, basis)
    rho = ph[:, None] * rho * ph.conj()[None, :]
    phi = hermite_functions(cutoff, grid)
    dens = np.real(np.einsum("mx,mn,nx->x", phi, rho, phi))
    dens = np.clip(dens, 0.0, None)
    _check_normalised(grid, dens)
    return grid, dens


def measure_quadrature(
    state: PureState | MixedState,
    mode: int,
    basis: str = "x",
    shots: int = 1,
    seed: int | None = None,
    grid: np.ndarray | None = None,
) -> np.ndarray:
    """Sample homodyne outcomes from the exact quadrature distribution."""
    grid, dens = quadrature_distribution(state, mode, basis, grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    return np.interp(rng.random(shots), cdf, grid)


# ------------------------------------------------------------------ features


def circuit_depth(circuit: Circuit) -> int:
    """Longest chain when every op occupies one time step on each of its wires."""
    level = [0] * circuit.layout.wire_count
    for op in circuit.ops:
        t = 1 + max(level[w] for w in op.targets)
        for w in op.targets:
            level[w] = t
    return max(level, default=0)


def circuit_features(circuit: Circuit) -> dict[str, int]:
    counts = {"qubit": 0, "qumode": 0, "hybrid": 0}
    for op in circuit.ops:
        counts[op.wire_class(circuit.layout)] += 1
    return {
        "qubits": circuit.layout.qubit_count,
        "qumodes": circuit.layout.mode_count,
        "qubit_gates": counts["qubit"],
        "qumode_gates": counts["qumode"],
        "hybrid_gates": counts["hybrid"],
        "depth": circuit_depth(circuit),
    }


# ------------------------------------------------------------- serialization

FORMAT_VERSION = 1


def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def circuit_to_dict(circuit: Circuit) -> dict:
    ops = []
    for op in circuit.ops:
        entry: dict[str, Any] = {
            "kind": op.kind.value,
            "params": {k: _pair(v) for k, v in sorted(op.params.items())},
            "targets": list(op.targets),
            "duration": op.duration,
        }
        if op.label:
            entry["label"] = op.label
        if op.kind is GateKind.CUSTOM:
            entry["matrix"] = [[_pair(z) for z in row] for row in op.matrix]
        ops.append(entry)
    return {
        "format": FORMAT_VERSION,
        "name": circuit.name,
        "layout": circuit.layout.to_dict(),
        "metadata": _jsonable(circuit.metadata),
        "ops": ops,
    }


def circuit_from_dict(data: Mapping[str, Any]) -> Circuit:
    if data.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported circuit format {data.get('format')!r}")
    layout = SystemLayout.from_dict(data["layout"])
    circ = Circuit(layout, name=data.get("name", ""), metadata=dict(data.get("metadata", {})))
    for entry in data["ops"]:
        params = {k: complex(v[0], v[1]) for k, v in entry.get("params", {}).items()}
        matrix = None
        if "matrix" in entry:
            matrix = np.array([[complex(re, im) for re, im in row] for row in entry["matrix"]])
        op = GateOp(
            GateKind(entry["kind"]),
            tuple(entry["targets"]),
            params,
            duration=float(entry.get("duration", 0.0)),
            label=entry.get("label", ""),
            matrix=matrix,
        )
        op.validate(layout)
        circ.ops.append(op)
    return circ


def dumps(circuit: Circuit) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=1, sort_keys=True)


def loads(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return _pair(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def ops_of_class(circuit: Circuit, wire_class: str) -> Iterable[GateOp]:
    return (op for op in circuit.ops if op.wire_class(circuit.layout) == wire_class)
