"""CV-DV characterisation metrics, per-gate maxima, suite normalisation and Ward clustering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.special import gammaln

from .engine import Circuit, run_pure
from .hilbert import MixedState, PureState, partial_trace

# ------------------------------------------------------------------- Wigner


@dataclass
class WignerGrid:
    x_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray  # indexed [x, p]

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.p_values, axis=1), self.x_values))


def default_wigner_axis(cutoff: int, points: int = 201, mean_n: float | None = None) -> np.ndarray:
    """Symmetric axis covering the state: sized by ``mean_n`` when given, else by the cutoff."""
    scale = cutoff if mean_n is None else min(mean_n, cutoff)
    half = math.sqrt(2 * scale + 1) + 4
    return np.linspace(-half, half, points)


def _as_density(state) -> np.ndarray:
    if isinstance(state, MixedState):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return np.asarray(state, dtype=complex)


def wigner(state, x_values: np.ndarray | None = None, p_values: np.ndarray | None = None,
           points: int = 201) -> WignerGrid:
    """Wigner function of a single-mode state on an ``x`` by ``p`` grid.

    Uses the Fock-basis kernel
    ``W_{m,n} = ((-1)^n / pi) e^{-i d theta} sqrt(n!/m!) t^{d/2} e^{-t/2} L_n^{(d)}(t)``
    with ``d = m - n >= 0``, ``t = 2 r^2`` and ``x + i p = r e^{i theta}``;
    the normalised Laguerre factor is generated by a three-term recurrence so
    high cutoffs neither overflow nor cancel.
    """
    rho = _as_density(state)
    n = rho.shape[0]
    if rho.shape != (n, n):
        raise ValueError("wigner needs a single-mode density matrix")
    if x_values is None or p_values is None:
        mean_n = float(np.dot(np.arange(n), np.real(np.diag(rho))))
        axis = default_wigner_axis(n, points, mean_n)
        x_values = axis if x_values is None else x_values
        p_values = axis if p_values is None else p_values
    x_values = np.asarray(x_values, dtype=float)
    p_values = np.asarray(p_values, dtype=float)
    if x_values.size == 0 or p_values.size == 0:
        raise ValueError("empty Wigner grid")
    xx, pp = np.meshgrid(x_values, p_values, indexing="ij")
    t = 2 * (xx**2 + pp**2)
    phase = np.exp(-1j * np.arctan2(pp, xx))
    logt = np.log(np.where(t > 0, t, 1.0))
    sign = (-1.0) ** np.arange(n)
    total = np.zeros(xx.shape, dtype=complex)
    phase_d = np.ones(xx.shape, dtype=complex)
    for d in range(n):
        coeffs = np.diagonal(rho, offset=-d) * sign[: n - d]  # rho[n+d, n] (-1)^n
        if d and not np.any(coeffs):
            phase_d *= phase
            continue
        if d == 0:
            f_prev = np.exp(-t / 2)
        else:
            f_prev = np.where(t > 0, np.exp(0.5 * d * logt - t / 2 - 0.5 * gammaln(d + 1)), 0.0)
        acc = coeffs[0] * f_prev
        if n - d > 1:
            f_cur = (1 + d - t) * f_prev / math.sqrt(1 + d)
            acc = acc + coeffs[1] * f_cur
            for k in range(1, n - d - 1):
                f_next = ((2 * k + 1 + d - t) * f_cur - math.sqrt(k * (k + d)) * f_prev) / math.sqrt(
                    (k + 1) * (k + 1 + d)
                )
                f_prev, f_cur = f_cur, f_next
                acc = acc + coeffs[k + 1] * f_cur
        if d == 0:
            total += acc
        else:
            total += 2 * np.real(phase_d * acc)
        phase_d = phase_d * phase
    return WignerGrid(x_values, p_values, np.real(total) / np.pi)


def wigner_negativity(grid: WignerGrid) -> float:
    """Trapezoid integral of the negative part ``max(-W, 0)``."""
    neg = np.clip(-grid.values, 0.0, None)
    return float(np.trapezoid(np.trapezoid(neg, grid.p_values, axis=1), grid.x_values))


def mode_negativity(state, mode: int, points: int = 201) -> float:
    wire = state.layout.mode_wire(mode)
    red = partial_trace(state, [wire])
    return wigner_negativity(wigner(red.matrix, points=points))


# ------------------------------------------------------------- populations


def truncation_cost(state, mode: int, k: int) -> float:
    """Population in the top ``k`` Fock levels of ``mode``."""
    wire = state.layout.mode_wire(mode)
    cutoff = state.layout.dims[wire]
    if not 1 <= k <= cutoff:
        raise ValueError(f"k={k} outside 1..{cutoff}")
    return float(np.sum(_wire_populations(state, wire)[cutoff - k:]))


def default_k(cutoff: int) -> int:
    return max(1, cutoff // 4)


def _wire_populations(state, wire: int) -> np.ndarray:
    layout = state.layout
    if isinstance(state, PureState):
        p = np.abs(state.tensor()) ** 2
        axes = tuple(i for i in range(layout.wire_count) if i != wire)
        return p.sum(axis=axes)
    return np.real(np.diag(partial_trace(state, [wire]).matrix))


def energy(state) -> float:
    """Sum of photon numbers plus sum of ``<Z>`` over qubits, with ``<0|Z|0> = +1``."""
    layout = state.layout
    total = 0.0
    for w in layout.mode_wires:
        pops = _wire_populations(state, w)
        total += float(np.dot(np.arange(pops.size), pops))
    for w in layout.qubit_wires:
        pops = _wire_populations(state, w)
        total += float(pops[0] - pops[1])
    return total


def excitation_number(state) -> float:
    """``sum <n_j> + sum <sigma+ sigma->``; conserved by Jaynes-Cummings-Hubbard dynamics."""
    layout = state.layout
    total = 0.0
    for w in layout.mode_wires:
        pops = _wire_populations(state, w)
        total += float(np.dot(np.arange(pops.size), pops))
    for w in layout.qubit_wires:
        total += float(_wire_populations(state, w)[1])
    return total


# --------------------------------------------------------------- tracking


@dataclass
class MetricTrace:
    energy: list[float] = field(default_factory=list)
    negativity: list[float] = field(default_factory=list)
    truncation: list[float] = field(default_factory=list)
    k: dict[int, int] = field(default_factory=dict)

    def maxima(self) -> dict[str, float]:
        return {
            "max_energy": max(self.energy),
            "max_wigner_negativity": max(self.negativity) if self.negativity else 0.0,
            "max_truncation_cost": max(self.truncation) if self.truncation else 0.0,
        }


def track_maxima(circuit: Circuit, initial: PureState, k: int | dict[int, int] | None = None,
                 points: int = 201, negativity: bool = True) -> tuple[dict[str, float], MetricTrace]:
    """Run ``circuit`` ideally and record metrics after every gate.

    Energy is taken on the full state; Wigner negativity and truncation
    cost are computed on each qumode's reduced state and the per-step value
    is the maximum over qumodes.  The initial state counts as a step.
    Negativity is only recomputed for modes a gate touched, since a gate
    cannot change the reduced state of wires it does not act on.
    """
    layout = circuit.layout
    modes = list(range(layout.mode_count))
    if k is None:
        ks = {m: default_k(layout.qumode_cutoffs[m]) for m in modes}
    elif isinstance(k, int):
        ks = {m: k for m in modes}
    else:
        ks = dict(k)
    trace = MetricTrace(k=ks)
    neg_cache: dict[int, float] = {}

    def record(state: PureState, touched: Sequence[int]) -> None:
        trace.energy.append(energy(state))
        if not modes:
            return
        trace.truncation.append(max(truncation_cost(state, m, ks[m]) for m in modes))
        if negativity:
            for m in touched:
                neg_cache[m] = mode_negativity(state, m, points)
            trace.negativity.append(max(neg_cache.values()))

    record(initial, modes)

    def hook(i: int, state: PureState) -> None:
        wires = circuit.ops[i].targets
        touched = [w - layout.qubit_count for w in wires if w >= layout.qubit_count]
        record(state, touched)

    run_pure(circuit, initial, hook)
    return trace.maxima(), trace


# ------------------------------------------------------------ normalisation

CVDV_KEYS = ("max_energy", "max_wigner_negativity", "max_truncation_cost")


def normalize_suite(reports: Sequence[dict]) -> list[dict]:
    """Divide each CV-DV metric by its maximum over ``reports``.

    Each report needs a ``cvdv_raw`` mapping; the result adds ``cvdv_norm``
    and ``cvdv_denominator``.  An all-zero column stays zero and is noted.
    Applying it twice gives the same result.
    """
    if not reports:
        raise ValueError("need at least one report")
    denoms = {}
    notes = []
    for key in CVDV_KEYS:
        vals = [r["cvdv_raw"].get(key, 0.0) for r in reports]
        top = max(abs(v) for v in vals)
        denoms[key] = top
        if top == 0:
            notes.append(f"{key}: all zero, left unnormalised")
    out = []
    for r in reports:
        norm = {k: (r["cvdv_raw"].get(k, 0.0) / denoms[k] if denoms[k] else 0.0) for k in CVDV_KEYS}
        new = dict(r)
        new["cvdv_norm"] = norm
        new["cvdv_denominator"] = dict(denoms)
        if notes:
            new["normalization_notes"] = list(notes)
        out.append(new)
    return out


# ---------------------------------------------------------------- clustering


@dataclass
class Linkage:
    rows: np.ndarray  # (n-1, 4): cluster_a, cluster_b, distance, size
    labels: list[str]
    kept_columns: list[int]
    dropped_columns: list[int]

    def clusters(self, count: int) -> list[int]:
        """Flat cluster id per leaf after cutting the tree into ``count`` clusters."""
        n = len(self.labels)
        if not 1 <= count <= n:
            raise ValueError(f"cluster count must be in 1..{n}")
        members = {i: [i] for i in range(n)}
        for step, (a, b, _, _) in enumerate(self.rows[: n - count]):
            members[n + step] = members.pop(int(a)) + members.pop(int(b))
        assignment = [0] * n
        for cid, leaves in enumerate(sorted(members.values(), key=min)):
            for leaf in leaves:
                assignment[leaf] = cid
        return assignment


def zscore_columns(features: np.ndarray) -> tuple[np.ndarray, list[int], list[int]]:
    """Population z-scores per column; constant columns are dropped."""
    x = np.asarray(features, dtype=float)
    std = x.std(axis=0)
    keep = [j for j in range(x.shape[1]) if std[j] > 1e-12]
    drop = [j for j in range(x.shape[1]) if std[j] <= 1e-12]
    z = (x[:, keep] - x[:, keep].mean(axis=0)) / std[keep]
    return z, keep, drop


def ward_cluster(features: np.ndarray, labels: Sequence[str] | None = None, standardize: bool = True) -> Linkage:
    """Agglomerative clustering with Ward's criterion on (optionally z-scored) rows."""
    x = np.asarray(features, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least two rows to cluster")
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    if standardize:
        x, keep, drop = zscore_columns(x)
    else:
        keep, drop = list(range(x.shape[1])), []
    if x.shape[1] == 0:
        x = np.zeros((n, 1))
    return Linkage(linkage(x, method="ward"), labels, keep, drop)


def render_dendrogram(link: Linkage, width: int = 40) -> str:
    """Plain-text dendrogram: one line per merge, bar length proportional to height."""
    n = len(link.labels)
    names = {i: link.labels[i] for i in range(n)}
    top = float(link.rows[:, 2].max()) if len(link.rows) else 1.0
    lines = []
    for step, (a, b, d, size) in enumerate(link.rows):
        a, b = int(a), int(b)
        bar = "#" * max(1, int(round(width * d / top))) if top > 0 else "#"
        lines.append(f"{d:8.3f} |{bar:<{width}}| ({names[a]}) + ({names[b]})  [{int(size)}]")
        names[n + step] = f"{names[a]}, {names[b]}"
    return "\n".join(lines)
