"""Cat and GKP state preparation by repeated qubit-mediated conditional displacements."""

from __future__ import annotations

import math

import numpy as np

from ..engine import Circuit, run_pure
from ..hilbert import PureState, SystemLayout, partial_trace, vacuum_state
from .common import BenchmarkReport, Timer, even_cat_vector, feature_report, gkp_vector

GKP_AMPLITUDE = math.sqrt(math.pi / 2)  # CD amplitude giving x-shifts of +-sqrt(pi)


def append_cat_round(circuit: Circuit, qubit: int, mode: int, alpha: float, eps: float) -> None:
    """One round: ``exp(-i 2 alpha p sigma_x)`` then ``exp(i 2 eps x sigma_y)`` as CD plus basis changes.

    The first block is ``H CD(alpha) H``.  The second rotates the qubit frame
    so that an imaginary-amplitude CD acts as a ``sigma_y``-conditioned
    momentum kick and returns the qubit to ``|0>``.
    """
    circuit.append("H", [qubit])
    circuit.append("CD", [qubit, mode], alpha=alpha)
    circuit.append("H", [qubit])
    circuit.append("SDG", [qubit])
    circuit.append("H", [qubit])
    circuit.append("CD", [qubit, mode], alpha=1j * eps)
    circuit.append("H", [qubit])
    circuit.append("SG", [qubit])


def disentangle_strength(alpha: float) -> float:
    """Imaginary CD amplitude of the disentangling step, ``pi / (8 alpha)``."""
    return math.pi / (8 * alpha)


def build_cat(alpha: float, cutoff: int = 32) -> Circuit:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    layout = SystemLayout(1, (cutoff,))
    c = Circuit(layout, name="cat", metadata={"alpha": alpha, "cutoff": cutoff})
    append_cat_round(c, 0, 1, alpha, disentangle_strength(alpha))
    return c


def cat_fidelity(state: PureState, alpha: float) -> float:
    rho = partial_trace(state, [1]).matrix
    v = even_cat_vector(alpha, rho.shape[0])
    return float(np.real(np.vdot(v, rho @ v)))


def run_cat(alpha: float = 2.0, cutoff: int = 32) -> BenchmarkReport:
    with Timer() as t:
        circuit = build_cat(alpha, cutoff)
        out = run_pure(circuit, vacuum_state(circuit.layout))
        fid = cat_fidelity(out, alpha)
        purity = partial_trace(out, [0]).purity()
    feats, notes = feature_report("cat", circuit)
    return BenchmarkReport(
        "cat", {"alpha": alpha, "cutoff": cutoff}, feats,
        fidelities={"ideal": fid},
        outputs={"qubit_purity": purity},
        notes=notes, runtime_s=t.elapsed,
    )


def build_gkp(rounds: int = 8, squeeze: float = 0.222, cutoff: int = 64) -> Circuit:
    """Squeezed vacuum followed by ``rounds`` cat rounds of amplitude ``sqrt(pi/2)``.

    The squeeze sets the peak width ``e^{-r}``; each round splits every peak
    into two at distance ``2 sqrt(pi)`` and then disentangles the qubit.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    layout = SystemLayout(1, (cutoff,))
    c = Circuit(layout, name="gkp", metadata={"rounds": rounds, "squeeze": squeeze, "cutoff": cutoff})
    c.append("S", [1], z=squeeze)
    for _ in range(rounds):
        append_cat_round(c, 0, 1, GKP_AMPLITUDE, disentangle_strength(GKP_AMPLITUDE))
    return c


def rounds_for(n_d: int) -> int:
    """Cat rounds used for an ``n_d``-peak-level preparation (``n_d - 1``)."""
    if n_d < 2:
        raise ValueError("n_d must be >= 2")
    return n_d - 1


def gkp_fidelity(state: PureState, squeeze: float, mode_wire: int = 1) -> float:
    rho = partial_trace(state, [mode_wire]).matrix
    v = gkp_vector(squeeze, rho.shape[0])
    return float(np.real(np.vdot(v, rho @ v)))


def run_gkp(n_d: int = 9, squeeze: float = 0.222, cutoff: int = 64) -> BenchmarkReport:
    with Timer() as t:
        circuit = build_gkp(rounds_for(n_d), squeeze, cutoff)
        out = run_pure(circuit, vacuum_state(circuit.layout))
        fid = gkp_fidelity(out, squeeze)
        purity = partial_trace(out, [0]).purity()
    feats, notes = feature_report("gkp", circuit)
    return BenchmarkReport(
        "gkp", {"n_d": n_d, "squeeze": squeeze, "cutoff": cutoff, "rounds": rounds_for(n_d)}, feats,
        fidelities={"ideal": fid},
        outputs={"qubit_purity": purity},
        notes=notes, runtime_s=t.elapsed,
    )
