"""Continuous-variable QAOA on a single qumode.

Cost layers apply ``exp(-i eta f(x))`` and mixer layers ``exp(-i gamma p^2 / 2)``.
Each layer is one gate whose matrix is the exponential of the polynomial
evaluated on the truncated quadrature.  The mixer equals the same
construction on ``x`` conjugated by the Fourier gate, which maps the
truncated ``x`` onto the truncated ``p`` exactly.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..engine import Circuit, quadrature_distribution, run_pure
from ..gates import position, quadratic_phase
from ..hilbert import SystemLayout, vacuum_state
from .common import BenchmarkReport, Timer, feature_report, optimize_restarts

MIXER = (0.0, 0.0, 0.5)


def shifted_square(c: float) -> tuple[float, float, float]:
    """Coefficients of ``(x - c)^2`` in increasing powers."""
    return (c * c, -2.0 * c, 1.0)


def build_cv_qaoa(cost: Sequence[float], params: np.ndarray, depth: int, cutoff: int = 32,
                  squeeze: float = -0.5, allow_custom: bool = False) -> Circuit:
    """Squeezed vacuum then ``depth`` (cost, mixer) layers; ``params = (eta_1.., gamma_1..)``."""
    cost = tuple(float(v) for v in cost)
    if len(cost) > 3 and not allow_custom and any(cost[3:]):
        raise ValueError("cost polynomials above degree 2 need allow_custom=True")
    params = np.asarray(params, dtype=float)
    if params.size != 2 * depth:
        raise ValueError(f"need {2 * depth} parameters, got {params.size}")
    layout = SystemLayout(0, (cutoff,))
    c = Circuit(layout, name="qaoa", metadata={"cost": cost, "depth": depth, "squeeze": squeeze})
    c.append("S", [0], z=squeeze)
    etas, gammas = params[:depth], params[depth:]
    for eta, gamma in zip(etas, gammas):
        c.custom(quadratic_phase(cost, eta, cutoff, "x"), [0], label="cost", t=eta)
        c.custom(quadratic_phase(MIXER, gamma, cutoff, "p"), [0], label="mixer", t=gamma)
    return c


def cost_operator(cost: Sequence[float], cutoff: int) -> np.ndarray:
    x = position(cutoff)
    w, v = np.linalg.eigh(x)
    f = np.polynomial.polynomial.polyval(w, np.asarray(cost, dtype=float))
    return (v * f) @ v.conj().T


def qaoa_objective(params, cost, depth, cutoff, squeeze, h_c: np.ndarray) -> float:
    circuit = build_cv_qaoa(cost, params, depth, cutoff, squeeze, allow_custom=True)
    psi = run_pure(circuit, vacuum_state(circuit.layout)).amplitudes
    return float(np.real(np.vdot(psi, h_c @ psi)))


def run_cv_qaoa(cost: Sequence[float] = shifted_square(3.0), depth: int = 5, cutoff: int = 32,
                squeeze: float = -0.5, seed: int = 7, restarts: int = 5, method: str = "BFGS",
                maxiter: int = 400) -> BenchmarkReport:
    cost = tuple(cost)
    h_c = cost_operator(cost, cutoff)
    with Timer() as t:
        if depth == 0:
            params = np.zeros(0)
            best = None
        else:
            best = optimize_restarts(lambda p: qaoa_objective(p, cost, depth, cutoff, squeeze, h_c), 2 * depth,
                                     seed, restarts, init_scale=0.3, method=method, maxiter=maxiter)
            params = best.x
        circuit = build_cv_qaoa(cost, params, depth, cutoff, squeeze, allow_custom=True)
        out = run_pure(circuit, vacuum_state(circuit.layout))
        x_op = position(cutoff)
        mean_x = float(np.real(np.vdot(out.amplitudes, x_op @ out.amplitudes)))
        grid, dens = quadrature_distribution(out, 0, "x")
    feats, notes = feature_report("qaoa", circuit)
    outputs = {
        "mean_x": mean_x,
        "objective": float(np.real(np.vdot(out.amplitudes, h_c @ out.amplitudes))),
        "peak_x": float(grid[int(np.argmax(dens))]),
        "params": params.tolist(),
    }
    if best is not None:
        outputs.update(initial_objective=best.initial_fun, restarts=best.restarts, best_restart=best.best_restart)
    return BenchmarkReport(
        "qaoa", {"cost": list(cost), "depth": depth, "cutoff": cutoff, "squeeze": squeeze, "seed": seed,
                 "restarts": restarts, "method": method}, feats,
        outputs=outputs, notes=notes, runtime_s=t.elapsed,
    )
