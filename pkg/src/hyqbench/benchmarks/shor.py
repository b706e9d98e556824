"""Period finding for factoring with one qubit and three qumodes.

Mode 1 is the exponent register: an approximate GKP comb whose tooth index
``k`` plays the role of the exponent.  Mode 2 is an approximate GKP state
used as scratch storage for one bit.  Mode 3 is the work register, holding
residues ``y`` as squeezed peaks at positions ``(y - y0) R``.

The modular exponentiation uses ``m`` bits of ``k``.  Bit ``j`` is rotated
into the qubit by a position-conditioned ``sigma_y`` kick, the qubit controls
a multiplication by ``a^(2^j)`` on the work register, and the bit is then
subtracted from the comb and parked in mode 2 so the qubit can take the next
bit.  All bookkeeping is undone in reverse order.  The exponent register is
finally read in momentum through the Fourier gate.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..engine import Circuit, quadrature_distribution, run_pure
from ..gates import displacement, squeeze
from ..hilbert import PureState, SystemLayout, product_state, vacuum_state
from .common import BenchmarkReport, Timer, coprime_choices, feature_report, gkp_vector
from .states import GKP_AMPLITUDE, append_cat_round, disentangle_strength

SPACING = 2 * math.sqrt(math.pi)  # comb tooth spacing
HALF = math.sqrt(math.pi)  # bucket shift: half a tooth
SQRT2 = math.sqrt(2)


def period_from_phase(phase: float, a: int, n: int) -> int | None:
    """Smallest ``r`` with ``a^r = 1 mod n`` among multiples of the continued-fraction denominator."""
    frac = Fraction(phase % 1.0).limit_denominator(n)
    q = frac.denominator
    for mult in range(1, n // q + 1):
        r = q * mult
        if pow(a, r, n) == 1:
            # shrink to the smallest divisor that is still a period
            return min(d for d in range(1, r + 1) if r % d == 0 and pow(a, d, n) == 1)
    return None


def factors_from_period(a: int, n: int, r: int | None) -> tuple[int, int] | None:
    """Nontrivial factor pair from an even period, else None."""
    if r is None or r % 2 or pow(a, r, n) != 1:
        return None
    h = pow(a, r // 2, n)
    for g in (math.gcd(h - 1, n), math.gcd(h + 1, n)):
        if 1 < g < n:
            return tuple(sorted((g, n // g)))
    return None


def peak_basis(n: int, residues: int, spacing: float, squeeze_r: float, centre: int) -> np.ndarray:
    """Orthonormalised squeezed peaks at ``(y - centre) spacing``, one column per residue."""
    vac = np.zeros(n, dtype=complex)
    vac[0] = 1.0
    sq = squeeze(squeeze_r, n) @ vac
    cols = [displacement((y - centre) * spacing / SQRT2, n) @ sq for y in range(residues)]
    v = np.stack(cols, axis=1)
    w, u = np.linalg.eigh(v.conj().T @ v)
    return v @ (u / np.sqrt(w)) @ u.conj().T


def controlled_multiplier(c: int, modulus: int, basis: np.ndarray) -> np.ndarray:
    """Qubit-controlled ``y -> c y mod N`` on the peak subspace, identity elsewhere."""
    dim = basis.shape[0]
    perm = np.zeros((modulus, modulus))
    for y in range(modulus):
        perm[(c * y) % modulus, y] = 1.0
    mult = basis @ perm @ basis.conj().T + np.eye(dim) - basis @ basis.conj().T
    out = np.eye(2 * dim, dtype=complex)
    out[dim:, dim:] = mult
    return out


def append_gkp_prep(c: Circuit, qubit: int, mode: int, squeeze_r: float, rounds: int) -> None:
    c.append("S", [mode], z=squeeze_r)
    for _ in range(rounds):
        append_cat_round(c, qubit, mode, GKP_AMPLITUDE, disentangle_strength(GKP_AMPLITUDE))


def _extraction(j: int) -> list[tuple[str, list[int], dict]]:
    """Ops that load bit ``j`` into the qubit (before the multiply)."""
    return [("CDY", [0, 1], {"alpha": 1j * (math.pi / (2 ** (j + 1) * SPACING)) / SQRT2, "label": f"bit{j}"})]


def _parking(j: int) -> list[tuple[str, list[int], dict]]:
    """Ops that subtract bit ``j`` from the comb, copy it to the bucket and clear the qubit."""
    return [
        ("CDA", [0, 1], {"alpha": 0.0, "beta": -(2**j) * SPACING / SQRT2, "label": f"sub{j}"}),
        ("CDA", [0, 2], {"alpha": 0.0, "beta": HALF / SQRT2, "label": f"park{j}"}),
        ("CDY", [0, 2], {"alpha": 1j * (math.pi / (2 * HALF)) / SQRT2, "label": f"clear{j}"}),
    ]


def _negate(ops):
    out = []
    for kind, targets, params in reversed(ops):
        p = {k: (v if k == "label" else -v) for k, v in params.items()}
        p["label"] = params["label"] + "^-1"
        out.append((kind, targets, p))
    return out


def build_shor(a: int = 7, n: int = 15, m: int = 2, spacing_r: float = 1.3, squeeze_r: float = 1.202,
               rounds: int = 8, cutoffs: tuple[int, int, int] = (128, 128, 64), prepare_gkp: bool = True) -> Circuit:
    """Full circuit; with ``prepare_gkp=False`` the comb and bucket preparations are omitted."""
    if n % 2 == 0 or n < 9:
        raise ValueError("N must be an odd composite >= 9")
    if math.gcd(a, n) != 1:
        raise ValueError("a must be coprime to N")
    if m not in (1, 2):
        raise ValueError("m must be 1 or 2: the bucket mode parks a single bit")
    layout = SystemLayout(1, tuple(cutoffs))
    c = Circuit(layout, name="shor", metadata={
        "a": a, "N": n, "m": m, "R": spacing_r, "squeeze": squeeze_r, "rounds": rounds,
        "cutoffs": list(cutoffs), "prepare_gkp": prepare_gkp})
    if prepare_gkp:
        append_gkp_prep(c, 0, 1, squeeze_r, rounds)
        append_gkp_prep(c, 0, 2, squeeze_r, rounds)
    centre = n // 2
    c.append("S", [3], z=squeeze_r)
    c.append("D", [3], alpha=(1 - centre) * spacing_r / SQRT2)
    basis = peak_basis(cutoffs[2], n, spacing_r, squeeze_r, centre)
    bookkeeping = []
    for j in range(m):
        power = pow(a, 2**j, n)
        steps = _extraction(j)
        for kind, t, p in steps:
            c.append(kind, t, **p)
        c.custom(controlled_multiplier(power, n, basis), [0, 3], label=f"CM{power}", t=math.log(power))
        if j < m - 1:
            steps = steps + _parking(j)
            for kind, t, p in _parking(j):
                c.append(kind, t, **p)
        bookkeeping += steps
    for kind, t, p in _negate(bookkeeping):
        c.append(kind, t, **p)
    c.append("F", [1])
    c.metadata["centre"] = centre
    return c


def shor_initial_state(circuit: Circuit, ideal_gkp: bool = False) -> PureState:
    """Vacuum everywhere, or ideal GKP codewords on the comb and bucket modes."""
    layout = circuit.layout
    if not ideal_gkp:
        return vacuum_state(layout)
    r = circuit.metadata["squeeze"]
    dims = layout.dims
    vac = [np.eye(d)[0] for d in dims]
    return product_state(layout, [vac[0], gkp_vector(r, dims[1]), gkp_vector(r, dims[2]), vac[3]])


def phase_distribution(a: int, n: int, m: int = 2, ideal_gkp: bool = False, **kwargs) -> tuple[np.ndarray, np.ndarray]:
    """Exact readout density of the exponent register after the Fourier gate."""
    circuit = build_shor(a, n, m, prepare_gkp=not ideal_gkp, **kwargs)
    out = run_pure(circuit, shor_initial_state(circuit, ideal_gkp))
    return quadrature_distribution(out, 0, "x")


def success_probability(grid: np.ndarray, dens: np.ndarray, a: int, n: int) -> float:
    """Probability that one readout yields a nontrivial factor."""
    ok = np.array([factors_from_period(a, n, period_from_phase(x * SPACING / (2 * math.pi), a, n)) is not None
                   for x in grid], dtype=float)
    return float(np.trapezoid(dens * ok, grid) / np.trapezoid(dens, grid))


def random_phase_success(a: int, n: int, points: int = 4001) -> float:
    """Success probability of a uniformly random phase: the no-quantum baseline."""
    phases = (np.arange(points) + 0.5) / points
    return float(np.mean([factors_from_period(a, n, period_from_phase(p, a, n)) is not None for p in phases]))


def run_shor(n: int = 15, trials: int = 5, seed: int = 7, m: int = 2, spacing_r: float = 1.3,
             squeeze_r: float = 1.202, rounds: int = 8, cutoffs: tuple[int, int, int] = (128, 128, 64),
             ideal_gkp: bool = False, compare_ideal: bool = True) -> BenchmarkReport:
    """Seeded factoring trials: each draws a coprime base and one momentum readout."""
    kwargs = dict(spacing_r=spacing_r, squeeze_r=squeeze_r, rounds=rounds, cutoffs=tuple(cutoffs))
    rng = np.random.default_rng(seed)
    bases = coprime_choices(n)
    cache: dict[tuple[int, bool], tuple[np.ndarray, np.ndarray]] = {}

    def density(a: int, ideal: bool):
        if (a, ideal) not in cache:
            cache[(a, ideal)] = phase_distribution(a, n, m, ideal, **kwargs)
        return cache[(a, ideal)]

    records = []
    with Timer() as t:
        for i in range(trials):
            a = int(rng.choice(bases))
            grid, dens = density(a, ideal_gkp)
            cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
            x = float(np.interp(rng.random() * cdf[-1], cdf, grid))
            phase = (x * SPACING / (2 * math.pi)) % 1.0
            r = period_from_phase(phase, a, n)
            records.append({"trial": i, "a": a, "readout": x, "phase": phase, "period": r,
                            "factors": factors_from_period(a, n, r)})
        success = {str(a): success_probability(*density(a, ideal_gkp), a, n) for a in sorted({r["a"] for r in records})}
        ideal_success = {}
        if compare_ideal and not ideal_gkp:
            ideal_success = {a: success_probability(*density(int(a), True), int(a), n) for a in success}
    found = sorted({f for rec in records if rec["factors"] for f in rec["factors"]})
    circuit = build_shor(records[0]["a"] if records else bases[0], n, m, prepare_gkp=not ideal_gkp, **kwargs)
    feats, notes = feature_report("shor", circuit)
    return BenchmarkReport(
        "shor", {"N": n, "trials": trials, "seed": seed, "m": m, "R": spacing_r, "squeeze": squeeze_r,
                 "rounds": rounds, "cutoffs": list(cutoffs), "ideal_gkp": ideal_gkp}, feats,
        outputs={
            "trials": records,
            "factors": found,
            "success": bool(found),
            "success_probability": success,
            "ideal_gkp_success_probability": ideal_success,
            "random_phase_success_probability": {a: random_phase_success(int(a), n) for a in success},
        },
        notes=notes, runtime_s=t.elapsed,
    )
