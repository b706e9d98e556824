"""Validated parameter sets for every benchmark, defaulting to the reference settings."""

from __future__ import annotations

import math
from typing import Callable, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .jch import FOUR_PI, run_jch
from .qaoa import run_cv_qaoa, shifted_square
from .qft import TRANSFER_SPACING, run_qft
from .shor import run_shor
from .states import run_cat, run_gkp
from .transfer import run_state_transfer
from .vqe import PAPER_CAPACITY, PAPER_VALUES, PAPER_WEIGHTS, run_vqe


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _power_of_two(v: int) -> int:
    if v < 2 or v & (v - 1):
        raise ValueError("cutoff must be a power of two >= 2")
    return v


class StateTransferSpec(_Spec):
    n_qubits: int = Field(4, ge=1, le=8)
    delta: float = Field(0.39, gt=0)
    cutoff: int = 64
    cat_alpha: float = Field(1.25, gt=0)
    _cut = field_validator("cutoff")(_power_of_two)


class CatSpec(_Spec):
    alpha: float = Field(2.0, gt=0)
    cutoff: int = 32
    _cut = field_validator("cutoff")(_power_of_two)


class GKPSpec(_Spec):
    n_d: int = Field(9, ge=2)
    squeeze: float = Field(0.222, gt=0)
    cutoff: int = 64
    _cut = field_validator("cutoff")(_power_of_two)


class QFTSpec(_Spec):
    n: int = Field(2, ge=1)
    ancilla: int = Field(1, ge=0)
    append: int = Field(2, ge=0)
    delta: float = 2.33
    delta_prime: float = 0.29
    cutoff: int = 16
    spacing: float = Field(TRANSFER_SPACING, gt=0)
    input_bits: str = "00"
    _cut = field_validator("cutoff")(_power_of_two)

    @field_validator("input_bits")
    @classmethod
    def _bits(cls, v: str) -> str:
        if not v or set(v) - {"0", "1"}:
            raise ValueError("input_bits must be a non-empty 0/1 string")
        return v


class VQESpec(_Spec):
    values: tuple[float, ...] = PAPER_VALUES
    weights: tuple[float, ...] = PAPER_WEIGHTS
    capacity: float = PAPER_CAPACITY
    depth: int = Field(5, ge=1)
    cutoffs: tuple[int, int] = (8, 8)
    seed: int = 7
    restarts: int = Field(5, ge=1)
    method: Literal["BFGS", "Nelder-Mead"] = "BFGS"
    maxiter: int = Field(300, ge=1)
    penalty_schedule: tuple[float, ...] = (1.0,)


class QAOASpec(_Spec):
    cost: tuple[float, ...] = shifted_square(3.0)
    depth: int = Field(5, ge=0)
    cutoff: int = 32
    squeeze: float = -0.5
    seed: int = 7
    restarts: int = Field(5, ge=1)
    method: Literal["BFGS", "Nelder-Mead"] = "BFGS"
    maxiter: int = Field(400, ge=1)


class JCHSpec(_Spec):
    n_sites: int = Field(3, ge=2)
    omega_c: float = FOUR_PI
    omega_tls: float = FOUR_PI
    kappa: float = 1.0
    eta: float = 0.5
    dt: float = Field(0.1, gt=0)
    steps: int = Field(50, ge=1)
    cutoff: int = 8
    photons: int = Field(2, ge=0)
    noisy_steps: int = Field(10, ge=0)
    noisy_cutoff: int = 4


class ShorSpec(_Spec):
    n: int = Field(15, ge=9)
    trials: int = Field(5, ge=1)
    seed: int = 7
    m: int = Field(2, ge=1, le=2)
    spacing_r: float = Field(1.3, gt=0)
    squeeze_r: float = Field(1.202, gt=0)
    rounds: int = Field(8, ge=1)
    cutoffs: tuple[int, int, int] = (128, 128, 64)
    ideal_gkp: bool = False
    compare_ideal: bool = True

    @field_validator("n")
    @classmethod
    def _odd_composite(cls, v: int) -> int:
        if v % 2 == 0 or all(v % p for p in range(3, int(math.isqrt(v)) + 1, 2)):
            raise ValueError("N must be an odd composite")
        return v


REGISTRY: dict[str, tuple[type[_Spec], Callable]] = {
    "state_transfer": (StateTransferSpec, run_state_transfer),
    "cat": (CatSpec, run_cat),
    "gkp": (GKPSpec, run_gkp),
    "qft": (QFTSpec, run_qft),
    "vqe": (VQESpec, run_vqe),
    "qaoa": (QAOASpec, run_cv_qaoa),
    "jch": (JCHSpec, run_jch),
    "shor": (ShorSpec, run_shor),
}

BENCHMARKS = tuple(REGISTRY)


def make_spec(name: str, **overrides) -> _Spec:
    if name not in REGISTRY:
        raise KeyError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
    return REGISTRY[name][0](**overrides)


def run_benchmark(name: str, spec: _Spec | None = None, **overrides):
    spec = spec or make_spec(name, **overrides)
    return REGISTRY[name][1](**spec.model_dump())
