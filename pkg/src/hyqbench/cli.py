"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 resource cap exceeded,
4 task failure (including a suite with failed rows).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .benchmarks.common import REFERENCE_FEATURES, REFERENCE_METRICS, REFERENCE_NOISY, coherent_vector, even_cat_vector
from .benchmarks.specs import BENCHMARKS, REGISTRY, make_spec, run_benchmark
from .hilbert import DimensionError
from .metrics import CVDV_KEYS, render_dendrogram, ward_cluster, wigner

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_TASK = 0, 2, 3, 4

FEATURE_KEYS = ("qubits", "qumodes", "qubit_gates", "qumode_gates", "hybrid_gates", "depth")

# short flag spellings accepted by ``run``
ALIASES = {"nd": "n_d", "N": "n", "R": "spacing_r"}


class ConfigError(Exception):
    pass


class NoiseOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kappa: float | None = Field(None, gt=0)
    chi: float | None = Field(None, gt=0)
    t1: float | None = Field(None, gt=0)
    t2: float | None = Field(None, gt=0)


class MetricSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")
    k: int | None = Field(None, ge=1)
    wigner_points: int = Field(101, ge=11)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    benchmarks: list[str] = Field(default_factory=lambda: list(BENCHMARKS))
    specs: dict[str, dict[str, Any]] = Field(default_factory=dict)
    noise: NoiseOverrides = Field(default_factory=NoiseOverrides)
    metrics: MetricSettings = Field(default_factory=MetricSettings)
    noisy: bool = True
    seed: int | None = None
    jobs: int = Field(1, ge=1)
    out: str = "results"

    def resolved_specs(self) -> dict[str, dict[str, Any]]:
        """Every selected benchmark's full, validated parameter set."""
        out = {}
        for name in self.benchmarks:
            if name not in REGISTRY:
                raise ConfigError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
            overrides = dict(self.specs.get(name, {}))
            if self.seed is not None and "seed" in REGISTRY[name][0].model_fields:
                overrides.setdefault("seed", self.seed)
            try:
                out[name] = make_spec(name, **overrides).model_dump(mode="json")
            except ValidationError as exc:
                raise ConfigError(f"benchmarks.{name}: {exc}") from exc
        unknown = set(self.specs) - set(REGISTRY)
        if unknown:
            raise ConfigError(f"specs for unknown benchmarks: {sorted(unknown)}")
        return out


def default_config() -> dict[str, Any]:
    cfg = RunConfig().model_dump(mode="json")
    cfg["specs"] = {n: make_spec(n).model_dump(mode="json") for n in BENCHMARKS}
    return cfg


def load_config(path: str | None, **cli) -> RunConfig:
    data: dict[str, Any] = {}
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for key, value in cli.items():
        if value is not None:
            data[key] = value
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


# ------------------------------------------------------------------ output


def _header(cfg: dict[str, Any]) -> str:
    return "# config: " + json.dumps(cfg, sort_keys=True, default=str)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]], cfg: dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(_header(cfg) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_json(path: Path, payload: Any, cfg: dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"config": cfg, "result": payload}, indent=2, sort_keys=True, default=str) + "\n",
                    encoding="utf-8")


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with path.open(encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows:
        raise ValueError(f"{path} is empty")
    return rows[0], rows[1:]


def _fmt(v: Any) -> Any:
    return f"{v:.6g}" if isinstance(v, float) else v


def feature_rows(reports: Sequence[dict]) -> tuple[list[str], list[list[Any]]]:
    header = ["benchmark", "status", *FEATURE_KEYS, "energy", "negativity", "truncation", "notes"]
    rows = []
    for r in reports:
        feats = r.get("features", {})
        norm = r.get("cvdv_norm", {})
        rows.append([r["name"], r["status"], *(feats.get(k, "") for k in FEATURE_KEYS),
                     *(_fmt(norm[k]) if k in norm else "" for k in CVDV_KEYS),
                     "; ".join(r.get("notes", [])) or r.get("error", "")])
    return header, rows


def noisy_rows(reports: Sequence[dict]) -> tuple[list[str], list[list[Any]]]:
    header = ["benchmark", "noisy_fidelity", "duration_s", "reference_fidelity", "reference_duration_s", "status"]
    rows = []
    for r in reports:
        ref = REFERENCE_NOISY.get(r["name"], ("", ""))
        fid = r.get("fidelities", {}).get("noisy")
        dur = r.get("durations", {}).get("noisy_circuit")
        status = r["status"] if fid is not None or r["status"] != "ok" else "not desk-scale"
        rows.append([r["name"], _fmt(fid) if fid is not None else "", _fmt(dur) if dur is not None else "",
                     *ref, status])
    return header, rows


# ---------------------------------------------------------------- commands


def _coerce(value: str) -> Any:
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def parse_overrides(extra: Sequence[str]) -> dict[str, Any]:
    """Turn ``--key value`` pairs into spec overrides."""
    out: dict[str, Any] = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, raw = key.split("=", 1)
        else:
            raw = next(it, None)
            if raw is None:
                raise ConfigError(f"missing value for {tok}")
        key = ALIASES.get(key, key.replace("-", "_"))
        out[key] = _coerce(raw)
    return out


def cmd_run(args, extra: Sequence[str]) -> int:
    cfg = load_config(args.config, seed=args.seed, out=args.out, benchmarks=[args.benchmark])
    specs = cfg.specs.get(args.benchmark, {})
    specs.update(parse_overrides(extra))
    cfg.specs[args.benchmark] = specs
    resolved = cfg.resolved_specs()[args.benchmark]
    report = run_benchmark(args.benchmark, make_spec(args.benchmark, **resolved)).to_dict()
    report["status"] = "ok"
    out = Path(cfg.out)
    full_cfg = {**cfg.model_dump(mode="json"), "specs": {args.benchmark: resolved}}
    write_json(out / f"{args.benchmark}.json", report, full_cfg)
    header, rows = feature_rows([report])
    write_csv(out / f"{args.benchmark}_features.csv", header, rows, full_cfg)
    print(json.dumps({"features": report["features"], "fidelities": report["fidelities"],
                      "notes": report["notes"]}, default=str))
    return EXIT_OK


def cmd_suite(args) -> int:
    from .benchmarks.suite import run_suite

    cfg = load_config(args.config, seed=args.seed, out=args.out, jobs=args.jobs)
    if args.no_noise:
        cfg.noisy = False
    resolved = cfg.resolved_specs()
    full_cfg = {**cfg.model_dump(mode="json"), "specs": resolved}
    noise = {k: v for k, v in cfg.noise.model_dump().items() if v is not None}
    reports = run_suite(cfg.benchmarks, resolved, metrics=True, noisy=cfg.noisy, k=cfg.metrics.k, jobs=cfg.jobs,
                        noise=noise)
    out = Path(cfg.out)
    write_csv(out / "table2_features.csv", *feature_rows(reports), full_cfg)
    if cfg.noisy:
        write_csv(out / "table3_noisy.csv", *noisy_rows(reports), full_cfg)
    for r in reports:
        r.pop("runtime_s", None)  # wall time would break byte-identical reruns
    write_json(out / "suite.json", reports, full_cfg)
    failed = [r["name"] for r in reports if r["status"] != "ok"]
    for r in reports:
        print(f"{r['name']:>15}  {r['status']}")
    return EXIT_TASK if failed else EXIT_OK


def _named_state(spec: str, cutoff: int) -> np.ndarray:
    kind, _, arg = spec.partition(":")
    if kind == "vacuum":
        return coherent_vector(0.0, cutoff)
    if kind == "coherent":
        return coherent_vector(complex(arg or 1.0), cutoff)
    if kind == "fock":
        v = np.zeros(cutoff, dtype=complex)
        v[int(arg or 1)] = 1.0
        return v
    if kind == "cat":
        return even_cat_vector(float(arg or 2.0), cutoff)
    raise ConfigError(f"unknown state {spec!r}; use vacuum, coherent:A, fock:N or cat:A")


def cmd_wigner(args) -> int:
    cfg = load_config(args.config, seed=args.seed, out=args.out)
    points = args.points or cfg.metrics.wigner_points
    if args.benchmark:
        from .benchmarks.suite import main_circuit
        from .engine import run_pure
        from .hilbert import partial_trace

        name = args.benchmark
        report = run_benchmark(name, make_spec(name, **cfg.specs.get(name, {})))
        circuit, start = main_circuit(report)
        state = run_pure(circuit, start)
        rho = partial_trace(state, [circuit.layout.mode_wire(args.mode)]).matrix
        label = f"{name}_mode{args.mode}"
    else:
        v = _named_state(args.state, args.cutoff)
        rho = np.outer(v, v.conj())
        label = args.state.replace(":", "_")
    grid = wigner(rho, points=points)
    rows = [[f"{x:.6g}", f"{p:.6g}", f"{grid.values[i, j]:.8g}"]
            for i, x in enumerate(grid.x_values) for j, p in enumerate(grid.p_values)]
    path = Path(cfg.out) / f"wigner_{label}.csv"
    write_csv(path, ["x", "p", "W"], rows, {**cfg.model_dump(mode="json"), "wigner": vars(args)})
    print(f"{path}  integral={grid.integral():.6f}")
    return EXIT_OK


def reference_feature_table() -> tuple[list[str], list[list[float]]]:
    labels = list(REFERENCE_FEATURES)
    return labels, [[*REFERENCE_FEATURES[n].values(), *REFERENCE_METRICS[n]] for n in labels]


def cmd_cluster(args) -> int:
    cfg = load_config(args.config, out=args.out)
    if args.features == "reference":
        labels, data = reference_feature_table()
    else:
        header, rows = read_csv(Path(args.features))
        cols = [i for i, h in enumerate(header) if h not in ("benchmark", "status", "notes")]
        try:
            labels = [r[0] for r in rows]
            data = [[float(r[i]) for i in cols] for r in rows]
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"malformed feature CSV {args.features}: {exc}") from exc
    link = ward_cluster(np.array(data), labels)
    n = len(labels)
    rows = [[int(a), int(b), f"{d:.6g}", int(s), f"cluster{n + i}"] for i, (a, b, d, s) in enumerate(link.rows)]
    write_csv(Path(cfg.out) / "linkage.csv", ["a", "b", "distance", "size", "new_id"], rows,
              {**cfg.model_dump(mode="json"), "features": args.features, "labels": labels})
    print(render_dendrogram(link))
    if n >= args.clusters:
        print("clusters:", dict(zip(labels, link.clusters(args.clusters))))
    return EXIT_OK


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyqbench", description="Hybrid CV-DV benchmark suite")
    p.add_argument("--print-defaults", action="store_true", help="print the full default config and exit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    sub = p.add_subparsers(dest="command")
    run = sub.add_parser("run", parents=[common], help="run one benchmark; extra --key value pairs set parameters")
    run.add_argument("benchmark", choices=BENCHMARKS)
    suite = sub.add_parser("suite", parents=[common], help="run every benchmark and write both tables")
    suite.add_argument("--jobs", type=int)
    suite.add_argument("--no-noise", action="store_true")
    wig = sub.add_parser("wigner", parents=[common], help="Wigner grid of a named state or a benchmark output")
    src = wig.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="vacuum, coherent:A, fock:N or cat:A")
    src.add_argument("--benchmark", choices=BENCHMARKS)
    wig.add_argument("--mode", type=int, default=0)
    wig.add_argument("--cutoff", type=int, default=32)
    wig.add_argument("--points", type=int)
    clu = sub.add_parser("cluster", parents=[common], help="Ward clustering of a feature CSV")
    clu.add_argument("features", help="feature CSV, or 'reference' for the reference table")
    clu.add_argument("--clusters", type=int, default=4)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if args.print_defaults:
            print(json.dumps(default_config(), indent=2))
            return EXIT_OK
        if args.command is None:
            parser.print_help()
            return EXIT_CONFIG
        if extra and args.command != "run":
            raise ConfigError(f"unrecognised arguments: {' '.join(extra)}")
        if args.command == "run":
            return cmd_run(args, extra)
        if args.command == "suite":
            return cmd_suite(args)
        if args.command == "wigner":
            return cmd_wigner(args)
        return cmd_cluster(args)
    except (ConfigError, ValidationError) as exc:
        print(f"hyqbench: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DimensionError as exc:
        print(f"hyqbench: resource cap (hilbert): {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:
        print(f"hyqbench: task failure in {_failing_module(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TASK


def _failing_module(exc: BaseException) -> str:
    tb = exc.__traceback__
    name = "hyqbench"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("hyqbench"):
            name = mod
        tb = tb.tb_next
    return name


if __name__ == "__main__":
    sys.exit(main())
