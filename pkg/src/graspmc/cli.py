"""Command-line experiment runner.

Verbs: sketch, demonstrate, learn, transfer, report, export. Every run
writes its effective configuration (after defaulting) next to its results;
learn/transfer require --seed (or a --seeds range for sweeps).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    ACTIVE_BIASED_INIT,
    ACTIVE_RANDOM_INIT,
    RANDOM_WALK_BASELINE,
    TRANSFER_EXPERIMENTS,
    ExperimentConfig,
    emit_table,
    export_samples,
    result_from_document,
    result_to_document,
    run_experiment,
)
from .grasping import demonstrate_grasps
from .gripper import default_gripper
from .learning import build_rough_sketch
from .objects import get_object, object_catalog
from .serialization import model_from_document, model_to_document, sketch_to_document

LEARN_EXPERIMENTS = (RANDOM_WALK_BASELINE, ACTIVE_RANDOM_INIT, ACTIVE_BIASED_INIT)

_NUMERIC_FLAGS = (
    ("iterations", int),
    ("burn-in", int),
    ("gamma", float),
    ("nu", float),
    ("subsample-size", int),
    ("p-check", float),
    ("epsilon", float),
    ("scale-floor", float),
    ("kappa", float),
    ("position-sigma", float),
    ("demonstration-count", int),
)
_BOOL_FLAGS = ("paper-literal-acceptance", "sqrt-scales", "invert-p-check", "no-trace")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; CLI flags override its fields")
    for flag, kind in _NUMERIC_FLAGS:
        parser.add_argument(f"--{flag}", type=kind, default=None)
    for flag in _BOOL_FLAGS:
        parser.add_argument(f"--{flag}", action="store_true", default=None)


def _parse_seeds(args: argparse.Namespace) -> list[int]:
    if args.seeds:
        lo, _, hi = args.seeds.partition("..")
        return list(range(int(lo), int(hi) + 1))
    if args.seed is None:
        raise SystemExit("--seed (or --seeds a..b) is required")
    return [int(args.seed)]


def _build_config(args: argparse.Namespace, experiment: str, seed: int) -> ExperimentConfig:
    doc: dict = {}
    if args.config:
        doc.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    doc["experiment"] = experiment
    doc["object_name"] = args.object
    doc["seed"] = seed
    for flag, _ in _NUMERIC_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value is not None:
            doc[flag.replace("-", "_")] = value
    for flag in ("paper_literal_acceptance", "sqrt_scales", "invert_p_check"):
        value = getattr(args, flag)
        if value:
            doc[flag] = True
    if args.no_trace:
        doc["keep_trace"] = False
    if getattr(args, "source", None):
        doc["source_model"] = args.source
    return ExperimentConfig.from_dict(doc)


def _run_and_write(config: ExperimentConfig, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    record, model = run_experiment(config)
    stem = f"{config.experiment}_{config.object_name}_seed{config.seed}"
    (out_dir / f"{stem}.result.json").write_text(result_to_document(record), encoding="utf-8")
    (out_dir / f"{stem}.config.json").write_text(
        json.dumps(record.config, indent=2), encoding="utf-8"
    )
    if model is not None:
        (out_dir / f"{stem}.model.json").write_text(model_to_document(model), encoding="utf-8")
    t = record.tallies
    print(
        f"{stem}: success={t.success} slipped={t.slipped} "
        f"collision={t.collision} miss={t.miss} ({record.duration_seconds:.1f}s)"
    )


def _cmd_sketch(args: argparse.Namespace) -> None:
    obj = get_object(args.object)
    gripper = default_gripper()
    rng = np.random.default_rng(args.seed)
    demos = demonstrate_grasps(obj, gripper, 1, rng)
    sketch = build_rough_sketch(
        obj,
        gripper,
        args.iterations,
        demos[0][0],
        args.position_sigma if args.position_sigma is not None else 0.10,
        args.kappa if args.kappa is not None else 50.0,
        rng,
    )
    Path(args.out).write_text(sketch_to_document(sketch), encoding="utf-8")
    print(f"wrote {args.out}: {len(sketch.proposals)} proposals on {args.object}")


def _cmd_demonstrate(args: argparse.Namespace) -> None:
    obj = get_object(args.object)
    rng = np.random.default_rng(args.seed)
    demos = demonstrate_grasps(obj, default_gripper(), args.count, rng)
    doc = {
        "schema": "graspmc.demos/1",
        "object": args.object,
        "grasps": [
            {"state": g.to_vector().tolist(), "quality": q} for g, q in demos
        ],
    }
    Path(args.out).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    print(f"wrote {args.out}: {len(demos)} demonstrated grasps on {args.object}")


def _cmd_learn(args: argparse.Namespace) -> None:
    for seed in _parse_seeds(args):
        config = _build_config(args, args.experiment, seed)
        _run_and_write(config, Path(args.out_dir))


def _cmd_transfer(args: argparse.Namespace) -> None:
    for seed in _parse_seeds(args):
        config = _build_config(args, args.experiment, seed)
        _run_and_write(config, Path(args.out_dir))


def _cmd_report(args: argparse.Namespace) -> None:
    records = [
        result_from_document(Path(p).read_text(encoding="utf-8")) for p in args.results
    ]
    csv_text, table_text = emit_table(records)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.csv}")
    sys.stdout.write(table_text)


def _cmd_export(args: argparse.Namespace) -> None:
    model = model_from_document(Path(args.model).read_text(encoding="utf-8"))
    doc = export_samples(model, default_gripper(), success_only=args.success_only)
    Path(args.out).write_text(doc, encoding="utf-8")
    print(f"wrote {args.out}")


def _cmd_objects(args: argparse.Namespace) -> None:
    for obj in object_catalog():
        lo, hi = obj.bounds_lo, obj.bounds_hi
        size = hi - lo
        print(f"{obj.name:14s} size {size[0]*1e3:5.0f} x {size[1]*1e3:5.0f} x {size[2]*1e3:5.0f} mm")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="graspmc", description="Kernel-adaptive, mode-hopping MCMC grasp learning"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sketch", help="run a random-walk sketch on an object")
    p.add_argument("--object", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--iterations", type=int, default=1100)
    p.add_argument("--position-sigma", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sketch)

    p = sub.add_parser("demonstrate", help="generate demonstrated grasps")
    p.add_argument("--object", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_demonstrate)

    p = sub.add_parser("learn", help="run a baseline or active-learning preset")
    p.add_argument("--experiment", choices=LEARN_EXPERIMENTS, required=True)
    p.add_argument("--object", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", help="inclusive range a..b for sweeps")
    p.add_argument("--out-dir", default="results")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("transfer", help="run a transfer-learning preset")
    p.add_argument("--experiment", choices=TRANSFER_EXPERIMENTS, required=True)
    p.add_argument("--object", required=True, help="the novel object")
    p.add_argument("--source", required=True, help="LearnedModel JSON from a learn run")
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", help="inclusive range a..b for sweeps")
    p.add_argument("--out-dir", default="results")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("report", help="tabulate result documents")
    p.add_argument("results", nargs="+")
    p.add_argument("--csv", help="also write a comma-separated table")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("export", help="export a plot-ready grasp cloud")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--success-only", action="store_true")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("objects", help="list the object catalog")
    p.set_defaults(func=_cmd_objects)

    args = parser.parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
