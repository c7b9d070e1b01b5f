"""Command-line runner: run, list, replay, validate.

Configurations are single JSON documents; command-line flags only
override individual fields.  Every run writes its CSV/JSON results plus
a manifest carrying the configuration hash, the spec hash and the
library version, with no timestamps, so identical configurations yield
byte-identical artifacts.  The only environment input is SCHATLAB_OUT,
the default output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .experiments import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    parse_config,
    run_experiment,
)
from .ioutil import jsonable_float, read_json, write_csv, write_json
from .matcore import InputError, NumericError
from .metrology import ESTIMATE_KINDS, EstimateReport, reevaluate_witness
from .seqcore import PHI_TABLE

OUTPUT_ENV = "SCHATLAB_OUT"

_SPEC_KINDS = {
    "kp_bicentralizer": "reweight the singular expansion by phi(log(norm/s_n), log n)",
    "lifted_quasilinear": "lift a vector map through the prescribed expansion",
    "lowered": "lower the input index through the polar parts",
    "localized": "precompose with a finite-rank projection",
    "right_multiplication": "f -> f g, the model trivial map",
    "scaled": "scalar multiple of a spec",
    "sum": "sum of specs (empty sum is the zero map)",
}

_QMAP_KINDS = {
    "kp_on_h": "index-2 weighted coordinate map on C^n",
    "linear": "fixed linear map",
    "scaled": "scalar multiple of a vector map",
    "sum": "sum of vector maps",
}

_OPERATIONS = {
    "schatten_norm": "l^p norm of the singular values (operator norm at inf)",
    "concavity_modulus": "best p-triangle constant 2^(1/r - 1) for r < 1",
    "schmidt": "prescribed singular expansion with fixed frame phases",
    "polar": "phase times modulus, phase vanishing on the kernel",
    "modulus_power": "Hermitian PSD power of the modulus",
    "rank_one": "matrix of h -> <h|x> y",
    "holder_factor": "sharp factorization h = f g with multiplying norms",
    "joint_root": "f = a h, g = b h through the joint root, a and b contractive",
    "trace": "sum of diagonal entries",
    "rank_sequence": "positions in the decreasing rearrangement, ties by index",
    "lp_norm": "l^p quasinorm of a finite sequence",
    "kp_phi": "x -> x phi(log(norm/|x|), log rank)",
    "kp_bicentralizer": "weighted singular expansion of a matrix",
    "lift_quasilinear": "sum_k s_k rank_one(x_k, phi(y_k))",
    "lower_s": "spec(u |h|^(p1/p2)) |h|^(p1/s) via the polar parts of h",
    "spatial_part": "vector map read off rank-one values at a fixed frame",
    "trace_functional": "trace(u |f|^(1/2) spec(|f|^(1/2)))",
    "localize": "evaluate the spec at f e for a projection e",
    "estimate_constant": "max defect ratio (Q, L, R or B) over a seeded stream",
    "fit_morphism": "least-squares module morphism plus worst defect ratio",
    "distance_estimate": "max sampled gap between two specs",
    "covariant_defect": "score a candidate index-raised companion of a spec",
    "contravariant_defect": "score a candidate index-dual companion of a spec",
    "gamma_summing_mc": "Monte Carlo Gaussian-average norm of an operator",
    "growth_profile": "dimension sweep writing dim/kind/value/samples/seed rows",
    "twisted_quasinorm": "|g - map(f)|_pY + |f|_pX on pairs",
    "quasinorm_modulus_probe": "empirical concavity modulus of a twisted sum",
    "splitting_distance": "per-dimension residual against module morphisms",
}


def list_builtins() -> str:
    """Human-readable table of registered building blocks."""
    lines = ["phi functions:"]
    for name, phi in sorted(PHI_TABLE.items()):
        extra = f", sup {phi.sup_bound:g}" if phi.sup_bound is not None else ""
        lines.append(f"  {name:24s} Lipschitz {phi.lipschitz:g}{extra}")
    lines.append("spec constructors:")
    for name, text in _SPEC_KINDS.items():
        lines.append(f"  {name:24s} {text}")
    lines.append("vector maps:")
    for name, text in _QMAP_KINDS.items():
        lines.append(f"  {name:24s} {text}")
    lines.append("operations:")
    for name, text in _OPERATIONS.items():
        lines.append(f"  {name:24s} {text}")
    lines.append("experiments:")
    for name, exp in sorted(EXPERIMENTS.items()):
        lines.append(f"  {name:24s} {exp.describe}")
    lines.append("estimate kinds: " + ", ".join(ESTIMATE_KINDS))
    return "\n".join(lines) + "\n"


def _emit_error(doc: dict) -> None:
    print(json.dumps({"error": doc}, sort_keys=True))


def _apply_overrides(doc: dict, args) -> dict:
    doc = dict(doc)
    if args.output is not None:
        doc["output"] = args.output
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.samples is not None:
        doc["samples"] = args.samples
    if args.dims is not None:
        doc["dims"] = [int(d) for d in args.dims.split(",") if d]
    if args.tag is not None:
        doc["tag"] = args.tag
    return doc


def _output_dir(cfg: ExperimentConfig) -> Path:
    if cfg.output:
        return Path(cfg.output)
    base = os.environ.get(OUTPUT_ENV, "schatlab-out")
    return Path(base) / cfg.experiment


def run_config(cfg: ExperimentConfig) -> Path:
    """Execute one experiment and write results.csv/report.json/manifest.json."""
    out = _output_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    config_hash = cfg.hash()
    result = run_experiment(cfg)
    write_csv(out / "results.csv", result["fieldnames"], result["rows"],
              config_hash=config_hash)
    report = {
        "config_hash": config_hash,
        "version": __version__,
        "experiment": cfg.experiment,
        "reports": [rep.to_doc() for rep in result["reports"]],
        "rows": [
            {k: jsonable_float(v) if isinstance(v, float) else v
             for k, v in row.items()}
            for row in result["rows"]
        ],
    }
    if "spec_hash" in result:
        report["spec_hash"] = result["spec_hash"]
    write_json(out / "report.json", report)
    manifest = {
        "config_hash": config_hash,
        "spec_hash": result.get("spec_hash"),
        "version": __version__,
        "experiment": cfg.experiment,
        "artifacts": ["results.csv", "report.json"],
        "config": cfg.doc(),
    }
    write_json(out / "manifest.json", manifest)
    return out


def _cmd_run(args) -> int:
    try:
        doc = _apply_overrides(read_json(args.config), args)
        cfg = parse_config(doc)
    except (ConfigError, InputError) as exc:
        _emit_error(exc.to_doc() if isinstance(exc, ConfigError)
                    else {"type": "config", "message": str(exc)})
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        _emit_error({"type": "config", "message": f"cannot read config: {exc}"})
        return 2
    try:
        out = run_config(cfg)
    except NumericError as exc:
        _emit_error({"type": "numeric", "message": str(exc),
                     "diagnostics": exc.diagnostics})
        return 3
    print(json.dumps({"ok": True, "output": str(out), "config_hash": cfg.hash()},
                     sort_keys=True))
    return 0


def _cmd_validate(args) -> int:
    try:
        cfg = parse_config(read_json(args.config))
    except (ConfigError, InputError) as exc:
        _emit_error(exc.to_doc() if isinstance(exc, ConfigError)
                    else {"type": "config", "message": str(exc)})
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        _emit_error({"type": "config", "message": f"cannot read config: {exc}"})
        return 2
    print(json.dumps({"ok": True, "config_hash": cfg.hash()}, sort_keys=True))
    return 0


def _cmd_replay(args) -> int:
    try:
        doc = read_json(args.report)
        reports = doc.get("reports", [])
        if not reports:
            _emit_error({"type": "replay", "message": "report has no witnesses"})
            return 2
        if not 0 <= args.index < len(reports):
            _emit_error({"type": "replay",
                         "message": f"index {args.index} out of range"})
            return 2
        rep = EstimateReport.from_doc(reports[args.index])
        recomputed = reevaluate_witness(rep)
    except (OSError, json.JSONDecodeError, KeyError, InputError) as exc:
        _emit_error({"type": "replay", "message": str(exc)})
        return 2
    recorded = float(rep.witness["ratio"])
    delta = abs(recomputed - recorded)
    print(json.dumps({
        "kind": rep.kind,
        "recorded": recorded,
        "recomputed": recomputed,
        "delta": delta,
        "ok": delta <= args.atol,
    }, sort_keys=True))
    return 0 if delta <= args.atol else 4


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="schatlab",
        description="seeded experiments on matrix quasinorms and centralizers")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment configuration")
    p_run.add_argument("config", help="path to the JSON configuration")
    p_run.add_argument("--output", help="override the output directory")
    p_run.add_argument("--seed", type=int, help="override the seed")
    p_run.add_argument("--samples", type=int, help="override the sample count")
    p_run.add_argument("--dims", help="override dims, comma separated")
    p_run.add_argument("--tag", help="override the sampler distribution")
    p_run.set_defaults(fn=_cmd_run)

    p_list = sub.add_parser("list", help="list built-in building blocks")
    p_list.set_defaults(fn=lambda args: (print(list_builtins(), end=""), 0)[1])

    p_val = sub.add_parser("validate", help="validate a configuration")
    p_val.add_argument("config")
    p_val.set_defaults(fn=_cmd_validate)

    p_rep = sub.add_parser("replay", help="re-execute a recorded witness sample")
    p_rep.add_argument("report", help="path to a report.json artifact")
    p_rep.add_argument("--index", type=int, default=0,
                       help="which report in the file (default 0)")
    p_rep.add_argument("--atol", type=float, default=1e-12,
                       help="tolerance on the reproduced ratio")
    p_rep.set_defaults(fn=_cmd_replay)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
