"""Experiment runner: every checker and the gallery behind subcommands.

Exit-code contract: 0 means the property held at this scale, 1 means it
failed at this scale, 2 means the run itself was invalid (bad config,
missing recovery rule, dimension too small).  Report payloads are
deterministic for a fixed config and seed; wall-clock metadata is
segregated into ``meta.json`` so payload files are byte-reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .config import (ExperimentConfig, config_to_dict, dumps_config,
                     entry_to_config, load_config, vector_to_dict)
from .criteria import build_cyclic_vector, check_criterion_I, check_criterion_II
from .dynamics import (Verdict, default_density_targets, density_score,
                       transitivity_search)
from .errors import ConfigError, ConvexCyclicError, ScheduleInfeasible
from .gallery import REGISTRY, build_entry, verify_all
from .operators import screen_necessary_conditions
from .spaces import materialize_subspace

EXIT_HELD = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_meta(out: Path, command: str) -> None:
    _write_json(out / "meta.json", {
        "command": command,
        "package_version": __version__,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    })


def _prepare_out(arg: Optional[str], command: str) -> Path:
    out = Path(arg) if arg else Path("runs") / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _poly_payload(P) -> dict:
    return {"coefficients": list(P.coeffs), "degree": P.degree,
            "degree_profile": list(P.degree_profile())}


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "horizon", None) is not None:
        cfg.horizon = args.horizon
    if getattr(args, "epsilon", None) is not None:
        cfg.tolerances.epsilon = args.epsilon
    return cfg


def run_density(cfg: ExperimentConfig, out: Path) -> int:
    if cfg.subspace is None or cfg.family is None:
        raise ConfigError("density runs need 'subspace' and 'family' blocks")
    if cfg.density is None:
        raise ConfigError("density runs need a 'density' block")
    m = materialize_subspace(cfg.subspace, cfg.dim)
    if cfg.density.candidate == "build":
        build = build_cyclic_vector(cfg.criterion_instance(),
                                    cfg.build.j_max if cfg.build else 4,
                                    cfg.build.c if cfg.build else 1.0,
                                    k_step=cfg.build.k_step if cfg.build else 64)
        candidate = build.x
    else:
        candidate = cfg.density.candidate
    if cfg.density.targets == "default":
        targets = default_density_targets(m, count=cfg.density.target_count,
                                          seed=cfg.seed,
                                          radius=cfg.density.target_radius,
                                          p=cfg.p, complex_field=cfg.complex_field)
    else:
        targets = list(cfg.density.targets)
    report = density_score(cfg.operator, candidate, m, cfg.family, targets,
                           epsilon=cfg.tolerances.epsilon,
                           membership_rtol=cfg.tolerances.membership,
                           include_outside=cfg.density.include_outside,
                           workers=cfg.density.workers)

    records = []
    for i, score in enumerate(report.per_target):
        records.append({
            "target_id": i,
            "best_distance": score.best_distance,
            "witness_index": score.witness_index,
            "witness": None if score.witness is None else _poly_payload(score.witness),
        })
    payload = {
        "kind": "density_report",
        "verdict": report.verdict.value,
        "epsilon": report.epsilon,
        "family": config_to_dict(cfg)["family"],
        "orbit_size": report.orbit_size,
        "admissible_orbit_size": report.admissible_orbit_size,
        "per_target": records,
    }
    _write_json(out / "report.json", payload)
    with (out / "records.jsonl").open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        summary_rec = {"record": "summary", "verdict": report.verdict.value,
                       "epsilon": report.epsilon,
                       "worst_distance": max(r["best_distance"] for r in records)}
        fh.write(json.dumps(summary_rec, sort_keys=True) + "\n")
    with (out / "table.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["target_id", "best_distance", "witness_degree_profile"])
        for rec in records:
            profile = "" if rec["witness"] is None else \
                ";".join(str(d) for d in rec["witness"]["degree_profile"])
            writer.writerow([rec["target_id"], repr(rec["best_distance"]), profile])
    held = report.verdict == Verdict.DENSE_AT_SCALE
    lines = [f"density verdict: {report.verdict.value} at epsilon {report.epsilon}",
             f"targets: {len(records)}, orbit {report.orbit_size} "
             f"({report.admissible_orbit_size} inside the subspace)"]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_HELD if held else EXIT_FAILED


def run_criterion(cfg: ExperimentConfig, which: str, out: Path) -> int:
    inst = cfg.criterion_instance()
    horizon = cfg.horizon if cfg.horizon is not None else len(inst.polys)
    check = check_criterion_I if which == "I" else check_criterion_II
    verdict = check(inst, horizon, cfg.tolerances.convergence)
    payload = {
        "kind": "criterion_verdict",
        "which": verdict.which,
        "horizon": verdict.horizon,
        "tolerance": cfg.tolerances.convergence,
        "cond1": {"passed": verdict.cond1.passed,
                  "worst_tail_norm": verdict.cond1.worst_tail_norm},
        "cond2": {"passed": verdict.cond2.passed,
                  "worst_tail_norm": verdict.cond2.worst_tail_norm,
                  "worst_recovery_error": verdict.cond2.worst_recovery_error},
        "cond3": {"passed": verdict.cond3.passed,
                  "details": [{"k": d.k, "passed": d.passed,
                               "max_residual": d.max_residual,
                               "source_index": d.source_index,
                               "landing_index": d.landing_index}
                              for d in verdict.cond3.details]},
        "all_passed": verdict.all_passed,
    }
    _write_json(out / "verdict.json", payload)
    with (out / "decay.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["target_id", "k", "recovery_norm", "recovery_error"])
        from .operators import eval_poly
        from .spaces import norm as _norm
        for y_index, y in enumerate(inst.Y):
            for k in range(1, horizon + 1):
                try:
                    xk = inst.recovery_vector(y_index, k)
                except ConvexCyclicError:
                    continue
                writer.writerow([y_index, k, repr(_norm(xk)),
                                 repr(_norm(eval_poly(inst.poly(k), inst.op, xk) - y))])
    lines = [f"criterion {which} at horizon {horizon}, "
             f"tol {cfg.tolerances.convergence}:",
             f"  condition 1: {'pass' if verdict.cond1.passed else 'FAIL'} "
             f"(worst tail {verdict.cond1.worst_tail_norm:.3e})",
             f"  condition 2: {'pass' if verdict.cond2.passed else 'FAIL'} "
             f"(worst tail {verdict.cond2.worst_tail_norm:.3e}, "
             f"worst recovery {verdict.cond2.worst_recovery_error:.3e})",
             f"  condition 3: {'pass' if verdict.cond3.passed else 'FAIL'}"]
    for d in verdict.cond3.details:
        if not d.passed:
            lines.append(f"    first violation at k={d.k}: residual "
                         f"{d.max_residual:.3e}, source {d.source_index}, "
                         f"landing index {d.landing_index}")
            break
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_HELD if verdict.all_passed else EXIT_FAILED


def run_transitivity(cfg: ExperimentConfig, out: Path) -> int:
    if cfg.subspace is None or cfg.family is None:
        raise ConfigError("transitivity runs need 'subspace' and 'family' blocks")
    if cfg.transitivity is None:
        raise ConfigError("transitivity runs need a 'transitivity' block")
    m = materialize_subspace(cfg.subspace, cfg.dim)
    report = transitivity_search(cfg.operator, m, list(cfg.transitivity.pairs),
                                 cfg.family,
                                 samples_per_ball=cfg.transitivity.samples_per_ball,
                                 seed=cfg.seed,
                                 membership_rtol=cfg.tolerances.membership)
    records = []
    for i, res in enumerate(report.per_pair):
        records.append({
            "pair_id": i,
            "found": res.found,
            "witness_index": res.witness_index,
            "witness": None if res.witness is None else _poly_payload(res.witness),
            "invariance_residual": res.invariance_residual,
        })
    payload = {"kind": "transitivity_report",
               "all_found": report.all_found(),
               "samples_per_ball": report.samples_per_ball,
               "seed": report.seed,
               "per_pair": records}
    _write_json(out / "report.json", payload)
    with (out / "records.jsonl").open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        fh.write(json.dumps({"record": "summary",
                             "all_found": report.all_found()}, sort_keys=True) + "\n")
    found = sum(1 for r in report.per_pair if r.found)
    lines = [f"transitivity: {found}/{len(records)} pairs found witnesses"]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_HELD if report.all_found() else EXIT_FAILED


def run_build(cfg: ExperimentConfig, out: Path) -> int:
    inst = cfg.criterion_instance()
    if cfg.build is None:
        raise ConfigError("build runs need a 'build' block")
    try:
        result = build_cyclic_vector(inst, cfg.build.j_max, cfg.build.c,
                                     k_step=cfg.build.k_step,
                                     membership_rtol=cfg.tolerances.membership)
    except ScheduleInfeasible as err:
        payload = {"kind": "build_result", "feasible": False,
                   "failed_step": err.step, "required": err.required,
                   "best_bound": err.best_bound, "best_k": err.best_k}
        _write_json(out / "trace.json", payload)
        lines = [f"builder infeasible at step {err.step}: required "
                 f"< {err.required:.3e}, best achieved {err.best_bound:.3e}"]
        (out / "summary.txt").write_text("\n".join(lines) + "\n")
        print("\n".join(lines))
        return EXIT_FAILED
    steps = [{"j": s.j, "k": s.k, "xi": s.xi,
              "four_term_bound": s.four_term_bound,
              "post_limit": s.post_limit, "post_error": s.post_error}
             for s in result.steps]
    _write_json(out / "vector.json", vector_to_dict(result.x))
    _write_json(out / "trace.json", {"kind": "build_result", "feasible": True,
                                     "steps": steps})
    with (out / "trace.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "k", "xi", "four_term_bound", "post_limit",
                         "post_error"])
        for s in steps:
            writer.writerow([s["j"], s["k"], repr(s["xi"]),
                             repr(s["four_term_bound"]), repr(s["post_limit"]),
                             repr(s["post_error"])])
    lines = [f"builder succeeded: {len(steps)} steps, indices "
             f"{[s['k'] for s in steps]}"]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_HELD


def run_screen(cfg: ExperimentConfig, out: Path) -> int:
    horizon = cfg.horizon if cfg.horizon is not None else 10
    report = screen_necessary_conditions(cfg.operator, cfg.dim, horizon)
    payload = {"kind": "screen_report",
               "norm_estimate": report.norm_estimate,
               "norm_exceeds_one": report.norm_exceeds_one,
               "power_norms": list(report.power_norms),
               "growth_threshold": report.growth_threshold,
               "growth_attained": report.growth_attained,
               "passed": report.passed}
    _write_json(out / "report.json", payload)
    lines = [f"screen: norm {report.norm_estimate:.6g} "
             f"({'>' if report.norm_exceeds_one else '<='} 1), growth "
             f"{'attained' if report.growth_attained else 'NOT attained'} "
             f"within horizon {horizon}",
             f"screen {'passed' if report.passed else 'failed'} "
             "(necessary conditions only; passing proves nothing)"]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_HELD if report.passed else EXIT_FAILED


def run_gallery(args) -> int:
    if args.gallery_command == "list":
        for name in sorted(REGISTRY):
            print(name)
        return EXIT_HELD
    if args.gallery_command == "dump":
        try:
            entry = build_entry(args.name)
        except KeyError as err:
            print(err.args[0], file=sys.stderr)
            return EXIT_INVALID
        text = dumps_config(entry_to_config(entry))
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_HELD
    if args.gallery_command == "verify-all":
        started = time.monotonic()
        results = verify_all()
        failures = 0
        for name, problems in results.items():
            if problems:
                failures += 1
                print(f"entry {name}: MISMATCH")
                for p in problems:
                    print(f"  - {p}")
            else:
                print(f"entry {name}: ok")
        elapsed = time.monotonic() - started
        print(f"verified {len(results)} entries in {elapsed:.1f}s, "
              f"{failures} mismatching")
        if args.out:
            out = _prepare_out(args.out, "gallery")
            _write_json(out / "verify.json",
                        {name: probs for name, probs in results.items()})
        return EXIT_HELD if failures == 0 else EXIT_FAILED
    raise AssertionError("unreachable gallery command")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexcyclic",
        description="Finite-truncation diagnostics for subspace convex-cyclic "
                    "operator dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, horizon=True, epsilon=False):
        p.add_argument("--config", required=True, help="experiment config path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        if horizon:
            p.add_argument("--horizon", type=int, default=None)
        if epsilon:
            p.add_argument("--epsilon", type=float, default=None)

    add_common(sub.add_parser("density", help="orbit-density diagnostic"),
               epsilon=True)
    crit = sub.add_parser("criterion", help="criterion condition checks")
    add_common(crit)
    crit.add_argument("--which", choices=["I", "II"], required=True)
    add_common(sub.add_parser("transitivity", help="ball-pair witness search"))
    add_common(sub.add_parser("build", help="construct a cyclic-vector candidate"))
    add_common(sub.add_parser("screen", help="necessary-condition screen"))

    gal = sub.add_parser("gallery", help="named example instances")
    gal_sub = gal.add_subparsers(dest="gallery_command", required=True)
    gal_sub.add_parser("list")
    dump = gal_sub.add_parser("dump")
    dump.add_argument("name")
    dump.add_argument("--out", default=None)
    verify = gal_sub.add_parser("verify-all")
    verify.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gallery":
        return run_gallery(args)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        out = _prepare_out(args.out, args.command)
        _write_meta(out, args.command)
        if args.command == "density":
            return run_density(cfg, out)
        if args.command == "criterion":
            return run_criterion(cfg, args.which, out)
        if args.command == "transitivity":
            return run_transitivity(cfg, out)
        if args.command == "build":
            return run_build(cfg, out)
        if args.command == "screen":
            return run_screen(cfg, out)
    except ScheduleInfeasible as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return EXIT_FAILED
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except ConvexCyclicError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INVALID
    raise AssertionError("unreachable command")


def entrypoint() -> None:
    sys.exit(main())
