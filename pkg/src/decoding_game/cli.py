"""Command-line surface.

Subcommands: rank, calibrate, simulate, sweep, oracle, synth. Dynamics flags
are shared; a JSON config file may supply any of them, with explicit flags
taking precedence. Two environment variables are honored:
DECODING_GAME_OUT_DIR (directory for default-named outputs) and
DECODING_GAME_JOBS (default worker count).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import io as dgio
from . import oracle as dgoracle
from .baselines import BASELINE_RANKERS, build_report, inconsistency_pct
from .calibration import reliability_conditions, solve_eta_star
from .core import markovian_step, preference_order, run_game
from .runner import run_batch
from .schedules import make_stepper
from .types import (
    CalibrationInput,
    GameConfig,
    GameInstance,
    PvgConfig,
    SyntheticSpec,
)

ENV_OUT_DIR = "DECODING_GAME_OUT_DIR"
ENV_JOBS = "DECODING_GAME_JOBS"

_DYNAMICS_DEFAULTS = {
    "schedule": "markovian",
    "eta_g": 0.1,
    "eta_v": 0.1,
    "lambda_g": 0.1,
    "lambda_v": 0.1,
    "sigma": 1e-3,
    "max_iters": 5000,
    "eta_bar": 0.5,
    "final_score": "product",
    "seed": 0,
    "prover": "honest",
    "rank_sigma": None,
}


def _add_dynamics_flags(p: argparse.ArgumentParser, listy: bool = False) -> None:
    """Flags shared by the game-running subcommands.

    With listy=True the numeric/schedule flags accept comma-separated grids
    (used by sweep). Defaults stay None so the config file can fill them.
    """
    t = str if listy else float
    p.add_argument("--schedule", help="markovian | window:N | full | pvg")
    p.add_argument("--eta-g", dest="eta_g", type=t, help="generator learning rate")
    p.add_argument("--eta-v", dest="eta_v", type=t, help="verifier learning rate")
    p.add_argument("--lambda-g", dest="lambda_g", type=t, help="generator stiffness")
    p.add_argument("--lambda-v", dest="lambda_v", type=t, help="verifier stiffness")
    p.add_argument("--sigma", type=t, help="equilibrium gap tolerance")
    p.add_argument("--max-iters", dest="max_iters", type=int, help="iteration cap")
    p.add_argument("--eta-bar", dest="eta_bar", type=float, help="calibration mixing cap")
    p.add_argument("--final-score", dest="final_score", choices=["product", "verifier"],
                   help="final decode score rule")
    p.add_argument("--seed", type=int, help="run seed (recorded in config)")
    p.add_argument("--prover", choices=["honest", "sneaky"], help="pvg prover type")
    p.add_argument("--rank-sigma", dest="rank_sigma", type=float,
                   help="pvg Gaussian rank-target std (default n/4)")
    p.add_argument("--config", help="JSON file of flag defaults (flags win)")


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default name under DECODING_GAME_OUT_DIR)")
    p.add_argument("--trace", help="write per-iteration trace CSV here "
                                   "(summary CSV lands next to it as *.summary.csv)")
    p.add_argument("--jobs", type=int, help="parallel workers (default DECODING_GAME_JOBS or 1)")
    p.add_argument("--strict", action="store_true",
                   help="exit nonzero when any instance fails")


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SystemExit(f"config {path}: expected a JSON object")
    return data


def _resolve(args: argparse.Namespace, config: dict, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return _DYNAMICS_DEFAULTS[key]


def _parse_schedule(text: str) -> tuple[str, int]:
    if text == "full":
        return "full_history", 1
    if text.startswith("window:"):
        w = int(text.split(":", 1)[1])
        return "window", w
    if text in ("markovian", "full_history", "pvg", "window"):
        return ("window", 1) if text == "window" else (text, 1)
    raise SystemExit(f"unknown schedule {text!r} (markovian | window:N | full | pvg)")


def _build_config(args: argparse.Namespace, config: dict) -> GameConfig:
    schedule, w = _parse_schedule(str(_resolve(args, config, "schedule")))
    final = str(_resolve(args, config, "final_score"))
    rank_sigma = _resolve(args, config, "rank_sigma")
    cfg = GameConfig(
        schedule=schedule,
        window_w=w,
        eta_g=float(_resolve(args, config, "eta_g")),
        eta_v=float(_resolve(args, config, "eta_v")),
        lambda_g=float(_resolve(args, config, "lambda_g")),
        lambda_v=float(_resolve(args, config, "lambda_v")),
        sigma=float(_resolve(args, config, "sigma")),
        max_iters=int(_resolve(args, config, "max_iters")),
        seed=int(_resolve(args, config, "seed")),
        final_score_rule="verifier_only" if final == "verifier" else final,
        pvg=PvgConfig(
            prover_type=str(_resolve(args, config, "prover")),
            rank_sigma=None if rank_sigma is None else float(rank_sigma),
        ),
    )
    cfg.validate()
    return cfg


def _jobs(args: argparse.Namespace) -> int:
    if getattr(args, "jobs", None) is not None:
        return max(1, args.jobs)
    env = os.environ.get(ENV_JOBS)
    return max(1, int(env)) if env else 1


def _out_path(args: argparse.Namespace, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    base = Path(os.environ.get(ENV_OUT_DIR, "."))
    base.mkdir(parents=True, exist_ok=True)
    return base / default_name


def _read_instances(path: str, strict: bool) -> tuple[list[GameInstance], list, int]:
    """Returns (instances, parse errors, exit code from errors)."""
    try:
        instances, errors = dgio.parse_instances(path)
    except (OSError, ValueError) as exc:
        raise SystemExit(f"error: {exc}")
    for err in errors:
        print(f"parse error line {err.line_no}: {err.message}", file=sys.stderr)
    return instances, errors, (1 if strict and errors else 0)


def _summary_path(trace_path: Path) -> Path:
    return trace_path.with_name(trace_path.stem + ".summary.csv")


def _write_traces(outcomes, cfg: GameConfig, trace: Optional[str]) -> None:
    if not trace:
        return
    trace_path = Path(trace)
    results = [o.result for o in outcomes if o.result is not None]
    dgio.emit_traces(results, trace_path, schedule=cfg.schedule)
    dgio.emit_summary(outcomes, _summary_path(trace_path))


def _cmd_rank(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    cfg = _build_config(args, config)
    instances, parse_errors, code = _read_instances(args.input, args.strict)
    outcomes = run_batch(instances, cfg, eta_bar=float(_resolve(args, config, "eta_bar")),
                         jobs=_jobs(args))

    out_path = _out_path(args, "ranked.jsonl")
    failed = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for out in outcomes:
            if out.error is not None:
                failed += 1
                fh.write(json.dumps({"id": out.instance.instance_id, "error": out.error},
                                    separators=(",", ":")) + "\n")
                continue
            inst, res = out.instance, out.result
            ranking = [inst.candidates[int(i)].candidate_id for i in res.final_ranking]
            top1 = {"BDG": out.top1_after}
            for name, ranker in BASELINE_RANKERS.items():
                top1[name] = inst.candidates[int(ranker(inst)[0])].candidate_id
            fh.write(json.dumps({
                "id": inst.instance_id,
                "ranking": ranking,
                "final_scores": {inst.candidates[j].candidate_id: float(res.final_scores[j])
                                 for j in range(inst.n)},
                "converged": res.converged,
                "iterations": res.iterations_used,
                "top1": top1,
            }, separators=(",", ":")) + "\n")
    _write_traces(outcomes, cfg, args.trace)

    ok = [o for o in outcomes if o.result is not None]
    if ok:
        g_rank = {o.instance.instance_id: (o.top1_before,) for o in ok}
        bdg_rank = {o.instance.instance_id: (o.top1_after,) for o in ok}
        inc = inconsistency_pct(bdg_rank, g_rank)
        print(f"ranked {len(ok)} instances -> {out_path} "
              f"(converged {sum(o.result.converged for o in ok)}/{len(ok)}, "
              f"BDG-vs-G top-1 disagreement {inc:.1f}%)")
    if failed:
        print(f"{failed} instance(s) failed; records in {out_path}", file=sys.stderr)
    return 1 if args.strict and (failed or parse_errors) else code


def _cmd_calibrate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    cfg = _build_config(args, config)
    instances, parse_errors, code = _read_instances(args.input, args.strict)
    outcomes = run_batch(instances, cfg, eta_bar=float(_resolve(args, config, "eta_bar")),
                         jobs=_jobs(args))

    out_path = _out_path(args, "calibrated.jsonl")
    failed = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for out in outcomes:
            if out.error is not None:
                failed += 1
                fh.write(json.dumps({"id": out.instance.instance_id, "error": out.error},
                                    separators=(",", ":")) + "\n")
                continue
            inst, cal = out.instance, out.calibration
            fh.write(json.dumps({
                "id": inst.instance_id,
                "eta_star": cal.eta_star,
                "reliable": cal.reliable,
                "labels": {inst.candidates[j].candidate_id: cal.labels[j]
                           for j in range(inst.n)},
                "specious_count": sum(1 for lab in cal.labels if lab == "Specious"),
            }, separators=(",", ":")) + "\n")
    _write_traces(outcomes, cfg, args.trace)
    reliable = sum(1 for o in outcomes if o.calibration and o.calibration.reliable)
    print(f"calibrated {len(outcomes) - failed} instances -> {out_path} "
          f"(reliable {reliable})")
    if failed:
        print(f"{failed} instance(s) failed; records in {out_path}", file=sys.stderr)
    return 1 if args.strict and (failed or parse_errors) else code


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    cfg = _build_config(args, config)
    instances, parse_errors, code = _read_instances(args.input, args.strict)
    outcomes = run_batch(instances, cfg, eta_bar=float(_resolve(args, config, "eta_bar")),
                         jobs=_jobs(args))

    trace = args.trace or str(_out_path(args, f"trace_{cfg.schedule}.csv"))
    _write_traces(outcomes, cfg, trace)
    results = [o.result for o in outcomes if o.result is not None]
    iters = np.array([r.iterations_used for r in results])
    conv = sum(r.converged for r in results)
    print(f"schedule={cfg.schedule} instances={len(results)} converged={conv} "
          f"median_iters={float(np.median(iters)) if len(iters) else float('nan')} "
          f"trace={trace}")
    failed = len(outcomes) - len(results)
    return 1 if args.strict and (failed or parse_errors) else code


def _split_values(raw, cast) -> list:
    if raw is None:
        return [None]
    return [cast(tok) for tok in str(raw).split(",") if tok != ""]


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    instances, parse_errors, code = _read_instances(args.input, args.strict)

    schedules = _split_values(args.schedule or config.get("schedule") or "markovian", str)
    etas_g = _split_values(args.eta_g or config.get("eta_g") or "0.1", float)
    etas_v = _split_values(args.eta_v or config.get("eta_v") or "0.1", float)
    lambdas_g = _split_values(args.lambda_g or config.get("lambda_g") or "0.1", float)
    lambdas_v = _split_values(args.lambda_v or config.get("lambda_v") or "0.1", float)
    sigmas = _split_values(args.sigma or config.get("sigma") or "1e-3", float)
    max_iters = int(args.max_iters or config.get("max_iters") or 500)

    out_path = _out_path(args, "sweep.csv")
    jobs = _jobs(args)
    rows = 0
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("schedule,eta_g,eta_v,lambda_g,lambda_v,sigma,"
                 "converged_frac,median_iters,mean_regret_g,mean_regret_v\n")
        for sched_text in schedules:
            schedule, w = _parse_schedule(sched_text)
            for eta_g in etas_g:
                for eta_v in etas_v:
                    for lam_g in lambdas_g:
                        for lam_v in lambdas_v:
                            for sigma in sigmas:
                                cfg = GameConfig(
                                    schedule=schedule, window_w=w,
                                    eta_g=eta_g, eta_v=eta_v,
                                    lambda_g=lam_g, lambda_v=lam_v,
                                    sigma=sigma, max_iters=max_iters,
                                )
                                cfg.validate()
                                outcomes = run_batch(instances, cfg, jobs=jobs)
                                results = [o.result for o in outcomes if o.result]
                                iters = np.array([r.iterations_used for r in results])
                                fh.write(
                                    f"{sched_text},{eta_g!r},{eta_v!r},{lam_g!r},{lam_v!r},{sigma!r},"
                                    f"{(sum(r.converged for r in results) / len(results))!r},"
                                    f"{float(np.median(iters))!r},"
                                    f"{float(np.mean([r.regret_g for r in results]))!r},"
                                    f"{float(np.mean([r.regret_v for r in results]))!r}\n"
                                )
                                rows += 1
    print(f"sweep wrote {rows} row(s) -> {out_path}")
    return code


def _cmd_oracle(args: argparse.Namespace) -> int:
    """Built-in verification suite; prints one PASS/FAIL line per check."""
    failures = 0

    def report(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1

    import math

    for n, want in ((2, 2), (3, 6), (4, 24)):
        profiles = dgoracle.enumerate_equilibria(n)
        report(f"equilibria(n={n})", len(profiles) == want,
               f"{len(profiles)} fixed-point profiles (expected {want})")

    rng = np.random.default_rng(7)
    mismatches = 0
    existence_disagreements = 0
    trials = 200
    for _ in range(trials):
        n = int(rng.integers(4, 9))
        c = np.sort(rng.uniform(size=n))[::-1]
        da = rng.uniform(size=n)
        correct = tuple(range(n // 2))
        incorrect = tuple(range(n // 2, n))
        inp = CalibrationInput(c=c, da=da, cutoff_correct=correct,
                               cutoff_incorrect=incorrect, eta_bar=0.5)
        res = solve_eta_star(inp)
        cond1, cond2 = reliability_conditions(inp)
        if res.reliable != (cond1 and cond2) or res.reliable != (res.eta_star is not None):
            existence_disagreements += 1
        if res.eta_star is not None:
            grid = dgoracle.grid_eta_star(inp, 1e-4)
            if grid is None or abs(grid - res.eta_star) > 1e-3:
                mismatches += 1
    report("eta-star-grid", mismatches == 0, f"{mismatches}/{trials} grid mismatches")
    report("eta-star-existence", existence_disagreements == 0,
           f"{existence_disagreements}/{trials} existence disagreements")

    from .core import cumulative_regret

    worst = 0.0
    for seed in range(20):
        spec = SyntheticSpec(num_instances=1, n=5, seed=seed)
        inst = dgio.generate_synthetic(spec)[0]
        res = run_game(inst, GameConfig(max_iters=200))
        history = _replay_history(inst, GameConfig(max_iters=res.iterations_used))
        rg, rv = cumulative_regret(history)
        worst = max(worst,
                    abs(rg - dgoracle.definitional_regret(history, "generator")),
                    abs(rv - dgoracle.definitional_regret(history, "verifier")))
    report("regret-definition", worst < 1e-9, f"max deviation {worst:.2e}")

    spec = SyntheticSpec(num_instances=5, n=6, seed=11)
    identical = True
    for inst in dgio.generate_synthetic(spec):
        from .core import init_policies

        cfg_m = GameConfig(schedule="markovian")
        cfg_w = GameConfig(schedule="window", window_w=1, window_compat=True)
        s_m = init_policies(inst)
        s_w = init_policies(inst)
        step_w = make_stepper(s_w, cfg_w)
        for _ in range(200):
            s_m = markovian_step(s_m, cfg_m)
            s_w = step_w(s_w)
            if not (np.array_equal(s_m.a_g, s_w.a_g) and np.array_equal(s_m.a_v, s_w.a_v)):
                identical = False
                break
    report("window1-markovian-identity", identical, "200-step trajectories bitwise equal")

    return 0 if failures == 0 else 1


def _replay_history(inst: GameInstance, cfg: GameConfig) -> list:
    """Recorded state sequence of a run, for regret cross-checks."""
    from .core import belief_update, init_policies

    state = init_policies(inst)
    stepper = make_stepper(state, cfg)
    history = [state.copy()]
    for _ in range(cfg.max_iters):
        state = belief_update(state)
        state = stepper(state)
        history.append(state.copy())
    return history


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        num_instances=args.num,
        n=args.n,
        seed=args.seed if args.seed is not None else 0,
        alpha=args.alpha,
        noise=args.noise,
        planted_gold=args.planted_gold,
    )
    spec.validate()
    instances = dgio.generate_synthetic(spec)
    out_path = _out_path(args, "instances.jsonl")
    dgio.emit_instances(instances, out_path)
    print(f"wrote {len(instances)} instance(s) -> {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoding-game",
        description="Game-theoretic reranking of candidate answers via "
                    "generator/verifier equilibrium dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="run the game and rerank candidates")
    p_rank.add_argument("input", help="instance file (line-delimited JSON)")
    _add_dynamics_flags(p_rank)
    _add_io_flags(p_rank)
    p_rank.set_defaults(func=_cmd_rank)

    p_cal = sub.add_parser("calibrate", help="run the reliability stage, emit labels")
    p_cal.add_argument("input")
    _add_dynamics_flags(p_cal)
    _add_io_flags(p_cal)
    p_cal.set_defaults(func=_cmd_calibrate)

    p_sim = sub.add_parser("simulate", help="run one schedule, emit traces")
    p_sim.add_argument("input")
    _add_dynamics_flags(p_sim)
    _add_io_flags(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="grid over eta, lambda, sigma, schedule")
    p_sweep.add_argument("input")
    _add_dynamics_flags(p_sweep, listy=True)
    _add_io_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="run the built-in verification suite")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_synth = sub.add_parser("synth", help="generate seeded synthetic instances")
    p_synth.add_argument("--num", type=int, required=True, help="instance count")
    p_synth.add_argument("--n", type=int, default=10, help="candidates per instance")
    p_synth.add_argument("--alpha", type=float, default=1.0, help="generator concentration")
    p_synth.add_argument("--noise", type=float, default=0.5, help="verifier noise in [0, 1]")
    p_synth.add_argument("--seed", type=int, default=0)
    gold = p_synth.add_mutually_exclusive_group()
    gold.add_argument("--planted-gold", dest="planted_gold", action="store_true", default=True)
    gold.add_argument("--no-planted-gold", dest="planted_gold", action="store_false")
    p_synth.add_argument("--out")
    p_synth.set_defaults(func=_cmd_synth)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
