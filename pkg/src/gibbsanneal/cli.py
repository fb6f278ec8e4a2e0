"""``gibbsanneal`` command line: estimate, schedule and exact subcommands.

Exit codes: 0 success, 1 input error, 2 sample size beyond the feasibility
limit without ``--allow-infeasible``.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Bounds, GrossGibbsModel, curvature_schedule, exact_bounds, log_partition, log_ratio, maxwidth
from .errors import AnnealError, InfeasibleSampleSize
from .fileio import instance_from_spec, parse_graph, parse_histogram, parse_spec, read_text, to_json
from .models import BUILTIN_NAMES, builtin
from .models.instance import ModelInstance
from .models.ising import ising_marginal_bound_check, ising_rc_identity_check
from .oracle import ExactOracle
from .pipeline import (
    NONADAPTIVE_KAPPA,
    THREE_ROUND_KAPPA_CAP,
    estimate_nonadaptive,
    estimate_three_round,
    estimate_tpa,
    median_boost,
    pipeline_theta,
)
from .schedules import parse_beta, pseudo_tpa, pseudo_tpa_k, static_schedule, tpa_union

ALGORITHMS = ("static", "three-round", "tpa")


@dataclass
class RunConfig:
    command: str
    model: str | None
    graph: str | None
    spec: str | None
    histogram: str | None
    algorithm: str
    eps: float
    delta: float | None
    seed: int
    kappa_cap: float | None
    oracle: str
    steps_per_sample: int | None
    out: str | None
    workers: int | None
    allow_infeasible: bool
    q: float | None
    h: float | None
    beta_min: float | None
    beta_max: float | None
    theta: float | None


@dataclass
class Source:
    name: str
    model: GrossGibbsModel | None
    bounds: Bounds | None
    instance: ModelInstance | None = None


def _beta_arg(text: str) -> float:
    try:
        return parse_beta(text)
    except Exception:
        raise argparse.ArgumentTypeError(f"not a beta value: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gibbsanneal", description="Annealing estimates of Gibbs partition-function ratios.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source_flags(p):
        g = p.add_argument_group("model source (pick one)")
        g.add_argument("--model", help=f"built-in model: {', '.join(BUILTIN_NAMES)}")
        g.add_argument("--graph", help="edge-list file (header 'n m', then 'u v' lines)")
        g.add_argument("--spec", help="key=value model spec, used with --graph")
        g.add_argument("--histogram", help="histogram file of 'x log_c' lines")
        b = p.add_argument_group("annealing interval and bounds")
        b.add_argument("--q", type=float, help="upper bound on ln Q")
        b.add_argument("--h", type=float, help="upper bound on E[H] at beta_max")
        b.add_argument("--beta-min", type=_beta_arg, help="start of the interval ('-inf' allowed)")
        b.add_argument("--beta-max", type=_beta_arg, help="end of the interval")

    def run_flags(p, algorithms=ALGORITHMS):
        p.add_argument("--algorithm", choices=algorithms, default="static")
        p.add_argument("--eps", type=float, default=0.1, help="target accuracy for ln Q (default 0.1)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--kappa-cap", type=float, help="curvature cap setting the PPE sample size")
        p.add_argument("--oracle", choices=("exact", "glauber"), default="exact")
        p.add_argument("--steps-per-sample", type=int, help="Glauber steps per draw (default: 10 m ln m)")
        p.add_argument("--workers", type=int, help="worker threads (default: $ANNEAL_WORKERS or CPU count)")
        p.add_argument("--allow-infeasible", action="store_true", help="run even when the sample size is astronomically large")
        p.add_argument("--out", help="write output here instead of stdout")

    est = sub.add_parser("estimate", help="estimate ln Q (and ln Z for graph models)")
    source_flags(est)
    run_flags(est)
    est.add_argument("--delta", type=float, help="boost to failure probability delta by the median of replicas")

    sch = sub.add_parser("schedule", help="build a cooling schedule and report diagnostics")
    source_flags(sch)
    run_flags(sch)
    sch.add_argument("--theta", type=float, help="width parameter (default 1/(4 ln h))")

    ex = sub.add_parser("exact", help="exact values by enumeration")
    source_flags(ex)
    ex.add_argument("--out")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    get = lambda k, d=None: getattr(args, k, d)  # noqa: E731
    return RunConfig(
        command=args.command, model=args.model, graph=args.graph, spec=args.spec, histogram=args.histogram,
        algorithm=get("algorithm", "static"), eps=get("eps", 0.1), delta=get("delta"), seed=get("seed", 0),
        kappa_cap=get("kappa_cap"), oracle=get("oracle", "exact"), steps_per_sample=get("steps_per_sample"),
        out=get("out"), workers=get("workers"), allow_infeasible=get("allow_infeasible", False),
        q=args.q, h=args.h, beta_min=args.beta_min, beta_max=args.beta_max, theta=get("theta"),
    )


class InputError(AnnealError):
    pass


def _source(cfg: RunConfig, require_model: bool) -> Source:
    chosen = [k for k in ("model", "graph", "histogram") if getattr(cfg, k)]
    if cfg.spec and not cfg.graph:
        raise InputError("--spec needs --graph")
    if len(chosen) > 1:
        raise InputError("give exactly one model source: --model, --graph/--spec or --histogram")
    if not chosen:
        if require_model:
            raise InputError("a model source is required: --model, --graph/--spec or --histogram")
        return Source("bounds-only", None, _override_bounds(cfg, None))
    if cfg.model:
        inst = builtin(cfg.model)
    elif cfg.graph:
        if not cfg.spec:
            raise InputError("--graph needs --spec")
        inst = instance_from_spec(cfg.graph, parse_graph(read_text(cfg.graph)), parse_spec(read_text(cfg.spec)))
    else:
        model = parse_histogram(read_text(cfg.histogram))
        return Source(cfg.histogram, model, _override_bounds(cfg, model))
    return Source(inst.name, inst.model, _override_bounds(cfg, inst.model, inst.pipeline_bounds), inst)


def _override_bounds(cfg: RunConfig, model: GrossGibbsModel | None, base: Bounds | None = None) -> Bounds:
    """Bounds from flags, filling gaps from ``base`` or from the exact model."""
    bmin = cfg.beta_min if cfg.beta_min is not None else (base.beta_min if base else -math.inf)
    bmax = cfg.beta_max if cfg.beta_max is not None else (base.beta_max if base else 0.0)
    q, h = cfg.q, cfg.h
    if base is not None and (bmin, bmax) == (base.beta_min, base.beta_max):
        q = base.q if q is None else q
        h = base.h if h is None else h
    if (q is None or h is None) and model is not None:
        eq, eh = exact_bounds(model, bmin, bmax)
        q = max(eq, 1e-12) if q is None else q
        h = max(eh, 2.0) if h is None else h
    if q is None or h is None:
        raise InputError("--q and --h are required when no exact model supplies them")
    return Bounds(q=q, h=h, beta_min=bmin, beta_max=bmax)


def _oracle(cfg: RunConfig, src: Source):
    if cfg.oracle == "glauber":
        if src.instance is None:
            raise InputError("--oracle glauber needs a graph model (--model or --graph/--spec)")
        return src.instance.glauber_oracle(cfg.seed, cfg.steps_per_sample)
    return ExactOracle(src.model, cfg.seed)


def _check_eps(cfg: RunConfig) -> None:
    if not 0 < cfg.eps < 0.5:
        raise InputError(f"--eps must lie in (0, 1/2), got {cfg.eps}")


def cmd_estimate(cfg: RunConfig) -> dict:
    _check_eps(cfg)
    src = _source(cfg, require_model=True)
    oracle = _oracle(cfg, src)
    bounds = src.bounds

    def run(rng):
        if cfg.algorithm == "static":
            return estimate_nonadaptive(oracle, bounds, cfg.eps, rng, cfg.workers, cfg.allow_infeasible)
        if cfg.algorithm == "three-round":
            cap = THREE_ROUND_KAPPA_CAP if cfg.kappa_cap is None else cfg.kappa_cap
            return estimate_three_round(oracle, bounds, cfg.eps, rng, cap, cfg.workers, cfg.allow_infeasible)
        cap = NONADAPTIVE_KAPPA if cfg.kappa_cap is None else cfg.kappa_cap
        return estimate_tpa(oracle, bounds, cfg.eps, rng, cap, cfg.workers, cfg.allow_infeasible)

    if cfg.delta is not None:
        report = median_boost(run, cfg.delta, cfg.seed, cfg.workers)
    else:
        report = run(cfg.seed)
    out = {"model": src.name, "oracle": cfg.oracle}
    if cfg.oracle == "glauber":
        out["steps_per_sample"] = oracle.steps
    out.update(report.to_dict())
    out["oracle_draws"] = oracle.draws
    if src.model is not None:
        out["log_q_exact"] = log_ratio(src.model, bounds.beta_min, bounds.beta_max)
        out["abs_error"] = abs(report.log_q_hat - out["log_q_exact"])
        out["log_z_min"] = log_partition(src.model, bounds.beta_min)
        scale = src.instance.log_scale if src.instance is not None else 0.0
        out["log_z_hat"] = report.log_q_hat + out["log_z_min"] + scale
    return out


def cmd_schedule(cfg: RunConfig) -> tuple[dict, str]:
    src = _source(cfg, require_model=False)
    bounds = src.bounds
    theta = cfg.theta if cfg.theta is not None else pipeline_theta(bounds)
    diag: dict = {"algorithm": cfg.algorithm, "theta": theta, "q": bounds.q, "h": bounds.h,
                  "beta_min": bounds.beta_min, "beta_max": bounds.beta_max}
    if cfg.algorithm == "static":
        schedule = static_schedule(bounds, theta)
    else:
        if src.model is None:
            raise InputError(f"--algorithm {cfg.algorithm} samples, so it needs a model source")
        oracle = _oracle(cfg, src)
        rng = np.random.default_rng(cfg.seed)
        if cfg.algorithm == "three-round":
            schedule, tr = pseudo_tpa(oracle, bounds, theta, rng, cfg.workers)
            diag["samples_by_round"] = tr.samples_by_round
        else:
            schedule = tpa_union(oracle, bounds, pseudo_tpa_k(theta), rng, cfg.workers)
        diag["samples_total"] = oracle.draws
    diag["length"] = len(schedule)
    diag["schedule"] = list(schedule.betas)
    if src.model is not None:
        mw = maxwidth(src.model, schedule.betas)
        kappa = curvature_schedule(src.model, schedule.betas)
        diag["maxwidth"] = mw
        diag["curvature"] = kappa
        q_exact, h_exact = exact_bounds(src.model, bounds.beta_min, bounds.beta_max)
        diag["curvature_bound"] = 4.0 * mw * math.log(h_exact / mw) if 0 < mw < h_exact else None
        diag["log_q_exact"] = q_exact
    return diag, schedule.to_text()


def cmd_exact(cfg: RunConfig) -> dict:
    src = _source(cfg, require_model=True)
    b = src.bounds
    out = {
        "model": src.name,
        "beta_min": b.beta_min,
        "beta_max": b.beta_max,
        "log_q": log_ratio(src.model, b.beta_min, b.beta_max),
        "log_z_min": log_partition(src.model, b.beta_min),
        "log_z_max": log_partition(src.model, b.beta_max),
        "support": [[x, c] for x, c in zip(src.model.x, src.model.log_c)],
    }
    inst = src.instance
    if inst is not None:
        out["kind"] = inst.kind
        out["log_z"] = inst.exact_log_z()
        out["log_z_direct"] = inst.direct_log_z()
        out["q_bound"] = inst.bounds.q
        out["h_bound"] = inst.bounds.h
        if inst.kind == "ising":
            out["ising_rc_identity_error"] = ising_rc_identity_check(inst.graph, inst.spec)
            out["marginal_bound_violation"] = ising_marginal_bound_check(inst.graph, inst.spec)
    return out


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 is reserved for infeasible runs here
        return 1 if exc.code == 2 else int(exc.code or 0)
    cfg = _config(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if cfg.command == "estimate":
                _emit(to_json(cmd_estimate(cfg)) + "\n", cfg.out)
            elif cfg.command == "schedule":
                diag, text = cmd_schedule(cfg)
                if cfg.out:
                    _emit(text, cfg.out)
                    diag["schedule_file"] = cfg.out
                sys.stdout.write(to_json(diag) + "\n")
            else:
                _emit(to_json(cmd_exact(cfg)) + "\n", cfg.out)
    except InfeasibleSampleSize as exc:
        print(f"gibbsanneal: infeasible sample size: {exc}", file=sys.stderr)
        return 2
    except (AnnealError, ValueError, OSError) as exc:
        print(f"gibbsanneal: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
