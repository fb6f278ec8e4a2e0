"""End-to-end estimators of ln Q and median boosting."""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ._parallel import pmap
from .core import Bounds
from .errors import InfeasibleSampleSize, InvalidParameter
from .oracle import Oracle, TracingOracle
from .ppe import ppe_estimate, required_k
from .schedules import Schedule, pseudo_tpa, pseudo_tpa_k, static_schedule, tpa_union

# PPE sample sizes beyond this need allow_infeasible=True.
MAX_FEASIBLE_K = 10**10
NONADAPTIVE_KAPPA = 3.0
THREE_ROUND_KAPPA_CAP = 30.0


@dataclass
class EstimateReport:
    log_q_hat: float
    schedule: Schedule
    samples_total: int
    samples_by_round: list
    epsilon: float
    algorithm: str
    seed: int | None
    kappa_cap: float
    k: int
    transcript: object = field(default=None, repr=False, compare=False)
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def rounds(self) -> int:
        return len(self.samples_by_round)

    def to_dict(self) -> dict:
        return {
            "log_q_hat": self.log_q_hat,
            "schedule": [float(b) for b in self.schedule.betas],
            "samples_total": int(self.samples_total),
            "samples_by_round": [int(s) for s in self.samples_by_round],
            "epsilon": self.epsilon,
            "algorithm": self.algorithm,
            "seed": self.seed,
            "kappa_cap": self.kappa_cap,
            "k": int(self.k),
            "rounds": self.rounds,
            **self.extras,
        }


def as_generator(rng) -> tuple[np.random.Generator, int | None]:
    """Accept a seed or a Generator; report the seed when there is one."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    seed = int(rng)
    return np.random.default_rng(seed), seed


def pipeline_theta(bounds: Bounds) -> float:
    if bounds.h < 2:
        raise InvalidParameter(f"the estimators need h >= 2, got h = {bounds.h}")
    return min(1.0, 1.0 / (4.0 * math.log(bounds.h)))


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0 < eps < 0.5:
        raise InvalidParameter(f"eps must lie in (0, 1/2), got {eps}")
    return eps


def _gate(k: int, allow_infeasible: bool, what: str) -> None:
    if k > MAX_FEASIBLE_K and not allow_infeasible:
        msg = (
            f"{what} needs k = {k:.3e} samples per schedule point (limit {MAX_FEASIBLE_K:.0e}); "
            "lower kappa_cap or pass an explicit override"
        )
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
        raise InfeasibleSampleSize(msg, k=k)


def nonadaptive_plan(bounds: Bounds, eps: float) -> tuple[Schedule, int]:
    """Schedule and per-side sample size used by :func:`estimate_nonadaptive`."""
    eps = _check_eps(eps)
    theta = pipeline_theta(bounds)
    return static_schedule(bounds, theta), required_k(NONADAPTIVE_KAPPA, eps)


def estimate_nonadaptive(
    oracle: Oracle,
    bounds: Bounds,
    eps: float,
    rng,
    workers: int | None = None,
    allow_infeasible: bool = False,
) -> EstimateReport:
    """Static schedule at theta = 1/(4 ln h), then one PPE round with k = required_k(3, eps)."""
    gen, seed = as_generator(rng)
    schedule, k = nonadaptive_plan(bounds, eps)
    _gate(k, allow_infeasible, "non-adaptive estimate")
    tracer = TracingOracle(oracle)
    tracer.new_round()
    log_q, segments = ppe_estimate(tracer, schedule, k, gen, workers)
    by_round = tracer.transcript.samples_by_round
    return EstimateReport(
        log_q_hat=log_q,
        schedule=schedule,
        samples_total=sum(by_round),
        samples_by_round=by_round,
        epsilon=float(eps),
        algorithm="static",
        seed=seed,
        kappa_cap=NONADAPTIVE_KAPPA,
        k=k,
        transcript=tracer.transcript,
        extras={"segments": len(segments)},
    )


def estimate_three_round(
    oracle: Oracle,
    bounds: Bounds,
    eps: float,
    rng,
    kappa_cap: float = THREE_ROUND_KAPPA_CAP,
    workers: int | None = None,
    allow_infeasible: bool = False,
) -> EstimateReport:
    """PseudoTPA(1/(4 ln h)) for the schedule (two rounds), then PPE with k = required_k(kappa_cap, eps).

    The default ``kappa_cap = 30`` gives k around 1e16 at eps = 0.1, which is
    refused unless ``allow_infeasible`` is set.
    """
    eps = _check_eps(eps)
    theta = pipeline_theta(bounds)
    k = required_k(kappa_cap, eps)
    _gate(k, allow_infeasible, "three-round estimate")
    gen, seed = as_generator(rng)
    tracer = TracingOracle(oracle)
    schedule, tpa = pseudo_tpa(tracer, bounds, theta, gen, workers)
    tracer.new_round()
    log_q, segments = ppe_estimate(tracer, schedule, k, gen, workers)
    by_round = tracer.transcript.samples_by_round
    return EstimateReport(
        log_q_hat=log_q,
        schedule=schedule,
        samples_total=sum(by_round),
        samples_by_round=by_round,
        epsilon=eps,
        algorithm="three-round",
        seed=seed,
        kappa_cap=float(kappa_cap),
        k=k,
        transcript=tracer.transcript,
        extras={"segments": len(segments), "pseudo_tpa_k": tpa.k, "thinned_length": len(tpa.thinned)},
    )


def estimate_tpa(
    oracle: Oracle,
    bounds: Bounds,
    eps: float,
    rng,
    kappa_cap: float = NONADAPTIVE_KAPPA,
    workers: int | None = None,
    allow_infeasible: bool = False,
) -> EstimateReport:
    """Adaptive baseline: TPA(k) schedule with k = ceil(8/theta) runs, then PPE.

    The TPA walks are sequential, so their draws form one long adaptive phase
    (recorded as a single round).
    """
    eps = _check_eps(eps)
    theta = pipeline_theta(bounds)
    k = required_k(kappa_cap, eps)
    _gate(k, allow_infeasible, "TPA estimate")
    gen, seed = as_generator(rng)
    tracer = TracingOracle(oracle)
    tracer.new_round()
    runs = pseudo_tpa_k(theta)
    schedule = tpa_union(tracer, bounds, runs, gen, workers)
    tracer.new_round()
    log_q, segments = ppe_estimate(tracer, schedule, k, gen, workers)
    by_round = tracer.transcript.samples_by_round
    return EstimateReport(
        log_q_hat=log_q,
        schedule=schedule,
        samples_total=sum(by_round),
        samples_by_round=by_round,
        epsilon=eps,
        algorithm="tpa",
        seed=seed,
        kappa_cap=float(kappa_cap),
        k=k,
        transcript=tracer.transcript,
        extras={"segments": len(segments), "tpa_runs": runs},
    )


def boost_replicas(delta: float) -> int:
    delta = float(delta)
    if not 0 < delta <= 0.3:
        raise InvalidParameter(f"delta must lie in (0, 0.3], got {delta}")
    return max(1, math.ceil(24.0 * math.log(1.0 / delta)))


def median_boost(
    run: Callable[[np.random.Generator], EstimateReport],
    delta: float,
    rng,
    workers: int | None = None,
) -> EstimateReport:
    """Run ``ceil(24 ln(1/delta))`` independent replicas and keep the (lower) median of ln Q_hat.

    Sample counts are summed over replicas; the schedule is the median replica's.
    """
    r = boost_replicas(delta)
    gen, seed = as_generator(rng)
    reports = pmap(run, gen.spawn(r), workers)
    med = statistics.median_low([rep.log_q_hat for rep in reports])
    chosen = next(rep for rep in reports if rep.log_q_hat == med)
    width = max(len(rep.samples_by_round) for rep in reports)
    by_round = [sum(rep.samples_by_round[i] for rep in reports if i < len(rep.samples_by_round)) for i in range(width)]
    return replace(
        chosen,
        samples_total=sum(rep.samples_total for rep in reports),
        samples_by_round=by_round,
        seed=seed if seed is not None else chosen.seed,
        transcript=None,
        extras={**chosen.extras, "boost_replicas": r, "delta": float(delta)},
    )
