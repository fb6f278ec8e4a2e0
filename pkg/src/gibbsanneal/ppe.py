"""Paired Product Estimator.

For every segment ``[b_i, b_{i+1}]`` of a schedule, with half-gap
``a = (b_{i+1} - b_i) / 2``,

    U_i = mean_j exp( a X_ij),   X_ij ~ mu_{b_i}
    V_i = mean_j exp(-a Y_ij),   Y_ij ~ mu_{b_{i+1}}

and ``prod U_i / prod V_i`` estimates ``Q = Z(b_t) / Z(b_0)``. All
accumulation happens in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._parallel import pmap
from .core import NEG_INF, scaled
from .errors import AllMassLost, InvalidParameter
from .oracle import Oracle, stream_base


def required_k(kappa_cap: float, eps: float) -> int:
    """Samples per side so that PPE is eps-accurate w.p. 0.8 when kappa(B) <= kappa_cap."""
    kappa_cap, eps = float(kappa_cap), float(eps)
    if not kappa_cap > 0 or not math.isfinite(kappa_cap):
        raise InvalidParameter(f"kappa_cap must be positive and finite, got {kappa_cap}")
    if not 0 < eps < 0.5:
        raise InvalidParameter(f"eps must lie in (0, 1/2), got {eps}")
    return max(1, math.ceil(100.0 * math.expm1(kappa_cap) / eps**2))


@dataclass(frozen=True)
class PpeSegmentStats:
    i: int
    log_u: float
    log_v: float
    k: int
    relvar_u: float
    relvar_v: float


def _log_moments(oracle: Oracle, beta: float, coef: float, k: int, stream: int) -> tuple[float, float]:
    """log of mean exp(coef * X) over k draws at beta, and the empirical relative variance."""
    if getattr(oracle, "supports_counts", False):
        vals, mult = oracle.draw_counts(beta, k, stream)
        weights = np.asarray(mult, dtype=float)
    else:
        vals = oracle.draw(beta, k, stream)
        weights = None
    t = scaled(coef, vals)
    if np.all(t == 0.0):
        return 0.0, 0.0
    log_k = math.log(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mean = float(logsumexp(t, b=weights)) - log_k
        if log_mean == NEG_INF:
            return NEG_INF, math.nan
        log_sq = float(logsumexp(2.0 * t, b=weights)) - log_k
    relvar = max(math.expm1(log_sq - 2.0 * log_mean), 0.0)
    return log_mean, relvar


def ppe_estimate(
    oracle: Oracle,
    schedule,
    k: int,
    rng: np.random.Generator,
    workers: int | None = None,
) -> tuple[float, list[PpeSegmentStats]]:
    """Run PPE(B, k). Returns ``(log Q_hat, per-segment stats)``.

    Draws ``k`` values at each of b_0..b_{t-1} (U side) and at each of
    b_1..b_t (V side): ``2 k (len(B) - 1)`` oracle samples in total.
    """
    b = np.asarray(schedule, dtype=float)
    k = int(k)
    if b.size < 2:
        raise InvalidParameter("schedule needs at least two points")
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    base = stream_base(rng)
    t = b.size - 1
    half = np.where(np.isfinite(b[:-1]), 0.5 * (b[1:] - b[:-1]), math.inf)

    def side(job):
        i, which = job
        if which == 0:
            return _log_moments(oracle, b[i], half[i], k, base + 2 * i)
        return _log_moments(oracle, b[i + 1], -half[i], k, base + 2 * i + 1)

    jobs = [(i, w) for i in range(t) for w in (0, 1)]
    res = pmap(side, jobs, workers)
    stats = []
    for i in range(t):
        (log_u, rv_u), (log_v, rv_v) = res[2 * i], res[2 * i + 1]
        if log_v == NEG_INF:
            raise AllMassLost(
                f"segment {i}: all {k} V-side draws at beta={b[i + 1]} were nonzero against an "
                "infinite gap; increase k"
            )
        stats.append(PpeSegmentStats(i, log_u, log_v, k, rv_u, rv_v))
    log_q = math.fsum(s.log_u for s in stats) - math.fsum(s.log_v for s in stats)
    return log_q, stats
