"""Cooling schedules: the static (non-adaptive) schedule, TPA and PseudoTPA."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._parallel import pmap
from .core import NEG_INF, Bounds, check_beta
from .errors import InvalidParameter, IterationLimit
from .oracle import Oracle, exponential, stream_base

DEDUP_TOL = 1e-12
TPA_STEP_CAP = 10**9
STATIC_LEN_CAP = 10**8


def _tol(b: float) -> float:
    return DEDUP_TOL * max(1.0, abs(b))


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing betas; the first may be -inf, the rest are finite."""

    betas: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.betas, dtype=float)
        if b.ndim != 1 or b.size < 2:
            raise InvalidParameter("a schedule needs at least two points")
        if np.any(np.isnan(b)) or np.any(b == math.inf) or np.any(np.isneginf(b[1:])):
            raise InvalidParameter("only the first schedule point may be -inf; +inf and nan are rejected")
        if np.any(np.diff(b) <= 0):
            raise InvalidParameter("schedule must be strictly increasing")
        b.setflags(write=False)
        object.__setattr__(self, "betas", b)

    @classmethod
    def from_points(cls, points: Iterable[float], beta_min: float, beta_max: float) -> "Schedule":
        """Clip to ``[beta_min, beta_max]``, force both endpoints in, sort and dedup."""
        bmin, bmax = check_beta(beta_min), check_beta(beta_max)
        pts = np.asarray(list(points), dtype=float)
        pts = pts[~np.isnan(pts)]
        hi = bmax - _tol(bmax)
        if bmin == NEG_INF:
            inner = pts[np.isfinite(pts) & (pts < hi)]
        else:
            inner = pts[(pts > bmin + _tol(bmin)) & (pts < hi)]
        inner = np.unique(inner)
        kept = [bmin]
        for p in inner:
            if kept[-1] == NEG_INF or p - kept[-1] > _tol(p):
                kept.append(float(p))
        kept.append(bmax)
        return cls(np.array(kept))

    def __len__(self) -> int:
        return int(self.betas.size)

    def __iter__(self):
        return iter(self.betas.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.betas, dtype=dtype)

    @property
    def beta_min(self) -> float:
        return float(self.betas[0])

    @property
    def beta_max(self) -> float:
        return float(self.betas[-1])

    def union(self, other: "Schedule") -> "Schedule":
        return Schedule.from_points(np.concatenate([self.betas, other.betas]), self.beta_min, self.beta_max)

    def to_text(self) -> str:
        return "".join(f"{format_beta(b)}\n" for b in self.betas)

    @classmethod
    def from_text(cls, text: str) -> "Schedule":
        vals = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                vals.append(parse_beta(line))
        return cls(np.array(vals, dtype=float))


def format_beta(b: float) -> str:
    return "-inf" if b == NEG_INF else repr(float(b))


def parse_beta(tok: str) -> float:
    t = tok.strip().lower()
    if t in ("-inf", "-infinity"):
        return NEG_INF
    return check_beta(float(t))


def _check_theta(theta) -> float:
    t = float(theta)
    if not (0.0 < t <= 1.0):
        raise InvalidParameter(f"theta must lie in (0, 1], got {theta}")
    return t


# ---------------------------------------------------------------------------
# static schedule
# ---------------------------------------------------------------------------

def static_schedule(bounds: Bounds, theta: float) -> Schedule:
    """Walk down from beta_max in steps theta / min(h, q / (beta_max - beta))."""
    theta = _check_theta(theta)
    q, h, bmin, bmax = bounds.q, bounds.h, bounds.beta_min, bounds.beta_max
    visited = [bmax]
    beta = bmax
    for _ in range(STATIC_LEN_CAP):
        gap = bmax - beta
        s = h if gap == 0.0 else min(h, q / gap)
        nxt = beta - theta / s
        if s < theta / 2 or nxt < bmin:
            return Schedule.from_points(visited, bmin, bmax)
        visited.append(nxt)
        beta = nxt
    raise IterationLimit(f"static schedule exceeded {STATIC_LEN_CAP} points")


def _phase_boundary(q: float, theta: float) -> int:
    return math.ceil(q / theta)


def static_schedule_points(bounds: Bounds, theta: float) -> np.ndarray:
    """All iterates of the static walk from closed forms (descending, unterminated).

    The first ``ceil(q/theta)`` steps have constant size theta/h; after that the
    distance to beta_max grows geometrically by a factor (1 + theta/q).
    """
    theta = _check_theta(theta)
    q, h, bmax = bounds.q, bounds.h, bounds.beta_max
    t1 = _phase_boundary(q, theta)
    d1 = t1 * theta / h
    s_t1 = min(h, q / d1)
    # s_i drops below theta/2 after at most this many geometric steps
    if s_t1 < theta / 2:
        n2 = 1
    else:
        n2 = math.ceil(math.log(2.0 * s_t1 / theta) / math.log1p(theta / q)) + 2
    n = t1 + n2 + 2
    if n > STATIC_LEN_CAP:
        raise IterationLimit(f"static schedule exceeded {STATIC_LEN_CAP} points")
    i = np.arange(n, dtype=float)
    dist = np.where(i <= t1, i * theta / h, d1 * np.power(1.0 + theta / q, i - t1))
    return bmax - dist


def static_schedule_closed_form(bounds: Bounds, theta: float) -> Schedule:
    """Same schedule as :func:`static_schedule`, via closed forms and a predicate scan."""
    theta = _check_theta(theta)
    q, h, bmin, bmax = bounds.q, bounds.h, bounds.beta_min, bounds.beta_max
    beta = static_schedule_points(bounds, theta)
    gap = bmax - beta
    with np.errstate(divide="ignore"):
        s = np.minimum(h, np.where(gap == 0.0, math.inf, q / np.where(gap == 0.0, 1.0, gap)))
    nxt = beta - theta / s
    stop = (s < theta / 2) | (nxt < bmin)
    hits = np.flatnonzero(stop)
    if hits.size == 0:
        raise IterationLimit("closed-form static schedule failed to terminate")
    i = int(hits[0])
    return Schedule.from_points(beta[: i + 1], bmin, bmax)


# ---------------------------------------------------------------------------
# TPA
# ---------------------------------------------------------------------------

def _new_round(oracle) -> None:
    nr = getattr(oracle, "new_round", None)
    if nr is not None:
        nr()


def tpa_run(oracle: Oracle, bounds: Bounds, rng: np.random.Generator, max_steps: int = TPA_STEP_CAP) -> Schedule:
    """One TPA descent: beta <- beta - eta / X with X ~ mu_beta and eta ~ Exp(1).

    ``X = 0`` sends the walk to -inf. The walk stops once it reaches
    ``beta_min`` and the visited points plus ``beta_min`` form the schedule.
    """
    bmin, bmax = bounds.beta_min, bounds.beta_max
    base = stream_base(rng)
    visited = [bmax]
    beta = bmax
    for step in range(max_steps):
        x = float(oracle.draw(beta, 1, base + step)[0])
        eta = exponential(rng)
        nxt = NEG_INF if x == 0.0 else beta - eta / x
        if nxt <= bmin:
            return Schedule.from_points(visited, bmin, bmax)
        visited.append(nxt)
        beta = nxt
    raise IterationLimit(f"TPA did not reach beta_min within {max_steps} steps")


def tpa_union(oracle: Oracle, bounds: Bounds, k: int, rng: np.random.Generator, workers: int | None = None) -> Schedule:
    """TPA(k): union of ``k`` independent TPA runs."""
    if int(k) < 1:
        raise InvalidParameter("k must be at least 1")
    children = rng.spawn(int(k))
    runs = pmap(lambda r: tpa_run(oracle, bounds, r), children, workers)
    pts = np.concatenate([s.betas for s in runs])
    return Schedule.from_points(pts, bounds.beta_min, bounds.beta_max)


# ---------------------------------------------------------------------------
# PseudoTPA
# ---------------------------------------------------------------------------

PSEUDO_D = 2
PSEUDO_THETA0 = 0.25


@dataclass(frozen=True)
class PseudoTpaTranscript:
    """What each of the two adaptive rounds did."""

    static: Schedule
    thinned: Schedule
    k: int
    round1_draws: int
    round2_draws: int
    round1_betas: tuple
    round2_betas: tuple

    @property
    def samples_by_round(self) -> list[int]:
        return [self.round1_draws, self.round2_draws]


def pseudo_tpa_k(theta: float) -> int:
    return math.ceil(8.0 / _check_theta(theta))


def pseudo_tpa(
    oracle: Oracle,
    bounds: Bounds,
    theta: float,
    rng: np.random.Generator,
    workers: int | None = None,
) -> tuple[Schedule, PseudoTpaTranscript]:
    """Two-round parallel stand-in for TPA(k) with k = ceil(8/theta).

    Round one thins a static grid (theta' = 1/4): interior point beta_i is kept
    with probability 1 - exp(-(X1 + X2)(beta_{i+1} - beta_i)), X ~ mu_{beta_{i+1}}.
    Round two seeds k exponential TPA steps from every kept point.
    """
    theta = _check_theta(theta)
    k = pseudo_tpa_k(theta)
    bmin, bmax = bounds.beta_min, bounds.beta_max
    grid = static_schedule(bounds, PSEUDO_THETA0)
    b = grid.betas
    t = len(b) - 1

    # round one
    _new_round(oracle)
    base1 = stream_base(rng)
    idx = list(range(1, t))
    u = rng.random(len(idx))
    draws1 = pmap(lambda i: oracle.draw(b[i + 1], PSEUDO_D, base1 + i), idx, workers)
    admitted = [bmin, bmax]
    for j, i in enumerate(idx):
        s = float(np.sum(draws1[j])) * (b[i + 1] - b[i])
        if u[j] < -math.expm1(-s):
            admitted.append(float(b[i]))
    thinned = Schedule.from_points(admitted, bmin, bmax)

    # round two
    _new_round(oracle)
    base2 = stream_base(rng)
    tb = thinned.betas
    eta = exponential(rng, (len(tb), k))
    draws2 = pmap(lambda j: oracle.draw(tb[j], k, base2 + j), range(len(tb)), workers)
    cands = [tb]
    for j in range(len(tb)):
        y = np.asarray(draws2[j], dtype=float)
        with np.errstate(divide="ignore"):
            step = np.where(y == 0.0, math.inf, eta[j] / np.where(y == 0.0, 1.0, y))
        cands.append(tb[j] - step)
    final = Schedule.from_points(np.concatenate(cands), bmin, bmax)

    transcript = PseudoTpaTranscript(
        static=grid,
        thinned=thinned,
        k=k,
        round1_draws=PSEUDO_D * len(idx),
        round2_draws=k * len(tb),
        round1_betas=tuple(float(b[i + 1]) for i in idx),
        round2_betas=tuple(float(x) for x in tb),
    )
    return final, transcript
