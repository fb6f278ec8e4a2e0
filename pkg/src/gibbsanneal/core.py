"""Gross Gibbs distributions and exact evaluation of their partition function.

A gross Gibbs distribution is the pushforward of a Gibbs family through its
Hamiltonian: a finite set of support points ``x`` with weights ``c_x`` and

    mu_beta(x) = c_x exp(beta x) / Z(beta),    Z(beta) = sum_x c_x exp(beta x).

Everything here is computed in log space; ``Z`` itself is never formed.
``beta = -inf`` is a legal inverse temperature: ``Z(-inf) = c_0`` and
``mu_{-inf}`` is the point mass at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DegenerateModel, InvalidParameter, OutOfRange

NEG_INF = -math.inf
MERGE_TOL = 1e-12
# Hamiltonian values in (1 - SNAP_TOL, 1) are rounding noise from rescaling and snap to 1.
SNAP_TOL = 1e-9


def check_beta(beta) -> float:
    """Coerce to float and reject +inf / nan. -inf is allowed."""
    b = float(beta)
    if math.isnan(b) or b == math.inf:
        raise InvalidParameter(f"beta must be finite or -inf, got {beta!r}")
    return b


def scaled(a: float, x: np.ndarray) -> np.ndarray:
    """``a * x`` with the convention ``(+-inf) * 0 = 0``."""
    x = np.asarray(x, dtype=float)
    if math.isinf(a):
        out = np.zeros(x.shape)
        nz = x != 0.0
        out[nz] = math.copysign(math.inf, a) * np.sign(x[nz])
        return out
    return a * x


@dataclass(frozen=True)
class GrossGibbsModel:
    """Histogram of Hamiltonian values with log-weights.

    ``x`` is sorted ascending with distinct entries in ``{0} U [1, inf)``;
    ``log_c`` holds the matching finite log-weights (known up to a global
    shift).
    """

    x: np.ndarray
    log_c: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        log_c = np.asarray(self.log_c, dtype=float)
        if x.ndim != 1 or x.shape != log_c.shape or x.size == 0:
            raise InvalidParameter("model needs at least one support point and matching arrays")
        if not np.all(np.isfinite(x)):
            raise InvalidParameter("Hamiltonian values must be finite")
        if not np.all(np.isfinite(log_c)):
            raise InvalidParameter("log-weights must be finite")
        if np.any(np.diff(x) <= 0):
            raise InvalidParameter("support points must be distinct and sorted ascending")
        bad = (x != 0.0) & (x < 1.0)
        if np.any(bad):
            raise InvalidParameter(
                f"Hamiltonian values must lie in {{0}} U [1, inf); offending: {x[bad][:5].tolist()}"
            )
        x.setflags(write=False)
        log_c.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "log_c", log_c)

    @classmethod
    def from_points(cls, xs: Iterable[float], log_cs: Iterable[float]) -> "GrossGibbsModel":
        """Build a model from unsorted, possibly repeated points.

        Points closer than 1e-12 are merged (weights add), ``-inf`` weights are
        dropped and values just below 1 from floating-point rescaling snap to 1.
        """
        xs = np.asarray(list(xs), dtype=float)
        log_cs = np.asarray(list(log_cs), dtype=float)
        if xs.shape != log_cs.shape:
            raise InvalidParameter("xs and log_cs differ in length")
        if np.any(np.isnan(log_cs)) or np.any(log_cs == math.inf):
            raise InvalidParameter("log-weights must be finite or -inf")
        keep = np.isfinite(log_cs)
        xs, log_cs = xs[keep], log_cs[keep]
        if xs.size == 0:
            raise InvalidParameter("model has no support point with positive weight")
        near_one = (xs < 1.0) & (xs > 1.0 - SNAP_TOL)
        xs = np.where(near_one, 1.0, xs)
        xs = np.where(np.abs(xs) <= MERGE_TOL, 0.0, xs)
        order = np.argsort(xs, kind="stable")
        xs, log_cs = xs[order], log_cs[order]
        new_group = np.concatenate(([True], np.diff(xs) > MERGE_TOL))
        group = np.cumsum(new_group) - 1
        out_x = xs[new_group]
        starts = np.flatnonzero(new_group)
        peak = np.maximum.reduceat(log_cs, starts)
        out_c = peak + np.log(np.add.reduceat(np.exp(log_cs - peak[group]), starts))
        return cls(out_x, out_c)

    @classmethod
    def from_weights(cls, weights: dict) -> "GrossGibbsModel":
        """Convenience constructor from ``{x: c_x}`` with plain (not log) weights."""
        items = [(float(x), float(c)) for x, c in weights.items()]
        with np.errstate(divide="ignore"):
            return cls.from_points([x for x, _ in items], np.log([c for _, c in items]))

    @property
    def has_zero(self) -> bool:
        return bool(self.x[0] == 0.0)

    @property
    def size(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class Bounds:
    """Annealing interval and the two a-priori bounds.

    ``q`` bounds ``ln Q = z(beta_min, beta_max)`` and ``h`` bounds the mean
    Hamiltonian at ``beta_max``. Both must be positive and finite; the
    estimation pipelines additionally require ``h >= 2``.
    """

    q: float
    h: float
    beta_min: float
    beta_max: float

    def __post_init__(self):
        bmin = check_beta(self.beta_min)
        bmax = check_beta(self.beta_max)
        if bmax == NEG_INF:
            raise InvalidParameter("beta_max must be finite")
        if not bmin < bmax:
            raise InvalidParameter(f"need beta_min < beta_max, got [{bmin}, {bmax}]")
        q, h = float(self.q), float(self.h)
        if not (math.isfinite(q) and q > 0):
            raise InvalidParameter(f"q must be finite and positive, got {q}")
        if not (math.isfinite(h) and h > 0):
            raise InvalidParameter(f"h must be finite and positive, got {h}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "beta_min", bmin)
        object.__setattr__(self, "beta_max", bmax)


# ---------------------------------------------------------------------------
# exact quantities
# ---------------------------------------------------------------------------

def log_partition(model: GrossGibbsModel, beta) -> float:
    """z(beta) = ln Z(beta)."""
    b = check_beta(beta)
    if b == NEG_INF:
        if not model.has_zero:
            raise DegenerateModel("Z(-inf) = c_0 = 0: no support point at x = 0")
        return float(model.log_c[0])
    return float(logsumexp(model.log_c + b * model.x))


def log_partition_many(model: GrossGibbsModel, betas) -> np.ndarray:
    """Vectorised :func:`log_partition` over an array of betas."""
    betas = np.asarray(betas, dtype=float)
    out = np.empty(betas.shape)
    flat = betas.ravel()
    res = out.ravel()
    finite = np.isfinite(flat)
    if np.any(flat == math.inf) or np.any(np.isnan(flat)):
        raise InvalidParameter("beta must be finite or -inf")
    if np.any(~finite):
        if not model.has_zero:
            raise DegenerateModel("Z(-inf) = c_0 = 0: no support point at x = 0")
        res[~finite] = model.log_c[0]
    if np.any(finite):
        res[finite] = logsumexp(model.log_c[None, :] + flat[finite, None] * model.x[None, :], axis=1)
    return out


def log_ratio(model: GrossGibbsModel, beta1, beta2) -> float:
    """z(beta1, beta2) = z(beta2) - z(beta1)."""
    return log_partition(model, beta2) - log_partition(model, beta1)


def _probabilities(model: GrossGibbsModel, beta: float) -> np.ndarray:
    if beta == NEG_INF:
        if not model.has_zero:
            raise DegenerateModel("mu_{-inf} needs a support point at x = 0")
        p = np.zeros(model.size)
        p[0] = 1.0
        return p
    logits = model.log_c + beta * model.x
    return np.exp(logits - logsumexp(logits))


def mean_hamiltonian(model: GrossGibbsModel, beta) -> float:
    """z'(beta) = E[X] for X ~ mu_beta."""
    b = check_beta(beta)
    p = _probabilities(model, b)
    return float(p @ model.x)


def var_hamiltonian(model: GrossGibbsModel, beta) -> float:
    """z''(beta) = Var[X] for X ~ mu_beta."""
    b = check_beta(beta)
    p = _probabilities(model, b)
    mean = p @ model.x
    return float(p @ (model.x - mean) ** 2)


def midpoint(beta1: float, beta2: float) -> float:
    if beta1 == NEG_INF:
        return NEG_INF
    return 0.5 * (beta1 + beta2)


def curvature_pair(model: GrossGibbsModel, beta1, beta2) -> float:
    """kappa(b1, b2) = z(b1) - 2 z((b1+b2)/2) + z(b2); the midpoint of (-inf, b) is -inf."""
    b1, b2 = check_beta(beta1), check_beta(beta2)
    if not b1 < b2:
        raise InvalidParameter(f"curvature needs beta1 < beta2, got ({b1}, {b2})")
    if b1 == NEG_INF:
        return max(log_partition(model, b2) - log_partition(model, b1), 0.0)
    z1, zm, z2 = log_partition_many(model, [b1, midpoint(b1, b2), b2])
    return max(float(z1 - 2.0 * zm + z2), 0.0)


def curvature_schedule(model: GrossGibbsModel, betas: Sequence[float]) -> float:
    """kappa(B): sum of curvature_pair over consecutive schedule points."""
    b = np.asarray(betas, dtype=float)
    if b.size < 2:
        raise InvalidParameter("schedule needs at least two points")
    mids = np.where(np.isfinite(b[:-1]), 0.5 * (b[:-1] + b[1:]), NEG_INF)
    z = log_partition_many(model, b)
    zm = log_partition_many(model, mids)
    kappa = z[:-1] - 2.0 * zm + z[1:]
    return float(np.sum(np.maximum(kappa, 0.0)))


def segment_widths(model: GrossGibbsModel, betas: Sequence[float]) -> np.ndarray:
    """z(beta_i, beta_{i+1}) for every consecutive pair."""
    z = log_partition_many(model, np.asarray(betas, dtype=float))
    return np.diff(z)


def maxwidth(model: GrossGibbsModel, betas: Sequence[float]) -> float:
    return float(np.max(segment_widths(model, betas)))


def width(model: GrossGibbsModel, betas: Sequence[float], x) -> tuple[float, float, float]:
    """(W-, W+, W) of the schedule interval ``[beta_v, beta_{v+1})`` containing ``x``."""
    b = np.asarray(betas, dtype=float)
    xv = check_beta(x)
    if not (b[0] < xv < b[-1]):
        raise OutOfRange(f"x = {xv} must lie strictly inside ({b[0]}, {b[-1]})")
    v = int(np.searchsorted(b, xv, side="right")) - 1
    lo, hi = b[v], b[v + 1]
    z_lo, z_x, z_hi = log_partition_many(model, [lo, xv, hi])
    w_minus = max(float(z_x - z_lo), 0.0)
    w_plus = max(float(z_hi - z_x), 0.0)
    return w_minus, w_plus, w_minus + w_plus


def exact_bounds(model: GrossGibbsModel, beta_min, beta_max) -> tuple[float, float]:
    """The tightest (q, h): z(beta_min, beta_max) and z'(beta_max)."""
    return log_ratio(model, beta_min, beta_max), mean_hamiltonian(model, beta_max)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def cumulative(model: GrossGibbsModel, beta: float) -> np.ndarray:
    """Normalised CDF over the sorted support, last entry forced to 1."""
    cdf = np.cumsum(_probabilities(model, beta))
    cdf[-1] = 1.0
    return cdf


def exact_sample(model: GrossGibbsModel, beta, rng: np.random.Generator, size=None):
    """Draw from mu_beta by inverse CDF. ``size=None`` returns a scalar."""
    b = check_beta(beta)
    if b == NEG_INF:
        if not model.has_zero:
            raise DegenerateModel("mu_{-inf} needs a support point at x = 0")
        return 0.0 if size is None else np.zeros(size)
    cdf = cumulative(model, b)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, model.size - 1)
    out = model.x[idx]
    return float(out) if size is None else out
