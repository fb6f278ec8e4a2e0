"""Random-cluster sampling: brute force at small size, field dynamics otherwise.

The field dynamics step keeps each edge of a random set S (rate theta) plus the
current configuration X available, tilts edge probabilities to
p* = p / (p + theta (1 - p)) on S and X (zero elsewhere), and resamples from the
tilted measure. The inner resample here is sequential edge Glauber dynamics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .. import kernels
from ..errors import InfeasibleSampleSize, InvalidParameter
from ..pipeline import MAX_FEASIBLE_K
from .graph import Graph
from .ising import MAX_SUBSET_BITS, RandomClusterSpec, mask_to_edges, rc_subset_log_weights

InnerSampler = Callable[[Graph, np.ndarray, np.ndarray, np.ndarray, np.random.Generator], np.ndarray]


def tilt(p: np.ndarray, theta: float, available: np.ndarray) -> np.ndarray:
    """p*_e = p_e / (p_e + theta (1 - p_e)) on available edges, 0 elsewhere."""
    star = p / (p + theta * (1.0 - p))
    return np.where(available, star, 0.0)


def inner_glauber_steps(m_active: int, eps: float) -> int:
    """ceil(2 m ln(4 m / eps)) edge updates for the inner chain."""
    if m_active == 0:
        return 0
    return math.ceil(2 * m_active * math.log(4 * m_active / eps))


def rc_glauber_run(g: Graph, p: np.ndarray, lam: np.ndarray, start: np.ndarray, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Edge heat-bath for the RC measure on edges with p_e > 0; others are closed."""
    indptr, nbr, eid = g.csr
    eu, ev = g.endpoints
    active = np.flatnonzero(p > 0).astype(np.int64)
    state = np.where(p > 0, np.asarray(start, dtype=bool), False).astype(np.int8)
    with np.errstate(divide="ignore"):
        log_lam = np.log(lam)
    if steps > 0 and active.size:
        kernels.rc_glauber(
            indptr, nbr, eid, eu, ev, active, np.asarray(p, dtype=float), log_lam, state,
            rng.random(steps), np.zeros(g.n, dtype=np.int64), np.zeros(g.n, dtype=np.int64),
        )
    return state.astype(bool)


def glauber_inner(steps: int | None = None, eps: float = 1e-3) -> InnerSampler:
    """Inner sampler running a fixed or heuristic number of edge updates from X."""

    def run(g, p_star, lam, x, rng):
        n_steps = inner_glauber_steps(int(np.count_nonzero(p_star)), eps) if steps is None else steps
        return rc_glauber_run(g, p_star, lam, x, n_steps, rng)

    return run


def field_dynamics_step(
    g: Graph,
    x: np.ndarray,
    spec: RandomClusterSpec,
    theta: float,
    rng: np.random.Generator,
    inner: InnerSampler | None = None,
) -> np.ndarray:
    """One step X -> X' of the field dynamics."""
    if not 0.0 < theta < 1.0:
        raise InvalidParameter(f"theta must lie in (0, 1), got {theta}")
    x = np.asarray(x, dtype=bool)
    s = rng.random(g.m) < theta
    p_star = tilt(spec.p, theta, s | x)
    inner = glauber_inner() if inner is None else inner
    return inner(g, p_star, spec.lam, x, rng)


@dataclass(frozen=True)
class RcParams:
    """Field-dynamics parameters; ``log_t`` keeps T representable when it overflows."""

    c1: float
    log_c2: float
    log_n0: float
    theta: float
    log_t: float
    inner_eps: float

    @property
    def t(self) -> float:
        return math.exp(self.log_t) if self.log_t < 700 else math.inf

    @property
    def n0(self) -> float:
        return math.exp(self.log_n0) if self.log_n0 < 700 else math.inf


def rc_params(n: int, spec: RandomClusterSpec, eps: float) -> RcParams:
    """Parameter table: C1 = 1e-27 (1 - lam_max) p_min,
    C2 = (2 / (p_min (1 - lam_max)))^{30 / (1 - lam_max)^2}, N0 = max(1/C1, C2),
    theta = C1 / ln(n / eps), T = C2 theta^{-2e5} ln(2n / eps), inner eps' = eps / (2T)."""
    if not 0.0 < eps < 1.0:
        raise InvalidParameter("eps must lie in (0, 1)")
    slack = 1.0 - spec.lam_max
    p_min = spec.p_min
    c1 = 1e-27 * slack * p_min
    log_c2 = 30.0 / slack**2 * math.log(2.0 / (p_min * slack))
    log_n0 = max(-math.log(c1), log_c2)
    theta = c1 / math.log(n / eps)
    log_t = log_c2 - 2e5 * math.log(theta) + math.log(math.log(2 * n / eps))
    return RcParams(c1, log_c2, log_n0, theta, log_t, eps / 2.0 / math.exp(min(log_t, 700.0)))


def sample_rc_brute(g: Graph, spec: RandomClusterSpec, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Exact RC draws by enumerating all 2^m edge subsets."""
    lw = rc_subset_log_weights(g, spec)
    prob = np.exp(lw - lw.max())
    prob /= prob.sum()
    masks = rng.choice(prob.size, size=1 if size is None else size, p=prob)
    out = np.array([mask_to_edges(int(k), g.m) for k in masks]).reshape(-1, g.m)
    return out[0] if size is None else out


def sample_rc(
    g: Graph,
    spec: RandomClusterSpec,
    eps: float,
    rng: np.random.Generator,
    overrides: dict | None = None,
    allow_infeasible: bool = False,
) -> np.ndarray:
    """One approximate RC sample (boolean open-edge mask).

    ``overrides`` may set ``theta``, ``T``, ``N0`` and ``inner_steps``. Giving
    ``theta`` or ``T`` without ``N0`` selects the dynamics branch directly.
    """
    spec.check_graph(g)
    params = rc_params(g.n, spec, eps)
    ov = dict(overrides or {})
    unknown = set(ov) - {"theta", "T", "N0", "inner_steps"}
    if unknown:
        raise InvalidParameter(f"unknown overrides {sorted(unknown)}")
    if "theta" in ov:
        params = replace(params, theta=float(ov["theta"]))
    if "T" in ov:
        params = replace(params, log_t=math.log(max(int(ov["T"]), 1)))
    if "N0" in ov:
        params = replace(params, log_n0=math.log(float(ov["N0"])) if ov["N0"] > 0 else -math.inf)
    elif "theta" in ov or "T" in ov:
        params = replace(params, log_n0=-math.inf)

    if g.n < params.n0:
        if g.m <= MAX_SUBSET_BITS:
            return sample_rc_brute(g, spec, rng)
        if not (allow_infeasible or ov):
            raise _infeasible(params)
    t = params.t
    if t > MAX_FEASIBLE_K and not allow_infeasible:
        raise _infeasible(params)
    inner_steps = ov.get("inner_steps")
    inner_eps = eps / (2.0 * t) if math.isfinite(t) else params.inner_eps
    inner = glauber_inner(None if inner_steps is None else int(inner_steps), inner_eps)
    x = np.ones(g.m, dtype=bool)
    for _ in range(int(t)):
        x = field_dynamics_step(g, x, spec, params.theta, rng, inner)
    return x


def _infeasible(params: RcParams) -> InfeasibleSampleSize:
    msg = (
        f"field dynamics needs T = exp({params.log_t:.4g}) steps; "
        "pass overrides (theta, T) or allow_infeasible"
    )
    warnings.warn(msg, RuntimeWarning, stacklevel=3)
    return InfeasibleSampleSize(msg, params.t)
