"""Ferromagnetic Ising model with per-site fields and its random-cluster representation.

Ising weight: prod_{v: +1} lam_v * prod_{(u,v): s_u = s_v} gamma_uv with
gamma_e >= 1 + delta and lam_v <= 1 - delta. Annealing uses
H = eta * sum_{v: +1} ln(1/lam_v), eta = -1/ln(1 - delta), so every
Hamiltonian value is 0 or at least 1 and beta_max = -1/eta recovers the target.

Edge subsets are boolean arrays of length m indexed like ``Graph.edges``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

from .. import kernels
from ..core import Bounds, GrossGibbsModel
from ..errors import InvalidParameter, TooLarge
from .graph import Graph
from .two_spin import MAX_SPIN_BITS, spin_blocks

MAX_SUBSET_BITS = 24


def _log_array(a: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(a)


@dataclass(frozen=True, eq=False)
class IsingSpec:
    """Per-edge couplings ``gamma`` (>= 1 + delta), per-vertex fields ``lam`` (in [0, 1 - delta])."""

    gamma: np.ndarray
    lam: np.ndarray
    delta: float

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=float).ravel()
        lam = np.asarray(self.lam, dtype=float).ravel()
        delta = float(self.delta)
        if not 0.0 < delta < 1.0:
            raise InvalidParameter(f"slack must lie in (0, 1), got {delta}")
        if np.any(~np.isfinite(gamma)) or np.any(gamma < 1.0 + delta):
            raise InvalidParameter("every edge coupling must be finite and at least 1 + delta")
        if np.any(~np.isfinite(lam)) or np.any(lam < 0.0) or np.any(lam > 1.0 - delta):
            raise InvalidParameter("every vertex field must lie in [0, 1 - delta]")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "delta", delta)

    @property
    def eta(self) -> float:
        return -1.0 / math.log1p(-self.delta)

    @classmethod
    def uniform(cls, g: Graph, gamma: float, lam: float, delta: float) -> "IsingSpec":
        return cls(np.full(g.m, float(gamma)), np.full(g.n, float(lam)), delta)

    def check_graph(self, g: Graph) -> None:
        if self.gamma.size != g.m or self.lam.size != g.n:
            raise InvalidParameter(
                f"spec sizes (edges {self.gamma.size}, vertices {self.lam.size}) do not match graph ({g.m}, {g.n})"
            )

    def site_costs(self) -> np.ndarray:
        """eta * ln(1/lam_v): the Hamiltonian contribution of a +1 at v (inf when lam_v = 0)."""
        with np.errstate(divide="ignore"):
            return self.eta * -np.log(self.lam)


@dataclass(frozen=True, eq=False)
class RandomClusterSpec:
    """Per-edge probabilities ``p`` in (0, 1) and per-vertex fields ``lam`` in [0, 1)."""

    p: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).ravel()
        lam = np.asarray(self.lam, dtype=float).ravel()
        if np.any(~(p > 0.0)) or np.any(~(p < 1.0)):
            raise InvalidParameter("edge probabilities must lie in (0, 1)")
        if np.any(~(lam >= 0.0)) or np.any(~(lam < 1.0)):
            raise InvalidParameter("vertex fields must lie in [0, 1)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "lam", lam)

    def check_graph(self, g: Graph) -> None:
        if self.p.size != g.m or self.lam.size != g.n:
            raise InvalidParameter(
                f"spec sizes (edges {self.p.size}, vertices {self.lam.size}) do not match graph ({g.m}, {g.n})"
            )

    @property
    def p_min(self) -> float:
        return float(self.p.min()) if self.p.size else 1.0

    @property
    def lam_max(self) -> float:
        return float(self.lam.max())


def rc_from_ising(spec: IsingSpec) -> RandomClusterSpec:
    """p_e = 1 - 1/gamma_e with the same fields."""
    return RandomClusterSpec(-np.expm1(-np.log(spec.gamma)), spec.lam.copy())


def _check_spins(g: Graph) -> None:
    if g.n > MAX_SPIN_BITS:
        raise TooLarge(f"2^{g.n} configurations exceeds the 2^{MAX_SPIN_BITS} cap")


def _ising_blocks(g: Graph, spec: IsingSpec):
    """Yield (plus, log target weight, log F, H) per configuration block."""
    spec.check_graph(g)
    _check_spins(g)
    eu, ev = g.endpoints
    log_g = np.log(spec.gamma)
    log_lam = _log_array(spec.lam)
    cost = spec.site_costs()
    for plus in spin_blocks(g.n):
        same = plus[:, eu] == plus[:, ev]
        log_f = same.astype(float) @ log_g if g.m else np.zeros(plus.shape[0])
        with np.errstate(invalid="ignore"):
            log_field = np.where(plus, log_lam, 0.0).sum(axis=1)
            h = np.where(plus, cost, 0.0).sum(axis=1)
        yield plus, log_f + log_field, log_f, h


def enumerate_ising(g: Graph, spec: IsingSpec) -> tuple[GrossGibbsModel, Bounds]:
    """Histogram over H with weights F, and the bounds q = n, h = n eta / e on [-inf, -1/eta]."""
    xs, ws = [], []
    for _, _, log_f, h in _ising_blocks(g, spec):
        ok = np.isfinite(h)
        xs.append(h[ok])
        ws.append(log_f[ok])
    model = GrossGibbsModel.from_points(np.concatenate(xs), np.concatenate(ws))
    eta = spec.eta
    bounds = Bounds(q=float(g.n), h=g.n * eta / math.e, beta_min=-math.inf, beta_max=-1.0 / eta)
    return model, bounds


def ising_log_partition(g: Graph, spec: IsingSpec) -> float:
    """ln Z^Ising by direct configuration sum."""
    return float(logsumexp(np.concatenate([lw for _, lw, _, _ in _ising_blocks(g, spec)])))


def ising_marginals(g: Graph, spec: IsingSpec) -> np.ndarray:
    """Exact Pr[s_v = +1] for every vertex."""
    total = -math.inf
    per_site = np.full(g.n, -math.inf)
    for plus, lw, _, _ in _ising_blocks(g, spec):
        total = np.logaddexp(total, logsumexp(lw))
        masked = np.where(plus, lw[:, None], -np.inf)
        per_site = np.logaddexp(per_site, logsumexp(masked, axis=0))
    return np.exp(per_site - total)


def ising_marginal_bound_check(g: Graph, spec: IsingSpec) -> float:
    """max_v (Pr[s_v = +1] - lam_v); non-positive up to rounding."""
    return float(np.max(ising_marginals(g, spec) - spec.lam))


def _check_subsets(g: Graph) -> None:
    if g.m > MAX_SUBSET_BITS:
        raise TooLarge(f"2^{g.m} edge subsets exceeds the 2^{MAX_SUBSET_BITS} cap")


def rc_subset_log_weights(g: Graph, spec: RandomClusterSpec) -> np.ndarray:
    """ln w^RC(S) for every subset S; entry ``mask`` has edge e open iff bit e is set."""
    spec.check_graph(g)
    _check_subsets(g)
    eu, ev = g.endpoints
    out = np.empty(1 << g.m)
    kernels.rc_log_weights(
        g.n, eu, ev,
        np.log(spec.p), np.log1p(-spec.p), _log_array(spec.lam),
        out, np.zeros(g.n, dtype=np.int64), np.zeros(g.n),
    )
    return out


def enumerate_rc(g: Graph, spec: RandomClusterSpec) -> float:
    """ln Z^RC by summing over all edge subsets."""
    return float(logsumexp(rc_subset_log_weights(g, spec)))


def ising_rc_identity_check(g: Graph, spec: IsingSpec) -> float:
    """|Z^Ising / (Z^RC prod gamma_e) - 1|."""
    log_ising = ising_log_partition(g, spec)
    log_rc = enumerate_rc(g, rc_from_ising(spec))
    return abs(math.expm1(log_ising - log_rc - float(np.sum(np.log(spec.gamma)))))


def mask_to_edges(mask: int, m: int) -> np.ndarray:
    return ((mask >> np.arange(m)) & 1).astype(bool)


def components(g: Graph, open_edges: np.ndarray) -> tuple[int, np.ndarray]:
    """Connected components of (V, open edges): (count, label per vertex)."""
    eu, ev = g.endpoints
    sel = np.asarray(open_edges, dtype=bool)
    adj = coo_matrix((np.ones(int(sel.sum())), (eu[sel], ev[sel])), shape=(g.n, g.n))
    return connected_components(adj, directed=False)


def edwards_sokal_spin(g: Graph, open_edges: np.ndarray, spec: RandomClusterSpec, rng: np.random.Generator) -> np.ndarray:
    """Spins (+1/-1, int8) from an RC configuration: each component is all +1 with
    probability prod(lam) / (1 + prod(lam)) over its vertices, else all -1."""
    count, label = components(g, open_edges)
    log_prod = np.zeros(count)
    np.add.at(log_prod, label, _log_array(spec.lam))
    p_plus = np.exp(log_prod - np.logaddexp(0.0, log_prod))
    up = rng.random(count) < p_plus
    return np.where(up[label], 1, -1).astype(np.int8)


def ising_configuration_probabilities(g: Graph, spec: IsingSpec) -> np.ndarray:
    """Exact Ising law indexed by bitmask (bit v set means s_v = +1)."""
    lw = np.concatenate([w for _, w, _, _ in _ising_blocks(g, spec)])
    return np.exp(lw - logsumexp(lw))
