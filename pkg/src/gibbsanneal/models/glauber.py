"""Single-site heat-bath (Glauber) chains and the sampling oracles built on them.

Every oracle draw runs a fresh chain from the all-minus spin configuration
(or the empty matching) so distinct draws are independent.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..core import NEG_INF, check_beta
from ..errors import InvalidParameter
from ..oracle import Oracle, _check_count, stream_rng
from .graph import Graph
from .ising import IsingSpec
from .two_spin import TwoSpinSpec

# uniforms held in memory per kernel call
_UNIFORM_BLOCK = 1 << 22

KINDS = ("two_spin", "flipped", "matchings", "ising")


def default_steps(g: Graph) -> int:
    """Heuristic chain length: ceil(10 m ln m) single-site updates, at least n."""
    m = max(g.m, 2)
    return max(g.n, math.ceil(10 * m * math.log(m)))


def _log(x: float) -> float:
    if x == math.inf:
        return math.inf
    return math.log(x) if x > 0 else -math.inf


def _spin_chains(g: Graph, log_gp, log_gm, log_act, chains: int, steps: int, rng) -> np.ndarray:
    indptr, nbr, eid = g.csr
    spins = np.full((chains, g.n), -1, dtype=np.int8)
    if steps > 0 and chains > 0:
        u = rng.random((chains, steps))
        kernels.spin_glauber(indptr, nbr, eid, log_gp, log_gm, log_act, spins, u)
    return spins


def _matching_chains(g: Graph, lam: float, chains: int, steps: int, rng) -> np.ndarray:
    state = np.zeros((chains, g.m), dtype=np.int8)
    if steps > 0 and chains > 0 and g.m > 0:
        eu, ev = g.endpoints
        u = rng.random((chains, steps))
        p_add = 1.0 if lam == math.inf else lam / (1.0 + lam)
        kernels.matching_glauber(eu, ev, p_add, state, u, np.zeros(g.n, dtype=np.int64))
    return state


def _two_spin_logs(g: Graph, spec: TwoSpinSpec, lam: float):
    log_gp = np.full(g.m, _log(spec.gamma1))
    log_gm = np.full(g.m, _log(spec.gamma2))
    log_act = np.full(g.n, _log(lam))
    return log_gp, log_gm, log_act


def glauber_two_spin(g: Graph, spec: TwoSpinSpec, beta: float, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Final +-1 configuration after ``steps`` updates at activity lam = e^beta."""
    b = check_beta(beta)
    if steps < 0:
        raise InvalidParameter("steps must be non-negative")
    lam = 0.0 if b == NEG_INF else math.exp(b)
    return _spin_chains(g, *_two_spin_logs(g, spec, lam), 1, int(steps), rng)[0]


def glauber_matchings(g: Graph, lam: float, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Final matching (0/1 per edge) after ``steps`` edge updates at activity ``lam``."""
    if steps < 0:
        raise InvalidParameter("steps must be non-negative")
    if not lam >= 0:
        raise InvalidParameter("activity must be non-negative")
    return _matching_chains(g, float(lam), 1, int(steps), rng)[0]


def glauber_ising(g: Graph, spec: IsingSpec, beta: float, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Final +-1 configuration for the annealed Ising measure e^{beta H} F."""
    b = check_beta(beta)
    if steps < 0:
        raise InvalidParameter("steps must be non-negative")
    return _spin_chains(g, *_ising_logs(g, spec, b), 1, int(steps), rng)[0]


def _ising_logs(g: Graph, spec: IsingSpec, beta: float):
    spec.check_graph(g)
    log_g = np.log(spec.gamma)
    # activity lam_v^{-beta eta}; zero fields stay zero for beta < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_act = (-beta * spec.eta) * np.log(spec.lam)
    log_act = np.where(spec.lam == 0.0, -np.inf, log_act)
    return log_g, log_g, log_act


class GlauberOracle(Oracle):
    """Gibbs oracle for a graph model, sampling by fresh Glauber chains.

    ``kind`` selects the annealing reformulation:

    * ``"two_spin"``: H = n+, lam = e^beta;
    * ``"flipped"``: H = n - n+, lam = e^{-beta};
    * ``"matchings"``: H = |M|, lam = e^beta;
    * ``"ising"``: H = eta sum_{+} ln(1/lam_v), sites weighted lam_v^{-beta eta}.

    At beta = -inf the target is the point mass at H = 0 and no chain is run.
    """

    def __init__(self, g: Graph, kind: str, spec, steps_per_sample: int, seed: int):
        super().__init__()
        if kind not in KINDS:
            raise InvalidParameter(f"unknown model kind {kind!r}")
        if int(steps_per_sample) < 0:
            raise InvalidParameter("steps_per_sample must be non-negative")
        if kind == "flipped" and spec.gamma1 <= 0:
            raise InvalidParameter("the flipped reformulation needs gamma1 > 0")
        self.g = g
        self.kind = kind
        self.spec = spec
        self.steps = int(steps_per_sample)
        self.seed = int(seed)
        if kind == "ising":
            self._cost = spec.site_costs()

    def _hamiltonian(self, state: np.ndarray) -> np.ndarray:
        if self.kind == "matchings":
            return state.sum(axis=1).astype(float)
        plus = state > 0
        if self.kind == "two_spin":
            return plus.sum(axis=1).astype(float)
        if self.kind == "flipped":
            return (self.g.n - plus.sum(axis=1)).astype(float)
        return np.where(plus, self._cost, 0.0).sum(axis=1)

    def _chains(self, beta: float, chains: int, rng) -> np.ndarray:
        g, steps = self.g, self.steps
        if self.kind == "matchings":
            return _matching_chains(g, math.exp(beta), chains, steps, rng)
        if self.kind == "ising":
            logs = _ising_logs(g, self.spec, beta)
        else:
            lam = math.exp(beta) if self.kind == "two_spin" else math.exp(-beta)
            logs = _two_spin_logs(g, self.spec, lam)
        return _spin_chains(g, *logs, chains, steps, rng)

    def draw(self, beta, count: int, stream: int) -> np.ndarray:
        b = check_beta(beta)
        count = _check_count(count)
        if b == NEG_INF:
            self._tally(count)
            return np.zeros(count)
        rng = stream_rng(self.seed, stream, b)
        per_block = max(1, _UNIFORM_BLOCK // max(self.steps, 1))
        out = np.empty(count)
        for start in range(0, count, per_block):
            stop = min(count, start + per_block)
            out[start:stop] = self._hamiltonian(self._chains(b, stop - start, rng))
        self._tally(count)
        return out


def oracle_from_glauber(g: Graph, spec, steps_per_sample: int | None, seed: int, kind: str | None = None) -> GlauberOracle:
    """Glauber oracle; ``kind`` defaults from the spec type (2-spin, Ising, or a bare activity for matchings)."""
    if kind is None:
        if isinstance(spec, TwoSpinSpec):
            kind = "two_spin"
        elif isinstance(spec, IsingSpec):
            kind = "ising"
        else:
            kind = "matchings"
    steps = default_steps(g) if steps_per_sample is None else steps_per_sample
    return GlauberOracle(g, kind, spec, steps, seed)
