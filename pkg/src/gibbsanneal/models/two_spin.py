"""2-spin systems: weight lambda^{n+} gamma1^{m+} gamma2^{m-} over {-1,+1}^V.

Annealing reformulations:

* first interval: beta = ln(lambda), H = n+, F = gamma1^{m+} gamma2^{m-}, annealing
  from lambda = 0 (beta = -inf, Z(-inf) = gamma2^m);
* second interval ("flipped"): beta = ln(1/lambda), H = n - n+, and
  Z = lambda^n * Z~(beta), annealing from lambda = +inf (Z~(-inf) = gamma1^m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..core import Bounds, GrossGibbsModel
from ..errors import InvalidParameter, TooLarge
from .graph import Graph

MAX_SPIN_BITS = 20
_CHUNK = 1 << 15


@dataclass(frozen=True)
class TwoSpinSpec:
    gamma1: float
    gamma2: float
    lam: float

    def __post_init__(self):
        g1, g2, lam = float(self.gamma1), float(self.gamma2), float(self.lam)
        if not (0.0 <= g1 <= g2 and g2 > 0.0 and lam > 0.0) or not all(map(math.isfinite, (g1, g2, lam))):
            raise InvalidParameter(f"need 0 <= gamma1 <= gamma2, gamma2 > 0, lambda > 0; got ({g1}, {g2}, {lam})")
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)
        object.__setattr__(self, "lam", lam)

    @property
    def antiferro(self) -> bool:
        return self.gamma1 * self.gamma2 < 1.0

    @classmethod
    def hardcore(cls, lam: float) -> "TwoSpinSpec":
        return cls(0.0, 1.0, lam)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def spin_blocks(n: int):
    """Yield boolean arrays (configs x n) with True meaning spin +1; config index = bitmask."""
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        yield ((idx[:, None] >> shifts) & 1).astype(bool)


def _edge_counts(g: Graph, plus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    eu, ev = g.endpoints
    if g.m == 0:
        z = np.zeros(plus.shape[0], dtype=np.int64)
        return z, z
    pu, pv = plus[:, eu], plus[:, ev]
    return (pu & pv).sum(axis=1), (~pu & ~pv).sum(axis=1)


def _times_log(count: np.ndarray, log_w: float) -> np.ndarray:
    return np.where(count > 0, count * log_w if math.isfinite(log_w) else -np.inf, 0.0)


def enumerate_two_spin(g: Graph, spec: TwoSpinSpec, flipped: bool = False) -> GrossGibbsModel:
    """Brute-force histogram c_x = sum of F over configurations with H = x."""
    if g.n > MAX_SPIN_BITS:
        raise TooLarge(f"2^{g.n} configurations exceeds the 2^{MAX_SPIN_BITS} cap")
    lg1, lg2 = _log(spec.gamma1), _log(spec.gamma2)
    acc = np.full(g.n + 1, -np.inf)
    for plus in spin_blocks(g.n):
        m_plus, m_minus = _edge_counts(g, plus)
        with np.errstate(invalid="ignore"):
            log_f = _times_log(m_plus, lg1) + _times_log(m_minus, lg2)
        n_plus = plus.sum(axis=1)
        h = g.n - n_plus if flipped else n_plus
        for x in np.unique(h):
            sel = log_f[h == x]
            acc[x] = np.logaddexp(acc[x], logsumexp(sel))
    xs = np.arange(g.n + 1, dtype=float)
    return GrossGibbsModel.from_points(xs, acc)


def two_spin_bounds(g: Graph, spec: TwoSpinSpec, lam_hat: float | None = None, interval: str = "first") -> Bounds:
    """(q, h) and the annealing interval for target activity ``lam_hat``."""
    lam_hat = spec.lam if lam_hat is None else float(lam_hat)
    if not lam_hat > 0:
        raise InvalidParameter("target activity must be positive")
    # Z(-inf) carries gamma2^m (or gamma1^m); when gamma2 < 1 the ratio can exceed the plain formula
    slack = g.m * max(0.0, -math.log(spec.gamma2))
    if interval == "first":
        return Bounds(q=g.n * math.log1p(lam_hat) + slack, h=float(g.n), beta_min=-math.inf, beta_max=math.log(lam_hat))
    if interval == "second":
        if spec.gamma1 <= 0:
            raise InvalidParameter("the second-interval reformulation needs gamma1 > 0")
        q = (g.m * math.log(spec.gamma2 / spec.gamma1) if g.m else 0.0) + g.n * math.log1p(1.0 / lam_hat) + slack
        return Bounds(q=q, h=float(g.n), beta_min=-math.inf, beta_max=-math.log(lam_hat))
    raise InvalidParameter(f"interval must be 'first' or 'second', got {interval!r}")


def two_spin_log_partition(g: Graph, spec: TwoSpinSpec) -> float:
    """ln Z^{2-spin} from the first-interval histogram."""
    model = enumerate_two_spin(g, spec)
    return float(logsumexp(model.log_c + math.log(spec.lam) * model.x))


def direct_two_spin_log_partition(g: Graph, spec: TwoSpinSpec) -> float:
    """ln Z^{2-spin} as a plain configuration sum, without grouping by H."""
    if g.n > MAX_SPIN_BITS:
        raise TooLarge(f"2^{g.n} configurations exceeds the 2^{MAX_SPIN_BITS} cap")
    lg1, lg2, ll = _log(spec.gamma1), _log(spec.gamma2), math.log(spec.lam)
    parts = []
    for plus in spin_blocks(g.n):
        m_plus, m_minus = _edge_counts(g, plus)
        with np.errstate(invalid="ignore"):
            lw = plus.sum(axis=1) * ll + _times_log(m_plus, lg1) + _times_log(m_minus, lg2)
        parts.append(logsumexp(lw))
    return float(logsumexp(parts))
