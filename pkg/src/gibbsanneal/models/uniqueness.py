"""Tree-recursion uniqueness for anti-ferromagnetic 2-spin systems.

T_d(x) = lam * ((g1 x + 1) / (x + g2))^d is strictly decreasing when g1 g2 < 1,
so it has a single positive fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ..errors import InvalidParameter, NotAntiferro

FIXED_POINT_TOL = 1e-12


def _require_antiferro(gamma1: float, gamma2: float) -> None:
    if not (0.0 <= gamma1 <= gamma2 and gamma2 > 0.0):
        raise InvalidParameter(f"need 0 <= gamma1 <= gamma2 and gamma2 > 0, got ({gamma1}, {gamma2})")
    if gamma1 * gamma2 >= 1.0:
        raise NotAntiferro(f"gamma1 * gamma2 = {gamma1 * gamma2} is not below 1")


def tree_recursion(d: int, x: float, gamma1: float, gamma2: float, lam: float) -> tuple[float, float]:
    """(T_d(x), T_d'(x))."""
    a = gamma1 * x + 1.0
    b = x + gamma2
    t = lam * (a / b) ** d
    dt = d * t * (gamma1 * gamma2 - 1.0) / (a * b)
    return t, dt


def fixed_point(d: int, gamma1: float, gamma2: float, lam: float) -> float:
    """Positive fixed point of T_d, bracketed by ``[0, lam * g2^-d]``, the maximum of T_d."""
    _require_antiferro(gamma1, gamma2)
    if lam <= 0:
        raise InvalidParameter("lambda must be positive")

    def f(x):
        return tree_recursion(d, x, gamma1, gamma2, lam)[0] - x

    hi = math.exp(min(700.0, math.log(lam) - d * math.log(gamma2)))
    while f(hi) > 0:
        hi *= 2.0
    return brentq(f, 0.0, hi, xtol=FIXED_POINT_TOL * min(1.0, hi), rtol=1e-15, maxiter=500)


def derivative_at_fixed_point(d: int, gamma1: float, gamma2: float, lam: float) -> float:
    """|T_d'(x_d)| at the fixed point."""
    x = fixed_point(d, gamma1, gamma2, lam)
    return abs(tree_recursion(d, x, gamma1, gamma2, lam)[1])


def d_unique(d: int, gamma1: float, gamma2: float, lam: float, delta: float) -> bool:
    return derivative_at_fixed_point(d, gamma1, gamma2, lam) <= 1.0 - delta


def uniqueness_check(gamma1: float, gamma2: float, lam: float, max_degree: int, delta: float) -> bool:
    """Up-to-Delta uniqueness with gap ``delta``: d-unique for every 1 <= d < Delta."""
    _require_antiferro(gamma1, gamma2)
    if max_degree < 2:
        raise InvalidParameter("maximum degree must be at least 2")
    if not 0.0 < delta < 1.0:
        raise InvalidParameter("gap must lie in (0, 1)")
    return all(d_unique(d, gamma1, gamma2, lam, delta) for d in range(1, max_degree))


@dataclass(frozen=True)
class UniquenessThreshold:
    """Uniqueness holds for lam in (0, lower) and, when ``upper`` is set, also in (upper, inf).

    ``lower = inf`` means unique for every lam.
    """

    lower: float
    upper: float | None = None

    def contains(self, lam: float) -> bool:
        return lam < self.lower or (self.upper is not None and lam > self.upper)


def critical_roots(d: int, gamma1: float, gamma2: float) -> tuple[float, float] | None:
    """Positive roots x1 <= x2 of d (1 - g1 g2) x = (g1 x + 1)(x + g2), or None if there are none."""
    g = gamma1 * gamma2
    b = 1.0 + g - d * (1.0 - g)
    if gamma1 == 0.0:
        return (gamma2 / -b, math.inf) if b < 0 else None
    disc = b * b - 4.0 * gamma1 * gamma2
    if disc < 0 or b >= 0:
        return None
    r = math.sqrt(disc)
    # stable pair: larger root directly, smaller from the product g2 / g1
    x2 = (-b + r) / (2.0 * gamma1)
    x1 = gamma2 / (gamma1 * x2)
    return x1, x2


def critical_activity(x: float, d: int, gamma1: float, gamma2: float) -> float:
    """lam_i(d) = x ((x + g2) / (g1 x + 1))^d: the activity whose fixed point is x."""
    return x * ((x + gamma2) / (gamma1 * x + 1.0)) ** d


def lambda_c(gamma1: float, gamma2: float, max_degree: int, regular: bool = False) -> UniquenessThreshold:
    """Uniqueness window for degree bound ``max_degree``.

    With ``regular`` only d = Delta - 1 is considered; otherwise the extremes over
    every d < Delta that admits a non-uniqueness window are taken.
    """
    _require_antiferro(gamma1, gamma2)
    if max_degree < 2:
        raise InvalidParameter("maximum degree must be at least 2")
    ds = [max_degree - 1] if regular else list(range(1, max_degree))
    if gamma1 == 0.0:
        vals = [gamma2 ** (d + 1) * d**d / (d - 1) ** (d + 1) for d in ds if d > 1]
        return UniquenessThreshold(min(vals) if vals else math.inf)
    lows, highs = [], []
    for d in ds:
        roots = critical_roots(d, gamma1, gamma2)
        if roots is None:
            continue
        lows.append(critical_activity(roots[0], d, gamma1, gamma2))
        highs.append(critical_activity(roots[1], d, gamma1, gamma2))
    if not lows:
        return UniquenessThreshold(math.inf)
    return UniquenessThreshold(min(lows), max(highs))


def all_lambda_unique(gamma1: float, gamma2: float, max_degree: int) -> bool:
    """True when no d < Delta admits a non-uniqueness window.

    For g1 > 0 that is exactly sqrt(g1 g2) > (Delta - 2) / Delta, i.e. Delta - 1 is
    below (1 + sqrt(g1 g2)) / (1 - sqrt(g1 g2)).
    """
    return math.isinf(lambda_c(gamma1, gamma2, max_degree).lower)
