"""Monomer-dimer model: matchings weighted lam^{|M|}, H = |M|, F = 1."""

from __future__ import annotations

import math

import numpy as np

from ..core import Bounds, GrossGibbsModel
from ..errors import InvalidParameter, TooLarge
from .graph import Graph

MAX_MATCHING_EDGES = 24


def matching_counts(g: Graph) -> list[int]:
    """Number of matchings of each size, by depth-first extension over edges in order."""
    if g.m > MAX_MATCHING_EDGES:
        raise TooLarge(f"{g.m} edges exceeds the {MAX_MATCHING_EDGES}-edge cap")
    counts = [0] * (g.n // 2 + 1)
    used = [False] * g.n
    edges = g.edges

    def extend(start: int, size: int) -> None:
        counts[size] += 1
        for e in range(start, len(edges)):
            u, v = edges[e]
            if not used[u] and not used[v]:
                used[u] = used[v] = True
                extend(e + 1, size + 1)
                used[u] = used[v] = False

    extend(0, 0)
    while counts and counts[-1] == 0:
        counts.pop()
    return counts


def enumerate_matchings(g: Graph, lam: float | None = None) -> GrossGibbsModel:
    """Histogram c_x = number of matchings of size x; ``lam`` only sets beta = ln lam later."""
    counts = matching_counts(g)
    xs = np.arange(len(counts), dtype=float)
    log_c = np.array([math.log(c) if c > 0 else -math.inf for c in counts])
    return GrossGibbsModel.from_points(xs, log_c)


def matching_bounds(g: Graph, lam_hat: float) -> Bounds:
    """Annealing from lam = 0 to ``lam_hat`` with q = m ln(1 + lam_hat), h = m.

    Each edge is a site of the line graph, so the vertex bounds of the 2-spin
    first interval apply with n replaced by m.
    """
    if not lam_hat > 0:
        raise InvalidParameter("target activity must be positive")
    if g.m == 0:
        raise InvalidParameter("graph has no edges")
    return Bounds(q=g.m * math.log1p(lam_hat), h=float(g.m), beta_min=-math.inf, beta_max=math.log(lam_hat))
