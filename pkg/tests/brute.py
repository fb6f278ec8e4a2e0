"""Brute-force configuration sums used as independent oracles by the tests."""

from __future__ import annotations

import itertools
import math


def brute_two_spin_z(g, spec):
    total = 0.0
    for sigma in itertools.product((-1, 1), repeat=g.n):
        n_plus = sum(s > 0 for s in sigma)
        m_plus = sum(sigma[u] > 0 and sigma[v] > 0 for u, v in g.edges)
        m_minus = sum(sigma[u] < 0 and sigma[v] < 0 for u, v in g.edges)
        total += spec.lam**n_plus * spec.gamma1**m_plus * spec.gamma2**m_minus
    return total


def brute_matching_counts(g):
    counts = {}
    for r in range(g.m + 1):
        for sub in itertools.combinations(g.edges, r):
            ends = [v for e in sub for v in e]
            if len(ends) == len(set(ends)):
                counts[r] = counts.get(r, 0) + 1
    return [counts.get(r, 0) for r in range(max(counts) + 1)]


def brute_ising_z(g, spec):
    total = 0.0
    for sigma in itertools.product((-1, 1), repeat=g.n):
        w = 1.0
        for v, s in enumerate(sigma):
            if s > 0:
                w *= spec.lam[v]
        for e, (u, v) in enumerate(g.edges):
            if sigma[u] == sigma[v]:
                w *= spec.gamma[e]
        total += w
    return total


def brute_rc_z(g, spec):
    total = 0.0
    for mask in range(1 << g.m):
        parent = list(range(g.n))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        w = 1.0
        for e, (u, v) in enumerate(g.edges):
            if mask >> e & 1:
                w *= spec.p[e]
                parent[find(u)] = find(v)
            else:
                w *= 1 - spec.p[e]
        comps = {}
        for v in range(g.n):
            comps.setdefault(find(v), []).append(v)
        for vs in comps.values():
            w *= 1 + math.prod(spec.lam[v] for v in vs)
        total += w
    return total
