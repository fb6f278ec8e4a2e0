from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import InvalidParameter


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``; edges keep their input order."""

    n: int
    edges: tuple

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise InvalidParameter("graph needs at least one vertex")
        norm = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameter(f"edge ({u}, {v}) out of range for n = {n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidParameter(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbour, edge id) incidence arrays, int64."""
        inc = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append((v, e))
            inc[v].append((u, e))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(x) for x in inc])
        nbr = np.array([w for x in inc for w, _ in x], dtype=np.int64)
        eid = np.array([e for x in inc for _, e in x], dtype=np.int64)
        return indptr, nbr, eid

    @cached_property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        eu = np.array([u for u, _ in self.edges], dtype=np.int64)
        ev = np.array([v for _, v in self.edges], dtype=np.int64)
        return eu, ev

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def line_graph(self) -> "Graph":
        """Vertices are the edges of ``self``; adjacent when they share an endpoint."""
        out = []
        for i in range(self.m):
            a = set(self.edges[i])
            for j in range(i + 1, self.m):
                if a & set(self.edges[j]):
                    out.append((i, j))
        return Graph(max(self.m, 1), tuple(out))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, ())
