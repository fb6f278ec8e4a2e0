"""Black-box sampling access to a gross Gibbs distribution.

An oracle answers ``draw(beta, count, stream)`` with ``count`` i.i.d.
Hamiltonian values from ``mu_beta``. Randomness is keyed by
``(seed, stream, beta)`` so any draw can be replayed, and distinct stream
indices are independent; callers allocate streams with :func:`stream_base`.
The only shared mutable state is the draw counter, guarded by a lock.
"""

from __future__ import annotations

import math
import struct
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import NEG_INF, GrossGibbsModel, check_beta, cumulative
from .errors import DegenerateModel, InvalidParameter

STREAM_SHIFT = 32


def _beta_key(beta: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", beta))[0]


def stream_rng(seed: int, stream: int, beta: float) -> np.random.Generator:
    """Generator for one ``(seed, stream, beta)`` cell."""
    if seed < 0 or stream < 0:
        raise InvalidParameter("seed and stream index must be non-negative")
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream), _beta_key(beta)]))


def stream_base(rng: np.random.Generator) -> int:
    """Fresh block of 2**32 stream indices drawn from ``rng``."""
    return int(rng.integers(0, 2**62)) << STREAM_SHIFT


class Oracle:
    """Base class: thread-safe draw counter plus the ``draw`` contract."""

    supports_counts = False

    def __init__(self):
        self._lock = threading.Lock()
        self._draws = 0

    @property
    def draws(self) -> int:
        return self._draws

    def _tally(self, count: int) -> None:
        with self._lock:
            self._draws += count

    def draw(self, beta, count: int, stream: int) -> np.ndarray:
        raise NotImplementedError

    def draw_counts(self, beta, count: int, stream: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``count`` values and return them as ``(distinct values, multiplicities)``."""
        values = self.draw(beta, count, stream)
        uniq, mult = np.unique(values, return_counts=True)
        return uniq, mult


def _check_count(count) -> int:
    c = int(count)
    if c < 0:
        raise InvalidParameter("count must be non-negative")
    return c


class ExactOracle(Oracle):
    """Exact sampler for an explicit :class:`GrossGibbsModel`.

    Besides plain draws it offers a multinomial fast path
    (:meth:`draw_counts`), which is equal in law to ``count`` independent draws
    and costs O(support) regardless of ``count``.
    """

    supports_counts = True

    def __init__(self, model: GrossGibbsModel, seed: int):
        super().__init__()
        self.model = model
        self.seed = int(seed)
        self._cdf = lru_cache(maxsize=8192)(self._cdf_uncached)

    def _cdf_uncached(self, beta: float) -> np.ndarray:
        return cumulative(self.model, beta)

    def draw(self, beta, count: int, stream: int) -> np.ndarray:
        b = check_beta(beta)
        count = _check_count(count)
        if b == NEG_INF:
            if not self.model.has_zero:
                raise DegenerateModel("mu_{-inf} needs a support point at x = 0")
            self._tally(count)
            return np.zeros(count)
        rng = stream_rng(self.seed, stream, b)
        cdf = self._cdf(b)
        idx = np.searchsorted(cdf, rng.random(count), side="right")
        np.minimum(idx, self.model.size - 1, out=idx)
        self._tally(count)
        return self.model.x[idx]

    def draw_counts(self, beta, count: int, stream: int) -> tuple[np.ndarray, np.ndarray]:
        b = check_beta(beta)
        count = _check_count(count)
        if b == NEG_INF:
            if not self.model.has_zero:
                raise DegenerateModel("mu_{-inf} needs a support point at x = 0")
            self._tally(count)
            return np.zeros(1), np.array([count], dtype=np.int64)
        rng = stream_rng(self.seed, stream, b)
        p = np.diff(self._cdf(b), prepend=0.0)
        p = np.clip(p, 0.0, None)
        mult = rng.multinomial(count, p / p.sum())
        keep = mult > 0
        self._tally(count)
        return self.model.x[keep], mult[keep]


def make_exact_oracle(model: GrossGibbsModel, seed: int) -> ExactOracle:
    return ExactOracle(model, seed)


@dataclass
class Query:
    beta: float
    count: int
    stream: int


@dataclass
class Transcript:
    """Queries grouped by sampling round (rounds are barrier-separated).

    Rounds are opened explicitly with :meth:`new_round` and may stay empty; a
    query recorded before any round was opened starts the first one.
    """

    rounds: list = field(default_factory=list)

    def new_round(self) -> None:
        self.rounds.append([])

    def record(self, q: Query) -> None:
        if not self.rounds:
            self.rounds.append([])
        self.rounds[-1].append(q)

    @property
    def samples_by_round(self) -> list[int]:
        return [sum(q.count for q in r) for r in self.rounds]

    def plan(self) -> list[list[tuple[float, int]]]:
        """(beta, count) per query and round, sorted within a round; streams are dropped."""
        return [sorted((q.beta, q.count) for q in r) for r in self.rounds]


class TracingOracle(Oracle):
    """Wraps an oracle and records every query into a :class:`Transcript`."""

    def __init__(self, inner: Oracle, transcript: Transcript | None = None):
        super().__init__()
        self.inner = inner
        self.transcript = transcript if transcript is not None else Transcript()
        self.supports_counts = getattr(inner, "supports_counts", False)

    def new_round(self) -> None:
        with self._lock:
            self.transcript.new_round()

    def _log(self, beta, count, stream):
        with self._lock:
            self.transcript.record(Query(float(beta), int(count), int(stream)))
            self._draws += int(count)

    def draw(self, beta, count, stream):
        out = self.inner.draw(beta, count, stream)
        self._log(beta, count, stream)
        return out

    def draw_counts(self, beta, count, stream):
        out = self.inner.draw_counts(beta, count, stream)
        self._log(beta, count, stream)
        return out


def exponential(rng: np.random.Generator, size=None):
    """Unit-rate exponential as -ln(U), U uniform on (0, 1]."""
    u = 1.0 - rng.random(size)
    return -np.log(u) if size is not None else -math.log(u)
