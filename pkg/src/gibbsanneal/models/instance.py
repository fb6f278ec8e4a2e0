"""A graph model bundled with its annealing reformulation and exact histogram."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

from ..core import Bounds, GrossGibbsModel, log_partition, log_ratio
from ..errors import InvalidParameter
from ..oracle import ExactOracle
from .glauber import GlauberOracle, default_steps
from .graph import Graph
from .ising import IsingSpec, enumerate_ising, ising_log_partition
from .matchings import enumerate_matchings, matching_bounds, matching_counts
from .two_spin import TwoSpinSpec, direct_two_spin_log_partition, enumerate_two_spin, two_spin_bounds


@dataclass(frozen=True, eq=False)
class ModelInstance:
    """``kind`` is one of ``two_spin``, ``flipped``, ``matchings``, ``ising``.

    ``spec`` is a :class:`TwoSpinSpec`, an :class:`IsingSpec` or, for
    matchings, the edge activity. The target partition function is
    Z(beta_max) of the annealed family times ``log_scale`` (as a log offset).
    """

    name: str
    graph: Graph
    kind: str
    spec: object

    @cached_property
    def bounds(self) -> Bounds:
        if self.kind in ("two_spin", "flipped"):
            interval = "first" if self.kind == "two_spin" else "second"
            return two_spin_bounds(self.graph, self.spec, interval=interval)
        if self.kind == "matchings":
            return matching_bounds(self.graph, float(self.spec))
        return enumerate_ising(self.graph, self.spec)[1]

    @property
    def pipeline_bounds(self) -> Bounds:
        """``bounds`` with h raised to 2 when smaller (a looser bound stays valid)."""
        b = self.bounds
        return b if b.h >= 2 else replace(b, h=2.0)

    @cached_property
    def model(self) -> GrossGibbsModel:
        if self.kind in ("two_spin", "flipped"):
            return enumerate_two_spin(self.graph, self.spec, flipped=self.kind == "flipped")
        if self.kind == "matchings":
            return enumerate_matchings(self.graph)
        return enumerate_ising(self.graph, self.spec)[0]

    @property
    def log_scale(self) -> float:
        """ln Z_target - ln Z(beta_max): n ln(lam) for the flipped form, 0 otherwise."""
        if self.kind == "flipped":
            return self.graph.n * math.log(self.spec.lam)
        return 0.0

    def exact_log_q(self) -> float:
        b = self.bounds
        return log_ratio(self.model, b.beta_min, b.beta_max)

    def log_z_min(self) -> float:
        return log_partition(self.model, self.bounds.beta_min)

    def exact_log_z(self) -> float:
        return log_partition(self.model, self.bounds.beta_max) + self.log_scale

    def direct_log_z(self) -> float:
        """ln Z by summing configurations directly (independent of the histogram)."""
        if self.kind == "ising":
            return ising_log_partition(self.graph, self.spec)
        if self.kind == "matchings":
            lam = float(self.spec)
            return math.log(math.fsum(c * lam**k for k, c in enumerate(matching_counts(self.graph))))
        return direct_two_spin_log_partition(self.graph, self.spec)

    def exact_oracle(self, seed: int) -> ExactOracle:
        return ExactOracle(self.model, seed)

    def glauber_oracle(self, seed: int, steps_per_sample: int | None = None) -> GlauberOracle:
        steps = default_steps(self.graph) if steps_per_sample is None else steps_per_sample
        return GlauberOracle(self.graph, self.kind, self.spec, steps, seed)


def make_instance(name: str, graph: Graph, spec, kind: str | None = None) -> ModelInstance:
    if kind is None:
        if isinstance(spec, TwoSpinSpec):
            kind = "two_spin"
        elif isinstance(spec, IsingSpec):
            kind = "ising"
        else:
            kind = "matchings"
    if kind not in ("two_spin", "flipped", "matchings", "ising"):
        raise InvalidParameter(f"unknown model kind {kind!r}")
    if kind == "matchings":
        spec = float(spec)
    return ModelInstance(name, graph, kind, spec)


def _builtins() -> dict:
    p4, k2, k3, c5 = Graph.path(4), Graph.complete(2), Graph.complete(3), Graph.cycle(5)
    return {
        "p4_hardcore": lambda: make_instance("p4_hardcore", p4, TwoSpinSpec.hardcore(1.0)),
        "k2_hardcore": lambda: make_instance("k2_hardcore", k2, TwoSpinSpec.hardcore(1.0)),
        "c5_antiferro": lambda: make_instance("c5_antiferro", c5, TwoSpinSpec(0.2, 0.8, 1.0)),
        "c5_antiferro_flipped": lambda: make_instance("c5_antiferro_flipped", c5, TwoSpinSpec(0.2, 0.8, 3.0), "flipped"),
        "triangle_matchings": lambda: make_instance("triangle_matchings", k3, 1.0),
        "p4_matchings": lambda: make_instance("p4_matchings", p4, 1.0),
        "p4_ising": lambda: make_instance("p4_ising", p4, IsingSpec.uniform(p4, 2.0, 0.5, 0.5)),
        "k2_ising": lambda: make_instance("k2_ising", k2, IsingSpec.uniform(k2, 2.0, 0.5, 0.5)),
    }


BUILTIN_NAMES = tuple(_builtins())


def builtin(name: str) -> ModelInstance:
    table = _builtins()
    if name not in table:
        raise InvalidParameter(f"unknown model {name!r}; choose from {', '.join(table)}")
    return table[name]()
