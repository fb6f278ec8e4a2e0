"""Graph models: exact histograms, Glauber oracles, uniqueness and random-cluster tools."""

from .glauber import GlauberOracle, default_steps, glauber_ising, glauber_matchings, glauber_two_spin, oracle_from_glauber
from .graph import Graph
from .instance import BUILTIN_NAMES, ModelInstance, builtin, make_instance
from .ising import (
    IsingSpec,
    RandomClusterSpec,
    edwards_sokal_spin,
    enumerate_ising,
    enumerate_rc,
    ising_marginal_bound_check,
    ising_rc_identity_check,
    rc_from_ising,
)
from .matchings import enumerate_matchings, matching_bounds
from .rc_sampler import field_dynamics_step, rc_params, sample_rc, tilt
from .two_spin import TwoSpinSpec, enumerate_two_spin, two_spin_bounds
from .uniqueness import fixed_point, lambda_c, tree_recursion, uniqueness_check

__all__ = [
    "BUILTIN_NAMES", "GlauberOracle", "Graph", "IsingSpec", "ModelInstance", "RandomClusterSpec", "TwoSpinSpec",
    "builtin", "default_steps", "edwards_sokal_spin", "enumerate_ising", "enumerate_matchings", "enumerate_rc",
    "enumerate_two_spin", "field_dynamics_step", "fixed_point", "glauber_ising", "glauber_matchings",
    "glauber_two_spin", "ising_marginal_bound_check", "ising_rc_identity_check", "lambda_c", "make_instance",
    "matching_bounds", "oracle_from_glauber", "rc_from_ising", "rc_params", "sample_rc", "tilt", "tree_recursion",
    "two_spin_bounds", "uniqueness_check",
]
