from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbsanneal import kernels
from gibbsanneal.models import Graph

PY = kernels.load_backend("python")
try:
    CY = kernels.load_backend("cython")
except ImportError:  # pragma: no cover - extension not built
    CY = None

needs_cython = pytest.mark.skipif(CY is None, reason="compiled extension not built")


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=min(len(pairs), 10)))
    return Graph(n, tuple(edges))


def log_or_neg_inf(a):
    with np.errstate(divide="ignore"):
        return np.log(a)


@needs_cython
@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0), st.floats(0.1, 2.0), st.floats(0.0, 4.0))
def test_spin_glauber_bit_identical(g, seed, g1, g2, lam):
    rng = np.random.default_rng(seed)
    indptr, nbr, eid = g.csr
    log_gp = np.full(g.m, log_or_neg_inf(g1))
    log_gm = np.full(g.m, np.log(g2))
    log_act = np.full(g.n, log_or_neg_inf(lam))
    u = rng.random((3, 50))
    start = rng.choice(np.array([-1, 1], dtype=np.int8), size=(3, g.n))
    a, b = start.copy(), start.copy()
    PY.spin_glauber(indptr, nbr, eid, log_gp, log_gm, log_act, a, u)
    CY.spin_glauber(indptr, nbr, eid, log_gp, log_gm, log_act, b, u)
    assert np.array_equal(a, b)


@needs_cython
@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_matching_glauber_bit_identical(g, seed, p_add):
    rng = np.random.default_rng(seed)
    eu, ev = g.endpoints
    u = rng.random((3, 60))
    a = np.zeros((3, g.m), dtype=np.int8)
    b = a.copy()
    PY.matching_glauber(eu, ev, p_add, a, u, np.zeros(g.n, dtype=np.int64))
    CY.matching_glauber(eu, ev, p_add, b, u, np.zeros(g.n, dtype=np.int64))
    assert np.array_equal(a, b)
    for row in a:
        ends = np.concatenate([eu[row == 1], ev[row == 1]])
        assert len(ends) == len(set(ends.tolist()))


@needs_cython
@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1))
def test_rc_glauber_bit_identical(g, seed):
    rng = np.random.default_rng(seed)
    indptr, nbr, eid = g.csr
    eu, ev = g.endpoints
    p = rng.uniform(0.05, 0.95, g.m)
    p[rng.random(g.m) < 0.2] = 0.0
    lam = rng.uniform(0.0, 0.9, g.n)
    active = np.flatnonzero(p > 0).astype(np.int64)
    u = rng.random(80)
    a = (rng.random(g.m) < 0.5).astype(np.int8)
    a[p == 0] = 0
    b = a.copy()
    for mod, st_ in ((PY, a), (CY, b)):
        mod.rc_glauber(
            indptr, nbr, eid, eu, ev, active, p, log_or_neg_inf(lam), st_, u,
            np.zeros(g.n, dtype=np.int64), np.zeros(g.n, dtype=np.int64),
        )
    assert np.array_equal(a, b)


@needs_cython
@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6), st.integers(0, 2**32 - 1))
def test_rc_log_weights_bit_identical(g, seed):
    rng = np.random.default_rng(seed)
    eu, ev = g.endpoints
    p = rng.uniform(0.05, 0.95, g.m)
    log_lam = log_or_neg_inf(rng.uniform(0.0, 0.9, g.n))
    outs = []
    for mod in (PY, CY):
        out = np.empty(1 << g.m)
        mod.rc_log_weights(g.n, eu, ev, np.log(p), np.log1p(-p), log_lam, out, np.zeros(g.n, dtype=np.int64), np.zeros(g.n))
        outs.append(out)
    assert np.array_equal(outs[0], outs[1])


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def test_pure_python_switch():
    env = dict(os.environ, **{kernels.PURE_ENV: "1"})
    out = subprocess.run(
        [sys.executable, "-c", "from gibbsanneal import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_cython
def test_compiled_backend_preferred():
    env = {k: v for k, v in os.environ.items() if k != kernels.PURE_ENV}
    out = subprocess.run(
        [sys.executable, "-c", "from gibbsanneal import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "cython"
