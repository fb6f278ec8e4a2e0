# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``_kernels_py`` mirrors every function line for line.

Each Markov-chain step consumes one uniform ``u``: ``floor(u * N)`` picks the
site and the fractional part drives the heat-bath decision.
"""

from libc.math cimport exp, log, log1p, INFINITY


def spin_glauber(const long[:] indptr, const long[:] nbr, const long[:] eid,
                 const double[:] log_gp, const double[:] log_gm, const double[:] log_act,
                 signed char[:, :] spins, const double[:, :] u):
    """Heat-bath single-site updates of +-1 spins, one row of ``u`` per chain."""
    cdef Py_ssize_t n = spins.shape[1]
    cdef Py_ssize_t chains = spins.shape[0]
    cdef Py_ssize_t steps = u.shape[1]
    cdef Py_ssize_t c, s, j, v
    cdef double x, r, la, lb, p
    with nogil:
        for c in range(chains):
            for s in range(steps):
                x = u[c, s] * n
                v = <Py_ssize_t>x
                if v >= n:
                    v = n - 1
                r = x - v
                la = log_act[v]
                lb = 0.0
                for j in range(indptr[v], indptr[v + 1]):
                    if spins[c, nbr[j]] > 0:
                        la = la + log_gp[eid[j]]
                    else:
                        lb = lb + log_gm[eid[j]]
                p = 1.0 / (1.0 + exp(lb - la))
                if p != p:
                    p = 0.0
                if r < p:
                    spins[c, v] = 1
                else:
                    spins[c, v] = -1


def matching_glauber(const long[:] eu, const long[:] ev, double p_add,
                     signed char[:, :] state, const double[:, :] u, long[:] occ):
    """Edge heat-bath for weighted matchings; ``occ`` is scratch of length n."""
    cdef Py_ssize_t m = state.shape[1]
    cdef Py_ssize_t chains = state.shape[0]
    cdef Py_ssize_t steps = u.shape[1]
    cdef Py_ssize_t n = occ.shape[0]
    cdef Py_ssize_t c, s, e, i
    cdef double x, r
    with nogil:
        for c in range(chains):
            for i in range(n):
                occ[i] = 0
            for e in range(m):
                if state[c, e]:
                    occ[eu[e]] += 1
                    occ[ev[e]] += 1
            for s in range(steps):
                x = u[c, s] * m
                e = <Py_ssize_t>x
                if e >= m:
                    e = m - 1
                r = x - e
                if state[c, e]:
                    if not r < p_add:
                        state[c, e] = 0
                        occ[eu[e]] -= 1
                        occ[ev[e]] -= 1
                elif occ[eu[e]] == 0 and occ[ev[e]] == 0:
                    if r < p_add:
                        state[c, e] = 1
                        occ[eu[e]] += 1
                        occ[ev[e]] += 1


cdef double _component(Py_ssize_t start, Py_ssize_t skip, Py_ssize_t target,
                       const long[:] indptr, const long[:] nbr, const long[:] eid,
                       const signed char[:] state, const double[:] log_lam,
                       long[:] stack, long[:] seen, long stamp, int* hit) noexcept nogil:
    """Sum of log-activities over the open-edge component of ``start`` ignoring edge ``skip``."""
    cdef Py_ssize_t top = 0, v, w, j
    cdef double total = 0.0
    stack[0] = start
    top = 1
    seen[start] = stamp
    hit[0] = 0
    while top > 0:
        top -= 1
        v = stack[top]
        total = total + log_lam[v]
        if v == target:
            hit[0] = 1
        for j in range(indptr[v], indptr[v + 1]):
            if eid[j] == skip or not state[eid[j]]:
                continue
            w = nbr[j]
            if seen[w] != stamp:
                seen[w] = stamp
                stack[top] = w
                top += 1
    return total


def rc_glauber(const long[:] indptr, const long[:] nbr, const long[:] eid,
               const long[:] eu, const long[:] ev, const long[:] active,
               const double[:] p, const double[:] log_lam,
               signed char[:] state, const double[:] u,
               long[:] stack, long[:] seen):
    """Edge heat-bath for the random cluster measure restricted to ``active`` edges."""
    cdef Py_ssize_t a = active.shape[0]
    cdef Py_ssize_t steps = u.shape[0]
    cdef Py_ssize_t s, k, e
    cdef long stamp = 0
    cdef int hit
    cdef double x, r, sa, sb, lo, lc, prob
    if a == 0:
        return
    with nogil:
        for s in range(steps):
            x = u[s] * a
            k = <Py_ssize_t>x
            if k >= a:
                k = a - 1
            r = x - k
            e = active[k]
            stamp += 1
            sa = _component(eu[e], e, ev[e], indptr, nbr, eid, state, log_lam, stack, seen, stamp, &hit)
            if hit:
                prob = p[e]
            else:
                stamp += 1
                sb = _component(ev[e], e, -1, indptr, nbr, eid, state, log_lam, stack, seen, stamp, &hit)
                lo = log(p[e]) + log1p(exp(sa + sb))
                lc = log(1.0 - p[e]) + log1p(exp(sa)) + log1p(exp(sb))
                prob = 1.0 / (1.0 + exp(lc - lo))
            if r < prob:
                state[e] = 1
            else:
                state[e] = 0


def rc_log_weights(long n, const long[:] eu, const long[:] ev,
                   const double[:] log_p, const double[:] log_1mp, const double[:] log_lam,
                   double[:] out, long[:] parent, double[:] comp):
    """log w(S) for every edge subset S, indexed by bitmask."""
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t total = out.shape[0]
    cdef Py_ssize_t mask, e, v, ra, rb
    cdef double lw
    with nogil:
        for mask in range(total):
            for v in range(n):
                parent[v] = v
                comp[v] = 0.0
            lw = 0.0
            for e in range(m):
                if (mask >> e) & 1:
                    lw = lw + log_p[e]
                    ra = eu[e]
                    while parent[ra] != ra:
                        parent[ra] = parent[parent[ra]]
                        ra = parent[ra]
                    rb = ev[e]
                    while parent[rb] != rb:
                        parent[rb] = parent[parent[rb]]
                        rb = parent[rb]
                    if ra != rb:
                        if ra < rb:
                            parent[rb] = ra
                        else:
                            parent[ra] = rb
                else:
                    lw = lw + log_1mp[e]
            for v in range(n):
                ra = v
                while parent[ra] != ra:
                    ra = parent[ra]
                comp[ra] = comp[ra] + log_lam[v]
            for v in range(n):
                if parent[v] == v:
                    lw = lw + log1p(exp(comp[v]))
            out[mask] = lw
