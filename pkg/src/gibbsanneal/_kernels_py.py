"""Pure-Python twins of ``_kernels.pyx``.

Same arithmetic in the same order, so for identical inputs both backends
produce identical outputs. Used when the extension is not built or when
``GIBBSANNEAL_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def spin_glauber(indptr, nbr, eid, log_gp, log_gm, log_act, spins, u):
    n = spins.shape[1]
    ip, nb, ed = indptr.tolist(), nbr.tolist(), eid.tolist()
    gp, gm, act = log_gp.tolist(), log_gm.tolist(), log_act.tolist()
    for c in range(spins.shape[0]):
        row = spins[c].tolist()
        for us in u[c].tolist():
            x = us * n
            v = int(x)
            if v >= n:
                v = n - 1
            r = x - v
            la = act[v]
            lb = 0.0
            for j in range(ip[v], ip[v + 1]):
                if row[nb[j]] > 0:
                    la = la + gp[ed[j]]
                else:
                    lb = lb + gm[ed[j]]
            d = lb - la
            p = 1.0 / (1.0 + _exp(d)) if d == d else math.nan
            if p != p:
                p = 0.0
            row[v] = 1 if r < p else -1
        spins[c] = row


def matching_glauber(eu, ev, p_add, state, u, occ):
    m = state.shape[1]
    n = occ.shape[0]
    a, b = eu.tolist(), ev.tolist()
    for c in range(state.shape[0]):
        row = state[c].tolist()
        oc = [0] * n
        for e in range(m):
            if row[e]:
                oc[a[e]] += 1
                oc[b[e]] += 1
        for us in u[c].tolist():
            x = us * m
            e = int(x)
            if e >= m:
                e = m - 1
            r = x - e
            if row[e]:
                if not r < p_add:
                    row[e] = 0
                    oc[a[e]] -= 1
                    oc[b[e]] -= 1
            elif oc[a[e]] == 0 and oc[b[e]] == 0:
                if r < p_add:
                    row[e] = 1
                    oc[a[e]] += 1
                    oc[b[e]] += 1
        state[c] = row
        occ[:] = oc


def _component(start, skip, target, ip, nb, ed, st, lam):
    seen = {start}
    stack = [start]
    total = 0.0
    hit = False
    while stack:
        v = stack.pop()
        total = total + lam[v]
        if v == target:
            hit = True
        for j in range(ip[v], ip[v + 1]):
            if ed[j] == skip or not st[ed[j]]:
                continue
            w = nb[j]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return total, hit


def rc_glauber(indptr, nbr, eid, eu, ev, active, p, log_lam, state, u, stack, seen):
    a = active.shape[0]
    if a == 0:
        return
    ip, nb, ed = indptr.tolist(), nbr.tolist(), eid.tolist()
    us_, vs_, act = eu.tolist(), ev.tolist(), active.tolist()
    pp, lam = p.tolist(), log_lam.tolist()
    st = state.tolist()
    for us in u.tolist():
        x = us * a
        k = int(x)
        if k >= a:
            k = a - 1
        r = x - k
        e = act[k]
        sa, hit = _component(us_[e], e, vs_[e], ip, nb, ed, st, lam)
        if hit:
            prob = pp[e]
        else:
            sb, _ = _component(vs_[e], e, -1, ip, nb, ed, st, lam)
            lo = _log(pp[e]) + math.log1p(_exp(sa + sb))
            lc = _log(1.0 - pp[e]) + math.log1p(_exp(sa)) + math.log1p(_exp(sb))
            prob = 1.0 / (1.0 + _exp(lc - lo))
        st[e] = 1 if r < prob else 0
    state[:] = st


def rc_log_weights(n, eu, ev, log_p, log_1mp, log_lam, out, parent, comp):
    m = eu.shape[0]
    a, b = eu.tolist(), ev.tolist()
    lp, lq, lam = log_p.tolist(), log_1mp.tolist(), log_lam.tolist()
    res = [0.0] * out.shape[0]
    for mask in range(out.shape[0]):
        par = list(range(n))
        cs = [0.0] * n
        lw = 0.0
        for e in range(m):
            if (mask >> e) & 1:
                lw = lw + lp[e]
                ra = a[e]
                while par[ra] != ra:
                    par[ra] = par[par[ra]]
                    ra = par[ra]
                rb = b[e]
                while par[rb] != rb:
                    par[rb] = par[par[rb]]
                    rb = par[rb]
                if ra != rb:
                    if ra < rb:
                        par[rb] = ra
                    else:
                        par[ra] = rb
            else:
                lw = lw + lq[e]
        for v in range(n):
            ra = v
            while par[ra] != ra:
                ra = par[ra]
            cs[ra] = cs[ra] + lam[v]
        for v in range(n):
            if par[v] == v:
                lw = lw + math.log1p(_exp(cs[v]))
        res[mask] = lw
    out[:] = res
