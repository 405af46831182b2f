"""Pure-Python integer kernels for the rounding and coloring inner loops.

Everything in here works on dense node indices and plain Python integers.
Fractional label values are numerators over a common power-of-two
denominator, and utility/cost tables are pre-scaled to integers by the
caller, so all hot-loop arithmetic is exact integer arithmetic.  The
compiled extension (``locround._kernel._core``) implements the same
functions with C integers and falls back to this module per call when its
magnitude bounds would overflow.

Multigraphs are passed as parallel edge arrays ``eu``, ``ev`` (endpoint
node indices), ``mgr`` (manager node index for virtual edges, -1 for
physical edges) plus optional per-node weights for node-level valuation
terms (the dummy-edge reduction).
"""

from __future__ import annotations

import heapq

# ---------------------------------------------------------------------------
# primes and polynomial arithmetic over F_p
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n):
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    if n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 2
    return n


def _poly_trim(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(a, b, g, p):
    # a*b mod g, all coefficient lists low->high, g monic
    n = len(a) + len(b) - 1
    out = [0] * n
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    dg = len(g) - 1
    for i in range(n - 1, dg - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(dg):
                out[i - dg + j] = (out[i - dg + j] - c * g[j]) % p
    del out[dg:]
    return _poly_trim(out, p)


def _poly_powmod(base, e, g, p):
    result = [1]
    base = _poly_trim(base, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, g, p)
        base = _poly_mulmod(base, base, g, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a = _poly_trim(a, p)
    b = _poly_trim(b, p)
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        r = list(a)
        while len(r) >= len(bm) and r:
            c = r[-1]
            if c:
                off = len(r) - len(bm)
                for j in range(len(bm)):
                    r[off + j] = (r[off + j] - c * bm[j]) % p
            r = _poly_trim(r, p)
            if not r:
                break
        a, b = bm, _poly_trim(r, p)
    return _poly_trim(a, p)


def poly_roots(f, p):
    """Sorted distinct roots in F_p of the polynomial with coefficients f.

    Deterministic: splitting elements are tried in the fixed order
    a = 0, 1, 2, ...
    """
    f = _poly_trim(f, p)
    if not f:
        raise ValueError("zero polynomial has every root")
    if len(f) == 1:
        return []
    if p <= 512 or len(f) - 1 >= p:
        return [z for z in range(p) if _poly_eval(f, z, p) == 0]
    # monic
    inv = pow(f[-1], p - 2, p)
    f = [(c * inv) % p for c in f]
    # radical part containing exactly the distinct roots: gcd(f, x^p - x)
    xp = _poly_powmod([0, 1], p, f, p)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _poly_gcd(f, xp_minus_x, p)
    roots = []
    _split_roots(g, p, roots)
    roots.sort()
    return roots


def _poly_eval(f, z, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * z + c) % p
    return acc


def _split_roots(g, p, out):
    g = _poly_trim(g, p)
    if len(g) <= 1:
        return
    inv = pow(g[-1], p - 2, p)
    g = [(c * inv) % p for c in g]
    if len(g) == 2:
        out.append((-g[0]) % p)
        return
    half = (p - 1) // 2
    for a in range(4096):
        h = _poly_powmod([a, 1], half, g, p)
        h = list(h) + [0] * (1 - len(h)) if not h else list(h)
        h[0] = (h[0] - 1) % p
        d = _poly_gcd(g, h, p)
        if 0 < len(d) - 1 < len(g) - 1:
            _split_roots(d, p, out)
            # g / d
            quot = _poly_divexact(g, d, p)
            _split_roots(quot, p, out)
            return
        # also try splitting off the root -a directly
        if _poly_eval(g, (-a) % p, p) == 0:
            out.append((-a) % p)
            quot = _poly_divexact(g, [a, 1], p)
            _split_roots(quot, p, out)
            return
    raise RuntimeError("root splitting did not converge")


def _poly_divexact(a, b, p):
    a = list(a)
    binv = pow(b[-1], p - 2, p)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - 1, len(b) - 2, -1):
        c = (a[i] * binv) % p
        q[i - (len(b) - 1)] = c
        if c:
            off = i - (len(b) - 1)
            for j in range(len(b)):
                a[off + j] = (a[off + j] - c * b[j]) % p
    return _poly_trim(q, p)


# ---------------------------------------------------------------------------
# Reed-Solomon candidate-set schedules
# ---------------------------------------------------------------------------


def _choose_prime_degree(ncolors, min_ratio_num, min_ratio_den, max_d=12):
    """Smallest-palette (q, d) with q prime, q^(d+1) >= ncolors and
    d/q <= min_ratio_num/min_ratio_den (candidate-set intersection over size).
    """
    best = None
    for d in range(1, max_d + 1):
        # q >= d * den / num, exact ceiling
        qlo = -(-d * min_ratio_den // min_ratio_num)
        q = max(2, qlo, _iroot_ceil(ncolors, d + 1))
        q = next_prime(q)
        while q ** (d + 1) < ncolors:
            q = next_prime(q + 1)
        if best is None or q * q < best[0] * best[0]:
            best = (q, d)
    return best


def _iroot_ceil(n, k):
    if n <= 1:
        return 1
    r = int(round(n ** (1.0 / k)))
    while r ** k >= n:
        r -= 1
    while r ** k < n:
        r += 1
    return r


def plan_defective_schedule(ncolors0, delta_num, delta_den):
    """Schedule of (q, d) Reed-Solomon steps for a weighted per-node
    delta-relative defective coloring starting from ``ncolors0`` colors.

    Budget split follows the s_i = 2^(t-i+1)/delta schedule with the extra
    coarse step 0 at s_0 = 4/delta; the returned per-step conflict budgets
    b_j satisfy sum_j b_j <= delta.
    """
    for t in range(1, 16):
        budgets = [(delta_num, 4 * delta_den)]
        budgets += [(delta_num, delta_den * (1 << (t - i + 3))) for i in range(1, t + 1)]
        plan = []
        n = ncolors0
        for bn, bd in budgets:
            q, d = _choose_prime_degree(n, bn, bd)
            plan.append((q, d, bn, bd))
            n = q * q
        # converged when one more step at the coarsest budget cannot shrink
        q2, _ = _choose_prime_degree(n, delta_num, 8 * delta_den)
        if q2 * q2 >= n:
            # drop trailing steps that stopped shrinking the palette
            while len(plan) > 1:
                q, d, _, _ = plan[-1]
                prev_n = plan[-2][0] ** 2 if len(plan) >= 2 else ncolors0
                if q * q >= prev_n:
                    plan.pop()
                else:
                    break
            return plan
    return plan


def plan_proper_schedule(ncolors0, max_edge_degree):
    """Schedule of (q, d) steps for a proper Linial-style coloring."""
    dd = max(1, max_edge_degree)
    plan = []
    n = ncolors0
    for _ in range(20):
        best = None
        for d in range(1, 13):
            q = max(2, dd * d + 1, _iroot_ceil(n, d + 1))
            q = next_prime(q)
            while q ** (d + 1) < n:
                q = next_prime(q + 1)
            if best is None or q * q < best[0] * best[0]:
                best = (q, d)
        q, d = best
        if q * q >= n and plan:
            break
        plan.append((q, d))
        if q * q >= n:
            break
        n = q * q
    return plan


def _digits(c, q, d):
    out = []
    for _ in range(d + 1):
        out.append(c % q)
        c //= q
    return out


def pow2_floor(x):
    return 0 if x <= 0 else 1 << (x.bit_length() - 1)


def _edge_agreements(eu, ev, colors, q, d, cache=None):
    """Per-edge sorted agreement positions {z : f_u(z) == f_v(z) mod q}.

    Monochromatic edges get None.  ``cache`` memoizes by color pair.
    """
    m = len(eu)
    out = [None] * m
    local = {} if cache is None else cache
    for e in range(m):
        cu = colors[eu[e]]
        cv = colors[ev[e]]
        if cu == cv:
            continue
        key = (cu, cv) if cu < cv else (cv, cu)
        hit = local.get(key)
        if hit is None:
            pu = _digits(key[0], q, d)
            pv = _digits(key[1], q, d)
            diff = [(a - b) % q for a, b in zip(pu, pv)]
            hit = poly_roots(diff, q)
            local[key] = hit
        out[e] = hit
    return out


def rs_defective_step(nv, eu, ev, mgr, w, nodew, colors, q, d, factor2,
                      agree_cache=None):
    """One candidate-set defective-coloring step; returns new colors in
    [0, q*q) and the max conflict-estimate bit length (for accounting).

    Each node picks the candidate (z, f(z)) minimizing the (estimated)
    weight of bichromatic edges to neighbors whose candidate set contains
    the same pair, ties toward the smallest resulting color index.
    """
    agree = _edge_agreements(eu, ev, colors, q, d, agree_cache)
    conf = [None] * nv      # z -> exact physical weight
    confm = [None] * nv if factor2 else None   # (z, mgr) -> weight
    for e in range(len(eu)):
        zs = agree[e]
        if not zs:
            continue
        u = eu[e]
        v = ev[e]
        we = w[e]
        man = mgr[e]
        for node in (u, v):
            if factor2 and man >= 0:
                dd_ = confm[node]
                if dd_ is None:
                    dd_ = confm[node] = {}
                for z in zs:
                    kz = (z, man)
                    dd_[kz] = dd_.get(kz, 0) + we
            else:
                dd_ = conf[node]
                if dd_ is None:
                    dd_ = conf[node] = {}
                for z in zs:
                    dd_[z] = dd_.get(z, 0) + we
    new_colors = [0] * nv
    maxbits = 1
    for v in range(nv):
        est = dict(conf[v]) if conf[v] else {}
        if factor2 and confm[v]:
            for (z, _man), tot in confm[v].items():
                r = pow2_floor(tot)
                if r:
                    est[z] = est.get(z, 0) + r
                    if r.bit_length() > maxbits:
                        maxbits = r.bit_length()
        fv = _digits(colors[v], q, d)
        best = None
        z0 = 0
        while z0 in est:
            z0 += 1
        if z0 < q:
            best = (0, z0 * q + _poly_eval(fv, z0, q))
        for z, wt in est.items():
            cand = (wt, z * q + _poly_eval(fv, z, q))
            if best is None or cand < best:
                best = cand
        new_colors[v] = best[1]
    return new_colors, maxbits


def rs_proper_step(nv, eu, ev, colors, q, d, agree_cache=None):
    """One conflict-free Linial step; requires q > d * edge-degree."""
    agree = _edge_agreements(eu, ev, colors, q, d, agree_cache)
    blocked = [None] * nv
    for e in range(len(eu)):
        zs = agree[e]
        if not zs:
            continue
        for node in (eu[e], ev[e]):
            s = blocked[node]
            if s is None:
                s = blocked[node] = set()
            s.update(zs)
    new_colors = [0] * nv
    for v in range(nv):
        s = blocked[v]
        z = 0
        if s:
            while z in s:
                z += 1
        if z >= q:
            raise AssertionError("no free candidate color; palette too small")
        new_colors[v] = z * q + _poly_eval(_digits(colors[v], q, d), z, q)
    return new_colors


# ---------------------------------------------------------------------------
# ordering-based color reduction (commit-if-conflict-small passes)
# ---------------------------------------------------------------------------


def reduce_colors_by_orderings(nv, eu, ev, mgr, w, nodew, colors, ncolors,
                               thr_num, thr_den, factor2):
    """Reduce a C-coloring to p colors over p steps, p prime.

    Every stage-one color c < p*(p-1) is mapped to the color sequence
    z_v(i) = (1 + c // p) * i + (c % p) mod p.  In step i an uncommitted
    node takes color z_v(i) iff the (estimated) weight of its
    stage-one-bichromatic edges to neighbors committed to or currently
    trying z_v(i) is < (thr_num/thr_den) of its total incident weight.
    Event-driven: total work is near-linear in the edge count, while the
    declared round count stays p steps.

    Returns (colors in [0, p), p, last_commit_step).
    """
    # blocked steps per node <= 2 / thr, need strictly more steps than that;
    # also p * (p - 1) >= ncolors so distinct colors get distinct orderings
    import math as _math

    lo = max(2 * thr_den // thr_num + 1,
             (1 + _math.isqrt(4 * ncolors + 1)) // 2)
    p = next_prime(lo)
    while p * (p - 1) < ncolors:
        p = next_prime(p + 1)
    aa = [0] * nv
    bb = [0] * nv
    for v in range(nv):
        c = colors[v]
        aa[v] = 1 + c // p
        bb[v] = c % p
    ainv = [pow(a, p - 2, p) for a in aa]

    wtot = list(nodew)
    adj = [[] for _ in range(nv)]   # (other, weight, coincide_step or -1, mgr)
    for e in range(len(eu)):
        u, v, we = eu[e], ev[e], w[e]
        wtot[u] += we
        wtot[v] += we
        if aa[u] == aa[v] and bb[u] == bb[v]:
            continue    # stage-one monochromatic: not resolved here
        if aa[u] != aa[v]:
            i_star = ((bb[v] - bb[u]) * pow((aa[u] - aa[v]) % p, p - 2, p)) % p
        else:
            i_star = -1
        man = mgr[e]
        adj[u].append((v, we, i_star, man))
        adj[v].append((u, we, i_star, man))

    # pend[v]: step -> {(-1): physical weight, mgr: weight}
    pend = [None] * nv
    for v in range(nv):
        for (_u, we, i_star, man) in adj[v]:
            if i_star < 0:
                continue
            d_ = pend[v]
            if d_ is None:
                d_ = pend[v] = {}
            slot = d_.setdefault(i_star, {})
            key = man if (factor2 and man >= 0) else -1
            slot[key] = slot.get(key, 0) + we

    def estimate(v, step):
        d_ = pend[v]
        if not d_ or step not in d_:
            return 0
        tot = 0
        for key, val in d_[step].items():
            tot += pow2_floor(val) if (factor2 and key >= 0) else val
        return tot

    def clear(v, step):
        # commit rule: estimate < thr * total weight (vacuous stake commits)
        if wtot[v] == 0:
            return True
        return estimate(v, step) * thr_den < thr_num * wtot[v]

    committed = [-1] * nv
    heap = []

    def next_clear(v, after):
        s = after + 1
        d_ = pend[v]
        if d_:
            while s < p and not clear(v, s):
                s += 1
        return s

    for v in range(nv):
        heapq.heappush(heap, (next_clear(v, -1), v))

    # Pending-entry edits always target steps strictly after the step being
    # processed, so processing the heap in ascending step order sees the
    # final pending state for each step; removals re-push the affected node
    # so its earliest clear step is never overshot.
    out = [0] * nv
    last_step = 0
    while heap:
        step = heap[0][0]
        if step >= p:
            raise AssertionError("ordering reduction did not commit all nodes")
        batch = []
        while heap and heap[0][0] == step:
            _s, v = heapq.heappop(heap)
            if committed[v] >= 0:
                continue
            if clear(v, step):
                committed[v] = step     # mark now; batch applies together
                batch.append(v)
            else:
                heapq.heappush(heap, (next_clear(v, step), v))
        if not batch:
            continue
        last_step = step
        repush = set()
        for v in batch:
            out[v] = (aa[v] * step + bb[v]) % p
        for v in batch:
            chi = out[v]
            for (u, we, i_star, man) in adj[v]:
                if committed[u] >= 0:
                    continue
                du = pend[u]
                key = man if (factor2 and man >= 0) else -1
                if i_star > step and du is not None and i_star in du:
                    slot = du[i_star]
                    slot[key] = slot[key] - we
                    if slot[key] == 0:
                        del slot[key]
                        if not slot:
                            del du[i_star]
                    repush.add(u)
                i2 = ((chi - bb[u]) * ainv[u]) % p
                if i2 > step:
                    if du is None:
                        du = pend[u] = {}
                    slot = du.setdefault(i2, {})
                    slot[key] = slot.get(key, 0) + we
        for u in sorted(repush):
            if committed[u] < 0:
                heapq.heappush(heap, (next_clear(u, step), u))
    return out, p, last_step


# ---------------------------------------------------------------------------
# fractional potential and the basic rounding step
# ---------------------------------------------------------------------------


def eval_potential(nv, L, eu, ev, ut, ct, nut, nct, lam, k):
    """Total (utility, cost), integers at scale (table scale) * 2^(2k)."""
    U = 0
    C = 0
    for e in range(len(eu)):
        lu = lam[eu[e]]
        lv = lam[ev[e]]
        tu = ut[e]
        tc = ct[e]
        for a in range(L):
            la = lu[a]
            if not la:
                continue
            base = a * L
            for b in range(L):
                lb = lv[b]
                if not lb:
                    continue
                prod = la * lb
                U += prod * tu[base + b]
                C += prod * tc[base + b]
    if nut is not None:
        twok = 1 << k
        for v in range(nv):
            nu = nut[v]
            nc = nct[v]
            if nu is None and nc is None:
                continue
            lv = lam[v]
            for a in range(L):
                la = lv[a]
                if not la:
                    continue
                if nu is not None:
                    U += twok * la * nu[a]
                if nc is not None:
                    C += twok * la * nc[a]
    return U, C


def edge_weights_for_step(nv, L, eu, ev, ut, ct, nut, nct, lam, k,
                          eta_num, eta_den):
    """w_e = u(e, lam) + eta * c(e, lam), integers at scale
    table * 2^(2k) * eta_den; plus per-node weights for node-level terms."""
    m = len(eu)
    w = [0] * m
    for e in range(m):
        lu = lam[eu[e]]
        lv = lam[ev[e]]
        tu = ut[e]
        tc = ct[e]
        acc_u = 0
        acc_c = 0
        for a in range(L):
            la = lu[a]
            if not la:
                continue
            base = a * L
            for b in range(L):
                lb = lv[b]
                if lb:
                    acc_u += la * lb * tu[base + b]
                    acc_c += la * lb * tc[base + b]
        w[e] = eta_den * acc_u + eta_num * acc_c
    nodew = [0] * nv
    if nut is not None:
        twok = 1 << k
        for v in range(nv):
            nu = nut[v]
            nc = nct[v]
            acc = 0
            if nu is not None:
                lv = lam[v]
                for a in range(L):
                    acc += eta_den * lv[a] * nu[a]
            if nc is not None:
                lv = lam[v]
                for a in range(L):
                    acc += eta_num * lv[a] * nc[a]
            nodew[v] = twok * acc
    return w, nodew


def rounding_color_loop(nv, L, eu, ev, mgr, ut, ct, nut, nct, lam, k, colors,
                        delta_num, delta_den, eta_num, eta_den, est_mode):
    """Inner loop of the basic rounding step over the defective coloring.

    Iterates the color classes in ascending color order; inside a class,
    every node with labels at odd multiples of 2^-k splits them into equal
    halves by estimated marginal potential and moves each value by one
    unit.  ``est_mode``: 0 exact, 1 worst-in-band (test hook), 2 quantized
    per-manager contributions (the bandwidth-saving estimator).

    Mutates ``lam`` (numerators at denominator 2^k); afterwards every value
    is even and the caller halves them.  Returns (max_qidx_bits, touched).
    """
    m = len(eu)
    twok = 1 << k
    inc = [[] for _ in range(nv)]   # (edge, other endpoint, 0/1 side)
    for e in range(m):
        cu = colors[eu[e]]
        cv = colors[ev[e]]
        if cu == cv:
            continue    # monochromatic: untouched by estimates
        inc[eu[e]].append((e, ev[e], 0))
        inc[ev[e]].append((e, eu[e], 1))
    classes = {}
    for v in range(nv):
        classes.setdefault(colors[v], []).append(v)
    sixdd = 6 * delta_den
    max_qbits = 1
    touched = 0
    for gamma in sorted(classes):
        for v in classes[gamma]:
            lamv = lam[v]
            sv = [a for a in range(L) if lamv[a] & 1]
            if not sv:
                continue
            touched += 1
            phis = []
            for a in sv:
                # phi, theta at scale table * 2^k * eta_den
                if est_mode == 2:
                    phi6 = 0        # at scale * 6 * delta_den
                    phi = 0
                    theta = 0
                    per_mgr = {}
                    phys_phi = 0
                    for (e, u, side) in inc[v]:
                        lu = lam[u]
                        tu = ut[e]
                        tc = ct[e]
                        pe = 0
                        te = 0
                        for b in range(L):
                            lb = lu[b]
                            if not lb:
                                continue
                            idx = (a * L + b) if side == 0 else (b * L + a)
                            uu = lb * tu[idx]
                            cc = lb * tc[idx]
                            pe += eta_den * uu - eta_num * cc
                            te += eta_den * uu + eta_num * cc
                        phi += pe
                        theta += te
                        man = mgr[e]
                        if man >= 0:
                            slot = per_mgr.get(man)
                            if slot is None:
                                per_mgr[man] = [pe, te]
                            else:
                                slot[0] += pe
                                slot[1] += te
                        else:
                            phys_phi += pe
                    if nut is not None:
                        nu = nut[v]
                        nc = nct[v]
                        nphi = 0
                        nth = 0
                        if nu is not None:
                            nphi += eta_den * nu[a]
                            nth += eta_den * nu[a]
                        if nc is not None:
                            nphi -= eta_num * nc[a]
                            nth += eta_num * nc[a]
                        phi += twok * nphi
                        theta += twok * nth
                        phys_phi += twok * nphi
                    # quantize each manager contribution down to its band grid
                    phi6 = sixdd * phys_phi
                    for man, (pe, te) in sorted(per_mgr.items()):
                        if te == 0:
                            continue
                        grid = delta_num * te
                        qidx = (sixdd * pe) // grid
                        if qidx:
                            b_ = abs(qidx).bit_length()
                            if b_ > max_qbits:
                                max_qbits = b_
                        phi6 += qidx * grid
                    phis.append((phi6, a))
                else:
                    phi = 0
                    theta = 0 if est_mode == 1 else None
                    for (e, u, side) in inc[v]:
                        lu = lam[u]
                        tu = ut[e]
                        tc = ct[e]
                        for b in range(L):
                            lb = lu[b]
                            if not lb:
                                continue
                            idx = (a * L + b) if side == 0 else (b * L + a)
                            uu = lb * tu[idx]
                            cc = lb * tc[idx]
                            phi += eta_den * uu - eta_num * cc
                            if est_mode == 1:
                                theta += eta_den * uu + eta_num * cc
                    if nut is not None:
                        nu = nut[v]
                        nc = nct[v]
                        if nu is not None:
                            phi += twok * eta_den * nu[a]
                            if est_mode == 1:
                                theta += twok * eta_den * nu[a]
                        if nc is not None:
                            phi -= twok * eta_num * nc[a]
                            if est_mode == 1:
                                theta += twok * eta_num * nc[a]
                    if est_mode == 1:
                        phis.append((sixdd * phi - delta_num * theta, a))
                    else:
                        phis.append((sixdd * phi, a))
            phis.sort(key=lambda t: (-t[0], -t[1]))
            half = len(phis) // 2
            for i, (_val, a) in enumerate(phis):
                if i < half:
                    lamv[a] += 1
                else:
                    lamv[a] -= 1
    return max_qbits, touched


def halve_assignment(nv, L, lam):
    """After a rounding step all numerators are even; divide them by two."""
    for v in range(nv):
        lv = lam[v]
        for a in range(L):
            x = lv[a]
            if x & 1:
                raise AssertionError("rounding step left an odd numerator")
            lv[a] = x >> 1
