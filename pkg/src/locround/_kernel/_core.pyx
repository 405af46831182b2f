# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the rounding inner loops.

Mirrors ``locround._kernel.pure`` exactly.  The numeric kernels run on C
integers (128-bit accumulators) and fall back to the pure implementation
per call when a magnitude pre-check cannot certify that every intermediate
fits; the combinatorial kernels (candidate-set steps, ordering reduction,
schedules, polynomial arithmetic) are shared with the pure module.
"""

from libc.stdlib cimport malloc, free

from . import pure as _pure

# shared (object-level) kernels
next_prime = _pure.next_prime
is_prime = _pure.is_prime
poly_roots = _pure.poly_roots
pow2_floor = _pure.pow2_floor
plan_defective_schedule = _pure.plan_defective_schedule
plan_proper_schedule = _pure.plan_proper_schedule
rs_defective_step = _pure.rs_defective_step
rs_proper_step = _pure.rs_proper_step
reduce_colors_by_orderings = _pure.reduce_colors_by_orderings

ctypedef long long i64
cdef extern from *:
    ctypedef long long i128 "__int128"

DEF MAX_SAFE_BITS = 124


cdef object _i128_to_py(i128 x):
    cdef bint neg = x < 0
    cdef unsigned long long lo, hi
    if neg:
        x = -x
    lo = <unsigned long long> (x & <i128> 0xFFFFFFFFFFFFFFFF)
    hi = <unsigned long long> (x >> 64)
    val = (int(hi) << 64) | int(lo)
    return -val if neg else val


def _fits(bound_bits):
    return bound_bits < MAX_SAFE_BITS


cdef int _max_bits_of(list tables) except -1:
    cdef int best = 0
    cdef int b
    for tab in tables:
        if tab is None:
            continue
        for x in tab:
            b = (abs(<object> x)).bit_length()
            if b > best:
                best = b
    return best


def _bounds_ok(m_edges, nv, L, ut, ct, nut, nct, k, extra_bits):
    """Certify that |lam*lam*table| summed over incidences fits 128 bits."""
    cdef int tb = 0
    tb = max(_max_bits_of(ut), _max_bits_of(ct))
    cdef int nb = 0
    if nut is not None:
        nb = max(_max_bits_of([r for r in nut if r is not None]) if any(
            r is not None for r in nut) else 0,
            _max_bits_of([r for r in nct if r is not None]) if any(
            r is not None for r in nct) else 0)
    if nb > tb:
        tb = nb
    cdef long total = 2 * k + tb + extra_bits
    total += max(1, (m_edges + nv + 1).bit_length())
    total += 8   # labels, safety
    return total < MAX_SAFE_BITS


cdef i64* _as_i64(list xs, Py_ssize_t n) except NULL:
    cdef i64 *out = <i64*> malloc(n * sizeof(i64))
    if out is NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    try:
        for i in range(n):
            out[i] = <i64> xs[i]
    except BaseException:
        free(out)
        raise
    return out


cdef i64* _flatten_tables(list tabs, Py_ssize_t m, int LL) except NULL:
    cdef i64 *out = <i64*> malloc(m * LL * sizeof(i64))
    if out is NULL:
        raise MemoryError()
    cdef Py_ssize_t e, j
    try:
        for e in range(m):
            tab = tabs[e]
            for j in range(LL):
                out[e * LL + j] = <i64> tab[j]
    except BaseException:
        free(out)
        raise
    return out


cdef i64* _node_tables(nt, Py_ssize_t nv, int L) except NULL:
    # missing rows become zeros
    cdef i64 *out = <i64*> malloc(nv * L * sizeof(i64))
    if out is NULL:
        raise MemoryError()
    cdef Py_ssize_t v
    cdef int a
    try:
        for v in range(nv):
            row = None if nt is None else nt[v]
            for a in range(L):
                out[v * L + a] = 0 if row is None else <i64> row[a]
    except BaseException:
        free(out)
        raise
    return out


def eval_potential(nv, L, eu, ev, ut, ct, nut, nct, lam, k):
    if not _bounds_ok(len(eu), nv, L, ut, ct, nut, nct, k, 0):
        return _pure.eval_potential(nv, L, eu, ev, ut, ct, nut, nct, lam, k)
    cdef Py_ssize_t m = len(eu)
    cdef int LL = L * L
    cdef Py_ssize_t n = nv
    cdef i64 *ceu = NULL
    cdef i64 *cev = NULL
    cdef i64 *cut = NULL
    cdef i64 *cct = NULL
    cdef i64 *cnu = NULL
    cdef i64 *cnc = NULL
    cdef i64 *clam = NULL
    cdef i128 U = 0, C = 0
    cdef Py_ssize_t e, v
    cdef int a, b, Lc = L
    cdef i64 la, lb
    cdef i128 prod
    cdef i64 twok = <i64> 1 << <int> k
    try:
        ceu = _as_i64(eu, m)
        cev = _as_i64(ev, m)
        cut = _flatten_tables(ut, m, LL)
        cct = _flatten_tables(ct, m, LL)
        clam = <i64*> malloc(n * Lc * sizeof(i64))
        if clam is NULL:
            raise MemoryError()
        for v in range(n):
            row = lam[v]
            for a in range(Lc):
                clam[v * Lc + a] = <i64> row[a]
        for e in range(m):
            for a in range(Lc):
                la = clam[ceu[e] * Lc + a]
                if la == 0:
                    continue
                for b in range(Lc):
                    lb = clam[cev[e] * Lc + b]
                    if lb == 0:
                        continue
                    prod = <i128> la * lb
                    U += prod * cut[e * LL + a * Lc + b]
                    C += prod * cct[e * LL + a * Lc + b]
        if nut is not None:
            cnu = _node_tables(nut, n, Lc)
            cnc = _node_tables(nct, n, Lc)
            for v in range(n):
                for a in range(Lc):
                    la = clam[v * Lc + a]
                    if la == 0:
                        continue
                    U += <i128> twok * la * cnu[v * Lc + a]
                    C += <i128> twok * la * cnc[v * Lc + a]
        return _i128_to_py(U), _i128_to_py(C)
    finally:
        free(ceu); free(cev); free(cut); free(cct)
        free(cnu); free(cnc); free(clam)


def edge_weights_for_step(nv, L, eu, ev, ut, ct, nut, nct, lam, k,
                          eta_num, eta_den):
    cdef int extra = (abs(eta_num) + abs(eta_den)).bit_length() + 2
    if not _bounds_ok(len(eu), nv, L, ut, ct, nut, nct, k, extra):
        return _pure.edge_weights_for_step(nv, L, eu, ev, ut, ct, nut, nct,
                                           lam, k, eta_num, eta_den)
    cdef Py_ssize_t m = len(eu)
    cdef int LL = L * L, Lc = L
    cdef Py_ssize_t n = nv
    cdef i64 en = <i64> eta_num, ed = <i64> eta_den
    cdef i64 *ceu = NULL
    cdef i64 *cev = NULL
    cdef i64 *cut = NULL
    cdef i64 *cct = NULL
    cdef i64 *clam = NULL
    cdef i128 acc_u, acc_c
    cdef Py_ssize_t e, v
    cdef int a, b
    cdef i64 la, lb, twok = <i64> 1 << <int> k
    w = [0] * m
    nodew = [0] * n
    try:
        ceu = _as_i64(eu, m)
        cev = _as_i64(ev, m)
        cut = _flatten_tables(ut, m, LL)
        cct = _flatten_tables(ct, m, LL)
        clam = <i64*> malloc(n * Lc * sizeof(i64))
        if clam is NULL:
            raise MemoryError()
        for v in range(n):
            row = lam[v]
            for a in range(Lc):
                clam[v * Lc + a] = <i64> row[a]
        for e in range(m):
            acc_u = 0
            acc_c = 0
            for a in range(Lc):
                la = clam[ceu[e] * Lc + a]
                if la == 0:
                    continue
                for b in range(Lc):
                    lb = clam[cev[e] * Lc + b]
                    if lb == 0:
                        continue
                    acc_u += <i128> la * lb * cut[e * LL + a * Lc + b]
                    acc_c += <i128> la * lb * cct[e * LL + a * Lc + b]
            w[e] = _i128_to_py(<i128> ed * acc_u + <i128> en * acc_c)
        if nut is not None:
            for v in range(n):
                nu = nut[v]
                nc = nct[v]
                acc_u = 0
                if nu is not None:
                    row = lam[v]
                    for a in range(Lc):
                        acc_u += <i128> ed * (<i64> row[a]) * (<i64> nu[a])
                if nc is not None:
                    row = lam[v]
                    for a in range(Lc):
                        acc_u += <i128> en * (<i64> row[a]) * (<i64> nc[a])
                nodew[v] = _i128_to_py(<i128> twok * acc_u)
        return w, nodew
    finally:
        free(ceu); free(cev); free(cut); free(cct); free(clam)


def rounding_color_loop(nv, L, eu, ev, mgr, ut, ct, nut, nct, lam, k, colors,
                        delta_num, delta_den, eta_num, eta_den, est_mode):
    cdef int extra = ((abs(eta_num) + abs(eta_den)).bit_length()
                      + (abs(delta_num) + 6 * abs(delta_den)).bit_length() + 4)
    if not _bounds_ok(len(eu), nv, L, ut, ct, nut, nct, k, extra):
        return _pure.rounding_color_loop(nv, L, eu, ev, mgr, ut, ct, nut, nct,
                                         lam, k, colors, delta_num, delta_den,
                                         eta_num, eta_den, est_mode)
    cdef Py_ssize_t m = len(eu)
    cdef int LL = L * L, Lc = L
    cdef Py_ssize_t n = nv
    cdef i64 en = <i64> eta_num, ed = <i64> eta_den
    cdef i64 dn = <i64> delta_num, dd = <i64> delta_den
    cdef i64 sixdd = 6 * dd
    cdef int mode = <int> est_mode
    cdef i64 *ceu = NULL
    cdef i64 *cev = NULL
    cdef i64 *cmgr = NULL
    cdef i64 *cut = NULL
    cdef i64 *cct = NULL
    cdef i64 *clam = NULL
    cdef i64 *ccol = NULL
    cdef i64 *cnu = NULL
    cdef i64 *cnc = NULL
    cdef char *has_nu = NULL
    cdef char *has_nc = NULL
    # incidence CSR over bichromatic edges
    cdef Py_ssize_t *inc_start = NULL
    cdef Py_ssize_t *inc_edge = NULL
    cdef char *inc_side = NULL
    cdef Py_ssize_t e, v, i, j, pos
    cdef int a, b
    cdef i64 la, lb, twok = <i64> 1 << <int> k
    cdef i128 phi, theta, pe, te, phys_phi, phi6, grid, qidx
    cdef int max_qbits = 1
    cdef long touched = 0
    cdef Py_ssize_t total
    cdef i128 best_phi[8]
    cdef int best_lab[8]
    cdef int sv_n, half, ii, jj
    cdef i128 tmp_phi
    cdef int tmp_lab
    cdef i64 u_node, other
    cdef i128 run_pe, run_te
    cdef i64 run_mgr
    try:
        ceu = _as_i64(eu, m)
        cev = _as_i64(ev, m)
        cmgr = _as_i64(mgr, m)
        cut = _flatten_tables(ut, m, LL)
        cct = _flatten_tables(ct, m, LL)
        ccol = _as_i64(colors, n)
        clam = <i64*> malloc(n * Lc * sizeof(i64))
        if clam is NULL:
            raise MemoryError()
        for v in range(n):
            row = lam[v]
            for a in range(Lc):
                clam[v * Lc + a] = <i64> row[a]
        has_nu = <char*> malloc(n)
        has_nc = <char*> malloc(n)
        if has_nu is NULL or has_nc is NULL:
            raise MemoryError()
        if nut is not None:
            cnu = _node_tables(nut, n, Lc)
            cnc = _node_tables(nct, n, Lc)
            for v in range(n):
                has_nu[v] = 1 if nut[v] is not None else 0
                has_nc[v] = 1 if nct[v] is not None else 0
        else:
            for v in range(n):
                has_nu[v] = 0
                has_nc[v] = 0
        # build incidence over bichromatic edges, grouped per node by
        # (manager, edge) so quantized pooling sees contiguous runs
        inc_start = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
        if inc_start is NULL:
            raise MemoryError()
        for v in range(n + 1):
            inc_start[v] = 0
        for e in range(m):
            if ccol[ceu[e]] != ccol[cev[e]]:
                inc_start[ceu[e] + 1] += 1
                inc_start[cev[e] + 1] += 1
        for v in range(n):
            inc_start[v + 1] += inc_start[v]
        total = inc_start[n]
        inc_edge = <Py_ssize_t*> malloc(max(total, 1) * sizeof(Py_ssize_t))
        inc_side = <char*> malloc(max(total, 1))
        if inc_edge is NULL or inc_side is NULL:
            raise MemoryError()
        fill = [inc_start[v] for v in range(n)]
        # edges arrive in index order; pooling below sorts runs by manager
        order = sorted(range(m), key=lambda x: (mgr[x], x))
        for e_obj in order:
            e = <Py_ssize_t> e_obj
            if ccol[ceu[e]] == ccol[cev[e]]:
                continue
            v = ceu[e]
            pos = fill[v]; fill[v] = pos + 1
            inc_edge[pos] = e; inc_side[pos] = 0
            v = cev[e]
            pos = fill[v]; fill[v] = pos + 1
            inc_edge[pos] = e; inc_side[pos] = 1
        classes = {}
        for v in range(n):
            key = colors[v]
            lst = classes.get(key)
            if lst is None:
                classes[key] = [v]
            else:
                lst.append(v)
        for gamma in sorted(classes):
            for v_obj in classes[gamma]:
                v = <Py_ssize_t> v_obj
                sv_n = 0
                for a in range(Lc):
                    if clam[v * Lc + a] & 1:
                        sv_n += 1
                if sv_n == 0:
                    continue
                if sv_n > 8:
                    raise OverflowError("label alphabet too large for the "
                                        "compiled kernel")
                touched += 1
                sv_n = 0
                for a in range(Lc):
                    if not (clam[v * Lc + a] & 1):
                        continue
                    # phi/theta over bichromatic incident edges
                    if mode == 2:
                        phys_phi = 0
                        phi6 = 0
                        run_mgr = -2
                        run_pe = 0
                        run_te = 0
                        for i in range(inc_start[v], inc_start[v + 1]):
                            e = inc_edge[i]
                            other = cev[e] if inc_side[i] == 0 else ceu[e]
                            pe = 0
                            te = 0
                            for b in range(Lc):
                                lb = clam[other * Lc + b]
                                if lb == 0:
                                    continue
                                if inc_side[i] == 0:
                                    j = a * Lc + b
                                else:
                                    j = b * Lc + a
                                pe += <i128> lb * (<i128> ed * cut[e * LL + j]
                                                   - <i128> en * cct[e * LL + j])
                                te += <i128> lb * (<i128> ed * cut[e * LL + j]
                                                   + <i128> en * cct[e * LL + j])
                            if cmgr[e] < 0:
                                phys_phi += pe
                            else:
                                if cmgr[e] != run_mgr:
                                    if run_mgr >= 0 and run_te != 0:
                                        grid = <i128> dn * run_te
                                        qidx = run_pe * sixdd
                                        if qidx >= 0:
                                            qidx = qidx / grid
                                        else:
                                            qidx = -((-qidx + grid - 1) / grid)
                                        phi6 += qidx * grid
                                        b = _bits128(qidx)
                                        if b > max_qbits:
                                            max_qbits = b
                                    run_mgr = cmgr[e]
                                    run_pe = 0
                                    run_te = 0
                                run_pe += pe
                                run_te += te
                        if run_mgr >= 0 and run_te != 0:
                            grid = <i128> dn * run_te
                            qidx = run_pe * sixdd
                            if qidx >= 0:
                                qidx = qidx / grid
                            else:
                                qidx = -((-qidx + grid - 1) / grid)
                            phi6 += qidx * grid
                            b = _bits128(qidx)
                            if b > max_qbits:
                                max_qbits = b
                        if has_nu[v] or has_nc[v]:
                            pe = 0
                            if has_nu[v]:
                                pe += <i128> ed * cnu[v * Lc + a]
                            if has_nc[v]:
                                pe -= <i128> en * cnc[v * Lc + a]
                            phys_phi += <i128> twok * pe
                        phi6 += sixdd * phys_phi
                        best_phi[sv_n] = phi6
                    else:
                        phi = 0
                        theta = 0
                        for i in range(inc_start[v], inc_start[v + 1]):
                            e = inc_edge[i]
                            other = cev[e] if inc_side[i] == 0 else ceu[e]
                            for b in range(Lc):
                                lb = clam[other * Lc + b]
                                if lb == 0:
                                    continue
                                if inc_side[i] == 0:
                                    j = a * Lc + b
                                else:
                                    j = b * Lc + a
                                phi += <i128> lb * (<i128> ed * cut[e * LL + j]
                                                    - <i128> en * cct[e * LL + j])
                                if mode == 1:
                                    theta += <i128> lb * (
                                        <i128> ed * cut[e * LL + j]
                                        + <i128> en * cct[e * LL + j])
                        if has_nu[v]:
                            phi += <i128> twok * ed * cnu[v * Lc + a]
                            if mode == 1:
                                theta += <i128> twok * ed * cnu[v * Lc + a]
                        if has_nc[v]:
                            phi -= <i128> twok * en * cnc[v * Lc + a]
                            if mode == 1:
                                theta += <i128> twok * en * cnc[v * Lc + a]
                        if mode == 1:
                            best_phi[sv_n] = sixdd * phi - <i128> dn * theta
                        else:
                            best_phi[sv_n] = sixdd * phi
                    best_lab[sv_n] = a
                    sv_n += 1
                # sort descending by (phi-hat, label)
                for ii in range(1, sv_n):
                    tmp_phi = best_phi[ii]
                    tmp_lab = best_lab[ii]
                    jj = ii - 1
                    while jj >= 0 and (best_phi[jj] < tmp_phi or
                                       (best_phi[jj] == tmp_phi
                                        and best_lab[jj] < tmp_lab)):
                        best_phi[jj + 1] = best_phi[jj]
                        best_lab[jj + 1] = best_lab[jj]
                        jj -= 1
                    best_phi[jj + 1] = tmp_phi
                    best_lab[jj + 1] = tmp_lab
                half = sv_n // 2
                for ii in range(sv_n):
                    if ii < half:
                        clam[v * Lc + best_lab[ii]] += 1
                    else:
                        clam[v * Lc + best_lab[ii]] -= 1
        for v in range(n):
            row = lam[v]
            for a in range(Lc):
                row[a] = clam[v * Lc + a]
        return max_qbits, touched
    finally:
        free(ceu); free(cev); free(cmgr); free(cut); free(cct)
        free(clam); free(ccol); free(cnu); free(cnc)
        free(has_nu); free(has_nc)
        free(inc_start); free(inc_edge); free(inc_side)


cdef int _bits128(i128 x):
    if x < 0:
        x = -x
    cdef int b = 0
    while x:
        x >>= 1
        b += 1
    return max(b, 1)


def halve_assignment(nv, L, lam):
    cdef Py_ssize_t v
    cdef int a
    for v in range(nv):
        row = lam[v]
        for a in range(L):
            x = row[a]
            if x & 1:
                raise AssertionError("rounding step left an odd numerator")
            row[a] = x >> 1
