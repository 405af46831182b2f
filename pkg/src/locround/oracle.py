"""Independent ground-truth oracles: exact rational LP, brute-force optima,
and certificate scanners.

Everything here is deliberately separate from the algorithms under test:
exact rational arithmetic only, no shared code paths with the rounding
pipeline.  Oracles refuse inputs beyond their budget instead of running
unboundedly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class OverBudget(ValueError):
    pass


class LPUnbounded(RuntimeError):
    pass


class LPInfeasible(RuntimeError):
    pass


@dataclass
class OracleBudget:
    max_nodes: int = 20
    max_lp_vars: int = 10_000


DEFAULT_BUDGET = OracleBudget()


# ---------------------------------------------------------------------------
# exact simplex: max c.x  s.t.  A x <= b, x >= 0
# ---------------------------------------------------------------------------


def simplex_max(c, A, b, max_pivots=200_000):
    """Exact dense simplex with integer (fraction-free) pivoting, Dantzig
    pricing, and a Bland fallback against cycling.

    Rows carry one shared positive denominator ``prev``; each pivot applies
    the Sylvester identity T' = (piv*T - T[col] x prow) / prev with exact
    integer division, so entries stay minor-sized integers.  Returns
    (optimum, x, y) with y the optimal dual (min y.b, y A >= c, y >= 0).
    Raises LPUnbounded / LPInfeasible.
    """
    m = len(A)
    n = len(c)
    c = [Fraction(x) for x in c]
    b = [Fraction(x) for x in b]
    rows_f = [[Fraction(x) for x in row] for row in A]
    den = 1
    for row in rows_f + [b, c]:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ci = [int(x * den) for x in c]
    bi = [int(x * den) for x in b]
    rows = [[int(x * den) for x in row] for row in rows_f]

    neg = [i for i in range(m) if bi[i] < 0]
    n_art = len(neg)
    total = n + m + n_art
    # columns: 0..n-1 original, n..n+m-1 slacks, then artificials; entries
    # are true values scaled by prev (initially prev = den)
    T = []
    basis = []
    art_col = {}
    k = 0
    for i in range(m):
        row = rows[i] + [0] * (m + n_art) + [bi[i]]
        row[n + i] = den
        if i in neg:
            row = [-x for x in row]
            col = n + m + k
            art_col[i] = col
            row[col] = den
            basis.append(col)
            k += 1
        else:
            basis.append(n + i)
        T.append(row)
    state = {"prev": den}

    def pivot(z, r, col):
        # Edmonds integer pivoting: divisions by the previous pivot are
        # exact (entries are subdeterminants); the final optimality
        # certificate independently guards against any arithmetic slip.
        prev = state["prev"]
        piv = T[r][col]
        prow = T[r]
        for i in range(m):
            if i != r:
                f = T[i][col]
                if f:
                    T[i] = [(piv * a - f * p) // prev
                            for a, p in zip(T[i], prow)]
                elif piv != prev:
                    T[i] = [(piv * a) // prev for a in T[i]]
        f = z[col]
        if f:
            z[:] = [(piv * a - f * p) // prev for a, p in zip(z, prow)]
        elif piv != prev:
            z[:] = [(piv * a) // prev for a in z]
        basis[r] = col
        state["prev"] = piv

    def make_zrow(obj_num):
        # z[j] = prev * (sum_i obj[basis_i] T_true[i][j] - obj[j]): each
        # T entry already carries the factor prev
        prev = state["prev"]
        z = [-o * prev for o in obj_num] + [0]
        for i, bc in enumerate(basis):
            cb = obj_num[bc]
            if cb:
                row = T[i]
                for j in range(total + 1):
                    if row[j]:
                        z[j] += cb * row[j]
        return z

    def run(z, allowed, limit):
        degenerate = 0
        bland = False
        for _ in range(limit):
            enter = -1
            if bland:
                for j in allowed:
                    if z[j] < 0:
                        enter = j
                        break
            else:
                best = 0
                for j in allowed:
                    zj = z[j]
                    if zj < best:
                        best = zj
                        enter = j
            if enter < 0:
                return
            ratio_num = ratio_den = None
            leave = -1
            for i in range(m):
                a = T[i][enter]
                if a > 0:
                    # compare T[i][-1]/a with the incumbent by cross mult
                    if (leave < 0 or T[i][-1] * ratio_den < ratio_num * a
                            or (T[i][-1] * ratio_den == ratio_num * a
                                and basis[i] < basis[leave])):
                        ratio_num = T[i][-1]
                        ratio_den = a
                        leave = i
            if leave < 0:
                raise LPUnbounded("unbounded direction")
            if ratio_num == 0:
                degenerate += 1
                if degenerate > 4 * (len(allowed) + m):
                    bland = True
            else:
                degenerate = 0
            pivot(z, leave, enter)
        raise RuntimeError("simplex pivot limit exceeded")

    if n_art:
        obj1 = [0] * total
        for i in neg:
            obj1[art_col[i]] = -1
        z1 = make_zrow(obj1)
        run(z1, list(range(total)), max_pivots)
        if any(T[i][-1] != 0 for i in range(m) if basis[i] >= n + m):
            raise LPInfeasible("phase-1 optimum nonzero")
        for i in range(m):
            if basis[i] >= n + m:
                row = T[i]
                for j in range(n + m):
                    if row[j]:
                        pivot(z1, i, j)
                        break

    obj = ci + [0] * (m + n_art)
    z = make_zrow(obj)
    run(z, list(range(n + m)), max_pivots)

    prev = state["prev"]
    x = [Fraction(0)] * n
    for i, bc in enumerate(basis):
        if bc < n:
            x[bc] = Fraction(T[i][-1], prev)
    # duals from slack reduced costs (objective scaled by den): y_i true =
    # z[n+i]/(prev*den) up to the sign flip for negated rows
    negset = set(neg)
    y = [Fraction(-z[n + i] if i in negset else z[n + i], prev * den)
         for i in range(m)]
    opt = sum(cf * xi for cf, xi in zip(c, x))
    # exact optimality certificate: primal/dual feasibility + equal objectives
    for i in range(m):
        if sum(rows_f[i][j] * x[j] for j in range(n)) > b[i]:
            raise AssertionError("primal infeasible after solve")
    for j in range(n):
        if sum(y[i] * rows_f[i][j] for i in range(m)) < c[j]:
            raise AssertionError("dual infeasible after solve")
    if any(yi < 0 for yi in y):
        raise AssertionError("negative dual")
    if sum(yi * bf for yi, bf in zip(y, b)) != opt:
        raise AssertionError("duality gap after solve")
    return opt, x, y


def exact_lp(objective, A, b, sense="max", budget=DEFAULT_BUDGET):
    """Exact LP optimum; ``max c.x, Ax <= b`` or ``min c.x, Ax >= b``
    (both with x >= 0).  Unbounded and infeasible are reported distinctly."""
    if len(objective) > budget.max_lp_vars:
        raise OverBudget(f"{len(objective)} variables over LP budget")
    if sense == "max":
        return simplex_max(objective, A, b)
    # min c.x, Ax >= b, x >= 0  solved through its dual max b.y, A^T y <= c
    m = len(A)
    n = len(objective)
    At = [[A[i][j] for i in range(m)] for j in range(n)]
    try:
        opt, y, x = simplex_max(b, At, objective)
    except LPUnbounded as exc:
        raise LPInfeasible("primal infeasible (dual unbounded)") from exc
    for i in range(m):
        if sum(A[i][j] * x[j] for j in range(n)) < b[i]:
            raise AssertionError("recovered primal infeasible")
    if sum(Fraction(objective[j]) * x[j] for j in range(n)) != opt:
        raise AssertionError("duality gap in min recovery")
    return opt, x, y


def packing_lp(wg, weights=None, budget=DEFAULT_BUDGET):
    """LP: max sum w(v) x_v  s.t.  for all v: sum_{u in N+(v)} x_u <= 1.

    Returns (S*, x dict).  ``weights`` overrides the graph's weights
    (residual weight functions); nodes of weight 0 still constrain.
    """
    g = wg.graph if hasattr(wg, "graph") else wg
    w = weights if weights is not None else getattr(wg, "weights", None)
    if w is None:
        w = {v: 1 for v in g.nodes}
    nodes = list(g.nodes)
    if len(nodes) > budget.max_lp_vars:
        raise OverBudget("packing LP over budget")
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    A = [[Fraction(0)] * n for _ in range(n)]
    for i, v in enumerate(nodes):
        A[i][i] = Fraction(1)
        for u in g.neighbors(v):
            A[i][idx[u]] = Fraction(1)
    c = [Fraction(w.get(v, 0)) for v in nodes]
    b = [Fraction(1)] * n
    opt, x, _y = simplex_max(c, A, b)
    return opt, {v: x[i] for i, v in enumerate(nodes)}


def dual_covering_lp(wg, wprime, budget=DEFAULT_BUDGET):
    """LP (dual of the packing LP): min sum y_v s.t. for all v:
    sum_{u in N+(v)} y_u >= w'(v), y >= 0.  Returns (opt, y dict)."""
    g = wg.graph if hasattr(wg, "graph") else wg
    nodes = list(g.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    A = [[Fraction(0)] * n for _ in range(n)]
    for i, v in enumerate(nodes):
        A[i][i] = Fraction(1)
        for u in g.neighbors(v):
            A[i][idx[u]] = Fraction(1)
    cvec = [Fraction(1)] * n
    bvec = [Fraction(wprime.get(v, 0)) for v in nodes]
    opt, y, _x = exact_lp(cvec, A, bvec, sense="min", budget=budget)
    return opt, {v: y[i] for i, v in enumerate(nodes)}


def setcover_lp(inst, budget=DEFAULT_BUDGET):
    """Exact fractional set cover optimum: min sum w(v) x_v with every
    element covered once.  Solved per connected component.  Returns
    (optimum, x dict)."""
    comp = _components(inst)
    x = {}
    opt = Fraction(0)
    for (els, sets_) in comp:
        if len(sets_) > budget.max_lp_vars:
            raise OverBudget("set cover LP over budget")
        sidx = {v: j for j, v in enumerate(sets_)}
        A = [[Fraction(0)] * len(sets_) for _ in els]
        for i, u in enumerate(els):
            for v in inst.element_sets[u]:
                A[i][sidx[v]] = Fraction(1)
        cvec = [Fraction(inst.costs[v]) for v in sets_]
        bvec = [Fraction(1)] * len(els)
        o, xs, _y = exact_lp(cvec, A, bvec, sense="min", budget=budget)
        opt += o
        for j, v in enumerate(sets_):
            x[v] = xs[j]
    return opt, x


def _components(inst):
    seen = set()
    out = []
    for start in inst.elements:
        if start in seen:
            continue
        els, sets_ = [], []
        stack = [("e", start)]
        seen.add(start)
        while stack:
            kind, x = stack.pop()
            if kind == "e":
                els.append(x)
                for v in inst.element_sets[x]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(("s", v))
            else:
                sets_.append(x)
                for u in inst.set_elements[x]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(("e", u))
        out.append((sorted(els), sorted(sets_)))
    return out


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------


def brute_max_weight_is(wg, budget=DEFAULT_BUDGET):
    """Exact maximum weight independent set by branch and bound."""
    g = wg.graph if hasattr(wg, "graph") else wg
    w = getattr(wg, "weights", None) or {v: 1 for v in g.nodes}
    nodes = list(g.nodes)
    if len(nodes) > budget.max_nodes:
        raise OverBudget(f"{len(nodes)} nodes over oracle budget")
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    adj = [0] * n
    for e in g.edges:
        adj[idx[e.u]] |= 1 << idx[e.v]
        adj[idx[e.v]] |= 1 << idx[e.u]
    wt = [w[v] for v in nodes]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + wt[i]
    best = [Fraction(0), 0]

    def rec(i, taken_mask, blocked, acc):
        if acc + suffix[i] <= best[0]:
            return
        if i == n:
            if acc > best[0]:
                best[0] = acc
                best[1] = taken_mask
            return
        if not (blocked >> i) & 1:
            rec(i + 1, taken_mask | (1 << i), blocked | adj[i], acc + wt[i])
        rec(i + 1, taken_mask, blocked, acc)

    rec(0, 0, 0, Fraction(0))
    witness = sorted(nodes[i] for i in range(n) if (best[1] >> i) & 1)
    return best[0], witness


def brute_set_cover_opt(inst, budget=DEFAULT_BUDGET, weighted=False):
    """Exact minimum (cost) set cover by branch and bound on the least-
    covered element."""
    if len(inst.sets) > budget.max_nodes:
        raise OverBudget(f"{len(inst.sets)} sets over oracle budget")
    cost = (lambda v: inst.costs[v]) if weighted else (lambda v: 1)
    els = list(inst.elements)
    best = [None, None]

    def rec(uncovered, chosen, acc):
        if best[0] is not None and acc >= best[0]:
            return
        if not uncovered:
            best[0] = acc
            best[1] = sorted(chosen)
            return
        u = min(uncovered, key=lambda e: (len(inst.element_sets[e]), e))
        for v in inst.element_sets[u]:
            if v in chosen:
                continue
            newly = set(inst.set_elements[v]) & uncovered
            rec(uncovered - newly, chosen | {v}, acc + cost(v))

    rec(set(els), set(), 0)
    if best[0] is None:
        raise LPInfeasible("instance has an uncoverable element")
    return best[0], best[1]


def neighborhood_independence(g, budget=DEFAULT_BUDGET):
    """beta = max over nodes v of the max independent set size in G[N(v)]."""
    if len(g.nodes) > 6 * budget.max_nodes:
        raise OverBudget("graph over oracle budget")
    from .graph import simple_graph

    beta = 1 if g.nodes else 0
    for v in g.nodes:
        nb = g.neighbors(v)
        if len(nb) > budget.max_nodes:
            raise OverBudget(f"neighborhood of {v} over budget")
        if not nb:
            continue
        nbset = set(nb)
        pairs = [(e.u, e.v) for e in g.edges if e.u in nbset and e.v in nbset]
        sub = simple_graph(nb, pairs)
        size, _w = brute_max_weight_is(sub, budget)
        beta = max(beta, int(size))
    return beta


# ---------------------------------------------------------------------------
# certificate scanners
# ---------------------------------------------------------------------------


def is_independent(g, S):
    S = set(S)
    return all(not (e.u in S and e.v in S) for e in g.edges)


def is_maximal_is(g, S):
    S = set(S)
    if not is_independent(g, S):
        return False
    for v in g.nodes:
        if v in S:
            continue
        if not any(u in S for u in g.neighbors(v)):
            return False
    return True


def is_matching(g, M):
    used = set()
    index = {e.index: e for e in g.edges}
    for i in M:
        e = index.get(i)
        if e is None:
            return False
        if e.u in used or e.v in used:
            return False
        used.update((e.u, e.v))
    return True


def is_maximal_matching(g, M):
    if not is_matching(g, M):
        return False
    used = set()
    index = {e.index: e for e in g.edges}
    for i in M:
        used.update((index[i].u, index[i].v))
    for e in g.edges:
        if e.u not in used and e.v not in used:
            return False
    return True


def covers(inst, chosen):
    covered = set()
    chosen = set(chosen)
    for v in chosen:
        if v not in inst.set_elements:
            return False
        covered.update(inst.set_elements[v])
    return covered >= set(inst.elements)
