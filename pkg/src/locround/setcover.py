"""O(log s)-approximate set cover by iterated derandomized rounding.

From a 2-approximate fractional cover x0, the algorithm scales
x = x0/10 (zeroing values at most 1/(2t)), picks per element a greedy set
family N*(u) with mass in [1/20, 1/5], and runs tau = ceil(log_1.01 s)
rounding iterations.  Iteration i rounds x against

    u(x~) = g_i * sum_{u in U_i} sum_{v in N*(u)} x~_v + 10 * sum_v w(v) x'_v
    c(x~) = g_i * sum_{u in U_i} sum_{v != v' in N*(u)} x~_v x~_v' + sum_v w(v) x~_v

on the d2-multigraph where each uncovered element manages virtual edges
between its N*(u) pairs.  The geometric coefficient g_i is the exact dyadic
value ceil(2^40 / 1.01^(tau-i)) / 2^40, which keeps the kernels in bounded
integers; all potential inequalities are asserted against the implemented
coefficients exactly.  Uncovered elements afterwards pick their smallest-id
neighbor.  The potential

    Phi_i = g_i |U_i| + w(V'_1) + ... + w(V'_{i-1}) + 3 (tau - i) OPT_bound

is non-increasing, giving |V_out| <= 3 tau OPT_bound with OPT_bound a
certified lower bound on the optimum from the fractional backend.
"""

from __future__ import annotations

from fractions import Fraction

from . import coloring as _coloring
from . import graph as _graph
from . import oracle as _oracle
from . import rounding as _rounding
from . import sim as _sim

G_BITS = 40


class CoverInvariantError(AssertionError):
    pass


def fractional_cover(inst, backend="central-exact", weighted=False,
                     budget=_oracle.DEFAULT_BUDGET):
    """Feasible fractional cover with a declared approximation factor.

    central-exact: the exact LP optimum (factor 1).  central-approx: the
    exact LP optimum rounded up to powers of two (factor 2, dyadic values).
    Returns (x0, factor, opt_bound) with opt_bound = total cost / factor a
    certified lower bound on the fractional optimum.
    """
    lp_opt, x = _oracle.setcover_lp(inst, budget=budget)
    cost = inst.costs if weighted else {v: 1 for v in inst.sets}
    if backend == "central-exact":
        x0 = {v: min(Fraction(1), x.get(v, Fraction(0))) for v in inst.sets}
        factor = Fraction(1)
    elif backend == "central-approx":
        x0 = {}
        for v in inst.sets:
            xv = x.get(v, Fraction(0))
            if xv == 0:
                x0[v] = Fraction(0)
            elif xv >= 1:
                x0[v] = Fraction(1)
            else:
                e = 0
                while Fraction(1, 1 << (e + 1)) >= xv:
                    e += 1
                x0[v] = Fraction(1, 1 << e)
        factor = Fraction(2)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    for u in inst.elements:
        if sum(x0[v] for v in inst.element_sets[u]) < 1:
            raise CoverInvariantError(f"backend cover misses element {u}")
    total = sum(Fraction(cost[v]) * x0[v] for v in inst.sets)
    return x0, factor, total / factor


def build_scaled_x(x0, inst):
    """x = x0/10 unless x0 <= 1/(2t); asserts (frac0) and (frac1)."""
    t = max(1, inst.t)
    x = {}
    for v in inst.sets:
        if x0[v] <= Fraction(1, 2 * t):
            x[v] = Fraction(0)
        else:
            x[v] = x0[v] / 10
    for v in inst.sets:
        if x[v] != 0 and not (Fraction(1, 20 * t) <= x[v] <= Fraction(1, 10)):
            raise CoverInvariantError(f"(frac0) violated at set {v}: {x[v]}")
    for u in inst.elements:
        if sum(x[v] for v in inst.element_sets[u]) < Fraction(1, 20):
            raise CoverInvariantError(f"(frac1) violated at element {u}")
    return x


def select_n_star(inst, x):
    """Greedy N*(u) in ascending set id while the mass is below 1/20;
    asserts (frac2)."""
    n_star = {}
    for u in inst.elements:
        acc = Fraction(0)
        chosen = []
        for v in inst.element_sets[u]:
            if acc >= Fraction(1, 20):
                break
            if x[v] == 0:
                continue
            chosen.append(v)
            acc += x[v]
        if not (Fraction(1, 20) <= acc <= Fraction(1, 5)):
            raise CoverInvariantError(f"(frac2) violated at element {u}: {acc}")
        n_star[u] = chosen
    return n_star


def _tau_for(bound):
    """Smallest tau with 1.01^tau >= bound, by integer comparison.

    The floor of 21 keeps Phi_0 <= 3 tau OPT_bound under the coverage
    coefficient 20 W / 1.01^(tau-i) (20 OPT_bound of initial mass needs
    tau >= 20 slack terms)."""
    tau = 0
    num, den = 1, 1
    while num < bound * den:
        num *= 101
        den *= 100
        tau += 1
    return max(21, tau)


def _g_coefficient(m):
    """Exact dyadic ceil(2^G_BITS / 1.01^m) / 2^G_BITS."""
    num = (100 ** m) * (1 << G_BITS)
    den = 101 ** m
    return Fraction(-(-num // den), 1 << G_BITS)


def _iteration_valuation(inst, n_star, u_live, g_i, xprime, cost):
    """Multigraph H over the sets and the iteration's utility/cost tables."""
    cnt = {}
    edges = []
    ec = {}
    comm = {v: set() for v in inst.sets}
    idx = 0
    for u in sorted(u_live):
        star = n_star[u]
        for v in star:
            cnt[v] = cnt.get(v, 0) + 1
            comm[v].add(u)
        comm.setdefault(u, set()).update(star)
        for i in range(len(star)):
            for j in range(i + 1, len(star)):
                a, b = star[i], star[j]
                edges.append(_graph.Edge(min(a, b), max(a, b),
                                         _graph.VIRTUAL, u, idx))
                ec[idx] = ((Fraction(0), Fraction(0)),
                           (Fraction(0), 2 * g_i))
                idx += 1
    nut = {}
    nct = {}
    for v in inst.sets:
        const = 10 * Fraction(cost[v]) * xprime[v]
        nut[v] = (const, g_i * cnt.get(v, 0) + const)
        nct[v] = (Fraction(0), Fraction(cost[v]))
    h = _graph.Multigraph(inst.sets, edges, comm)
    val = _rounding.Valuation(2, {}, ec, node_utility=nut, node_cost=nct)
    return h, val


def cover_iteration(inst, n_star, u_live, g_i, lam, xprime, cost, mode,
                    engine, agree_cache, initial_coloring, check=True):
    """One rounding iteration; returns (V'_i, U_{i+1})."""
    h, val = _iteration_valuation(inst, n_star, u_live, g_i, xprime, cost)
    prep = _rounding._Prepared(h, val, agree_cache=agree_cache)
    U0, C0 = prep.potential(lam)
    if 2 * C0 > U0:
        raise CoverInvariantError(
            f"margin u - c >= u/2 failed before rounding: {U0}, {C0}")
    estimate_mode = "quantized" if mode == _sim.CONGEST else "exact"
    ell = _rounding.round_to_integral(
        h, val, lam, Fraction(1, 200), Fraction(1, 2),
        estimate_mode=estimate_mode, initial_coloring=initial_coloring,
        engine=engine, prep=prep, check=check)
    v_i = sorted(v for v, lab in ell.items() if lab == 1)
    covered = set()
    for v in v_i:
        covered.update(inst.set_elements[v])
    u_next = set(u for u in u_live if u not in covered)
    return v_i, u_next


def set_cover(inst, mode=_sim.LOCAL, cost_mode="unit",
              backend="central-exact", engine=None, check=True,
              budget=_oracle.DEFAULT_BUDGET):
    """Full Algorithm: returns (V_out, metrics, info).

    info carries tau, OPT_bound, the exact Phi trace, and per-iteration
    uncovered counts.  Asserted invariants: (frac0)-(frac3), the
    per-iteration potential decrease inequality, Phi monotonicity,
    coverage, and cost(V_out) <= 3 tau OPT_bound; the weighted variant
    additionally asserts w(V'') <= OPT_bound.
    """
    weighted = cost_mode == "weighted"
    cost = inst.costs if weighted else {v: 1 for v in inst.sets}
    if engine is None:
        gg = _graph.Multigraph(
            list(inst.elements) + list(inst.sets),
            [_graph.Edge(u, v, _graph.PHYSICAL, None, i)
             for i, (u, v) in enumerate(inst.incidence)])
        engine = _sim.RoundEngine(gg, mode=mode)
    W = inst.W if weighted else 1
    x0, factor, opt_bound = fractional_cover(inst, backend, weighted, budget)
    x = build_scaled_x(x0, inst)
    total_x_cost = sum(Fraction(cost[v]) * x[v] for v in inst.sets)
    if 10 * total_x_cost > factor * opt_bound * 2:
        raise CoverInvariantError("(frac3) violated")
    if not inst.elements:
        return [], engine.metrics, {"tau": 0, "opt_bound": opt_bound,
                                    "phi": [], "uncovered": []}
    # small-t fallback when the scaled solution lost feasibility margin
    try:
        n_star = select_n_star(inst, x)
    except CoverInvariantError:
        t = max(1, inst.t)
        v_out = sorted(v for v in inst.sets if x0[v] >= Fraction(1, t))
        if not _oracle.covers(inst, v_out):
            raise
        engine.metrics.objective = Fraction(sum(cost[v] for v in v_out))
        return v_out, engine.metrics, {"tau": 0, "opt_bound": opt_bound,
                                       "phi": [], "uncovered": [],
                                       "fallback": "small-t"}
    w_eff = W if weighted else 1
    tau = _tau_for(inst.s * w_eff if inst.s else 2)
    # one shared preprocessing of the scaled solution (valuation-independent)
    lam_raw = {v: (1 - x[v], x[v]) for v in inst.sets}
    lam = _rounding.preprocess_fractional(
        lam_raw, Fraction(1, 200), Fraction(1, 2), 2, check=False)
    xprime = {v: Fraction(lam.values[v][1], 1 << lam.k) for v in inst.sets}
    # element-coverage coefficient 20 W / 1.01^(tau-i): the 20 W factor makes
    # covering an element strictly dominate the cost of any single set in
    # late iterations, so the completion step V'' stays negligible
    g0 = 20 * w_eff * _g_coefficient(tau)
    if g0 * len(inst.elements) > tau * opt_bound:
        raise CoverInvariantError("Phi_0 > 3 tau OPT_bound")
    coefs = [20 * w_eff * _g_coefficient(tau - i) for i in range(tau + 1)]
    for i in range(tau):
        if coefs[i + 1] > coefs[i] * Fraction(102, 100):
            raise CoverInvariantError("geometric coefficient stepped too far")
    initial_coloring = None
    if mode == _sim.LOCAL:
        initial_coloring = _two_hop_set_coloring(inst)
    agree_cache = {}
    u_live = set(inst.elements)
    phi = [g0 * len(inst.elements) + 3 * tau * opt_bound]
    uncovered = [len(u_live)]
    v_stages = []
    chosen_cost = Fraction(0)
    for i in range(1, tau + 1):
        g_i = coefs[i]
        if not u_live:
            v_i, u_next = [], set()
        else:
            v_i, u_next = cover_iteration(
                inst, n_star, u_live, g_i, lam, xprime, cost, mode, engine,
                agree_cache, initial_coloring, check=check)
        ci = sum(Fraction(cost[v]) for v in v_i)
        if check:
            lhs = g_i * (len(u_live) - len(u_next)) - ci
            rhs = Fraction(2, 100) * g_i * len(u_live) - 3 * opt_bound
            if lhs < rhs:
                raise CoverInvariantError(
                    f"potential-decrease inequality failed at step {i}: "
                    f"{lhs} < {rhs}")
        v_stages.append(v_i)
        chosen_cost += ci
        u_live = u_next
        phi_i = (coefs[i] * len(u_live) + chosen_cost
                 + 3 * (tau - i) * opt_bound)
        if check and phi_i > phi[-1]:
            raise CoverInvariantError(
                f"Phi increased at step {i}: {phi_i} > {phi[-1]}")
        phi.append(phi_i)
        uncovered.append(len(u_live))
        engine.sample_potential(phi_i)
    v_prime = sorted(set(v for stage in v_stages for v in stage))
    v_double = sorted(set(min(inst.element_sets[u]) for u in sorted(u_live)))
    v_out = sorted(set(v_prime) | set(v_double))
    engine.account(64, 2)
    if check:
        if not _oracle.covers(inst, v_out):
            raise CoverInvariantError("output does not cover the universe")
        out_cost = sum(Fraction(cost[v]) for v in v_out)
        vpp_cost = sum(Fraction(cost[v]) for v in v_double if v not in set(v_prime))
        if weighted:
            if vpp_cost > opt_bound:
                raise CoverInvariantError(
                    f"w(V'') = {vpp_cost} exceeds OPT_bound = {opt_bound}")
        if out_cost > 3 * tau * opt_bound:
            raise CoverInvariantError(
                f"cost {out_cost} exceeds 3 tau OPT_bound = {3 * tau * opt_bound}")
    engine.metrics.objective = Fraction(sum(cost[v] for v in v_out))
    return v_out, engine.metrics, {
        "tau": tau, "opt_bound": opt_bound, "phi": phi,
        "uncovered": uncovered, "factor": factor,
    }


def _two_hop_set_coloring(inst):
    """Proper coloring of the conflict graph over sets sharing an element
    (the rounding graph is a subgraph); palette O((st)^2)."""
    pairs = set()
    for u in inst.elements:
        nb = inst.element_sets[u]
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                pairs.add((nb[i], nb[j]))
    g2 = _graph.simple_graph(list(inst.sets), sorted(pairs))
    pc = _coloring.linial_coloring(g2)
    return dict(pc.colors)


def from_dominating_set(g):
    """Dominating set as set cover: every node becomes a set covering its
    closed neighborhood; elements keep the node ids, sets are offset."""
    base = (max(g.nodes) + 1) if g.nodes else 0
    elements = list(g.nodes)
    sets_ = [base + v for v in g.nodes]
    inc = []
    for v in g.nodes:
        inc.append((v, base + v))
        for u in g.neighbors(v):
            inc.append((u, base + v))
    return _graph.SetCoverInstance(elements, sets_, inc), base
