"""Proper and defective colorings on plain multigraphs and d2-multigraphs.

The fast weighted defective coloring runs candidate-set steps built from
Reed-Solomon codes: step j maps the current coloring into (position, value)
pairs of degree-d polynomial evaluations over a prime field F_q, and every
node takes the candidate minimizing the (estimated) weight of bichromatic
edges to neighbors sharing it.  Distinct polynomials agree on at most d of
the q positions, so the best candidate conflicts with at most a d/q
fraction of the incident weight; the step budgets follow the
s_i = 2^(t-i+1)/delta schedule with the extra coarse step 0 at s_0 = 4/delta.

The average defective coloring reduces the resulting palette to one prime p
over p steps: stage-one color c maps to the sequence z(i) = a*i + b mod p
with (a, b) = (1 + c//p, c%p); two distinct sequences coincide at most
once, and a node commits to z(i) when less than a quarter (an eighth under
factor-2 estimates) of its delta-fraction conflict budget is blocked.

Every returned coloring carries a certificate recomputed by an independent
scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._kernel import impl as _K

ID_SPACE = 1 << 63


class ColoringError(ValueError):
    pass


@dataclass
class ProperColoring:
    colors: dict
    palette_size: int
    rounds: int = 0

    def color(self, v):
        return self.colors[v]


@dataclass
class DefectiveColoring:
    colors: dict
    palette_size: int
    defect_kind: str              # "per-node" | "average"
    relative_defect: Fraction = Fraction(0)
    certificate: dict = field(default_factory=dict)
    rounds: int = 0


# ---------------------------------------------------------------------------
# dense helpers
# ---------------------------------------------------------------------------


def _dense(g):
    nodes = list(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    eu, ev, mgr, eidx = [], [], [], []
    for e in g.edges:
        eu.append(index[e.u])
        ev.append(index[e.v])
        mgr.append(index.get(e.manager, -1) if e.manager is not None else -1)
        eidx.append(e.index)
    return nodes, index, eu, ev, mgr, eidx


def _weights_to_ints(weights, eidx):
    scale = 1
    for i in eidx:
        d = Fraction(weights.get(i, 0)).denominator
        scale = scale * d // math.gcd(scale, d)
    w = [int(Fraction(weights.get(i, 0)) * scale) for i in eidx]
    if any(x < 0 for x in w):
        raise ColoringError("edge weights must be non-negative")
    return w, scale


def _initial_colors(nodes, initial):
    if initial is None:
        return [v for v in nodes], ID_SPACE
    if isinstance(initial, ProperColoring):
        cols = initial.colors
        return [cols[v] for v in nodes], initial.palette_size
    cols = dict(initial)
    return [cols[v] for v in nodes], max(cols.values()) + 1


# ---------------------------------------------------------------------------
# certificates (independent scans)
# ---------------------------------------------------------------------------


def defect_certificate(g, weights, colors, delta, kind):
    """Recompute the defect certificate from scratch.

    Returns (ok, certificate dict) where the certificate lists, per node or
    globally, monochromatic against total incident weight.
    """
    delta = Fraction(delta)
    mono = {v: Fraction(0) for v in g.nodes}
    tot = {v: Fraction(0) for v in g.nodes}
    for e in g.edges:
        w = Fraction(weights.get(e.index, 0))
        tot[e.u] += w
        tot[e.v] += w
        if colors[e.u] == colors[e.v]:
            mono[e.u] += w
            mono[e.v] += w
    if kind == "per-node":
        ok = all(mono[v] <= delta * tot[v] for v in g.nodes)
        return ok, {"per_node_mono": mono, "per_node_total": tot}
    mono_sum = sum(mono.values())
    tot_sum = sum(tot.values())
    ok = mono_sum <= delta * tot_sum
    return ok, {"mono_weight": mono_sum, "total_weight": tot_sum}


def check_proper(g, colors):
    for e in g.edges:
        if colors[e.u] == colors[e.v]:
            return False
    return True


# ---------------------------------------------------------------------------
# public coloring operations
# ---------------------------------------------------------------------------


def linial_coloring(g, initial=None, engine=None):
    """Proper coloring with O(max_degree^2) colors by conflict-free
    candidate-set steps (documented palette bound: (2*Delta + 66)^2)."""
    nodes, index, eu, ev, mgr, eidx = _dense(g)
    if not nodes:
        return ProperColoring({}, 1)
    colors, n0 = _initial_colors(nodes, initial)
    degree = [0] * len(nodes)
    for a, b in zip(eu, ev):
        degree[a] += 1
        degree[b] += 1
    dmax = max(degree, default=0)
    plan = _K.plan_proper_schedule(n0, dmax)
    rounds = 0
    palette = n0
    cache = {}
    for (q, d) in plan:
        colors = _K.rs_proper_step(len(nodes), eu, ev, colors, q, d,
                                   cache.setdefault((q, d), {}))
        palette = q * q
        rounds += 1
        if engine is not None:
            engine.account(2 + palette.bit_length(), 1)
    out = ProperColoring({v: colors[i] for i, v in enumerate(nodes)},
                         palette, rounds)
    if not check_proper(g, out.colors):
        raise AssertionError("candidate-set coloring produced a conflict")
    return out


def three_color_paths_cycles(g, engine=None):
    """Proper 3-coloring of a graph with maximum degree 2."""
    for v in g.nodes:
        if g.degree(v) > 2:
            raise ColoringError(f"node {v} has degree > 2")
    nodes, index, eu, ev, mgr, eidx = _dense(g)
    if not nodes:
        return ProperColoring({}, 3)
    colors, n0 = _initial_colors(nodes, None)
    plan = _K.plan_proper_schedule(n0, 2)
    rounds = 0
    for (q, d) in plan:
        colors = _K.rs_proper_step(len(nodes), eu, ev, colors, q, d)
        rounds += 1
    palette = max(colors) + 1
    # shrink to 3 colors: iterate colors downward, recolor greedily
    adj = [[] for _ in nodes]
    for a, b in zip(eu, ev):
        adj[a].append(b)
        adj[b].append(a)
    for c in range(palette - 1, 2, -1):
        for v in range(len(nodes)):
            if colors[v] == c:
                used = {colors[u] for u in adj[v]}
                colors[v] = min(x for x in range(3) if x not in used)
        rounds += 1
    out = ProperColoring({v: colors[i] for i, v in enumerate(nodes)}, 3, rounds)
    if not check_proper(g, out.colors):
        raise AssertionError("3-coloring produced a conflict")
    if engine is not None:
        engine.account(4, rounds)
    return out


def weighted_defective_coloring(g, weights, delta, initial=None,
                                aggregation="exact", engine=None):
    """Weighted per-node delta-relative defective coloring with O(1/delta^2)
    colors (documented bound: palette <= (2^16/delta)^2 / 2^16, i.e.
    K/delta^2 with K = 2^16)."""
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise ColoringError("delta must be in (0, 1]")
    nodes, index, eu, ev, mgr, eidx = _dense(g)
    if not nodes:
        return DefectiveColoring({}, 1, "per-node", delta)
    w, _scale = _weights_to_ints(weights, eidx)
    colors, n0 = _initial_colors(nodes, initial)
    factor2 = aggregation == "factor2"
    dn, dd = delta.numerator, delta.denominator
    if factor2:
        dd *= 2
    plan = _K.plan_defective_schedule(n0, dn, dd)
    nodew = [0] * len(nodes)
    rounds = 0
    palette = n0
    for (q, d, _bn, _bd) in plan:
        colors, maxbits = _K.rs_defective_step(
            len(nodes), eu, ev, mgr, w, nodew, colors, q, d, factor2)
        palette = q * q
        rounds += 2
        if engine is not None:
            engine.account(2 + palette.bit_length(), 1)
            engine.account_pipelined(q * (maxbits + 9))
    out = DefectiveColoring({v: colors[i] for i, v in enumerate(nodes)},
                            palette, "per-node", delta, rounds=rounds)
    ok, cert = defect_certificate(g, weights, out.colors, delta, "per-node")
    out.certificate = cert
    if not ok:
        raise AssertionError("defective coloring violated its per-node certificate")
    return out


def average_defective_coloring(g, weights, delta, initial=None,
                               aggregation="exact", engine=None):
    """Weighted average delta-relative defective coloring with a prime
    palette p > 8/delta (16/delta under factor-2 estimates), built from a
    (delta/2)-relative per-node defective coloring followed by the p-step
    ordering reduction with commit threshold delta/4."""
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise ColoringError("delta must be in (0, 1]")
    nodes, index, eu, ev, mgr, eidx = _dense(g)
    if not nodes:
        return DefectiveColoring({}, 1, "average", delta)
    w, _scale = _weights_to_ints(weights, eidx)
    nodew = [0] * len(nodes)
    stage1 = weighted_defective_coloring(g, weights, delta / 2, initial,
                                         aggregation, engine)
    colors1 = [stage1.colors[v] for v in nodes]
    factor2 = aggregation == "factor2"
    thr_num, thr_den = delta.numerator, 4 * delta.denominator
    if factor2:
        thr_den *= 2
    colors, p, last_step = _K.reduce_colors_by_orderings(
        len(nodes), eu, ev, mgr, w, nodew, colors1, stage1.palette_size,
        thr_num, thr_den, factor2)
    rounds = stage1.rounds + 2 * p
    if engine is not None:
        engine.account(11 + p.bit_length(), 2 * p)
    out = DefectiveColoring({v: colors[i] for i, v in enumerate(nodes)},
                            p, "average", delta, rounds=rounds)
    ok, cert = defect_certificate(g, weights, out.colors, delta, "average")
    out.certificate = cert
    if not ok:
        raise AssertionError("average defective coloring violated its certificate")
    return out


def greedy_defective_oracle(g, weights, delta, initial=None, engine=None):
    """Slow reference defective coloring: iterate the classes of a proper
    coloring, each node picking the color with least committed conflicting
    weight, then local-improvement passes until every node's relative
    defect is at most delta.  Palette ceil(1/delta) + 1."""
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise ColoringError("delta must be in (0, 1]")
    nodes, index, eu, ev, mgr, eidx = _dense(g)
    if not nodes:
        return DefectiveColoring({}, 1, "per-node", delta)
    w, _scale = _weights_to_ints(weights, eidx)
    ncolors = -(-delta.denominator // delta.numerator) + 1   # ceil(1/delta) + 1
    adj = [[] for _ in nodes]
    for j, (a, b) in enumerate(zip(eu, ev)):
        adj[a].append((b, w[j]))
        adj[b].append((a, w[j]))
    tot = [sum(wt for (_u, wt) in adj[v]) for v in range(len(nodes))]
    if initial is None:
        order_key = [(v, i) for i, v in enumerate(nodes)]
    else:
        cols, _n0 = _initial_colors(nodes, initial)
        order_key = [(cols[i], i) for i in range(len(nodes))]
    colors = [-1] * len(nodes)
    rounds = 0

    def best_color(v):
        conf = [0] * ncolors
        for (u, wt) in adj[v]:
            if colors[u] >= 0:
                conf[colors[u]] += wt
        best = min(range(ncolors), key=lambda c: (conf[c], c))
        return best, conf[best]

    for (_key, v) in sorted(order_key):
        colors[v], _ = best_color(v)
        rounds += 1
    # local improvement to the per-node guarantee
    for _pass in range(1 + sum(w)):
        dirty = False
        for v in range(len(nodes)):
            mono = sum(wt for (u, wt) in adj[v] if colors[u] == colors[v])
            if mono * delta.denominator > delta.numerator * tot[v]:
                c, new = best_color(v)
                if new < mono:
                    colors[v] = c
                    dirty = True
        rounds += 1
        if not dirty:
            break
    out = DefectiveColoring({v: colors[i] for i, v in enumerate(nodes)},
                            ncolors, "per-node", delta, rounds=rounds)
    ok, cert = defect_certificate(g, weights, out.colors, delta, "per-node")
    out.certificate = cert
    if not ok:
        raise AssertionError("greedy oracle violated the per-node certificate")
    return out


# ---------------------------------------------------------------------------
# internal entry points for the rounding step (dense arrays, node weights)
# ---------------------------------------------------------------------------


def defective_colors_for_rounding(prep, w, nodew, delta, factor2, initial):
    """Average (delta)-relative defective coloring over prepared arrays with
    node-level weights that count toward totals but never conflict.

    Returns (colors list, palette p, declared rounds, max message bits).
    """
    delta = Fraction(delta)
    if initial is None:
        colors = list(prep.ids)
        n0 = ID_SPACE
    else:
        colors = [initial[v] for v in prep.nodes]
        n0 = max(colors) + 1
    dn, dd = delta.numerator, 2 * delta.denominator      # stage 1 at delta/2
    if factor2:
        dd *= 2
    plan = _K.plan_defective_schedule(n0, dn, dd)
    rounds = 0
    maxbits = 1
    for (q, d, _bn, _bd) in plan:
        cache = prep.agree_cache.setdefault((q, d), {})
        colors, mb = _K.rs_defective_step(
            prep.nv, prep.eu, prep.ev, prep.mgr, w, nodew, colors, q, d,
            factor2, cache)
        maxbits = max(maxbits, mb + 9, 2 + (q * q).bit_length())
        rounds += 2
    thr_num, thr_den = delta.numerator, 4 * delta.denominator
    if factor2:
        thr_den *= 2
    c1_size = plan[-1][0] ** 2 if plan else n0
    colors, p, _last = _K.reduce_colors_by_orderings(
        prep.nv, prep.eu, prep.ev, prep.mgr, w, nodew, colors, c1_size,
        thr_num, thr_den, factor2)
    rounds += 2 * p
    maxbits = max(maxbits, 11 + p.bit_length())
    return colors, p, rounds, maxbits


def proper_colors_for_rounding(prep, initial):
    """Proper coloring over prepared arrays (used by delta = 0 rounding)."""
    if initial is None:
        colors = list(prep.ids)
        n0 = ID_SPACE
    else:
        colors = [initial[v] for v in prep.nodes]
        n0 = max(colors) + 1
    degree = [0] * prep.nv
    for a, b in zip(prep.eu, prep.ev):
        degree[a] += 1
        degree[b] += 1
    plan = _K.plan_proper_schedule(n0, max(degree, default=0))
    rounds = 0
    palette = n0
    for (q, d) in plan:
        cache = prep.agree_cache.setdefault((q, d), {})
        colors = _K.rs_proper_step(prep.nv, prep.eu, prep.ev, colors, q, d, cache)
        palette = q * q
        rounds += 1
    return colors, palette, rounds, 2 + palette.bit_length()
