"""Generic deterministic rounding of fractional label assignments.

A fractional label assignment gives every node a distribution over a finite
label alphabet with all values dyadic (integer multiples of 2^-k).  A
valuation attaches a non-negative utility and cost table to every edge of a
multigraph (depending only on the two endpoint labels) and optionally to
every node (depending on its own label).  The rounding step halves the
integrality denominator while losing at most a delta-fraction of
``u + eta*c`` from the potential ``u - eta*c``; iterating with a sliding
eta schedule turns a fractional assignment with ``u - c >= mu*u`` into an
integral one with ``u - c >= (1-eps)*(u - c)``.  All guarantees are
asserted exactly in rational arithmetic on every call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import coloring as _coloring
from ._kernel import impl as _K


class RoundingInvariantError(AssertionError):
    """An exact lemma-level inequality failed at runtime."""


@dataclass(frozen=True)
class LabelAlphabet:
    size: int

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("label alphabet needs at least 2 labels")

    def labels(self):
        return range(self.size)


class FractionalAssignment:
    """Per-node distributions over labels, all values multiples of 2^-k.

    ``values[v]`` is a tuple of integer numerators summing to 2^k.
    """

    def __init__(self, nlabels, k, values):
        self.nlabels = nlabels
        self.k = k
        self.values = dict(values)
        tot = 1 << k
        for v, nums in self.values.items():
            if len(nums) != nlabels:
                raise ValueError(f"node {v}: wrong number of labels")
            if any(x < 0 or x > tot for x in nums):
                raise ValueError(f"node {v}: value outside [0, 1]")
            if sum(nums) != tot:
                raise ValueError(f"node {v}: values do not sum to 1")

    @classmethod
    def from_fractions(cls, nlabels, values):
        """Exact conversion; every value must be dyadic."""
        k = 0
        for nums in values.values():
            for x in nums:
                d = Fraction(x).denominator
                if d & (d - 1):
                    raise ValueError(f"non-dyadic value {x}")
                k = max(k, d.bit_length() - 1)
        scaled = {
            v: tuple(int(Fraction(x) * (1 << k)) for x in nums)
            for v, nums in values.items()
        }
        return cls(nlabels, k, scaled)

    def fraction(self, v, a):
        return Fraction(self.values[v][a], 1 << self.k)

    def normalize(self):
        """Reduce k while every numerator is even."""
        k = self.k
        values = self.values
        while k > 0 and all(x % 2 == 0 for nums in values.values() for x in nums):
            values = {v: tuple(x >> 1 for x in nums) for v, nums in values.items()}
            k -= 1
        return FractionalAssignment(self.nlabels, k, values)

    def is_integral(self):
        tot = 1 << self.k
        return all(max(nums) == tot for nums in self.values.values())

    def to_labeling(self):
        if not self.is_integral():
            raise ValueError("assignment is not integral")
        tot = 1 << self.k
        return {v: nums.index(tot) for v, nums in self.values.items()}

    def min_nonzero(self):
        m = None
        for nums in self.values.values():
            for x in nums:
                if x and (m is None or x < m):
                    m = x
        return None if m is None else Fraction(m, 1 << self.k)

    def copy(self):
        return FractionalAssignment(self.nlabels, self.k, dict(self.values))

    @classmethod
    def integral(cls, nlabels, labeling):
        return cls(nlabels, 0, {
            v: tuple(1 if a == lab else 0 for a in range(nlabels))
            for v, lab in labeling.items()
        })


class Valuation:
    """Edge and node utility/cost tables with non-negative rational entries.

    Edge tables are indexed consistently with the stored endpoint order of
    each edge: ``edge_utility[e.index][a][b]`` is the utility when ``e.u``
    has label a and ``e.v`` has label b.
    """

    def __init__(self, nlabels, edge_utility, edge_cost,
                 node_utility=None, node_cost=None, bound=None):
        self.nlabels = nlabels
        self.edge_utility = edge_utility
        self.edge_cost = edge_cost
        self.node_utility = node_utility or {}
        self.node_cost = node_cost or {}
        self.bound = bound
        for tables in (edge_utility, edge_cost):
            for idx, tab in tables.items():
                for row in tab:
                    for x in row:
                        if x < 0:
                            raise ValueError(f"negative entry in table of edge {idx}")
        for tables in (self.node_utility, self.node_cost):
            for v, row in tables.items():
                for x in row:
                    if x < 0:
                        raise ValueError(f"negative entry in node table of {v}")
        if bound is not None:
            self.check_bound(bound)

    def check_bound(self, q):
        lo, hi = Fraction(1, q), Fraction(q)
        for tables in (self.edge_utility, self.edge_cost,
                       self.node_utility, self.node_cost):
            for tab in tables.values():
                rows = tab if tab and isinstance(tab[0], (tuple, list)) else [tab]
                for row in rows:
                    for x in row:
                        if x and not (lo <= x <= hi):
                            raise ValueError(
                                f"entry {x} outside declared bound [{lo}, {hi}]")


def _scaled_int(x, scale):
    if type(x) is int:
        return x * scale
    f = Fraction(x)
    return f.numerator * (scale // f.denominator)


class _Prepared:
    """Dense integer arrays for the kernels, built once per (graph, valuation)."""

    def __init__(self, g, val, agree_cache=None):
        self.g = g
        self.val = val
        self.nodes = list(g.nodes)
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.nv = len(self.nodes)
        L = val.nlabels
        self.L = L
        scale = 1
        for tables in (val.edge_utility, val.edge_cost):
            for tab in tables.values():
                for row in tab:
                    for x in row:
                        if type(x) is int:
                            continue
                        d = Fraction(x).denominator
                        scale = scale * d // math.gcd(scale, d)
        for tables in (val.node_utility, val.node_cost):
            for row in tables.values():
                for x in row:
                    if type(x) is int:
                        continue
                    d = Fraction(x).denominator
                    scale = scale * d // math.gcd(scale, d)
        self.scale = scale
        self.eu = []
        self.ev = []
        self.mgr = []
        self.ut = []
        self.ct = []
        zero = tuple([0] * (L * L))
        for e in g.edges:
            self.eu.append(self.index[e.u])
            self.ev.append(self.index[e.v])
            self.mgr.append(self.index.get(e.manager, -1) if e.manager is not None
                            else -1)
            tu = val.edge_utility.get(e.index)
            tc = val.edge_cost.get(e.index)
            self.ut.append(zero if tu is None else tuple(
                _scaled_int(tu[a][b], scale) for a in range(L) for b in range(L)))
            self.ct.append(zero if tc is None else tuple(
                _scaled_int(tc[a][b], scale) for a in range(L) for b in range(L)))
        if val.node_utility or val.node_cost:
            self.nut = []
            self.nct = []
            for v in self.nodes:
                nu = val.node_utility.get(v)
                nc = val.node_cost.get(v)
                self.nut.append(None if nu is None else tuple(
                    _scaled_int(x, scale) for x in nu))
                self.nct.append(None if nc is None else tuple(
                    _scaled_int(x, scale) for x in nc))
        else:
            self.nut = None
            self.nct = None
        self.ids = [v for v in self.nodes]
        self.agree_cache = {} if agree_cache is None else agree_cache

    def lam_array(self, lam):
        return [list(lam.values[v]) for v in self.nodes]

    def potential(self, lam, lam_arr=None):
        arr = self.lam_array(lam) if lam_arr is None else lam_arr
        U, C = _K.eval_potential(self.nv, self.L, self.eu, self.ev,
                                 self.ut, self.ct, self.nut, self.nct,
                                 arr, lam.k)
        den = self.scale * (1 << (2 * lam.k))
        return Fraction(U, den), Fraction(C, den)


def prepare(g, val):
    return _Prepared(g, val)


def evaluate(val, lam, g):
    """Exact (utility, cost) of a fractional assignment.

    ``lam`` is a FractionalAssignment (fast integer path) or a mapping
    node -> tuple of Fractions (exact rational path).
    """
    if isinstance(lam, FractionalAssignment):
        return _Prepared(g, val).potential(lam)
    L = val.nlabels
    fast = _evaluate_common_den(val, lam, g)
    if fast is not None:
        return fast
    U = Fraction(0)
    C = Fraction(0)
    for e in g.edges:
        tu = val.edge_utility.get(e.index)
        tc = val.edge_cost.get(e.index)
        lu = lam[e.u]
        lv = lam[e.v]
        for a in range(L):
            if not lu[a]:
                continue
            for b in range(L):
                if not lv[b]:
                    continue
                p = Fraction(lu[a]) * Fraction(lv[b])
                if tu is not None:
                    U += p * tu[a][b]
                if tc is not None:
                    C += p * tc[a][b]
    for v, row in val.node_utility.items():
        for a in range(L):
            U += Fraction(lam[v][a]) * row[a]
    for v, row in val.node_cost.items():
        for a in range(L):
            C += Fraction(lam[v][a]) * row[a]
    return U, C


def _evaluate_common_den(val, lam, g, max_bits=320):
    """Integer fast path: all assignment values on one common denominator.

    Applies when the least common denominator stays small (the typical
    structured inputs, e.g. 1/(20 deg) markings); returns None otherwise.
    """
    L = val.nlabels
    D = 1
    for nums in lam.values():
        for x in nums:
            d = Fraction(x).denominator
            D = D * d // math.gcd(D, d)
            if D.bit_length() > max_bits:
                return None
    S = 1
    for tables in (val.edge_utility, val.edge_cost,
                   val.node_utility, val.node_cost):
        for tab in tables.values():
            rows = tab if tab and isinstance(tab[0], (tuple, list)) else [tab]
            for row in rows:
                for x in row:
                    d = Fraction(x).denominator
                    S = S * d // math.gcd(S, d)
                    if S.bit_length() > max_bits:
                        return None
    li = {v: tuple((Fraction(x).numerator * (D // Fraction(x).denominator))
                   for x in nums) for v, nums in lam.items()}
    U = 0
    C = 0
    for e in g.edges:
        tu = val.edge_utility.get(e.index)
        tc = val.edge_cost.get(e.index)
        lu = li[e.u]
        lv = li[e.v]
        for a in range(L):
            la = lu[a]
            if not la:
                continue
            for b in range(L):
                lb = lv[b]
                if not lb:
                    continue
                p = la * lb
                if tu is not None and tu[a][b]:
                    x = Fraction(tu[a][b])
                    U += p * (x.numerator * (S // x.denominator))
                if tc is not None and tc[a][b]:
                    x = Fraction(tc[a][b])
                    C += p * (x.numerator * (S // x.denominator))
    for v, row in val.node_utility.items():
        lv = li[v]
        for a in range(L):
            if lv[a] and row[a]:
                x = Fraction(row[a])
                U += lv[a] * D * (x.numerator * (S // x.denominator))
    for v, row in val.node_cost.items():
        lv = li[v]
        for a in range(L):
            if lv[a] and row[a]:
                x = Fraction(row[a])
                C += lv[a] * D * (x.numerator * (S // x.denominator))
    den = D * D * S
    return Fraction(U, den), Fraction(C, den)


def _eta_ints(eta):
    eta = Fraction(eta)
    return eta.numerator, eta.denominator


def rounding_step(g, val, lam, delta, eta, estimate_mode="exact",
                  initial_coloring=None, engine=None, prep=None, check=True):
    """One basic rounding step: 1/(2K)-integral in, 1/K-integral out.

    Computes edge weights u + eta*c, colors the multigraph with a weighted
    average (delta/6)-relative defective coloring, then per color class
    splits each node's odd-valued labels into halves by estimated marginal
    potential and moves each by one integrality unit.  The exact guarantee

        u' - eta c'  >=  u - eta c - delta (u + eta c)

    is asserted (zero tolerance) unless ``check=False``.
    """
    delta = Fraction(delta)
    eta = Fraction(eta)
    if not (0 <= delta <= 1):
        raise ValueError("delta must be in [0, 1]")
    if eta < 1:
        raise ValueError("eta must be >= 1")
    if lam.k < 1:
        raise ValueError("assignment must be 1/(2K)-integral with K >= 1")
    if prep is None:
        prep = _Prepared(g, val)
    arr = prep.lam_array(lam)
    if check:
        U0, C0 = prep.potential(lam, arr)
    en, ed = _eta_ints(eta)
    w, nodew = _K.edge_weights_for_step(prep.nv, prep.L, prep.eu, prep.ev,
                                        prep.ut, prep.ct, prep.nut, prep.nct,
                                        arr, lam.k, en, ed)
    factor2 = estimate_mode == "quantized"
    if delta == 0:
        colors, palette, rounds, maxbits = _coloring.proper_colors_for_rounding(
            prep, initial_coloring)
    else:
        colors, palette, rounds, maxbits = _coloring.defective_colors_for_rounding(
            prep, w, nodew, delta / 6, factor2, initial_coloring)
    if engine is not None:
        engine.account(maxbits, rounds)
    mode_id = {"exact": 0, "worst": 1, "quantized": 2}[estimate_mode]
    if delta == 0:
        mode_id = 0
    dn, dd = delta.numerator, delta.denominator
    max_qbits, _touched = _K.rounding_color_loop(
        prep.nv, prep.L, prep.eu, prep.ev, prep.mgr, prep.ut, prep.ct,
        prep.nut, prep.nct, arr, lam.k, colors, dn, dd, en, ed, mode_id)
    if engine is not None:
        msg_bits = prep.L * (max_qbits + 2) + 2
        engine.account(msg_bits, 2 * palette)
    _K.halve_assignment(prep.nv, prep.L, arr)
    out = FractionalAssignment(lam.nlabels, lam.k - 1, {
        v: tuple(arr[i]) for i, v in enumerate(prep.nodes)})
    if check:
        U1, C1 = prep.potential(out)
        if U1 - eta * C1 < U0 - eta * C0 - delta * (U0 + eta * C0):
            raise RoundingInvariantError(
                f"rounding step lost too much potential: "
                f"{U1 - eta * C1} < {U0 - eta * C0 - delta * (U0 + eta * C0)}")
    return out


def round_to_integral(g, val, lam, eps, mu, estimate_mode="exact",
                      initial_coloring=None, engine=None, prep=None,
                      check=True):
    """Full rounding schedule: k steps with delta = eps*mu/(6k) and
    eta_i = 1 + (1 - i/k) * eps*mu/2.

    Requires ``u - c >= mu*u`` exactly; returns the integral labeling with
    ``u(l) - c(l) >= (1-eps)(u - c)`` asserted exactly.
    """
    eps = Fraction(eps)
    mu = Fraction(mu)
    if not (0 <= eps <= 1) or not (0 < mu <= 1):
        raise ValueError("eps in [0,1], mu in (0,1] required")
    if prep is None:
        prep = _Prepared(g, val)
    lam = lam.normalize()
    U0, C0 = prep.potential(lam)
    if U0 - C0 < mu * U0:
        raise RoundingInvariantError(
            f"precondition u - c >= mu*u violated: {U0 - C0} < {mu * U0}")
    if lam.k == 0:
        return lam.to_labeling()
    k = lam.k
    delta = eps * mu / (6 * k)
    if engine is not None:
        # pipelined initial fractional-value broadcast
        engine.account(min(2 * prep.L + 2, (1 << min(lam.k, 20)) * 8), rounds=k)
    phi_prev = U0 - (1 + eps * mu / 2) * C0
    phi0 = phi_prev
    cur = lam
    for i in range(1, k + 1):
        eta_i = 1 + Fraction(k - i, k) * eps * mu / 2
        cur = rounding_step(g, val, cur, delta, eta_i, estimate_mode,
                            initial_coloring, engine, prep, check=check)
        if check:
            Ui, Ci = prep.potential(cur)
            phi_i = Ui - eta_i * Ci
            if phi_i < (1 - delta) ** i * phi0:
                raise RoundingInvariantError(
                    f"potential schedule broken at step {i}: "
                    f"{phi_i} < (1-delta)^{i} * {phi0}")
            if engine is not None:
                engine.sample_potential(phi_i)
            phi_prev = phi_i
    ell = cur.to_labeling()
    if check:
        Uf, Cf = prep.potential(cur)
        if Uf - Cf < (1 - eps) * (U0 - C0):
            raise RoundingInvariantError(
                f"final guarantee failed: {Uf - Cf} < {(1 - eps) * (U0 - C0)}")
    return ell


def preprocess_fractional(lam_raw, eps, mu, nlabels, lam_min=None,
                          g=None, val=None, check=True, prep=None,
                          uc_raw=None):
    """Round arbitrary rational distributions to a 1/2^k-integral assignment
    with 2^k the smallest power of two >= 9/(eps*mu*lam_min).

    Zero values stay zero; per node the values move by less than 2^-k and
    keep their unit sum.  With a valuation given, both guarantees

        u' - c' >= (1-eps)(u - c)   and   u' - c' >= (mu/2) u'

    are asserted exactly (requires ``u - c >= mu*u`` on the input).
    """
    eps = Fraction(eps)
    mu = Fraction(mu)
    actual_min = None
    for nums in lam_raw.values():
        s = sum(Fraction(x) for x in nums)
        if s != 1:
            raise ValueError("input distributions must sum to 1")
        for x in nums:
            x = Fraction(x)
            if x < 0:
                raise ValueError("negative fractional value")
            if x and (actual_min is None or x < actual_min):
                actual_min = x
    if actual_min is None:
        actual_min = Fraction(1)
    if lam_min is None:
        lam_min = actual_min
    else:
        lam_min = Fraction(lam_min)
        if actual_min < lam_min:
            raise ValueError(
                f"declared lam_min {lam_min} exceeds actual minimum {actual_min}")
    k = 0
    target = Fraction(9) / (eps * mu * lam_min)
    while (1 << k) < target:
        k += 1
    two_k = 1 << k
    values = {}
    for v, nums in lam_raw.items():
        floors = []
        fracs = []
        for a, x in enumerate(nums):
            x = Fraction(x) * two_k
            f = x.numerator // x.denominator
            floors.append(f)
            fracs.append((x - f, a))
        deficit = two_k - sum(floors)
        if deficit < 0:
            raise AssertionError("floor sum exceeded the unit total")
        # bump the largest fractional parts, ties toward smaller label index
        order = sorted((r for r in fracs if r[0] > 0),
                       key=lambda r: (-r[0], r[1]))
        if deficit > len(order):
            raise AssertionError("not enough fractional mass to rebalance")
        for j in range(deficit):
            floors[order[j][1]] += 1
        values[v] = tuple(floors)
    out = FractionalAssignment(nlabels, k, values)
    for v, nums in lam_raw.items():
        for a, x in enumerate(nums):
            if Fraction(x) == 0 and out.values[v][a] != 0:
                raise AssertionError("zero value moved")
            if abs(Fraction(out.values[v][a], two_k) - Fraction(x)) * two_k > 1:
                raise AssertionError("value moved by more than 2^-k")
    if check and val is not None and g is not None:
        if uc_raw is None:
            uc_raw = evaluate(val, {v: tuple(Fraction(x) for x in nums)
                                    for v, nums in lam_raw.items()}, g)
        U, C = uc_raw
        if U - C < mu * U:
            raise RoundingInvariantError(
                f"precondition u - c >= mu*u violated: {U - C} < {mu * U}")
        prepped = _Prepared(g, val) if prep is None else prep
        U1, C1 = prepped.potential(out)
        if U1 - C1 < (1 - eps) * (U - C):
            raise RoundingInvariantError(
                f"preprocessing lost too much: {U1 - C1} < {(1 - eps) * (U - C)}")
        if U1 - C1 < mu / 2 * U1:
            raise RoundingInvariantError(
                f"preprocessing broke the margin: {U1 - C1} < {mu / 2 * U1}")
    return out


def round_fractional(g, val, lam_raw, eps, mu, nlabels, lam_min=None,
                     estimate_mode="exact", initial_coloring=None,
                     engine=None, check=True, agree_cache=None, uc_raw=None):
    """Preprocess + full rounding with the eps/2 + eps/2 split.

    Produces an integral labeling with ``u - c >= (1-eps)(u(lam) - c(lam))``
    from any rational fractional assignment with ``u - c >= mu*u``; the
    claim is asserted exactly end to end.
    """
    eps = Fraction(eps)
    mu = Fraction(mu)
    prep = _Prepared(g, val, agree_cache=agree_cache)
    if check and uc_raw is None:
        uc_raw = evaluate(val, {v: tuple(Fraction(x) for x in nums)
                                for v, nums in lam_raw.items()}, g)
    lam = preprocess_fractional(lam_raw, eps / 2, mu, nlabels, lam_min,
                                g=g, val=val, check=check, prep=prep,
                                uc_raw=uc_raw)
    ell = round_to_integral(g, val, lam, eps / 2, mu / 2, estimate_mode,
                            initial_coloring, engine, prep, check=check)
    if check:
        U, C = uc_raw
        Uf, Cf = prep.potential(FractionalAssignment.integral(nlabels, ell))
        if Uf - Cf < (1 - eps) * (U - C):
            raise RoundingInvariantError(
                f"composed rounding guarantee failed: "
                f"{Uf - Cf} < {(1 - eps) * (U - C)}")
    return ell


def valuation_to_json(g, val, lam=None):
    """Serializable form: edge tables keyed by edge index, rationals as
    "a/b" strings; inverse of the CLI `round` instance loader."""
    def fr(x):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 \
            else str(x.numerator)

    doc = {
        "labels": val.nlabels,
        "nodes": [int(v) for v in g.nodes],
        "edges": [],
        "node_utility": {str(v): [fr(x) for x in row]
                         for v, row in sorted(val.node_utility.items())},
        "node_cost": {str(v): [fr(x) for x in row]
                      for v, row in sorted(val.node_cost.items())},
    }
    L = val.nlabels
    zero = tuple(tuple(Fraction(0) for _ in range(L)) for _ in range(L))
    for e in g.edges:
        tu = val.edge_utility.get(e.index, zero)
        tc = val.edge_cost.get(e.index, zero)
        doc["edges"].append({
            "index": e.index, "u": e.u, "v": e.v,
            "manager": e.manager,
            "utility": [[fr(x) for x in row] for row in tu],
            "cost": [[fr(x) for x in row] for row in tc],
        })
    if lam is not None:
        doc["assignment"] = {
            str(v): [fr(Fraction(x, 1 << lam.k)) for x in nums]
            for v, nums in sorted(lam.values.items())}
    return doc


def lift_node_valuation(g, val):
    """Make node tables explicit: one frozen dummy node and edge per node
    with a table, equal tables across the dummy axis.

    Returns ``(g2, val2, dummy_of)``; evaluation agrees exactly with the
    original when dummies carry any frozen label.
    """
    from . import graph as _graph

    touched = sorted(set(val.node_utility) | set(val.node_cost))
    if not touched:
        return g, val, {}
    base = (max(g.nodes) + 1) if g.nodes else 0
    dummy_of = {}
    nodes = list(g.nodes)
    edges = list(g.edges)
    comm = {v: set(g.comm_adjacency[v]) for v in g.comm_adjacency}
    L = val.nlabels
    eu = dict(val.edge_utility)
    ec = dict(val.edge_cost)
    next_index = len(edges)
    for i, v in enumerate(touched):
        dv = base + i
        dummy_of[v] = dv
        nodes.append(dv)
        comm.setdefault(v, set()).add(dv)
        comm[dv] = {v}
        edges.append(_graph.Edge(v, dv, _graph.PHYSICAL, None, next_index))
        nu = val.node_utility.get(v, tuple([0] * L))
        nc = val.node_cost.get(v, tuple([0] * L))
        eu[next_index] = tuple(tuple(nu[a] for _b in range(L)) for a in range(L))
        ec[next_index] = tuple(tuple(nc[a] for _b in range(L)) for a in range(L))
        next_index += 1
    g2 = _graph.Multigraph(nodes, edges, comm)
    val2 = Valuation(L, eu, ec)
    return g2, val2, dummy_of
