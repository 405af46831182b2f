from fractions import Fraction

import pytest

from locround import graph as G, oracle as O, setcover as SC, sim as S
from conftest import random_setcover


def test_single_element_single_set():
    inst = G.SetCoverInstance([1], [10], [(1, 10)])
    V, metrics, info = SC.set_cover(inst)
    assert V == [10]


def test_disjoint_forced_cover(rng):
    # each element in exactly one set: the forced cover is optimal
    els = list(range(1, 9))
    sets_ = [100, 200]
    inc = [(u, 100) for u in els[:4]] + [(u, 200) for u in els[4:]]
    inst = G.SetCoverInstance(els, sets_, inc)
    V, metrics, info = SC.set_cover(inst)
    assert V == [100, 200]
    opt, wit = O.brute_set_cover_opt(inst)
    assert opt == 2


def test_build_scaled_x_rules():
    inst = G.SetCoverInstance([1, 2], [10, 11], [(1, 10), (2, 11), (2, 10)])
    t = inst.t
    x0 = {10: Fraction(1), 11: Fraction(1, 2 * t)}
    x = SC.build_scaled_x(x0, inst)
    assert x[10] == Fraction(1, 10)
    assert x[11] == 0     # at the threshold: zeroed


def test_select_n_star_traces():
    inst = G.SetCoverInstance([1], [10, 11, 12, 13],
                              [(1, v) for v in (10, 11, 12, 13)])
    x = {10: Fraction(1, 20), 11: Fraction(1, 20), 12: Fraction(1, 20),
         13: Fraction(1, 20)}
    ns = SC.select_n_star(inst, x)
    assert ns[1] == [10]
    x = {10: Fraction(1, 10), 11: Fraction(0), 12: Fraction(0),
         13: Fraction(0)}
    ns = SC.select_n_star(inst, x)
    assert ns[1] == [10]


def test_tau_monotone_in_s():
    assert SC._tau_for(2) < SC._tau_for(50) < SC._tau_for(5000)


def test_g_coefficient_dyadic_and_monotone():
    gs = [SC._g_coefficient(m) for m in range(0, 40)]
    assert gs[0] == 1
    for a, b in zip(gs, gs[1:]):
        assert b < a
        assert a <= Fraction(102, 100) * b
        assert a.denominator & (a.denominator - 1) == 0 or a.denominator == 1


def test_fractional_cover_backends(rng):
    inst = random_setcover(rng, 8, 6, 3, 5)
    for backend in ("central-exact", "central-approx"):
        x0, factor, ob = SC.fractional_cover(inst, backend)
        for u in inst.elements:
            assert sum(x0[v] for v in inst.element_sets[u]) >= 1
        if backend == "central-approx":
            for v in inst.sets:
                d = x0[v].denominator
                assert d & (d - 1) == 0


def test_oracle_tier_fuzz(rng):
    for _ in range(6):
        inst = random_setcover(rng, rng.randint(1, 9), rng.randint(1, 7), 3, 4)
        V, metrics, info = SC.set_cover(inst)
        assert O.covers(inst, V)
        opt, _ = O.brute_set_cover_opt(inst)
        assert len(V) <= 3 * info["tau"] * opt
        assert opt * inst.s >= len(inst.elements)     # OPT >= |U|/s
        # phi trace monotone
        phi = info["phi"]
        assert all(phi[i + 1] <= phi[i] for i in range(len(phi) - 1))


def test_weighted_variant(rng):
    for _ in range(4):
        inst = random_setcover(rng, rng.randint(2, 8), rng.randint(2, 7),
                               3, 4, wmax=6)
        V, metrics, info = SC.set_cover(inst, cost_mode="weighted")
        assert O.covers(inst, V)
        cost = sum(inst.costs[v] for v in V)
        assert cost <= 3 * info["tau"] * info["opt_bound"]


def test_congest_mode(rng):
    inst = random_setcover(rng, 12, 9, 3, 5)
    V, metrics, info = SC.set_cover(inst, mode=S.CONGEST)
    assert O.covers(inst, V)
    assert not metrics.budget_violations


def test_from_dominating_set(rng):
    g = G.simple_graph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)])
    inst, base = SC.from_dominating_set(g)
    V, metrics, info = SC.set_cover(inst)
    dom = [v - base for v in V]
    covered = set()
    for v in dom:
        covered.add(v)
        covered.update(g.neighbors(v))
    assert covered == set(g.nodes)


def test_empty_universe():
    inst = G.SetCoverInstance([], [5], [])
    V, metrics, info = SC.set_cover(inst)
    assert V == []
