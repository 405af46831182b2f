"""Command-line entry point.

Subcommands: generate, mis, matching, wis, setcover, color, round, oracle,
verify.  Every runner echoes its configuration into the output JSON and the
``verify`` subcommand recomputes all certificates from the instance file,
independent of the runner's own assertions.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction

from . import coloring as _coloring
from . import graph as _graph
from . import indepset as _indepset
from . import mis as _mis
from . import oracle as _oracle
from . import rounding as _rounding
from . import setcover as _setcover
from . import sim as _sim


def _frac(s):
    return Fraction(s)


def _frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _emit(args, payload):
    payload["config"] = {k: v for k, v in vars(args).items()
                         if k not in ("func",) and v is not None}
    for k, v in list(payload["config"].items()):
        if isinstance(v, Fraction):
            payload["config"][k] = _frac_str(v)
    text = json.dumps(payload, sort_keys=True, indent=1, default=str)
    payload["sha256"] = hashlib.sha256(text.encode()).hexdigest()
    text = json.dumps(payload, sort_keys=True, indent=1, default=str)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return payload


def _engine_for(g, args):
    return _sim.RoundEngine(g, mode=args.mode, bit_budget=args.bit_budget,
                            strict=args.strict_budget)


def _load_weighted(path):
    g = _graph.load_graph(path, "edge-list")
    if isinstance(g, _graph.WeightedGraph):
        return g
    return _graph.WeightedGraph(g, {v: 1 for v in g.nodes})


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def generate_graph(n, max_degree, seed, weight_max=1):
    """Seeded random graph text with a degree cap; deterministic per seed."""
    rng = random.Random(seed)
    nodes = list(range(1, n + 1))
    deg = {v: 0 for v in nodes}
    lines = []
    if weight_max > 1:
        for v in nodes:
            lines.append(f"n {v} {rng.randint(1, weight_max)}")
    else:
        for v in nodes:
            lines.append(f"n {v} 1")
    if n >= 2:
        attempts = 3 * n * max(1, max_degree)
        for _ in range(attempts):
            u, v = rng.sample(nodes, 2)
            if deg[u] >= max_degree or deg[v] >= max_degree:
                continue
            a, b = min(u, v), max(u, v)
            line = f"{a} {b}"
            if line not in lines:
                lines.append(line)
                deg[u] += 1
                deg[v] += 1
    return "\n".join(lines) + ("\n" if lines else "")


def generate_setcover(n_elements, n_sets, t_cap, s_cap, seed, weight_max=1):
    rng = random.Random(seed)
    els = list(range(1, n_elements + 1))
    sets_ = list(range(n_elements + 1, n_elements + n_sets + 1))
    lines = [f"e {u}" for u in els]
    for v in sets_:
        if weight_max > 1:
            lines.append(f"s {v} {rng.randint(1, weight_max)}")
        else:
            lines.append(f"s {v}")
    deg_s = {v: 0 for v in sets_}
    for u in els:
        k = rng.randint(1, max(1, t_cap))
        cands = [v for v in sets_ if deg_s[v] < s_cap] or sets_
        for v in rng.sample(cands, min(k, len(cands))):
            lines.append(f"c {u} {v}")
            deg_s[v] += 1
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_generate(args):
    if args.kind == "graph":
        text = generate_graph(args.n, args.max_degree, args.seed, args.weight_max)
    else:
        text = generate_setcover(args.n, args.sets, args.t_cap, args.s_cap,
                                 args.seed, args.weight_max)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.output}")


def cmd_mis(args):
    wg = _load_weighted(args.input)
    g = wg.graph
    if args.baseline is not None:
        out, iters = _mis.luby_randomized_baseline(g, args.baseline)
        return _emit(args, {"algorithm": "mis-baseline", "set": out,
                            "iterations": iters, "input": args.input})
    engine = _engine_for(g, args)
    out, metrics, info = _mis.mis(g, mode=args.mode, engine=engine)
    return _emit(args, {
        "algorithm": "mis", "input": args.input, "set": out,
        "iterations": info["iterations"],
        "removed_ratios": [[er, eb] for (er, eb) in info["ratios"]],
        "metrics": metrics.to_json(),
    })


def cmd_matching(args):
    wg = _load_weighted(args.input)
    engine = _engine_for(wg.graph, args)
    M, metrics, iters = _indepset.maximal_matching(wg.graph, mode=args.mode,
                                                   engine=engine)
    return _emit(args, {
        "algorithm": "matching", "input": args.input,
        "matching": [list(p) for p in M], "iterations": iters,
        "metrics": metrics.to_json(),
    })


def cmd_wis(args):
    wg = _load_weighted(args.input)
    engine = _engine_for(wg.graph, args)
    eps = args.eps
    cert = {}
    if args.algo == "basic":
        x = {v: Fraction(1, wg.graph.max_degree() + 1) for v in wg.graph.nodes}
        I, u0 = _indepset.basic_is_round(wg.graph, wg.weights, x, eps,
                                         engine=engine, mode=args.mode)
        cert["u_of_x"] = _frac_str(u0)
        cert["bound"] = _frac_str((Fraction(1, 2) - eps) * u0)
    elif args.algo == "lp4":
        I, sstar = _indepset.lp_guided_is(wg, eps=Fraction(1, 5),
                                          engine=engine, mode=args.mode)
        cert["s_star"] = _frac_str(sstar)
        cert["bound"] = _frac_str(sstar / 4)
    elif args.algo == "beta":
        I, sstar, ups = _indepset.beta_approx_is(wg, eps, engine=engine,
                                                 mode=args.mode)
        cert["s_star"] = _frac_str(sstar)
        cert["bound"] = _frac_str((1 - eps) * sstar)
    elif args.algo == "turan":
        I = _indepset.turan_fraction_is(wg, eps, engine=engine, mode=args.mode)
        bound = (1 - eps) * Fraction(wg.total_weight(),
                                     wg.graph.max_degree() + 1)
        cert["bound"] = _frac_str(bound)
    elif args.algo == "carowei":
        I = _indepset.caro_wei_is(wg, eps, engine=engine, mode=args.mode)
        mass = sum(Fraction(wg.weights[v] ** 2,
                            wg.weights[v] + sum(wg.weights[u]
                                                for u in wg.graph.neighbors(v)))
                   for v in wg.graph.nodes)
        cert["bound"] = _frac_str((Fraction(1, 2) - eps) * mass)
    else:
        raise SystemExit(f"unknown --algo {args.algo}")
    weight = sum(wg.weights[v] for v in I)
    return _emit(args, {
        "algorithm": f"wis-{args.algo}", "input": args.input, "set": list(I),
        "weight": weight, "certificate": cert,
        "metrics": engine.metrics.to_json(),
    })


def cmd_setcover(args):
    inst = _graph.load_graph(args.input, "setcover")
    if args.from_dominating_set:
        g = _graph.load_graph(args.input, "edge-list")
        if isinstance(g, _graph.WeightedGraph):
            g = g.graph
        inst, _base = _setcover.from_dominating_set(g)
    cost_mode = "weighted" if args.weighted else "unit"
    V, metrics, info = _setcover.set_cover(inst, mode=args.mode,
                                           cost_mode=cost_mode,
                                           backend=args.backend)
    return _emit(args, {
        "algorithm": "setcover", "input": args.input, "sets": V,
        "tau": info["tau"], "opt_bound": _frac_str(info["opt_bound"]),
        "phi": [_frac_str(p) for p in info["phi"]],
        "uncovered": info["uncovered"],
        "metrics": metrics.to_json(),
    })


def cmd_color(args):
    wg = _load_weighted(args.input)
    g = wg.graph
    w = {e.index: Fraction(1) for e in g.edges}
    engine = _engine_for(g, args)
    if args.color_mode == "proper":
        pc = _coloring.linial_coloring(g, engine=engine)
        out = {"colors": {str(v): c for v, c in pc.colors.items()},
               "palette": pc.palette_size, "kind": "proper"}
    elif args.color_mode == "defective":
        dc = _coloring.weighted_defective_coloring(g, w, args.delta,
                                                   engine=engine)
        out = _defective_json(dc)
    elif args.color_mode == "avgdefective":
        dc = _coloring.average_defective_coloring(g, w, args.delta,
                                                  engine=engine)
        out = _defective_json(dc)
    elif args.color_mode == "greedy-oracle":
        dc = _coloring.greedy_defective_oracle(g, w, args.delta, engine=engine)
        out = _defective_json(dc)
    else:
        raise SystemExit(f"unknown --mode {args.color_mode}")
    out["input"] = args.input
    out["metrics"] = engine.metrics.to_json()
    out["algorithm"] = "color"
    return _emit(args, out)


def _defective_json(dc):
    cert = {}
    if "mono_weight" in dc.certificate:
        cert = {"mono": _frac_str(dc.certificate["mono_weight"]),
                "total": _frac_str(dc.certificate["total_weight"])}
    return {"colors": {str(v): c for v, c in dc.colors.items()},
            "palette": dc.palette_size, "kind": dc.defect_kind,
            "delta": _frac_str(dc.relative_defect), "certificate": cert}


def cmd_round(args):
    g, val, lam = _load_rounding_instance(args.valuation)
    engine = _engine_for(g, args)
    lam_raw = {v: tuple(Fraction(x, 1 << lam.k) for x in nums)
               for v, nums in lam.values.items()}
    estimate = "quantized" if args.mode == _sim.CONGEST else "exact"
    ell = _rounding.round_fractional(g, val, lam_raw, args.eps, args.mu,
                                     val.nlabels, estimate_mode=estimate,
                                     engine=engine)
    U, C = _rounding.evaluate(val, lam_raw, g)
    prep = _rounding._Prepared(g, val)
    Uf, Cf = prep.potential(
        _rounding.FractionalAssignment.integral(val.nlabels, ell))
    return _emit(args, {
        "algorithm": "round", "labels": {str(v): a for v, a in ell.items()},
        "fractional_u": _frac_str(U), "fractional_c": _frac_str(C),
        "final_u": _frac_str(Uf), "final_c": _frac_str(Cf),
        "guarantee_ok": Uf - Cf >= (1 - args.eps) * (U - C),
        "metrics": engine.metrics.to_json(),
    })


def _load_rounding_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    L = doc["labels"]
    nodes = [int(v) for v in doc["nodes"]]
    edges = []
    eu, ec = {}, {}
    for i, e in enumerate(doc["edges"]):
        kind = _graph.VIRTUAL if e.get("manager") is not None else _graph.PHYSICAL
        edges.append(_graph.Edge(int(e["u"]), int(e["v"]), kind,
                                 e.get("manager"), i))
        eu[i] = tuple(tuple(Fraction(x) for x in row) for row in e["utility"])
        ec[i] = tuple(tuple(Fraction(x) for x in row) for row in e["cost"])
    g = _graph.Multigraph(nodes, edges)
    nut = {int(v): tuple(Fraction(x) for x in row)
           for v, row in doc.get("node_utility", {}).items()}
    nct = {int(v): tuple(Fraction(x) for x in row)
           for v, row in doc.get("node_cost", {}).items()}
    val = _rounding.Valuation(L, eu, ec, node_utility=nut, node_cost=nct)
    lam = _rounding.FractionalAssignment.from_fractions(
        L, {int(v): tuple(Fraction(x) for x in row)
            for v, row in doc["assignment"].items()})
    return g, val, lam


def cmd_oracle(args):
    if args.oracle == "wis":
        wg = _load_weighted(args.input)
        opt, wit = _oracle.brute_max_weight_is(wg)
        return _emit(args, {"oracle": "wis", "opt": int(opt), "witness": wit})
    if args.oracle == "setcover":
        inst = _graph.load_graph(args.input, "setcover")
        opt, wit = _oracle.brute_set_cover_opt(inst, weighted=args.weighted)
        return _emit(args, {"oracle": "setcover", "opt": int(opt),
                            "witness": wit})
    if args.oracle == "lp":
        wg = _load_weighted(args.input)
        sstar, x = _oracle.packing_lp(wg)
        return _emit(args, {"oracle": "lp", "s_star": _frac_str(sstar),
                            "x": {str(v): _frac_str(xv) for v, xv in x.items()}})
    if args.oracle == "beta":
        wg = _load_weighted(args.input)
        return _emit(args, {"oracle": "beta",
                            "beta": _oracle.neighborhood_independence(wg.graph)})
    raise SystemExit(f"unknown oracle {args.oracle}")


def cmd_verify(args):
    with open(args.report, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    algo = doc.get("algorithm", "")
    checks = {}
    inp = doc.get("input") or doc.get("config", {}).get("input")
    if algo in ("mis", "mis-baseline"):
        wg = _load_weighted(inp)
        S = doc["set"]
        checks["independent"] = _oracle.is_independent(wg.graph, S)
        checks["maximal"] = _oracle.is_maximal_is(wg.graph, S)
    elif algo == "matching":
        wg = _load_weighted(inp)
        index = {(min(e.u, e.v), max(e.u, e.v)): e.index
                 for e in wg.graph.edges}
        ids = [index[tuple(sorted(p))] for p in doc["matching"]]
        checks["matching"] = _oracle.is_matching(wg.graph, ids)
        checks["maximal"] = _oracle.is_maximal_matching(wg.graph, ids)
    elif algo.startswith("wis"):
        wg = _load_weighted(inp)
        S = doc["set"]
        checks["independent"] = _oracle.is_independent(wg.graph, S)
        bound = Fraction(doc["certificate"]["bound"])
        checks["weight_bound"] = sum(wg.weights[v] for v in S) >= bound
    elif algo == "setcover":
        inst = _graph.load_graph(inp, "setcover")
        checks["covers"] = _oracle.covers(inst, doc["sets"])
        phi = [Fraction(p) for p in doc["phi"]]
        checks["phi_monotone"] = all(phi[i + 1] <= phi[i]
                                     for i in range(len(phi) - 1))
    elif algo == "color":
        wg = _load_weighted(inp)
        g = wg.graph
        colors = {int(v): c for v, c in doc["colors"].items()}
        w = {e.index: Fraction(1) for e in g.edges}
        if doc["kind"] == "proper":
            checks["proper"] = _coloring.check_proper(g, colors)
        else:
            ok, _cert = _coloring.defect_certificate(
                g, w, colors, Fraction(doc["delta"]), doc["kind"])
            checks["defect"] = ok
    else:
        raise SystemExit(f"cannot verify algorithm {algo!r}")
    ok = all(checks.values())
    print(json.dumps({"ok": ok, "checks": checks}, sort_keys=True))
    return 0 if ok else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="locround")
    ap.add_argument("--mode", choices=[_sim.LOCAL, _sim.CONGEST],
                    default=_sim.LOCAL)
    ap.add_argument("--bit-budget", type=int, default=None)
    ap.add_argument("--strict-budget", action="store_true")
    ap.add_argument("--json", default=None, help="write the report here")
    sub = ap.add_subparsers(required=True)

    p = sub.add_parser("generate")
    p.add_argument("kind", choices=["graph", "setcover"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--sets", type=int, default=8)
    p.add_argument("--t-cap", type=int, default=3)
    p.add_argument("--s-cap", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-max", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("mis")
    p.add_argument("--input", required=True)
    p.add_argument("--baseline", type=int, default=None,
                   help="run the seeded randomized baseline instead")
    p.set_defaults(func=cmd_mis)

    p = sub.add_parser("matching")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_matching)

    p = sub.add_parser("wis")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", choices=["basic", "lp4", "beta", "turan",
                                      "carowei"], required=True)
    p.add_argument("--eps", type=_frac, default=Fraction(1, 10))
    p.set_defaults(func=cmd_wis)

    p = sub.add_parser("setcover")
    p.add_argument("--input", required=True)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--backend", choices=["central-exact", "central-approx"],
                   default="central-exact")
    p.add_argument("--from-dominating-set", action="store_true")
    p.set_defaults(func=cmd_setcover)

    p = sub.add_parser("color")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=_frac, default=Fraction(1, 2))
    p.add_argument("--color-mode", dest="color_mode",
                   choices=["proper", "defective", "avgdefective",
                            "greedy-oracle"], default="defective")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("round")
    p.add_argument("--valuation", required=True,
                   help="JSON instance: graph, tables, assignment")
    p.add_argument("--eps", type=_frac, default=Fraction(1, 10))
    p.add_argument("--mu", type=_frac, default=Fraction(1, 2))
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("oracle")
    p.add_argument("oracle", choices=["wis", "setcover", "lp", "beta"])
    p.add_argument("--input", required=True)
    p.add_argument("--weighted", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main() or 0)
