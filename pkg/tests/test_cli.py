import json

import pytest

from locround import cli


def test_generate_deterministic(tmp_path):
    a = tmp_path / "a.edges"
    b = tmp_path / "b.edges"
    for out in (a, b):
        cli.main(["generate", "graph", "--n", "25", "--max-degree", "4",
                  "--seed", "9", "--output", str(out)])
    assert a.read_bytes() == b.read_bytes()


def test_generate_empty():
    import tempfile, os
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "e.edges")
        cli.main(["generate", "graph", "--n", "0", "--output", p])
        assert open(p).read() == ""


def test_generate_degree_cap(tmp_path):
    p = tmp_path / "g.edges"
    cli.main(["generate", "graph", "--n", "40", "--max-degree", "4",
              "--seed", "1", "--output", str(p)])
    from locround import graph as G
    g = G.load_graph(p, "edge-list")
    g = g.graph if hasattr(g, "graph") else g
    assert g.max_degree() <= 4


def test_runner_and_verify(tmp_path):
    g = tmp_path / "g.edges"
    cli.main(["generate", "graph", "--n", "20", "--max-degree", "5",
              "--seed", "3", "--weight-max", "6", "--output", str(g)])
    rep = tmp_path / "mis.json"
    cli.main(["--json", str(rep), "mis", "--input", str(g)])
    assert cli.main(["verify", str(rep)]) == 0
    # negative control: drop a member from the set
    doc = json.loads(rep.read_text())
    if doc["set"]:
        doc["set"] = doc["set"][1:]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert cli.main(["verify", str(bad)]) == 1


def test_setcover_verify_negative(tmp_path):
    sc = tmp_path / "i.sc"
    cli.main(["generate", "setcover", "--n", "10", "--sets", "8",
              "--seed", "5", "--output", str(sc)])
    rep = tmp_path / "sc.json"
    cli.main(["--json", str(rep), "setcover", "--input", str(sc)])
    assert cli.main(["verify", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    if doc["sets"]:
        doc["sets"] = doc["sets"][:-1]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert cli.main(["verify", str(bad)]) == 1
    # tampered phi trace
    doc = json.loads(rep.read_text())
    if len(doc["phi"]) >= 2:
        doc["phi"][-1] = str(10 ** 9)
        bad2 = tmp_path / "bad2.json"
        bad2.write_text(json.dumps(doc))
        assert cli.main(["verify", str(bad2)]) == 1


def test_valuation_json_roundtrip(tmp_path):
    import json as _json
    import random
    from fractions import Fraction
    from locround import graph as G, rounding as R

    rng = random.Random(3)
    g = G.simple_graph([1, 2, 3], [(1, 2), (2, 3)])
    eu = {e.index: tuple(tuple(Fraction(rng.randint(0, 5), 2)
                               for _ in range(2)) for _ in range(2))
          for e in g.edges}
    ec = {e.index: tuple(tuple(Fraction(rng.randint(0, 5))
                               for _ in range(2)) for _ in range(2))
          for e in g.edges}
    val = R.Valuation(2, eu, ec, node_utility={2: (Fraction(0), Fraction(3))})
    lam = R.FractionalAssignment(2, 2, {1: (1, 3), 2: (2, 2), 3: (4, 0)})
    doc = R.valuation_to_json(g, val, lam)
    p = tmp_path / "inst.json"
    p.write_text(_json.dumps(doc))
    g2, val2, lam2 = cli._load_rounding_instance(str(p))
    lamf = {v: tuple(Fraction(x, 4) for x in nums)
            for v, nums in lam.values.items()}
    assert R.evaluate(val, lamf, g) == R.evaluate(val2, lamf, g2)
    assert lam2.values == lam.values and lam2.k == lam.k


def test_round_subcommand(tmp_path):
    inst = {
        "labels": 2,
        "nodes": [1, 2],
        "edges": [{"u": 1, "v": 2,
                   "utility": [["2", "2"], ["2", "2"]],
                   "cost": [["0", "1"], ["1", "0"]]}],
        "assignment": {"1": ["1/2", "1/2"], "2": ["1/4", "3/4"]},
    }
    p = tmp_path / "inst.json"
    p.write_text(json.dumps(inst))
    rep = tmp_path / "round.json"
    cli.main(["--json", str(rep), "round", "--valuation", str(p),
              "--eps", "1/10", "--mu", "1/4"])
    doc = json.loads(rep.read_text())
    assert doc["guarantee_ok"] is True


def test_oracle_subcommand(tmp_path, capsys):
    g = tmp_path / "g.edges"
    g.write_text("1 2\n2 3\n1 3\n")
    cli.main(["oracle", "wis", "--input", str(g)])
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["opt"] == 1


def test_wis_and_color_runners(tmp_path):
    g = tmp_path / "g.edges"
    cli.main(["generate", "graph", "--n", "15", "--max-degree", "4",
              "--seed", "2", "--weight-max", "5", "--output", str(g)])
    for algo in ("basic", "turan", "carowei"):
        rep = tmp_path / f"wis-{algo}.json"
        cli.main(["--json", str(rep), "wis", "--input", str(g),
                  "--algo", algo, "--eps", "1/10"])
        assert cli.main(["verify", str(rep)]) == 0
    rep = tmp_path / "color.json"
    cli.main(["--json", str(rep), "color", "--input", str(g),
              "--delta", "1/4", "--color-mode", "avgdefective"])
    assert cli.main(["verify", str(rep)]) == 0
