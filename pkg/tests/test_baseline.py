import pytest

from ltlplan import load_workspace
from ltlplan.baseline import baseline_solve
from ltlplan.ltl import ltl_to_buchi
from ltlplan.product import path_cost

from oracles import brute_optimal_suffix


def make_ws(tmp_path, text):
    p = tmp_path / "ws.txt"
    p.write_text(text)
    return load_workspace(p)


def check_run_shape(run):
    assert run.prefix[-1] == run.suffix[0]
    assert run.suffix[0] == run.suffix[-1]
    assert len(run.suffix) >= 2
    assert run.prefix_cost == path_cost(run.prefix)
    assert run.suffix_cost == path_cost(run.suffix)


def test_already_standing_on_goal(tmp_path):
    # one robot, starts on the only a-cell: optimal suffix is stay, cost 0
    # (start markers cannot carry a label in the file format, so patch one in)
    ws = make_ws(tmp_path, "grid 2 1 1\n1.\n")
    ws.labels[(0, 0)] = frozenset({"a"})
    run = baseline_solve(ws, ltl_to_buchi("G F a"))
    assert run is not None
    check_run_shape(run)
    assert run.suffix_cost == 0
    assert run.prefix_cost == 0


def test_simple_patrol(tmp_path):
    # a...b on a line: visiting both forever costs 2 * distance
    ws = make_ws(tmp_path, "grid 5 1 1\n1...b\nlabel b goal\n")
    ws.labels[(0, 0)] = frozenset({"home"})
    run = baseline_solve(ws, ltl_to_buchi("G F home & G F goal"))
    assert run is not None
    check_run_shape(run)
    assert run.suffix_cost == 8
    # every accepting state already requires one full tour
    assert run.prefix_cost == 8


def test_unsat_unreachable_goal(tmp_path):
    ws = make_ws(tmp_path, "grid 3 1 1\n1#a\nlabel a a\n")
    assert baseline_solve(ws, ltl_to_buchi("F a")) is None


def test_unsat_contradiction(tmp_path):
    ws = make_ws(tmp_path, "grid 2 1 1\n1a\nlabel a a\n")
    assert baseline_solve(ws, ltl_to_buchi("G (a & !a)")) is None


def test_safety_only_mission_is_satisfiable(tmp_path):
    ws = make_ws(tmp_path, "grid 3 1 1\n1.a\nlabel a bad\n")
    run = baseline_solve(ws, ltl_to_buchi("G !bad"))
    assert run is not None
    assert run.suffix_cost == 0


ORACLE_CASES = [
    # (workspace text, mission)
    ("grid 4 2 1\n1..a\n.b..\nlabel a a\nlabel b b\n", "G F a & G F b"),
    ("grid 4 2 1\n1..a\n.b..\nlabel a a\nlabel b b\n", "F (a & F b)"),
    ("grid 4 2 1\n1..a\n.b..\nlabel a a\nlabel b b\n", "!b U a"),
    ("grid 3 3 1\n1.a\n.#.\nb.c\nlabel a a\nlabel b b\nlabel c c\n", "G (F a & F b & !c)"),
    ("grid 3 3 1\n1.a\n.#.\nb..\nlabel a a\nlabel b b\n", "G (a -> X (!a U b)) & G F a"),
    ("grid 3 2 2\n1.a\n2.b\nlabel a a\nlabel b b\n", "G F a & G F b"),
    ("grid 3 2 2\n1.a\n2.b\nlabel a a\nlabel b b\n", "G F (a & b)"),
    ("grid 3 2 2\n1.a\n2.b\nlabel a a\nlabel b b\n", "G F (r1a & r2b)"),
    ("grid 3 2 2\n1.a\n2.b\nlabel a a\nlabel b b\n", "G F r2a"),
    ("grid 4 2 2\n1..a\n2..b\nlabel a a\nlabel b h\n", "G F a & G !h"),
]


@pytest.mark.parametrize("text,mission", ORACLE_CASES, ids=range(len(ORACLE_CASES)))
def test_matches_bruteforce_oracle(tmp_path, text, mission):
    ws = make_ws(tmp_path, text)
    ba = ltl_to_buchi(mission)
    expected = brute_optimal_suffix(ws, ba)
    run = baseline_solve(ws, ba)
    if expected is None:
        assert run is None
        return
    assert run is not None
    check_run_shape(run)
    assert (run.suffix_cost, run.prefix_cost) == expected


def test_deterministic(tmp_path):
    ws = make_ws(tmp_path, "grid 4 2 2\n1..a\n2..b\nlabel a a\nlabel b b\n")
    ba = ltl_to_buchi("G F a & G F b")
    r1 = baseline_solve(ws, ba)
    r2 = baseline_solve(ws, ba)
    assert r1.prefix == r2.prefix
    assert r1.suffix == r2.suffix
