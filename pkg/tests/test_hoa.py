import pytest

from ltlplan.ltl import HOAError, export_hoa, import_hoa, ltl_to_buchi, make_condition

from oracles import all_lassos, eval_lasso
from ltlplan.ltl import parse_ltl


def test_round_trip_preserves_automaton():
    ba = ltl_to_buchi("G F a & G (a -> X (!a U b))")
    text = export_hoa(ba)
    back = import_hoa(text)
    assert back.n_states == ba.n_states
    assert back.initial == ba.initial
    assert back.accepting == ba.accepting
    assert back.ap == ba.ap
    assert set(back.edges) == set(ba.edges)


def test_round_trip_language(tmp_path):
    formula = parse_ltl("G (a -> X (!a U b)) & G F a")
    back = import_hoa(export_hoa(ltl_to_buchi(formula)))
    for stem, loop in all_lassos(["a", "b"], 2, 2):
        assert back.accepts_lasso(stem, loop) == eval_lasso(formula, stem, loop)


def test_export_format_shape():
    ba = ltl_to_buchi("F a")
    text = export_hoa(ba)
    lines = text.splitlines()
    assert lines[0] == "HOA: v1"
    assert "acc-name: Buchi" in lines
    assert "Acceptance: 1 Inf(0)" in lines
    assert "--BODY--" in lines
    assert lines[-1] == "--END--"
    assert text.endswith("\n")


def test_import_expands_disjunctive_labels():
    text = """HOA: v1
States: 2
Start: 0
AP: 2 "a" "b"
acc-name: Buchi
Acceptance: 1 Inf(0)
--BODY--
State: 0
[0 | !1] 1
[t] 0
State: 1 {0}
[0 & (1 | !0)] 1
--END--
"""
    ba = import_hoa(text)
    assert ba.n_states == 2
    assert ba.accepting == frozenset({1})
    out0 = {(c, d) for c, d in ba.edges_from(0)}
    assert (make_condition(pos=["a"]), 1) in out0
    assert (make_condition(neg=["b"]), 1) in out0
    assert (make_condition(), 0) in out0
    # (a & (b | !a)) has one satisfiable disjunct: a & b
    out1 = {(c, d) for c, d in ba.edges_from(1)}
    assert out1 == {(make_condition(pos=["a", "b"]), 1)}


HEADER = """HOA: v1
States: 1
Start: 0
AP: 1 "a"
"""


def test_import_rejects_generalized_acceptance():
    text = HEADER + "Acceptance: 2 Inf(0)&Inf(1)\n--BODY--\nState: 0 {0 1}\n[t] 0\n--END--\n"
    with pytest.raises(HOAError, match="acceptance"):
        import_hoa(text)


def test_import_rejects_transition_acceptance():
    text = HEADER + "Acceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n"
    with pytest.raises(HOAError, match="transition-based"):
        import_hoa(text)


def test_import_rejects_multiple_start():
    text = (
        "HOA: v1\nStates: 2\nStart: 0\nStart: 1\nAP: 1 \"a\"\n"
        "Acceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[t] 0\nState: 1\n--END--\n"
    )
    with pytest.raises(HOAError, match="Start"):
        import_hoa(text)


def test_import_rejects_aliases():
    text = (
        "HOA: v1\nStates: 1\nStart: 0\nAlias: @x 0\nAP: 1 \"a\"\n"
        "Acceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[@x] 0\n--END--\n"
    )
    with pytest.raises(HOAError, match="[Aa]lias"):
        import_hoa(text)


def test_import_rejects_implicit_labels():
    text = HEADER + "Acceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n0\n--END--\n"
    with pytest.raises(HOAError, match="implicit"):
        import_hoa(text)


def test_import_drops_contradictory_disjuncts():
    text = HEADER + "Acceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[0 & !0] 0\n[t] 0\n--END--\n"
    ba = import_hoa(text)
    assert len(ba.edges) == 1
