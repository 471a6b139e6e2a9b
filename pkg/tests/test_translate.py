"""Automaton construction checked against fixpoint LTL semantics on lassos."""

import pytest
from hypothesis import given, settings, strategies as st

from ltlplan.ltl import ltl_to_buchi, normalize, parse_ltl
from ltlplan.ltl.formulas import (
    And,
    Always,
    Eventually,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    Until,
)

from oracles import all_lassos, eval_lasso

GOLDEN = [
    ("true", ["a"]),
    ("false", ["a"]),
    ("a", ["a"]),
    ("!a", ["a"]),
    ("X a", ["a"]),
    ("X X a", ["a"]),
    ("a U b", ["a", "b"]),
    ("F a", ["a"]),
    ("G a", ["a"]),
    ("G F a", ["a"]),
    ("F G a", ["a"]),
    ("G F a & G F b", ["a", "b"]),
    ("G (a -> X b)", ["a", "b"]),
    ("G (a -> X (!a U b))", ["a", "b"]),
    ("G (a -> X (!a U b)) & G F a", ["a", "b"]),
    ("a U (b U a)", ["a", "b"]),
    ("!(a U b)", ["a", "b"]),
    ("G (F a & F b & !c)", ["a", "b", "c"]),
    ("G F a & G (a -> b)", ["a", "b"]),
    ("(a | b) U c", ["a", "b", "c"]),
]


@pytest.mark.parametrize("text,props", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_language_matches_semantics(text, props):
    formula = parse_ltl(text)
    ba = ltl_to_buchi(formula)
    max_stem, max_loop = (2, 3) if len(props) <= 2 else (1, 2)
    for stem, loop in all_lassos(props, max_stem, max_loop):
        expected = eval_lasso(formula, stem, loop)
        got = ba.accepts_lasso(stem, loop)
        assert got == expected, f"{text} on {stem}+{loop}: automaton={got} semantics={expected}"


def test_true_accepts_everything_false_nothing():
    top = ltl_to_buchi("true")
    bot = ltl_to_buchi("false")
    for stem, loop in all_lassos(["a"], 1, 2):
        assert top.accepts_lasso(stem, loop)
        assert not bot.accepts_lasso(stem, loop)


def test_small_automata_sizes():
    assert ltl_to_buchi("F a").n_states == 2
    assert ltl_to_buchi("G a").n_states == 1
    assert ltl_to_buchi("G F a").n_states == 2
    assert ltl_to_buchi("a").n_states <= 3


def test_mission_formula_sizes_are_pinned():
    """Regression pins for the shipped mission formulas (known-good sizes)."""
    phi1 = (
        "G F gather & G (r1gather -> X (!r1gather U r1upload))"
        " & G (r2gather -> X (!r2gather U r2upload))"
    )
    phi2 = phi1 + " & G (gather -> (r1gather & r2gather))"
    phi5 = "G F gather1 & G F gather2 & G F gather3 & G F gather4"
    assert ltl_to_buchi(phi1).n_states == 12
    assert ltl_to_buchi(phi2).n_states == 5
    assert ltl_to_buchi(phi5).n_states == 5


def test_edge_conditions_are_literal_conjunctions():
    ba = ltl_to_buchi("G (a -> X (!a U b)) & G F a")
    for src, cond, dst in ba.edges:
        assert cond.pos.isdisjoint(cond.neg)
        assert 0 <= src < ba.n_states
        assert 0 <= dst < ba.n_states


def test_deterministic_output():
    text = "G F a & G (a -> X (!a U b))"
    b1 = ltl_to_buchi(text)
    b2 = ltl_to_buchi(text)
    assert b1.n_states == b2.n_states
    assert b1.edges == b2.edges
    assert b1.accepting == b2.accepting


def _formulas(depth):
    leaves = st.sampled_from([Prop("a"), Prop("b")])
    if depth == 0:
        return leaves
    sub = _formulas(depth - 1)
    return st.one_of(
        leaves,
        st.builds(Not, sub),
        st.builds(Next, sub),
        st.builds(Eventually, sub),
        st.builds(Always, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Until, sub, sub),
    )


_letters = st.sampled_from(
    [frozenset(), frozenset({"a"}), frozenset({"b"}), frozenset({"a", "b"})]
)


@settings(max_examples=120, deadline=None)
@given(
    formula=_formulas(2),
    stem=st.lists(_letters, max_size=3),
    loop=st.lists(_letters, min_size=1, max_size=3),
)
def test_random_formulas_match_semantics(formula, stem, loop):
    ba = ltl_to_buchi(formula)
    assert ba.accepts_lasso(stem, loop) == eval_lasso(formula, stem, loop)


@settings(max_examples=60, deadline=None)
@given(
    formula=_formulas(2),
    stem=st.lists(_letters, max_size=2),
    loop=st.lists(_letters, min_size=1, max_size=2),
)
def test_normalize_preserves_semantics(formula, stem, loop):
    assert eval_lasso(formula, stem, loop) == eval_lasso(
        normalize(formula), stem, loop
    )
