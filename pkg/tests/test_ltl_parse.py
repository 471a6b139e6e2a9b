import pytest

from ltlplan.ltl import (
    Always,
    And,
    Eventually,
    FalseF,
    Implies,
    LTLError,
    Next,
    Not,
    Or,
    Prop,
    TrueF,
    Until,
    normalize,
    parse_ltl,
)

a, b, c = Prop("a"), Prop("b"), Prop("c")


def test_atoms():
    assert parse_ltl("true") == TrueF()
    assert parse_ltl("false") == FalseF()
    assert parse_ltl("a") == a
    assert parse_ltl("gather1") == Prop("gather1")
    # identifiers starting with an operator letter are plain propositions
    assert parse_ltl("Gather") == Prop("Gather")
    assert parse_ltl("Until1") == Prop("Until1")


def test_unary_operators_bind_tightest():
    assert parse_ltl("!a U b") == Until(Not(a), b)
    assert parse_ltl("X a U b") == Until(Next(a), b)
    assert parse_ltl("G F a") == Always(Eventually(a))
    assert parse_ltl("!!a") == Not(Not(a))


def test_until_right_associative_and_tighter_than_and():
    assert parse_ltl("a U b U c") == Until(a, Until(b, c))
    assert parse_ltl("a U b & c") == And(Until(a, b), c)
    assert parse_ltl("a & b U c") == And(a, Until(b, c))


def test_and_tighter_than_or_tighter_than_implies():
    assert parse_ltl("a & b | c") == Or(And(a, b), c)
    assert parse_ltl("a | b & c") == Or(a, And(b, c))
    assert parse_ltl("a | b -> c") == Implies(Or(a, b), c)
    assert parse_ltl("a -> b -> c") == Implies(a, Implies(b, c))


def test_parentheses():
    assert parse_ltl("a U (b U c)") == Until(a, Until(b, c))
    assert parse_ltl("(a U b) U c") == Until(Until(a, b), c)
    assert parse_ltl("G (a -> X b)") == Always(Implies(a, Next(b)))


def test_parse_keeps_sugar():
    f = parse_ltl("G (a -> F b)")
    assert isinstance(f, Always)
    assert isinstance(f.sub, Implies)
    assert isinstance(f.sub.right, Eventually)


def test_normalize_rewrites_to_core():
    assert normalize(parse_ltl("F a")) == Until(TrueF(), a)
    assert normalize(parse_ltl("G a")) == Not(Until(TrueF(), Not(a)))
    assert normalize(parse_ltl("a | b")) == Not(And(Not(a), Not(b)))
    assert normalize(parse_ltl("a -> b")) == Not(And(a, Not(b)))
    assert normalize(parse_ltl("false")) == Not(TrueF())
    assert normalize(parse_ltl("a U b")) == Until(a, b)


@pytest.mark.parametrize(
    "bad",
    ["", "a &", "& a", "(a", "a )", "a @ b", "U a", "a b", "G", "a U", "->"],
)
def test_parse_errors(bad):
    with pytest.raises(LTLError):
        parse_ltl(bad)
