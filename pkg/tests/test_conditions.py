import pytest

from ltlplan.ltl import TRUE_CONDITION, TransitionCondition, make_condition


def test_true_condition_is_negative_and_always_satisfied():
    assert TRUE_CONDITION.is_negative
    assert not TRUE_CONDITION.is_positive
    assert TRUE_CONDITION.satisfied_by(frozenset())
    assert TRUE_CONDITION.satisfied_by(frozenset({"a", "b"}))


def test_classification():
    assert make_condition(neg=["a", "b"]).is_negative
    assert make_condition(pos=["a"]).is_positive
    assert make_condition(pos=["a"], neg=["b"]).is_positive


def test_satisfied_by():
    c = make_condition(pos=["a"], neg=["b"])
    assert c.satisfied_by({"a"})
    assert c.satisfied_by({"a", "c"})
    assert not c.satisfied_by({"a", "b"})
    assert not c.satisfied_by({"c"})
    assert not c.satisfied_by(set())


def test_contradiction_rejected():
    with pytest.raises(ValueError):
        make_condition(pos=["a"], neg=["a"])


def test_subsumes():
    weak = make_condition(pos=["a"])
    strong = make_condition(pos=["a", "b"], neg=["c"])
    assert weak.subsumes(strong)
    assert not strong.subsumes(weak)
    assert TRUE_CONDITION.subsumes(weak)
    assert weak.subsumes(weak)


def test_ordering_is_deterministic():
    conds = [
        make_condition(pos=["b"]),
        make_condition(pos=["a"], neg=["b"]),
        make_condition(pos=["a"]),
        TRUE_CONDITION,
    ]
    ordered = sorted(conds)
    assert ordered[0] == TRUE_CONDITION
    assert ordered == sorted(reversed(conds))


def test_str_rendering():
    assert str(TRUE_CONDITION) == "true"
    assert str(make_condition(pos=["b", "a"], neg=["c"])) == "a & b & !c"
