"""Transition conditions: conjunctions of positive and negated propositions.

Every automaton edge in this package carries one of these. General boolean
labels (as found in HOA files) are expanded into one edge per disjunct of
their DNF, so a single condition is always a pure conjunction of literals.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TransitionCondition:
    """A conjunction of literals over atomic propositions.

    pos: propositions that must hold, neg: propositions that must not.
    The two sets are disjoint by construction; an empty condition is "true".
    """

    pos: frozenset[str] = field(default_factory=frozenset)
    neg: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", frozenset(self.pos))
        object.__setattr__(self, "neg", frozenset(self.neg))
        overlap = self.pos & self.neg
        if overlap:
            msg = f"contradictory condition, {sorted(overlap)} both positive and negative"
            raise ValueError(msg)

    def __lt__(self, other: "TransitionCondition") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.pos)), tuple(sorted(self.neg)))

    @property
    def is_negative(self) -> bool:
        """True when the condition contains no positive literal.

        The empty ("true") condition counts as negative; it demands nothing.
        """
        return not self.pos

    @property
    def is_positive(self) -> bool:
        return bool(self.pos)

    def satisfied_by(self, labels: frozenset[str] | set[str]) -> bool:
        """Check the condition against a set of currently-true propositions."""
        return self.pos <= labels and not (self.neg & labels)

    def subsumes(self, other: "TransitionCondition") -> bool:
        """True when every label set satisfying `other` also satisfies self."""
        return self.pos <= other.pos and self.neg <= other.neg

    def __str__(self) -> str:
        parts = [p for p in sorted(self.pos)]
        parts += [f"!{p}" for p in sorted(self.neg)]
        return " & ".join(parts) if parts else "true"


TRUE_CONDITION = TransitionCondition(frozenset(), frozenset())


def make_condition(pos=(), neg=()) -> TransitionCondition:
    return TransitionCondition(frozenset(pos), frozenset(neg))
