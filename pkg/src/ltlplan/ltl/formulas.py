"""LTL abstract syntax, parser and normal forms.

Surface syntax:

    phi ::= "true" | "false" | <prop>
          | "!" phi | "X" phi | "G" phi | "F" phi
          | phi "U" phi | phi "&" phi | phi "|" phi | phi "->" phi
          | "(" phi ")"

Propositions match [A-Za-z][A-Za-z0-9]*; the operator names G, F, X, U and
the constants true/false are reserved. Unary operators bind tightest, then
U (right-associative), then &, then |, then -> (right-associative).

parse_ltl keeps the sugared operators in the tree; normalize() rewrites a
formula into the core fragment {true, prop, Not, And, Next, Until} and nnf()
into negation normal form over {tt, ff, literals, And, Or, Next, Until,
Release} as used by the automaton construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class LTLError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:  # pragma: no cover - overridden everywhere
        raise NotImplementedError


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseF(Formula):
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Prop(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula

    def __str__(self) -> str:
        return f"!{_wrap(self.sub)}"


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula

    def __str__(self) -> str:
        return f"X{_wrap(self.sub)}"


@dataclass(frozen=True)
class Always(Formula):
    sub: Formula

    def __str__(self) -> str:
        return f"G{_wrap(self.sub)}"


@dataclass(frozen=True)
class Eventually(Formula):
    sub: Formula

    def __str__(self) -> str:
        return f"F{_wrap(self.sub)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} U {self.right})"


@dataclass(frozen=True)
class Release(Formula):
    """Dual of Until; produced by nnf(), never by the parser."""

    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} R {self.right})"


def _wrap(f: Formula) -> str:
    if isinstance(f, (TrueF, FalseF, Prop, Not, Next, Always, Eventually)):
        return str(f)
    return f"({f})"


_TOKEN_RE = re.compile(r"\s*(->|[()!&|]|[A-Za-z][A-Za-z0-9]*)")
_RESERVED = {"G", "F", "X", "U", "true", "false"}


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            msg = f"unexpected character {rest[0]!r} at position {pos}"
            raise LTLError(msg)
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise LTLError("unexpected end of formula")
        self.pos += 1
        return tok

    # precedence climbing: -> | & U unary
    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            right = self.parse_implies()
            return Implies(left, right)
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.peek() == "&":
            self.take()
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek() == "U":
            self.take()
            right = self.parse_until()
            return Until(left, right)
        return left

    def parse_unary(self) -> Formula:
        tok = self.take()
        if tok == "!":
            return Not(self.parse_unary())
        if tok == "X":
            return Next(self.parse_unary())
        if tok == "G":
            return Always(self.parse_unary())
        if tok == "F":
            return Eventually(self.parse_unary())
        if tok == "(":
            inner = self.parse_implies()
            closing = self.take()
            if closing != ")":
                msg = f"expected ')', got {closing!r}"
                raise LTLError(msg)
            return inner
        if tok == "true":
            return TrueF()
        if tok == "false":
            return FalseF()
        if tok in _RESERVED or not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", tok):
            msg = f"unexpected token {tok!r}"
            raise LTLError(msg)
        return Prop(tok)


def parse_ltl(text: str) -> Formula:
    tokens = _tokenize(text)
    if not tokens:
        raise LTLError("empty formula")
    parser = _Parser(tokens)
    result = parser.parse_implies()
    leftover = parser.peek()
    if leftover is not None:
        msg = f"trailing input starting at {leftover!r}"
        raise LTLError(msg)
    return result


def normalize(f: Formula) -> Formula:
    """Rewrite into the core fragment {true, prop, Not, And, Next, Until}."""
    if isinstance(f, (TrueF, Prop)):
        return f
    if isinstance(f, FalseF):
        return Not(TrueF())
    if isinstance(f, Not):
        return Not(normalize(f.sub))
    if isinstance(f, Next):
        return Next(normalize(f.sub))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Not(And(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Not(And(normalize(f.left), Not(normalize(f.right))))
    if isinstance(f, Until):
        return Until(normalize(f.left), normalize(f.right))
    if isinstance(f, Eventually):
        return Until(TrueF(), normalize(f.sub))
    if isinstance(f, Always):
        return Not(Until(TrueF(), Not(normalize(f.sub))))
    if isinstance(f, Release):
        return Not(Until(Not(normalize(f.left)), Not(normalize(f.right))))
    msg = f"cannot normalize {type(f).__name__}"
    raise LTLError(msg)


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form over {TrueF, FalseF, Prop, Not(Prop), And, Or,
    Next, Until, Release}. Negations end up only on propositions."""
    if isinstance(f, TrueF):
        return FalseF() if negate else f
    if isinstance(f, FalseF):
        return TrueF() if negate else f
    if isinstance(f, Prop):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.sub, not negate)
    if isinstance(f, Next):
        return Next(nnf(f.sub, negate))
    if isinstance(f, And):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return Or(a, b) if negate else And(a, b)
    if isinstance(f, Or):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return And(a, b) if negate else Or(a, b)
    if isinstance(f, Implies):
        return nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Until):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return Release(a, b) if negate else Until(a, b)
    if isinstance(f, Release):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return Until(a, b) if negate else Release(a, b)
    if isinstance(f, Eventually):
        return nnf(Until(TrueF(), f.sub), negate)
    if isinstance(f, Always):
        return nnf(Release(FalseF(), f.sub), negate)
    msg = f"cannot convert {type(f).__name__} to nnf"
    raise LTLError(msg)


def propositions(f: Formula) -> frozenset[str]:
    if isinstance(f, Prop):
        return frozenset({f.name})
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, (Not, Next, Always, Eventually)):
        return propositions(f.sub)
    if isinstance(f, (And, Or, Implies, Until, Release)):
        return propositions(f.left) | propositions(f.right)
    msg = f"unknown formula node {type(f).__name__}"
    raise LTLError(msg)
