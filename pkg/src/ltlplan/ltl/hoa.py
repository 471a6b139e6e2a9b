"""HOA v1 serialization for Büchi automata.

Only the fragment this package produces is supported on input: state-based
acceptance "Buchi" / "1 Inf(0)", a single initial state, explicit labels.
Anything else (generalized or transition-based acceptance, aliases, implicit
labels, multiple start states) is rejected with a clear error. Arbitrary
boolean label expressions are accepted and expanded into one edge per
disjunct of their disjunctive normal form.
"""

from __future__ import annotations

import re

from .buchi import BuchiAutomaton, Edge
from .conditions import TransitionCondition


class HOAError(ValueError):
    pass


def export_hoa(ba: BuchiAutomaton) -> str:
    lines = [
        "HOA: v1",
        f"States: {ba.n_states}",
        f"Start: {ba.initial}",
        "AP: {} {}".format(len(ba.ap), " ".join(f'"{p}"' for p in ba.ap)).rstrip(),
        "acc-name: Buchi",
        "Acceptance: 1 Inf(0)",
        "properties: trans-labels explicit-labels state-acc",
        "--BODY--",
    ]
    idx = {p: i for i, p in enumerate(ba.ap)}
    by_src: dict[int, list[tuple[TransitionCondition, int]]] = {}
    for s, c, d in ba.edges:
        by_src.setdefault(s, []).append((c, d))
    for q in range(ba.n_states):
        mark = " {0}" if q in ba.accepting else ""
        lines.append(f"State: {q}{mark}")
        for cond, dst in sorted(
            by_src.get(q, ()), key=lambda e: (e[0].sort_key(), e[1])
        ):
            lines.append(f"[{_format_label(cond, idx)}] {dst}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _format_label(cond: TransitionCondition, idx: dict[str, int]) -> str:
    parts = [str(idx[p]) for p in sorted(cond.pos, key=lambda p: idx[p])]
    parts += [f"!{idx[p]}" for p in sorted(cond.neg, key=lambda p: idx[p])]
    return "&".join(parts) if parts else "t"


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r'\s*("(?:[^"\\]|\\.)*"|[()!&|]|\d+|[tf])')


class _Expr:
    pass


class _Lit(_Expr):
    def __init__(self, index: int, positive: bool):
        self.index = index
        self.positive = positive


class _Bool(_Expr):
    def __init__(self, value: bool):
        self.value = value


class _BinOp(_Expr):
    def __init__(self, op: str, left: _Expr, right: _Expr):
        self.op = op
        self.left = left
        self.right = right


class _LabelParser:
    def __init__(self, text: str):
        self.tokens: list[str] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    msg = f"bad label syntax near {text[pos:]!r}"
                    raise HOAError(msg)
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise HOAError("unexpected end of label")
        self.pos += 1
        return tok

    def parse(self) -> _Expr:
        expr = self.parse_or()
        if self.peek() is not None:
            msg = f"trailing label tokens {self.tokens[self.pos:]}"
            raise HOAError(msg)
        return expr

    def parse_or(self) -> _Expr:
        left = self.parse_and()
        while self.peek() == "|":
            self.take()
            left = _BinOp("|", left, self.parse_and())
        return left

    def parse_and(self) -> _Expr:
        left = self.parse_unary()
        while self.peek() == "&":
            self.take()
            left = _BinOp("&", left, self.parse_unary())
        return left

    def parse_unary(self) -> _Expr:
        tok = self.take()
        if tok == "!":
            sub = self.parse_unary()
            return _negate(sub)
        if tok == "(":
            inner = self.parse_or()
            if self.take() != ")":
                raise HOAError("unbalanced parenthesis in label")
            return inner
        if tok == "t":
            return _Bool(True)
        if tok == "f":
            return _Bool(False)
        if tok.isdigit():
            return _Lit(int(tok), True)
        msg = f"unexpected label token {tok!r}"
        raise HOAError(msg)


def _negate(e: _Expr) -> _Expr:
    if isinstance(e, _Bool):
        return _Bool(not e.value)
    if isinstance(e, _Lit):
        return _Lit(e.index, not e.positive)
    if isinstance(e, _BinOp):
        flip = "|" if e.op == "&" else "&"
        return _BinOp(flip, _negate(e.left), _negate(e.right))
    raise HOAError("cannot negate label expression")


def _dnf(e: _Expr) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Expand to a list of (positive indices, negative indices) conjunctions.
    Contradictory conjuncts are dropped; an empty list means 'false'."""
    if isinstance(e, _Bool):
        return [(frozenset(), frozenset())] if e.value else []
    if isinstance(e, _Lit):
        if e.positive:
            return [(frozenset({e.index}), frozenset())]
        return [(frozenset(), frozenset({e.index}))]
    if isinstance(e, _BinOp):
        left = _dnf(e.left)
        right = _dnf(e.right)
        if e.op == "|":
            out = left + right
        else:
            out = []
            for lp, ln in left:
                for rp, rn in right:
                    pos, neg = lp | rp, ln | rn
                    if pos & neg:
                        continue
                    out.append((pos, neg))
        seen = []
        for item in out:
            if item not in seen:
                seen.append(item)
        return seen
    raise HOAError("unknown label expression")


def import_hoa(text: str) -> BuchiAutomaton:
    header: dict[str, list[str]] = {}
    lines = [ln.strip() for ln in text.splitlines()]
    body_at = None
    for i, ln in enumerate(lines):
        if ln == "--BODY--":
            body_at = i
            break
        if not ln or ln.startswith("/*"):
            continue
        if ":" not in ln:
            msg = f"malformed header line {ln!r}"
            raise HOAError(msg)
        key, _, value = ln.partition(":")
        header.setdefault(key.strip(), []).append(value.strip())
    if body_at is None:
        raise HOAError("missing --BODY-- marker")

    if header.get("HOA") != ["v1"]:
        raise HOAError("expected HOA: v1")
    if "Alias" in header:
        raise HOAError("aliases are not supported")
    starts = header.get("Start", [])
    if len(starts) != 1 or not starts[0].isdigit():
        raise HOAError("exactly one 'Start: <state>' is required")
    initial = int(starts[0])
    acceptance = " ".join(header.get("Acceptance", [""])[0].split())
    if acceptance != "1 Inf(0)":
        msg = f"unsupported acceptance {acceptance!r}; only state-based Buchi (1 Inf(0))"
        raise HOAError(msg)
    ap_line = header.get("AP", [None])[0]
    if ap_line is None:
        raise HOAError("missing AP header")
    ap_parts = re.findall(r'"((?:[^"\\]|\\.)*)"', ap_line)
    n_ap = int(ap_line.split()[0])
    if len(ap_parts) != n_ap:
        msg = f"AP count {n_ap} does not match {len(ap_parts)} names"
        raise HOAError(msg)
    ap = tuple(ap_parts)
    if "States" not in header:
        raise HOAError("missing States header")
    n_states = int(header["States"][0])

    edges: list[Edge] = []
    accepting: set[int] = set()
    current: int | None = None
    for ln in lines[body_at + 1 :]:
        if not ln:
            continue
        if ln == "--END--":
            break
        if ln.startswith("State:"):
            rest = ln[len("State:") :].strip()
            m = re.fullmatch(r"(\d+)\s*(?:\"[^\"]*\")?\s*(\{[^}]*\})?", rest)
            if m is None:
                msg = f"cannot parse state line {ln!r}"
                raise HOAError(msg)
            current = int(m.group(1))
            if current >= n_states:
                msg = f"state {current} out of range"
                raise HOAError(msg)
            if m.group(2):
                marks = m.group(2).strip("{} ").split()
                if marks and marks != ["0"]:
                    msg = f"unsupported acceptance marks {marks} (state {current})"
                    raise HOAError(msg)
                if marks:
                    accepting.add(current)
            continue
        if current is None:
            msg = f"edge line before any State: {ln!r}"
            raise HOAError(msg)
        m = re.fullmatch(r"\[([^\]]*)\]\s*(\d+)\s*(\{[^}]*\})?", ln)
        if m is None:
            msg = f"cannot parse edge line {ln!r} (implicit labels are unsupported)"
            raise HOAError(msg)
        if m.group(3) and m.group(3).strip("{} "):
            raise HOAError("transition-based acceptance is not supported")
        dst = int(m.group(2))
        if dst >= n_states:
            msg = f"edge target {dst} out of range"
            raise HOAError(msg)
        expr = _LabelParser(m.group(1)).parse()
        for pos_idx, neg_idx in _dnf(expr):
            for i in pos_idx | neg_idx:
                if i >= len(ap):
                    msg = f"AP index {i} out of range in label"
                    raise HOAError(msg)
            cond = TransitionCondition(
                frozenset(ap[i] for i in pos_idx),
                frozenset(ap[i] for i in neg_idx),
            )
            edges.append((current, cond, dst))

    if initial >= n_states:
        raise HOAError("initial state out of range")
    seen = set()
    deduped = []
    for e in edges:
        if e not in seen:
            seen.add(e)
            deduped.append(e)
    return BuchiAutomaton(
        n_states=n_states,
        initial=initial,
        accepting=frozenset(accepting),
        edges=tuple(deduped),
        ap=ap,
    )
