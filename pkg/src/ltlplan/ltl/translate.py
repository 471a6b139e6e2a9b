"""LTL to Büchi translation.

Pipeline: negation normal form -> on-the-fly tableau expansion into a
generalized Büchi automaton (one acceptance set per Until subformula) ->
counter-based degeneralization -> pruning of unreachable/dead states ->
bisimulation quotient -> edge subsumption.

States are renumbered in BFS discovery order at the end, so equal formulas
always yield byte-identical automata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .buchi import BuchiAutomaton, Edge
from .conditions import TransitionCondition
from .formulas import (
    And,
    Always,
    FalseF,
    Formula,
    Next,
    Not,
    Prop,
    Release,
    TrueF,
    Until,
    nnf,
    parse_ltl,
    propositions,
)

_INIT = -1


def _fkey(f: Formula) -> tuple[int, str]:
    s = str(f)
    return (len(s), s)


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _merge_always(f: Formula) -> Formula:
    """Rewrite G x & G y into G (x & y), recursively. Equivalence-preserving
    and keeps the tableau closure small for mission-style conjunctions."""
    if isinstance(f, And):
        parts = [_merge_always(c) for c in _conjuncts(f)]
        always = [p.sub for p in parts if isinstance(p, Always)]
        others = [p for p in parts if not isinstance(p, Always)]
        merged: list[Formula] = []
        if always:
            acc = always[0]
            for sub in always[1:]:
                acc = And(acc, sub)
            merged.append(Always(acc))
        merged.extend(others)
        out = merged[0]
        for p in merged[1:]:
            out = And(out, p)
        return out
    if isinstance(f, Always):
        return Always(_merge_always(f.sub))
    return f


@dataclass
class _Node:
    incoming: set[int]
    new: set[Formula]
    old: set[Formula]
    nxt: set[Formula]
    id: int = -1


def _untils(f: Formula, acc: set[Until]) -> None:
    if isinstance(f, Until):
        acc.add(f)
    for child in getattr(f, "__dict__", {}).values():
        if isinstance(child, Formula):
            _untils(child, acc)


def _expand(phi: Formula) -> list[_Node]:
    finished: dict[tuple[frozenset, frozenset], _Node] = {}
    order: list[_Node] = []
    worklist = [_Node(incoming={_INIT}, new={phi}, old=set(), nxt=set())]
    next_id = 0
    while worklist:
        nd = worklist.pop()
        if not nd.new:
            key = (frozenset(nd.old), frozenset(nd.nxt))
            hit = finished.get(key)
            if hit is not None:
                hit.incoming |= nd.incoming
                continue
            nd.id = next_id
            next_id += 1
            finished[key] = nd
            order.append(nd)
            worklist.append(
                _Node(incoming={nd.id}, new=set(nd.nxt), old=set(), nxt=set())
            )
            continue
        f = min(nd.new, key=_fkey)
        nd.new.discard(f)
        if isinstance(f, FalseF):
            continue
        if isinstance(f, TrueF):
            worklist.append(nd)
            continue
        if isinstance(f, Prop):
            if Not(f) in nd.old:
                continue
            nd.old.add(f)
            worklist.append(nd)
            continue
        if isinstance(f, Not):
            if f.sub in nd.old:
                continue
            nd.old.add(f)
            worklist.append(nd)
            continue
        nd.old.add(f)
        if isinstance(f, And):
            nd.new |= {f.left, f.right} - nd.old
            worklist.append(nd)
        elif isinstance(f, Next):
            nd.nxt.add(f.sub)
            worklist.append(nd)
        elif isinstance(f, Until):
            left = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.left} - nd.old),
                old=set(nd.old),
                nxt=nd.nxt | {f},
            )
            right = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.right} - nd.old),
                old=set(nd.old),
                nxt=set(nd.nxt),
            )
            worklist.append(left)
            worklist.append(right)
        elif isinstance(f, Release):
            left = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.right} - nd.old),
                old=set(nd.old),
                nxt=nd.nxt | {f},
            )
            right = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.left, f.right} - nd.old),
                old=set(nd.old),
                nxt=set(nd.nxt),
            )
            worklist.append(left)
            worklist.append(right)
        else:  # Or
            left = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.left} - nd.old),
                old=set(nd.old),
                nxt=set(nd.nxt),
            )
            right = _Node(
                incoming=set(nd.incoming),
                new=nd.new | ({f.right} - nd.old),
                old=set(nd.old),
                nxt=set(nd.nxt),
            )
            worklist.append(left)
            worklist.append(right)
    return order


def _node_condition(nd: _Node) -> TransitionCondition:
    pos = {f.name for f in nd.old if isinstance(f, Prop)}
    neg = {f.sub.name for f in nd.old if isinstance(f, Not) and isinstance(f.sub, Prop)}
    return TransitionCondition(frozenset(pos), frozenset(neg))


def ltl_to_buchi(formula: Formula | str) -> BuchiAutomaton:
    if isinstance(formula, str):
        formula = parse_ltl(formula)
    phi = nnf(_merge_always(formula))
    nodes = _expand(phi)

    untils: set[Until] = set()
    _untils(phi, untils)
    until_list = sorted(untils, key=_fkey)
    k = len(until_list)

    q0 = len(nodes)
    gba_edges: list[Edge] = []
    for nd in nodes:
        cond = _node_condition(nd)
        for src in sorted(nd.incoming):
            gba_edges.append((q0 if src == _INIT else src, cond, nd.id))

    acc_sets: list[frozenset[int]] = []
    for u in until_list:
        members = {nd.id for nd in nodes if u.right in nd.old or u not in nd.old}
        members.add(q0)
        acc_sets.append(frozenset(members))

    out: dict[int, list[tuple[TransitionCondition, int]]] = {}
    for src, cond, dst in gba_edges:
        out.setdefault(src, []).append((cond, dst))

    # counter degeneralization, building only reachable (state, counter) pairs
    def bump(base: int, target: int) -> int:
        j = base
        while j < k and target in acc_sets[j]:
            j += 1
        return j

    start = (q0, 0)
    index: dict[tuple[int, int], int] = {start: 0}
    ordered = [start]
    nba_edges: list[Edge] = []
    frontier = [start]
    while frontier:
        node = frontier.pop()
        q, i = node
        base = 0 if i == k else i
        for cond, t in out.get(q, ()):
            j = bump(base, t) if k else 0
            tgt = (t, j)
            if tgt not in index:
                index[tgt] = len(ordered)
                ordered.append(tgt)
                frontier.append(tgt)
            nba_edges.append((index[node], cond, index[tgt]))

    if k:
        accepting = frozenset(idx for (q, i), idx in index.items() if i == k)
    else:
        accepting = frozenset(index.values())

    ba = BuchiAutomaton(
        n_states=len(ordered),
        initial=0,
        accepting=accepting,
        edges=tuple(nba_edges),
        ap=tuple(sorted(propositions(phi))),
    )
    return reduce_automaton(ba)


def prune_automaton(ba: BuchiAutomaton) -> BuchiAutomaton:
    """Keep states that are reachable from the initial state and can reach an
    accepting cycle. The initial state is always kept."""
    n = ba.n_states
    if n == 0:
        return ba
    reach = set()
    stack = [ba.initial]
    while stack:
        q = stack.pop()
        if q in reach:
            continue
        reach.add(q)
        for _, dst in ba.edges_from(q):
            if dst not in reach:
                stack.append(dst)

    rows = [e[0] for e in ba.edges]
    cols = [e[2] for e in ba.edges]
    if rows:
        mat = csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
        )
        n_comp, comp = connected_components(mat, directed=True, connection="strong")
        comp_size = np.bincount(comp, minlength=n_comp)
        has_selfloop = np.zeros(n_comp, dtype=bool)
        for src, _, dst in ba.edges:
            if src == dst:
                has_selfloop[comp[src]] = True
        good_comp = {
            comp[q]
            for q in ba.accepting
            if q < n and (comp_size[comp[q]] > 1 or has_selfloop[comp[q]])
        }
        live = set()
        # backward closure over the edge list
        pending = {q for q in range(n) if comp[q] in good_comp}
        back: dict[int, set[int]] = {}
        for src, _, dst in ba.edges:
            back.setdefault(dst, set()).add(src)
        stack = list(pending)
        while stack:
            q = stack.pop()
            if q in live:
                continue
            live.add(q)
            for p in back.get(q, ()):
                if p not in live:
                    stack.append(p)
    else:
        live = set()

    keep = (reach & live) | {ba.initial}
    remap = {}
    for q in sorted(keep):
        remap[q] = len(remap)
    edges = tuple(
        (remap[s], c, remap[d]) for s, c, d in ba.edges if s in keep and d in keep
    )
    return BuchiAutomaton(
        n_states=len(keep),
        initial=remap[ba.initial],
        accepting=frozenset(remap[q] for q in ba.accepting if q in keep),
        edges=edges,
        ap=ba.ap,
    )


def _quotient(ba: BuchiAutomaton) -> BuchiAutomaton:
    """Direct-bisimulation quotient; merges states with identical behaviour."""
    n = ba.n_states
    block = [1 if q in ba.accepting else 0 for q in range(n)]
    while True:
        sigs: dict[tuple, int] = {}
        new_block = [0] * n
        for q in range(n):
            sig = (
                block[q],
                frozenset((cond, block[dst]) for cond, dst in ba.edges_from(q)),
            )
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[q] = sigs[sig]
        if new_block == block:
            break
        block = new_block

    n_blocks = max(block) + 1 if n else 0
    edges = sorted(
        {(block[s], c, block[d]) for s, c, d in ba.edges},
        key=lambda e: (e[0], e[1].sort_key(), e[2]),
    )
    return BuchiAutomaton(
        n_states=n_blocks,
        initial=block[ba.initial],
        accepting=frozenset(block[q] for q in ba.accepting),
        edges=tuple(edges),
        ap=ba.ap,
    )


def _subsume_edges(ba: BuchiAutomaton) -> BuchiAutomaton:
    grouped: dict[tuple[int, int], list[TransitionCondition]] = {}
    for s, c, d in ba.edges:
        grouped.setdefault((s, d), []).append(c)
    edges: list[Edge] = []
    for (s, d), conds in grouped.items():
        conds = sorted(set(conds), key=TransitionCondition.sort_key)
        kept = [
            c
            for i, c in enumerate(conds)
            if not any(o.subsumes(c) for o in conds[:i] + conds[i + 1 :] if o != c)
        ]
        # mutual subsumption is equality, already collapsed by the set()
        for c in kept:
            edges.append((s, c, d))
    edges.sort(key=lambda e: (e[0], e[1].sort_key(), e[2]))
    return BuchiAutomaton(
        n_states=ba.n_states,
        initial=ba.initial,
        accepting=ba.accepting,
        edges=tuple(edges),
        ap=ba.ap,
    )


def _renumber_bfs(ba: BuchiAutomaton) -> BuchiAutomaton:
    order: dict[int, int] = {ba.initial: 0}
    queue = [ba.initial]
    while queue:
        q = queue.pop(0)
        for cond, dst in sorted(
            ba.edges_from(q), key=lambda e: (e[0].sort_key(), e[1])
        ):
            if dst not in order:
                order[dst] = len(order)
                queue.append(dst)
    for q in range(ba.n_states):  # unreachable safety net
        if q not in order:
            order[q] = len(order)
    edges = sorted(
        ((order[s], c, order[d]) for s, c, d in ba.edges),
        key=lambda e: (e[0], e[1].sort_key(), e[2]),
    )
    return BuchiAutomaton(
        n_states=ba.n_states,
        initial=0,
        accepting=frozenset(order[q] for q in ba.accepting),
        edges=tuple(edges),
        ap=ba.ap,
    )


def reduce_automaton(ba: BuchiAutomaton) -> BuchiAutomaton:
    ba = prune_automaton(ba)
    while True:
        before = (ba.n_states, len(ba.edges))
        ba = _quotient(ba)
        ba = _subsume_edges(ba)
        ba = prune_automaton(ba)
        if (ba.n_states, len(ba.edges)) == before:
            break
    return _renumber_bfs(ba)
