"""Independent reference implementations used to check the package.

Everything here is deliberately brute-force: LTL semantics evaluated by
fixpoint iteration on ultimately periodic words, shortest accepting lassos
found by breadth-first search over explicit product graphs. Slow but obvious.
"""

from __future__ import annotations

import heapq
from itertools import product as iproduct

from ltlplan.ltl.formulas import (
    Always,
    And,
    Eventually,
    FalseF,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    Release,
    TrueF,
    Until,
)

Letter = frozenset[str]


def eval_lasso(f: Formula, stem: list[Letter], loop: list[Letter]) -> bool:
    """Does stem . loop^omega satisfy f at position 0? Fixpoint semantics."""
    word = list(stem) + list(loop)
    n = len(word)
    loop_start = len(stem)

    def succ(i: int) -> int:
        return i + 1 if i + 1 < n else loop_start

    def ev(g: Formula) -> set[int]:
        if isinstance(g, TrueF):
            return set(range(n))
        if isinstance(g, FalseF):
            return set()
        if isinstance(g, Prop):
            return {i for i in range(n) if g.name in word[i]}
        if isinstance(g, Not):
            return set(range(n)) - ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Implies):
            return (set(range(n)) - ev(g.left)) | ev(g.right)
        if isinstance(g, Next):
            sub = ev(g.sub)
            return {i for i in range(n) if succ(i) in sub}
        if isinstance(g, Until):
            a, b = ev(g.left), ev(g.right)
            s = set(b)
            while True:
                s2 = b | {i for i in a if succ(i) in s}
                if s2 == s:
                    return s
                s = s2
        if isinstance(g, Release):
            # nu-fixpoint: greatest s with s = b & (a | X s)
            a, b = ev(g.left), ev(g.right)
            s = set(b)
            while True:
                s2 = {i for i in b if i in a or succ(i) in s}
                if s2 == s:
                    return s
                s = s2
        if isinstance(g, Eventually):
            return ev(Until(TrueF(), g.sub))
        if isinstance(g, Always):
            return ev(Release(FalseF(), g.sub))
        msg = f"unhandled node {type(g).__name__}"
        raise TypeError(msg)

    return 0 in ev(f)


def all_letters(props: list[str]) -> list[Letter]:
    out = []
    for mask in range(2 ** len(props)):
        out.append(frozenset(p for i, p in enumerate(props) if mask >> i & 1))
    return out


def all_lassos(props: list[str], max_stem: int, max_loop: int):
    letters = all_letters(props)
    for stem_len in range(max_stem + 1):
        for loop_len in range(1, max_loop + 1):
            for stem in iproduct(letters, repeat=stem_len):
                for loop in iproduct(letters, repeat=loop_len):
                    yield list(stem), list(loop)


# --- brute-force optimal lasso over an explicit product -----------------


def joint_states(ws):
    cells = ws.free_cells()
    return list(iproduct(cells, repeat=ws.n_robots))


def product_edges(ws, ba):
    """Explicit (s,q) -> (s',q') edge list with true move costs."""
    edges = {}
    for s in joint_states(ws):
        moves = list(iproduct(*(ws.neighbours(c) for c in s)))
        for q in range(ba.n_states):
            out = []
            for s2 in moves:
                cost = sum(1 for a, b in zip(s, s2) if a != b)
                labels = ws.joint_labels(s2)
                for cond, q2 in ba.edges_from(q):
                    if cond.satisfied_by(labels):
                        out.append(((s2, q2), cost))
            edges[(s, q)] = out
    return edges


def dijkstra(edges, sources):
    dist = {}
    heap = []
    for s in sources:
        dist[s] = 0
        heap.append((0, s))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for v, w in edges.get(u, ()):
            nd = d + w
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def brute_optimal_suffix(ws, ba):
    """Minimal suffix cost over all reachable accepting lassos, or None.

    Returns (suffix_cost, prefix_cost) minimized lexicographically by
    (suffix, prefix), the same objective the planners use.
    """
    edges = product_edges(ws, ba)
    init = (tuple(ws.starts), ba.initial)
    dist0 = dijkstra(edges, [init])
    best = None
    for f in edges:
        if f[1] not in ba.accepting or f not in dist0:
            continue
        distf = dijkstra(edges, [f])
        cyc = None
        # cycle through f: shortest f -> u plus one closing edge u -> f
        for u, out in edges.items():
            if u not in distf:
                continue
            for v, w in out:
                if v == f:
                    c = distf[u] + w
                    if cyc is None or c < cyc:
                        cyc = c
        if cyc is None:
            continue
        cand = (cyc, dist0[f])
        if best is None or cand < best:
            best = cand
    return best
