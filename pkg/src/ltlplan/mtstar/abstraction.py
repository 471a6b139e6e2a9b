"""Reduced-graph abstraction over the joint configuration space.

A product search touches every placement of every robot. The reduced graph
keeps only placements that witness an automaton transition: each positive
literal of a transition condition is assigned to one robot pinned at one
cell satisfying it, and every other robot is left as a wildcard carrying
the transition's negative literals as arrival obligations. Edges record
whether the hop must happen in one joint step (source state has no purely
negative self-loop to dwell on) or may take any number of steps under a
dwell condition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product as iproduct

from ..ltl.buchi import BuchiAutomaton
from ..ltl.conditions import TransitionCondition
from ..workspace import Cell, GridWorkspace

__all__ = [
    "AbstractNode",
    "ReducedEdge",
    "ReducedGraph",
    "realize_edge",
    "concretizations",
    "generate_reduced_graph",
    "simple_cycles_through",
    "simple_paths_between",
]


@dataclass(frozen=True)
class AbstractNode:
    """Pinned cells, wildcard obligations and an automaton state.

    cells[i] is None for a wildcard robot. obligations[i] lists propositions
    robot i must not produce at its arrival cell; it is non-empty only for
    wildcards, pinned cells are validated against the negatives when the
    node is realized.
    """

    cells: tuple[Cell | None, ...]
    q: int
    obligations: tuple[frozenset[str], ...]

    def known(self) -> bool:
        return all(c is not None for c in self.cells)

    def __str__(self) -> str:
        parts = []
        for c, ob in zip(self.cells, self.obligations):
            if c is None:
                parts.append("*" + ("!" + ",".join(sorted(ob)) if ob else ""))
            else:
                parts.append(f"({c[0]},{c[1]})")
        return "<" + " ".join(parts) + f">@q{self.q}"


@dataclass(frozen=True)
class ReducedEdge:
    """One hop of the reduced graph.

    single_step edges must be taken in exactly one joint move. Multi-step
    edges carry dwell[i], the propositions robot i must avoid on every cell
    it crosses strictly between the two endpoint configurations.
    """

    src: int
    dst: int
    single_step: bool
    dwell: tuple[frozenset[str], ...] | None
    cond: TransitionCondition


@dataclass
class ReducedGraph:
    ws: GridWorkspace
    ba: BuchiAutomaton
    nodes: list[AbstractNode]
    edges: list[ReducedEdge]
    out: list[list[int]]
    index: dict[AbstractNode, int]
    init: int
    accepting: list[int]
    # planner scratch: (edge index, robot) -> completion segment
    _segments: dict = field(default_factory=dict, repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


class _Realizer:
    """Realizes transition conditions into abstract nodes, with caches."""

    def __init__(self, ws: GridWorkspace):
        self.ws = ws
        self.free = tuple(ws.free_cells())
        self._producible: dict[tuple[int, str], bool] = {}
        self._oblig: dict[tuple[int, frozenset[str]], frozenset[str]] = {}
        self._cells: dict[tuple[int, frozenset[str], frozenset[str]], tuple[Cell, ...]] = {}
        self._realized: dict[tuple[TransitionCondition, int], tuple[AbstractNode, ...]] = {}

    def producible(self, robot: int, prop: str) -> bool:
        key = (robot, prop)
        got = self._producible.get(key)
        if got is None:
            got = any(prop in self.ws.robot_labels(robot, c) for c in self.free)
            self._producible[key] = got
        return got

    def obligations(self, robot: int, neg: frozenset[str]) -> frozenset[str]:
        # negatives nobody can violate are dropped, keeping nodes canonical
        key = (robot, neg)
        got = self._oblig.get(key)
        if got is None:
            got = frozenset(p for p in neg if self.producible(robot, p))
            self._oblig[key] = got
        return got

    def cells_for(self, robot: int, props: frozenset[str], neg: frozenset[str]) -> tuple[Cell, ...]:
        """Free cells where the robot produces all of props and none of neg."""
        key = (robot, props, neg)
        got = self._cells.get(key)
        if got is None:
            out = []
            for c in self.free:
                labels = self.ws.robot_labels(robot, c)
                if props <= labels and labels.isdisjoint(neg):
                    out.append(c)
            got = tuple(out)
            self._cells[key] = got
        return got

    def realize(self, cond: TransitionCondition, q_dst: int) -> tuple[AbstractNode, ...]:
        key = (cond, q_dst)
        got = self._realized.get(key)
        if got is None:
            got = tuple(self._realize(cond, q_dst))
            self._realized[key] = got
        return got

    def _realize(self, cond: TransitionCondition, q_dst: int) -> list[AbstractNode]:
        n = self.ws.n_robots
        pos = sorted(cond.pos)
        if not pos:
            oblig = tuple(self.obligations(i, cond.neg) for i in range(n))
            return [AbstractNode((None,) * n, q_dst, oblig)]
        robot_choices = []
        for p in pos:
            rs = [i for i in range(n) if self.producible(i, p)]
            if not rs:
                return []
            robot_choices.append(rs)
        out: list[AbstractNode] = []
        seen: set[AbstractNode] = set()
        for assign in iproduct(*robot_choices):
            duty: dict[int, set[str]] = {}
            for p, r in zip(pos, assign):
                duty.setdefault(r, set()).add(p)
            pinned: list[tuple[int, tuple[Cell, ...]]] = []
            feasible = True
            for r in sorted(duty):
                cand = self.cells_for(r, frozenset(duty[r]), cond.neg)
                if not cand:
                    feasible = False
                    break
                pinned.append((r, cand))
            if not feasible:
                continue
            for combo in iproduct(*(cand for _, cand in pinned)):
                cells: list[Cell | None] = [None] * n
                for (r, _), c in zip(pinned, combo):
                    cells[r] = c
                oblig = tuple(
                    frozenset() if cells[i] is not None else self.obligations(i, cond.neg)
                    for i in range(n)
                )
                node = AbstractNode(tuple(cells), q_dst, oblig)
                if node not in seen:
                    seen.add(node)
                    out.append(node)
        return out


def realize_edge(ws: GridWorkspace, cond: TransitionCondition, q_dst: int) -> list[AbstractNode]:
    """All abstract arrival configurations witnessing `cond`, canonical order.

    Every assignment of the positive literals to robots is enumerated
    (several literals may land on one robot only if a single cell satisfies
    them all), pinned cells are checked against the negative literals, and
    wildcard robots keep the negatives they could actually violate as
    obligations. An empty list means the transition can never be taken.
    """
    return list(_Realizer(ws).realize(cond, q_dst))


def concretizations(ws: GridWorkspace, node: AbstractNode) -> int:
    """Number of joint placements the abstract node stands for."""
    free = ws.free_cells()
    total = 1
    for i, c in enumerate(node.cells):
        if c is not None:
            continue
        ob = node.obligations[i]
        total *= sum(1 for cell in free if ws.robot_labels(i, cell).isdisjoint(ob))
    return total


def _joint_adjacent(ws: GridWorkspace, a: tuple[Cell, ...], b: tuple[Cell, ...]) -> bool:
    return all(bc in ws.neighbours(ac) for ac, bc in zip(a, b))


def _pointwise_le(a: tuple[frozenset[str], ...], b: tuple[frozenset[str], ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _prune_dominated(
    nodes: list[AbstractNode], edges: list[ReducedEdge], init: int
) -> tuple[set[int], list[ReducedEdge]]:
    """Drop nodes another node makes redundant.

    B is redundant when some A shares its pins and automaton state, obliges
    pointwise no more, and every in-edge of B has a matching in-edge into A.
    Out-edges depend only on the automaton state and the pins, so any
    completion through B maps to one through A at equal or lower cost.
    """
    alive = set(range(len(nodes)))
    while True:
        in_keys: dict[int, set] = {i: set() for i in alive}
        for e in edges:
            in_keys[e.dst].add((e.src, e.single_step, e.dwell))
        groups: dict[tuple, list[int]] = {}
        for i in sorted(alive):
            n = nodes[i]
            groups.setdefault((n.cells, n.q), []).append(i)
        dropped: set[int] = set()
        for members in groups.values():
            if len(members) < 2:
                continue
            for b in members:
                if b == init or b in dropped:
                    continue
                for a in members:
                    if a == b or a in dropped:
                        continue
                    if (
                        nodes[a].obligations != nodes[b].obligations
                        and _pointwise_le(nodes[a].obligations, nodes[b].obligations)
                        and in_keys[b] <= in_keys[a]
                    ):
                        dropped.add(b)
                        break
        if not dropped:
            return alive, edges
        alive -= dropped
        edges = [e for e in edges if e.src in alive and e.dst in alive]


def generate_reduced_graph(ws: GridWorkspace, ba: BuchiAutomaton, prune: bool = True) -> ReducedGraph:
    """Build the reduced graph reachable from the start configuration.

    Unrealizable transitions vanish; single-step edges between two fully
    pinned configurations that are not one joint move apart are elided.
    With prune=True, dominated wildcard variants (same pins and state,
    strictly heavier obligations, no extra in-edges) are removed.
    """
    real = _Realizer(ws)
    n = ws.n_robots
    init_node = AbstractNode(tuple(ws.starts), ba.initial, (frozenset(),) * n)
    nodes: list[AbstractNode] = [init_node]
    index: dict[AbstractNode, int] = {init_node: 0}
    edges: list[ReducedEdge] = []
    edge_seen: set[tuple] = set()

    dwell_cache: dict[int, tuple[tuple[frozenset[str], ...], ...]] = {}

    def dwell_options(q: int) -> tuple[tuple[frozenset[str], ...], ...]:
        got = dwell_cache.get(q)
        if got is None:
            opts: list[tuple[frozenset[str], ...]] = []
            for c in ba.negative_selfloops(q):
                o = tuple(real.obligations(i, c.neg) for i in range(n))
                if o not in opts:
                    opts.append(o)
            # a pointwise weaker dwell permits every path a heavier one does
            kept = tuple(
                o for o in opts
                if not any(p is not o and _pointwise_le(p, o) for p in opts)
            )
            dwell_cache[q] = kept
            got = kept
        return got

    work = deque([0])
    while work:
        si = work.popleft()
        node = nodes[si]
        dwells = dwell_options(node.q)
        for cond, q2 in ba.edges_from(node.q):
            for tgt in real.realize(cond, q2):
                ti = index.get(tgt)
                if ti is None:
                    ti = len(nodes)
                    index[tgt] = ti
                    nodes.append(tgt)
                    work.append(ti)
                if dwells:
                    for dw in dwells:
                        key = (si, ti, False, dw)
                        if key not in edge_seen:
                            edge_seen.add(key)
                            edges.append(ReducedEdge(si, ti, False, dw, cond))
                else:
                    if (
                        node.known()
                        and tgt.known()
                        and not _joint_adjacent(ws, node.cells, tgt.cells)
                    ):
                        continue
                    key = (si, ti, True, None)
                    if key not in edge_seen:
                        edge_seen.add(key)
                        edges.append(ReducedEdge(si, ti, True, None, cond))

    if prune:
        alive, edges = _prune_dominated(nodes, edges, 0)
        adj: dict[int, list[int]] = {i: [] for i in alive}
        for e in edges:
            adj[e.src].append(e.dst)
        seen = {0}
        queue = deque([0])
        while queue:
            for d in adj[queue.popleft()]:
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        edges = [e for e in edges if e.src in seen and e.dst in seen]
        order = sorted(seen)
        remap = {old: new for new, old in enumerate(order)}
        nodes = [nodes[o] for o in order]
        edges = [
            ReducedEdge(remap[e.src], remap[e.dst], e.single_step, e.dwell, e.cond)
            for e in edges
        ]
        index = {nd: i for i, nd in enumerate(nodes)}

    out: list[list[int]] = [[] for _ in nodes]
    for ei, e in enumerate(edges):
        out[e.src].append(ei)
    accepting = [
        i for i, nd in enumerate(nodes) if nd.q in ba.accepting and i != 0
    ]
    return ReducedGraph(ws, ba, nodes, edges, out, index, 0, accepting)


def simple_cycles_through(
    G: ReducedGraph, anchor: int, cap: int = 50000, blocked: frozenset[int] = frozenset()
) -> tuple[list[tuple[int, ...]], bool]:
    """Node-simple cycles through `anchor`, as tuples of edge indices.

    Depth-first in edge creation order; parallel edges yield distinct
    cycles. Enumeration stops after `cap` cycles and reports truncation.
    """
    if anchor in blocked:
        return [], False
    edges = G.edges
    cycles: list[tuple[int, ...]] = []
    visited = {anchor}
    path: list[int] = []
    iters = [iter(G.out[anchor])]
    truncated = False
    while iters:
        ei = next(iters[-1], None)
        if ei is None:
            iters.pop()
            if path:
                visited.discard(edges[path.pop()].dst)
            continue
        dst = edges[ei].dst
        if dst == anchor:
            cycles.append(tuple(path) + (ei,))
            if len(cycles) >= cap:
                truncated = True
                break
        elif dst not in visited and dst not in blocked:
            visited.add(dst)
            path.append(ei)
            iters.append(iter(G.out[dst]))
    return cycles, truncated


def simple_paths_between(
    G: ReducedGraph, src: int, dst: int, cap: int = 10000
) -> tuple[list[tuple[int, ...]], bool]:
    """Node-simple edge paths src -> dst, depth-first, capped."""
    if src == dst:
        return [()], False
    edges = G.edges
    paths: list[tuple[int, ...]] = []
    visited = {src}
    path: list[int] = []
    iters = [iter(G.out[src])]
    truncated = False
    while iters:
        ei = next(iters[-1], None)
        if ei is None:
            iters.pop()
            if path:
                visited.discard(edges[path.pop()].dst)
            continue
        d = edges[ei].dst
        if d == dst:
            paths.append(tuple(path) + (ei,))
            if len(paths) >= cap:
                truncated = True
                break
        elif d not in visited:
            visited.add(d)
            path.append(ei)
            iters.append(iter(G.out[d]))
    return paths, truncated
