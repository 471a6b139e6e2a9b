"""Mission planner over the reduced graph.

Cycles through accepting abstract configurations are searched best-first:
partial paths are ordered by an admissible bound (per robot, free-grid
distance between consecutive pinned cells, plus the wrap back to the first
pin when a cycle closes, stretched through any station the automaton still
obliges that robot to visit), and closing candidates are priced exactly by
the per-robot gap completion. The cheapest completed suffix wins, ties
broken on prefix cost, then on discovery order. Completions are memoized;
the memo changes timing only, never results.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..ltl.buchi import BuchiAutomaton
from ..ltl.conditions import make_condition
from ..product import ProductState, Run, path_cost
from ..workspace import Cell, GridWorkspace
from .abstraction import (
    AbstractNode,
    ReducedGraph,
    generate_reduced_graph,
)
from .completion import (
    MemoCache,
    Segment,
    pad_segment,
    solve_gap,
    solve_gap_exact,
)

__all__ = ["mtstar_solve", "PlanStats"]

DEFAULT_CYCLE_BUDGET = 200000
DEFAULT_PATH_BUDGET = 50000
DEFAULT_TIE_CAP = 128

# Until a first cycle completes, expansion sites with at most this many
# out-edges price children exactly at push time, which keeps the frontier
# tight; denser sites, and every site once an incumbent bounds the search,
# defer pricing until a child surfaces so a single expansion stays cheap.
_EAGER_DEGREE_LIMIT = 64


@dataclass
class PlanStats:
    n_nodes: int = 0
    n_edges: int = 0
    n_accepting: int = 0
    cycles_evaluated: int = 0
    cycles_feasible: int = 0
    cycles_truncated: bool = False
    prefixes_evaluated: int = 0
    prefixes_truncated: bool = False
    cache_hits: int = 0
    cache_misses: int = 0


def _segment_for(G: ReducedGraph, edge_idx: int, robot: int) -> Segment:
    seg = G._segments.get((edge_idx, robot))
    if seg is None:
        e = G.edges[edge_idx]
        tgt = G.nodes[e.dst]
        pin = tgt.cells[robot]
        seg = Segment(
            single_step=e.single_step,
            forbidden=e.dwell[robot] if e.dwell is not None else frozenset(),
            arrival=(pin,) if pin is not None else None,
            arrival_forbidden=tgt.obligations[robot],
        )
        G._segments[(edge_idx, robot)] = seg
    return seg


@dataclass
class _Gap:
    positions: tuple[int, ...]  # cycle/path edge positions covered, traversal order
    start_cell: Cell
    segments: tuple[Segment, ...]


def _solve_gaps(
    ws: GridWorkspace,
    gaps: list[_Gap],
    robot: int,
    cache: MemoCache | None,
) -> dict[int, tuple[Cell, tuple[Cell, ...]]] | None:
    """Free completion of every gap; returns position -> (start cell, path)."""
    by_pos: dict[int, tuple[Cell, tuple[Cell, ...]]] = {}
    for gap in gaps:
        res = solve_gap(ws, robot, gap.start_cell, gap.segments, cache)
        if res is None:
            return None
        cell = gap.start_cell
        for pos, path in zip(gap.positions, res.seg_paths):
            by_pos[pos] = (cell, path)
            cell = path[-1]
    return by_pos


def _synchronize(
    ws: GridWorkspace,
    robot_gaps: dict[int, list[_Gap]],
    robot_paths: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]],
    n_positions: int,
    cache: MemoCache | None,
) -> tuple[tuple[int, ...], dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]]] | None:
    """Pad every robot's segments to shared per-position lengths.

    Single-step positions are one move for everyone by construction. When a
    path cannot absorb its stays legally, its whole gap is re-solved with
    the lengths forced exactly; if even that fails the candidate dies.
    """
    lengths = [1] * n_positions
    for paths in robot_paths.values():
        for pos, (_, path) in paths.items():
            lengths[pos] = max(lengths[pos], len(path))
    L = tuple(lengths)

    out: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]] = {}
    for robot, paths in robot_paths.items():
        padded: dict[int, tuple[Cell, tuple[Cell, ...]]] = {}
        redo: list[_Gap] = []
        gap_of: dict[int, _Gap] = {}
        for gap in robot_gaps[robot]:
            for pos in gap.positions:
                gap_of[pos] = gap
        for pos, (start, path) in paths.items():
            if len(path) == L[pos]:
                padded[pos] = (start, path)
                continue
            seg_idx = gap_of[pos].positions.index(pos)
            seg = gap_of[pos].segments[seg_idx]
            stretched = pad_segment(ws, robot, seg, start, path, L[pos])
            if stretched is None:
                if gap_of[pos] not in redo:
                    redo.append(gap_of[pos])
            else:
                padded[pos] = (start, stretched)
        for gap in redo:
            exact = solve_gap_exact(
                ws,
                robot,
                gap.start_cell,
                gap.segments,
                tuple(L[p] for p in gap.positions),
                cache,
            )
            if exact is None:
                return None
            cell = gap.start_cell
            for pos, path in zip(gap.positions, exact.seg_paths):
                padded[pos] = (cell, path)
                cell = path[-1]
        out[robot] = padded
    return L, out


def _moves(start: Cell, path: tuple[Cell, ...]) -> int:
    total = 0
    prev = start
    for c in path:
        if c != prev:
            total += 1
        prev = c
    return total


@dataclass
class _SuffixCore:
    cycle: tuple[int, ...]
    nodes_seq: list[int]  # node index at each position, length k
    lengths: tuple[int, ...]
    paths: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]]  # robot -> pos -> (start, path)
    anchor_cells: list[Cell | None]  # None for idle robots until parked
    parking: dict[int, tuple[Cell, ...]]
    cost: int


def _complete_suffix(
    ws: GridWorkspace, G: ReducedGraph, cycle: tuple[int, ...], cache: MemoCache | None
) -> _SuffixCore | None:
    k = len(cycle)
    edges = [G.edges[e] for e in cycle]
    nodes_seq = [e.src for e in edges]
    n = ws.n_robots

    robot_gaps: dict[int, list[_Gap]] = {}
    robot_free: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]] = {}
    parking: dict[int, tuple[Cell, ...]] = {}
    for robot in range(n):
        anchors = [
            j for j in range(k) if G.nodes[nodes_seq[j]].cells[robot] is not None
        ]
        if not anchors:
            forbidden: set[str] = set()
            for j in range(k):
                forbidden |= G.nodes[nodes_seq[j]].obligations[robot]
                dw = edges[j].dwell
                if dw is not None:
                    forbidden |= dw[robot]
            spots = tuple(
                c
                for c in ws.free_cells()
                if ws.robot_labels(robot, c).isdisjoint(forbidden)
            )
            if not spots:
                return None
            parking[robot] = spots
            continue
        r = anchors[0]
        rotated = sorted((a - r) % k for a in anchors) + [k]
        gaps: list[_Gap] = []
        for s, t in zip(rotated, rotated[1:]):
            positions = tuple((p + r) % k for p in range(s, t))
            start = G.nodes[nodes_seq[positions[0]]].cells[robot]
            segments = tuple(_segment_for(G, cycle[p], robot) for p in positions)
            gaps.append(_Gap(positions, start, segments))
        solved = _solve_gaps(ws, gaps, robot, cache)
        if solved is None:
            return None
        robot_gaps[robot] = gaps
        robot_free[robot] = solved

    sync = _synchronize(ws, robot_gaps, robot_free, k, cache)
    if sync is None:
        return None
    lengths, padded = sync

    anchor_cells: list[Cell | None] = []
    for robot in range(n):
        if robot in parking:
            anchor_cells.append(None)
        else:
            # cell when position 0 is (re-)entered: arrival of the last edge
            anchor_cells.append(padded[robot][(k - 1)][1][-1])
            pin = G.nodes[nodes_seq[0]].cells[robot]
            if pin is not None:
                assert anchor_cells[robot] == pin

    cost = sum(
        _moves(start, path)
        for paths in padded.values()
        for start, path in paths.values()
    )
    return _SuffixCore(cycle, nodes_seq, lengths, padded, anchor_cells, parking, cost)


@dataclass
class _PrefixCore:
    path: tuple[int, ...]
    nodes_seq: list[int]
    lengths: tuple[int, ...]
    paths: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]]
    end_cells: list[Cell]
    cost: int


def _complete_prefix(
    ws: GridWorkspace,
    G: ReducedGraph,
    path: tuple[int, ...],
    core: _SuffixCore,
    cache: MemoCache | None,
) -> _PrefixCore | None:
    kp = len(path)
    edges = [G.edges[e] for e in path]
    nodes_p = [G.init] + [e.dst for e in edges]
    n = ws.n_robots

    robot_gaps: dict[int, list[_Gap]] = {}
    robot_free: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]] = {}
    for robot in range(n):
        end: tuple[Cell, ...]
        if core.anchor_cells[robot] is not None:
            end = (core.anchor_cells[robot],)
        else:
            end = core.parking[robot]
        anchors = [0] + [
            j
            for j in range(1, kp)
            if G.nodes[nodes_p[j]].cells[robot] is not None
        ] + [kp]
        gaps: list[_Gap] = []
        for s, t in zip(anchors, anchors[1:]):
            positions = tuple(range(s, t))
            if s == 0:
                start = ws.starts[robot]
            else:
                start = G.nodes[nodes_p[s]].cells[robot]
            segments = list(_segment_for(G, path[p], robot) for p in positions)
            if t == kp:
                last = segments[-1]
                segments[-1] = Segment(
                    last.single_step, last.forbidden, end, frozenset()
                )
            gaps.append(_Gap(positions, start, tuple(segments)))
        solved = _solve_gaps(ws, gaps, robot, cache)
        if solved is None:
            return None
        robot_gaps[robot] = gaps
        robot_free[robot] = solved

    sync = _synchronize(ws, robot_gaps, robot_free, kp, cache)
    if sync is None:
        return None
    lengths, padded = sync
    end_cells = [padded[robot][kp - 1][1][-1] for robot in range(n)]
    cost = sum(
        _moves(start, p)
        for paths in padded.values()
        for start, p in paths.values()
    )
    return _PrefixCore(path, nodes_p, lengths, padded, end_cells, cost)


def _assemble(
    ws: GridWorkspace,
    G: ReducedGraph,
    core: _SuffixCore,
    pref: _PrefixCore,
) -> Run:
    n = ws.n_robots
    anchor_cells = tuple(pref.end_cells)
    anchor_q = G.nodes[core.nodes_seq[0]].q

    def roll(
        start_state: ProductState,
        nodes_seq: list[int],
        lengths: tuple[int, ...],
        paths: dict[int, dict[int, tuple[Cell, tuple[Cell, ...]]]],
        idle_cells: dict[int, Cell],
        next_q: list[int],
    ) -> list[ProductState]:
        states = [start_state]
        for pos, L in enumerate(lengths):
            q_here = G.nodes[nodes_seq[pos]].q
            for t in range(L):
                cells = []
                for robot in range(n):
                    if robot in idle_cells:
                        cells.append(idle_cells[robot])
                    else:
                        cells.append(paths[robot][pos][1][t])
                q = next_q[pos] if t == L - 1 else q_here
                states.append(ProductState(tuple(cells), q))
        return states

    idle = {
        robot: anchor_cells[robot]
        for robot in core.parking
    }
    pre_next_q = [G.nodes[v].q for v in pref.nodes_seq[1:]]
    prefix = roll(
        ProductState(tuple(ws.starts), G.ba.initial),
        pref.nodes_seq[:-1],
        pref.lengths,
        pref.paths,
        {},
        pre_next_q,
    )
    assert prefix[-1] == ProductState(anchor_cells, anchor_q)

    k = len(core.lengths)
    suf_next_q = [
        G.nodes[core.nodes_seq[(pos + 1) % k]].q for pos in range(k)
    ]
    suffix = roll(
        ProductState(anchor_cells, anchor_q),
        core.nodes_seq,
        core.lengths,
        core.paths,
        idle,
        suf_next_q,
    )
    assert suffix[-1] == suffix[0]

    prefix_cost = path_cost(prefix)
    suffix_cost = path_cost(suffix)
    assert prefix_cost == pref.cost
    assert suffix_cost == core.cost
    return Run(prefix, suffix, prefix_cost, suffix_cost)


class _Distances:
    """True shortest move counts on the free grid, one lazy BFS per source.

    Dwell constraints are ignored, so these never exceed completed costs
    and stay admissible as search bounds; unlike Manhattan they see walls.
    """

    UNREACHABLE = 1 << 30

    def __init__(self, ws: GridWorkspace) -> None:
        self.ws = ws
        self._maps: dict[Cell, dict[Cell, int]] = {}

    def _from(self, src: Cell) -> dict[Cell, int]:
        got = self._maps.get(src)
        if got is None:
            got = {src: 0}
            frontier = [src]
            while frontier:
                layer: list[Cell] = []
                for c in frontier:
                    d = got[c] + 1
                    for c2 in self.ws.neighbours(c):
                        if c2 not in got:
                            got[c2] = d
                            layer.append(c2)
                frontier = layer
            self._maps[src] = got
        return got

    def dist(self, a: Cell, b: Cell) -> int:
        return self._from(a).get(b, self.UNREACHABLE)

    def to_any(self, a: Cell, targets: tuple[Cell, ...]) -> int:
        m = self._from(a)
        return min((m.get(t, self.UNREACHABLE) for t in targets), default=0)


class _Budget:
    def __init__(self, amount: int) -> None:
        self.left = amount
        self.exhausted = False

    def spend(self) -> bool:
        if self.left <= 0:
            self.exhausted = True
            return False
        self.left -= 1
        return True


def _must_positives(ba: BuchiAutomaton) -> dict[int, frozenset[str]]:
    """Positive propositions no path from a state to acceptance can avoid.

    For each proposition, drop every edge asserting it and test which
    states still reach an accepting state backwards; the states that do
    not owe that proposition before the automaton can accept again.
    """
    props = sorted({p for _, cond, _ in ba.edges for p in cond.pos})
    rev: dict[int, list[tuple[int, frozenset[str]]]] = {
        q: [] for q in range(ba.n_states)
    }
    for src, cond, dst in ba.edges:
        rev[dst].append((src, cond.pos))
    out: dict[int, set[str]] = {}
    for p in props:
        seen = set(ba.accepting)
        stack = list(ba.accepting)
        while stack:
            for src, pos in rev[stack.pop()]:
                if p not in pos and src not in seen:
                    seen.add(src)
                    stack.append(src)
        for q in range(ba.n_states):
            if q not in seen:
                out.setdefault(q, set()).add(p)
    return {q: frozenset(v) for q, v in out.items()}


def _must_sites(ws: GridWorkspace, ba: BuchiAutomaton) -> dict[int, tuple]:
    """Per automaton state: station obligations the closing tours must meet.

    Each entry is (own, shared). `own` holds, per robot, the site sets of
    obliged propositions only that robot can produce; an empty set inside
    marks a proposition nobody can produce, so no pinned tour closes.
    `shared` lists propositions several robots could produce, as (owner
    indices, sites); one of the owners has to make that detour, which is
    only chargeable once every owner is pinned.
    """
    mustpos = _must_positives(ba)
    n = ws.n_robots
    owners: dict[str, list[tuple[int, tuple[Cell, ...]]]] = {}
    for p in sorted({p for ps in mustpos.values() for p in ps}):
        per = [(i, ws.cells_satisfying(i, make_condition(pos=(p,)))) for i in range(n)]
        owners[p] = [(i, cs) for i, cs in per if cs]
    site_map: dict[int, tuple] = {}
    for q, ps in mustpos.items():
        per_robot: list[list[tuple[Cell, ...]]] = [[] for _ in range(n)]
        shared: list[tuple[tuple[int, ...], tuple[Cell, ...]]] = []
        for p in sorted(ps):
            own = owners[p]
            if len(own) == 1:
                per_robot[own[0][0]].append(own[0][1])
            elif not own:
                for row in per_robot:
                    row.append(())
            else:
                # multi-owner props carry one site set: they are raw cell
                # labels, visible identically to every robot standing there
                shared.append((tuple(i for i, _ in own), own[0][1]))
        if any(per_robot) or shared:
            site_map[q] = (tuple(tuple(row) for row in per_robot), tuple(shared))
    return site_map


def _wraps_for(from_map, big: int, rows, sites) -> list[int] | None:
    """Per-robot lower bounds on closing travel from latest pin back to first.

    rows: per robot (first pin, latest pin, ...) with first None while
    unpinned. Base: free-grid distance. A robot's own obliged site sets
    each force its closing stretch through one of their cells; the maximum
    single detour keeps the bound admissible. A shared obligation charges,
    once all owners are pinned, the smallest extra any owner would pay on
    top of its own bound, folded into that owner's figure so the wraps
    still sum to the team bound. None when some pinned tour cannot close.
    """
    if sites is None:
        out = []
        for row in rows:
            first = row[0]
            if first is None:
                out.append(0)
                continue
            w = from_map(first).get(row[1], big)
            if w >= big:
                return None
            out.append(w)
        return out
    own, shared = sites
    out = []
    for i, row in enumerate(rows):
        first, last = row[0], row[1]
        if first is None:
            out.append(0)
            continue
        fm_first = from_map(first)
        w = fm_first.get(last, big)
        if w >= big:
            return None
        for S in own[i]:
            if not S:
                return None
            fm_last = from_map(last)
            d = min(fm_last.get(s, big) + fm_first.get(s, big) for s in S)
            if d > w:
                w = d
        if w >= big:
            return None
        out.append(w)
    best_j = 0
    best_pick = -1
    for owner_ids, S in shared:
        if any(rows[i][0] is None for i in owner_ids):
            continue
        j = None
        pick = -1
        for i in owner_ids:
            first, last = rows[i][0], rows[i][1]
            fm_first = from_map(first)
            fm_last = from_map(last)
            det = min(fm_last.get(s, big) + fm_first.get(s, big) for s in S)
            extra = det - out[i]
            if extra < 0:
                extra = 0
            if j is None or extra < j:
                j = extra
                pick = i
        if j is None:
            continue
        if j >= big:
            return None
        if j > best_j:
            best_j = j
            best_pick = pick
    if best_j:
        out[best_pick] += best_j
    return out


def _legs_for(from_map, big: int, cells, sites, tmaps) -> list[int] | None:
    """Per-robot lower bounds on travel from current position to target.

    Prefix counterpart of _wraps_for: every robot has a known position
    (its start until first pinned), the goal is one of the robot's target
    cells, and obliged sites stretch the leg through one of their cells.
    Shared obligations always charge here since all positions are known.
    """
    legs = []
    own, shared = sites if sites is not None else (None, ())
    for i, c in enumerate(cells):
        w = big
        for m in tmaps[i]:
            d = m.get(c, big)
            if d < w:
                w = d
        if w >= big:
            return None
        if own is not None and own[i]:
            fm_c = from_map(c)
            for S in own[i]:
                if not S:
                    return None
                d = min(
                    fm_c.get(s, big) + min(m.get(s, big) for m in tmaps[i])
                    for s in S
                )
                if d > w:
                    w = d
            if w >= big:
                return None
        legs.append(w)
    best_j = 0
    best_pick = -1
    for owner_ids, S in shared:
        j = None
        pick = -1
        for i in owner_ids:
            fm_c = from_map(cells[i])
            det = min(
                fm_c.get(s, big) + min(m.get(s, big) for m in tmaps[i])
                for s in S
            )
            extra = det - legs[i]
            if extra < 0:
                extra = 0
            if j is None or extra < j:
                j = extra
                pick = i
        if j is None:
            continue
        if j >= big:
            return None
        if j > best_j:
            best_j = j
            best_pick = pick
    if best_j:
        legs[best_pick] += best_j
    return legs


def _visited(arena: list[list], entry: int) -> set[int]:
    """Nodes on the arena chain from the root to this entry."""
    nodes: set[int] = set()
    while entry >= 0:
        row = arena[entry]
        nodes.add(row[0])
        entry = row[2]
    return nodes


def _edges_back(arena: list[list], tip: int, stop: int) -> list[int]:
    """Edge indices along the arena chain from `stop` (exclusive) to `tip`."""
    out: list[int] = []
    while tip != stop:
        row = arena[tip]
        out.append(row[1])
        tip = row[2]
    out.reverse()
    return out


def _best_suffixes(
    ws: GridWorkspace,
    G: ReducedGraph,
    dists: _Distances,
    site_map: dict[int, tuple],
    cache: MemoCache | None,
    prices: MemoCache,
    budget: _Budget,
    tie_cap: int,
    floor: int | None,
    stats: PlanStats | None,
    roots: tuple[int, ...] | None = None,
    incumbent: int | None = None,
) -> tuple[int | None, list[_SuffixCore]]:
    """Cheapest completed cycles above `floor`, best-first.

    One search covers every accepting anchor: each anchor seeds a root and
    a partial path may only close back onto its own root, with anchors
    that come earlier in creation order excluded so each cycle is found
    exactly once. Entries are pushed with a cheap unconstrained-distance
    estimate and re-priced with exact per-robot gap costs (dwell-aware,
    memoized in `prices`) when they surface; a re-priced entry goes back
    in the heap unless it is still the minimum. Both stages are lower
    bounds on the completed cost and never decrease along a path, so the
    search stops once the minimum surfaces above the best completed cost.
    Closing prices the wrap gaps exactly before completion is attempted;
    synchronization can only add cost. Equal-cost cycles are collected,
    up to a per-anchor share of tie_cap, so the prefix stage can pick
    among their anchors.

    `roots` restricts the anchors to seed (without blocking the others
    from appearing inside cycles); `incumbent` starts the search already
    bounded, so only cycles at that exact cost are collected.
    """
    n = ws.n_robots
    big = _Distances.UNREACHABLE
    root_list = tuple(G.accepting) if roots is None else roots
    best_cost: int | None = incumbent
    collected: list[_SuffixCore] = []
    seq = 0
    share = max(1, tie_cap // max(1, len(root_list)))
    ties: dict[int, int] = {f: 0 for f in root_list}
    total_ties = 0
    node_cells = [nd.cells for nd in G.nodes]
    node_sites = [site_map.get(nd.q) for nd in G.nodes]
    out_info = [
        tuple((ei, G.edges[ei].dst) for ei in row) for row in G.out
    ]
    from_map = dists._from

    # arena row: [node, edge in, parent id, root anchor, state, g, depth]
    # state, per robot: (first pin, latest pin, arena entry of the first
    # pin, arena entry of the latest pin, wrap estimate back to first pin)
    # Wrap estimates are per node, not per pin event: a pinned robot whose
    # automaton state still owes it a station pays the detour on every
    # node it sits at, which keeps paths that postpone the obligation from
    # flooding the frontier with spuriously low bounds.
    # Heap entries order by (bound, -depth, insertion): at equal bounds the
    # deepest path surfaces first, so some cycle closes early and its cost
    # prunes the rest.
    arena: list[list] = []
    heap: list[tuple[int, int, int, int]] = []
    blocked_for: dict[int, frozenset[int]] = {}
    earlier: set[int] = set()
    for f in root_list:
        blocked_for[f] = frozenset(earlier)
        earlier.add(f)
        node_f = G.nodes[f]
        init_state = tuple(
            (c, c, len(arena), len(arena), 0)
            if (c := node_f.cells[i]) is not None
            else (None, None, -1, -1, 0)
            for i in range(n)
        )
        heap.append((0, 0, seq, len(arena)))
        arena.append([f, -1, -1, f, init_state, 0, 0])
        seq += 1
    heapq.heapify(heap)

    # Entries whose bound equals the best cost can only yield more ties.
    # Each anchor stops once its share is full and carries its own pop
    # allowance, so one anchor's plateau cannot starve the others; a
    # global cap still bounds total tie work so collection cannot stall.
    allow_each = max(128, 2 * share)
    tie_allow = {f: allow_each for f in root_list}
    tie_pops_left = 16 * tie_cap
    while heap:
        bound, nd, sq, entry = heapq.heappop(heap)
        if best_cost is not None and bound >= best_cost:
            if bound > best_cost or total_ties >= tie_cap:
                break
            r = arena[entry][3]
            if ties[r] >= share:
                continue
            left = tie_allow[r]
            if left <= 0:
                continue
            tie_allow[r] = left - 1
            tie_pops_left -= 1
            if tie_pops_left < 0:
                break
        if not budget.spend():
            break
        row = arena[entry]
        node, ein, parent, root, state, g, depth = row
        if state is None:
            # estimate-priced entry surfacing for the first time: swap the
            # estimated hop for exact gap costs, then reinsert if beaten
            pstate = arena[parent][4]
            pg = arena[parent][5]
            ng = pg
            rows = list(pstate)
            dead = False
            cells = node_cells[node]
            for i in range(n):
                cell = cells[i]
                if cell is None:
                    continue
                first, last, fe, le, _w = pstate[i]
                if first is None:
                    rows[i] = (cell, cell, entry, entry, 0)
                    continue
                mid = _edges_back(arena, parent, le)
                segs = tuple(_segment_for(G, e, i) for e in (*mid, ein))
                got = solve_gap(ws, i, last, segs, prices)
                if got is None:
                    dead = True
                    break
                ng += got.cost
                rows[i] = (first, cell, fe, entry, 0)
            if dead:
                continue
            wraps = _wraps_for(from_map, big, rows, node_sites[node])
            if wraps is None:
                continue
            state = tuple(
                (r[0], r[1], r[2], r[3], w) for r, w in zip(rows, wraps)
            )
            nb = ng + sum(wraps)
            row[4] = state
            row[5] = g = ng
            if nb > bound:
                if best_cost is not None and nb > best_cost:
                    continue
                if heap and heap[0][0] <= nb:
                    heapq.heappush(heap, (nb, nd, sq, entry))
                    continue
                bound = nb
        f = root
        blocked = blocked_for[root]
        visited = _visited(arena, entry)
        fan = out_info[node]
        eager = best_cost is None and len(fan) <= _EAGER_DEGREE_LIMIT
        for ei, dst in fan:
            if dst == f:
                if best_cost is not None and (
                    bound > best_cost
                    or (bound >= best_cost and ties[f] >= share)
                ):
                    continue
                total = bound
                feasible = True
                for i in range(n):
                    first, last, fe, le, wrap = state[i]
                    if first is None:
                        continue
                    mid = _edges_back(arena, entry, le)
                    pre = _edges_back(arena, fe, -1)[1:]
                    segs = tuple(
                        _segment_for(G, e, i) for e in (*mid, ei, *pre)
                    )
                    got = solve_gap(ws, i, last, segs, prices)
                    if got is None:
                        feasible = False
                        break
                    total += got.cost - wrap
                if not feasible:
                    continue
                if best_cost is not None and (
                    total > best_cost
                    or (total >= best_cost and ties[f] >= share)
                ):
                    continue
                cyc = tuple(_edges_back(arena, entry, -1)[1:]) + (ei,)
                core = _complete_suffix(ws, G, cyc, cache)
                if stats is not None:
                    stats.cycles_evaluated += 1
                if core is None:
                    continue
                if stats is not None:
                    stats.cycles_feasible += 1
                if floor is not None and core.cost <= floor:
                    continue
                if best_cost is None or core.cost < best_cost:
                    best_cost = core.cost
                    collected = [core]
                    ties = {k: 0 for k in ties}
                    ties[f] = 1
                    total_ties = 1
                elif core.cost == best_cost and ties[f] < share:
                    collected.append(core)
                    ties[f] += 1
                    total_ties += 1
            elif eager:
                if dst in visited or dst in blocked:
                    continue
                nid = len(arena)
                ng = g
                rows = list(state)
                dead = False
                dcells = node_cells[dst]
                for i in range(n):
                    cell = dcells[i]
                    if cell is None:
                        continue
                    first, last, fe, le, _w = state[i]
                    if first is None:
                        rows[i] = (cell, cell, nid, nid, 0)
                        continue
                    mid = _edges_back(arena, entry, le)
                    segs = tuple(_segment_for(G, e, i) for e in (*mid, ei))
                    got = solve_gap(ws, i, last, segs, prices)
                    if got is None:
                        dead = True
                        break
                    ng += got.cost
                    rows[i] = (first, cell, fe, nid, 0)
                if dead:
                    continue
                wraps = _wraps_for(from_map, big, rows, node_sites[dst])
                if wraps is None:
                    continue
                st_out = tuple(
                    (r[0], r[1], r[2], r[3], w) for r, w in zip(rows, wraps)
                )
                nb = ng + sum(wraps)
                if best_cost is not None and nb > best_cost:
                    continue
                heap_entry = (nb, -depth - 1, seq, nid)
                arena.append([dst, ei, entry, root, st_out, ng, depth + 1])
                heapq.heappush(heap, heap_entry)
                seq += 1
            else:
                if dst in visited or dst in blocked:
                    continue
                nb = g
                rows = list(state)
                dead = False
                dcells = node_cells[dst]
                for i in range(n):
                    cell = dcells[i]
                    if cell is None:
                        continue
                    first, last, fe, le, _w = state[i]
                    if first is None:
                        rows[i] = (cell, cell, -1, -1, 0)
                        continue
                    step = from_map(last).get(cell, big)
                    if step >= big:
                        dead = True
                        break
                    nb += step
                    rows[i] = (first, cell, fe, le, 0)
                if dead:
                    continue
                wraps = _wraps_for(from_map, big, rows, node_sites[dst])
                if wraps is None:
                    continue
                nb += sum(wraps)
                if best_cost is not None and nb > best_cost:
                    continue
                heap_entry = (nb, -depth - 1, seq, len(arena))
                arena.append([dst, ei, entry, root, None, 0, depth + 1])
                heapq.heappush(heap, heap_entry)
                seq += 1
    return best_cost, collected


def _best_prefix_for(
    ws: GridWorkspace,
    G: ReducedGraph,
    dists: _Distances,
    site_map: dict[int, tuple],
    core: _SuffixCore,
    cache: MemoCache | None,
    prices: MemoCache,
    budget: _Budget,
    stats: PlanStats | None,
) -> _PrefixCore | None:
    """Cheapest completed simple path from the start node to the anchor.

    Works like the suffix search: cheap estimate at push, exact gap costs
    at surfacing. The estimate covers the remaining leg from each robot's
    latest pin to where the suffix needs it, the anchor cell or the
    nearest parking spot, stretched through stations the automaton still
    obliges; closing prices that leg exactly before completing.
    """
    n = ws.n_robots
    big = _Distances.UNREACHABLE
    f = core.nodes_seq[0]
    targets: list[tuple[Cell, ...]] = []
    for i in range(n):
        cell = core.anchor_cells[i]
        targets.append((cell,) if cell is not None else core.parking[i])
    node_cells = [nd.cells for nd in G.nodes]
    node_sites = [site_map.get(nd.q) for nd in G.nodes]
    out_info = [
        tuple((ei, G.edges[ei].dst) for ei in row) for row in G.out
    ]
    from_map = dists._from
    tmaps = [tuple(from_map(t) for t in targets[i]) for i in range(n)]
    best: _PrefixCore | None = None
    # per robot: (latest pin, arena entry of it, leg estimate to target)
    legs0 = _legs_for(
        from_map, big, ws.starts, node_sites[G.init], tmaps
    )
    if legs0 is None:
        return None
    init_state = tuple(
        (ws.starts[i], 0, legs0[i]) for i in range(n)
    )
    h0 = sum(legs0)
    # arena row: [node, edge in, parent id, state, g, depth]; heap orders
    # by (bound, -depth, insertion) so equal-bound pops dig deep first
    arena: list[list] = [[G.init, -1, -1, init_state, 0, 0]]
    heap: list[tuple[int, int, int, int]] = [(h0, 0, 0, 0)]
    seq = 1
    while heap:
        bound, nd, sq, entry = heapq.heappop(heap)
        if best is not None and bound >= best.cost:
            break
        if not budget.spend():
            break
        row = arena[entry]
        node, ein, parent, state, g, depth = row
        if state is None:
            pstate = arena[parent][3]
            ng = arena[parent][4]
            rows = [(s[0], s[1]) for s in pstate]
            dead = False
            cells = node_cells[node]
            for i in range(n):
                cell = cells[i]
                if cell is None:
                    continue
                last, le, _leg = pstate[i]
                mid = _edges_back(arena, parent, le)
                segs = tuple(_segment_for(G, e, i) for e in (*mid, ein))
                got = solve_gap(ws, i, last, segs, prices)
                if got is None:
                    dead = True
                    break
                ng += got.cost
                rows[i] = (cell, entry)
            if dead:
                continue
            legs = _legs_for(
                from_map, big, [r[0] for r in rows], node_sites[node], tmaps
            )
            if legs is None:
                continue
            state = tuple(
                (r[0], r[1], leg) for r, leg in zip(rows, legs)
            )
            nb = ng + sum(legs)
            row[3] = state
            row[4] = g = ng
            if nb > bound:
                if best is not None and nb >= best.cost:
                    continue
                if heap and heap[0][0] <= nb:
                    heapq.heappush(heap, (nb, nd, sq, entry))
                    continue
                bound = nb
        visited = _visited(arena, entry)
        fan = out_info[node]
        eager = best is None and len(fan) <= _EAGER_DEGREE_LIMIT
        for ei, dst in fan:
            if dst == f:
                if best is not None and bound >= best.cost:
                    continue
                total = bound
                feasible = True
                for i in range(n):
                    last, le, leg = state[i]
                    mid = _edges_back(arena, entry, le)
                    segs = [_segment_for(G, e, i) for e in (*mid, ei)]
                    tail = segs[-1]
                    segs[-1] = Segment(
                        tail.single_step, tail.forbidden, targets[i], frozenset()
                    )
                    got = solve_gap(ws, i, last, tuple(segs), prices)
                    if got is None:
                        feasible = False
                        break
                    total += got.cost - leg
                if not feasible or (best is not None and total >= best.cost):
                    continue
                pref = _complete_prefix(
                    ws, G, tuple(_edges_back(arena, entry, 0)) + (ei,), core, cache
                )
                if stats is not None:
                    stats.prefixes_evaluated += 1
                if pref is not None and (best is None or pref.cost < best.cost):
                    best = pref
            elif dst not in visited:
                dcells = node_cells[dst]
                if eager:
                    nid = len(arena)
                    ng = g
                    rows = [(s[0], s[1]) for s in state]
                    dead = False
                    for i in range(n):
                        cell = dcells[i]
                        if cell is None:
                            continue
                        last, le, _leg = state[i]
                        mid = _edges_back(arena, entry, le)
                        segs = tuple(_segment_for(G, e, i) for e in (*mid, ei))
                        got = solve_gap(ws, i, last, segs, prices)
                        if got is None:
                            dead = True
                            break
                        ng += got.cost
                        rows[i] = (cell, nid)
                    if dead:
                        continue
                    legs = _legs_for(
                        from_map, big, [r[0] for r in rows],
                        node_sites[dst], tmaps,
                    )
                    if legs is None:
                        continue
                    st_out = tuple(
                        (r[0], r[1], leg) for r, leg in zip(rows, legs)
                    )
                    nb = ng + sum(legs)
                    if best is not None and nb >= best.cost:
                        continue
                    heap_entry = (nb, -depth - 1, seq, nid)
                    arena.append([dst, ei, entry, st_out, ng, depth + 1])
                    heapq.heappush(heap, heap_entry)
                    seq += 1
                else:
                    nb = g
                    cur = [s[0] for s in state]
                    dead = False
                    for i in range(n):
                        cell = dcells[i]
                        if cell is None:
                            continue
                        step = from_map(cur[i]).get(cell, big)
                        if step >= big:
                            dead = True
                            break
                        nb += step
                        cur[i] = cell
                    if dead:
                        continue
                    legs = _legs_for(
                        from_map, big, cur, node_sites[dst], tmaps
                    )
                    if legs is None:
                        continue
                    nb += sum(legs)
                    if best is not None and nb >= best.cost:
                        continue
                    heap_entry = (nb, -depth - 1, seq, len(arena))
                    arena.append([dst, ei, entry, None, 0, depth + 1])
                    heapq.heappush(heap, heap_entry)
                    seq += 1
    return best


def mtstar_solve(
    ws: GridWorkspace,
    ba: BuchiAutomaton,
    use_cache: bool = True,
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
    path_budget: int = DEFAULT_PATH_BUDGET,
    tie_cap: int = DEFAULT_TIE_CAP,
    graph: ReducedGraph | None = None,
    stats: PlanStats | None = None,
) -> Run | None:
    """Optimal lasso over the reduced graph, or None when no cycle closes.

    The cheapest completed suffix cycle wins; among suffix ties the
    cheapest completed prefix wins, then discovery order. With
    use_cache=False every completion is recomputed from scratch; the
    answer is identical either way. Budgets bound the best-first searches;
    exhausting one is reported through `stats` and makes the result
    best-effort instead of exact.
    """
    G = graph if graph is not None else generate_reduced_graph(ws, ba)
    cache = MemoCache() if use_cache else None
    # Pricing partial paths is pure lookup work; memoizing it cannot change
    # any value, so it stays on even when completion caching is off.
    prices = cache if cache is not None else MemoCache()
    dists = _Distances(ws)
    site_map = _must_sites(ws, ba)
    if stats is not None:
        stats.n_nodes = G.n_nodes
        stats.n_edges = G.n_edges
        stats.n_accepting = len(G.accepting)

    result: Run | None = None
    floor: int | None = None
    cycle_funds = _Budget(cycle_budget)
    path_funds = _Budget(path_budget)
    prefix_memo: dict[tuple, _PrefixCore | None] = {}

    def prefix_for(core: _SuffixCore) -> _PrefixCore | None:
        key = (
            core.nodes_seq[0],
            tuple(core.anchor_cells),
            tuple(sorted(core.parking.items())),
        )
        if key not in prefix_memo:
            prefix_memo[key] = _best_prefix_for(
                ws, G, dists, site_map, core, cache, prices,
                path_funds, stats
            )
        return prefix_memo[key]

    while result is None:
        suffix_cost, cores = _best_suffixes(
            ws, G, dists, site_map, cache, prices, cycle_funds, tie_cap,
            floor, stats
        )
        if stats is not None:
            stats.cycles_truncated = stats.cycles_truncated or cycle_funds.exhausted
        if suffix_cost is None:
            break
        best: tuple[int, _SuffixCore, _PrefixCore] | None = None
        for core in cores:
            pref = prefix_for(core)
            if pref is None:
                continue
            if best is None or pref.cost < best[0]:
                best = (pref.cost, core, pref)
        if best is not None:
            # prefix polish: each cycle was anchored where first found, so
            # an equally cheap cycle through some other accepting node may
            # start closer to the robots; re-anchor there whenever the
            # start-distance bound still beats the chosen prefix
            done = {core.nodes_seq[0] for core in cores}
            cand: list[tuple[int, int]] = []
            for fidx in G.accepting:
                if fidx in done:
                    continue
                lb = 0
                for i, c in enumerate(G.nodes[fidx].cells):
                    if c is not None:
                        lb += dists.dist(ws.starts[i], c)
                if lb < best[0]:
                    cand.append((lb, fidx))
            cand.sort()
            for lb, fidx in cand:
                if lb >= best[0] or cycle_funds.left <= 0:
                    break
                sub = _Budget(min(cycle_funds.left, 4096))
                cap = sub.left
                _cost, extra = _best_suffixes(
                    ws, G, dists, site_map, cache, prices, sub, 1,
                    None, stats, roots=(fidx,), incumbent=suffix_cost,
                )
                cycle_funds.left -= cap - sub.left
                for core in extra:
                    pref = prefix_for(core)
                    if pref is not None and pref.cost < best[0]:
                        best = (pref.cost, core, pref)
            result = _assemble(ws, G, best[1], best[2])
        else:
            # every cheapest suffix is unreachable; look for dearer cycles
            floor = suffix_cost
            if cycle_funds.exhausted or path_funds.exhausted:
                break
    if stats is not None:
        stats.prefixes_truncated = stats.prefixes_truncated or path_funds.exhausted
        if cache is not None:
            stats.cache_hits = cache.hits
            stats.cache_misses = cache.misses
    return result
