"""Per-robot path completion between pinned configurations.

A gap is a maximal stretch of reduced-graph edges between two cells where
one robot is pinned. The solver threads one robot through the gap's
segments: multi-step segments allow any number of unit moves over cells
clear of the dwell propositions, single-step segments allow exactly the
arrival move. Stays cost nothing, every actual move costs one.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..workspace import Cell, GridWorkspace

__all__ = ["Segment", "GapResult", "MemoCache", "solve_gap", "solve_gap_exact"]


@dataclass(frozen=True)
class Segment:
    """One reduced-graph edge seen from a single robot.

    arrival is the tuple of admissible arrival cells (a single pinned cell,
    or the parking choices at a gap end), or None when any cell clear of
    arrival_forbidden will do. forbidden constrains travel cells strictly
    inside a multi-step segment.
    """

    single_step: bool
    forbidden: frozenset[str]
    arrival: tuple[Cell, ...] | None
    arrival_forbidden: frozenset[str]


@dataclass(frozen=True)
class GapResult:
    cost: int
    seg_paths: tuple[tuple[Cell, ...], ...]

    @property
    def end(self) -> Cell:
        return self.seg_paths[-1][-1]

    def lengths(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.seg_paths)


class MemoCache:
    """Memo for gap completions. Results are pure, so hits change nothing."""

    def __init__(self) -> None:
        self._store: dict = {}
        self.hits = 0
        self.misses = 0

    def get(self, key):
        got = self._store.get(key, _MISS)
        if got is _MISS:
            self.misses += 1
            return _MISS
        self.hits += 1
        return got

    def put(self, key, value) -> None:
        self._store[key] = value


_MISS = object()


def _clear(ws: GridWorkspace, robot: int, cell: Cell, forbidden: frozenset[str]) -> bool:
    return ws.robot_labels(robot, cell).isdisjoint(forbidden)


def _arrival_ok(ws: GridWorkspace, robot: int, cell: Cell, seg: Segment) -> bool:
    if seg.arrival is not None:
        return cell in seg.arrival
    return _clear(ws, robot, cell, seg.arrival_forbidden)


def solve_gap(
    ws: GridWorkspace,
    robot: int,
    start: Cell,
    segments: tuple[Segment, ...],
    cache: MemoCache | None = None,
) -> GapResult | None:
    """Cheapest completion of one gap, or None when no path fits.

    seg_paths[j] lists the robot's cell after each step of segment j; the
    last entry of each is the arrival at the segment's target node. Ties
    break on discovery order with canonical move ordering, so results are
    deterministic.
    """
    if not segments:
        return GapResult(0, ())
    if cache is not None:
        key = (robot, start, segments)
        got = cache.get(key)
        if got is not _MISS:
            return got
    result = _solve_gap(ws, robot, start, segments)
    if cache is not None:
        cache.put(key, result)
    return result


def _solve_gap(
    ws: GridWorkspace, robot: int, start: Cell, segments: tuple[Segment, ...]
) -> GapResult | None:
    m = len(segments)
    last = segments[-1]
    if last.arrival is not None:
        targets = last.arrival
    else:
        targets = tuple(
            c for c in ws.free_cells() if _clear(ws, robot, c, last.arrival_forbidden)
        )
    if not targets:
        return None

    hmap: dict[Cell, int] = {}

    def h(c: Cell) -> int:
        got = hmap.get(c)
        if got is None:
            got = min(abs(c[0] - t[0]) + abs(c[1] - t[1]) for t in targets)
            hmap[c] = got
        return got

    # state: (cell, segments completed); parents reconstruct the step list
    best: dict[tuple[Cell, int], int] = {(start, 0): 0}
    parent: dict[tuple[Cell, int], tuple[Cell, int] | None] = {(start, 0): None}
    seq = 0
    heap: list[tuple[int, int, int, Cell, int]] = [(h(start), 0, seq, start, 0)]
    goal: tuple[Cell, int] | None = None
    while heap:
        f, g, _, cell, done = heapq.heappop(heap)
        if g > best.get((cell, done), -1):
            continue
        if done == m:
            goal = (cell, done)
            break
        seg = segments[done]
        succs: list[tuple[Cell, int, int]] = []
        if not seg.single_step:
            for c2 in ws.neighbours(cell):
                if c2 != cell and _clear(ws, robot, c2, seg.forbidden):
                    succs.append((c2, done, g + 1))
        for c2 in ws.neighbours(cell):
            if _arrival_ok(ws, robot, c2, seg):
                succs.append((c2, done + 1, g + (0 if c2 == cell else 1)))
        for c2, d2, g2 in succs:
            state = (c2, d2)
            old = best.get(state)
            if old is None or g2 < old:
                best[state] = g2
                parent[state] = (cell, done)
                seq += 1
                heapq.heappush(heap, (g2 + h(c2), g2, seq, c2, d2))
    if goal is None:
        return None

    steps: list[tuple[Cell, int]] = []
    cur: tuple[Cell, int] | None = goal
    while parent[cur] is not None:
        prev = parent[cur]
        steps.append((cur[0], prev[1]))  # step lands on cur cell inside segment prev.done
        cur = prev
    steps.reverse()
    seg_paths: list[list[Cell]] = [[] for _ in range(m)]
    for cell, seg_idx in steps:
        seg_paths[seg_idx].append(cell)
    return GapResult(best[goal], tuple(tuple(p) for p in seg_paths))


def solve_gap_exact(
    ws: GridWorkspace,
    robot: int,
    start: Cell,
    segments: tuple[Segment, ...],
    lengths: tuple[int, ...],
    cache: MemoCache | None = None,
) -> GapResult | None:
    """Cheapest completion taking exactly lengths[j] steps in segment j.

    Used when a free path cannot absorb its padding stays legally. Stays
    are allowed mid-travel here (on cells clear of the dwell propositions),
    so the step budget can always be burned if any schedule fits.
    """
    if not segments:
        return GapResult(0, ())
    if cache is not None:
        key = ("exact", robot, start, segments, lengths)
        got = cache.get(key)
        if got is not _MISS:
            return got
    result = _solve_exact(ws, robot, start, segments, lengths)
    if cache is not None:
        cache.put(key, result)
    return result


def _solve_exact(
    ws: GridWorkspace,
    robot: int,
    start: Cell,
    segments: tuple[Segment, ...],
    lengths: tuple[int, ...],
) -> GapResult | None:
    cur: dict[Cell, int] = {start: 0}
    layers: list[dict[Cell, Cell]] = []
    for seg, L in zip(segments, lengths):
        if seg.single_step and L != 1:
            return None
        for t in range(1, L + 1):
            arrive = t == L
            nxt: dict[Cell, int] = {}
            back: dict[Cell, Cell] = {}
            for cell in sorted(cur):
                g = cur[cell]
                for c2 in ws.neighbours(cell):
                    if arrive:
                        if not _arrival_ok(ws, robot, c2, seg):
                            continue
                    else:
                        if seg.single_step or not _clear(ws, robot, c2, seg.forbidden):
                            continue
                    g2 = g + (0 if c2 == cell else 1)
                    old = nxt.get(c2)
                    if old is None or g2 < old:
                        nxt[c2] = g2
                        back[c2] = cell
            if not nxt:
                return None
            cur = nxt
            layers.append(back)
    end = min(cur, key=lambda c: (cur[c], c))
    cost = cur[end]
    cells: list[Cell] = [end]
    for back in reversed(layers):
        cells.append(back[cells[-1]])
    cells.reverse()  # cells[0] == start, then one entry per step
    seg_paths: list[tuple[Cell, ...]] = []
    pos = 1
    for L in lengths:
        seg_paths.append(tuple(cells[pos : pos + L]))
        pos += L
    return GapResult(cost, tuple(seg_paths))


def pad_segment(
    ws: GridWorkspace,
    robot: int,
    seg: Segment,
    start: Cell,
    path: tuple[Cell, ...],
    length: int,
) -> tuple[Cell, ...] | None:
    """Stretch a segment path to `length` steps by inserting stays.

    The stays land at the earliest position whose cell is clear of the
    dwell propositions (interior cells always are; the endpoints need the
    check). None means no legal position exists.
    """
    pad = length - len(path)
    if pad == 0:
        return path
    if pad < 0:
        raise ValueError("segment path longer than its synchronized length")
    cells_at = (start,) + path
    for p, cell in enumerate(cells_at):
        if _clear(ws, robot, cell, seg.forbidden):
            return path[:p] + (cell,) * pad + path[p:]
    return None
