"""Product of the synchronous joint transition system with a Büchi automaton.

Joint states are tuples of robot cells; one joint step moves every robot by
one of its allowed moves (stay is free, any actual move costs 1, the step
cost is the sum). A product edge ((s,q) -> (s',q')) exists when s' is a
joint successor of s and some automaton edge (q,c,q') is satisfied by the
labels produced at the arrival state s'. The initial state's own label is
never read.

The graph is materialized as a scipy CSR matrix over the reachable part.
Edge weights are scaled as K*cost + 1 with K larger than any possible path
length, so shortest scaled paths are shortest true-cost paths with the
fewest steps, and zero-cost moves remain storable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .ltl.buchi import BuchiAutomaton
from .workspace import Cell, GridWorkspace, MOVES


class ProductState(NamedTuple):
    cells: tuple[Cell, ...]
    q: int


@dataclass
class Run:
    """A lasso plan: prefix from the start to the loop anchor, then a suffix
    cycle that starts and ends at the anchor (prefix[-1] == suffix[0] ==
    suffix[-1])."""

    prefix: list[ProductState]
    suffix: list[ProductState]
    prefix_cost: int
    suffix_cost: int

    def anchor(self) -> ProductState:
        return self.suffix[0]


def step_cost(a: tuple[Cell, ...], b: tuple[Cell, ...]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def path_cost(states: list[ProductState]) -> int:
    return sum(
        step_cost(u.cells, v.cells) for u, v in zip(states, states[1:])
    )


def joint_neighbours(ws: GridWorkspace, cells: tuple[Cell, ...]):
    """All joint successor tuples in canonical order (robot 1 varies slowest)."""
    return iproduct(*(ws.neighbours(c) for c in cells))


@dataclass
class ProductGraph:
    ws: GridWorkspace
    ba: BuchiAutomaton
    cells: tuple[Cell, ...]
    n_states: int
    n_edges: int
    graph: csr_matrix
    graph_t: csr_matrix
    init: int
    scale: int
    ids: np.ndarray  # compact index -> full id (joint * |Q| + q)
    _cell_index: dict[Cell, int] = field(default_factory=dict, repr=False)
    _id_pos: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._cell_index = {c: i for i, c in enumerate(self.cells)}
        self._id_pos = {int(full): i for i, full in enumerate(self.ids)}

    @property
    def n_robots(self) -> int:
        return self.ws.n_robots

    def decode(self, compact: int) -> ProductState:
        full = int(self.ids[compact])
        joint, q = divmod(full, self.ba.n_states)
        m = len(self.cells)
        idxs = []
        for _ in range(self.n_robots):
            joint, r = divmod(joint, m)
            idxs.append(r)
        return ProductState(tuple(self.cells[i] for i in reversed(idxs)), q)

    def encode(self, state: ProductState) -> int | None:
        m = len(self.cells)
        joint = 0
        for c in state.cells:
            i = self._cell_index.get(c)
            if i is None:
                return None
            joint = joint * m + i
        return self._id_pos.get(joint * self.ba.n_states + state.q)

    def accepting_states(self) -> np.ndarray:
        q = self.ids % self.ba.n_states
        mask = np.isin(q, np.fromiter(self.ba.accepting, dtype=np.int64))
        return np.nonzero(mask)[0]


def build_product(ws: GridWorkspace, ba: BuchiAutomaton) -> ProductGraph:
    if len(ba.ap) > 63:
        msg = f"too many atomic propositions ({len(ba.ap)})"
        raise ValueError(msg)
    cells = tuple(ws.free_cells())
    m = len(cells)
    n = ws.n_robots
    Q = ba.n_states
    cell_index = {c: i for i, c in enumerate(cells)}

    # per-slot neighbour table, -1 where the move is illegal
    nb = np.full((m, len(MOVES)), -1, dtype=np.int64)
    for i, (x, y) in enumerate(cells):
        for k, (dx, dy) in enumerate(MOVES):
            t = (x + dx, y + dy)
            if ws.is_free(t):
                nb[i, k] = cell_index[t]

    ap_bit = {p: j for j, p in enumerate(ba.ap)}
    robot_mask = np.zeros((n, m), dtype=np.int64)
    for r in range(n):
        for i, c in enumerate(cells):
            bits = 0
            for p in ws.robot_labels(r, c):
                j = ap_bit.get(p)
                if j is not None:
                    bits |= 1 << j
            robot_mask[r, i] = bits

    # joint states in mixed radix, robot 0 most significant
    M = m**n
    joints = np.arange(M, dtype=np.int64)
    idx = np.empty((n, M), dtype=np.int64)
    rem = joints
    for r in range(n - 1, -1, -1):
        idx[r] = rem % m
        rem = rem // m
    joint_mask = np.zeros(M, dtype=np.int64)
    for r in range(n):
        joint_mask |= robot_mask[r][idx[r]]

    # group automaton edges by state pair; union of their satisfaction sets
    pair_sat: dict[tuple[int, int], np.ndarray] = {}
    for qs, cond, qd in ba.edges:
        pos = 0
        neg = 0
        for p in cond.pos:
            pos |= 1 << ap_bit[p]
        for p in cond.neg:
            neg |= 1 << ap_bit[p]
        sat = ((joint_mask & pos) == pos) & ((joint_mask & neg) == 0)
        key = (qs, qd)
        if key in pair_sat:
            pair_sat[key] |= sat
        else:
            pair_sat[key] = sat

    K = M * Q + 1
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for move_combo in iproduct(range(len(MOVES)), repeat=n):
        cost = sum(1 for mv in move_combo if mv != 0)
        tgt_idx = nb[idx[0], move_combo[0]]
        valid = tgt_idx >= 0
        tgt = tgt_idx.copy()
        for r in range(1, n):
            t_r = nb[idx[r], move_combo[r]]
            valid &= t_r >= 0
            tgt = tgt * m + t_r
        w = K * cost + 1
        for (qs, qd), sat in pair_sat.items():
            take = valid & sat[np.clip(tgt, 0, M - 1)]
            src_j = joints[take]
            dst_j = tgt[take]
            rows.append(src_j * Q + qs)
            cols.append(dst_j * Q + qd)
            data.append(np.full(src_j.shape, w, dtype=np.int64))

    if rows:
        row = np.concatenate(rows)
        col = np.concatenate(cols)
        dat = np.concatenate(data)
    else:
        row = np.empty(0, dtype=np.int64)
        col = np.empty(0, dtype=np.int64)
        dat = np.empty(0, dtype=np.int64)

    full_n = M * Q
    full = csr_matrix((dat, (row, col)), shape=(full_n, full_n))

    joint0 = 0
    for c in ws.starts:
        joint0 = joint0 * m + cell_index[c]
    init_full = joint0 * Q + ba.initial

    order = breadth_first_order(full, init_full, directed=True, return_predecessors=False)
    keep = np.sort(order.astype(np.int64))
    sub = full[keep][:, keep]
    init_compact = int(np.searchsorted(keep, init_full))

    return ProductGraph(
        ws=ws,
        ba=ba,
        cells=cells,
        n_states=len(keep),
        n_edges=int(sub.nnz),
        graph=sub,
        graph_t=sub.T.tocsr(),
        init=init_compact,
        scale=K,
        ids=keep,
    )
