"""Nondeterministic Büchi automata with literal-conjunction edge labels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .conditions import TransitionCondition

Edge = tuple[int, TransitionCondition, int]


@dataclass
class BuchiAutomaton:
    n_states: int
    initial: int
    accepting: frozenset[int]
    edges: tuple[Edge, ...]
    ap: tuple[str, ...]
    _out: dict[int, tuple[tuple[TransitionCondition, int], ...]] | None = field(
        default=None, repr=False
    )

    def edges_from(self, q: int) -> tuple[tuple[TransitionCondition, int], ...]:
        if self._out is None:
            out: dict[int, list[tuple[TransitionCondition, int]]] = {
                q: [] for q in range(self.n_states)
            }
            for src, cond, dst in self.edges:
                out[src].append((cond, dst))
            self._out = {q: tuple(v) for q, v in out.items()}
        return self._out.get(q, ())

    def negative_selfloops(self, q: int) -> tuple[TransitionCondition, ...]:
        return tuple(
            cond for cond, dst in self.edges_from(q) if dst == q and cond.is_negative
        )

    def successors(self, q: int, labels: frozenset[str]) -> frozenset[int]:
        return frozenset(
            dst for cond, dst in self.edges_from(q) if cond.satisfied_by(labels)
        )

    def accepts_lasso(self, stem: list[frozenset[str]], loop: list[frozenset[str]]) -> bool:
        """Membership of the ultimately periodic word stem . loop^omega.

        Explores the synchronous product of the lasso positions with the
        automaton and checks for a reachable cycle through an accepting state
        whose positions lie in the loop part.
        """
        if not loop:
            raise ValueError("lasso loop must be non-empty")
        word = list(stem) + list(loop)
        length = len(word)
        loop_start = len(stem)

        def succ_pos(i: int) -> int:
            return i + 1 if i + 1 < length else loop_start

        # forward reachability from (position 0, initial)
        node_id: dict[tuple[int, int], int] = {}
        order: list[tuple[int, int]] = []

        def intern(n: tuple[int, int]) -> int:
            if n not in node_id:
                node_id[n] = len(order)
                order.append(n)
            return node_id[n]

        start = intern((0, self.initial))
        stack = [start]
        adj: list[list[int]] = [[]]
        seen = {start}
        while stack:
            nid = stack.pop()
            i, q = order[nid]
            while len(adj) <= nid:
                adj.append([])
            targets = []
            letter = word[i]
            ni = succ_pos(i)
            for cond, dst in self.edges_from(q):
                if cond.satisfied_by(letter):
                    tid = intern((ni, dst))
                    targets.append(tid)
                    if tid not in seen:
                        seen.add(tid)
                        stack.append(tid)
            adj[nid] = targets
        while len(adj) < len(order):
            adj.append([])

        n = len(order)
        if n == 0:
            return False
        rows, cols = [], []
        for u, targets in enumerate(adj):
            for v in targets:
                rows.append(u)
                cols.append(v)
        if not rows:
            return False
        mat = csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
        )
        n_comp, comp = connected_components(mat, directed=True, connection="strong")
        # component has an internal cycle if it holds >1 node or a self-loop
        comp_size = np.bincount(comp, minlength=n_comp)
        has_selfloop = np.zeros(n_comp, dtype=bool)
        for u, targets in enumerate(adj):
            if u in targets:
                has_selfloop[comp[u]] = True
        for nid, (i, q) in enumerate(order):
            if i >= loop_start and q in self.accepting:
                c = comp[nid]
                if comp_size[c] > 1 or has_selfloop[c]:
                    return True
        return False

    def is_empty_language_state(self) -> bool:
        return not self.edges
