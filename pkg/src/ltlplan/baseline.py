"""Baseline planner: optimal lasso search on the explicit product automaton.

For every reachable accepting product state f, the cheapest cycle through f
is min over in-edges (u -> f) of dist(f -> u) + w(u -> f), computed with
Dijkstra bounded by the best cycle found so far. Candidates are compared by
(suffix cost, prefix cost, lexicographic product state), which makes the
result deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .ltl.buchi import BuchiAutomaton
from .product import ProductGraph, ProductState, Run, build_product, path_cost
from .workspace import GridWorkspace

_NO_PRED = -9999


def _walk(predecessors: np.ndarray, source: int, target: int) -> list[int] | None:
    path = [target]
    while path[-1] != source:
        p = int(predecessors[path[-1]])
        if p == _NO_PRED:
            return None
        path.append(p)
    path.reverse()
    return path


def baseline_solve(
    ws: GridWorkspace,
    ba: BuchiAutomaton,
    product: ProductGraph | None = None,
) -> Run | None:
    pg = product if product is not None else build_product(ws, ba)
    K = pg.scale
    W = pg.graph
    WT = pg.graph_t

    dist0, pred0 = dijkstra(
        W, directed=True, indices=pg.init, return_predecessors=True
    )

    candidates = pg.accepting_states()
    best: tuple[int, int, tuple] | None = None
    best_f = -1
    for f in candidates:
        f = int(f)
        if not np.isfinite(dist0[f]):
            continue
        prefix_true = int(dist0[f]) // K
        limit = np.inf if best is None else K * (best[0] + 1) - 1
        distf = dijkstra(W, directed=True, indices=f, limit=limit)
        row = WT.indptr[f], WT.indptr[f + 1]
        in_nodes = WT.indices[row[0] : row[1]]
        in_w = WT.data[row[0] : row[1]]
        if len(in_nodes) == 0:
            continue
        du = distf[in_nodes]
        totals = du + in_w
        k = int(np.argmin(totals))
        if not np.isfinite(totals[k]):
            continue
        suffix_true = int(totals[k]) // K
        cand = (suffix_true, prefix_true, pg.decode(f))
        if best is None or cand < best:
            best = cand
            best_f = f

    if best is None:
        return None

    f = best_f
    distf, predf = dijkstra(
        W, directed=True, indices=f, return_predecessors=True,
        limit=K * (best[0] + 1) - 1,
    )
    row = WT.indptr[f], WT.indptr[f + 1]
    in_nodes = WT.indices[row[0] : row[1]]
    in_w = WT.data[row[0] : row[1]]
    totals = distf[in_nodes] + in_w
    k = int(np.argmin(totals))
    u = int(in_nodes[k])

    cycle_idx = _walk(predf, f, u)
    assert cycle_idx is not None
    cycle_idx.append(f)
    prefix_idx = _walk(pred0, pg.init, f)
    assert prefix_idx is not None

    prefix = [pg.decode(i) for i in prefix_idx]
    suffix = [pg.decode(i) for i in cycle_idx]
    run = Run(
        prefix=prefix,
        suffix=suffix,
        prefix_cost=path_cost(prefix),
        suffix_cost=path_cost(suffix),
    )
    assert run.suffix_cost == best[0]
    assert run.prefix_cost == best[1]
    return run
