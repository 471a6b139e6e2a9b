"""Manual scaling run: phi2 on the gather maps, reduced graph sizes."""

import sys
import time

sys.path.insert(0, "src")

from ltlplan.ltl.translate import ltl_to_buchi
from ltlplan.mtstar import PlanStats, generate_reduced_graph, mtstar_solve
from ltlplan.product import path_cost
from ltlplan.workspace import load_workspace

PHI1 = (
    "G F gather"
    " & G (r1gather -> X (!r1gather U r1upload))"
    " & G (r2gather -> X (!r2gather U r2upload))"
)
PHI2 = PHI1 + " & G (gather -> (r1gather & r2gather))"


def main() -> None:
    ba = ltl_to_buchi(PHI2)
    for name in ("gather9", "gather15", "gather30", "gather45"):
        ws = load_workspace(f"fixtures/{name}.txt")
        t0 = time.perf_counter()
        G = generate_reduced_graph(ws, ba)
        t_graph = time.perf_counter() - t0
        t0 = time.perf_counter()
        stats = PlanStats()
        run = mtstar_solve(ws, ba, graph=G, stats=stats)
        t_solve = time.perf_counter() - t0
        s = path_cost(run.suffix) if run else None
        p = path_cost(run.prefix) if run else None
        trunc = stats.cycles_truncated or stats.prefixes_truncated
        print(
            f"{name}: G_r={G.n_nodes}n/{G.n_edges}e/{len(G.accepting)}a"
            f" graph={t_graph:.2f}s solve={t_solve:.2f}s"
            f" suffix={s} prefix={p}"
            f" evals={stats.cycles_evaluated} trunc={trunc}"
        )


if __name__ == "__main__":
    main()
