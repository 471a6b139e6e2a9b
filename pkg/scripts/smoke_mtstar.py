"""Manual smoke run: warehouse and gather9 agreement, cache identity."""

import sys
import time

sys.path.insert(0, "src")

from ltlplan.baseline import baseline_solve
from ltlplan.ltl.translate import ltl_to_buchi
from ltlplan.mtstar import PlanStats, mtstar_solve
from ltlplan.product import path_cost
from ltlplan.workspace import load_workspace

PHI1 = (
    "G F gather"
    " & G (r1gather -> X (!r1gather U r1upload))"
    " & G (r2gather -> X (!r2gather U r2upload))"
)
PHI2 = PHI1 + " & G (gather -> (r1gather & r2gather))"


def costs(run):
    return path_cost(run.suffix), path_cost(run.prefix)


def main() -> None:
    ws = load_workspace("fixtures/warehouse8.txt")
    ba = ltl_to_buchi("G (F P1 & F P2) & G !P3")
    t0 = time.perf_counter()
    stats = PlanStats()
    run = mtstar_solve(ws, ba, stats=stats)
    t1 = time.perf_counter()
    s, p = costs(run)
    print(f"warehouse mtstar: suffix={s} prefix={p} time={t1 - t0:.2f}s")
    print(f"  stats: {stats}")
    assert s == 0 and p == 10, (s, p)
    assert t1 - t0 < 5.0

    run_nc = mtstar_solve(ws, ba, use_cache=False)
    assert run_nc == run, "cache off changed the warehouse answer"
    print("warehouse cache off: identical")

    ws9 = load_workspace("fixtures/gather9.txt")
    ba2 = ltl_to_buchi(PHI2)
    t0 = time.perf_counter()
    stats = PlanStats()
    run_m = mtstar_solve(ws9, ba2, stats=stats)
    t1 = time.perf_counter()
    sm, pm = costs(run_m)
    print(f"gather9 phi2 mtstar: suffix={sm} prefix={pm} time={t1 - t0:.2f}s")
    print(f"  stats: {stats}")

    t0 = time.perf_counter()
    run_b = baseline_solve(ws9, ba2)
    t1 = time.perf_counter()
    sb, pb = costs(run_b)
    print(f"gather9 phi2 baseline: suffix={sb} prefix={pb} time={t1 - t0:.2f}s")
    assert sm == sb, (sm, sb)
    print("gather9 phi2: suffix costs agree")


if __name__ == "__main__":
    main()
