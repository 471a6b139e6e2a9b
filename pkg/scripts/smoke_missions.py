"""Manual mission-suite run: phi1..phi5 agreement on the 9x9 fixture."""

import sys
import time

sys.path.insert(0, "src")

from ltlplan.baseline import baseline_solve
from ltlplan.ltl.translate import ltl_to_buchi
from ltlplan.mtstar import mtstar_solve
from ltlplan.product import path_cost
from ltlplan.workspace import load_workspace

PHI1 = (
    "G F gather"
    " & G (r1gather -> X (!r1gather U r1upload))"
    " & G (r2gather -> X (!r2gather U r2upload))"
)
PHI2 = PHI1 + " & G (gather -> (r1gather & r2gather))"
PHI3 = PHI2 + (
    " & G (!(r1gather1 & r2gather1) & !(r1gather2 & r2gather2)"
    " & !(r1gather3 & r2gather3) & !(r1gather4 & r2gather4))"
)
PHI4 = PHI1 + " & G (gather -> (r1gather3 & r2gather2))"
PHI5 = "G F gather1 & G F gather2 & G F gather3 & G F gather4"


def main() -> None:
    ws = load_workspace("fixtures/gather9.txt")
    for name, phi in [
        ("phi1", PHI1),
        ("phi2", PHI2),
        ("phi3", PHI3),
        ("phi4", PHI4),
        ("phi5", PHI5),
    ]:
        ba = ltl_to_buchi(phi)
        t0 = time.perf_counter()
        run_m = mtstar_solve(ws, ba)
        t_m = time.perf_counter() - t0
        t0 = time.perf_counter()
        run_b = baseline_solve(ws, ba)
        t_b = time.perf_counter() - t0
        sm = path_cost(run_m.suffix) if run_m else None
        pm = path_cost(run_m.prefix) if run_m else None
        sb = path_cost(run_b.suffix) if run_b else None
        pb = path_cost(run_b.prefix) if run_b else None
        agree = "AGREE" if sm == sb else "MISMATCH"
        print(
            f"{name}: mtstar s={sm} p={pm} ({t_m:.2f}s)"
            f"  baseline s={sb} p={pb} ({t_b:.2f}s)  {agree}"
        )

    # cache off must reproduce the identical run
    ba = ltl_to_buchi(PHI2)
    r1 = mtstar_solve(ws, ba)
    r2 = mtstar_solve(ws, ba, use_cache=False)
    print("phi2 cache off identical:", r1 == r2)

    # no cell carries this label anywhere
    ba = ltl_to_buchi("G F nowhere")
    print("unsat:", mtstar_solve(ws, ba), baseline_solve(ws, ba))


if __name__ == "__main__":
    main()
