"""Independent auditing of lasso runs.

The verifier trusts nothing but the workspace, the automaton and the run
itself. Acceptance combines two checks that must both pass: a certificate
walk that validates every annotated automaton transition step by step, and
an annotation-free re-simulation that drops the run's Büchi states and asks
the automaton whether the label trace alone is in its language.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ltl.buchi import BuchiAutomaton
from .product import Run, path_cost
from .workspace import GridWorkspace

__all__ = ["VerifyReport", "check_run", "resimulate"]


@dataclass
class VerifyReport:
    """Outcome of auditing one run.

    violations holds (step index, reason) pairs; step i is the transition
    from state i to state i+1 of the concatenated prefix+cycle sequence,
    and index -1 marks findings about the run as a whole. collision_steps
    is informational only: state indices where two robots share a cell, or
    where the move into that state swapped a pair of robots. Collisions
    never affect acceptance.
    """

    accepted: bool
    recomputed_prefix_cost: int | None
    recomputed_suffix_cost: int | None
    violations: list[tuple[int, str]] = field(default_factory=list)
    collision_steps: list[int] = field(default_factory=list)


def resimulate(run: Run, ws: GridWorkspace, ba: BuchiAutomaton) -> bool:
    """Annotation-free acceptance of the run's label trace.

    The word fed to the automaton is the sequence of arrival labels: the
    starting state's own label is never read, matching the product
    semantics used by both planners.
    """
    stem = [ws.joint_labels(s.cells) for s in run.prefix[1:]]
    loop = [ws.joint_labels(s.cells) for s in run.suffix[1:]]
    if not loop:
        return False
    return ba.accepts_lasso(stem, loop)


def _collisions(states) -> list[int]:
    out = []
    for j, st in enumerate(states):
        cells = st.cells
        hit = len(set(cells)) < len(cells)
        if not hit and j > 0:
            prev = states[j - 1].cells
            hit = any(
                prev[a] != cells[a] and cells[a] == prev[b] and cells[b] == prev[a]
                for a in range(len(cells))
                for b in range(a + 1, len(cells))
            )
        if hit:
            out.append(j)
    return out


def check_run(run: Run, ws: GridWorkspace, ba: BuchiAutomaton) -> VerifyReport:
    """Audit a run: structure, move legality, acceptance and costs.

    Checks, in order: the lasso shape (prefix starts at the workspace
    starts and the automaton's initial state, prefix end and cycle ends
    coincide), per-robot move legality of every joint step, existence of a
    satisfied automaton transition for every annotated step, at least one
    accepting state on the cycle, recomputed costs equal to the reported
    ones, and finally the annotation-free re-simulation. All findings are
    reported; nothing raises.
    """
    violations: list[tuple[int, str]] = []

    pc = path_cost(run.prefix) if run.prefix else None
    sc = path_cost(run.suffix) if len(run.suffix) >= 2 else None

    if not run.prefix:
        violations.append((-1, "empty prefix"))
    else:
        if run.prefix[0].cells != ws.starts:
            violations.append((-1, "prefix does not begin at the start cells"))
        if run.prefix[0].q != ba.initial:
            violations.append((-1, "prefix does not begin in the initial automaton state"))
    if len(run.suffix) < 2:
        violations.append((-1, "suffix holds no step"))
    else:
        if run.suffix[0] != run.suffix[-1]:
            violations.append((-1, "suffix does not close on its first state"))
        if run.prefix and run.prefix[-1] != run.suffix[0]:
            violations.append((-1, "prefix does not end at the cycle anchor"))

    if violations:
        return VerifyReport(False, pc, sc, violations, [])

    states = run.prefix + run.suffix[1:]
    for i in range(len(states) - 1):
        u, v = states[i], states[i + 1]
        for r, (a, b) in enumerate(zip(u.cells, v.cells)):
            if b not in ws.neighbours(a):
                violations.append((i, f"illegal move for robot {r + 1}: {a} -> {b}"))
        arrival = ws.joint_labels(v.cells)
        ok = any(
            dst == v.q and cond.satisfied_by(arrival)
            for cond, dst in ba.edges_from(u.q)
        )
        if not ok:
            violations.append(
                (i, f"no satisfied automaton transition q{u.q} -> q{v.q}")
            )

    if not any(s.q in ba.accepting for s in run.suffix):
        violations.append((-1, "cycle never visits an accepting state"))
    if pc != run.prefix_cost:
        violations.append((-1, f"prefix cost {run.prefix_cost} recomputes to {pc}"))
    if sc != run.suffix_cost:
        violations.append((-1, f"suffix cost {run.suffix_cost} recomputes to {sc}"))
    if not resimulate(run, ws, ba):
        violations.append((-1, "re-simulation rejects the label trace"))

    return VerifyReport(not violations, pc, sc, violations, _collisions(states))
