"""Plan records: a fixed, versioned JSON schema for planner output.

A record stores the mission, the workspace path, the algorithm, per-robot
prefix and suffix cell sequences along with the shared automaton-state
annotations, both costs, wall-clock time, graph-size statistics and the
number of cycle candidates examined. Serialization is canonical (sorted
keys, compact separators, trailing newline) so equal records are equal
bytes; write -> read -> write is the identity.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .product import ProductState, Run

__all__ = [
    "SCHEMA_VERSION",
    "PlanRecord",
    "SchemaVersionError",
    "record_from_run",
    "unsat_record",
    "run_from_record",
    "to_json_bytes",
    "from_json_bytes",
    "comparable_bytes",
]

SCHEMA_VERSION = 1


class SchemaVersionError(ValueError):
    """Record carries a schema version this code does not understand."""


@dataclass
class PlanRecord:
    mission: str
    workspace: str
    algorithm: str
    robots: int
    status: str  # "ok" or "unsatisfiable"
    prefix_q: list[int] | None
    suffix_q: list[int] | None
    prefix_cells: list[list[list[int]]] | None  # per robot, per step, [x, y]
    suffix_cells: list[list[list[int]]] | None
    prefix_cost: int | None
    suffix_cost: int | None
    wall_time: float | None
    graph_kind: str  # "reduced" or "product"
    graph_nodes: int | None
    graph_edges: int | None
    cycles_examined: int | None
    schema_version: int = SCHEMA_VERSION


def record_from_run(
    run: Run,
    *,
    mission: str,
    workspace: str,
    algorithm: str,
    robots: int,
    wall_time: float | None,
    graph_kind: str,
    graph_nodes: int | None,
    graph_edges: int | None,
    cycles_examined: int | None,
) -> PlanRecord:
    return PlanRecord(
        mission=mission,
        workspace=workspace,
        algorithm=algorithm,
        robots=robots,
        status="ok",
        prefix_q=[s.q for s in run.prefix],
        suffix_q=[s.q for s in run.suffix],
        prefix_cells=[
            [[c[0], c[1]] for c in (s.cells[r] for s in run.prefix)]
            for r in range(robots)
        ],
        suffix_cells=[
            [[c[0], c[1]] for c in (s.cells[r] for s in run.suffix)]
            for r in range(robots)
        ],
        prefix_cost=run.prefix_cost,
        suffix_cost=run.suffix_cost,
        wall_time=wall_time,
        graph_kind=graph_kind,
        graph_nodes=graph_nodes,
        graph_edges=graph_edges,
        cycles_examined=cycles_examined,
    )


def unsat_record(
    *,
    mission: str,
    workspace: str,
    algorithm: str,
    robots: int,
    wall_time: float | None,
    graph_kind: str,
    graph_nodes: int | None,
    graph_edges: int | None,
    cycles_examined: int | None,
) -> PlanRecord:
    """Diagnostic record for a mission with no satisfying run."""
    return PlanRecord(
        mission=mission,
        workspace=workspace,
        algorithm=algorithm,
        robots=robots,
        status="unsatisfiable",
        prefix_q=None,
        suffix_q=None,
        prefix_cells=None,
        suffix_cells=None,
        prefix_cost=None,
        suffix_cost=None,
        wall_time=wall_time,
        graph_kind=graph_kind,
        graph_nodes=graph_nodes,
        graph_edges=graph_edges,
        cycles_examined=cycles_examined,
    )


def run_from_record(rec: PlanRecord) -> Run:
    """Rebuild the Run a record was made from."""
    if rec.status != "ok":
        msg = f"record status is {rec.status!r}, no run to rebuild"
        raise ValueError(msg)

    def states(qs: list[int], per_robot: list[list[list[int]]]) -> list[ProductState]:
        return [
            ProductState(
                tuple((per_robot[r][t][0], per_robot[r][t][1]) for r in range(rec.robots)),
                q,
            )
            for t, q in enumerate(qs)
        ]

    return Run(
        states(rec.prefix_q, rec.prefix_cells),
        states(rec.suffix_q, rec.suffix_cells),
        rec.prefix_cost,
        rec.suffix_cost,
    )


def to_json_bytes(rec: PlanRecord) -> bytes:
    payload = asdict(rec)
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()


def from_json_bytes(data: bytes | str) -> PlanRecord:
    payload = json.loads(data)
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        msg = f"unsupported schema version {version!r}, expected {SCHEMA_VERSION}"
        raise SchemaVersionError(msg)
    fields = {k: payload[k] for k in PlanRecord.__dataclass_fields__}
    return PlanRecord(**fields)


def comparable_bytes(rec: PlanRecord) -> bytes:
    """Canonical bytes with the wall clock nulled, for determinism checks."""
    payload = asdict(rec)
    payload["wall_time"] = None
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()
