"""Grid workspace model.

A workspace is a rectangular grid of unit cells. Cells are addressed as
(x, y) with the origin in the top-left corner, x growing rightwards and y
growing downwards. Robots move synchronously; in one time step a robot may
stay in place (cost 0) or move to a 4-connected free neighbour (cost 1).

Workspace files are plain text:

    grid <width> <height> <n_robots>
    <height> rows of <width> characters:
        .   free cell
        #   obstacle
        1-9 start cell of robot k (also free)
        a-z or A-Z: labeled free cell, resolved through the legend
    label <char> <prop>[,<prop>...]   legend entries, one per letter
    # comment lines and blank lines are allowed outside the grid block
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .ltl.conditions import TransitionCondition

Cell = tuple[int, int]

# Canonical neighbour order. Every search in the package expands moves in
# this order, which pins down all tie-breaking.
MOVES: tuple[tuple[int, int], ...] = ((0, 0), (0, -1), (0, 1), (-1, 0), (1, 0))
MOVE_NAMES = ("stay", "up", "down", "left", "right")


@dataclass
class GridWorkspace:
    width: int
    height: int
    n_robots: int
    obstacles: frozenset[Cell]
    labels: dict[Cell, frozenset[str]]
    starts: tuple[Cell, ...]
    name: str = "workspace"
    _neigh_cache: dict[Cell, tuple[Cell, ...]] = field(default_factory=dict, repr=False)
    _rlabel_cache: dict[tuple[int, Cell], frozenset[str]] = field(
        default_factory=dict, repr=False
    )

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and cell not in self.obstacles

    def free_cells(self) -> list[Cell]:
        """All free cells in row-major order (deterministic)."""
        return [
            (x, y)
            for y in range(self.height)
            for x in range(self.width)
            if (x, y) not in self.obstacles
        ]

    def neighbours(self, cell: Cell) -> tuple[Cell, ...]:
        """Reachable cells in one step, in canonical order, including stay."""
        cached = self._neigh_cache.get(cell)
        if cached is not None:
            return cached
        x, y = cell
        out = tuple(
            (x + dx, y + dy)
            for dx, dy in MOVES
            if self.is_free((x + dx, y + dy))
        )
        self._neigh_cache[cell] = out
        return out

    def labels_of(self, cell: Cell) -> frozenset[str]:
        return self.labels.get(cell, frozenset())

    def robot_labels(self, robot: int, cell: Cell) -> frozenset[str]:
        """Propositions produced by robot `robot` (0-based) standing on `cell`.

        Each raw label p is accompanied by its robot-indexed variant
        r<robot+1><p>, so missions can constrain which robot does what.
        """
        key = (robot, cell)
        cached = self._rlabel_cache.get(key)
        if cached is not None:
            return cached
        raw = self.labels_of(cell)
        if raw:
            prefix = f"r{robot + 1}"
            raw = raw | frozenset(prefix + p for p in raw)
        self._rlabel_cache[key] = raw
        return raw

    def joint_labels(self, cells: tuple[Cell, ...]) -> frozenset[str]:
        """Union of robot_labels over all robots at the given joint position."""
        out: frozenset[str] = frozenset()
        for i, c in enumerate(cells):
            out |= self.robot_labels(i, c)
        return out

    def alphabet(self) -> frozenset[str]:
        """All propositions this workspace can produce, robot-indexed included."""
        raw: set[str] = set()
        for props in self.labels.values():
            raw |= props
        out = set(raw)
        for i in range(self.n_robots):
            out |= {f"r{i + 1}{p}" for p in raw}
        return frozenset(out)

    def satisfies(self, cell: Cell, cond: TransitionCondition) -> bool:
        """Condition check against the raw labels of one cell."""
        return cond.satisfied_by(self.labels_of(cell))

    def satisfies_robot(self, robot: int, cell: Cell, cond: TransitionCondition) -> bool:
        """Condition check against what robot `robot` produces on `cell`.

        Negative literals naming another robot's propositions are vacuous
        here: robot 1 can never produce r2gather, so !r2gather always holds
        from robot 1's point of view.
        """
        return cond.satisfied_by(self.robot_labels(robot, cell))

    def cells_satisfying(self, robot: int, cond: TransitionCondition) -> tuple[Cell, ...]:
        """Free cells on which robot `robot` satisfies `cond`, row-major order."""
        return tuple(
            c for c in self.free_cells() if self.satisfies_robot(robot, c, cond)
        )


def load_workspace(path: str | Path) -> GridWorkspace:
    path = Path(path)
    lines = path.read_text().splitlines()
    header = None
    grid_rows: list[str] = []
    legend: dict[str, frozenset[str]] = {}
    rows_needed = 0
    i = 0
    while i < len(lines):
        line = lines[i]
        i += 1
        if header is None:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "grid":
                msg = f"expected 'grid <w> <h> <n>' header, got {stripped!r}"
                raise ValueError(msg)
            _, w, h, n = parts
            header = (int(w), int(h), int(n))
            rows_needed = header[1]
            continue
        if len(grid_rows) < rows_needed:
            grid_rows.append(line.rstrip("\n"))
            continue
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("label "):
            rest = stripped[len("label "):].split(None, 1)
            if len(rest) != 2:
                msg = f"bad legend line {stripped!r}"
                raise ValueError(msg)
            char, props = rest
            if len(char) != 1 or not char.isalpha():
                msg = f"legend key must be a single letter, got {char!r}"
                raise ValueError(msg)
            legend[char] = frozenset(p.strip() for p in props.split(",") if p.strip())
            continue
        msg = f"unexpected line {stripped!r}"
        raise ValueError(msg)

    if header is None:
        raise ValueError("missing 'grid' header")
    width, height, n_robots = header
    if len(grid_rows) != height:
        msg = f"expected {height} grid rows, got {len(grid_rows)}"
        raise ValueError(msg)

    obstacles: set[Cell] = set()
    labels: dict[Cell, frozenset[str]] = {}
    starts: dict[int, Cell] = {}
    for y, row in enumerate(grid_rows):
        if len(row) != width:
            msg = f"grid row {y} has length {len(row)}, expected {width}"
            raise ValueError(msg)
        for x, ch in enumerate(row):
            cell = (x, y)
            if ch == ".":
                continue
            if ch == "#":
                obstacles.add(cell)
            elif ch.isdigit() and ch != "0":
                k = int(ch)
                if k in starts:
                    msg = f"duplicate start marker for robot {k}"
                    raise ValueError(msg)
                starts[k] = cell
            elif ch.isalpha():
                if ch not in legend:
                    msg = f"grid letter {ch!r} has no legend entry"
                    raise ValueError(msg)
                labels[cell] = legend[ch]
            else:
                msg = f"unknown grid character {ch!r} at {cell}"
                raise ValueError(msg)

    if sorted(starts) != list(range(1, n_robots + 1)):
        msg = f"expected start markers 1..{n_robots}, found {sorted(starts)}"
        raise ValueError(msg)

    return GridWorkspace(
        width=width,
        height=height,
        n_robots=n_robots,
        obstacles=frozenset(obstacles),
        labels=labels,
        starts=tuple(starts[k] for k in range(1, n_robots + 1)),
        name=path.stem,
    )
