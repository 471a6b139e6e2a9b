#!/usr/bin/env python3
"""Regenerate the gather-station workspace fixtures.

Each map carries four gather stations (a..d -> gather,gatherN), two upload
stations (x,y -> upload,uploadN) and two robot starts. Obstacle shelves sit
on a coarse lattice, skipping the neighbourhood of stations and starts so
the station-to-station routes stay at Manhattan distance. Run from the repo
root:  python3 scripts/gen_gather_maps.py
"""

from pathlib import Path

LAYOUTS = {
    9: {
        "G1": (7, 1), "G2": (7, 7), "G3": (5, 4), "G4": (8, 4),
        "U1": (1, 1), "U2": (1, 7),
        "starts": [(0, 4), (4, 8)],
        "shelves": [(2, 2), (2, 3), (6, 2), (6, 3), (2, 5), (2, 6), (6, 5), (6, 6)],
    },
    15: {
        "G1": (12, 2), "G2": (12, 12), "G3": (8, 7), "G4": (14, 7),
        "U1": (2, 2), "U2": (2, 12),
        "starts": [(0, 7), (7, 14)],
        "shelves": [
            (4, 4), (4, 5), (10, 4), (10, 5),
            (4, 9), (4, 10), (10, 9), (10, 10),
            (7, 2), (7, 12), (2, 7), (12, 7),
        ],
    },
    30: {
        "G1": (25, 4), "G2": (25, 25), "G3": (16, 15), "G4": (29, 15),
        "U1": (4, 4), "U2": (4, 25),
        "starts": [(0, 15), (15, 29)],
        "shelves": None,  # lattice
    },
    45: {
        "G1": (38, 6), "G2": (38, 38), "G3": (24, 22), "G4": (44, 22),
        "U1": (6, 6), "U2": (6, 38),
        "starts": [(0, 22), (22, 44)],
        "shelves": None,
    },
}

LEGEND = {
    "G1": ("a", "gather,gather1"),
    "G2": ("b", "gather,gather2"),
    "G3": ("c", "gather,gather3"),
    "G4": ("d", "gather,gather4"),
    "U1": ("x", "upload,upload1"),
    "U2": ("y", "upload,upload2"),
}


def lattice_shelves(size, keep_clear):
    out = []
    for by in range(3, size - 3, 6):
        for bx in range(3, size - 3, 6):
            for cell in [(bx, by), (bx, by + 1), (bx + 1, by)]:
                if all(
                    abs(cell[0] - kx) + abs(cell[1] - ky) > 2 for kx, ky in keep_clear
                ):
                    out.append(cell)
    return out


def build(size, spec):
    grid = [["." for _ in range(size)] for _ in range(size)]
    keep_clear = [spec[k] for k in LEGEND] + spec["starts"]
    shelves = spec["shelves"]
    if shelves is None:
        shelves = lattice_shelves(size, keep_clear)
    for x, y in shelves:
        grid[y][x] = "#"
    for key, (char, _) in LEGEND.items():
        x, y = spec[key]
        grid[y][x] = char
    for i, (x, y) in enumerate(spec["starts"], start=1):
        grid[y][x] = str(i)
    lines = [f"grid {size} {size} {len(spec['starts'])}"]
    lines += ["".join(row) for row in grid]
    lines.append("# gather stations a-d, upload stations x-y")
    for key, (char, props) in LEGEND.items():
        lines.append(f"label {char} {props}")
    return "\n".join(lines) + "\n"


def main():
    root = Path(__file__).resolve().parent.parent / "fixtures"
    for size, spec in LAYOUTS.items():
        path = root / f"gather{size}.txt"
        path.write_text(build(size, spec))
        print("wrote", path)


if __name__ == "__main__":
    main()
