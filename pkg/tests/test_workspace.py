import pytest
from hypothesis import given, strategies as st

from ltlplan import load_workspace
from ltlplan.ltl import make_condition
from ltlplan.workspace import GridWorkspace


@pytest.fixture
def warehouse(fixtures_dir):
    return load_workspace(fixtures_dir / "warehouse8.txt")


def test_header_and_starts(warehouse):
    assert (warehouse.width, warehouse.height) == (8, 8)
    assert warehouse.n_robots == 2
    assert warehouse.starts == ((0, 0), (4, 7))


def test_labels(warehouse):
    assert warehouse.labels_of((6, 6)) == frozenset({"P1"})
    assert warehouse.labels_of((0, 7)) == frozenset({"P2"})
    assert warehouse.labels_of((7, 0)) == frozenset({"P2"})
    assert warehouse.labels_of((3, 3)) == frozenset({"P3"})
    assert warehouse.labels_of((0, 0)) == frozenset()


def test_obstacles_and_counts(warehouse):
    assert len(warehouse.obstacles) == 8
    free = warehouse.free_cells()
    assert len(free) == 56
    non_p3 = [c for c in free if "P3" not in warehouse.labels_of(c)]
    assert len(non_p3) == 52


def test_neighbours_canonical_order(warehouse):
    # interior cell with all moves available: stay, up, down, left, right
    assert warehouse.neighbours((1, 1)) == ((1, 1), (1, 0), (1, 2), (0, 1), (2, 1))
    # top-left corner: no up, no left
    assert warehouse.neighbours((0, 0)) == ((0, 0), (0, 1), (1, 0))
    # next to an obstacle at (2,2): right move is blocked
    assert warehouse.neighbours((1, 2)) == ((1, 2), (1, 1), (1, 3), (0, 2))


def test_neighbours_exclude_obstacles(warehouse):
    for cell in warehouse.obstacles:
        for c in warehouse.free_cells():
            assert cell not in warehouse.neighbours(c) or c == cell


def test_robot_labels(warehouse):
    assert warehouse.robot_labels(0, (6, 6)) == frozenset({"P1", "r1P1"})
    assert warehouse.robot_labels(1, (6, 6)) == frozenset({"P1", "r2P1"})
    assert warehouse.robot_labels(0, (0, 0)) == frozenset()


def test_joint_labels(warehouse):
    labels = warehouse.joint_labels(((6, 6), (0, 7)))
    assert labels == frozenset({"P1", "r1P1", "P2", "r2P2"})


def test_satisfies(warehouse):
    cond = make_condition(pos=["P2"], neg=["P3"])
    assert warehouse.satisfies((0, 7), cond)
    assert not warehouse.satisfies((3, 3), cond)
    assert not warehouse.satisfies((0, 0), cond)


def test_satisfies_robot_indexed(warehouse):
    # robot 1 can never produce r2P2, so the negation holds vacuously for it
    cond = make_condition(pos=["P2"], neg=["r2P2"])
    assert warehouse.satisfies_robot(0, (0, 7), cond)
    assert not warehouse.satisfies_robot(1, (0, 7), cond)


def test_cells_satisfying(warehouse):
    cells = warehouse.cells_satisfying(0, make_condition(pos=["P2"], neg=["P3"]))
    assert set(cells) == {(0, 7), (7, 0)}
    nonp3 = warehouse.cells_satisfying(1, make_condition(neg=["P3"]))
    assert len(nonp3) == 52


def test_alphabet(warehouse):
    ap = warehouse.alphabet()
    assert {"P1", "P2", "P3", "r1P1", "r2P3"} <= ap
    assert len(ap) == 9


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("grid 2 2 1\n1.\n..\nlabel z\n")
    with pytest.raises(ValueError):
        load_workspace(bad)
    bad.write_text("grid 2 2 1\n1.\n.x\n")
    with pytest.raises(ValueError, match="legend"):
        load_workspace(bad)
    bad.write_text("grid 2 2 2\n1.\n..\n")
    with pytest.raises(ValueError, match="start"):
        load_workspace(bad)
    bad.write_text("grid 3 2 1\n1.\n..\n")
    with pytest.raises(ValueError, match="length"):
        load_workspace(bad)


def test_comments_and_blank_lines(tmp_path):
    p = tmp_path / "ws.txt"
    p.write_text("# a comment\n\ngrid 2 2 1\n1a\n..\n\n# another\nlabel a goal\n")
    ws = load_workspace(p)
    assert ws.labels_of((1, 0)) == frozenset({"goal"})


@given(
    x=st.integers(min_value=0, max_value=7),
    y=st.integers(min_value=0, max_value=7),
)
def test_neighbour_symmetry(x, y):
    ws = GridWorkspace(
        width=8,
        height=8,
        n_robots=1,
        obstacles=frozenset({(2, 2), (5, 3)}),
        labels={},
        starts=((0, 0),),
    )
    cell = (x, y)
    if not ws.is_free(cell):
        return
    for other in ws.neighbours(cell):
        assert ws.is_free(other)
        assert cell in ws.neighbours(other)
        assert abs(other[0] - x) + abs(other[1] - y) <= 1
