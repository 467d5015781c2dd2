"""Grid colorings, component labelling, spanning detection."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubecolor.gridcolor import (
    ColoringFormatError,
    GridColoring,
    components,
    neighbor_offsets,
    parse_coloring,
    report_to_json,
    spanning_report,
)


def bfs_components(g: GridColoring) -> list[set[tuple[int, ...]]]:
    """Independent oracle: breadth-first search over the same-color cells,
    adjacency = coordinates differing by at most 1 on every axis."""
    todo = set(product(range(g.n), repeat=g.d))
    comps = []
    while todo:
        start = min(todo)
        todo.discard(start)
        comp = {start}
        queue = [start]
        while queue:
            cur = queue.pop()
            for off in product((-1, 0, 1), repeat=g.d):
                if not any(off):
                    continue
                nbr = tuple(c + o for c, o in zip(cur, off))
                if nbr in todo and g.color_at(nbr) == g.color_at(cur):
                    todo.discard(nbr)
                    comp.add(nbr)
                    queue.append(nbr)
        comps.append(comp)
    return comps


# --------------------------------------------------------------- parsing


def test_parse_basic():
    g = parse_coloring("2 2 2 \n 0 0 1 1")
    assert (g.d, g.n, g.num_colors) == (2, 2, 2)
    assert g.cells == (0, 0, 1, 1)
    # axis 1 varies fastest: the rows along axis 2 are [0,0] and [1,1]
    assert g.color_at((0, 0)) == 0 and g.color_at((1, 0)) == 0
    assert g.color_at((0, 1)) == 1 and g.color_at((1, 1)) == 1


def test_parse_single_color_line():
    g = parse_coloring("1 3 1 \n 0 0 0")
    assert g.d == 1 and g.cells == (0, 0, 0)


def test_parse_color_out_of_range():
    with pytest.raises(ColoringFormatError) as err:
        parse_coloring("2 2 2 \n 0 0 1 2")
    assert "out of range" in str(err.value)


def test_parse_wrong_token_count():
    with pytest.raises(ColoringFormatError):
        parse_coloring("2 2 2 \n 0 0 1")
    with pytest.raises(ColoringFormatError):
        parse_coloring("2 2 2 \n 0 0 1 1 1")


def test_parse_non_integer_token_reports_line():
    with pytest.raises(ColoringFormatError) as err:
        parse_coloring("2 2 2\n0 0\nx 1")
    assert err.value.line == 3


def test_text_roundtrip():
    g = parse_coloring("2 3 2\n0 1 0 1 0 1 0 1 0")
    assert parse_coloring(g.to_text()) == g


# ------------------------------------------------------------ components


def test_all_one_color_single_component():
    g = GridColoring(2, 2, 1, (0, 0, 0, 0))
    rep = components(g)
    assert rep.num_components == 1
    assert rep.max_size == 4


def test_checkerboard_diagonals_connect():
    g = GridColoring(2, 2, 2, (0, 1, 1, 0))
    rep = components(g)
    assert rep.num_components == 2
    assert sorted(rep.sizes) == [2, 2]


@pytest.mark.parametrize("seed_cells", [
    tuple((i + j) // 2 % 2 for j in range(6) for i in range(6)),
])
def test_diagonal_stripes_match_oracle(seed_cells):
    g = GridColoring(2, 6, 2, seed_cells)
    rep = components(g)
    oracle = bfs_components(g)
    assert rep.num_components == len(oracle)
    assert sorted(rep.sizes) == sorted(len(c) for c in oracle)
    assert rep.max_size == max(len(c) for c in oracle) == 11


@pytest.mark.parametrize("d,n,num_colors,seed", [
    (1, 5, 2, 0), (2, 4, 2, 1), (2, 5, 3, 2), (3, 3, 2, 3), (3, 2, 4, 4),
])
def test_components_match_oracle_random(d, n, num_colors, seed):
    import random

    rng = random.Random(seed)
    cells = tuple(rng.randrange(num_colors) for _ in range(n**d))
    g = GridColoring(d, n, num_colors, cells)
    rep = components(g)
    oracle = bfs_components(g)
    assert sorted(rep.sizes) == sorted(len(c) for c in oracle)
    # labels deterministic: component 0 contains flat cell 0
    assert rep.component_id[0] == 0


def test_component_labels_sound():
    # every same-color adjacent pair shares a label; distinct same-color
    # components are never adjacent (full scan)
    import random

    rng = random.Random(99)
    g = GridColoring(2, 5, 2, tuple(rng.randrange(2) for _ in range(25)))
    rep = components(g)
    for idx in range(25):
        ci = g.coords(idx)
        for off in neighbor_offsets(2):
            nbr = tuple(c + o for c, o in zip(ci, off))
            if all(0 <= x < 5 for x in nbr):
                j = g.flat_index(nbr)
                if g.cells[idx] == g.cells[j]:
                    assert rep.component_id[idx] == rep.component_id[j]


def test_adjacency_cap():
    assert len(neighbor_offsets(2)) == 8
    assert len(neighbor_offsets(3)) == 26


def test_adjacency_symmetric():
    offs = set(neighbor_offsets(3))
    assert all(tuple(-x for x in off) in offs for off in offs)


def test_sizes_sum_to_total():
    g = GridColoring(3, 2, 2, (0, 1, 0, 1, 1, 0, 1, 0))
    assert sum(components(g).sizes) == 8


# -------------------------------------------------------------- spanning


def test_spanning_all_one_color():
    g = GridColoring(2, 3, 1, (0,) * 9)
    rep = components(g)
    assert spanning_report(rep) == [(0, 1), (0, 2)]


def test_spanning_left_column_instance():
    # left column color 0, the rest color 1: both components span axis 2
    cells = tuple(0 if i == 0 else 1 for j in range(3) for i in range(3))
    g = GridColoring(2, 3, 2, cells)
    rep = components(g)
    assert rep.num_components == 2
    assert spanning_report(rep) == [(0, 2), (1, 2)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_spanning_exhaustive_small(n):
    # every 2-coloring of a small square grid has a spanning component
    for cells in product(range(2), repeat=n * n):
        g = GridColoring(2, n, 2, cells)
        assert spanning_report(components(g)), cells


def test_report_json_shape():
    g = GridColoring(2, 2, 2, (0, 1, 1, 0))
    doc = report_to_json(components(g))
    assert set(doc) == {"d", "n", "num_colors", "max_component", "components"}
    assert doc["max_component"] == 2
    assert all(set(c) == {"color", "size", "spans"} for c in doc["components"])


@given(st.integers(2, 4), st.integers(1, 3), st.data())
@settings(max_examples=25, deadline=None)
def test_components_random_property(n, num_colors, data):
    cells = tuple(
        data.draw(st.integers(0, num_colors - 1)) for _ in range(n * n)
    )
    g = GridColoring(2, n, num_colors, cells)
    rep = components(g)
    oracle = bfs_components(g)
    assert sorted(rep.sizes) == sorted(len(c) for c in oracle)
