"""End-to-end command-line behaviour: outputs, formats, exit codes."""

import json

import pytest

jsonschema = pytest.importorskip("jsonschema")

from importlib import resources

from cubecolor import cli
from cubecolor.search import stripe_construction


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_coloring(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def load_schema(name):
    with resources.files("cubecolor.schemas").joinpath(name).open() as fh:
        return json.load(fh)


# ---------------------------------------------------------------- analyze


def test_analyze_all_one_color(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "2 3 1\n0 0 0 0 0 0 0 0 0\n")
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["max_component"] == 9
    # one color is m = 0: in range, but the m=0 coefficient is a formula
    # artifact (2, not 1), so the comparison only makes sense as asymptotic
    assert doc["bound"]["asymptotic"] is True
    assert doc["bound"]["f_eq5"]["exact"] == "2/1"


def test_analyze_m_at_least_d_has_no_bound(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "2 2 3\n0 1 2 0\n")
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    assert json.loads(out)["bound"] is None  # m = 2 >= d = 2


def test_analyze_checkerboard_schema(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "2 2 2\n0 1 1 0\n")
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["max_component"] == 2
    jsonschema.validate(doc, load_schema("analyze.schema.json"))


def test_analyze_stripe_file(tmp_path, capsys):
    g = stripe_construction(2, 8, 2, 2)
    path = write_coloring(tmp_path, "s.txt", g.to_text())
    code, out, _ = run(capsys, "analyze", path)
    doc = json.loads(out)
    assert code == 0
    assert doc["max_component"] <= 16


def test_analyze_parse_error_exit_2(tmp_path, capsys):
    path = write_coloring(tmp_path, "bad.txt", "2 2 2\n0 0 1 7\n")
    code, _, err = run(capsys, "analyze", path)
    assert code == 2
    assert "out of range" in err


def test_analyze_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "analyze", "/nonexistent/x.txt")
    assert code == 2


# ---------------------------------------------------------------- certify


def test_certify_half_half(tmp_path, capsys):
    path = write_coloring(tmp_path, "h.txt", "2 4 2\n" + "0 0 1 1\n" * 4)
    code, out, _ = run(capsys, "certify", path)
    assert code == 0
    doc = json.loads(out)
    assert all(doc["identities"].values())
    assert doc["max_X_volume"]["exact"] == "1/1"
    jsonschema.validate(doc, load_schema("certify.schema.json"))


def test_certify_single_color(tmp_path, capsys):
    path = write_coloring(tmp_path, "one.txt", "2 2 2\n0 0 0 0\n")
    code, out, _ = run(capsys, "certify", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["X_volumes"] == [{"exact": "1/1", "approx": 1.0}]


def test_certify_malformed_exit_2(tmp_path, capsys):
    path = write_coloring(tmp_path, "bad.txt", "2 2\n0 0 0 0\n")
    code, _, _ = run(capsys, "certify", path)
    assert code == 2


def test_certify_budget_exit_2(tmp_path, capsys):
    from cubecolor.search import random_coloring

    path = write_coloring(tmp_path, "big.txt", random_coloring(2, 9, 2, 0).to_text())
    code, _, err = run(capsys, "certify", path)
    assert code == 2
    assert "budget" in err


def test_certify_integer_ring_not_supported(tmp_path, capsys):
    path = write_coloring(tmp_path, "h.txt", "2 2 2\n0 1 0 1\n")
    code, _, err = run(capsys, "certify", path, "--ring", "int")
    assert code == 2
    assert "mod-2" in err


def test_certify_custom_delta(tmp_path, capsys):
    path = write_coloring(tmp_path, "h.txt", "2 2 2\n0 1 0 1\n")
    code, out, _ = run(capsys, "certify", path, "--delta", "1/32")
    assert code == 0
    assert json.loads(out)["identities"]["eq2"]


# -------------------------------------------------------------- fill-test


def test_fill_test_counts(capsys):
    code, out, _ = run(capsys, "fill-test", "--count", "25", "--d", "2", "--k", "1")
    assert code == 0
    assert "25/25 passed" in out


def test_fill_test_vacuous(capsys):
    code, out, _ = run(capsys, "fill-test", "--count", "0")
    assert code == 0
    assert "0/0 passed" in out


def test_fill_test_bad_dims(capsys):
    code, _, err = run(capsys, "fill-test", "--d", "2", "--k", "2")
    assert code == 2


def test_fill_test_workers_merge_deterministically(capsys):
    code1, out1, _ = run(capsys, "fill-test", "--count", "16", "--d", "3", "--k", "2")
    code2, out2, _ = run(
        capsys, "fill-test", "--count", "16", "--d", "3", "--k", "2", "--workers", "2"
    )
    assert code1 == code2 == 0
    assert out1 == out2


# ----------------------------------------------------------------- search


def test_search_exhaustive_csv(tmp_path, capsys):
    code, out, _ = run(capsys, "search", "exhaustive", "--n", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d,n,num_colors,method,objective,seed"
    assert lines[1] == "2,2,2,exhaustive,2,"


def test_search_budget_error(capsys):
    code, _, err = run(capsys, "search", "exhaustive", "--n", "6")
    assert code == 2
    assert "budget" in err


def test_search_anneal_reproducible(tmp_path, capsys):
    args = ("search", "anneal", "--n", "4", "--steps", "200", "--seed", "5")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_search_best_coloring_file(tmp_path, capsys):
    best = tmp_path / "best.txt"
    code, _, _ = run(
        capsys, "search", "stripe", "--n", "6", "--width", "2",
        "--out", str(tmp_path / "rows.csv"), "--best-out", str(best),
    )
    assert code == 0
    from cubecolor.gridcolor import parse_coloring

    g = parse_coloring(best.read_text())
    assert g.n == 6
    rows = (tmp_path / "rows.csv").read_text().splitlines()
    assert rows[1] == "2,6,2,stripe-w2,11,"


# ----------------------------------------------------------------- bounds


def test_bounds_text(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "2", "--m", "1")
    assert code == 0
    assert "f_eq5        = 1/8" in out
    assert "factor-2 discrepancy" in out


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "3", "--m", "2", "--json")
    doc = json.loads(out)
    assert doc["h_eq4"]["exact"] == "144/1"
    assert doc["discrepancy_factor_two"] is True


def test_bounds_invalid_m(capsys):
    code, _, _ = run(capsys, "bounds", "--d", "2", "--m", "2")
    assert code == 2


# ----------------------------------------------------------------- render


CHECKER_PPM = (
    b"P6\n2 2\n255\n"
    + bytes([230, 25, 75])  # color 0
    + bytes([60, 180, 75])  # color 1
    + bytes([60, 180, 75])
    + bytes([230, 25, 75])
)


def test_render_checkerboard_golden_bytes(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "2 2 2\n0 1 1 0\n")
    out = tmp_path / "img.ppm"
    code, _, _ = run(capsys, "render", path, "--out", str(out))
    assert code == 0
    assert out.read_bytes() == CHECKER_PPM


def test_render_pgm_grayscale(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "2 2 2\n0 1 1 0\n")
    out = tmp_path / "img.pgm"
    code, _, _ = run(capsys, "render", path, "--out", str(out), "--format", "pgm")
    assert code == 0
    assert out.read_bytes() == b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])


def test_render_d3_slice_diagonal_bands(tmp_path, capsys):
    g = stripe_construction(3, 4, 2, 2)
    path = write_coloring(tmp_path, "s.txt", g.to_text())
    out = tmp_path / "slice.ppm"
    code, _, _ = run(capsys, "render", path, "--out", str(out), "--slice", "3=0")
    assert code == 0
    data = out.read_bytes()
    header, raster = data.split(b"255\n", 1)
    # pixel (x1, x2) carries the palette color of floor((x1+x2)/2) mod 2
    for x2 in range(4):
        for x1 in range(4):
            expect = cli._palette_color(((x1 + x2) // 2) % 2)
            at = 3 * (x2 * 4 + x1)
            assert tuple(raster[at : at + 3]) == expect
    # deterministic bytes
    out2 = tmp_path / "slice2.ppm"
    run(capsys, "render", path, "--out", str(out2), "--slice", "3=0")
    assert out2.read_bytes() == data


def test_render_d1_rejected(tmp_path, capsys):
    path = write_coloring(tmp_path, "c.txt", "1 3 2\n0 1 0\n")
    code, _, err = run(capsys, "render", path, "--out", str(tmp_path / "x.ppm"))
    assert code == 2


def test_render_bad_slice(tmp_path, capsys):
    g = stripe_construction(3, 2, 2, 1)
    path = write_coloring(tmp_path, "s.txt", g.to_text())
    code, _, _ = run(capsys, "render", path, "--out", str(tmp_path / "x.ppm"))
    assert code == 2  # d=3 needs --slice 3=<v>
    code, _, _ = run(
        capsys, "render", path, "--out", str(tmp_path / "x.ppm"), "--slice", "3=9"
    )
    assert code == 2
