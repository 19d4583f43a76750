import json

import numpy as np
import pytest

from gforms import forms as fo
from gforms import groups as gr
from gforms import io
from gforms import realclosed as rc
from gforms.cli import main
from gforms.field import make_field
from gforms.hermitian import endomorphism_algebra


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


A_SPACE = "field 5 1\nepsilon 1\ngroup C1\ndim 1\ngram\n1\n"
B_SPACE = "field 5 1\nepsilon 1\ngroup C1\ndim 1\ngram\n2\n"


# -- round trips ----------------------------------------------------------

@pytest.mark.parametrize("name,q", [("C2", 3), ("S3", 5), ("C3", 9)])
def test_space_round_trip(name, q):
    F = make_field(*{3: (3, 1), 5: (5, 1), 9: (3, 2)}[q])
    X = fo.regular_form(gr.catalog_group(name), F)
    Y = io.parse_space(io.format_space(X))
    assert io.spaces_equal(X, Y)


def test_space_with_group_table_round_trip():
    G = gr.catalog_group("S3")
    G2 = io.parse_group_text(io.format_group_text(G))
    assert np.array_equal(G.table, G2.table)
    text = "group\ntable:\n" + "\n".join(" ".join(map(str, r)) for r in G.table) + "\n"
    G3 = io.parse_group_text(text)
    assert np.array_equal(G3.table, G.table)


def test_algebra_round_trip():
    X = fo.regular_form(gr.catalog_group("C3"), make_field(3))
    A = endomorphism_algebra(X)
    assert io.algebras_equal(A, io.parse_algebra(io.format_algebra(A)))


def test_exact_form_round_trip():
    f = rc.ExactForm(rc.CASES[4], [[rc.Quat.of(1), rc.Quat.of(0, "1/2")],
                                   [rc.Quat.of(0, "-1/2"), rc.Quat.of(3)]])
    g = io.parse_exact_form(io.format_exact_form(f))
    assert g.case == f.case and g.gram == f.gram


def test_parse_error_reports_line():
    bad = "field 5 1\nepsilon 1\ngroup C1\ndim 2\ngram\n1 0\n0 x\n"
    with pytest.raises(io.ParseError) as exc:
        io.parse_space(bad)
    assert "line 7" in str(exc.value)


def test_non_symmetric_gram_rejected():
    with pytest.raises(ValueError):
        io.parse_space("field 5 1\nepsilon 1\ngroup C1\ndim 2\ngram\n1 1\n0 1\n")


def test_json_has_no_floats():
    with pytest.raises(TypeError):
        io.canonical_json({"x": 0.5})
    assert io.canonical_json({"b": 1, "a": [2]}) == '{\n "a": [\n  2\n ],\n "b": 1\n}\n'


# -- CLI ------------------------------------------------------------------

def test_divpoly_example(tmp_path, capsys):
    grp = write(tmp_path, "s3.grp", io.format_group_text(gr.catalog_group("S3")))
    code, out = run(capsys, "burnside", "divpoly", "--group", grp, "--gset", "cosets:sylow2",
                    "--restrict-to", "sylow2")
    data = json.loads(out)
    assert code == 0 and data["n"] == 3 and data["F"] == "4 - t"


def test_marks_csv(capsys):
    code, out = run(capsys, "burnside", "marks", "--group", "S3", "--format", "csv")
    rows = [r.split(",") for r in out.strip().splitlines()]
    assert code == 0 and len(rows) == 5
    assert [list(map(int, r[1:])) for r in rows[1:]] == [[6, 3, 2, 1], [0, 1, 0, 1], [0, 0, 2, 1],
                                                          [0, 0, 0, 1]]


def test_isometric_with_witness(tmp_path, capsys):
    a = write(tmp_path, "a.space", A_SPACE)
    b = write(tmp_path, "b.space", B_SPACE)
    code, out = run(capsys, "forms", "isometric", a, b, "--backend", "both")
    assert code == 0 and json.loads(out)["isometric"] is False
    aa, bb = str(tmp_path / "aa.space"), str(tmp_path / "bb.space")
    assert main(["forms", "sum", a, a, "--out", aa]) == 0
    assert main(["forms", "sum", b, b, "--out", bb]) == 0
    capsys.readouterr()
    code, out = run(capsys, "forms", "isometric", aa, bb, "--backend", "both")
    data = json.loads(out)
    assert code == 0 and data["isometric"] is True and data["witness"] is not None


def test_emitted_space_reparses(tmp_path, capsys):
    a = write(tmp_path, "a.space", A_SPACE)
    out = str(tmp_path / "h.space")
    assert main(["forms", "hyperbolic", a, "--out", out]) == 0
    X = io.parse_space(open(out).read())
    assert X.dim == 2 and X.gram.tolist() == [[0, 1], [1, 0]]


def test_byte_identical_suite_output(capsys):
    argv = ["suite", "run", "hyperbolic_props", "--param", "target=6", "--seed", "4"]
    _, out1 = run(capsys, *argv)
    _, out2 = run(capsys, *argv)
    assert out1 == out2 and "runtime_ms" not in out1


def test_empty_report(tmp_path, capsys):
    cfg = write(tmp_path, "suite.config", "[suite]\nchecks =\ncatalog_max_order = 0\n")
    code, out = run(capsys, "suite", "all", "--config", cfg)
    assert code == 0 and out.strip() == "[]"


def test_failed_check_exit_code(tmp_path, capsys):
    code, out = run(capsys, "suite", "run", "cancellation", "--param", "target=30",
                    "--param", "mutation=1", "--seed", "1")
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["forms", "nonsense"]) == 2
    bad = write(tmp_path, "bad.space", "field 5 1\nepsilon 7\n")
    code = main(["forms", "witt", bad])
    err = capsys.readouterr().err
    assert code == 2 and "line 2" in err


def test_budget_violation_reported(tmp_path, capsys):
    X = fo.regular_form(gr.catalog_group("S3"), make_field(5))
    p = write(tmp_path, "x.space", io.format_space(X))
    code = main(["forms", "isometric", p, p, "--backend", "exhaustive", "--budget", "3"])
    err = capsys.readouterr().err
    assert code == 1 and "budget" in err


def test_realclosed_witt_list(capsys):
    code, out = run(capsys, "realclosed", "witt")
    data = json.loads(out)
    assert code == 0
    assert [d["witt_group"] for d in data] == ["Z", "0", "Z/2Z", "0", "Z", "Z", "Z", "Z/2Z", "Z/2Z", "Z"]


def test_table_format(capsys):
    code, out = run(capsys, "group", "info", "--group", "S3", "--format", "table")
    assert code == 0 and "6" in out


def test_group_file_with_generators():
    G = io.parse_group_text("group\ngens: (1 2 3); (1 2)\n")
    assert G.order == 6 and not G.is_abelian()
    with pytest.raises(io.ParseError) as exc:
        io.parse_group_text("group\ngens: (1 2 3)(1 2)\n")
    assert "line 2" in str(exc.value)
