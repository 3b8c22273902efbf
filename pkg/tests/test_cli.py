import json

import jsonschema
import pytest

from tidyscale.cli import load_schema, log_expr, sum_expr, validate_report

COMPANION = {"backend": "padic", "group": {"prime": 5}, "endomorphism": {"matrix": [["0", "-5"], ["1", "3"]]}}
DIAG_3 = {"backend": "padic", "group": {"prime": 3}, "endomorphism": {"matrix": [["1/3", "0", "0"], ["0", "1", "0"], ["0", "0", "3"]]}}
DIAG_PP = {
    "backend": "padic",
    "group": {"prime": 5},
    "endomorphism": {"matrix": [["1/5", "0"], ["0", "1/5"]]},
    "subgroups": {"H": {"span": [["1", "0"]]}},
}
C4_DOUBLE = {"backend": "finite", "group": {"factors": [4]}, "endomorphism": {"images": ["0", "2", "0", "2"]}}
SWAP = {
    "backend": "finite",
    "group": "C2xC2",
    "endomorphism": {"images": {"(0,0)": "(0,0)", "(0,1)": "(1,0)", "(1,0)": "(0,1)", "(1,1)": "(1,1)"}},
    "subgroups": {"U": {"elements": ["(0,0)", "(0,1)"]}},
}
SHIFT_N = {"backend": "shift", "group": {"structure_group": "C2", "index_set": "N"}, "endomorphism": {"map": "left-shift"}}
SHIFT_Z = {"backend": "shift", "group": {"structure_group": {"factors": [3]}, "index_set": "Z"}, "endomorphism": {"map": "left-shift"}}


def json_run(cli, *argv):
    code, out, err = cli(*argv, "--json")
    rep = json.loads(out) if out else None
    if rep is not None:
        validate_report(rep)
    return code, rep, err


def test_scale_companion_text(cli, instance_file):
    code, out, _ = cli("scale", instance_file(COMPANION))
    assert code == 0
    assert "s = 1, method = newton-polygon" in out


def test_scale_finite(cli, instance_file):
    code, rep, _ = json_run(cli, "scale", instance_file(C4_DOUBLE))
    assert code == 0 and rep["scale"] == 1
    assert rep["certificate"]["displacement"] == 1


def test_malformed_matrix_exit_2(cli, instance_file):
    bad = dict(COMPANION, endomorphism={"matrix": [["0", "-5"], ["1"]]})
    code, out, err = cli("scale", instance_file(bad))
    assert code == 2 and out == "" and "parse error" in err


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        {"backend": "padic", "group": {"prime": 5}, "endomorphism": {"matrix": [["0.5"]]}},
        {"backend": "padic", "group": {"prime": 5}, "endomorphism": {"matrix": [["1/0"]]}},
        {"backend": "padic", "group": {"prime": 6}, "endomorphism": {"matrix": [["1"]]}},
        {"backend": "padic", "group": {"prime": 5}, "endomorphism": {"matrix": [[0.5]]}},
        {"backend": "finite", "group": "C4", "endomorphism": {"images": [0, 1, 1, 3]}},
        {"backend": "finite", "group": "C4", "endomorphism": {"images": [0, 2, 0]}},
        {"backend": "finite", "group": "C4", "endomorphism": {"images": [0, 2, 0, 2]}, "subgroups": {"H": {"elements": ["1"]}}},
        {"backend": "shift", "group": {"structure_group": "C2", "index_set": "Q"}, "endomorphism": {"map": "left-shift"}},
        {"backend": "lie", "group": {}, "endomorphism": {}},
    ],
)
def test_parse_errors(cli, instance_file, doc):
    code, _, err = cli("decompose", instance_file(doc))
    assert code == 2, err


def test_missing_file_exit_2(cli, tmp_path):
    code, _, err = cli("scale", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in err


def test_tidy_padic_adapted_lattice(cli, instance_file):
    code, rep, _ = json_run(cli, "tidy", instance_file(DIAG_3))
    assert code == 0
    assert rep["tidy_subgroup"]["lattice_basis"] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert rep["displacement"] == rep["scale"] == 3


def test_tidy_finite_from_non_tidy_U(cli, instance_file):
    code, rep, _ = json_run(cli, "tidy", instance_file(SWAP))
    assert code == 0
    assert rep["input_displacement"] == 2
    assert rep["displacement"] == 1


def test_tidy_shift_is_whole(cli, instance_file):
    code, rep, _ = json_run(cli, "tidy", instance_file(SHIFT_Z))
    assert code == 0 and rep["tidy_subgroup"]["window"] is None


def test_tidy_padic_from_U(cli, instance_file):
    doc = dict(DIAG_3, subgroups={"U": {"lattice": [["1", "1", "0"], ["0", "9", "0"], ["0", "0", "1"]]}})
    code, rep, _ = json_run(cli, "tidy", instance_file(doc))
    assert code == 0 and rep["displacement"] == 3


def test_decompose_padic_blocks(cli, instance_file):
    code, rep, _ = json_run(cli, "decompose", instance_file(DIAG_3))
    d = rep["decomposition"]
    assert code == 0
    for name in ("con", "lev", "con_minus"):
        assert d[name]["payload"]["rank"] == 1
    assert d["con"]["payload"]["basis"] == [["0", "0", "1"]]
    assert d["con_minus"]["payload"]["basis"] == [["1", "0", "0"]]


def test_decompose_one_sided_shift(cli, instance_file):
    code, rep, _ = json_run(cli, "decompose", instance_file(SHIFT_N))
    d = rep["decomposition"]
    assert d["con_minus"]["payload"] == {"tag": "whole"}
    assert d["nub"]["payload"] == {"tag": "whole"}
    assert d["con"]["payload"] == {"tag": "finitely-supported"} and d["con"]["closed"] is False


def test_decompose_finite_sets(cli, instance_file):
    code, rep, _ = json_run(cli, "decompose", instance_file(C4_DOUBLE))
    d = rep["decomposition"]
    assert d["con"]["payload"]["elements"] == ["0", "1", "2", "3"]
    assert d["par_minus"]["payload"]["elements"] == ["0"]
    assert all(v["status"] == "computed" for v in d.values())


def test_entropy_padic_with_H(cli, instance_file):
    path = instance_file(DIAG_PP)
    code, out, _ = cli("entropy", path)
    assert code == 0
    assert "s = 25, h = ln 25 = 2·ln 5" in out
    assert "h = 2·ln 5 = ln 5 + ln 5" in out
    code, rep, _ = json_run(cli, "entropy", path)
    assert rep["h"] == "2·ln 5"
    assert rep["addition"] == {"scale_H": 5, "scale_quotient": 5, "h_H": "ln 5", "h_quotient": "ln 5", "sum": "ln 5 + ln 5", "holds": True}


def test_entropy_finite_is_zero(cli, instance_file):
    code, rep, _ = json_run(cli, "entropy", instance_file(C4_DOUBLE))
    assert code == 0 and rep["h"] == "0"


def test_entropy_shift_refuses(cli, instance_file):
    code, rep, err = json_run(cli, "entropy", instance_file(SHIFT_N))
    assert code == 4
    assert rep["reason"] == "con(α) not closed" and "con(α) not closed" in err
    assert rep["h"] is None
    assert rep["h_top"] == "ln 2"


def test_entropy_non_invariant_H_not_applicable(cli, instance_file):
    doc = dict(COMPANION, subgroups={"H": {"span": [["1", "0"]]}})
    code, _, err = cli("entropy", instance_file(doc))
    assert code == 4 and "invariant" in err


def test_verify_file_theorem(cli, instance_file):
    code, rep, _ = json_run(cli, "verify", instance_file(DIAG_PP), "--theorem", "C.b")
    assert code == 0
    assert [r["status"] for r in rep["reports"]] == ["pass"]


def test_verify_non_invariant_H_is_skip(cli, instance_file):
    doc = dict(COMPANION, subgroups={"H": {"span": [["1", "0"]]}})
    code, rep, _ = json_run(cli, "verify", instance_file(doc), "--theorem", "A")
    assert code == 0
    assert rep["reports"][0]["status"] == "skipped"
    assert rep["reports"][0]["reason"] == "precondition-violated"


def test_verify_failure_exit_1(cli, instance_file):
    zero = {"backend": "finite", "group": "C2", "endomorphism": {"images": [0, 0]}, "subgroups": {"H": {"elements": ["0", "1"]}}}
    code, rep, _ = json_run(cli, "verify", instance_file(zero), "--theorem", "B")
    assert code == 1 and rep["failures"] == 1


def test_verify_argument_errors(cli, instance_file):
    assert cli("verify")[0] == 2
    assert cli("verify", instance_file(C4_DOUBLE), "--theorem", "Q")[0] == 2


def test_precision_flag(cli, instance_file):
    code, rep, _ = json_run(cli, "scale", instance_file(COMPANION), "--precision", "1")
    assert code == 0 and rep["scale"] == 1


def test_text_and_json_agree_on_exit(cli, instance_file):
    path = instance_file(SHIFT_N)
    assert cli("entropy", path)[0] == cli("entropy", path, "--json")[0] == 4


def test_schemas_are_valid():
    for name in ("instance", "report"):
        jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_symbolic_logs():
    assert log_expr(1) == "0"
    assert log_expr(5) == "ln 5"
    assert log_expr(125) == "3·ln 5"
    assert log_expr(12) == "2·ln 2 + ln 3"
    assert sum_expr(5, 5) == "ln 5 + ln 5"
    assert sum_expr(1, 9) == "0 + ln 3 + ln 3"
