import json

import pytest

from strata.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from strata.grammar import parse_class
from strata.ring import ClassElement, standard_ring


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_degree_text(capsys):
    code, out, _ = run(capsys, "degree", "A_2", "--d", "4")
    assert code == EXIT_OK
    assert out.splitlines() == ["12(d-1)(d-2)", "d=4: 72"]


def test_degree_json(capsys):
    code, out, _ = run(capsys, "degree", "A4", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["type"] == "A_4"
    assert data["matches_golden"] is True
    assert data["universality_bounds"] == {"determinacy": 5, "codimension": 3}


def test_degree_is_deterministic(capsys):
    first = run(capsys, "degree", "D_7", "--format", "json")
    assert run(capsys, "degree", "D_7", "--format", "json") == first


def test_degree_below_range_warns(capsys):
    code, _, err = run(capsys, "degree", "E_12", "--d", "3")
    assert code == EXIT_OK
    assert "below the universality range" in err


def test_quartic_a7(capsys):
    code, out, _ = run(capsys, "degree", "A_7", "--d", "4")
    assert code == EXIT_OK
    assert "504" in out


def test_unknown_type(capsys):
    code, _, err = run(capsys, "degree", "A_44")
    assert code == EXIT_USAGE
    assert "did you mean" in err and "A_4" in err


def test_missing_argument_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["degree"])
    assert exc.value.code == 2


def test_multidegree_round_trips(capsys):
    code, out, _ = run(capsys, "multidegree", "A_5", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["matches_golden"] is True
    code, text, _ = run(capsys, "multidegree", "A_5")
    assert parse_class(text.strip(), standard_ring()) == ClassElement.from_json(data["class"])


def test_tree(capsys):
    code, out, _ = run(capsys, "tree", "A_6")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("A_6 --(x2^2 -> 0)-->")
    assert any("D_7" in line for line in lines[1:])


def test_tree_unsupported(capsys):
    code, out, _ = run(capsys, "tree", "E_14")
    assert code == EXIT_FAIL
    assert "unsupported" in out


def test_ideal(capsys):
    code, out, _ = run(capsys, "ideal", "A_4", "--format", "json")
    assert code == EXIT_OK
    assert "a30" in json.loads(out)["generators"]


def test_verify_tables_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tables", "--format", "json")
    report = json.loads(out)
    assert report["passed"] + report["failed"] == len(report["cases"])
    # A_7, D_8 and W_25 rows are known not to reproduce
    assert code == (EXIT_FAIL if report["failed"] else EXIT_OK)
    failing = {c["case"] for c in report["cases"] if not c["ok"]}
    assert "degree:A_2" not in failing


def test_missing_step_exits_fail(capsys):
    code, _, err = run(capsys, "multidegree", "J_2,1")
    assert code == EXIT_FAIL
    assert "J_2,1" in err
