import csv
import io
import json
import subprocess
import sys

import pytest

from gapbound.cli import run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_sharp_family_subcommand():
    code, out, _ = run("paper-example", "--k", "3", "--m", "2", "--order", "50", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["is_sharp"]
    assert all(r["slack"] == 0 for r in doc["rows"])
    assert doc["height"] == 3 and doc["s1_count"] == 2


def test_check_theorem_cubic_parameter():
    code, out, _ = run("check-theorem", "--f", "1/(1-t)", "--x", "t + t^3", "--point", "0", "--order", "40")
    assert code == 0 and out.rstrip().endswith("PASS")


def test_gaps_polynomial_rejected():
    code, _, err = run("gaps", "--f", "t^2", "--x", "t", "--point", "0")
    assert code == 2 and "PolynomialInParameter" in err


def test_gaps_unnormalized_rejected_then_normalized():
    code, _, err = run("gaps", "--f", "t/(1-t)")
    assert code == 2 and "NotNormalized" in err
    code, out, _ = run("gaps", "--f", "t/(1-t)", "--normalize", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["normalized_by"] == 1 and doc["exponents"][:3] == [0, 1, 2]


def test_not_a_local_parameter():
    code, _, err = run("check-theorem", "--f", "1/(1-t)", "--x", "t^2")
    assert code == 2 and "NotALocalParameter" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["check-theorem", "--f", "1 +"],
        ["check-theorem", "--f", "t^(1/2)"],
        ["check-theorem", "--f", "1/(1-t)", "--point", "abc"],
        ["check-theorem", "--f", "1/(1-t)", "--order", "0"],
        ["nonsense"],
        ["check-theorem"],
        ["campaign", "--trials", "0"],
        ["campaign", "--trials", "2", "--order", "3", "--max-degree", "6"],
        ["paper-example", "--k", "2", "--m", "3"],
    ],
)
def test_usage_errors_exit_1(argv):
    code, _, err = run(*argv)
    assert code == 1 and err


def test_expand_default_parameter_shifts_point():
    code, out, _ = run("expand", "--f", "1/t", "--point", "1", "--order", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [(t["k"], t["coefficient"]) for t in doc["terms"]] == [(0, "1/1"), (1, "-1/1"), (2, "1/1")]


def test_expand_text():
    code, out, _ = run("expand", "--f", "t", "--x", "t + t^3", "--order", "6")
    assert code == 0 and out == "(1/1)*x^1 + (-1/1)*x^3 + (3/1)*x^5 + O(x^6)\n"


def test_json_fields():
    code, out, _ = run("lemma2", "--f", "1/(1-t)", "--n", "2", "--order", "20", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    for key in ("version", "f", "x", "point", "order", "height", "s1_count", "s2_count", "s2_sum",
                "supp_x_count", "rows", "lemma2", "pass"):
        assert key in doc
    assert set(doc["rows"][0]) >= {"n", "a_n", "alpha_n", "theorem_rhs", "corollary_rhs", "slack"}
    assert doc["lemma2"]["c"] == [1, -1, 1] and doc["lemma2"]["hF"] == 2 and doc["lemma2"]["v_pF"] == 2
    assert doc["point"] == "0/1"


def test_csv_rows():
    code, out, _ = run("check-theorem", "--f", "1/(1-t)", "--order", "6", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["n", "a_n", "theorem_rhs", "corollary_rhs", "slack"]
    assert rows[1:] == [[str(n), str(n), str(n), str(n), "0"] for n in range(1, 6)]


def test_check_prop_and_rr():
    code, out, _ = run("check-prop", "--f", "1/(1-t)", "--x", "t + t^3", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and all(c["holds"] for c in doc["prop_checks"])
    code, out, _ = run("check-rr", "--x", "t^2 - t", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rr_check"]["lhs"] == doc["rr_check"]["rhs"] == 1


def test_check_corollary():
    code, out, _ = run("check-corollary", "--f", "1/(1-t)", "--x", "t + t^3", "--order", "20", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rr_check"]["lhs"] == 2
    assert all(r["corollary_rhs"] >= r["theorem_rhs"] for r in doc["rows"])


def test_determinism():
    argv = ["campaign", "--trials", "3", "--seed", "11", "--order", "30", "--format", "json"]
    assert run(*argv) == run(*argv)
    argv = ["lemma2", "--f", "(2 + t)/(1 - t - t^2)", "--x", "t/(1-t)", "--n", "3", "--format", "json"]
    assert run(*argv) == run(*argv)


def test_campaign_forced_sharp_family():
    code, out, _ = run("campaign", "--trials", "1", "--x", "t", "--f", "1 + t^3/(1 - t^2)", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["all_sharp"] and doc["min_slack"] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gapbound", "check-rr", "--x", "t + t^3"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "PASS" in proc.stdout
