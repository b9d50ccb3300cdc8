import json
import subprocess
import sys

import pytest

from conftest import DOT_DELTA, EXPANDING, KAKUTANI, NEPHEW, SALEM, THUE_MORSE
from subdiag.cli import main
from subdiag.report import parse_report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return parse_report(out)


def test_info(capsys):
    rep = report(capsys, "info", SALEM)
    assert rep["classification"] == "Salem" and rep["weights"] == "1,2"
    assert rep["matrix"] == "2,1;2,3" and rep["lambda_o"] == "1"


def test_fixpoint(capsys):
    code, out, _ = run(capsys, "fixpoint", THUE_MORSE, "--n", "8")
    assert (code, out) == (0, "01101001\n")


def test_diagonal(capsys):
    rep = report(capsys, "diagonal", THUE_MORSE, "--seed", "(0,1)", "--as-substitution", "--n", "4")
    assert rep["sequence"] == "(0,1) (1,0) (1,0) (0,1)"
    assert rep["legend.0"] == "(0,1)"


def test_balance(capsys):
    rep = report(capsys, "balance", SALEM)
    assert rep["status"] == "Finite" and rep["letters"] == "6"
    assert rep["decomposition"].startswith("(010|11,0) (11|010,1)")
    rep = report(capsys, "balance", NEPHEW, "--weights", "balanced")
    assert rep["letters"] == "4"


def test_balance_cap_exit_code(capsys):
    code, _, err = run(capsys, "balance", SALEM, "--weights", "balanced", "--caps", "64,500")
    assert code == 4 and "cap exceeded" in err


def test_balance_empty(capsys):
    rep = report(capsys, "balance", EXPANDING)
    assert rep["status"] == "Empty"


def test_density(capsys):
    rep = report(capsys, "density", SALEM, "--n", "10000", "--series", "anchor:0/0/-1")
    assert rep["theorem.kind"] == "DoesNotExist"
    assert rep["induced.kind"] == "DoesNotExist"
    assert rep["series.tag"] == "anchored:(0|0,-1)"
    rep = report(capsys, "density", KAKUTANI, "--n", "10000")
    assert rep["induced.kind"] == "Exists" and rep["induced.value"] == "1/2"
    assert rep["generic_overlap"] == "1/2"


def test_density_powers_series(capsys):
    rep = report(capsys, "density", "1->123;2->222;3->333", "--n", "9",
                 "--series", "powers:3:5:2:2:1")
    assert rep["series.checkpoints"] == "6,18,54,162,486"


def test_selfsim(capsys):
    rep = report(capsys, "selfsim", SALEM, "--expect", DOT_DELTA, "--cells", "100000")
    assert rep["lambda"] == "4" and rep["eigenvector"] == "1,2"
    assert rep["diagonal.letters"] == "9" and rep["isomorphic"] == "True"
    assert rep["freq.exact.(a1,a1)"] == "1/3"


def test_curves_and_tiling(capsys, tmp_path):
    out = tmp_path / "c.svg"
    rep = report(capsys, "curves", EXPANDING, "--order", "2", "--out", str(out))
    assert out.read_text().startswith("<?xml") and len(rep["distances"].split(",")) == 2
    out = tmp_path / "t.svg"
    report(capsys, "tiling", SALEM, "--iter", "2", "--selfsimilar", "--out", str(out))
    assert "<rect" in out.read_text()


def test_json_output(capsys):
    code, out, _ = run(capsys, "info", THUE_MORSE, "--json")
    data = json.loads(out)
    assert code == 0 and data["format"] == "subdiag-report" and data["fields"]["continuous"] == "True"


def test_exit_codes(capsys):
    assert run(capsys, "info", "0->02;1->1")[0] == 2
    assert run(capsys, "selfsim", EXPANDING)[0] == 3
    assert run(capsys, "density", "0->10;1->01")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["survey"])
    assert exc.value.code == 2


def test_survey(capsys):
    rep = report(capsys, "survey", "--matrix", "2,1,2,3", "--n", "20000", "--jobs", "2")
    assert rep["rows"] == "12"
    assert (rep["tally.DoesNotExist"], rep["tally.Periodic"], rep["tally.Exists"],
            rep["tally.Inconclusive"]) == ("9", "1", "1", "1")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "subdiag", "fixpoint", SALEM, "--n", "5"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "01011\n"
