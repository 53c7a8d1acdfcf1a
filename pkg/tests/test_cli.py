import json
from fractions import Fraction

import pytest

from indefkahler import tensorfile
from indefkahler.cli import main
from indefkahler.curvature import model_tensor
from indefkahler.errors import ParseError
from indefkahler.linalg import Space


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out if code == 0 else err)


def test_emit_check_round_trip_bytes(tmp_path, capsys):
    a, b, c = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    assert run(capsys, "emit-model", "--m", "2", "--signature", "+-", "--mu", "3/2", "-o", str(a))[0] == 0
    assert run(capsys, "check", str(a), "-o", str(b))[0] == 0
    assert run(capsys, "check", str(b), "-o", str(c))[0] == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_check_reports_mu(tmp_path, capsys):
    path = tmp_path / "m.txt"
    run(capsys, "emit-model", "--m", "3", "--signature=-++", "--mu=-2/3", "-o", str(path))
    code, report = run_json(capsys, "check", str(path))
    assert code == 0
    assert report["verdict"] == "ConstantHSC" and report["mu"] == "-2/3"
    assert report["mu_decimal"].startswith("-0.6666666")


def test_empty_entries_is_zero_model(tmp_path, capsys):
    path = tmp_path / "z.txt"
    path.write_text("format_version: 1\nm: 2\nsignature: +-\nentries:\n")
    code, report = run_json(capsys, "check", str(path))
    assert code == 0 and report["verdict"] == "ConstantHSC" and report["mu"] == "0"


def test_duplicate_entry_is_parse_error(tmp_path, capsys):
    text = "format_version: 1\nm: 1\nsignature: +\nentries:\n0 1 1 0 1\n0 1 1 0 1\n"
    with pytest.raises(ParseError) as exc:
        tensorfile.loads(text)
    assert exc.value.line == 6
    path = tmp_path / "d.txt"
    path.write_text(text)
    code, report = run_json(capsys, "check", str(path))
    assert code == 2 and report["error"] == "ParseError"
    assert "line 6" in report["detail"]


@pytest.mark.parametrize(
    "text",
    [
        "format_version: 2\nm: 1\nsignature: +\nentries:\n",
        "format_version: 1\nm: 2\nsignature: +\nentries:\n",
        "format_version: 1\nm: 1\nsignature: +\nentries:\n0 1 1 2 1\n",
        "format_version: 1\nm: 1\nsignature: +\nentries:\n0 1 1 0 0.5\n",
        "format_version: 1\nm: 1\nsignature: +\n",
        "format_version: 1\nm: 1\ncolour: +\nentries:\n",
    ],
)
def test_malformed_files(text):
    with pytest.raises(ParseError):
        tensorfile.loads(text)


def test_invalid_tensor_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("format_version: 1\nm: 2\nsignature: ++\nentries:\n0 1 2 3 1\n")
    code, report = run_json(capsys, "check", str(path))
    assert code == 2 and report["error"] == "InvalidTensor"
    assert "antisym12" in report["failed"]


def test_dumps_is_canonical():
    s = Space.from_signature("+")
    text = tensorfile.dumps(model_tensor(s, Fraction(6, 4)))
    assert text == tensorfile.dumps(tensorfile.loads(text))
    assert "3/2" in text and "6/4" not in text


def test_rigidity_unrealizable_exit_3(capsys):
    code, report = run_json(capsys, "rigidity", "--m", "1", "--signature", "+", "--hypothesis", "prop1",
                            "--pair-class", "pos-neg")
    assert code == 3 and report["error"] == "UnrealizableSignature"


def test_rigidity_unstable_exit_4(capsys):
    code, report = run_json(capsys, "rigidity", "--m", "2", "--signature", "+-", "--hypothesis", "prop1",
                            "--pair-class", "pos-neg", "--samples", "4")
    assert code == 4 and report["error"] == "RankNotStabilized"


def test_rigidity_and_witness_are_deterministic(tmp_path, capsys):
    args = ["rigidity", "--m", "2", "--signature", "+-", "--hypothesis", "prop1", "--pair-class", "+-",
            "--seed", "3"]
    first, second = run(capsys, *args), run(capsys, *args)
    assert first == second and first[0] == 0
    assert "verdict: SpanOfModel" in first[1]
    path = tmp_path / "t.txt"
    path.write_text("format_version: 1\nm: 2\nsignature: +-\nentries:\n")
    w = ["witness", str(path), "--bound", "10", "--max-trials", "3"]
    assert run(capsys, *w) == run(capsys, *w)


def test_witness_on_basis_element(tmp_path, capsys):
    out = tmp_path / "basis"
    code, report = run_json(capsys, "basis", "--m", "2", "--signature", "+-", "--out-dir", str(out),
                            "--cross-check")
    assert code == 0 and report["kaehler_dimension"] == 9 and report["same_span"]
    assert report["float_oracle_dimension"] == 9
    found = 0
    for f in report["files"]:
        code, w = run_json(capsys, "witness", f, "--bound", "1000000")
        assert code == 0
        found += w["result"] == "WitnessFound"
    assert found == 9


def test_expand_command(capsys):
    code, report = run_json(capsys, "expand", "--expression", "thm1")
    assert code == 0 and report["grouped_matches_mod_bianchi"] is True
    assert report["expansion.R(y,Jy,Jy,y)"] == "a^4"


def test_missing_file_exit_2(tmp_path, capsys):
    code, report = run_json(capsys, "check", str(tmp_path / "nope.txt"))
    assert code == 2 and report["error"] == "FileError"


def test_timing_is_opt_in(tmp_path, capsys):
    path = tmp_path / "z.txt"
    path.write_text("format_version: 1\nm: 1\nsignature: -\nentries:\n")
    assert "elapsed_seconds" not in run_json(capsys, "check", str(path))[1]
    assert "elapsed_seconds" in run_json(capsys, "check", str(path), "--timing")[1]
