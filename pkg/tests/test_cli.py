import json
import subprocess
import sys
from pathlib import Path

import pytest

from gammalab.cli.format import FormatError, canonical_json, parse_document, parse_text, resolve
from gammalab.cli.main import main

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"


def _check(tmp_path, text, *flags):
    path = tmp_path / "f.gl"
    path.write_text(text)
    return main(["check", str(path), *flags])


def test_minimal_file_parses():
    env = resolve(parse_text("monoid Bool builtin boolean\nsemiring B3 builtin b3\n"))
    assert env["B3"][0] == "semiring"


def test_dangling_reference_names_the_module():
    doc = parse_text((EXAMPLES / "dangling_reference.gl").read_text())
    with pytest.raises(FormatError, match="'M'"):
        resolve(doc)


def test_dimension_mismatch():
    text = "monoid Bad\n  table\n    0 1 2\n    1 1 2\nend\n"
    with pytest.raises(FormatError, match="dimension mismatch"):
        resolve(parse_text(text))


def test_unknown_keyword_and_unknown_json_key():
    with pytest.raises(FormatError, match="unknown keyword"):
        parse_text("monad X builtin boolean\n")
    doc = json.loads(canonical_json(parse_text("monoid Bool builtin boolean\n")))
    doc["objects"][0]["colour"] = "red"
    with pytest.raises(FormatError, match="unknown keys"):
        parse_document(json.dumps(doc))


def test_canonical_json_round_trip():
    for path in EXAMPLES.glob("*.gl"):
        doc = parse_document(path.read_text())
        text = canonical_json(doc)
        assert canonical_json(parse_document(text)) == text


def test_conflation_declaration_and_directive_share_a_keyword():
    doc = parse_text("conflation c : i p\nconflation c\n")
    assert doc["objects"][0]["kind"] == "conflation"
    assert doc["directives"][0]["verb"] == "conflation"


@pytest.mark.parametrize("name,status", [("b3_regular.gl", 0), ("corrupted_module.gl", 1),
                                         ("dangling_reference.gl", 3)])
def test_example_exit_statuses(name, status, capsys):
    assert main(["check", str(EXAMPLES / name)]) == status


def test_corrupted_module_prints_m1_witness(capsys):
    main(["check", str(EXAMPLES / "corrupted_module.gl")])
    out = capsys.readouterr().out
    assert "M1: fail  witness" in out


def test_unavailable_exit_status(tmp_path, capsys):
    text = ("monoid Bool builtin boolean\nsemiring B3 builtin b3\n"
            "module RR over B3 catalog R+R\ntensor RR RR 3 2\n")
    assert _check(tmp_path, text, "--max-tensor-classes", "16") == 2


def test_fail_fast_stops_early(tmp_path, capsys):
    text = (EXAMPLES / "corrupted_module.gl").read_text() + "check-semiring B3\n"
    report = tmp_path / "r.json"
    assert _check(tmp_path, text, "--fail-fast", "--emit-report", str(report)) == 1
    assert len(json.loads(report.read_text())["directives"]) == 2


def test_threads_do_not_change_the_report(tmp_path, capsys):
    reports = []
    for threads in ("1", "4"):
        out = tmp_path / f"r{threads}.json"
        main(["check", str(EXAMPLES / "b3_regular.gl"), "--threads", threads,
              "--emit-report", str(out)])
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]


def test_report_is_replayable(tmp_path, capsys):
    """The M3 witness printed for the corrupted module re-fails through the API."""
    out = tmp_path / "r.json"
    main(["check", str(EXAMPLES / "corrupted_module.gl"), "--emit-report", str(out)])
    report = json.loads(out.read_text())
    w = report["directives"][1]["reports"][0]["witnesses"]["M3"]
    env = resolve(parse_text((EXAMPLES / "corrupted_module.gl").read_text()))
    M = env["Bad"][1]
    args = [0 if a == "*" else a for a in w["args"]]
    assert M.act(2, [args[0], args[2]], args[1], w["params"]) != M.carrier.zero


def test_explain_and_formats(capsys):
    assert main(["explain", "tensor"]) == 0
    assert "tensor M N" in capsys.readouterr().out
    assert main(["explain", "nonsense"]) == 3
    assert main(["formats"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gammalab", "explain"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and "check-semiring" in proc.stdout
