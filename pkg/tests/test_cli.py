from pathlib import Path

import pytest

from coopsim import cli
from coopsim.corpus import CORPUS_TEXTS

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def test_corpus_subcommand(capsys):
    assert cli.main(["corpus"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == list(CORPUS_TEXTS)


def test_parse_canonicalizes(tmp_path, capsys):
    src = tmp_path / "stmts.txt"
    src.write_text('p[promise!pi:"A  Promise"]q\n# comment\n\n')
    assert cli.main(["parse", str(src)]) == 0
    out = capsys.readouterr().out.strip()
    assert out == 'p[pi:"A  Promise"]q'


def test_parse_reports_errors(tmp_path, capsys):
    src = tmp_path / "stmts.txt"
    src.write_text('p[pi:"ok"]q\np[broken\n')
    assert cli.main(["parse", str(src)]) == 2
    captured = capsys.readouterr()
    assert captured.out.strip() == 'p[pi:"ok"]q'
    assert "line 2" in captured.err


def test_run_trace_and_exit_codes(capsys):
    assert cli.main(["run", str(SCENARIOS / "thread2.coop"), "--trace", "--quiet"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("t=0 trust subject=q target=m2")


def test_run_missing_file_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "no-such-file.coop"])
    assert exc.value.code == 2


def test_check_reports_each_expectation(capsys):
    assert cli.main(["check", str(SCENARIOS / "lor.coop"), "--quiet"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 5
    assert all(line.startswith("ok ") for line in out)


def test_check_fails_on_unmet_expectation(tmp_path, capsys):
    bad = tmp_path / "bad.coop"
    bad.write_text("trust q p = 1\ntick 1\nexpect-trust q p = 2\n")
    assert cli.main(["check", str(bad), "--quiet"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_tram_override_changes_result(tmp_path):
    assert (
        cli.main(
            ["check", str(SCENARIOS / "thread1.coop"), "--tram", "recency-history",
             "--quiet"]
        )
        == 1
    )
    assert (
        cli.main(
            ["check", str(SCENARIOS / "thread1.coop"), "--tram", "incremental",
             "--quiet"]
        )
        == 0
    )
