"""
Unit tests for the ``dpk`` command line.

Commands are driven through ``main(argv)``; output is read with capsys.
Expensive service calls are replaced with pytest-mock where the command
logic, not the computation, is under test.
"""

import json

import pytest

from src import main as cli
from src.models.summary import CheckResult, RecordResult, VerificationSummary
from src.services.verification_service import TableReport, VerificationService


def _run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _summary(passed):
    check = CheckResult(category="invariance", passed=passed, detail="gm: preserved")
    return VerificationSummary(records=[RecordResult(record_id="p7-d2-a6", characteristic=7, degree=2, checks=[check])])


def test_no_command_prints_help(capsys):
    """Without a subcommand the help is printed and the exit status is 2."""
    code, out, _ = _run(capsys)

    assert code == cli.EXIT_USAGE
    assert "usage: dpk" in out


def test_unknown_option_is_a_usage_error(capsys):
    """argparse rejects unknown formats with status 2."""
    with pytest.raises(SystemExit) as exc_info:
        cli.main(["exc", "--degree", "3", "--format", "yaml"])

    assert exc_info.value.code == 2


def test_version(capsys):
    """--version prints the application name and version."""
    with pytest.raises(SystemExit) as exc_info:
        cli.main(["--version"])

    assert exc_info.value.code == 0
    assert capsys.readouterr().out.strip() == "delpezzo-kit 0.1.0"


def test_exc_text(capsys):
    """27 lines on a cubic surface."""
    code, out, _ = _run(capsys, "exc", "--degree", "3")

    assert code == cli.EXIT_OK
    assert out.strip() == "|Exc| = 27 for d=3"


def test_exc_list_prints_vectors(capsys):
    """--list prints one vector per line."""
    code, out, _ = _run(capsys, "exc", "--degree", "8", "--list")

    assert code == cli.EXIT_OK
    assert out.splitlines()[1:] == ["  (0, 1)"]


def test_roots_json(capsys):
    """E8 has 240 roots."""
    code, out, _ = _run(capsys, "roots", "--degree", "1", "--format", "json")

    payload = json.loads(out)
    assert code == cli.EXIT_OK
    assert payload["count"] == 240
    assert len(payload["roots"]) == 240
    assert payload["degree"] == 1


def test_invalid_degree_is_reported(capsys):
    """Degrees outside 1..8 are input errors."""
    code, _, err = _run(capsys, "roots", "--degree", "9")

    assert code == cli.EXIT_USAGE
    assert err.startswith("error: degree must lie in 1..8")
    assert err.count("degree must lie in 1..8") == 1


def test_embed_shows_representatives(capsys):
    """E6 in degree 3 has one class with six simple roots."""
    code, out, _ = _run(capsys, "embed", "--type", "E6", "--degree", "3")

    lines = out.splitlines()
    assert code == cli.EXIT_OK
    assert lines[0] == "E6 in E_6: 1 embedding class(es)"
    assert len(lines) == 2 + 6


def test_reduce_json(capsys):
    """A3 in degree 4 reports two classes and agreeing criteria."""
    code, out, _ = _run(capsys, "reduce", "--type", "A3", "--degree", "4", "--format", "json")

    payload = json.loads(out)
    assert code == cli.EXIT_OK
    assert payload["type"] == "A3"
    assert len(payload["classes"]) == 2
    assert payload["criteria_agree"] is True
    assert payload["listed_nonunique"] is True


def test_reduce_rejects_bad_type(capsys):
    """Non-ADE labels are input errors."""
    code, _, err = _run(capsys, "reduce", "--type", "B3", "--degree", "4")

    assert code == cli.EXIT_USAGE
    assert "B3" in err


def test_tables_diff_passes(capsys):
    """The characteristic 5, degree 3 table matches the bundled one."""
    code, out, _ = _run(capsys, "tables", "--char", "5", "--degree", "3", "--diff", "--format", "json")

    payload = json.loads(out)
    assert code == cli.EXIT_OK
    assert payload["tables"] == {"3": ["A4", "A4+A1"]}
    assert payload["passed"] is True


def test_tables_diff_failure_exits_one(capsys, mocker):
    """A differing table exits with status 1."""
    report = TableReport(characteristic=5, generated={3: ["A4"]}, expected={3: ["A4", "A4+A1"]}, diff=True)
    mocker.patch.object(VerificationService, "run_tables", return_value=report)

    code, out, _ = _run(capsys, "tables", "--char", "5", "--diff")

    assert code == cli.EXIT_FAILURE
    assert "missing    A4+A1" in out


def test_tables_unsupported_characteristic(capsys):
    """Characteristic 2 is not supported."""
    code, _, err = _run(capsys, "tables", "--char", "2")

    assert code == cli.EXIT_USAGE
    assert "characteristic 2 is not supported" in err


def test_catalog_json(capsys):
    """Characteristic 7 lists sixteen types, A6 as the only non-equivariant one."""
    code, out, _ = _run(capsys, "catalog", "--char", "7", "--format", "json")

    rows = json.loads(out)["types"]
    assert code == cli.EXIT_OK
    assert len(rows) == 16
    assert [r["type"] for r in rows if r["nonequivariant"]] == ["A6"]
    assert {"type": "A6", "normal_form": "x*y + z^7", "tjurina": 7, "nonequivariant": True} in rows


def test_catalog_text_marks_nonequivariant(capsys):
    """Non-equivariant types are starred."""
    code, out, _ = _run(capsys, "catalog", "--char", "5")

    assert code == cli.EXIT_OK
    assert "  * A4     tau=5   x*y + z^5" in out.splitlines()


def test_classify_text(capsys):
    """x*y + z^5 over F_5 is an A4 point with Tjurina number 5."""
    code, out, _ = _run(capsys, "classify", "--char", "5", "x*y + z^5")

    assert code == cli.EXIT_OK
    assert out.splitlines()[0] == "A4  (corank 1, tau = 5)"


def test_classify_json_in_characteristic_three(capsys):
    """Both E6 coindices are distinguished in characteristic 3."""
    code, out, _ = _run(capsys, "classify", "--char", "3", "--format", "json", "z^2 + x^3 + y^4 + x^2*y^2")

    payload = json.loads(out)
    assert code == cli.EXIT_OK
    assert payload["type"] == "E6^1"
    assert payload["tjurina"] == 7


def test_classify_rejects_non_rdp(capsys):
    """A triple point is an input error."""
    code, _, err = _run(capsys, "classify", "--char", "5", "x^3 + y^3 + z^3")

    assert code == cli.EXIT_USAGE
    assert "not a double point" in err


def test_verify_single_record(capsys):
    """The Klein quartic double cover passes."""
    code, out, _ = _run(capsys, "verify", "--char", "7", "--id", "p7-d2-a6")

    assert code == cli.EXIT_OK
    assert out.splitlines()[0].startswith("PASS  p7-d2-a6")
    assert out.rstrip().endswith("1/1 records passed")


def test_verify_unknown_record(capsys):
    """An unknown record id is a usage error."""
    code, out, _ = _run(capsys, "verify", "--char", "7", "--id", "p7-d9-none")

    assert code == cli.EXIT_USAGE
    assert out == ""


def test_verify_failure_exits_one(capsys, mocker):
    """A failed check makes verify exit with status 1."""
    mocker.patch.object(VerificationService, "verify_characteristics", return_value=_summary(False))

    code, out, _ = _run(capsys, "verify", "--char", "7", "--format", "json")

    assert code == cli.EXIT_FAILURE
    assert json.loads(out)["passed"] is False


def test_all_combines_reports(capsys, mocker):
    """all passes when the counts, every table and every record pass."""
    mocker.patch.object(VerificationService, "verify_characteristics", return_value=_summary(True))
    run_tables = mocker.patch.object(
        VerificationService, "run_tables", side_effect=lambda p, diff=False: TableReport(characteristic=p, diff=diff)
    )

    code, out, _ = _run(capsys, "all", "--format", "json")

    payload = json.loads(out)
    assert code == cli.EXIT_OK
    assert payload["counts"]["8"] == {"exceptional": 240, "roots": 240}
    assert payload["passed"] is True
    assert [t["characteristic"] for t in payload["tables"]] == [3, 5, 7]
    assert run_tables.call_count == 3


def test_all_fails_on_one_record(capsys, mocker):
    """A single failing record fails the whole run."""
    mocker.patch.object(VerificationService, "verify_characteristics", return_value=_summary(False))
    mocker.patch.object(
        VerificationService, "run_tables", side_effect=lambda p, diff=False: TableReport(characteristic=p, diff=diff)
    )

    code, _, _ = _run(capsys, "all")

    assert code == cli.EXIT_FAILURE


def test_keyboard_interrupt_exits_130(capsys, mocker):
    """Ctrl-C maps to status 130."""
    mocker.patch.dict(cli.COMMANDS, {"exc": mocker.Mock(side_effect=KeyboardInterrupt)})

    code, _, _ = _run(capsys, "exc", "--degree", "3")

    assert code == cli.EXIT_INTERRUPTED


def test_missing_data_dir_is_reported(capsys, monkeypatch, tmp_path):
    """A data directory without the catalog is an input error, not a traceback."""
    monkeypatch.setenv("DPK_DATA_DIR", str(tmp_path))

    code, _, err = _run(capsys, "verify", "--char", "7")

    assert code == cli.EXIT_USAGE
    assert "cannot load RDP catalog" in err
