"""In-process CLI runs: report schema, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from conftest import spec_path
from ranklab import validate_report
from ranklab.cli import run


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def report(capsys, *argv):
    code, out, err = cli(capsys, *argv)
    assert err == ""
    payload = json.loads(out)
    assert validate_report(payload) == []
    return code, payload


def rational(num: int, den: int) -> dict:
    return {"num": str(num), "den": str(den)}


def test_validate_echoes_normal_form(capsys):
    code, payload = report(capsys, "validate", "--spec", spec_path("chacon.json"))
    assert code == 0
    assert payload["result"]["valid"] is True
    assert payload["result"]["spec"]["family"]["kind"] == "inf_chacon"
    assert payload["evidence"]["heightPreview"][:4] == [1, 8, 50, 302]


def test_heights_frozen(capsys):
    code, payload = report(
        capsys, "heights", "--spec", spec_path("chacon.json"), "--stages", 4
    )
    assert code == 0
    assert payload["result"]["heights"] == [1, 8, 50, 302]


def test_descendants_with_approx(capsys):
    args = (
        "descendants", "--spec", spec_path("chacon.json"),
        "--base", "1:0", "--to", "3",
    )
    code, payload = report(capsys, *args)
    assert code == 0
    res = payload["result"]
    assert (res["count"], res["min"], res["max"]) == (9, 0, 118)
    assert res["levelWidth"] == rational(1, 27)
    assert len(payload["evidence"]["values"]) == 9
    assert "approx" not in res
    _, with_approx = report(capsys, *args, "--approx")
    assert with_approx["result"]["approx"]["levelWidth"] == pytest.approx(1 / 27)


def test_diffset_counts(capsys):
    code, payload = report(
        capsys, "diffset", "--spec", spec_path("chacon.json"),
        "--base", "1:0", "--to", "2",
    )
    assert code == 0
    assert payload["result"]["maxDifference"] == 17
    assert payload["evidence"]["positive"] == [[8, 1], [9, 1], [17, 1]]


def test_ap_cap_drives_exit_code(capsys):
    code, payload = report(
        capsys, "ap", "--spec", spec_path("chacon.json"),
        "--base", "1:0", "--to", "3", "--max-len", "14",
    )
    assert code == 0
    assert payload["result"]["longest"] == 4
    assert payload["result"]["capReached"] is False
    assert [42, 2] in payload["evidence"]["runs"]

    code, payload = report(
        capsys, "ap", "--spec", spec_path("dyadic.json"),
        "--base", "0:0", "--to", "3", "--max-len", "3",
    )
    assert code == 2
    assert payload["result"]["capReached"] is True


def test_partners_found_and_explicit_shift(capsys):
    code, payload = report(
        capsys, "partners", "--spec", spec_path("chacon.json"), "--stage", "1"
    )
    assert code == 0
    res = payload["result"]
    assert res["found"] is True
    assert res["z"] == 8
    assert res["pairCount"] == 1
    assert res["delta"] == rational(1, 3)

    code, payload = report(
        capsys, "partners", "--spec", spec_path("chacon.json"),
        "--stage", "1", "--shift", "9",
    )
    assert code == 0
    assert payload["result"]["sizeAtZ"] == 1
    assert payload["result"]["sizeAtZPlus1"] == 0


def test_partners_not_found(capsys):
    code, payload = report(
        capsys, "partners", "--spec", spec_path("dyadic.json"), "--stage", "2"
    )
    assert code == 0
    assert payload["result"] == {"found": False}


def test_membership_spec_and_raw_alphabet_agree(capsys):
    via_spec = report(
        capsys, "membership", "--spec", spec_path("tq41.json"),
        "--digits", "3", "--target", "42",
    )[1]
    via_alphabet = report(
        capsys, "membership", "--k", "5", "--alphabet", "0,1,3,4",
        "--digits", "3", "--target", "42",
    )[1]
    assert via_spec["result"] == via_alphabet["result"]
    assert via_spec["result"]["member"] is True
    assert via_spec["result"]["representation"] == [2, 3, 1]
    assert via_spec["result"]["base"] == 5
    # Same digits, but the provenance (and so the fingerprint) differs.
    assert via_spec["specFingerprint"] != via_alphabet["specFingerprint"]


def test_digit_source_must_be_unambiguous(capsys):
    code, out, err = cli(
        capsys, "membership", "--spec", spec_path("tq41.json"),
        "--k", "5", "--alphabet", "0,1,3,4", "--digits", "2", "--target", "0",
    )
    assert code == 64
    assert out == ""
    assert "usage error" in err

    code, _, err = cli(capsys, "membership", "--digits", "2", "--target", "0")
    assert code == 64
    assert "usage error" in err


def test_gaps_frozen_recursion(capsys):
    code, payload = report(
        capsys, "gaps", "--k", "9", "--alphabet", "0,2,3,5,6,8", "--digits", "3"
    )
    assert code == 0
    res = payload["result"]
    assert res["g"] == 1
    assert res["recursion"] == [1, 4, 13]
    assert res["brute"] == 13
    assert res["matches"] is True
    assert payload["evidence"]["unitGaps"] == [7]


def test_coverage_passes(capsys):
    code, payload = report(
        capsys, "coverage", "--spec", spec_path("tq41.json"), "--digits", "3"
    )
    assert code == 0
    assert payload["result"]["passed"] is True
    assert payload["evidence"]["failures"] == []


def test_gamma_frozen(capsys):
    code, payload = report(
        capsys, "gamma", "--spec", spec_path("tq41.json"), "--multipliers", "2,3"
    )
    assert code == 0
    assert payload["result"] == {"n": 1, "m": 1, "gamma": 1}


def test_conservativity_frozen(capsys):
    code, payload = report(
        capsys, "conservativity", "--spec", spec_path("chacon.json"),
        "--multipliers", "1,1", "--base", "0", "--horizon", "2",
    )
    assert code == 0
    assert payload["result"]["bestFraction"] == rational(65, 81)
    assert payload["result"]["verdict"] == "inconclusive"


def test_ergodic_match_witness_in_evidence(capsys):
    code, payload = report(
        capsys, "ergodic-match", "--spec", spec_path("chacon.json"),
        "--multipliers", "1,-1", "--shifts", "0,1", "--base", "1", "--horizon", "2",
    )
    assert code == 0
    assert payload["result"]["fraction"] == rational(1, 9)
    assert payload["result"]["verdict"] == "holds"
    witness = payload["evidence"]["witness"]
    assert witness["a"] == [9, 9]
    assert witness["d"] == [0, 17]
    assert witness["residual"] == 9


def test_pattern_cli(capsys):
    code, payload = report(
        capsys, "pattern", "--spec", spec_path("chacon.json"),
        "--moves", "0,1", "--base", "1", "--cutoff", "3",
    )
    assert code == 0
    assert payload["result"]["matched"]["confirmed"] == rational(1, 9)
    assert payload["result"]["bound"] == rational(1, 16)
    assert payload["result"]["verdict"] == "holds"


def test_mixing_needs_shifts_or_window(capsys):
    code, _, err = cli(
        capsys, "mixing", "--spec", spec_path("chacon.json"), "--base", "1:0"
    )
    assert code == 64
    assert "usage error" in err


def test_mixing_cli(capsys):
    code, payload = report(
        capsys, "mixing", "--spec", spec_path("mixing_window.json"),
        "--base", "0:0", "--shifts", "0,10,40",
    )
    assert code == 0
    res = payload["result"]
    assert res["verdict"] == "holds"
    assert res["entryCount"] == 3
    assert res["inWindow"] == 2
    assert res["violations"] == 0
    assert res["worstRatio"] == rational(1, 3)


def test_npc_cli_and_verdict_exit(capsys):
    code, payload = report(
        capsys, "npc", "--spec", spec_path("chacon.json"),
        "--kappa", "13", "--horizon", "6",
    )
    assert code == 0
    assert payload["result"]["verdict"] == "holds"
    assert payload["result"]["longest"] == 11
    assert payload["result"]["proofSup"] == rational(121, 10)

    code, payload = report(
        capsys, "npc", "--spec", spec_path("dyadic.json"),
        "--kappa", "2", "--horizon", "5",
    )
    assert code == 2
    assert payload["result"]["verdict"] == "fails"


def test_pwm_cli(capsys):
    code, payload = report(
        capsys, "pwm", "--spec", spec_path("tq41.json"),
        "--alpha", "2,-3", "--shifts", "0,1,2", "--base", "1",
    )
    assert code == 0
    assert payload["result"]["tailStage"] == 5
    assert payload["result"]["beta"] == rational(1, 4**15)
    assert payload["result"]["verdict"] == "holds"


def test_pwm_rejects_non_family_spec(capsys):
    code, out, err = cli(
        capsys, "pwm", "--spec", spec_path("chacon.json"),
        "--alpha", "2", "--shifts", "0,0", "--base", "1",
    )
    assert code == 1
    payload = json.loads(out)
    assert validate_report(payload) == []
    assert payload["result"]["error"]["type"] == "ParamOutOfRange"


def test_non_ergodic_failing_verdict_exit(capsys):
    code, payload = report(
        capsys, "non-ergodic", "--spec", spec_path("all_but_last.json"),
        "--alpha", "1,1", "--shifts", "0,1", "--base", "0", "--horizon", "5",
    )
    assert code == 2
    assert payload["result"]["verdict"] == "fails"
    assert payload["result"]["scope"] == "structural"


def test_asymmetry_cli(capsys):
    code, payload = report(
        capsys, "asymmetry", "--spec", spec_path("chacon.json"),
        "--base", "1", "--scale", "1", "--eval", "8",
    )
    assert code == 0
    assert payload["result"]["verdict"] == "holds"
    assert payload["result"]["zeroExact"] is True
    assert payload["result"]["forwardSide"]["confirmed"] == rational(1, 9)


def test_missing_spec_file_yields_error_report(capsys):
    code, out, err = cli(capsys, "heights", "--spec", "/no/such.json", "--stages", "3")
    assert code == 1
    assert err == ""
    payload = json.loads(out)
    assert validate_report(payload) == []
    assert payload["command"] == "heights"
    assert payload["result"]["error"]["type"] == "IoError"
    assert payload["inputs"]["argv"][0] == "heights"


def test_budget_exhaustion_yields_error_report(capsys, monkeypatch):
    monkeypatch.setenv("RANKLAB_BUDGET", "100")
    code, out, _ = cli(
        capsys, "mixing", "--spec", spec_path("chacon.json"),
        "--base", "0:0", "--window", "3",
    )
    assert code == 1
    payload = json.loads(out)
    assert validate_report(payload) == []
    assert payload["result"]["error"]["type"] == "BudgetExceeded"


def test_usage_errors(capsys):
    code, _, err = cli(capsys, "heights", "--spec", spec_path("chacon.json"))
    assert code == 64
    assert err != ""
    code, _, err = cli(capsys, "frobnicate")
    assert code == 64
    code, _, err = cli(capsys, "heights", "--spec", "x", "--stages", "-1")
    assert code == 64


def test_json_flag_writes_file(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = cli(
        capsys, "npc", "--spec", spec_path("chacon.json"),
        "--kappa", "13", "--horizon", "6", "--json", str(out_path),
    )
    assert code == 0
    assert out == ""
    payload = json.loads(out_path.read_text())
    assert validate_report(payload) == []
    assert payload["result"]["verdict"] == "holds"


def test_reports_are_deterministic(capsys):
    args = (
        "asymmetry", "--spec", spec_path("chacon.json"),
        "--base", "1", "--scale", "1", "--eval", "8",
    )
    _, first = report(capsys, *args)
    _, second = report(capsys, *args)
    first.pop("durationMs")
    second.pop("durationMs")
    assert first == second


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert "ranklab" in capsys.readouterr().out
