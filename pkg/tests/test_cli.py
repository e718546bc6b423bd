import json

import pytest

from wzwkit.cli import run


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_modular_data_report(capsys, tmp_path):
    code, out = _run(capsys, ["modular-data", "A1", "2", "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["schemaVersion"] == 1
    assert rep["command"] == "modular-data"
    assert rep["input"] == {"series": "A", "rank": 1, "level": 2}
    assert len(rep["payload"]["weights"]) == 3
    assert rep["payload"]["centralCharge"] == "3/2"
    assert all(c["pass"] for c in rep["checks"])
    assert rep["timingSeconds"] is None


def test_picard_report(capsys, tmp_path):
    code, out = _run(capsys, ["picard", "A1", "4", "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["payload"]["order"] == 2
    assert rep["payload"]["invariantFactors"] == [2]
    assert rep["payload"]["elements"][1]["twist"] == "0/1"  # h_J = k/4 = 1


def test_invariants_a1_6(capsys, tmp_path):
    code, out = _run(capsys, ["invariants", "A1", "6", "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["payload"]["algebraCount"] == 2  # Cardy and D-odd


def test_round_trip_payload(capsys, tmp_path):
    code, out = _run(capsys, ["modular-data", "A2", "1", "--cache-dir", str(tmp_path)])
    rep = json.loads(out)
    assert json.loads(json.dumps(rep["payload"])) == rep["payload"]


def test_byte_identical_invocations(capsys, tmp_path):
    argv = ["invariants", "A1", "4", "--cache-dir", str(tmp_path)]
    _, out1 = _run(capsys, argv)
    _, out2 = _run(capsys, argv)
    assert out1 == out2


def test_cache_hit_and_corruption(capsys, tmp_path):
    argv = ["modular-data", "A1", "3", "--cache-dir", str(tmp_path)]
    code, out1 = _run(capsys, argv)
    assert code == 0
    path = tmp_path / "A-1-3.json"
    assert path.is_file()
    blob = path.read_bytes()
    code, out2 = _run(capsys, argv)  # hit
    assert code == 0 and out2 == out1
    assert path.read_bytes() == blob
    path.write_text("{not json")
    code = run(argv)
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)["payload"]["centralCharge"] == "9/5"
    assert "corrupted" in captured.err
    assert path.read_bytes() == blob  # rewritten cleanly


def test_tampered_cache_is_recomputed(capsys, tmp_path):
    """A cache file that parses but has been edited fails the canonical
    round-trip check and is rebuilt."""
    argv = ["modular-data", "A1", "2", "--cache-dir", str(tmp_path)]
    _run(capsys, argv)
    path = tmp_path / "A-1-2.json"
    doc = json.loads(path.read_text())
    doc["conformalWeights"][1] = "1/7"
    path.write_text(json.dumps(doc, separators=(",", ":")))
    code = run(argv)
    captured = capsys.readouterr()
    assert code == 0
    assert "corrupted" in captured.err
    assert json.loads(captured.out)["payload"]["conformalWeights"][1] == "3/16"
    assert json.loads(path.read_text())["conformalWeights"][1] == "3/16"


def test_no_cache_flag(capsys, tmp_path):
    argv = ["modular-data", "A1", "3", "--cache-dir", str(tmp_path), "--no-cache"]
    code, _ = _run(capsys, argv)
    assert code == 0
    assert not (tmp_path / "A-1-3.json").exists()


def test_user_error_exit_codes(capsys, tmp_path):
    assert run(["modular-data", "Q1", "2", "--cache-dir", str(tmp_path)]) == 2
    capsys.readouterr()
    assert run(["modular-data", "A1", "0", "--cache-dir", str(tmp_path)]) == 2
    capsys.readouterr()
    assert run(["modular-data", "E8", "1", "--weyl-cap", "10",
                "--cache-dir", str(tmp_path)]) == 2  # GroupTooLarge surfaced cleanly
    err = capsys.readouterr().err
    assert "GroupTooLarge" in err


def test_unknown_subcommand_is_usage_error(capsys, tmp_path):
    assert run(["frobnicate", "A1", "2"]) == 2
    capsys.readouterr()


def test_verify_conjecture_strict(capsys, tmp_path):
    code, out = _run(capsys, ["verify-conjecture", "A1", "4", "--strict",
                              "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    assert all(a["passed"] for a in rep["payload"]["algebras"])


def test_twining_payload(capsys, tmp_path):
    code, out = _run(capsys, ["twining", "A3", "2", "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    with_fixed = [e for e in rep["payload"]["elements"] if e["fixedPoints"]]
    assert any(e.get("folded") == {"series": "A", "rank": 1, "level": 1} for e in with_fixed)


def test_boundaries_payload_marks_unavailable_phi(capsys, tmp_path):
    code, out = _run(capsys, ["boundaries", "D4", "2", "--cache-dir", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    notes = [a for a in rep["payload"]["algebras"] if a.get("boundaryCount") is None]
    counted = [a for a in rep["payload"]["algebras"] if a.get("boundaryCount") is not None]
    assert notes and counted  # full support needs phi; smaller supports are counted


def test_latex_emission(capsys, tmp_path):
    code, out = _run(capsys, ["invariants", "A1", "4", "--latex", "--cache-dir", str(tmp_path)])
    rep = json.loads(out)
    latexes = [a["latex"] for a in rep["payload"]["algebras"]]
    assert any(s == "|\\chi_{0} + \\chi_{4}|^2 + 2|\\chi_{2}|^2" for s in latexes)


def test_pretty_output_is_text(capsys, tmp_path):
    code, out = _run(capsys, ["picard", "A1", "4", "--pretty", "--cache-dir", str(tmp_path)])
    assert code == 0
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_timing_flag(capsys, tmp_path):
    _, out = _run(capsys, ["picard", "A1", "2", "--timing", "--cache-dir", str(tmp_path)])
    assert json.loads(out)["timingSeconds"] >= 0


def test_cache_dir_env_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("WZWKIT_CACHE_DIR", str(tmp_path / "envcache"))
    code, _ = _run(capsys, ["modular-data", "A1", "2"])
    assert code == 0
    assert (tmp_path / "envcache" / "A-1-2.json").is_file()
