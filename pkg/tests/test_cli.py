import json

import pytest

from qpnbuf.cli import main
from qpnbuf.qasm import significant_lines

from qsr_oracle import LISTING_QASM

SIMO_4C = {
    "kind": "simo",
    "n": 4,
    "m": 3,
    "k": 2,
    "payloads": {"d1": "1", "d2": "0", "d3": "1", "d4": "1"},
    "addresses": [1, 0, 1],
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_qsr_table_shows_set_rows(capsys):
    code, out, _ = run_cli(capsys, "qsr", "table")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 9  # header + 8 rows
    set_rows = [l for l in lines if l.startswith("1  0")]
    assert all(l.split()[-1] == "1" for l in set_rows)
    assert sum("Undefined" in l for l in lines) == 2


def test_qsr_simulate_reset_case(capsys):
    code, out, _ = run_cli(
        capsys, "qsr", "simulate", "--variant", "normalized", "-S", "0", "-R", "1", "-Q", "1"
    )
    assert code == 0
    assert "q4 (Q)  = 0" in out
    assert "q3 (Q') = 1" in out


def test_qsr_simulate_missing_inputs_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "qsr", "simulate", "--variant", "normalized")
    assert code == 2
    assert "error" in err


def test_qsr_unknown_variant_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qsr", "simulate", "--variant", "sideways"])
    assert exc.value.code == 2


def test_qsr_conformance_six_rows(capsys):
    code, out, _ = run_cli(capsys, "qsr", "conformance")
    assert code == 0
    rows = [l for l in out.splitlines() if l and l[0] in "01"]
    assert len(rows) == 6
    assert all("(ok, ok)" in row.rsplit("|", 1)[1] for row in rows)


def test_qsr_export_qasm_matches_listing(capsys, tmp_path):
    out_file = tmp_path / "qsr.qasm"
    code, _, _ = run_cli(
        capsys, "qsr", "export-qasm", "--variant", "verbatim", "--out", str(out_file)
    )
    assert code == 0
    assert significant_lines(out_file.read_text()) == significant_lines(LISTING_QASM)


def test_buffer_demo_simo_enum(capsys):
    code, out, _ = run_cli(capsys, "buffer", "demo", "simo-enum", "--format", "table")
    assert code == 0
    assert "4 outcome signatures" in out


def test_buffer_demo_mimo_enum(capsys):
    code, out, _ = run_cli(capsys, "buffer", "demo", "mimo-enum", "--format", "table")
    assert code == 0
    assert "6 outcome signatures" in out


def test_buffer_demo_priority_order(capsys):
    code, out, _ = run_cli(capsys, "buffer", "demo", "priority-4d", "--format", "table")
    assert code == 0
    assert "P_O: d2 d3 d1" in out


def test_buffer_demo_fig2_example(capsys):
    code, out, _ = run_cli(capsys, "buffer", "demo", "fig2-example", "--format", "table")
    assert code == 0
    assert "P3: a d" in out


def test_buffer_demo_simo_4c(capsys):
    code, out, _ = run_cli(capsys, "buffer", "demo", "simo-4c", "--format", "table")
    assert code == 0
    assert "P_O2: d1 d3" in out
    assert "P_O1: d2" in out


def test_buffer_demos_byte_reproducible(capsys):
    for name in ("fig2-example", "siso-4b", "simo-4c", "priority-4d",
                 "simo-enum", "mimo-enum"):
        outputs = set()
        for _ in range(2):
            code, out, _ = run_cli(capsys, "buffer", "demo", name, "--format", "json")
            assert code == 0
            outputs.add(out)
        assert len(outputs) == 1


def test_buffer_demo_unknown_name(capsys):
    code, _, err = run_cli(capsys, "buffer", "demo", "nope")
    assert code == 2
    assert "unknown demo" in err


def test_buffer_run_scenario_json(capsys, tmp_path):
    scenario = tmp_path / "scn.json"
    scenario.write_text(json.dumps(SIMO_4C))
    code, out, _ = run_cli(capsys, "buffer", "run", "--scenario", str(scenario))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "qpn-trace/1"
    assert [e["transition"] for e in doc["events"]] == ["T2", "T1", "T2"]


def test_buffer_run_scenario_table(capsys, tmp_path):
    scenario = tmp_path / "scn.json"
    scenario.write_text(json.dumps(SIMO_4C))
    code, out, _ = run_cli(
        capsys, "buffer", "run", "--scenario", str(scenario), "--format", "table"
    )
    assert code == 0
    assert "P_O2: d1 d3" in out


def test_buffer_run_parse_failure_exit_2(capsys, tmp_path):
    scenario = tmp_path / "bad.json"
    scenario.write_text('{"kind": "siso"')
    code, _, err = run_cli(capsys, "buffer", "run", "--scenario", str(scenario))
    assert code == 2
    assert "error" in err


def test_buffer_run_unfirable_script_exit_1(capsys, tmp_path):
    scenario = tmp_path / "scn.json"
    scenario.write_text(
        json.dumps(
            {
                "kind": "siso",
                "n": 2,
                "m": 1,
                "scheduler": "scripted",
                "script": ["T1", "T1"],
            }
        )
    )
    code, _, err = run_cli(capsys, "buffer", "run", "--scenario", str(scenario))
    assert code == 1
    assert "step 1" in err


def test_buffer_run_missing_scenario_exit_2(capsys):
    code, _, err = run_cli(capsys, "buffer", "run")
    assert code == 2


def test_buffer_enumerate_scenario(capsys, tmp_path):
    scenario = tmp_path / "scn.json"
    scenario.write_text(json.dumps({"kind": "simo", "n": 4, "m": 3, "k": 2}))
    code, out, _ = run_cli(
        capsys, "buffer", "enumerate", "--scenario", str(scenario), "--format", "table"
    )
    assert code == 0
    assert "4 outcome signatures" in out


def test_buffer_enumerate_step_bound_env(capsys, tmp_path, monkeypatch):
    scenario = tmp_path / "scn.json"
    scenario.write_text(json.dumps({"kind": "simo", "n": 4, "m": 3, "k": 2}))
    monkeypatch.setenv("QPN_STEP_BOUND", "2")
    code, _, err = run_cli(capsys, "buffer", "enumerate", "--scenario", str(scenario))
    assert code == 1
    assert "step bound" in err


def test_console_script_entry_point():
    import subprocess

    result = subprocess.run(
        ["qpnbuf", "buffer", "demo", "simo-enum", "--format", "table"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "4 outcome signatures" in result.stdout
