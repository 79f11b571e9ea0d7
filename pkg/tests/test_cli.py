"""Command-line interface: verdicts, exit codes, determinism, round trips."""

from __future__ import annotations

import json

import numpy as np
import pytest

from entcomb import cli, load_region, region_to_payload
from entcomb.ioutil import canonical_json


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_then_region_pipeline(tmp_path, capsys):
    state_file = tmp_path / "ghz3.json"
    code, out, err = run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    assert code == 0 and out == "" and err == ""
    code, out, err = run_cli(capsys, "region", str(state_file), "--alice", "0")
    assert code == 0
    payload = json.loads(out)
    verts = sorted(map(tuple, payload["vertices_Fprime"]))
    assert np.allclose(verts, [(0, 1), (1, 0)], atol=1e-9)
    assert payload["dimension"] == 1


def test_member_verdicts(tmp_path, capsys):
    state_file = tmp_path / "ghz3.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "member", str(state_file), "--point", "0.5,0.5")
    assert code == 0 and json.loads(out)["member"] is True
    code, out, _ = run_cli(capsys, "member", str(state_file), "--point", "2,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["member"] is False
    assert payload["witness"]["kind"] == "sum_mismatch"
    code, out, _ = run_cli(
        capsys, "member", str(state_file), "--point", "0.2,0.3", "--mode", "down_closure"
    )
    assert code == 0 and json.loads(out)["member"] is True


def test_gen_determinism_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(capsys, "gen", "--kind", "haar_random", "--m", "2", "--seed", "5", "--out", str(a))
    run_cli(capsys, "gen", "--kind", "haar_random", "--m", "2", "--seed", "5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_region_determinism_and_round_trip(tmp_path, capsys):
    state_file = tmp_path / "state.json"
    run_cli(capsys, "gen", "--kind", "haar_random", "--m", "3", "--seed", "9", "--out", str(state_file))
    code, out1, _ = run_cli(capsys, "region", str(state_file))
    code, out2, _ = run_cli(capsys, "region", str(state_file))
    assert code == 0 and out1 == out2
    region_file = tmp_path / "region.json"
    region_file.write_text(out1)
    reparsed = load_region(str(region_file))
    assert canonical_json(region_to_payload(reparsed)) == out1


def test_table_feeds_region(tmp_path, capsys):
    state_file = tmp_path / "w.json"
    table_file = tmp_path / "table.json"
    run_cli(capsys, "gen", "--kind", "w", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "table", str(state_file), "--out", str(table_file))
    assert code == 0
    code, out_from_table, _ = run_cli(capsys, "region", str(table_file))
    assert code == 0
    code, out_from_state, _ = run_cli(capsys, "region", str(state_file))
    assert out_from_table == out_from_state


def test_table_input_rejects_alice_flag(tmp_path, capsys):
    state_file = tmp_path / "s.json"
    table_file = tmp_path / "t.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    run_cli(capsys, "table", str(state_file), "--out", str(table_file))
    code, out, err = run_cli(capsys, "region", str(table_file), "--alice", "1")
    assert code == 1
    assert json.loads(err)["error"] == "InvalidInput"


def test_region_csv_format(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "region", str(state_file), "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "set,E1,E2"
    assert {line.split(",")[0] for line in lines[1:]} == {"Fprime", "F"}


def test_volume_command(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "3", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "volume", str(state_file))
    payload = json.loads(out)
    assert code == 0
    assert payload["volume"] == pytest.approx(np.sqrt(3) / 2, abs=1e-6)
    assert payload["degenerate"] is False


def test_comb_command(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "comb", str(state_file), "--order", "2,1")
    payload = json.loads(out)
    assert code == 0
    assert payload["final"] == pytest.approx([1.0, 0.0], abs=1e-6)
    assert [s["branch"] for s in payload["steps"]] == ["T1_merge", "T1_merge"]


def test_decompose_command(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "decompose", str(state_file), "--point", "0.5,0.5")
    payload = json.loads(out)
    assert code == 0
    assert payload["weights"] == pytest.approx([0.5, 0.5], abs=1e-9)


def test_ledger_command_csv_and_json(tmp_path, capsys):
    state_file = tmp_path / "h.json"
    run_cli(capsys, "gen", "--kind", "haar_random", "--m", "2", "--seed", "1", "--out", str(state_file))
    # pick an interior point with borrowing from the emitted table
    code, out, _ = run_cli(capsys, "table", str(state_file))
    table = json.loads(out)
    s1 = table["entropies"]["0b01"]
    s2 = table["entropies"]["0b10"]
    s_a = table["s_A"]
    mid = 0.5 * (max(0.0, s_a - s2) + min(s1, s_a))
    point = f"{mid!r},{s_a - mid!r}"
    code, out, _ = run_cli(
        capsys, "ledger", str(state_file), "--point", point, "--n0", "1", "--rounds", "4"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "round,consumed,produced_B1,produced_B2,borrowed_weight"
    assert len(lines) == 6
    code, out, _ = run_cli(
        capsys,
        "ledger", str(state_file), "--point", point,
        "--n0", "1", "--rounds", "4", "--format", "json",
    )
    payload = json.loads(out)
    assert code == 0
    assert payload["x"] > 1.0
    assert payload["rows"][-1]["borrowed_weight"] < payload["rows"][0]["borrowed_weight"]


def test_ledger_integer_mode(tmp_path, capsys):
    state_file = tmp_path / "h.json"
    run_cli(capsys, "gen", "--kind", "haar_random", "--m", "2", "--seed", "1", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "table", str(state_file))
    table = json.loads(out)
    s1, s2, s_a = table["entropies"]["0b01"], table["entropies"]["0b10"], table["s_A"]
    mid = 0.5 * (max(0.0, s_a - s2) + min(s1, s_a))
    point = f"{mid!r},{s_a - mid!r}"
    code, out, _ = run_cli(
        capsys,
        "ledger", str(state_file), "--point", point,
        "--n0", "1", "--rounds", "3", "--copies", "100",
    )
    assert code == 0
    for line in out.strip().splitlines()[1:]:
        consumed = float(line.split(",")[1])
        assert consumed.is_integer()


def test_ledger_error_is_machine_readable(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, err = run_cli(
        capsys, "ledger", str(state_file), "--point", "0.5,0.5", "--n0", "1", "--rounds", "2"
    )
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "ZeroBorrow"


def test_rate_command(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    code, out, _ = run_cli(capsys, "rate", str(state_file), str(state_file))
    payload = json.loads(out)
    assert code == 0
    assert payload["r"] == pytest.approx(0.5, abs=1e-6)
    assert payload["binding_subset"] == "0b11"
    code, out_best, _ = run_cli(capsys, "rate", str(state_file), str(state_file), "--best")
    assert json.loads(out_best)["alice_choice"] == 0


def test_overlap_command(tmp_path, capsys):
    state_file = tmp_path / "ghz.json"
    cons_file = tmp_path / "cons.json"
    run_cli(capsys, "gen", "--kind", "ghz", "--m", "2", "--out", str(state_file))
    cons_file.write_text(
        '[{"coeffs":[1,0],"lower_bound":0.4},{"coeffs":[0,1],"lower_bound":0.4}]'
    )
    code, out, _ = run_cli(capsys, "overlap", str(state_file), "--constraints", str(cons_file))
    payload = json.loads(out)
    assert code == 0 and payload["feasible"] is True
    assert payload["witness"] == pytest.approx([0.5, 0.5], abs=1e-6)
    cons_file.write_text('[{"coeffs":[1,0],"lower_bound":2}]')
    code, out, _ = run_cli(capsys, "overlap", str(state_file), "--constraints", str(cons_file))
    assert json.loads(out) == {"feasible": False, "witness": None}


def test_domain_error_missing_file(capsys):
    code, out, err = run_cli(capsys, "table", "/nonexistent/state.json")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "InvalidInput"


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--kind", "haar_random", "--m", "2"])  # missing seed
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["region", "x.json", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["member", "x.json", "--point", "a,b"])
    assert exc.value.code == 2


def test_alice_flag_reroots_state(tmp_path, capsys):
    # Bell(A,B1) x |0>_B2; rooted at B2 every subset entropy vanishes
    state_file = tmp_path / "bell_spectator.json"
    import entcomb

    amps = np.zeros((2, 2, 2), dtype=complex)
    amps[0, 0, 0] = amps[1, 1, 0] = 1 / np.sqrt(2)
    state = entcomb.make_state(entcomb.default_layout(2, (2, 2, 2)), amps.reshape(-1))
    entcomb.save_state(state, str(state_file))
    code, out, _ = run_cli(capsys, "table", str(state_file), "--alice", "2")
    payload = json.loads(out)
    assert code == 0
    assert payload["s_A"] == pytest.approx(0.0, abs=1e-9)
