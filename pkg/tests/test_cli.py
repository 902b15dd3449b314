# tests/test_cli.py
import json
import sys

import pytest

# Must import AFTER sys.path manipulation in conftest
try:
    import diagsynth.diagsynth_cli as cli
    from diagsynth.diagsynth_cli import SYNTHESIZER_KEYS, _synthesizer_kwargs, main, parse_args, resolve_config
    from diagsynth.diagsynth_config import DEFAULT_C0, DEFAULT_METHOD, get_saved_config
    from diagsynth.diagsynth_cost import ReferenceCheck
except ImportError:
    pytest.skip("Skipping CLI tests, import failed.", allow_module_level=True)


def run_parse_args(argv: list[str]):
    """Helper to run parse_args with specific argv."""
    original_argv = sys.argv
    try:
        sys.argv = ["diagsynth.py"] + argv
        return parse_args()
    finally:
        sys.argv = original_argv

def run_main(argv: list[str]) -> int:
    """Runs main() and returns the exit code it ends with."""
    original_argv = sys.argv
    try:
        sys.argv = ["diagsynth.py"] + argv
        with pytest.raises(SystemExit) as exit_info:
            main()
        return exit_info.value.code
    finally:
        sys.argv = original_argv

SINGLE_TAIL = '{"n": 3, "blocks": [{"theta": 0.0, "len": 7}, {"theta": 0.7, "len": 1}]}'


# === Argument parsing ===

def test_cli_synth_defaults(tmp_path):
    args = run_parse_args(["synth", str(tmp_path / "spec.json")])
    assert args.command == "synth"
    assert args.eps is None and args.method is None and args.rot is None
    assert args.emit == "text"
    assert args.verify is False
    assert args.colorize is None

def test_cli_shared_flags(tmp_path):
    args = run_parse_args([
        "synth", str(tmp_path / "spec.json"),
        "--eps", "1e-4", "--method", "pcd", "--rot", "brute", "--max-t", "12",
        "--c0", "2.0", "--kappa", "5", "--dense-limit", "10", "--no-color", "-v",
    ])
    assert args.eps == 1e-4
    assert args.method == "pcd"
    assert args.rot == "brute"
    assert args.max_t == 12
    assert args.c0 == 2.0 and args.kappa == 5.0
    assert args.dense_limit == 10
    assert args.colorize is False
    assert args.verbose is True

def test_cli_decide_ranges():
    args = run_parse_args(["decide", "--n", "4", "8", "--k-range", "2:10:4", "--eps-range", "1e-2:1e-6:3"])
    assert args.n == [4, 8]
    assert args.k_range == [2, 6, 10]
    assert args.eps_range == pytest.approx([1e-2, 1e-4, 1e-6])

@pytest.mark.parametrize("argv", [
    ["decide", "--n", "4", "--k-range", "10:2", "--eps-range", "1e-2:1e-6:3"],
    ["decide", "--n", "4", "--k-range", "a:b", "--eps-range", "1e-2:1e-6:3"],
    ["decide", "--n", "4", "--k-range", "2:10", "--eps-range", "1e-6:1e-2:3"],
    ["decide", "--n", "4", "--k-range", "2:10", "--eps-range", "0.1:0:3"],
    ["sweep"],
    [],
])
def test_cli_rejects_bad_arguments(argv):
    with pytest.raises(SystemExit) as exit_info:
        run_parse_args(argv)
    assert exit_info.value.code == 2


# === Configuration ===

def test_resolve_config_precedence():
    args = run_parse_args(["synth", "x.json", "--eps", "1e-3"])
    config = resolve_config(args, saved={"eps": 0.5, "c0": 3.0, "colorize": True})
    assert config["eps"] == 1e-3, "flags should win over saved defaults"
    assert config["c0"] == 3.0, "saved defaults should win over built-ins"
    assert config["method"] == DEFAULT_METHOD
    assert config["colorize"] is True

def test_resolve_config_builtins():
    config = resolve_config(run_parse_args(["synth", "x.json", "--no-color"]), saved={})
    assert config["eps"] is None
    assert config["c0"] == DEFAULT_C0
    assert config["rot"] == "exact"
    assert config["colorize"] is False

def test_save_defaults_writes_home(isolated_home, tmp_path, write_spec):
    spec = write_spec("spec.json", SINGLE_TAIL)
    code = run_main(["synth", str(spec), "--c0", "1.7", "--no-color", "--save-defaults",
                     "--out", str(tmp_path / "c.txt")])
    assert code == 0
    assert (isolated_home / ".diagsynth_config.json").exists()
    assert get_saved_config()["c0"] == 1.7


# === synth ===

def test_synth_writes_circuit_and_report(isolated_home, tmp_path, write_spec, capsys):
    spec = write_spec("spec.json", SINGLE_TAIL)
    out = tmp_path / "circuit.txt"
    code = run_main(["synth", str(spec), "--method", "pcd", "--verify", "--no-color", "--out", str(out)])
    assert code == 0
    assert out.read_text(encoding="utf-8").startswith("QUBITS n=")
    report = json.loads(capsys.readouterr().out)
    assert report["method"] == "pcd"
    assert report["rotations"] == 1
    assert report["deviation"] < 1e-10

def test_synth_report_file_and_qasm(isolated_home, tmp_path, write_spec, capsys):
    spec = write_spec("spec.json", SINGLE_TAIL)
    report_path = tmp_path / "report.json"
    code = run_main(["synth", str(spec), "--method", "walsh", "--emit", "qasm", "--no-color",
                     "--report", str(report_path)])
    assert code == 0
    assert capsys.readouterr().out.startswith("OPENQASM 2.0;")
    assert json.loads(report_path.read_text(encoding="utf-8"))["method"] == "walsh"

def test_synth_walsh_csv(isolated_home, write_spec, capsys):
    spec = write_spec("spec.json", SINGLE_TAIL)
    assert run_main(["synth", str(spec), "--emit", "walsh-csv", "--no-color"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "j,a_j"
    assert len(lines) == 9

def test_synth_random_target(isolated_home, capsys):
    code = run_main(["synth", "--random-n", "3", "--random-k", "3", "--method", "pcd", "--verify", "--no-color"])
    assert code == 0
    assert json.loads(capsys.readouterr().err)["rotations"] == 2

def test_synth_malformed_spec(isolated_home, tmp_path, write_spec):
    spec = write_spec("bad.json", '{"n": 3, "blocks": [{"theta": 0.0, "len": 5}]}')
    out = tmp_path / "circuit.txt"
    assert run_main(["synth", str(spec), "--no-color", "--out", str(out)]) == 2
    assert not out.exists()

def test_synth_invalid_json(isolated_home, write_spec):
    spec = write_spec("bad.json", "{not json")
    assert run_main(["synth", str(spec), "--no-color"]) == 2

def test_synth_missing_file(isolated_home, tmp_path):
    assert run_main(["synth", str(tmp_path / "absent.json"), "--no-color"]) == 2

def test_synth_nonpositive_eps(isolated_home, write_spec):
    spec = write_spec("spec.json", SINGLE_TAIL)
    assert run_main(["synth", str(spec), "--eps", "0", "--no-color"]) == 2

def test_synth_bundled_specs(isolated_home, tmp_path, spec_files, capsys):
    assert spec_files, "bundled specs are missing"
    for spec in spec_files:
        out = tmp_path / f"{spec.stem}.txt"
        assert run_main(["synth", str(spec), "--verify", "--no-color", "--out", str(out)]) == 0, spec.name
        assert run_main(["verify", str(out), str(spec), "--no-color"]) == 0, spec.name
        assert capsys.readouterr().out.splitlines()[-1].startswith("PASS"), spec.name


# === verify ===

def test_verify_round_trip(isolated_home, tmp_path, write_spec, capsys):
    spec = write_spec("spec.json", SINGLE_TAIL)
    out = tmp_path / "circuit.txt"
    assert run_main(["synth", str(spec), "--method", "pcd", "--no-color", "--out", str(out)]) == 0
    capsys.readouterr()
    assert run_main(["verify", str(out), str(spec), "--no-color"]) == 0
    assert capsys.readouterr().out.startswith("PASS deviation=")

def test_verify_detects_missing_rotation(isolated_home, tmp_path, write_spec, capsys):
    spec = write_spec("spec.json", SINGLE_TAIL)
    out = tmp_path / "circuit.txt"
    assert run_main(["synth", str(spec), "--method", "pcd", "--no-color", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    broken = tmp_path / "broken.txt"
    broken.write_text("\n".join(l for l in lines if not l.startswith("RZ")) + "\n", encoding="utf-8")
    capsys.readouterr()
    assert run_main(["verify", str(broken), str(spec), "--no-color"]) == 4
    assert capsys.readouterr().out.startswith("FAIL")

def test_verify_dimension_mismatch(isolated_home, tmp_path, write_spec):
    spec = write_spec("spec.json", SINGLE_TAIL)
    other = write_spec("other.json", '{"n": 2, "blocks": [{"theta": 0.0, "len": 3}, {"theta": 0.7, "len": 1}]}')
    out = tmp_path / "circuit.txt"
    assert run_main(["synth", str(spec), "--method", "pcd", "--no-color", "--out", str(out)]) == 0
    assert run_main(["verify", str(out), str(other), "--no-color"]) == 2

def test_verify_bad_circuit_file(isolated_home, tmp_path, write_spec):
    spec = write_spec("spec.json", SINGLE_TAIL)
    circuit = tmp_path / "circuit.txt"
    circuit.write_text("QUBITS n=3\nWIBBLE q=0\n", encoding="utf-8")
    assert run_main(["verify", str(circuit), str(spec), "--no-color"]) == 2


# === sweep / decide / mcrz ===

def test_sweep_small_register(isolated_home, capsys):
    assert run_main(["sweep", "--n", "3", "--no-color"]) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "ell,toffoli_count,t_count"
    assert len(lines) == 9
    assert "n=3: max toffoli" in captured.err

def test_sweep_over_limit(isolated_home):
    assert run_main(["sweep", "--n", "17", "--no-color"]) == 3

def test_sweep_fit_outside_tolerance_fails(isolated_home, monkeypatch, capsys):
    monkeypatch.setattr(cli, "beta_check", lambda ns: ReferenceCheck("beta", 3.0, 1.13))
    monkeypatch.setattr(cli, "best_case_check", lambda ns: ReferenceCheck("best_case_slope", 72.0, 72.0))
    assert run_main(["sweep", "--n", "4", "--fit-from", "3", "--no-color"]) == 4
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "ell,toffoli_count,t_count"
    assert "beta" in captured.err and "OUTSIDE" in captured.err

def test_sweep_fit_within_tolerance_passes(isolated_home, monkeypatch):
    monkeypatch.setattr(cli, "beta_check", lambda ns: ReferenceCheck("beta", 1.1, 1.13))
    monkeypatch.setattr(cli, "best_case_check", lambda ns: ReferenceCheck("best_case_slope", 70.0, 72.0))
    assert run_main(["sweep", "--n", "4", "--fit-from", "3", "--no-color"]) == 0

def test_synthesizer_kwargs_ignores_unrelated_keys():
    config = {"eps": 1e-3, "method": "auto", "rot": "exact", "c0": 1.15, "kappa": 10, "max_t": 30,
              "dense_limit": 10, "verbose": False, "colorize": False, "self": 1, "limit": 3}
    kwargs = _synthesizer_kwargs(config)
    assert set(kwargs) <= set(SYNTHESIZER_KEYS)
    assert kwargs["rot_mode"] == "exact"
    assert "self" not in kwargs and "limit" not in kwargs

def test_decide_surface(isolated_home, tmp_path):
    out = tmp_path / "surface.csv"
    code = run_main(["decide", "--n", "6", "--k-range", "2:4", "--eps-range", "1e-2:1e-4:2",
                     "--no-color", "--out", str(out)])
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,k,log10_inv_eps,choice,k_star_worst,k_star_best"
    assert len(lines) == 1 + 3 * 2

def test_mcrz_command(isolated_home, capsys):
    assert run_main(["mcrz", "--n", "2", "--theta", "0.5", "--verify", "--no-color"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("QUBITS n=")
    report = json.loads(captured.err)
    assert report["method"] == "pcd"
    assert report["rotations"] == 2
