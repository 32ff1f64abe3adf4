import json
import subprocess
import sys

import pytest

from e8genus import cli


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_eisenstein_expand(capsys):
    code, out = run(["eisenstein-expand", "--weight", "6", "--order", "3"], capsys)
    assert code == 0
    assert out.out == "1 -504 -16632 -122976\n"


def test_eisenstein_expand_multi_dimensional(capsys):
    code, out = run(["eisenstein-expand", "--weight", "12", "--order", "2"], capsys)
    assert out.out.splitlines() == ["G4^3: 1 720 179280", "G6^2: 1 -1008 220752"]


def test_route_equivalence_passes(capsys):
    code, out = run(["route-equivalence", "--d", "1", "--l", "1", "--gauge", "none"], capsys)
    assert code == 0 and out.out.startswith("PASS")


def test_anomaly_from_d_and_l(capsys):
    code, out = run(["anomaly", "--gauge", "e8", "--d", "5", "--l", "2", "--format", "json"], capsys)
    rep = json.loads(out.out)
    assert code == 0
    assert rep[0]["check"] == "anomaly[8]" and rep[0]["expected"] == [196560, -24]


def test_failure_exit_code_and_witness(capsys):
    code, out = run(["anomaly", "--gauge", "e8", "--case", "2", "--format", "json"], capsys)
    assert code == 1
    reps = json.loads(out.out)
    bad = [r for r in reps if r["status"] == "fail"]
    assert bad and all("witness" in r for r in bad)
    # exact rationals travel as strings
    assert isinstance(bad[0]["witness"]["expected"], str)


@pytest.mark.parametrize("argv", [
    ["route-equivalence", "--d", "8", "--l", "2", "--gauge", "e8"],
    ["anomaly", "--case", "3"],
    ["frobnicate"],
    ["route-equivalence", "--d", "2"],
    ["prop-expansions", "--d", "2", "--l", "2", "--u-order", "2"],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_json_is_byte_identical_across_processes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        subprocess.run([sys.executable, "-m", "e8genus.cli", "prop-expansions", "--d", "2", "--l",
                        "2", "--format", "json", "--output", str(path)], check=False)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"elapsed_ms" not in outs[0]


def test_timing_flag(capsys):
    code, out = run(["route-equivalence", "--d", "1", "--l", "1", "--gauge", "none",
                     "--format", "json", "--timing"], capsys)
    assert "elapsed_ms" in json.loads(out.out)[0]


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    args = cli.build_parser().parse_args(["all"])
    assert args.jobs == 3


def test_parallel_order_is_deterministic():
    tasks = [t for t in cli.suite_tasks() if t[0] in (1, 4)]
    serial = [cli.report_dict(r, False) for r in cli.run_tasks(tasks, 1)]
    parallel = [cli.report_dict(r, False) for r in cli.run_tasks(tasks, 3)]
    assert serial == parallel


def test_jacobi_numeric_command(capsys):
    code, out = run(["jacobi-numeric", "--d", "2", "--l", "2", "--gauge", "none",
                     "--tau", "2i", "--z", "0.2", "--format", "json"], capsys)
    rep = json.loads(out.out)[0]
    assert rep["got"]["observed_weight"] == 0
