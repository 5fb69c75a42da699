import csv
import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from painleve_weyl import cli
from painleve_weyl import systems as S

HEALTHY = ["integrate", "--type", "d4", "--params", "0.2,0.2,0.1,0.2,0.2,eta=2", "--b", "pvi-form",
           "--t0", "2.1", "--t1", "2.5", "--state", "0.3,0.4,0.5"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_d4_full_suite_auto(capsys):
    code, out, err = run(capsys, "verify", "--type", "d4", "--check", "all", "--mode", "auto")
    assert code == 0
    reports = json.loads(out)
    jsonschema.validate(reports, cli.load_schema("report.schema.json"))
    assert all(r["status"] in ("pass", "skip") for r in reports)
    assert all(set(r) == {"check_id", "weyl_type", "mode", "status", "witness", "notes", "elapsed_ms"} for r in reports)


def test_verify_g2_holomorphy_skips(capsys):
    code, out, _ = run(capsys, "verify", "--type", "g2", "--check", "holomorphy")
    assert code == 0
    (r,) = json.loads(out)
    assert r["status"] == "skip"


def test_verify_failure_exit_code(capsys):
    code, out, err = run(capsys, "verify", "--type", "piii", "--check", "poisson-series")
    assert code == 1
    assert json.loads(out)[0]["status"] == "fail"
    assert "fail" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--type", "bogus"],
    ["verify", "--check", "nonsense"],
    ["verify", "--mode", "quick"],
    ["verify", "--term-cap", "999"],
    ["integrate", "--type", "d4"],
    ["orbit", "--type", "d4", "--word", "s9"],
    ["dump", "--type", "e8"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_json_written_to_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--type", "d4", "--check", "normalization", "--json", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())[0]["check_id"].startswith("normalization")


def _strip(text):
    return [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in json.loads(text)]


def test_same_seed_same_json(capsys):
    argv = ["verify", "--type", "d3,pv", "--check", "symmetry", "coxeter", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert _strip(a) == _strip(b)


def test_env_seed_overrides_flag(capsys, monkeypatch):
    argv = ["verify", "--type", "d4", "--check", "symmetry", "--mode", "sampled"]
    monkeypatch.setenv("PWL_SEED", "5")
    _, env, _ = run(capsys, *argv, "--seed", "9")
    monkeypatch.delenv("PWL_SEED")
    _, flag, _ = run(capsys, *argv, "--seed", "5")
    assert _strip(env) == _strip(flag)
    monkeypatch.setenv("PWL_SEED", "minus")
    assert run(capsys, *argv)[0] == 2


def test_integrate_healthy_writes_csv(tmp_path, capsys):
    path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, *HEALTHY, "--csv", str(path))
    assert code == 0
    summary = json.loads(out)
    jsonschema.validate(summary, cli.load_schema("integrate.schema.json"))
    assert summary["residual"]["max"] < 1e-6 and summary["events"] == []
    rows = list(csv.reader(path.read_text().splitlines()))
    assert rows[0] == ["t", "x", "y", "z"]
    ts = [float(r[0]) for r in rows[1:]]
    assert all(a < b for a, b in zip(ts, ts[1:]))
    assert ts[0] == 2.1 and ts[-1] == 2.5


def test_integrate_csv_to_stdout(capsys):
    code, out, _ = run(capsys, *HEALTHY, "--csv", "-")
    assert code == 0 and out.startswith("t,x,y,z\n")


def test_integrate_normalization_violation(capsys):
    argv = list(HEALTHY)
    argv[argv.index("--params") + 1] = "0.3,0.2,0.1,0.2,0.2,eta=2"
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "alpha0 + alpha1 + 2*alpha2 + alpha3 + alpha4 = 1" in err


def test_integrate_pole_event(capsys):
    argv = list(HEALTHY)
    argv[argv.index("--state") + 1] = "3,-3,5"
    argv[argv.index("--t1") + 1] = "10"
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert [e["kind"] for e in json.loads(out)["events"]] == ["pole"]


def test_integrate_starting_on_singularity(capsys):
    argv = list(HEALTHY)
    argv[argv.index("--t0") + 1] = "1"
    assert run(capsys, *argv)[0] == 2


def test_orbit_involution(capsys):
    code, out, _ = run(capsys, "orbit", "--type", "d4", "--word", "s2 s2", "--params", "1/5,1/5,1/10,1/5,1/5")
    assert code == 0
    assert json.loads(out)["params"] == {"alpha0": "1/5", "alpha1": "1/5", "alpha2": "1/10",
                                         "alpha3": "1/5", "alpha4": "1/5"}


def test_orbit_pi_swaps_ends(capsys):
    code, out, _ = run(capsys, "orbit", "--type", "c2-piii", "--word", "pi")
    p = json.loads(out)["params"]
    assert (p["alpha0"], p["alpha1"], p["alpha2"]) == ("alpha2", "alpha1", "alpha0")


def _reflect(alpha, i, cartan):
    # s_i(alpha_j) = alpha_j - a_ij alpha_i on the simple-root coordinates
    return [a - cartan[i][j] * alpha[i] for j, a in enumerate(alpha)]


def test_orbit_translation_word_matches_cartan_oracle(capsys):
    adj = {0: [2], 1: [2], 3: [2], 4: [2], 2: [0, 1, 3, 4]}
    cartan = [[2 if i == j else (-1 if j in adj[i] else 0) for j in range(5)] for i in range(5)]
    alpha = [Fraction(1, 5), Fraction(1, 5), Fraction(1, 10), Fraction(1, 5), Fraction(1, 5)]
    for i in (0, 1, 3, 4, 2):
        alpha = _reflect(alpha, i, cartan)
    code, out, _ = run(capsys, "orbit", "--type", "d4", "--word", "s0 s1 s3 s4 s2", "--params", "1/5,1/5,1/10,1/5,1/5")
    assert code == 0
    got = json.loads(out)["params"]
    assert [Fraction(got[f"alpha{k}"]) for k in range(5)] == alpha


def test_orbit_state_and_indeterminate(capsys):
    params = "1/5,1/5,1/10,1/5,1/5,t=2,eta=3"
    code, out, _ = run(capsys, "orbit", "--type", "d4", "--word", "s1", "--params", params, "--state", "1,2,3")
    assert code == 0
    z = 3 - Fraction(1, 5) / 1  # s1: z -> z - alpha1/x
    assert json.loads(out)["state"] == ["1", "2", str(z)]
    code, out, _ = run(capsys, "orbit", "--type", "d4", "--word", "s2", "--params", params, "--state", "1,2,0")
    assert code == 1
    assert "indeterminate" in json.loads(out)["error"]


def test_orbit_warns_on_normalization(capsys):
    _, out, _ = run(capsys, "orbit", "--type", "d4", "--word", "s1", "--params", "1,1,1,1,1")
    assert "warning" in json.loads(out)


def test_dump_d4_has_x4_line(capsys):
    code, out, _ = run(capsys, "dump", "--type", "d4")
    assert code == 0
    assert "4 0 0 0 0 0 0 0 0 0 0\t1" in out.splitlines()


def test_dump_piii_three_blocks(capsys):
    _, out, _ = run(capsys, "dump", "--type", "piii")
    blocks = [ln for ln in out.splitlines() if ln.startswith("# component")]
    assert len(blocks) == 3


def test_dump_is_byte_identical(capsys):
    for key in S.TYPES:
        assert run(capsys, "dump", "--type", key)[1] == run(capsys, "dump", "--type", key)[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "painleve_weyl.cli", "dump", "--type", "g2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("# type G2(1)")
