import io
import json
import subprocess
import sys

import pytest

from orlicz.cli import main
from orlicz.geometry import ClassificationReport
from orlicz.harness import (
    DEFAULT_TOLERANCES,
    RunConfig,
    evaluate_case,
    replay_case,
    run_suite,
)
from orlicz.errors import ConstructionError


def run(tmp_path, config, *args):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    out, err = io.StringIO(), io.StringIO()
    code = main([args[0], "--config", str(path), *args[1:]], out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_classify_exp(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "exp_minus_one"},
                                  "measure": {"kind": "nonatomic", "total": 1}}, "classify")
    assert code == 0
    assert "rnp               fails" in out and "sd2p              holds" in out
    assert "delta2_infinity fails" in out


def test_classify_linear_daugavet(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "linear", "k": 1},
                                  "measure": {"kind": "nonatomic", "total": "inf"}},
                       "classify", "--format", "records")
    recs = records(out)
    rep = ClassificationReport.from_dict(recs[1]["report"])
    assert code == 0 and rep.daugavet.verdict == "holds"


def test_classify_counting_orlicz(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "power", "p": 2},
                                  "measure": {"kind": "counting"}, "norm_kind": "orlicz"},
                       "classify", "--format", "records")
    assert records(out)[1]["report"]["orlicz_norm_ld2p"]["verdict"] == "fails"


def test_records_round_trip(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "power", "p": 2}}, "classify",
                       "--format", "records", "--seed", "3")
    first = records(out)[0]
    assert first["type"] == "config"
    cfg = RunConfig.from_dict(first["config"])
    assert cfg.to_dict() == first["config"]
    assert cfg.seed == 3 and cfg.tolerances == DEFAULT_TOLERANCES


def test_config_errors_carry_field_path(tmp_path):
    code, _, err = run(tmp_path, {"function": {"family": "power", "p": "two"}}, "classify")
    assert code == 2 and "config.function.p" in err
    code, _, err = run(tmp_path, {"colour": "blue"}, "classify")
    assert code == 2 and "unknown field" in err
    code, _, err = run(tmp_path, {"tolerances": {"sandwich": 1e-8, "loose": 1}}, "verify")
    assert code == 2 and "config.tolerances" in err
    code, _, err = run(tmp_path, {}, "norm")
    assert code == 2 and "config.step" in err


def test_norm_command(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "power", "p": 2},
                                  "step": {"measure": {"kind": "nonatomic", "total": "inf"},
                                           "levels": [[1, 1], [2, 1]]}},
                       "norm", "--format", "records")
    rec = records(out)[1]
    assert code == 0
    assert rec["luxemburg"] == pytest.approx(2.23606797749979, rel=1e-10)
    assert rec["duality_gap"] <= 1e-4 and rec["tol_duality_gap"] == 1e-4


def test_conjugate_command(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "exp_minus_one"}, "grid": [2.0]},
                       "conjugate", "--format", "records")
    rec = records(out)[1]
    assert code == 0
    assert rec["values"][0]["phi_star"] == pytest.approx(0.3862943611198906, abs=1e-9)
    assert rec["finiteness_duality"] == {"n_at_infinity": True, "conjugate_finite": True}


def test_witness_command(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "power", "p": 4},
                                  "measure": {"kind": "nonatomic", "total": "inf"}},
                       "witness", "--budget", "200", "--format", "records")
    recs = records(out)
    summary = recs[-1]
    assert code == 0 and summary["violations"] == 0
    assert sum(r["type"] == "challenge" for r in recs) == summary["challengers"]
    for key in ("d", "b_mass", "gamma", "sigma", "delta", "epsilon"):
        assert key in recs[1]


def test_witness_not_applicable(tmp_path):
    code, out, _ = run(tmp_path, {"function": {"family": "linear", "k": 1}}, "witness")
    assert code == 0 and "not applicable" in out


def test_slice_command(tmp_path):
    cfg = {"function": {"family": "linear", "k": 1},
           "slice": {"dimension": 4, "functional": [1, 0, 0, 0], "epsilon": 0.05,
                     "side": "weak_star_slice"},
           "point": [1, 0, 0, 0]}
    code, out, _ = run(tmp_path, cfg, "slice", "--budget", "4000", "--format", "records")
    recs = records(out)
    assert code == 0 and recs[1]["lower_bound"] >= 1.99 and recs[2]["gap"] <= 1e-9


def test_verify_conjugacy_and_exit_code(tmp_path):
    code, out, err = run(tmp_path, {"functions": [{"family": "u_log_u"}], "suite": "conjugacy"},
                         "verify", "--seed", "1", "--budget", "2000", "--format", "records")
    recs = records(out)
    bic = [r for r in recs if r.get("invariant") == "conjugation.biconjugate"][0]
    assert code == 0 and err == ""
    assert bic["detail"]["max_error"] <= 1e-5
    assert recs[-1] == {"type": "summary", "suite": "conjugacy", "run": 3, "passed": 3, "failed": 0}


def test_verify_failure_is_replayable(tmp_path):
    # an impossible tolerance makes sandwich cases fail; the stderr record replays exactly
    cfg = {"functions": [{"family": "power", "p": 2}], "suite": "norms",
           "tolerances": {"sandwich": -10.0}}
    code, out, err = run(tmp_path, cfg, "verify", "--budget", "5", "--format", "records")
    assert code == 1
    failed = records(err)
    assert failed and all(not r["passed"] for r in failed)
    for r in failed:
        again = replay_case(r)
        assert again.slack == r["slack"] and not again.passed
    path = tmp_path / "fails.jsonl"
    path.write_text(err)
    out2, err2 = io.StringIO(), io.StringIO()
    assert main(["verify", "--replay", str(path)], out2, err2) == 1


def test_verify_norms_example():
    cfg = RunConfig.from_dict({"command": "verify", "suite": "norms", "seed": 42,
                               "functions": [{"family": "power", "p": 2}, {"family": "power", "p": 3},
                                             {"family": "exp_minus_one"}],
                               "budget": 1000})
    res = run_suite(cfg.resolved(), "norms")
    assert (res.run, res.passed) == (3000, 3000)


def test_verify_slices_suite():
    cfg = RunConfig.from_dict({"command": "verify", "suite": "slices", "budget": 4000}).resolved()
    res = run_suite(cfg, "slices")
    assert res.failed == 0, [c.to_dict() for c in res.failures]


def test_suite_deterministic():
    cfg = RunConfig.from_dict({"command": "verify", "suite": "witness", "seed": 7,
                               "functions": [{"family": "power", "p": 4}],
                               "measures": [{"kind": "nonatomic", "total": "inf"}],
                               "budget": 50}).resolved()
    a = [c.to_dict() for c in run_suite(cfg, "witness").cases]
    b = [c.to_dict() for c in run_suite(cfg, "witness").cases]
    assert a == b and all(c["passed"] for c in a)


def test_case_errors_become_failures():
    # the Orlicz norm of this vector overflows a double
    res = evaluate_case("norms", 0, "modular_spaces.norm_sandwich",
                        {"function": {"family": "power", "p": 2},
                         "step": {"measure": {"kind": "counting"}, "values": [1e308, 1e308]},
                         "tolerance": 1e-8})
    assert not res.passed and "error" in res.detail and res.slack == float("-inf")
    with pytest.raises(ConstructionError):
        RunConfig(command="explode")


def test_catalog_command(tmp_path):
    code, out, _ = run(tmp_path, {}, "catalog")
    assert code == 0 and "shifted_linear" in out


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "orlicz", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "classify" in out.stdout
