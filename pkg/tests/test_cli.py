from __future__ import annotations

import csv
import io
import json

import pytest

from tempus.cli import main
from tempus.delta import ScaleFunction
from tempus.fractional import KernelVariant, frac_integral
from tempus.timescale import Integers, generate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_scale_info(capsys):
    code, out, _ = run(capsys, "scale-info", "--generator", "integers(0,5)")
    assert code == 0 and "6 isolated points" in out

    code, out, _ = run(capsys, "scale-info", "--generator", "integers(0,5)", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6 and all(float(r["mu"]) == 1 for r in rows[:-1])

    code, out, _ = run(capsys, "scale-info", "--pieces", "[[0,1],[2,2]]", "--format", "csv")
    rows = {float(r["t"]): r for r in csv.DictReader(io.StringIO(out))}
    assert "1 intervals, 1 isolated" not in out
    assert float(rows[1.0]["sigma"]) == 2.0

    code, out, _ = run(capsys, "scale-info", "--generator", "q_scale(0.5,0,3)", "--format", "csv")
    assert [float(r["t"]) for r in csv.DictReader(io.StringIO(out))] == [0.125, 0.25, 0.5, 1.0]


def test_scale_file(capsys, tmp_path):
    path = tmp_path / "scale.json"
    path.write_text(json.dumps({"generator": {"kind": "integers", "params": {"a": 0, "b": 5}}}))
    code, out, _ = run(capsys, "frac-int", "--scale-file", str(path), "-f", "1",
                       "-a", "0", "-t", "3", "--alpha", "2")
    assert code == 0 and out == "3\n"

    code, _, err = run(capsys, "scale-info", "--scale-file", str(tmp_path / "missing.json"))
    assert code == 4

    path.write_text('{"pieces": [[0, 1],\n ]}')
    code, _, err = run(capsys, "scale-info", "--scale-file", str(path))
    assert code == 2 and "line 2" in err


def test_frac_int(capsys):
    code, out, _ = run(capsys, "frac-int", "--generator", "real_interval(0,2)", "-f", "1",
                       "-a", "0", "-t", "2", "--alpha", "0.5")
    assert code == 0 and float(out) == pytest.approx(1.5957691216, abs=1e-10)

    code, out, _ = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "1",
                       "-a", "0", "-t", "3", "--alpha", "2", "--both")
    assert out == "sigma=3\nlegacy=6\n"

    code, out, _ = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "1",
                       "-a", "0", "-t", "3", "--alpha", "2", "--kernel", "legacy")
    assert out == "6\n"


def test_sweep_matches_library_bit_for_bit(capsys):
    code, out, err = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "sin(t)",
                         "-a", "0", "-t", "5", "--alpha", "0.5", "--sweep-t", "--both")
    assert code == 0 and "zero_power_applied=true" in err
    ts = generate(Integers(0, 5))
    f = ScaleFunction.from_expr("sin(t)")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["t"]) for r in rows] == [0, 1, 2, 3, 4, 5]
    with pytest.warns(Warning):
        for r in rows:
            t = float(r["t"])
            assert float(r["sigma"]) == frac_integral(f, ts, 0, t, 0.5)
            assert float(r["legacy"]) == frac_integral(f, ts, 0, t, 0.5, KernelVariant.PLAIN)

    # deterministic output
    _, again, _ = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "sin(t)",
                      "-a", "0", "-t", "5", "--alpha", "0.5", "--sweep-t", "--both")
    assert again == out


def test_frac_der(capsys):
    code, out, _ = run(capsys, "frac-der", "--type", "caputo", "--generator", "real_interval(0,2)",
                       "-f", "1", "-a", "0", "-t", "1", "--alpha", "0.5")
    assert code == 0 and float(out) == 0

    code, out, _ = run(capsys, "frac-der", "--type", "rl", "--generator", "real_interval(0,2)",
                       "-f", "1", "-a", "0", "-t", "1", "--alpha", "0.5")
    assert float(out) == pytest.approx(0.5641895835, abs=1e-4)

    code, out, _ = run(capsys, "frac-der", "--type", "caputo", "--generator", "real_interval(0,2)",
                       "-f", "t", "-a", "0", "-t", "1", "--alpha", "0.5")
    assert float(out) == pytest.approx(1.1283791671, abs=1e-4)


def test_singular_term_exit_code(capsys):
    code, _, err = run(capsys, "frac-der", "--type", "caputo", "--generator", "integers(0,5)",
                       "-f", "t", "-a", "0", "-t", "3", "--alpha", "0.5", "--zero-power", "strict")
    assert code == 2 and "SingularTerm" in err and "--zero-power zero" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["frac-int", "--generator", "integers(0,5)", "-f", "1", "-a", "0.5", "-t", "3",
         "--alpha", "1"],
        ["frac-int", "--generator", "integers(0,5)", "-f", "1", "-a", "0", "-t", "3",
         "--alpha", "-1"],
        ["frac-int", "--generator", "integers(0,5)", "--pieces", "[[0,1]]", "-f", "1",
         "-a", "0", "-t", "1", "--alpha", "1"],
        ["frac-int", "-f", "1", "-a", "0", "-t", "1", "--alpha", "1"],
        ["no-such-command"],
        ["verify", "--only", "bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 1


def test_computation_errors(capsys):
    code, _, err = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "2t",
                       "-a", "0", "-t", "3", "--alpha", "2")
    assert code == 2 and "offset 1" in err
    code, _, err = run(capsys, "frac-int", "--generator", "integers(0,5)", "-f", "log(t)",
                       "-a", "0", "-t", "3", "--alpha", "2")
    assert code == 2 and "EvalError" in err


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("TEMPUS_FRAC_TOL", "1e-3")
    code, out, _ = run(capsys, "frac-int", "--generator", "real_interval(0,2)", "-f", "exp(t)",
                       "-a", "0", "-t", "2", "--alpha", "1.5")
    assert code == 0
    monkeypatch.setenv("TEMPUS_FRAC_TOL", "nope")
    code, _, _ = run(capsys, "frac-int", "--generator", "real_interval(0,2)", "-f", "1",
                     "-a", "0", "-t", "2", "--alpha", "1.5")
    assert code == 1


def test_verify_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--only", "counterexample")
    assert code == 0 and "lhs=1 rhs=2.5" in out

    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "--csv", str(target))
    assert code == 0
    assert target.read_text().splitlines()[0] == "check,scale,f,order,lhs,rhs,abs_err,rel_err,pass"

    code, _, _ = run(capsys, "verify", "--only", "alternating_sum", "--csv",
                     str(tmp_path / "nope" / "r.csv"))
    assert code == 4


def test_verify_failure_exit_code(capsys, tmp_path):
    config = tmp_path / "suite.json"
    config.write_text(json.dumps({
        "scales": {"Z": {"generator": "integers(0,5)"}},
        "functions": ["1"],
        "checks": ["cauchy_n3"],
        "tolerance": 1e-7,
    }))
    code, out, _ = run(capsys, "verify", "--config", str(config))
    assert code == 0

    config.write_text(json.dumps({
        "scales": {"R": {"generator": "real_interval(0, 1)"}},
        "functions": ["log(t - 5)"],
        "checks": ["cauchy"],
    }))
    code, out, _ = run(capsys, "verify", "--config", str(config))
    assert code == 3 and "failed" in out

    code, _, _ = run(capsys, "verify", "--config", str(tmp_path / "absent.json"))
    assert code == 4
