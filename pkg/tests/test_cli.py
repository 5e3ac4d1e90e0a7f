import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cuspscatter.cli import (
    RunConfig,
    config_from_args,
    format_csv,
    main,
    parse_grid,
    read_config_file,
    run,
    validate,
)
from cuspscatter.errors import DomainError

RESONANCE = ["--a", "2", "--grid=-2.1972245773362196:-2.1972245773362196:1",
             "--z-im=-3.141592653589793"]


def invoke(argv):
    config, _ = config_from_args(argv)
    out, err = io.StringIO(), io.StringIO()
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


# ---------------------------------------------------------------------------
# parsing and validation


def test_parse_grid():
    g = parse_grid("-1:1:5")
    assert list(g) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    for bad in ("1:2", "1:2:0", "a:b:3", "1:inf:3"):
        with pytest.raises((DomainError, ValueError)):
            parse_grid(bad)


def test_config_file_and_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# sweep\na = 4\ngrid = -1:1:3\nz-im = 0.5\n")
    params = read_config_file(path)
    assert params == {"a": [4.0], "grid": "-1:1:3", "z_im": 0.5}
    config, _ = config_from_args(["scatter", "--config", str(path), "--a", "2"])
    assert config.get("a") == [2.0] and config.get("z_im") == 0.5
    path.write_text("colour = red\n")
    with pytest.raises(DomainError):
        read_config_file(path)


def test_validate_examples():
    assert validate(RunConfig("scatter", {"a": [2.0]})) == []
    diags = validate(RunConfig("limit", {"a": [3.0]}))
    assert any("odd integer" in d for d in diags)
    assert any("a > 2" in d for d in validate(RunConfig("limit", {"a": [2.0]})))
    diags = validate(RunConfig("limit", {"a": [4.0], "z_im": math.pi}))
    assert any("Im(z0) = pi" in d for d in diags)
    assert any("Im(z0) = pi" in d for d in validate(RunConfig("limit", {"a": [4.0], "z_im": -math.pi})))
    assert validate(RunConfig("limit", {"a": [4.0], "z_im": 1.0})) == []


def test_validate_reports_every_violation():
    cfg = RunConfig("limit", {"a": [3.0, 1.0], "rho": "cube", "format": "xml", "tol": -1.0,
                              "z_im": math.pi, "bogus": 1})
    diags = validate(cfg)
    assert len(diags) >= 7
    assert any("unknown key" in d for d in diags)
    assert any("mu must lie off" in d for d in validate(RunConfig("resolvent", {"z_re": 1.0})))
    assert validate(RunConfig("modes", {"n": 0}))
    assert validate(RunConfig("eval", {"nu": [-1.0]}))
    assert validate(RunConfig("scatter", {"z_re": math.nan}))


# ---------------------------------------------------------------------------
# subcommands


def test_scatter_unitarity_column():
    code, out, _ = invoke(["scatter", "--a", "2", "--grid=-2:2:9"])
    assert code == 0
    cols, rows = table(out)
    assert cols == ["z_re", "z_im", "c_re", "c_im", "c_abs", "fe_residual"]
    assert all(abs(r[4] - 1) < 1e-10 and r[5] < 1e-8 for r in rows)


def test_modes_above_floor():
    code, out, _ = invoke(["modes", "--a", "1", "--n", "1", "--count", "2"])
    assert code == 0
    _, rows = table(out)
    assert min(r[1] for r in rows) >= 39.478


def test_eval_values():
    code, out, _ = invoke(["eval", "--nu", "0.5", "--grid", "1:3:3"])
    assert code == 0
    cols, rows = table(out)
    for r in rows:
        t = r[1]
        ref = math.sqrt(2 / (math.pi * t)) * math.sin(t)
        assert r[cols.index("j_re")] == pytest.approx(ref, rel=1e-13)


def test_json_schema():
    code, out, _ = invoke(["scatter", "--a", "2", "--grid=0:1:2", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"subcommand", "parameters", "columns", "rows", "summary"}
    assert doc["subcommand"] == "scatter"
    assert doc["parameters"]["a"] == [2.0]
    assert len(doc["rows"]) == 2 and len(doc["rows"][0]) == len(doc["columns"])


def test_limit_report():
    code, out, _ = invoke(["limit", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"] == {"bound_violations": 0, "strictly_decreasing": True}
    idx = doc["columns"].index("decomposition_residual")
    assert all(r[idx] < 1e-8 for r in doc["rows"])


def test_out_file(tmp_path):
    dest = tmp_path / "c.csv"
    code, out, _ = invoke(["scatter", "--a", "2", "--grid=0:1:3", "--out", str(dest)])
    assert code == 0 and out == ""
    assert dest.read_text().startswith("z_re,")


def test_csv_is_lossless():
    text = format_csv(["v"], [[0.1], [1 / 3], [math.pi * 1e300]])
    _, rows = table(text)
    assert rows == [[0.1], [1 / 3], [math.pi * 1e300]]


def test_byte_identical_reruns():
    argv = ["scatter", "--a", "2", "--grid=-2:2:21", "--z-im", "0.3"]
    first = invoke(argv)[1]
    assert first == invoke(argv)[1]
    argv = ["resolvent", "--mode", "kernel", "--grid", "1.5:3:4"]
    assert invoke(argv)[1] == invoke(argv)[1]


# ---------------------------------------------------------------------------
# exit codes


def test_exit_domain():
    code, out, err = invoke(["limit", "--a", "3"])
    assert code == 2 and out == ""
    diag = json.loads(err)
    assert diag["error"] == "domain" and any("odd integer" in d for d in diag["diagnostics"])
    code, _, err = invoke(["eval", "--nu", "1", "--z-re", "0"])
    assert code == 2 and json.loads(err)["error"] == "domain"


def test_exit_accuracy():
    code, _, err = invoke(["resolvent", "--mode", "kernel", "--grid", "2:3:2", "--tol", "1e-17"])
    assert code == 3
    assert json.loads(err)["error"] == "accuracy"


def test_exit_pole():
    code, _, err = invoke(["scatter"] + RESONANCE)
    assert code == 4
    assert json.loads(err)["error"] == "pole"


def test_main_usage_and_check(capsys):
    assert main(["nonsense"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "domain"
    assert main(["limit", "--a", "3", "--check"]) == 2
    assert json.loads(capsys.readouterr().out)["diagnostics"]
    assert main(["scatter", "--a", "2", "--check"]) == 0
    assert json.loads(capsys.readouterr().out)["diagnostics"] == []
    assert main(["scatter", "--config", "/nonexistent/run.cfg"]) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cuspscatter.cli", "scatter"] + RESONANCE,
                          capture_output=True, text=True)
    assert proc.returncode == 4
    assert json.loads(proc.stderr)["error"] == "pole"
