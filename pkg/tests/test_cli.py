import csv
import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import jsonschema
import pytest

from ncsusy.cli import ENV_VAR, RunConfig, build_parser, load_config, main, resolve_config
from ncsusy.errors import ConfigError
from ncsusy.numeric import CSV_COLUMNS
from ncsusy.reports import Report, rows_to_csv, schema

GOLDEN = Path(__file__).parent / "golden"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, _ = run(argv + ["--json"])
    return code, json.loads(out)


def test_verify_default_passes():
    code, d = run_json(["verify"])
    assert code == 0 and d["passed"]
    assert len(d["checks"]) >= 14
    jsonschema.validate(d, schema())


def test_unattainable_tolerance_exits_one():
    code, _, err = run(["verify", "--tol", "1e-30", "--r", "0.5"])
    assert code == 1 and "FAILED" in err


def test_discriminant_violation_is_config_error():
    code, out, err = run(["verify", "--r", "3", "--vartheta", "1"])
    assert code == 2 and out == "" and "configuration error" in err


def test_unknown_gauge_flag_rejected_by_parser():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["spectrum", "--gauge", "coulomb"])


@pytest.mark.parametrize("cmd", ["verify", "compare", "witten", "ground-state"])
def test_golden_structure(cmd):
    golden = json.loads((GOLDEN / f"{cmd.replace('-', '_')}.json").read_text())
    code, d = run_json([cmd])
    assert code == 0
    jsonschema.validate(d, schema())
    assert d["suite"] == golden["suite"]
    assert sorted(d) == golden["top_keys"]
    assert [c["id"] for c in d["checks"]] == golden["check_ids"]
    assert sorted({c["anchor"] for c in d["checks"]}) == golden["anchors"]
    assert {k: sorted(v[0]) if v else [] for k, v in d["tables"].items()} == golden["tables"]
    assert all(c["anchor"] for c in d["checks"])


def test_symbolic_spectrum_landau():
    code, d = run_json(["spectrum", "--r", "0", "--nmax", "3"])
    assert code == 0
    jsonschema.validate(d, schema())
    rows = d["tables"]["spectrum"]
    susy = {row["n"]: row["E_susy"] for row in rows}
    assert [susy[n] for n in (1, 2, 3)] == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)


def test_spectrum_ground_row():
    code, d = run_json(["spectrum", "--r", "0", "--nmax", "0"])
    assert code == 0
    assert d["tables"]["spectrum"][0]["E_susy"] == pytest.approx(0.0, abs=1e-12)


def test_numeric_spectrum_writes_csv(tmp_path):
    code, _, _ = run(["spectrum", "--engine", "numeric", "--gauge", "symmetric", "--vartheta", "0,0.5,2",
                      "--out", str(tmp_path)])
    assert code == 0
    csvs = list(tmp_path.glob("spectrum_*.csv"))
    assert csvs
    rows = list(csv.DictReader(csvs[0].open()))
    assert tuple(rows[0]) == CSV_COLUMNS and all(r["pass"] == "True" for r in rows)
    d = json.loads((tmp_path / "spectrum.json").read_text())
    jsonschema.validate(d, schema())
    assert (tmp_path / "spectrum.txt").read_text().strip().endswith(")")


def test_witten_zero_field_fails():
    code, d = run_json(["witten", "--field", "0"])
    assert code == 1 and not d["passed"]


def test_witten_sweep():
    code, d = run_json(["witten", "--r", "0,0.5,0.8", "--vartheta", "0,1"])
    assert code == 0
    assert all(c["value"] == -1 for c in d["checks"] if c["anchor"] == "witten-index")


def test_compare_zero_theta():
    code, d = run_json(["compare", "--vartheta", "0"])
    assert code == 0
    assert all(abs(r["ground_energy"]) < 1e-12 for r in d["tables"]["comparison"])


def test_sweep():
    code, d = run_json(["sweep", "--vartheta", "0,0.5,2"])
    assert code == 0 and d["passed"]


def test_config_file_and_env(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[ncsusy]\nr = 0.25\nvartheta = 0.1, 0.2\nK = 2\nB = 1.5\n")
    c = load_config(str(cfg))
    assert c.r == [0.25] and c.vartheta == [0.1, 0.2] and c.order == 2 and c.field == 1.5
    args = build_parser().parse_args(["verify", "--order", "3"])
    c = resolve_config(args, environ={ENV_VAR: str(cfg)})
    assert c.order == 3 and c.r == [0.25]
    bad = tmp_path / "bad.ini"
    bad.write_text("[ncsusy]\ncolour = blue\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.ini"))


def test_config_error_via_env(tmp_path, monkeypatch):
    bad = tmp_path / "bad.ini"
    bad.write_text("[ncsusy]\nmass = -1\n")
    monkeypatch.setenv(ENV_VAR, str(bad))
    code, _, err = run(["witten"])
    assert code == 2 and "configuration error" in err


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(engine="magic").validate()
    with pytest.raises(ConfigError):
        RunConfig(vartheta=[-1.0]).validate()


def test_report_requires_anchor():
    with pytest.raises(ValueError):
        Report("x").add("id", "", 0.0, 1.0, True)


def test_rows_to_csv_roundtrip():
    text = rows_to_csv([{"a": 1, "b": 2.5}, {"a": 3, "b": None}])
    assert text.splitlines()[0] == "a,b"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ncsusy.cli", "witten"], capture_output=True, text=True)
    assert proc.returncode == 0 and "result: PASS" in proc.stdout
