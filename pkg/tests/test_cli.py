import json

import numpy as np
import pytest

from fbmwalk.cli import main


def run(argv):
    return main([str(a) for a in argv])


# ---------------------------------------------------------------- generate


def test_generate_csv_schema(tmp_path):
    out = tmp_path / "p.csv"
    code = run(["generate", "--hurst", 0.7, "--steps", 256, "--paths", 8, "--seed", 1, "--out", out])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,value"
    assert lines[1] == "0,0.0"
    assert len(lines) == 258  # header + N + 1 points
    meta = json.loads((tmp_path / "p.csv.meta.json").read_text())
    assert meta["hurst"] == 0.7
    assert meta["steps"] == 256
    assert meta["paths"] == 8
    assert meta["seed"] == 1
    assert meta["mode"] == "paper"
    assert meta["infeasible"] == "resample"
    assert "resample_total" in meta and "wall_time_s" in meta


def test_generate_reproducible_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run(["generate", "--hurst", 0.7, "--steps", 128, "--paths", 6, "--seed", 5, "--out", out]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_worker_invariant_bytes(tmp_path):
    outs = []
    for w in (1, 2, 8):
        out = tmp_path / f"w{w}.csv"
        assert run(
            ["generate", "--hurst", 0.7, "--steps", 128, "--paths", 10, "--seed", 3, "--workers", w, "--out", out]
        ) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_generate_gaussian_oracle_schema(tmp_path):
    out = tmp_path / "g.csv"
    assert run(["generate", "--hurst", 0.85, "--steps", 512, "--mode", "gaussian-oracle", "--seed", 2, "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,value"
    assert lines[1] == "0,0.0"
    assert len(lines) == 514


def test_generate_json_format(tmp_path):
    out = tmp_path / "p.json"
    assert run(["generate", "--hurst", 0.7, "--steps", 64, "--paths", 4, "--seed", 1, "--out", out, "--format", "json"]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["t"]) == 65 and len(doc["value"]) == 65
    assert doc["value"][0] == 0.0


def test_generate_raw_levels_flag(tmp_path):
    out = tmp_path / "raw.csv"
    assert run(["generate", "--hurst", 0.7, "--steps", 32, "--paths", 4, "--seed", 1, "--out", out, "--raw-levels"]) == 0
    first_rows = [l.split(",")[0] for l in out.read_text().splitlines()[1:5]]
    assert first_rows == ["0", "1", "2", "3"]


def test_generate_config_errors(tmp_path):
    out = tmp_path / "x.csv"
    assert run(["generate", "--hurst", 0.49, "--steps", 64, "--paths", 4, "--out", out]) == 2
    assert run(["generate", "--hurst", 0.7, "--steps", 1, "--paths", 4, "--out", out]) == 2
    assert run(["generate", "--hurst", 0.7, "--steps", 8192, "--mode", "gaussian-oracle", "--out", out]) == 2


def test_generate_infeasible_error_policy(tmp_path):
    # find a seed whose first trajectory draws an infeasible first uniform
    out = tmp_path / "e.csv"
    for seed in range(200):
        children = np.random.SeedSequence(seed).spawn(2)
        u = float(np.random.Generator(np.random.PCG64(children[0])).random())
        if u > 0.1299337:
            code = run(
                ["generate", "--hurst", 0.7, "--steps", 16, "--paths", 1, "--seed", seed, "--infeasible", "error", "--out", out]
            )
            assert code == 3
            return
    pytest.fail("no infeasible first draw found")


# ---------------------------------------------------------------- estimate


def test_estimate_roundtrip_text(tmp_path, capsys):
    out = tmp_path / "p.csv"
    run(["generate", "--hurst", 0.7, "--steps", 512, "--paths", 16, "--seed", 4, "--out", out])
    capsys.readouterr()
    assert run(["estimate", "--input", out]) == 0
    text = capsys.readouterr().out
    assert "h_dsod" in text and "h_aggvar" in text and "acf[ 1]" in text


def test_estimate_json(tmp_path, capsys):
    out = tmp_path / "p.csv"
    run(["generate", "--hurst", 0.7, "--steps", 512, "--paths", 16, "--seed", 4, "--out", out])
    capsys.readouterr()
    assert run(["estimate", "--input", out, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) >= {"h_dsod", "h_aggvar", "acf", "n_used"}
    assert len(doc["acf"]) == 10


def test_estimate_oracle_path_near_h(tmp_path, capsys):
    out = tmp_path / "g.csv"
    run(["generate", "--hurst", 0.85, "--steps", 4096, "--mode", "gaussian-oracle", "--seed", 6, "--out", out])
    capsys.readouterr()
    assert run(["estimate", "--input", out, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["h_dsod"] - 0.85) <= 0.1  # single realisation, wide bound


def test_estimate_short_file_is_numeric_error(tmp_path):
    f = tmp_path / "short.csv"
    f.write_text("t,value\n" + "\n".join(f"{i},{i}.0" for i in range(10)) + "\n")
    assert run(["estimate", "--input", f]) == 3


def test_estimate_parse_error_with_line(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("t,value\n0,0.0\n1,not-a-number\n")
    assert run(["estimate", "--input", f]) == 2
    err = capsys.readouterr().err
    assert "bad.csv:3" in err


def test_estimate_missing_file(tmp_path):
    assert run(["estimate", "--input", tmp_path / "absent.csv"]) == 2


def test_csv_roundtrip_never_errors(tmp_path):
    for n in (256, 513, 1000):
        out = tmp_path / f"r{n}.csv"
        assert run(["generate", "--hurst", 0.6, "--steps", n, "--paths", 4, "--seed", n, "--out", out]) == 0
        assert run(["estimate", "--input", out]) == 0


# ---------------------------------------------------------------- validate / spread


def test_validate_passes_and_reports(tmp_path, capsys):
    code = run(["validate", "--hurst", 0.7, "--seed", 2, "--steps", 512, "--paths", 48, "--runs", 120])
    text = capsys.readouterr().out
    assert code == 0, text
    assert "feasibility_threshold" in text
    assert "0.1299" in text  # u_max for H=0.7
    assert "paper_chain_lag_law" in text
    assert "density_mass_deficit" in text


def test_validate_json_format(capsys):
    code = run(["validate", "--hurst", 0.75, "--mode", "enriquez", "--seed", 3, "--steps", 256, "--paths", 32, "--runs", 80, "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    names = {c["name"] for c in doc}
    assert "aggregate_acf_enriquez" in names
    agg = next(c for c in doc if c["name"] == "aggregate_acf_enriquez")
    assert agg["hard"] is True and agg["passed"] is True


def test_validate_config_error():
    assert run(["validate", "--hurst", 0.49, "--seed", 1]) == 2


def test_spread_report(tmp_path):
    out = tmp_path / "spread.json"
    code = run(
        ["spread", "--hurst", 0.7, "--steps", 256, "--paths", 16, "--replicates", 6, "--seed", 1, "--out", out]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["replicates"] == 6
    assert len(doc["estimates"]) == 6
    assert doc["min"] <= doc["mean"] <= doc["max"]
    assert sum(doc["histogram_counts"]) == 6
