import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ringnet.cli import distribution_csv, main, render_json
from ringnet.network import MotifParams, Scenario, compose
from ringnet.simulate import propagate

TWO_PI = 6.283185307179586


def write_config(tmp_path, name="cfg.json", **overrides):
    data = {
        "scenario": {"kind": "fully-random", "alpha_layer": TWO_PI, "seed": 7},
        "depths": [2, 6],
        "runs": 25,
    }
    data.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def read_all(out_dir):
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


# -------------------------------------------------------------------- format


def test_render_json_pins_float_text():
    assert render_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
    assert render_json([1, None, True]) == '[\n  1,\n  null,\n  true\n]\n'
    assert render_json({}) == "{}\n"


def test_render_json_rejects_non_finite():
    with pytest.raises(ValueError):
        render_json({"x": math.inf})


def test_render_json_handles_numpy_scalars_and_arrays():
    out = render_json({"v": np.array([1.5]), "n": np.int64(3), "b": np.bool_(False)})
    assert '"v": [\n    1.5\n  ]' in out
    assert '"n": 3' in out
    assert '"b": false' in out


def test_distribution_csv_layout():
    motif = MotifParams(n_couplers=2, theta=np.pi / 4, phi=np.pi / 4)
    dist = propagate(compose(Scenario(kind="pure", motif=motif, depth=1, seed=0)), 0)
    text = distribution_csv(dist, floor=1e-12)
    lines = text.splitlines()
    assert lines[0] == "port,probability,log10_probability"
    assert len(lines) == 6  # header + 4 ports + sum footer
    assert lines[1].startswith("1,0.25")
    assert lines[-1].startswith("# sum=")
    total = float(lines[-1].split("=")[1])
    assert abs(total - 1.0) <= 1e-10


def test_distribution_csv_blanks_log_below_floor():
    motif = MotifParams(n_couplers=5, theta=np.pi / 4, phi=np.pi / 4)
    dist = propagate(compose(Scenario(kind="pure", motif=motif, depth=1, seed=0)), 0)
    lines = distribution_csv(dist, floor=1e-12).splitlines()
    empty = [ln for ln in lines[1:-1] if ln.endswith(",")]
    filled = [ln for ln in lines[1:-1] if not ln.endswith(",")]
    assert len(filled) == 4  # one motif reaches exactly four ports
    assert len(empty) == 6
    for ln in filled:
        port, prob, log10p = ln.split(",")
        assert float(log10p) == pytest.approx(math.log10(float(prob)), abs=1e-12)


# ------------------------------------------------------------------ simulate


def test_simulate_writes_expected_files(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
    names = set(read_all(out))
    assert names == {
        "dist_M2.csv",
        "dist_M6.csv",
        "verdict_M2.json",
        "verdict_M6.json",
        "variance_trace.csv",
        "effective_config.json",
    }
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6 and all(ln.startswith("wrote ") for ln in lines)

    verdict = json.loads((out / "verdict_M6.json").read_text())
    assert verdict["depth"] == 6
    assert verdict["runs"] == 25
    assert verdict["input_port"] == 20
    assert verdict["regime"] in {"diffusive", "ambiguous", "localized"}
    assert set(verdict["fits"]) == {"gaussian", "exponential"}

    trace = (out / "variance_trace.csv").read_text().splitlines()
    assert trace[0] == "depth,variance,ipr"
    depths = [int(row.split(",")[0]) for row in trace[1:]]
    assert depths == [2, 6]

    for name in ("dist_M2.csv", "dist_M6.csv"):
        footer = (out / name).read_text().splitlines()[-1]
        assert abs(float(footer.split("=")[1]) - 1.0) <= 1e-10


def test_simulate_quiet_suppresses_notes(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    assert capsys.readouterr().out == ""


def test_simulate_reruns_byte_identical(tmp_path):
    cfg = write_config(tmp_path, emit=["distributions", "fits", "variance_trace", "spectral"])
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(cfg), "--out", str(out1), "--quiet"]) == 0
    assert main(["simulate", "--config", str(cfg), "--out", str(out2), "--quiet"]) == 0
    assert read_all(out1) == read_all(out2)


def test_effective_config_echo_reproduces_the_run(tmp_path):
    cfg = write_config(tmp_path)
    out1 = tmp_path / "a"
    assert main(["simulate", "--config", str(cfg), "--out", str(out1), "--quiet"]) == 0
    echoed = tmp_path / "echo.json"
    echoed.write_bytes((out1 / "effective_config.json").read_bytes())
    out2 = tmp_path / "b"
    assert main(["simulate", "--config", str(echoed), "--out", str(out2), "--quiet"]) == 0
    assert read_all(out1) == read_all(out2)


def test_seed_override_changes_outputs(tmp_path):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["simulate", "--config", str(cfg), "--out", str(out1), "--quiet"])
    main(["simulate", "--config", str(cfg), "--out", str(out2), "--quiet", "--seed", "8"])
    a = (out1 / "dist_M6.csv").read_bytes()
    b = (out2 / "dist_M6.csv").read_bytes()
    assert a != b
    cfg_b = json.loads((out2 / "effective_config.json").read_text())
    assert cfg_b["scenario"]["seed"] == 8


def test_emit_spectral_from_simulate(tmp_path):
    cfg = write_config(tmp_path, emit=["spectral"], depths=[3])
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    names = set(read_all(out))
    assert names == {"spectral.json", "effective_config.json"}


# ----------------------------------------------------------------- scan-alpha


def test_scan_alpha_summary(tmp_path):
    cfg = write_config(
        tmp_path,
        depths=[6],
        runs=30,
        alphas=[0.0, TWO_PI],
        emit=["fits"],
    )
    out = tmp_path / "scan"
    assert main(["scan-alpha", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    summary = (out / "scan_summary.csv").read_text().splitlines()
    assert summary[0] == "alpha,ipr,ssr_ratio,regime"
    assert len(summary) == 3
    first = summary[1].split(",")
    assert float(first[0]) == 0.0
    # without any disorder the walk cannot look localized
    assert first[3] in {"diffusive", "ambiguous"}
    v0 = json.loads((out / "verdict_alpha0.json").read_text())
    assert v0["alpha"] == 0.0


def test_scan_alpha_single_point_matches_simulate(tmp_path):
    base = {
        "scenario": {"kind": "fixed-disorder", "alpha_fixed": TWO_PI, "seed": 3},
        "depths": [10],
        "runs": 40,
    }
    sim_cfg = tmp_path / "sim.json"
    sim_cfg.write_text(json.dumps(base))
    scan_cfg = tmp_path / "scan.json"
    scan_cfg.write_text(json.dumps({**base, "alphas": [TWO_PI]}))
    sim_out, scan_out = tmp_path / "sim", tmp_path / "scan"
    assert main(["simulate", "--config", str(sim_cfg), "--out", str(sim_out), "--quiet"]) == 0
    assert main(["scan-alpha", "--config", str(scan_cfg), "--out", str(scan_out), "--quiet"]) == 0
    sim_v = json.loads((sim_out / "verdict_M10.json").read_text())
    scan_v = json.loads((scan_out / "verdict_alpha0.json").read_text())
    assert scan_v["regime"] == sim_v["regime"]
    assert scan_v["ssr_ratio"] == sim_v["ssr_ratio"]
    assert (sim_out / "dist_M10.csv").read_bytes() == (
        scan_out / "dist_alpha0.csv"
    ).read_bytes()


def test_scan_alpha_requires_alphas(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["scan-alpha", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1


def test_scan_alpha_rejects_pure_kind(tmp_path, capsys):
    cfg = write_config(
        tmp_path, scenario={"kind": "pure"}, alphas=[0.0], depths=[4]
    )
    code = main(["scan-alpha", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "config error" in capsys.readouterr().err


# ------------------------------------------------------------------- spectrum


def test_spectrum_output_shape(tmp_path):
    cfg = write_config(
        tmp_path,
        scenario={"kind": "fixed-disorder", "alpha_fixed": TWO_PI, "seed": 1},
        depths=[10],
        emit=["fits"],
    )
    out = tmp_path / "spec"
    assert main(["spectrum", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    payload = json.loads((out / "spectral.json").read_text())
    assert payload["n_modes"] == 40
    assert payload["depth"] == 10
    for section in ("single_step", "full_product"):
        sec = payload[section]
        assert len(sec["eigenphases"]) == 40
        assert len(sec["eigenvector_ipr"]) == 40
        phases = np.array(sec["eigenphases"])
        # the 17-digit text round-trip can land a phase exactly on -pi
        assert phases.min() >= -math.pi
        assert phases.max() <= math.pi
        assert (np.diff(phases) >= 0).all()
        assert 1 / 40 <= sec["eigenvector_ipr_mean"] <= 1.0
        assert sec["branch_cut_count"] >= 0
        assert sec["band_fractions"][-1] == 1.0


def test_spectrum_reruns_byte_identical(tmp_path):
    cfg = write_config(
        tmp_path,
        scenario={"kind": "intermediate", "alpha_fixed": TWO_PI, "alpha_layer": 0.5, "seed": 2},
        depths=[5],
    )
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["spectrum", "--config", str(cfg), "--out", str(a), "--quiet"]) == 0
    assert main(["spectrum", "--config", str(cfg), "--out", str(b), "--quiet"]) == 0
    assert read_all(a) == read_all(b)


# ----------------------------------------------------------------- exit codes


def test_exit_1_on_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"scenario": {"kind": "pure"}, "depths": [1], "zzz": 1}))
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "zzz" in capsys.readouterr().err


def test_exit_1_on_missing_config_flag(capsys):
    assert main(["simulate"]) == 1
    assert "config error" in capsys.readouterr().err


def test_exit_2_on_numerical_failure(tmp_path, capsys):
    # a fit floor just under 1 leaves the regression fewer than three points
    cfg = write_config(tmp_path, fit_floor=0.9, depths=[6])
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_exit_3_on_unwritable_out_dir(tmp_path, capsys):
    cfg = write_config(tmp_path)
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    assert main(["simulate", "--config", str(cfg), "--out", str(blocker)]) == 3
    assert "i/o error" in capsys.readouterr().err


def test_subprocess_entry_point(tmp_path):
    cfg = write_config(tmp_path, depths=[3], runs=5)
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "ringnet", "simulate", "--config", str(cfg), "--out", str(out), "--quiet"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "effective_config.json").exists()
