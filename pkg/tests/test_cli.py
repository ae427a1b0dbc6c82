import json
import re
import subprocess
import sys

import numpy as np
import pytest

from qpbirkhoff.cli import main
from qpbirkhoff.io import read_spectrum, read_table, read_trajectory, sidecar_path
from qpbirkhoff.xprec import XReal, golden, wrap_half


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def field(text, name):
    m = re.search(rf"^{name}\s+(\S+)", text, re.M)
    return m.group(1) if m else None


@pytest.fixture(scope="module")
def siegel_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("orbits") / "z02.csv"
    assert main(["simulate", "--map", "siegel", "--rho", "golden", "--z0", "0.2", "--n", "20000", "--out", str(path)]) == 0
    return path


class TestSimulate:
    def test_siegel_file(self, siegel_file):
        traj = read_trajectory(siegel_file)
        assert len(traj) == 20000
        meta = json.loads(sidecar_path(siegel_file).read_text())
        assert meta["generator"] == "siegel" and meta["N"] == 20000
        assert XReal(meta["params"]["rho"]) == golden()
        assert siegel_file.read_text().startswith("# product: orbit samples\n# config-sha256: ")

    def test_henon(self, tmp_path, capsys):
        out = tmp_path / "h.csv"
        code, _, _ = run(
            capsys, "simulate", "--map", "henon", "--theta", "0.664", "--phi", "2.032",
            "--x0", "-0.5+0.126i", "--y0", "-0.387-0.163i", "--n", "500", "--out", out,
        )
        assert code == 0
        traj = read_trajectory(out)
        assert traj.dim == 2 and len(traj) == 500

    def test_negative_value_with_equals(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        assert run(capsys, "simulate", "--rho", "golden", "--z0=-0.1", "--n", "3", "--out", out)[0] == 0
        first = out.read_bytes()
        assert run(capsys, "simulate", "--rho", "golden", "--z0", "-0.1", "--n", "3", "--out", out)[0] == 0
        assert out.read_bytes() == first

    def test_zero_points(self, tmp_path, capsys):
        code, _, err = run(capsys, "simulate", "--rho", "golden", "--z0", "0.1", "--n", "0", "--out", tmp_path / "x.csv")
        assert code == 2 and "usage" in err

    def test_escape_is_numeric_failure(self, tmp_path, capsys):
        code, _, err = run(capsys, "simulate", "--rho", "golden", "--z0", "3", "--n", "100", "--out", tmp_path / "x.csv")
        assert code == 3 and "escaped" in err

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "plot")
        assert code == 2

    def test_file_round_trip_exact(self, siegel_file):
        from qpbirkhoff.maps import SiegelMapParams, iterate

        direct = iterate(SiegelMapParams(golden()), XReal("0.2"), 20000).points
        back = read_trajectory(siegel_file).points
        # 36 digits carry about 119 bits, so a pair whose lo sits far below
        # ulp(hi) may come back one text-ulp away
        d = (back[:, 0::2] - direct[:, 0::2]) + (back[:, 1::2] - direct[:, 1::2])
        assert np.abs(d).max() <= 1e-36
        assert (back == direct).all(axis=1).mean() > 0.999


class TestRotation:
    def test_rate_and_error(self, siegel_file, capsys):
        code, out, _ = run(capsys, "rotation", "--traj", siegel_file, "--exact", "golden")
        assert code == 0
        rate = XReal(field(out, "rate"))
        assert abs(float(wrap_half(rate - golden()))) <= 1e-25
        half = XReal(field(out, "half-turn"))
        assert abs(float(half - (rate - 1))) <= 1e-32
        assert float(XReal(field(out, "error"))) <= 1e-25
        mantissa = field(out, "rate").split("e")[0].replace(".", "").lstrip("-")
        assert len(mantissa) == 36

    def test_profile_and_lift_csv(self, siegel_file, tmp_path, capsys):
        lift, prof = tmp_path / "lift.csv", tmp_path / "prof.csv"
        code, out, _ = run(
            capsys, "rotation", "--traj", siegel_file, "--exact", "golden",
            "--checkpoints", "1000,10000", "--lift-out", lift, "--profile-out", prof,
        )
        assert code == 0 and "N=1000" in out
        header, cols, rows = read_table(prof)
        assert header["product"] == "rotation convergence profile"
        assert len(header["config-sha256"]) == 64
        assert cols == ["N", "rate", "half_turn", "err"] and len(rows) == 2
        assert float(XReal(rows[1][3])) <= 1e-25
        header, cols, rows = read_table(lift)
        assert header["product"] == "lifted angle differences" and len(rows) == 19999

    def test_convergence_table(self, siegel_file, tmp_path, capsys):
        out = tmp_path / "conv.csv"
        code, text, _ = run(capsys, "convergence", "--traj", siegel_file, "--checkpoints", "100,1000,10000", "--exact", "golden", "--out", out)
        assert code == 0
        _, _, rows = read_table(out)
        errs = [float(XReal(r[3])) for r in rows]
        assert errs[0] > errs[-1]

    def test_checkpoint_too_large(self, siegel_file, capsys):
        code, _, _ = run(capsys, "rotation", "--traj", siegel_file, "--checkpoints", "10,100000")
        assert code == 2

    def test_no_lift(self, tmp_path, capsys):
        # the delay plane of the theta = 0.664 orbit viewed from outside its hole
        orbit = tmp_path / "h.csv"
        assert main([
            "simulate", "--map", "henon", "--theta", "0.664", "--phi", "2.032",
            "--x0=-0.5+0.126i", "--y0=-0.387-0.163i", "--n", "100000", "--out", str(orbit),
        ]) == 0
        capsys.readouterr()
        code, _, err = run(
            capsys, "rotation", "--traj", orbit, "--projection", "radius-delay",
            "--center=-0.4,0", "--lag", "2", "--ref", "0.15,0.15",
        )
        assert code == 3
        assert "projection admits no lift" in err and "halfwidth" in err
        code, out, _ = run(
            capsys, "rotation", "--traj", orbit, "--projection", "radius-delay",
            "--center=-0.4,0", "--lag", "2", "--ref", "0.14,0.145",
        )
        assert code == 0

    def test_degenerate(self, tmp_path, capsys):
        orbit = tmp_path / "zero.csv"
        main(["simulate", "--rho", "golden", "--z0", "0", "--n", "10", "--out", str(orbit)])
        capsys.readouterr()
        code, _, err = run(capsys, "rotation", "--traj", orbit)
        assert code == 3 and "degenerate" in err

    def test_missing_trajectory(self, tmp_path, capsys):
        code, _, _ = run(capsys, "rotation", "--traj", tmp_path / "nope.csv")
        assert code == 2


class TestConfig:
    def test_config_supplies_and_flags_override(self, siegel_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"traj": str(siegel_file), "weight": "uniform", "exact": "golden"}))
        code, out, _ = run(capsys, "--config", cfg, "rotation")
        assert code == 0 and field(out, "weight") == "uniform"
        code, out, _ = run(capsys, "--config", cfg, "rotation", "--weight", "bump1")
        assert code == 0 and field(out, "weight") == "bump1"

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"colour": "red"}))
        code, _, _ = run(capsys, "--config", cfg, "rotation")
        assert code == 2

    def test_full_precision_parameters(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        rho = "6.18033988749894848204586834365638118e-1"
        cfg.write_text(json.dumps({"rho": rho, "z0": "0.1", "n": 5, "out": str(tmp_path / "o.csv")}))
        assert run(capsys, "--config", cfg, "simulate")[0] == 0
        meta = json.loads(sidecar_path(tmp_path / "o.csv").read_text())
        assert XReal(meta["params"]["rho"]) == XReal(rho)


@pytest.fixture(scope="module")
def spectrum(siegel_file, tmp_path_factory):
    path = tmp_path_factory.mktemp("spec") / "spec.json"
    assert main(["fourier", "--traj", str(siegel_file), "--k-max", "300", "--out", str(path)]) == 0
    return path


class TestSpectrumPipeline:
    def test_spectrum_file(self, spectrum):
        sp = read_spectrum(spectrum)
        assert abs(float(wrap_half(sp.rho - golden()))) <= 1e-25
        assert 60 < sp.k_max < 300 and sp.n_samples == 20000
        data = json.loads(spectrum.read_text())
        assert data["rho_source"] == "estimated"

    def test_k_max_zero(self, siegel_file, tmp_path, capsys):
        code, _, _ = run(capsys, "fourier", "--traj", siegel_file, "--k-max", "0", "--out", tmp_path / "s.json")
        assert code == 2

    def test_full_scale_gate(self, siegel_file, tmp_path, capsys):
        code, _, err = run(capsys, "fourier", "--traj", siegel_file, "--k-max", "300000", "--out", tmp_path / "s.json")
        assert code == 2 and "--full-scale" in err

    def test_conjugacy_replay(self, spectrum, siegel_file, tmp_path, capsys):
        out = tmp_path / "a.csv"
        code, text, _ = run(capsys, "conjugacy", "--spectrum", spectrum, "--traj", siegel_file, "--out", out)
        assert code == 0
        r0 = float(XReal(field(text, "R0")))
        assert 0 < r0 < 1
        replay = float(re.search(r"replay max error (\S+)", text).group(1))
        # a 300-term series from 2e4 samples; the full-scale bound lives in
        # the acceptance suite
        assert replay < 1e-20
        header, cols, rows = read_table(out)
        assert header["product"] == "conjugacy power-series coefficients"
        assert cols[0] == "k"

    def test_fixed_r0_out_of_range(self, spectrum, capsys):
        code, _, _ = run(capsys, "conjugacy", "--spectrum", spectrum, "--r0", "1")
        assert code == 2

    def test_curve(self, spectrum, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code, _, _ = run(capsys, "curve", "--spectrum", spectrum, "--r", "0.99", "--n-theta", "64", "--out", out)
        assert code == 0
        header, cols, rows = read_table(out)
        assert cols == ["theta", "re", "im"] and len(rows) == 64
        assert "r=9.9" in header["product"]

    def test_length_sweep(self, spectrum, tmp_path, capsys):
        out = tmp_path / "len.csv"
        code, _, _ = run(capsys, "length", "--spectrum", spectrum, "--r", "0.5..0.99", "--steps", "6", "--out", out)
        assert code == 0
        _, cols, rows = read_table(out)
        direct = [XReal(r[1]) for r in rows]
        assert all(b >= a for a, b in zip(direct, direct[1:]))
        assert all(XReal(r[1]) <= XReal(r[2]) for r in rows)

    def test_deterministic_outputs(self, spectrum, siegel_file, tmp_path, capsys):
        outs = {}
        for name, argv in (
            ("spec", ["fourier", "--traj", siegel_file, "--k-max", "120", "--out", tmp_path / "s.json"]),
            ("len", ["length", "--spectrum", spectrum, "--r", "0.5,0.9", "--out", tmp_path / "l.csv"]),
            ("orbit", ["simulate", "--rho", "golden", "--z0", "0.3", "--n", "50", "--out", tmp_path / "o.csv"]),
        ):
            first = None
            for _ in range(2):
                assert run(capsys, *argv)[0] == 0
                blob = argv[-1].read_bytes()
                assert first is None or blob == first
                first = blob
            outs[name] = first
        assert outs["spec"] != outs["len"]


def test_module_entry_point(tmp_path):
    out = tmp_path / "o.csv"
    res = subprocess.run(
        [sys.executable, "-m", "qpbirkhoff", "simulate", "--rho", "golden", "--z0", "0.1", "--n", "5", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and out.exists()
