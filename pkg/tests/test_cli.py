import numpy as np
import pytest

from airtap.cli import main
from airtap.engine import FingerState
from airtap.formats import parse_pgm, trace_csv

OMNI_SMALL_CFG = """\
emission:
  directivity: omni
"""


@pytest.fixture
def tap_trace_file(tmp_path):
    trace = [FingerState((0.0, 0.0), False, 0.0)]
    trace += [FingerState((-0.080, 0.0), True, 0.0005 + 0.01 * i) for i in range(30)]
    trace.append(FingerState((-0.080, 0.0), False, 0.3005))
    trace.append(FingerState((-0.080, 0.0), False, 0.4005))
    path = tmp_path / "trace.csv"
    path.write_bytes(trace_csv(trace))
    return path


class TestFieldCommand:
    def test_writes_symmetric_outputs(self, tmp_path, capsys):
        out = tmp_path / "field"
        rc = main(["field", "--focus", "0,0,200", "--grid", "21,21,4",
                   "--out", str(out)])
        assert rc == 0
        w, h, img = parse_pgm((tmp_path / "field.pgm").read_bytes())
        assert (w, h) == (21, 21)
        asym = np.abs(img.astype(int) - img[:, ::-1].astype(int))
        assert asym.max() <= 1  # mirrored sums differ by at most one LSB
        asym = np.abs(img.astype(int) - img[::-1, :].astype(int))
        assert asym.max() <= 1
        assert "peak radiation pressure" in capsys.readouterr().out

    def test_repeated_invocations_byte_identical(self, tmp_path):
        args = ["field", "--focus", "5,-3,200", "--grid", "9,7,3"]
        rc1 = main(args + ["--out", str(tmp_path / "a")])
        rc2 = main(args + ["--out", str(tmp_path / "b")])
        assert rc1 == rc2 == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()

    def test_quantized_vs_continuous_peak_ratio(self, tmp_path):
        cfg8 = tmp_path / "q8.yaml"
        cfg8.write_text(OMNI_SMALL_CFG + "quant_bits: 8\n")
        cfg0 = tmp_path / "q0.yaml"
        cfg0.write_text(OMNI_SMALL_CFG + "quant_bits: 0\n")

        def peak(cfg, name):
            rc = main(["field", "--config", str(cfg), "--grid", "5,5,2",
                       "--out", str(tmp_path / name)])
            assert rc == 0
            text = (tmp_path / f"{name}.csv").read_text()
            return max(float(r.split(",")[4]) for r in text.strip().split("\n")[1:])

        ratio = peak(cfg8, "p8") / peak(cfg0, "p0")
        assert ratio >= 0.98

    def test_config_from_env(self, tmp_path, monkeypatch):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("quant_bits: 0\n")
        monkeypatch.setenv("AIRTAP_CONFIG", str(cfg))
        rc = main(["field", "--grid", "3,3,5", "--out", str(tmp_path / "env")])
        assert rc == 0

    def test_bad_config_fails_cleanly(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("profiles:\n  stationary:\n    size_mm: 5\n")
        rc = main(["field", "--config", str(cfg), "--out", str(tmp_path / "x")])
        assert rc == 1
        assert "stationary" in capsys.readouterr().err


class TestProfileCommand:
    def run(self, tmp_path, method, rate="1000", duration="0.2"):
        out = tmp_path / f"{method}.csv"
        rc = main(["profile", "--method", method, "--rate", rate,
                   "--duration", duration, "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t_s,amplitude,offset_u_mm,offset_v_mm"
        return [row.split(",") for row in lines[1:]]

    def test_am_ends_at_full_amplitude(self, tmp_path):
        rows = self.run(tmp_path, "am")
        assert len(rows) == 200
        assert float(rows[-1][1]) == 1.0
        assert all(float(r[2]) == 0.0 and float(r[3]) == 0.0 for r in rows)

    def test_stationary_offsets_below_half_millimeter(self, tmp_path):
        rows = self.run(tmp_path, "stationary", duration="1.0")
        assert len(rows) == 1000
        assert all(abs(float(r[2])) <= 0.5 and abs(float(r[3])) <= 0.5
                   for r in rows)

    def test_lm_amplitude_constant(self, tmp_path):
        rows = self.run(tmp_path, "lm")
        assert {float(r[1]) for r in rows} == {1.0}

    def test_unknown_method_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as ei:
            main(["profile", "--method", "chirp", "--out", str(tmp_path / "x")])
        assert ei.value.code == 2


class TestReplayCommand:
    def test_hash_stable_across_runs(self, tmp_path, capsys, tap_trace_file):
        rc1 = main(["replay", "--trace", str(tap_trace_file),
                    "--out", str(tmp_path / "r1")])
        out1 = capsys.readouterr().out
        rc2 = main(["replay", "--trace", str(tap_trace_file),
                    "--out", str(tmp_path / "r2")])
        out2 = capsys.readouterr().out
        assert rc1 == rc2 == 0
        h1 = [ln.split("sha256:")[1] for ln in out1.strip().split("\n")]
        h2 = [ln.split("sha256:")[1] for ln in out2.strip().split("\n")]
        assert h1 == h2
        assert (tmp_path / "r1_frames.csv").read_bytes() == \
            (tmp_path / "r2_frames.csv").read_bytes()

    def test_yellow_tap_names_object_id(self, tmp_path):
        trace = [FingerState((0.0, 0.3), False, 0.0),
                 FingerState((0.080, 0.0), True, 0.0505)]
        trace += [FingerState((0.080, 0.0), True, 0.0505 + 0.05 * i)
                  for i in range(1, 4)]
        path = tmp_path / "yellow.csv"
        path.write_bytes(trace_csv(trace))
        rc = main(["replay", "--trace", str(path), "--out", str(tmp_path / "y")])
        assert rc == 0
        log = (tmp_path / "y_phases.csv").read_text().strip().split("\n")
        assert any(row.endswith(",1") and "ATTENUATION" in row for row in log[1:])

    def test_empty_trace_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("")
        rc = main(["replay", "--trace", str(path), "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "empty" in capsys.readouterr().err

    def test_malformed_row_names_row(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("t_s,x_mm,y_mm,down\n0,0,0,0\nnope,0,0,1\n")
        rc = main(["replay", "--trace", str(path), "--out", str(tmp_path / "x")])
        assert rc == 1
        assert "row 3" in capsys.readouterr().err


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as ei:
            main([])
        assert ei.value.code == 2
