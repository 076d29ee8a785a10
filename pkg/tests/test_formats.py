import numpy as np
import pytest

from airtap.engine import FingerState, Phase, PhaseTransition
from airtap.field import FieldGrid, centered_grid
from airtap.formats import (digest, grid_csv, grid_pgm, parse_pgm, parse_trace,
                            phase_log_csv, trace_csv, waveform_csv)
from airtap.profiles import DriveSample, FrameSeries


def small_series():
    samples = (DriveSample(0.0, (0.0, 0.0)),
               DriveSample(0.5, (0.0003, -0.0001)),
               DriveSample(1.0, (0.0, 0.0005)))
    return FrameSeries(1000.0, 0.0, samples)


def small_grid():
    spec = centered_grid([0.0, 0.0, 0.2], 3, 2, 0.001)
    p = np.array([[1 + 2j, 0.5j], [3.0, -1 - 1j], [0.25, 2.0]])
    rad = 2.0 * np.abs(p) ** 2 / (1.21 * 343.0 ** 2)
    return FieldGrid(spec, p, rad)


class TestWaveformCsv:
    def test_header_and_rows(self):
        data = waveform_csv(small_series()).decode()
        lines = data.strip().split("\n")
        assert lines[0] == "t_s,amplitude,offset_u_mm,offset_v_mm"
        assert len(lines) == 4
        assert lines[2] == "0.001,0.5,0.3,-0.1"

    def test_nine_significant_digits(self):
        series = FrameSeries(3.0, 0.0, (DriveSample(1 / 3, (0.0, 0.0)),))
        row = waveform_csv(series).decode().strip().split("\n")[1]
        assert row.split(",")[1] == "0.333333333"

    def test_newline_endings_only(self):
        assert b"\r" not in waveform_csv(small_series())


class TestTraceCsv:
    def test_round_trip(self):
        trace = [FingerState((0.01, -0.02), True, 0.5),
                 FingerState((0.0, 0.0), False, 0.75)]
        back = parse_trace(trace_csv(trace).decode())
        assert back == trace

    def test_header_required(self):
        with pytest.raises(ValueError, match="row 1"):
            parse_trace("0,1,2,1\n")

    def test_malformed_row_named(self):
        text = "t_s,x_mm,y_mm,down\n0,0,0,0\n0.1,zero,0,1\n"
        with pytest.raises(ValueError, match="row 3"):
            parse_trace(text)

    def test_wrong_field_count_named(self):
        text = "t_s,x_mm,y_mm,down\n0,0,0\n"
        with pytest.raises(ValueError, match="row 2"):
            parse_trace(text)

    def test_bad_down_flag_named(self):
        text = "t_s,x_mm,y_mm,down\n0,0,0,maybe\n"
        with pytest.raises(ValueError, match="row 2.*maybe"):
            parse_trace(text)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            parse_trace("\n\n")

    def test_accepts_true_false_words(self):
        text = "t_s,x_mm,y_mm,down\n0,1,2,true\n0.5,1,2,false\n"
        trace = parse_trace(text)
        assert trace[0].down is True
        assert trace[1].down is False


class TestPhaseLogCsv:
    def test_format(self):
        log = [PhaseTransition(0.25, Phase.IDLE, Phase.ATTENUATION, 1),
               PhaseTransition(0.5, Phase.ATTENUATION, Phase.IDLE, None)]
        lines = phase_log_csv(log).decode().strip().split("\n")
        assert lines[0] == "t_s,from,to,object_id"
        assert lines[1] == "0.25,IDLE,ATTENUATION,1"
        assert lines[2] == "0.5,ATTENUATION,IDLE,"


class TestGridFormats:
    def test_csv_layout(self):
        data = grid_csv(small_grid()).decode()
        lines = data.strip().split("\n")
        assert lines[0] == "u_mm,v_mm,re_p,im_p,radiation_Pa"
        assert len(lines) == 1 + 3 * 2
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0"
        assert float(first[2]) == 1.0 and float(first[3]) == 2.0

    def test_pgm_round_trip(self):
        grid = small_grid()
        w, h, img = parse_pgm(grid_pgm(grid))
        assert (w, h) == (3, 2)
        peak = grid.radiation_pressure.max()
        expect = np.round(grid.radiation_pressure.T * 65535.0 / peak)
        assert np.array_equal(img, expect.astype(np.uint16))
        assert img.max() == 65535

    def test_pgm_all_zero_grid(self):
        spec = centered_grid([0.0, 0.0, 0.2], 3, 3, 0.001)
        grid = FieldGrid(spec, np.zeros((3, 3), complex), np.zeros((3, 3)))
        w, h, img = parse_pgm(grid_pgm(grid))
        assert img.max() == 0


class TestDigest:
    def test_known_value(self):
        # sha256 of "airtap\n", frozen from hashlib
        assert digest(b"airtap\n") == (
            "sha256:81cbf067f88646204f784baccae40b22961cfba7ef4e780dafdf1db446ae87ca")

    def test_stable(self):
        data = waveform_csv(small_series())
        assert digest(data) == digest(bytes(data))
