"""Canonical flat-file formats: CSV exports, trace files, 16-bit PGM.

Everything is emitted with 9 significant digits, '\\n' line endings, and
UTF-8 bytes so output hashes reproduce across platforms. The project-wide
regression digest is SHA-256 over these canonical bytes.
"""
from __future__ import annotations

import hashlib
from typing import List, Sequence

import numpy as np

from .engine import FingerState, PhaseTransition
from .field import FieldGrid
from .profiles import FrameSeries

DIGEST_NAME = "sha256"


def digest(data: bytes) -> str:
    """Project-wide content digest, formatted `sha256:<hex>`."""
    return f"{DIGEST_NAME}:{hashlib.sha256(data).hexdigest()}"


def _f(x: float) -> str:
    return format(float(x), ".9g")


def waveform_csv(series: FrameSeries) -> bytes:
    """Frame series as `t_s,amplitude,offset_u_mm,offset_v_mm` rows."""
    lines = ["t_s,amplitude,offset_u_mm,offset_v_mm"]
    for n, s in enumerate(series.samples):
        lines.append(",".join((
            _f(series.time(n)),
            _f(s.amplitude_scale),
            _f(s.focus_offset[0] * 1000.0),
            _f(s.focus_offset[1] * 1000.0),
        )))
    return ("\n".join(lines) + "\n").encode()


def phase_log_csv(log: Sequence[PhaseTransition]) -> bytes:
    lines = ["t_s,from,to,object_id"]
    for ev in log:
        obj = "" if ev.object_id is None else str(ev.object_id)
        lines.append(f"{_f(ev.t)},{ev.from_phase.value},{ev.to_phase.value},{obj}")
    return ("\n".join(lines) + "\n").encode()


def trace_csv(trace: Sequence[FingerState]) -> bytes:
    lines = ["t_s,x_mm,y_mm,down"]
    for s in trace:
        lines.append(",".join((
            _f(s.t),
            _f(s.position[0] * 1000.0),
            _f(s.position[1] * 1000.0),
            "1" if s.down else "0",
        )))
    return ("\n".join(lines) + "\n").encode()


_TRUE = {"1", "true", "True", "TRUE"}
_FALSE = {"0", "false", "False", "FALSE"}


def parse_trace(text: str) -> List[FingerState]:
    """Parse a trace CSV; malformed rows are reported by number."""
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError("trace file is empty")
    if lines[0].strip() != "t_s,x_mm,y_mm,down":
        raise ValueError("trace row 1: expected header t_s,x_mm,y_mm,down")
    out: List[FingerState] = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = [p.strip() for p in ln.split(",")]
        if len(parts) != 4:
            raise ValueError(f"trace row {i}: expected 4 fields, got {len(parts)}")
        try:
            t = float(parts[0])
            x = float(parts[1]) / 1000.0
            y = float(parts[2]) / 1000.0
        except ValueError:
            raise ValueError(f"trace row {i}: non-numeric value") from None
        if parts[3] in _TRUE:
            down = True
        elif parts[3] in _FALSE:
            down = False
        else:
            raise ValueError(f"trace row {i}: down must be 0/1/true/false, "
                             f"got {parts[3]!r}")
        out.append(FingerState((x, y), down, t))
    if not out:
        raise ValueError("trace file has a header but no samples")
    return out


def grid_csv(grid: FieldGrid) -> bytes:
    """Field grid as `u_mm,v_mm,re_p,im_p,radiation_Pa` rows.

    u/v are grid-local offsets from the origin corner, in millimeters.
    """
    lines = ["u_mm,v_mm,re_p,im_p,radiation_Pa"]
    s_mm = grid.spacing * 1000.0
    for i in range(grid.nu):
        for j in range(grid.nv):
            p = grid.complex_pressure[i, j]
            lines.append(",".join((
                _f(i * s_mm), _f(j * s_mm),
                _f(p.real), _f(p.imag),
                _f(grid.radiation_pressure[i, j]),
            )))
    return ("\n".join(lines) + "\n").encode()


def grid_pgm(grid: FieldGrid) -> bytes:
    """16-bit binary PGM of radiation pressure, peak mapped to 65535.

    Pixel columns follow the u axis, rows the v axis (row 0 is v = 0).
    """
    rad = grid.radiation_pressure
    peak = float(rad.max())
    if peak > 0.0:
        img = np.round(rad.T * (65535.0 / peak)).astype(">u2")
    else:
        img = np.zeros((grid.nv, grid.nu), dtype=">u2")
    header = f"P5\n{grid.nu} {grid.nv}\n65535\n".encode()
    return header + img.tobytes()


def parse_pgm(data: bytes):
    """Read back a binary 16-bit PGM as (width, height, uint16 array)."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    width, height = (int(v) for v in parts[1].split())
    maxval = int(parts[2])
    if maxval != 65535:
        raise ValueError(f"expected 16-bit PGM, maxval {maxval}")
    img = np.frombuffer(parts[3], dtype=">u2", count=width * height)
    return width, height, img.reshape(height, width)
