"""Command line entry points: field, profile, replay, serve.

The config file comes from --config, else the AIRTAP_CONFIG environment
variable, else built-in defaults. All outputs are deterministic given the
config and inputs; replay prints the SHA-256 content digest of its CSVs
for regression comparison.
"""
from __future__ import annotations

import argparse
import asyncio
import os
import sys
from pathlib import Path

import numpy as np

from . import formats
from .config import CONFIG_ENV_VAR, AppConfig, ConfigError, default_config, load_config_file
from .engine import render_trace
from .field import centered_grid, focal_metrics, focus_phases, quantize_phases, sample_grid
from .profiles import sample_profile
from .server import serve_forever


def _load(args) -> AppConfig:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return default_config()
    return load_config_file(path)


def _parse_triple(text: str, name: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"{name} expects three comma-separated values, got {text!r}")
    return parts


def cmd_field(args) -> int:
    config = _load(args)
    if args.focus is None:
        focus = np.array([0.0, 0.0, config.z_panel])
    else:
        x, y, z = (float(v) / 1000.0 for v in _parse_triple(args.focus, "--focus"))
        focus = np.array([x, y, z])
    nu_s, nv_s, sp_s = _parse_triple(args.grid, "--grid")
    nu, nv, spacing = int(nu_s), int(nv_s), float(sp_s) / 1000.0
    spec = centered_grid(focus, nu, nv, spacing)

    drive = focus_phases(config.array, focus)
    if config.quant_bits:
        drive = quantize_phases(drive, config.quant_bits)
    grid = sample_grid(config.array, drive, spec, config.emission)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    csv_path = out.with_suffix(".csv")
    pgm_path = out.with_suffix(".pgm")
    csv_bytes = formats.grid_csv(grid)
    csv_path.write_bytes(csv_bytes)
    pgm_path.write_bytes(formats.grid_pgm(grid))

    m = focal_metrics(grid)
    print(f"grid {nu}x{nv} spacing {spacing * 1000.0:g} mm at focus "
          f"({focus[0] * 1000.0:g}, {focus[1] * 1000.0:g}, {focus[2] * 1000.0:g}) mm")
    print(f"peak radiation pressure {m.peak_value:.6g} Pa at "
          f"({m.peak_location[0] * 1000.0:.3f}, {m.peak_location[1] * 1000.0:.3f}, "
          f"{m.peak_location[2] * 1000.0:.3f}) mm")
    fu = "n/a" if m.fwhm_u is None else f"{m.fwhm_u * 1000.0:.3f} mm"
    fv = "n/a" if m.fwhm_v is None else f"{m.fwhm_v * 1000.0:.3f} mm"
    print(f"fwhm u {fu}, v {fv}")
    print(f"wrote {csv_path} ({formats.digest(csv_bytes)}) and {pgm_path}")
    return 0


def cmd_profile(args) -> int:
    config = _load(args)
    params = {
        "am": config.profiles.am,
        "lm": config.profiles.lm,
        "stationary": config.profiles.stationary,
    }[args.method]
    series = sample_profile(params, args.rate, args.duration)
    data = formats.waveform_csv(series)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    print(f"wrote {out}: {len(series)} frames at {args.rate:g} Hz "
          f"({formats.digest(data)})")
    return 0


def cmd_replay(args) -> int:
    config = _load(args)
    trace_text = Path(args.trace).read_text(encoding="utf-8")
    if not trace_text.strip():
        print(f"usage error: trace file {args.trace} is empty", file=sys.stderr)
        return 2
    trace = formats.parse_trace(trace_text)
    series, log = render_trace(trace, config.scene, config.profiles,
                               config.control_rate)
    frames = formats.waveform_csv(series)
    phases = formats.phase_log_csv(log)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frames_path = out.parent / (out.name + "_frames.csv")
    phases_path = out.parent / (out.name + "_phases.csv")
    frames_path.write_bytes(frames)
    phases_path.write_bytes(phases)
    print(f"frames {frames_path}: {len(series)} at {config.control_rate:g} Hz "
          f"({formats.digest(frames)})")
    print(f"phases {phases_path}: {len(log)} transitions "
          f"({formats.digest(phases)})")
    return 0


def cmd_serve(args) -> int:
    config = _load(args)

    def ready(server):
        sock = server.sockets[0].getsockname()
        print(f"listening on ws://{sock[0]}:{sock[1]} "
              f"(control {config.control_rate:g} Hz, wire {config.wire_rate:g} Hz)",
              flush=True)

    asyncio.run(serve_forever(config, args.host, args.port, ready=ready))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="airtap",
        description="Airborne-ultrasound tap-haptics simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", metavar="PATH", default=None,
                       help=f"config file (default: ${CONFIG_ENV_VAR} or built-ins)")

    p = sub.add_parser("field", help="sample a focused radiation-pressure grid")
    add_config(p)
    p.add_argument("--focus", metavar="X,Y,Z", default=None,
                   help="focus point in mm (default 0,0,z_panel)")
    p.add_argument("--grid", metavar="NU,NV,SPACING", default="101,101,2",
                   help="grid cells and spacing in mm (default 101,101,2)")
    p.add_argument("--out", metavar="PATH", required=True,
                   help="output path prefix (.csv and .pgm are written)")
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("profile", help="export a stimulus waveform CSV")
    add_config(p)
    p.add_argument("--method", choices=("am", "lm", "stationary"), required=True)
    p.add_argument("--rate", metavar="HZ", type=float, default=1000.0)
    p.add_argument("--duration", metavar="S", type=float, default=0.2)
    p.add_argument("--out", metavar="PATH", required=True)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("replay", help="replay a finger trace offline")
    add_config(p)
    p.add_argument("--trace", metavar="PATH", required=True,
                   help="trace CSV (t_s,x_mm,y_mm,down)")
    p.add_argument("--out", metavar="PATH", required=True,
                   help="output prefix (_frames.csv and _phases.csv)")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("serve", help="run the live session gateway")
    add_config(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", metavar="N", type=int, default=8765)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
