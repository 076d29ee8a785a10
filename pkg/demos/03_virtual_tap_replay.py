"""Replay synthetic finger traces against the two-object scene.

Shows the contact state machine end to end: a tap-and-hold on the red
(soft) object walks IDLE -> tap -> sustained press; a quick double tap on
the yellow (resonant) object restarts the tap stimulus twice and never
reaches the press phase. Also materializes one full per-transducer drive
frame for the moment of contact.

Run:  python demos/03_virtual_tap_replay.py
"""
from pathlib import Path

from airtap import FingerState, default_config, make_drive_frame, render_trace
from airtap.formats import digest, phase_log_csv, trace_csv, waveform_csv

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

cfg = default_config()
RED = (-0.080, 0.0)      # inside the red object
YELLOW = (0.080, 0.0)    # inside the yellow object


def hold(pos, t_down, t_up, t_end, step=0.01):
    trace = [FingerState((0.0, 0.0), False, 0.0)]
    t = t_down
    while t < t_up:
        trace.append(FingerState(pos, True, round(t, 6)))
        t += step
    trace.append(FingerState(pos, False, round(t_up, 6)))
    trace.append(FingerState(pos, False, t_end))
    return trace


scenarios = {
    "hold_red": hold(RED, 0.0205, 0.3205, 0.4005),
    "double_tap_yellow": (
        hold(YELLOW, 0.0205, 0.0605, 0.1005)[:-1]
        + hold(YELLOW, 0.1505, 0.1905, 0.3005)[1:]
    ),
}

for name, trace in scenarios.items():
    (OUT / f"{name}_trace.csv").write_bytes(trace_csv(trace))
    series, log = render_trace(trace, cfg.scene, cfg.profiles, cfg.control_rate)
    (OUT / f"{name}_frames.csv").write_bytes(waveform_csv(series))
    (OUT / f"{name}_phases.csv").write_bytes(phase_log_csv(log))
    print(f"{name}: {len(series)} frames, digest "
          f"{digest(waveform_csv(series))[:23]}...")
    for ev in log:
        obj = "" if ev.object_id is None else f" object {ev.object_id}"
        print(f"  {ev.t * 1000:7.1f} ms  {ev.from_phase.value:>11} -> "
              f"{ev.to_phase.value}{obj}")

# One full drive frame: the stimulus sample right after the red contact,
# anchored at the touch point and lifted to the workspace plane.
series, log = render_trace(scenarios["hold_red"], cfg.scene, cfg.profiles,
                           cfg.control_rate)
n_contact = round((log[0].t - series.t0) * series.rate) + 5
sample = series.samples[n_contact]
frame = make_drive_frame(cfg.array, RED, sample, cfg.z_panel,
                         t=series.time(n_contact), quant_bits=cfg.quant_bits)
print(f"\ndrive frame at t={frame.t * 1000:.0f} ms: focus "
      f"({frame.focus[0] * 1000:.1f}, {frame.focus[1] * 1000:.1f}, "
      f"{frame.focus[2] * 1000:.0f}) mm, amplitude {frame.amplitude_scale:.3f}, "
      f"{len(frame.drive)} element phases")
