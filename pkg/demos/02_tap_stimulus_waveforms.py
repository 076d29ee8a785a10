"""Generate the three tap stimulus schedules and plot them side by side.

The amplitude tap oscillates the pressure with a decaying depth and
settles at maximum; the lateral tap sweeps the focus along a shrinking
line at constant amplitude; the stationary sweep is the slow sub-mm
motion used while the finger rests on the object.

Run:  python demos/02_tap_stimulus_waveforms.py
"""
from pathlib import Path

from airtap import default_config, sample_profile
from airtap.formats import waveform_csv

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

cfg = default_config()
RATE = 4000.0  # dense enough to draw the 200 Hz oscillation cleanly

series = {
    "amplitude_tap": sample_profile(cfg.profiles.am, RATE, 0.15),
    "lateral_tap": sample_profile(cfg.profiles.lm, RATE, 0.15),
    "stationary_press": sample_profile(cfg.profiles.stationary, RATE, 0.4),
}

for name, s in series.items():
    path = OUT / f"{name}.csv"
    path.write_bytes(waveform_csv(s))
    amps = [x.amplitude_scale for x in s.samples]
    offs = [x.focus_offset[0] * 1000 for x in s.samples]
    print(f"{name}: {len(s)} frames, amplitude {min(amps):.2f}..{max(amps):.2f}, "
          f"offset {min(offs):+.2f}..{max(offs):+.2f} mm -> {path}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the PNG")
    raise SystemExit(0)

fig, axes = plt.subplots(2, 3, figsize=(11, 5), sharex="col")
for col, (name, s) in enumerate(series.items()):
    ts = [s.time(n) * 1000 for n in range(len(s))]
    axes[0, col].plot(ts, [x.amplitude_scale for x in s.samples], lw=0.9)
    axes[0, col].set_title(name.replace("_", " "))
    axes[0, col].set_ylim(-0.05, 1.1)
    axes[1, col].plot(ts, [x.focus_offset[0] * 1000 for x in s.samples],
                      lw=0.9, color="tab:orange")
    axes[1, col].set_xlabel("t (ms)")
axes[0, 0].set_ylabel("amplitude scale")
axes[1, 0].set_ylabel("focus offset (mm)")
fig.tight_layout()
fig.savefig(OUT / "stimulus_waveforms.png", dpi=130)
print(f"wrote {OUT / 'stimulus_waveforms.png'}")
