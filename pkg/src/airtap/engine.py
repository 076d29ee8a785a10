"""Contact-driven tap session: phase machine, material dispatch, replay.

A session is IDLE until the finger presses inside a scene object. Contact
starts the decaying tap stimulus for that object's material (amplitude tap
for the soft "balloon" objects, lateral tap for the resonant "cymbal"
ones); holding past the tap duration switches to the sustained-press
sweep; losing contact in any phase drops straight back to IDLE. The
contact anchor is frozen at the touch instant so replays are
deterministic.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import field as fld
from .profiles import (AmTapParams, DriveSample, FrameSeries, LmTapParams,
                       StationaryLmParams, am_tap_sample, lm_tap_sample,
                       stationary_lm_sample)


class Phase(enum.Enum):
    IDLE = "IDLE"
    ATTENUATION = "ATTENUATION"
    STATIONARY = "STATIONARY"


class MaterialKind(enum.Enum):
    AM_BALLOON = "am_balloon"
    LM_CYMBAL = "lm_cymbal"


MATERIAL_COLOR = {MaterialKind.AM_BALLOON: "red", MaterialKind.LM_CYMBAL: "yellow"}
COLOR_MATERIAL = {v: k for k, v in MATERIAL_COLOR.items()}


@dataclass(frozen=True)
class MaterialProfiles:
    """Tap stimulus per material plus the shared sustained-press sweep."""

    am: AmTapParams = AmTapParams()
    lm: LmTapParams = LmTapParams()
    stationary: StationaryLmParams = StationaryLmParams()

    def t_att(self, kind: MaterialKind) -> float:
        return self.am.t_att if kind is MaterialKind.AM_BALLOON else self.lm.t_att


@dataclass(frozen=True)
class VirtualObject:
    """Axis-aligned rectangle in panel coordinates with a material."""

    id: int
    rect: Tuple[float, float, float, float]  # x, y, width, height (m)
    material: MaterialKind

    def __post_init__(self):
        x, y, w, h = (float(v) for v in self.rect)
        if w <= 0 or h <= 0:
            raise ValueError(f"object {self.id}: rect must have positive area")
        object.__setattr__(self, "rect", (x, y, w, h))

    @property
    def color(self) -> str:
        return MATERIAL_COLOR[self.material]

    def contains(self, point) -> bool:
        x, y, w, h = self.rect
        px, py = point
        return x <= px <= x + w and y <= py <= y + h


@dataclass(frozen=True)
class FingerState:
    """One touch-panel sample: 2D position (m), presence flag, timestamp."""

    position: Tuple[float, float]
    down: bool
    t: float


@dataclass(frozen=True)
class PhaseTransition:
    t: float
    from_phase: Phase
    to_phase: Phase
    object_id: Optional[int]


@dataclass
class TapSession:
    """Single-owner mutable session state; advance() is the only writer."""

    profiles: MaterialProfiles = dc_field(default_factory=MaterialProfiles)
    phase: Phase = Phase.IDLE
    active_object: Optional[int] = None
    active_material: Optional[MaterialKind] = None
    phase_entry_time: float = 0.0
    contact_anchor: Tuple[float, float] = (0.0, 0.0)
    finger: Optional[FingerState] = None
    last_time: float = -math.inf


def ingest_pointer(session: TapSession, sample: FingerState) -> TapSession:
    """Replace the finger state; never changes the phase."""
    if session.finger is not None and sample.t < session.finger.t:
        raise ValueError(
            f"pointer time went backwards: {sample.t} < {session.finger.t}")
    session.finger = sample
    return session


def detect_contact(finger: Optional[FingerState],
                   scene: Sequence[VirtualObject]):
    """Object under a pressed finger, or None.

    Overlapping regions resolve to the lowest object id. Returns
    (object_id, contact_point).
    """
    if finger is None or not finger.down:
        return None
    hit = None
    for obj in scene:
        if obj.contains(finger.position) and (hit is None or obj.id < hit.id):
            hit = obj
    if hit is None:
        return None
    return hit.id, finger.position


def _find_object(scene: Sequence[VirtualObject], object_id: int) -> VirtualObject:
    for obj in scene:
        if obj.id == object_id:
            return obj
    raise ValueError(f"object {object_id} not in scene")


def advance(session: TapSession, scene: Sequence[VirtualObject],
            now: float) -> List[PhaseTransition]:
    """Step the phase machine to `now`; returns the transitions taken.

    Contact loss (finger up or outside the active object) aborts to IDLE
    from any phase; fresh contact from IDLE starts the tap with the anchor
    frozen at the contact point; holding past the material's tap duration
    moves to the sustained-press phase. A slide from one object onto
    another in a single step yields two transitions (abort, then fresh
    contact).
    """
    if now < session.last_time:
        raise ValueError(f"advance time went backwards: {now} < {session.last_time}")
    session.last_time = now
    events: List[PhaseTransition] = []
    contact = detect_contact(session.finger, scene)

    if session.phase is not Phase.IDLE:
        if contact is None or contact[0] != session.active_object:
            events.append(PhaseTransition(now, session.phase, Phase.IDLE,
                                          session.active_object))
            session.phase = Phase.IDLE
            session.active_object = None
            session.active_material = None
        elif (session.phase is Phase.ATTENUATION
              and now - session.phase_entry_time
              >= session.profiles.t_att(session.active_material)):
            events.append(PhaseTransition(now, Phase.ATTENUATION,
                                          Phase.STATIONARY, session.active_object))
            session.phase = Phase.STATIONARY
            session.phase_entry_time = now

    if session.phase is Phase.IDLE and contact is not None:
        obj_id, point = contact
        events.append(PhaseTransition(now, Phase.IDLE, Phase.ATTENUATION, obj_id))
        session.phase = Phase.ATTENUATION
        session.active_object = obj_id
        session.active_material = _find_object(scene, obj_id).material
        session.phase_entry_time = now
        session.contact_anchor = (float(point[0]), float(point[1]))

    return events


def drive_for(session: TapSession, t: float):
    """Stimulus sample at time t for the current phase.

    Returns (DriveSample, anchor) or None while IDLE. The profile clock is
    the time since the current phase began.
    """
    if session.phase is Phase.IDLE:
        return None
    dt = t - session.phase_entry_time
    if dt < 0:
        raise ValueError(f"time {t} precedes the current phase entry")
    if session.phase is Phase.STATIONARY:
        sample = stationary_lm_sample(dt, session.profiles.stationary)
    elif session.active_material is MaterialKind.AM_BALLOON:
        sample = am_tap_sample(dt, session.profiles.am)
    else:
        sample = lm_tap_sample(dt, session.profiles.lm)
    return sample, session.contact_anchor


_SILENT = DriveSample(0.0, (0.0, 0.0))


def render_trace(trace: Sequence[FingerState], scene: Sequence[VirtualObject],
                 profiles: MaterialProfiles, rate: float):
    """Replay a pointer trace offline at a fixed control rate.

    Finger state is zero-order held between trace samples; frame n sits at
    trace-start + n/rate and there are floor(span * rate) frames. Returns
    (FrameSeries, transition log); identical inputs give identical output
    bytes.
    """
    trace = list(trace)
    if len(trace) < 2:
        raise ValueError("trace needs at least two samples")
    for a, b in zip(trace, trace[1:]):
        if b.t <= a.t:
            raise ValueError(f"trace timestamps must be strictly increasing "
                             f"({b.t} after {a.t})")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    t0 = trace[0].t
    n_frames = int(math.floor((trace[-1].t - t0) * rate))
    if n_frames < 1:
        raise ValueError("trace is shorter than one frame period")

    session = TapSession(profiles=profiles)
    log: List[PhaseTransition] = []
    samples: List[DriveSample] = []
    cursor = 0
    for n in range(n_frames):
        t = t0 + n / rate
        while cursor < len(trace) and trace[cursor].t <= t:
            ingest_pointer(session, trace[cursor])
            cursor += 1
        log.extend(advance(session, scene, t))
        out = drive_for(session, t)
        samples.append(out[0] if out is not None else _SILENT)
    return FrameSeries(float(rate), t0, tuple(samples)), log


@dataclass(frozen=True)
class DriveFrame:
    """One ready-to-emit array command: focus, global scale, element drive."""

    t: float
    focus: np.ndarray           # (3,) world
    amplitude_scale: float
    drive: fld.DriveVector


def make_drive_frame(array, anchor: Tuple[float, float], sample: DriveSample,
                     z_panel: float, t: float = 0.0,
                     quant_bits: int = 0) -> DriveFrame:
    """Embed a panel-frame stimulus sample into the workspace plane.

    The focus is (anchor + offset) lifted to height z_panel above the
    array; phases are solved for that focus and optionally quantized.
    """
    focus = np.array([anchor[0] + sample.focus_offset[0],
                      anchor[1] + sample.focus_offset[1], z_panel])
    drive = fld.focus_phases(array, focus)
    if quant_bits:
        drive = fld.quantize_phases(drive, quant_bits)
    return DriveFrame(t, focus, sample.amplitude_scale, drive)
