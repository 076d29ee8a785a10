"""Airborne-ultrasound tap-haptics simulator.

Models a multi-unit 40 kHz phased array, solves single-focus phases,
computes radiation-pressure fields, schedules tap stimuli (amplitude tap,
lateral tap, sustained press), and drives them from 2D finger contact
against virtual objects, offline or over a live WebSocket gateway.
"""

from .config import AppConfig, ConfigError, default_config, load_config, load_scene
from .engine import (DriveFrame, FingerState, MaterialKind, MaterialProfiles,
                     Phase, PhaseTransition, TapSession, VirtualObject, advance,
                     detect_contact, drive_for, ingest_pointer, make_drive_frame,
                     render_trace)
from .field import (DEFAULT_EMISSION, OMNI_EMISSION, DriveVector, EmissionModel,
                    FieldGrid, GridSpec, SpotMetrics, centered_grid,
                    focal_metrics, focus_phases, pressure_at, quantize_phases,
                    radiation_pressure, sample_grid)
from .geometry import (ArrayModel, UnitLayout, UnitPose, assemble_rig,
                       build_unit, default_rig, local_to_world,
                       pose_from_axis_angle, world_to_local)
from .profiles import (AmTapParams, DriveSample, FrameSeries, LmTapParams,
                       StationaryLmParams, am_tap_sample, lm_tap_sample,
                       sample_profile, stationary_lm_sample)

__version__ = "0.1.0"

__all__ = [
    "AppConfig", "ConfigError", "default_config", "load_config", "load_scene",
    "DriveFrame", "FingerState", "MaterialKind", "MaterialProfiles", "Phase",
    "PhaseTransition", "TapSession", "VirtualObject", "advance",
    "detect_contact", "drive_for", "ingest_pointer", "make_drive_frame",
    "render_trace",
    "DEFAULT_EMISSION", "OMNI_EMISSION", "DriveVector", "EmissionModel",
    "FieldGrid", "GridSpec", "SpotMetrics", "centered_grid", "focal_metrics",
    "focus_phases", "pressure_at", "quantize_phases", "radiation_pressure",
    "sample_grid",
    "ArrayModel", "UnitLayout", "UnitPose", "assemble_rig", "build_unit",
    "default_rig", "local_to_world", "pose_from_axis_angle", "world_to_local",
    "AmTapParams", "DriveSample", "FrameSeries", "LmTapParams",
    "StationaryLmParams", "am_tap_sample", "lm_tap_sample", "sample_profile",
    "stationary_lm_sample",
]
