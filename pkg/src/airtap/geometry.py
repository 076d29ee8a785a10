"""Transducer grids, rigid unit poses, and multi-unit rig assembly.

A rig is a list of planar transducer units, each placed by a rigid pose.
Assembly flattens everything into world-space position/normal tables in a
fixed order (unit index major, local index minor), so two rigs built from
equal specs are byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_CARRIER_HZ = 40_000.0
DEFAULT_SOUND_SPEED = 343.0

# Conventional 252-element unit: 18 x 14 grid at 10.16 mm pitch.
DEFAULT_UNIT_ROWS = 18
DEFAULT_UNIT_COLS = 14
DEFAULT_UNIT_PITCH = 0.01016

_ORTHO_TOL = 1e-9


def _readonly(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class UnitLayout:
    """Planar transducer grid in the unit-local frame.

    Positions lie in the local z = 0 plane, ordered row-major; the
    emission axis is local +z. Rows step along local x, columns along
    local y.
    """

    rows: int
    cols: int
    pitch: float
    positions: np.ndarray  # (rows*cols, 3)
    normal: np.ndarray     # (3,)


def build_unit(rows: int, cols: int, pitch: float) -> UnitLayout:
    """Build a centered rows x cols grid with the given pitch (meters)."""
    if rows < 1 or cols < 1:
        raise ValueError(f"unit grid must be at least 1x1, got {rows}x{cols}")
    if pitch <= 0:
        raise ValueError(f"pitch must be positive, got {pitch}")
    xs = (np.arange(rows) - (rows - 1) / 2.0) * pitch
    ys = (np.arange(cols) - (cols - 1) / 2.0) * pitch
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    positions = np.stack([gx.ravel(), gy.ravel(), np.zeros(rows * cols)], axis=1)
    return UnitLayout(int(rows), int(cols), float(pitch),
                      _readonly(positions), _readonly([0.0, 0.0, 1.0]))


@dataclass(frozen=True)
class UnitPose:
    """Rigid placement: world point = rotation @ local + translation."""

    translation: np.ndarray  # (3,)
    rotation: np.ndarray     # (3, 3), orthonormal, det +1

    def __post_init__(self):
        t = _readonly(np.asarray(self.translation, dtype=float).reshape(3))
        r = _readonly(np.asarray(self.rotation, dtype=float).reshape(3, 3))
        if not np.allclose(r @ r.T, np.eye(3), rtol=0.0, atol=_ORTHO_TOL):
            raise ValueError("pose rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > _ORTHO_TOL:
            raise ValueError("pose rotation must have determinant +1 (no reflections)")
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", r)

    @staticmethod
    def identity() -> "UnitPose":
        return UnitPose(np.zeros(3), np.eye(3))


def pose_from_axis_angle(translation, axis, angle_deg: float) -> UnitPose:
    """Pose from a translation (m) and an axis-angle rotation (degrees)."""
    ax = np.asarray(axis, dtype=float).reshape(3)
    n = np.linalg.norm(ax)
    if n == 0.0:
        raise ValueError("rotation axis must be non-zero")
    ux, uy, uz = ax / n
    th = math.radians(angle_deg)
    c, s = math.cos(th), math.sin(th)
    # Rodrigues' formula
    r = np.array([
        [c + ux * ux * (1 - c), ux * uy * (1 - c) - uz * s, ux * uz * (1 - c) + uy * s],
        [uy * ux * (1 - c) + uz * s, c + uy * uy * (1 - c), uy * uz * (1 - c) - ux * s],
        [uz * ux * (1 - c) - uy * s, uz * uy * (1 - c) + ux * s, c + uz * uz * (1 - c)],
    ])
    return UnitPose(np.asarray(translation, dtype=float), r)


def local_to_world(pose: UnitPose, p_local) -> np.ndarray:
    """Apply a pose to a point or an (n, 3) batch of points."""
    p = np.asarray(p_local, dtype=float)
    return p @ pose.rotation.T + pose.translation


def world_to_local(pose: UnitPose, p_world) -> np.ndarray:
    """Inverse of :func:`local_to_world`."""
    p = np.asarray(p_world, dtype=float)
    return (p - pose.translation) @ pose.rotation


@dataclass(frozen=True)
class ArrayModel:
    """Flattened world-space transducer table for a placed rig."""

    units: tuple  # ((UnitLayout, UnitPose), ...)
    positions: np.ndarray    # (n, 3) world positions
    normals: np.ndarray      # (n, 3) world unit normals
    unit_index: np.ndarray   # (n,) owning unit per transducer
    local_index: np.ndarray  # (n,) row-major index within the unit
    carrier_frequency: float
    sound_speed: float

    @property
    def n_transducers(self) -> int:
        return self.positions.shape[0]

    @property
    def wavelength(self) -> float:
        return self.sound_speed / self.carrier_frequency

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def aperture(self) -> np.ndarray:
        """Extent of transducer centers along world x/y/z, shape (3,)."""
        return self.positions.max(axis=0) - self.positions.min(axis=0)


def assemble_rig(spec,
                 carrier_frequency: float = DEFAULT_CARRIER_HZ,
                 sound_speed: float = DEFAULT_SOUND_SPEED) -> ArrayModel:
    """Place units into world space and flatten the transducer tables.

    `spec` is a sequence of (UnitLayout, UnitPose) pairs. Ordering of the
    flattened table is unit-major, then row-major within the unit, which
    makes assembly a pure function of the spec.
    """
    spec = tuple(spec)
    if not spec:
        raise ValueError("rig spec must contain at least one unit")
    if carrier_frequency <= 0 or sound_speed <= 0:
        raise ValueError("carrier frequency and sound speed must be positive")
    pos_parts, nrm_parts, uidx_parts, lidx_parts = [], [], [], []
    for u, (layout, pose) in enumerate(spec):
        if not isinstance(pose, UnitPose):
            pose = UnitPose(*pose)
        pos_parts.append(local_to_world(pose, layout.positions))
        n_world = pose.rotation @ layout.normal
        nrm_parts.append(np.tile(n_world, (layout.positions.shape[0], 1)))
        uidx_parts.append(np.full(layout.positions.shape[0], u, dtype=np.int64))
        lidx_parts.append(np.arange(layout.positions.shape[0], dtype=np.int64))
    return ArrayModel(
        units=spec,
        positions=_readonly(np.concatenate(pos_parts)),
        normals=_readonly(np.concatenate(nrm_parts)),
        unit_index=np.concatenate(uidx_parts),
        local_index=np.concatenate(lidx_parts),
        carrier_frequency=float(carrier_frequency),
        sound_speed=float(sound_speed),
    )


# Exact quarter-turn about z, so the default rig keeps exact mirror symmetry.
_QUARTER_TURN_Z = np.array([[0.0, -1.0, 0.0],
                            [1.0, 0.0, 0.0],
                            [0.0, 0.0, 1.0]])


def default_rig_spec():
    """Six 252-element units tiled 3 columns x 2 rows, zero footprint gap.

    Each unit is turned a quarter turn about z so its short side runs along
    x; the combined aperture comes out near-square (~427 x 366 mm), which
    keeps the focal spot compact in both directions at workspace height.
    """
    layout = build_unit(DEFAULT_UNIT_ROWS, DEFAULT_UNIT_COLS, DEFAULT_UNIT_PITCH)
    # footprint after the quarter turn: cols*pitch along x, rows*pitch along y
    fx = DEFAULT_UNIT_COLS * DEFAULT_UNIT_PITCH
    fy = DEFAULT_UNIT_ROWS * DEFAULT_UNIT_PITCH
    spec = []
    for iy in range(2):
        for ix in range(3):
            tr = np.array([(ix - 1) * fx, (iy - 0.5) * fy, 0.0])
            spec.append((layout, UnitPose(tr, _QUARTER_TURN_Z)))
    return tuple(spec)


def default_rig(carrier_frequency: float = DEFAULT_CARRIER_HZ,
                sound_speed: float = DEFAULT_SOUND_SPEED) -> ArrayModel:
    """The default six-unit rig (1512 transducers, emitting +z)."""
    return assemble_rig(default_rig_spec(), carrier_frequency, sound_speed)
