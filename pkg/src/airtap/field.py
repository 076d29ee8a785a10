"""Acoustic pressure and radiation-pressure computation for a driven rig.

Single-focus phase solving, complex pressure summation with a selectable
element directivity model, grid sampling, and focal-spot metrics. All
operations are pure functions; grid sampling is chunked internally but
cell values are bit-identical to independent single-point evaluations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import j1

from .geometry import ArrayModel

TWO_PI = 2.0 * math.pi

RHO_AIR = 1.21          # kg/m^3
SOUND_SPEED = 343.0     # m/s

#: Evaluation points closer than this to any element are rejected, not
#: clamped; clamping would silently corrupt oracle comparisons.
MIN_EVAL_DISTANCE = 1e-3


class TooCloseError(ValueError):
    """Evaluation point within MIN_EVAL_DISTANCE of a transducer."""

    def __init__(self, point_index: int, element_index: int, distance: float):
        self.point_index = point_index
        self.element_index = element_index
        self.distance = distance
        super().__init__(
            f"evaluation point {point_index} is {distance * 1000.0:.4f} mm from "
            f"transducer {element_index} (minimum {MIN_EVAL_DISTANCE * 1000.0:.1f} mm)")


@dataclass(frozen=True)
class EmissionModel:
    """Per-element radiation model.

    `p_ref` is the on-axis pressure-distance product of one element at
    full drive (Pa.m); absolute calibration is out of scope, so it
    defaults to 1 and all field-level checks are relative. Directivity is
    a far-field rigid circular piston, 2*J1(ka sin t)/(ka sin t), or
    omnidirectional (D = 1) for oracle work.
    """

    p_ref: float = 1.0
    directivity: str = "piston"   # "piston" | "omni"
    piston_radius: float = 0.0045
    rho: float = RHO_AIR

    def __post_init__(self):
        if self.directivity not in ("piston", "omni"):
            raise ValueError(f"unknown directivity model {self.directivity!r}")
        if self.p_ref <= 0 or self.piston_radius <= 0 or self.rho <= 0:
            raise ValueError("emission model parameters must be positive")


DEFAULT_EMISSION = EmissionModel()
OMNI_EMISSION = EmissionModel(directivity="omni")


@dataclass(frozen=True)
class DriveVector:
    """Per-transducer phases in [0, 2pi) and amplitude scales in [0, 1]."""

    phases: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        ph = np.ascontiguousarray(self.phases, dtype=float)
        am = np.ascontiguousarray(self.amplitudes, dtype=float)
        if ph.ndim != 1 or am.shape != ph.shape:
            raise ValueError("phases and amplitudes must be equal-length 1-D arrays")
        if np.any(ph < 0.0) or np.any(ph >= TWO_PI):
            raise ValueError("phases must lie in [0, 2pi)")
        if np.any(am < 0.0) or np.any(am > 1.0):
            raise ValueError("amplitudes must lie in [0, 1]")
        ph.flags.writeable = False
        am.flags.writeable = False
        object.__setattr__(self, "phases", ph)
        object.__setattr__(self, "amplitudes", am)

    def __len__(self) -> int:
        return self.phases.shape[0]


def focus_phases(array: ArrayModel, focus) -> DriveVector:
    """Solve per-element phases that align all contributions at `focus`.

    phases[i] = (-k * |focus - r_i|) mod 2pi, amplitudes all 1. With the
    propagation convention of :func:`pressure_at` every element arrives at
    the focus with zero phase, so the magnitudes add coherently.
    """
    focus = np.asarray(focus, dtype=float).reshape(3)
    d = np.sqrt(((focus - array.positions) ** 2).sum(axis=1))
    i_min = int(np.argmin(d))
    if d[i_min] < MIN_EVAL_DISTANCE:
        raise ValueError(
            f"focus is {d[i_min] * 1000.0:.4f} mm from transducer {i_min} "
            f"(minimum {MIN_EVAL_DISTANCE * 1000.0:.1f} mm)")
    k = array.wavenumber
    phases = np.mod(-k * d, TWO_PI)
    # mod can return the modulus itself when the remainder rounds up
    phases[phases >= TWO_PI] = 0.0
    return DriveVector(phases, np.ones_like(phases))


def quantize_phases(drive: DriveVector, bits: int) -> DriveVector:
    """Round phases to the nearest multiple of 2pi / 2**bits."""
    if not isinstance(bits, (int, np.integer)) or isinstance(bits, bool):
        raise ValueError("bits must be an integer")
    if not 1 <= bits <= 16:
        raise ValueError(f"quantization bits must be within [1, 16], got {bits}")
    step = TWO_PI / (1 << bits)
    q = np.mod(np.round(drive.phases / step) * step, TWO_PI)
    q[q >= TWO_PI] = 0.0
    return DriveVector(q, drive.amplitudes)


def _directivity(model: EmissionModel, ka: float, sin_theta: np.ndarray) -> np.ndarray:
    x = ka * sin_theta
    out = np.ones_like(x)
    mask = x > 1e-12
    xm = x[mask]
    out[mask] = 2.0 * j1(xm) / xm
    return out


def _pressure_points(array: ArrayModel, drive: DriveVector, points: np.ndarray,
                     model: EmissionModel, chunk: int = 128) -> np.ndarray:
    """Complex pressure at an (n, 3) batch of world points.

    Elementwise ops plus one fixed-order sum over transducers per point;
    results do not depend on the chunking, so batched and single-point
    evaluations agree bit-for-bit. The default chunk keeps the per-chunk
    temporaries cache-resident.
    """
    if len(drive) != array.n_transducers:
        raise ValueError(f"drive has {len(drive)} entries for "
                         f"{array.n_transducers} transducers")
    pos = array.positions
    nrm = array.normals
    k = array.wavenumber
    ka = k * model.piston_radius
    piston = model.directivity == "piston"
    phases = drive.phases[None, :]
    amps = drive.amplitudes[None, :]
    out = np.empty(points.shape[0], dtype=complex)
    for s in range(0, points.shape[0], chunk):
        q = points[s:s + chunk]
        dx = q[:, 0:1] - pos[None, :, 0]
        dy = q[:, 1:2] - pos[None, :, 1]
        dz = q[:, 2:3] - pos[None, :, 2]
        d2 = dx * dx
        d2 += dy * dy
        d2 += dz * dz
        d = np.sqrt(d2, out=d2)
        if np.any(d < MIN_EVAL_DISTANCE):
            bad = np.argwhere(d < MIN_EVAL_DISTANCE)[0]
            raise TooCloseError(s + int(bad[0]), int(bad[1]),
                                float(d[bad[0], bad[1]]))
        amp = amps * (model.p_ref / d)
        if piston:
            cos_t = dx * nrm[None, :, 0]
            cos_t += dy * nrm[None, :, 1]
            cos_t += dz * nrm[None, :, 2]
            cos_t /= d
            sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t * cos_t))
            amp *= _directivity(model, ka, sin_t)
        arg = d
        arg *= k
        arg += phases
        re = np.cos(arg)
        im = np.sin(arg)
        re *= amp
        im *= amp
        # the complex sum is two independent real sums per point
        out[s:s + chunk] = re.sum(axis=1) + 1j * im.sum(axis=1)
    return out


def pressure_at(array: ArrayModel, drive: DriveVector, point,
                model: EmissionModel = DEFAULT_EMISSION) -> complex:
    """Complex pressure (Pa) at one world point.

    p = sum_i a_i * p_ref * D(theta_i) / d_i * exp(j (k d_i + phi_i)).
    """
    pt = np.asarray(point, dtype=float).reshape(1, 3)
    return complex(_pressure_points(array, drive, pt, model)[0])


def radiation_pressure(p, rho: float = RHO_AIR, c: float = SOUND_SPEED):
    """Radiation pressure (Pa) on a perfectly reflecting target: 2|p|^2/(rho c^2)."""
    return 2.0 * np.abs(p) ** 2 / (rho * c * c)


@dataclass(frozen=True)
class GridSpec:
    """Planar sampling grid: origin corner plus two orthonormal axes."""

    origin: np.ndarray   # (3,)
    axis_u: np.ndarray   # (3,) unit
    axis_v: np.ndarray   # (3,) unit, orthogonal to axis_u
    nu: int
    nv: int
    spacing: float       # m

    def __post_init__(self):
        o = np.asarray(self.origin, dtype=float).reshape(3)
        u = np.asarray(self.axis_u, dtype=float).reshape(3)
        v = np.asarray(self.axis_v, dtype=float).reshape(3)
        if abs(np.linalg.norm(u) - 1.0) > 1e-9 or abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("grid axes must be unit length")
        if abs(float(u @ v)) > 1e-9:
            raise ValueError("grid axes must be orthogonal")
        if self.nu < 1 or self.nv < 1:
            raise ValueError("grid must contain at least one cell")
        if self.spacing <= 0:
            raise ValueError("grid spacing must be positive")
        for name, val in (("origin", o), ("axis_u", u), ("axis_v", v)):
            val.flags.writeable = False
            object.__setattr__(self, name, val)

    def point(self, i: int, j: int) -> np.ndarray:
        """World position of cell (i, j)."""
        return self.origin + (i * self.spacing) * self.axis_u \
            + (j * self.spacing) * self.axis_v

    def points(self) -> np.ndarray:
        """All cell positions, shape (nu*nv, 3), row-major in (i, j)."""
        ii = np.arange(self.nu, dtype=float)[:, None, None]
        jj = np.arange(self.nv, dtype=float)[None, :, None]
        pts = self.origin + (ii * self.spacing) * self.axis_u \
            + (jj * self.spacing) * self.axis_v
        return pts.reshape(self.nu * self.nv, 3)


def centered_grid(center, nu: int, nv: int, spacing: float,
                  axis_u=(1.0, 0.0, 0.0), axis_v=(0.0, 1.0, 0.0)) -> GridSpec:
    """Grid of nu x nv cells centered on `center`."""
    c = np.asarray(center, dtype=float).reshape(3)
    u = np.asarray(axis_u, dtype=float)
    v = np.asarray(axis_v, dtype=float)
    origin = c - ((nu - 1) / 2.0 * spacing) * u - ((nv - 1) / 2.0 * spacing) * v
    return GridSpec(origin, u, v, nu, nv, spacing)


@dataclass(frozen=True)
class FieldGrid:
    """Sampled complex pressure and radiation pressure over a GridSpec."""

    spec: GridSpec
    complex_pressure: np.ndarray     # (nu, nv) complex Pa
    radiation_pressure: np.ndarray   # (nu, nv) Pa

    @property
    def nu(self) -> int:
        return self.spec.nu

    @property
    def nv(self) -> int:
        return self.spec.nv

    @property
    def spacing(self) -> float:
        return self.spec.spacing

    def point(self, i: int, j: int) -> np.ndarray:
        return self.spec.point(i, j)


def sample_grid(array: ArrayModel, drive: DriveVector, spec: GridSpec,
                model: EmissionModel = DEFAULT_EMISSION) -> FieldGrid:
    """Evaluate the field on every grid cell.

    Cell values equal independent :func:`pressure_at` calls bit-for-bit.
    """
    try:
        p = _pressure_points(array, drive, spec.points(), model)
    except TooCloseError as e:
        i, j = divmod(e.point_index, spec.nv)
        raise ValueError(f"grid cell ({i},{j}): {e}") from e
    p = p.reshape(spec.nu, spec.nv)
    rad = radiation_pressure(p, rho=model.rho, c=array.sound_speed)
    p.flags.writeable = False
    rad.flags.writeable = False
    return FieldGrid(spec, p, rad)


@dataclass(frozen=True)
class SpotMetrics:
    """Peak and full-width-at-half-maximum of a radiation-pressure grid."""

    peak_value: float
    peak_location: np.ndarray       # (3,) world
    peak_index: tuple
    fwhm_u: Optional[float]         # m; None when a half-max crossing is missing
    fwhm_v: Optional[float]


def _half_crossing(values: np.ndarray, start: int, step: int, half: float) -> Optional[float]:
    """Fractional index offset from `start` to the first half-max crossing."""
    prev = start
    i = start + step
    while 0 <= i < values.shape[0]:
        if values[i] < half:
            frac = (values[prev] - half) / (values[prev] - values[i])
            return abs(prev - start) + frac
        prev = i
        i += step
    return None


def _fwhm_along(values: np.ndarray, peak: int, spacing: float) -> Optional[float]:
    half = values[peak] / 2.0
    left = _half_crossing(values, peak, -1, half)
    right = _half_crossing(values, peak, +1, half)
    if left is None or right is None:
        return None
    return (left + right) * spacing


def focal_metrics(grid: FieldGrid) -> SpotMetrics:
    """Locate the radiation-pressure peak and measure FWHM along both axes.

    Half-maximum crossings are linearly interpolated between samples; a
    missing crossing on either side reports that axis as None. Ties for
    the peak resolve to the lowest (u, v) index.
    """
    if grid.nu < 3 or grid.nv < 3:
        raise ValueError("focal metrics need at least 3 samples per axis")
    rad = grid.radiation_pressure
    flat = int(np.argmax(rad))          # first occurrence = lowest (u, v)
    iu, iv = divmod(flat, grid.nv)
    return SpotMetrics(
        peak_value=float(rad[iu, iv]),
        peak_location=grid.point(iu, iv),
        peak_index=(iu, iv),
        fwhm_u=_fwhm_along(rad[:, iv], iu, grid.spacing),
        fwhm_v=_fwhm_along(rad[iu, :], iv, grid.spacing),
    )
