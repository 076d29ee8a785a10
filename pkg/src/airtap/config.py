"""YAML configuration: rig, scene, profile, and runtime parameters.

Validation is strict: unknown keys are rejected, every parse error carries
line/column, and every invariant violation names the offending field with
a dotted path. All distances in config files are millimeters; the loaded
objects use meters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import yaml

from .engine import COLOR_MATERIAL, MaterialKind, MaterialProfiles, VirtualObject
from .field import EmissionModel
from .geometry import (DEFAULT_CARRIER_HZ, DEFAULT_SOUND_SPEED, ArrayModel,
                       assemble_rig, build_unit, default_rig_spec,
                       pose_from_axis_angle)
from .profiles import AmTapParams, LmTapParams, StationaryLmParams

#: Environment variable naming the default config file for the CLI.
CONFIG_ENV_VAR = "AIRTAP_CONFIG"

DEFAULT_CONTROL_RATE = 1000.0
DEFAULT_WIRE_RATE = 60.0
DEFAULT_Z_PANEL = 0.2
DEFAULT_QUANT_BITS = 8

DEFAULT_SCENE = (
    VirtualObject(0, (-0.140, -0.060, 0.120, 0.120), MaterialKind.AM_BALLOON),
    VirtualObject(1, (0.020, -0.060, 0.120, 0.120), MaterialKind.LM_CYMBAL),
)


class ConfigError(ValueError):
    """Configuration rejected; `path` is the dotted field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AppConfig:
    array: ArrayModel
    emission: EmissionModel
    scene: Tuple[VirtualObject, ...]
    profiles: MaterialProfiles
    control_rate: float
    wire_rate: float
    z_panel: float
    quant_bits: int


def default_config() -> AppConfig:
    return AppConfig(
        array=assemble_rig(default_rig_spec()),
        emission=EmissionModel(),
        scene=DEFAULT_SCENE,
        profiles=MaterialProfiles(),
        control_rate=DEFAULT_CONTROL_RATE,
        wire_rate=DEFAULT_WIRE_RATE,
        z_panel=DEFAULT_Z_PANEL,
        quant_bits=DEFAULT_QUANT_BITS,
    )


def _expect_mapping(node, path: str) -> dict:
    if node is None:
        return {}
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed, path: str):
    unknown = set(node) - set(allowed)
    if unknown:
        key = sorted(str(k) for k in unknown)[0]
        raise ConfigError(f"{path}.{key}" if path else key, "unknown key")


def _number(node: dict, key: str, path: str, default=None) -> float:
    if key not in node or node[key] is None:
        if default is None:
            raise ConfigError(f"{path}.{key}", "required value missing")
        return default
    v = node[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _integer(node: dict, key: str, path: str, default=None) -> int:
    v = _number(node, key, path, default)
    if v != int(v):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {v!r}")
    return int(v)


def _vector(node: dict, key: str, path: str, length: int, default=None):
    if key not in node or node[key] is None:
        if default is None:
            raise ConfigError(f"{path}.{key}", "required value missing")
        return default
    v = node[key]
    if (not isinstance(v, (list, tuple)) or len(v) != length
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)):
        raise ConfigError(f"{path}.{key}", f"expected {length} numbers")
    return tuple(float(x) for x in v)


def _wrap(path: str, fn, *args, **kwargs):
    """Run a constructor, re-raising its ValueError with the field path."""
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(path, str(e)) from e


def _parse_rig(node, path: str) -> ArrayModel:
    node = _expect_mapping(node, path)
    _check_keys(node, ("carrier_frequency_hz", "sound_speed_m_s", "units"), path)
    carrier = _number(node, "carrier_frequency_hz", path, DEFAULT_CARRIER_HZ)
    speed = _number(node, "sound_speed_m_s", path, DEFAULT_SOUND_SPEED)
    if "units" not in node or node["units"] is None:
        spec = default_rig_spec()
    else:
        units = node["units"]
        if not isinstance(units, list) or not units:
            raise ConfigError(f"{path}.units", "expected a non-empty list")
        spec = []
        for i, u in enumerate(units):
            upath = f"{path}.units[{i}]"
            u = _expect_mapping(u, upath)
            _check_keys(u, ("rows", "cols", "pitch_mm", "translation_mm",
                            "rotation_axis", "rotation_deg"), upath)
            rows = _integer(u, "rows", upath, 18)
            cols = _integer(u, "cols", upath, 14)
            pitch = _number(u, "pitch_mm", upath, 10.16) / 1000.0
            layout = _wrap(upath, build_unit, rows, cols, pitch)
            tr = [x / 1000.0 for x in _vector(u, "translation_mm", upath, 3,
                                              (0.0, 0.0, 0.0))]
            ax = _vector(u, "rotation_axis", upath, 3, (0.0, 0.0, 1.0))
            deg = _number(u, "rotation_deg", upath, 0.0)
            pose = _wrap(upath, pose_from_axis_angle, tr, ax, deg)
            spec.append((layout, pose))
    return _wrap(path, assemble_rig, spec, carrier, speed)


def _parse_emission(node, path: str) -> EmissionModel:
    node = _expect_mapping(node, path)
    _check_keys(node, ("directivity", "piston_radius_mm", "p_ref", "rho"), path)
    directivity = node.get("directivity", "piston")
    if directivity not in ("piston", "omni"):
        raise ConfigError(f"{path}.directivity",
                          f"must be 'piston' or 'omni', got {directivity!r}")
    return _wrap(path, EmissionModel,
                 p_ref=_number(node, "p_ref", path, 1.0),
                 directivity=directivity,
                 piston_radius=_number(node, "piston_radius_mm", path, 4.5) / 1000.0,
                 rho=_number(node, "rho", path, 1.21))


def _parse_object(node, path: str) -> VirtualObject:
    node = _expect_mapping(node, path)
    _check_keys(node, ("id", "rect_mm", "color", "material"), path)
    obj_id = _integer(node, "id", path)
    rect = tuple(x / 1000.0 for x in _vector(node, "rect_mm", path, 4))
    color = node.get("color")
    material = node.get("material")
    if color is None and material is None:
        raise ConfigError(f"{path}.material", "object needs a color or a material")
    if material is not None:
        try:
            kind = MaterialKind(material)
        except ValueError:
            raise ConfigError(f"{path}.material",
                              f"unknown material {material!r}") from None
    else:
        kind = None
    if color is not None:
        if color not in COLOR_MATERIAL:
            raise ConfigError(f"{path}.color", f"unknown color {color!r}")
        from_color = COLOR_MATERIAL[color]
        if kind is not None and kind is not from_color:
            raise ConfigError(f"{path}.color",
                              f"color {color!r} does not match material "
                              f"{kind.value!r} (red is the soft tap, yellow the "
                              f"resonant one)")
        kind = from_color
    return _wrap(path, VirtualObject, obj_id, rect, kind)


def _parse_scene(node, path: str) -> Tuple[VirtualObject, ...]:
    node = _expect_mapping(node, path)
    _check_keys(node, ("objects",), path)
    if "objects" not in node or node["objects"] is None:
        return DEFAULT_SCENE
    raw = node["objects"]
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{path}.objects", "expected a non-empty list")
    objs = tuple(_parse_object(o, f"{path}.objects[{i}]") for i, o in enumerate(raw))
    ids = [o.id for o in objs]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"{path}.objects", "object ids must be unique")
    return objs


def _parse_profiles(node, path: str) -> MaterialProfiles:
    node = _expect_mapping(node, path)
    _check_keys(node, ("am_tap", "lm_tap", "stationary"), path)

    am_node = _expect_mapping(node.get("am_tap"), f"{path}.am_tap")
    _check_keys(am_node, ("f_am_hz", "tau_s", "t_att_s", "a_max"), f"{path}.am_tap")
    am = _wrap(f"{path}.am_tap", AmTapParams,
               f_am=_number(am_node, "f_am_hz", f"{path}.am_tap", 200.0),
               tau=_number(am_node, "tau_s", f"{path}.am_tap", 0.03),
               t_att=_number(am_node, "t_att_s", f"{path}.am_tap", 0.1),
               a_max=_number(am_node, "a_max", f"{path}.am_tap", 1.0))

    lm_node = _expect_mapping(node.get("lm_tap"), f"{path}.lm_tap")
    _check_keys(lm_node, ("f_lm_hz", "size_max_mm", "size_min_mm", "tau_s",
                          "t_att_s", "a_max", "axis"), f"{path}.lm_tap")
    lm = _wrap(f"{path}.lm_tap", LmTapParams,
               f_lm=_number(lm_node, "f_lm_hz", f"{path}.lm_tap", 100.0),
               size_max=_number(lm_node, "size_max_mm", f"{path}.lm_tap", 10.0) / 1000.0,
               size_min=_number(lm_node, "size_min_mm", f"{path}.lm_tap", 0.6) / 1000.0,
               tau=_number(lm_node, "tau_s", f"{path}.lm_tap", 0.03),
               t_att=_number(lm_node, "t_att_s", f"{path}.lm_tap", 0.1),
               a_max=_number(lm_node, "a_max", f"{path}.lm_tap", 1.0),
               axis=_vector(lm_node, "axis", f"{path}.lm_tap", 2, (1.0, 0.0)))

    st_node = _expect_mapping(node.get("stationary"), f"{path}.stationary")
    _check_keys(st_node, ("f_lm_hz", "size_mm", "a_max", "axis"), f"{path}.stationary")
    st = _wrap(f"{path}.stationary", StationaryLmParams,
               f_lm=_number(st_node, "f_lm_hz", f"{path}.stationary", 10.0),
               size=_number(st_node, "size_mm", f"{path}.stationary", 0.6) / 1000.0,
               a_max=_number(st_node, "a_max", f"{path}.stationary", 1.0),
               axis=_vector(st_node, "axis", f"{path}.stationary", 2, (1.0, 0.0)))
    return MaterialProfiles(am=am, lm=lm, stationary=st)


_TOP_KEYS = ("rig", "emission", "scene", "profiles", "control_rate_hz",
             "wire_rate_hz", "z_panel_mm", "quant_bits")


def load_config(text: str) -> AppConfig:
    """Parse and fully validate a YAML config; missing keys take defaults."""
    try:
        root = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        if mark is not None:
            raise ConfigError("", f"parse error at line {mark.line + 1}, "
                                  f"column {mark.column + 1}: {getattr(e, 'problem', e)}")
        raise ConfigError("", f"parse error: {e}")
    root = _expect_mapping(root, "")
    _check_keys(root, _TOP_KEYS, "")

    control_rate = _number(root, "control_rate_hz", "", DEFAULT_CONTROL_RATE)
    wire_rate = _number(root, "wire_rate_hz", "", DEFAULT_WIRE_RATE)
    if control_rate <= 0:
        raise ConfigError("control_rate_hz", "must be positive")
    if not 0 < wire_rate <= control_rate:
        raise ConfigError("wire_rate_hz",
                          "must be positive and not exceed control_rate_hz")
    z_panel = _number(root, "z_panel_mm", "", DEFAULT_Z_PANEL * 1000.0) / 1000.0
    if z_panel <= 0:
        raise ConfigError("z_panel_mm", "must be positive")
    quant_bits = _integer(root, "quant_bits", "", DEFAULT_QUANT_BITS)
    if quant_bits != 0 and not 1 <= quant_bits <= 16:
        raise ConfigError("quant_bits", "must be 0 (continuous) or within [1, 16]")

    return AppConfig(
        array=_parse_rig(root.get("rig"), "rig"),
        emission=_parse_emission(root.get("emission"), "emission"),
        scene=_parse_scene(root.get("scene"), "scene"),
        profiles=_parse_profiles(root.get("profiles"), "profiles"),
        control_rate=control_rate,
        wire_rate=wire_rate,
        z_panel=z_panel,
        quant_bits=quant_bits,
    )


def load_config_file(path) -> AppConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return load_config(handle.read())


def load_scene(text: str) -> Tuple[VirtualObject, ...]:
    """Parse a standalone scene file (the `scene:` section schema)."""
    try:
        root = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError("", f"parse error: {e}")
    return _parse_scene(_expect_mapping(root, ""), "")
