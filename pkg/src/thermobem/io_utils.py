"""Run configuration, CSV emission, and manifest handling for the CLI.

Config files are flat ``key = value`` text with sections (INI style, parsed
with :mod:`configparser`); see the README for the full key reference.  CSV
output uses 17 significant digits, '.' as the decimal separator, and a
mandatory header row, so files round-trip float64 exactly and byte-identical
reruns are a meaningful contract.
"""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .cq import CQConfig
from .errors import ConfigError
from .geometry import BoundaryCurve, make_curve
from .params import PhysicalParams

DATA_PROFILES = ("point_source", "trig", "zero", "file")


@dataclass
class DataSpec:
    """Boundary-data description: a named analytic profile or a file.

    ``point_source`` uses (source, charge) and is frequency-dependent;
    ``trig`` is a fixed band-limited spatial profile drawn from the run
    seed; ``zero`` is identically zero; ``file`` reads node values from
    CSV.  For time runs the spatial profile is multiplied by the causal
    ramp t^ramp_power exp(-t) shifted by ``delay``.
    """

    profile: str
    source: np.ndarray | None = None        # (2,) point-source location
    charge: np.ndarray | None = None        # (3,) point-source strength
    modes: int = 4                          # trig band limit
    path: str | None = None                 # file profile
    ramp_power: int = 5
    delay: float = 0.0


@dataclass
class RunConfig:
    """Validated contents of one CLI run configuration."""

    kind: str                               # "SD" | "DS"
    interior: bool
    curve: BoundaryCurve
    params: PhysicalParams
    frequencies: list | None                # list of complex, XOR cq
    cq: CQConfig | None
    data: DataSpec
    observation: np.ndarray                 # (m, 2)
    prefix: str
    seed: int


def _require(cp: configparser.ConfigParser, section: str) -> None:
    if not cp.has_section(section):
        raise ConfigError(f"missing required section [{section}]",
                          field=section)


def _get(cp, section, key, cast=str, default=None, required=False):
    where = f"{section}.{key}"
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key {where}", field=where)
        return default
    raw = cp.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {where}: {raw!r} ({exc})",
                          field=where) from exc


def _parse_complex(raw: str) -> complex:
    return complex(raw.replace(" ", "").replace("i", "j"))


def _parse_points(raw: str) -> np.ndarray:
    pts = []
    for chunk in raw.replace(";", "\n").splitlines():
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"expected 'x y' pairs, got {chunk!r}")
        pts.append([float(parts[0]), float(parts[1])])
    if not pts:
        raise ValueError("no points given")
    return np.asarray(pts)


def load_config(path: str) -> RunConfig:
    """Parse and validate a run configuration file."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}", field="config")

    _require(cp, "problem")
    kind = _get(cp, "problem", "kind", str, required=True).upper()
    if kind not in ("SD", "DS"):
        raise ConfigError(f"problem.kind must be SD or DS, got {kind!r}",
                          field="problem.kind")
    side = _get(cp, "problem", "side", str, default="exterior").lower()
    if side not in ("exterior", "interior"):
        raise ConfigError("problem.side must be exterior or interior, got "
                          f"{side!r}", field="problem.side")
    seed = _get(cp, "problem", "seed", int, default=0)

    _require(cp, "curve")
    curve_kind = _get(cp, "curve", "kind", str, required=True)
    n = _get(cp, "curve", "n", int, required=True)
    curve_params = {}
    for key in ("radius", "scale"):
        val = _get(cp, "curve", key, float)
        if val is not None:
            curve_params[key] = val
    cx = _get(cp, "curve", "center_x", float)
    cy = _get(cp, "curve", "center_y", float)
    if cx is not None or cy is not None:
        curve_params["center"] = (cx or 0.0, cy or 0.0)
    try:
        curve = make_curve(curve_kind, n, **curve_params)
    except Exception as exc:
        raise ConfigError(f"invalid curve: {exc}", field="curve") from exc

    _require(cp, "params")
    kwargs = {}
    for key in ("rho", "lam", "mu", "kappa", "gamma", "eta"):
        kwargs[key] = _get(cp, "params", key, float, required=True)
    try:
        params = PhysicalParams(**kwargs)
    except Exception as exc:
        raise ConfigError(f"invalid physical parameters: {exc}",
                          field="params") from exc

    has_freq = cp.has_section("frequencies")
    has_time = cp.has_section("time")
    if has_freq == has_time:
        raise ConfigError("exactly one of [frequencies] and [time] must be "
                          "present", field="frequencies")
    frequencies = None
    cq = None
    if has_freq:
        raw = _get(cp, "frequencies", "values", str, required=True)
        try:
            frequencies = [_parse_complex(v) for v in raw.split(",") if
                           v.strip()]
        except ValueError as exc:
            raise ConfigError(f"invalid frequency list: {exc}",
                              field="frequencies.values") from exc
        if not frequencies:
            raise ConfigError("frequency list is empty",
                              field="frequencies.values")
        if any(s.real <= 0 for s in frequencies):
            raise ConfigError("all frequencies need positive real part",
                              field="frequencies.values")
    else:
        kwargs = {"dt": _get(cp, "time", "dt", float, required=True),
                  "n_steps": _get(cp, "time", "n_steps", int, required=True),
                  "method": _get(cp, "time", "method", str, default="BDF2")}
        n_freq = _get(cp, "time", "n_freq", int)
        if n_freq is not None:
            kwargs["n_freq"] = n_freq
        radius_factor = _get(cp, "time", "radius_factor", float)
        if radius_factor is not None:
            kwargs["radius_factor"] = radius_factor
        try:
            cq = CQConfig(**kwargs)
        except Exception as exc:
            raise ConfigError(f"invalid time discretization: {exc}",
                              field="time") from exc

    _require(cp, "data")
    profile = _get(cp, "data", "profile", str, required=True)
    if profile not in DATA_PROFILES:
        raise ConfigError(f"data.profile must be one of {DATA_PROFILES}, "
                          f"got {profile!r}", field="data.profile")
    data = DataSpec(profile=profile,
                    modes=_get(cp, "data", "modes", int, default=4),
                    ramp_power=_get(cp, "data", "ramp_power", int, default=5),
                    delay=_get(cp, "data", "delay", float, default=0.0))
    if profile == "point_source":
        data.source = np.array([
            _get(cp, "data", "source_x", float, required=True),
            _get(cp, "data", "source_y", float, required=True)])
        data.charge = np.array([
            _get(cp, "data", "charge_x", float, required=True),
            _get(cp, "data", "charge_y", float, required=True),
            _get(cp, "data", "charge_th", float, required=True)])
    elif profile == "file":
        data.path = _get(cp, "data", "path", str, required=True)

    _require(cp, "observation")
    data_pts = _get(cp, "observation", "points", _parse_points,
                    required=True)

    prefix = "run"
    if cp.has_section("output"):
        prefix = _get(cp, "output", "prefix", str, default="run")

    return RunConfig(kind=kind, interior=(side == "interior"), curve=curve,
                     params=params, frequencies=frequencies, cq=cq,
                     data=data, observation=data_pts, prefix=prefix,
                     seed=seed)


# --------------------------------------------------------------------------
# CSV / JSON emission
# --------------------------------------------------------------------------

def format_float(x: float) -> str:
    """17-significant-digit decimal form; round-trips float64 exactly."""
    return f"{float(x):.17g}"


def write_csv(path, header: list, rows: np.ndarray) -> None:
    """Write a numeric table with a mandatory header row."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != len(header):
        raise ValueError(f"header has {len(header)} columns, rows have "
                         f"{rows.shape[1]}")
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(format_float(v) for v in row) + "\n")


def complex_table(values: np.ndarray) -> np.ndarray:
    """Interleave Re/Im columns of a complex (m, k) array into (m, 2k)."""
    values = np.atleast_2d(values)
    out = np.empty((values.shape[0], 2 * values.shape[1]))
    out[:, 0::2] = values.real
    out[:, 1::2] = values.imag
    return out


def complex_header(names: list) -> list:
    return [f"{p}_{c}" for c in names for p in ("re", "im")]


def write_manifest(path, manifest: dict) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


# --------------------------------------------------------------------------
# manifest schema
# --------------------------------------------------------------------------

def load_manifest_schema() -> dict:
    ref = resources.files("thermobem").joinpath(
        "schemas/run_manifest.schema.json")
    return json.loads(ref.read_text())


_TYPES = {"object": dict, "array": list, "string": str, "integer": int,
          "number": (int, float), "boolean": bool}


def _validate_node(value, schema: dict, where: str, errors: list) -> None:
    typ = schema.get("type")
    if typ is not None and not isinstance(value, _TYPES[typ]):
        errors.append(f"{where}: expected {typ}, got "
                      f"{type(value).__name__}")
        return
    if "enum" in schema and value not in schema["enum"]:
        errors.append(f"{where}: {value!r} not in {schema['enum']}")
    for key in schema.get("required", []):
        if key not in value:
            errors.append(f"{where}: missing required key {key!r}")
    for key, sub in schema.get("properties", {}).items():
        if isinstance(value, dict) and key in value:
            _validate_node(value[key], sub, f"{where}.{key}", errors)
    if "items" in schema and isinstance(value, list):
        for i, item in enumerate(value):
            _validate_node(item, schema["items"], f"{where}[{i}]", errors)


def validate_manifest(manifest: dict, schema: dict | None = None) -> None:
    """Check a run manifest against the published schema.

    Supports the schema subset the published file uses (type, required,
    properties, items, enum).  Raises ConfigError listing every violation.
    """
    if schema is None:
        schema = load_manifest_schema()
    errors: list = []
    _validate_node(manifest, schema, "manifest", errors)
    if errors:
        raise ConfigError("manifest does not match schema: "
                          + "; ".join(errors), field="manifest")
