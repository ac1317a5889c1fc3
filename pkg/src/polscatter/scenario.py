"""Scenario documents for position/velocity scans.

A scenario is a YAML (or JSON) mapping, ``schema_version: 1``::

    schema_version: 1
    configuration: lin_perp_lin       # lin_perp_lin | sigma_plus_minus | custom
    atom:
      j_ground: 0.5                   # default 1/2 (lin_perp_lin, custom) or 1 (sigma_plus_minus)
      j_excited: 1.5                  # default 3/2 or 2
      zeta0: 1.0e-4                   # real part of the characteristic polarizability
      zeta0_imag: 0.0
      dzeta0_dk_imag: 0.0             # Im of d zeta0 / dk, drives the Doppler friction term
      detuning: 0.0                   # light shift / pumping rate ratio
    beam:
      amplitude: 1.0                  # |B|, named configurations only
      k: 1.0
      basis: circular                 # custom only: circular (sigma+, sigma-) or linear (x, y)
      b_in: [[1, 0], [0, 0]]          # custom only: [[re, im], [re, im]] at x = 0
      c_in: [[0, 0], [0, 0]]
    tau_p: 1.0
    scan:
      x: {start: 0.0, stop: 3.141592653589793, points: 64}   # in units of 1/k, stop excluded
      v: {start: -0.1, stop: 0.1, points: 21}                  # stop included; default kv tau_p in [-0.1, 0.1]
    elements:                         # custom only; the atom is moved along the x grid
      - {kind: mirror, position: 10.0, reflectivity: -1}
      - {kind: atom}
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
import yaml

from .atom import LevelScheme
from .errors import InvalidInputError, ScenarioValidationError
from .jones import JonesVector
from .optics import KINDS, Element

SCHEMA_VERSION = 1
CONFIGURATIONS = ("lin_perp_lin", "sigma_plus_minus", "custom")

_TOP_KEYS = {"schema_version", "configuration", "atom", "beam", "tau_p", "scan", "elements"}
_ATOM_KEYS = {"j_ground", "j_excited", "zeta0", "zeta0_imag", "dzeta0_dk_imag", "detuning"}
_BEAM_KEYS = {"amplitude", "k", "basis", "b_in", "c_in"}
_GRID_KEYS = {"start", "stop", "points"}
_ELEMENT_KEYS = {"kind", "position", "reflectivity", "transmission", "retardance", "angle",
                 "length", "label"}


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    points: int
    endpoint: bool

    def values(self):
        return np.linspace(self.start, self.stop, self.points, endpoint=self.endpoint)


@dataclass(frozen=True)
class Scenario:
    configuration: str
    j_ground: str
    j_excited: str
    zeta0: float
    zeta0_imag: float
    dzeta0_dk_imag: float
    detuning: float
    amplitude: float
    k: float
    tau_p: float
    x_grid: Grid
    v_grid: Grid
    basis: str = "circular"
    b_in: tuple = ()
    c_in: tuple = ()
    elements: tuple = field(default=())
    schema_version: int = SCHEMA_VERSION

    @property
    def scheme(self):
        return LevelScheme(Fraction(self.j_ground), Fraction(self.j_excited),
                           complex(self.zeta0, self.zeta0_imag), complex(0, self.dzeta0_dk_imag))

    def beams(self):
        """Custom-configuration input Jones vectors (circular basis)."""
        b = JonesVector.from_array([complex(*c) for c in self.b_in], self.k, self.basis)
        c = JonesVector.from_array([complex(*c) for c in self.c_in], self.k, self.basis)
        return b.to_circular(), c.to_circular()

    def element_list(self):
        return [_build_element(dict(e)) for e in self.elements]

    def digest(self):
        canonical = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class _Collector:
    def __init__(self):
        self.errors = []

    def unknown(self, mapping, allowed, where):
        for key in mapping:
            if key not in allowed:
                self.errors.append(f"unknown key {where}{key!r}")

    def number(self, mapping, key, default, where, low=-math.inf, high=math.inf,
               strict_low=False, message=None):
        value = mapping.get(key, default)
        if value is None:
            self.errors.append(f"{where}{key} is required")
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.errors.append(f"{where}{key} must be a number, got {value!r}")
            return None
        value = float(value)
        bad = not math.isfinite(value) or value > high or (value <= low if strict_low else value < low)
        if bad:
            if message:
                self.errors.append(message)
            else:
                bound = "(" if strict_low else "["
                self.errors.append(f"{where}{key}={value} outside legal range {bound}{low}, {high}]")
            return None
        return value


def _half_integer(raw, name, col):
    try:
        frac = Fraction(str(raw))
    except (TypeError, ValueError):
        col.errors.append(f"atom.{name}={raw!r} is not a number")
        return None
    if frac < 0 or (2 * frac).denominator != 1:
        col.errors.append(f"atom.{name}={raw!r} must be a non-negative integer or half-integer")
        return None
    return frac


def _grid(raw, col, where, default, endpoint):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        col.errors.append(f"{where} must be a mapping")
        return None
    col.unknown(raw, _GRID_KEYS, f"{where}.")
    start = col.number(raw, "start", default[0], f"{where}.")
    stop = col.number(raw, "stop", default[1], f"{where}.")
    points = raw.get("points", default[2])
    if isinstance(points, bool) or not isinstance(points, int) or points < 1:
        col.errors.append(f"{where}.points must be an integer >= 1, got {points!r}")
        return None
    if start is None or stop is None:
        return None
    if points > 1 and not stop > start:
        col.errors.append(f"{where}: stop ({stop}) must exceed start ({start})")
        return None
    return Grid(start, stop, points, endpoint)


def _amplitudes(raw, where, col):
    if raw is None:
        return ((0.0, 0.0), (0.0, 0.0))
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is None or arr.shape != (2, 2) or not np.all(np.isfinite(arr)):
        col.errors.append(f"{where} must be [[re, im], [re, im]] with finite entries")
        return None
    return tuple(tuple(float(v) for v in row) for row in arr)


def validate(doc):
    """Build a :class:`Scenario` from a parsed mapping, raising with every problem found."""
    col = _Collector()
    if not isinstance(doc, dict):
        raise ScenarioValidationError(["scenario document must be a mapping"])
    col.unknown(doc, _TOP_KEYS, "")

    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        col.errors.append(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")

    config = doc.get("configuration", "lin_perp_lin")
    if config not in CONFIGURATIONS:
        col.errors.append(f"configuration must be one of {CONFIGURATIONS}, got {config!r}")
        config = None

    atom = doc.get("atom") or {}
    beam = doc.get("beam") or {}
    scan = doc.get("scan") or {}
    for name, sec in (("atom", atom), ("beam", beam), ("scan", scan)):
        if not isinstance(sec, dict):
            col.errors.append(f"{name} must be a mapping")
    atom = atom if isinstance(atom, dict) else {}
    beam = beam if isinstance(beam, dict) else {}
    scan = scan if isinstance(scan, dict) else {}
    col.unknown(atom, _ATOM_KEYS, "atom.")
    col.unknown(beam, _BEAM_KEYS, "beam.")
    col.unknown(scan, {"x", "v"}, "scan.")

    default_j = ("1", "2") if config == "sigma_plus_minus" else ("1/2", "3/2")
    jg = _half_integer(atom.get("j_ground", default_j[0]), "j_ground", col)
    je = _half_integer(atom.get("j_excited", default_j[1]), "j_excited", col)
    zeta0 = col.number(atom, "zeta0", 1e-4, "atom.")
    zeta0_imag = col.number(atom, "zeta0_imag", 0.0, "atom.")
    dzeta = col.number(atom, "dzeta0_dk_imag", 0.0, "atom.")
    detuning = col.number(atom, "detuning", 0.0, "atom.")
    if None not in (jg, je, zeta0, zeta0_imag, dzeta):
        try:
            LevelScheme(jg, je, complex(zeta0, zeta0_imag))
        except InvalidInputError as exc:
            col.errors.append(f"atom: {exc}")

    amplitude = col.number(beam, "amplitude", 1.0, "beam.", low=0, strict_low=True)
    k = col.number(beam, "k", 1.0, "beam.", low=0, strict_low=True)
    tau_p = col.number(doc, "tau_p", 1.0, "", low=0, strict_low=True,
                       message=f"tau_p must be positive, got {doc.get('tau_p')!r}")

    x_grid = _grid(scan.get("x"), col, "scan.x", (0.0, math.pi, 64), endpoint=False)
    v_default = (-0.1, 0.1)
    if k and tau_p:
        v_default = (-0.1 / (k * tau_p), 0.1 / (k * tau_p))
    v_grid = _grid(scan.get("v"), col, "scan.v", (*v_default, 21), endpoint=True)

    basis = beam.get("basis", "circular")
    b_in = c_in = ()
    elements = ()
    raw_elements = doc.get("elements")
    if config == "custom":
        if basis not in ("circular", "linear"):
            col.errors.append(f"beam.basis must be 'circular' or 'linear', got {basis!r}")
        b_in = _amplitudes(beam.get("b_in"), "beam.b_in", col)
        c_in = _amplitudes(beam.get("c_in"), "beam.c_in", col)
        if b_in and c_in and not any(any(row) for row in (*b_in, *c_in)):
            col.errors.append("custom configuration needs a non-zero b_in or c_in")
        elements = _elements(raw_elements, col)
    else:
        for key in ("basis", "b_in", "c_in"):
            if key in beam:
                col.errors.append(f"beam.{key} is only allowed with configuration 'custom'")
        if raw_elements is not None:
            col.errors.append("elements are only allowed with configuration 'custom'")

    if col.errors:
        raise ScenarioValidationError(col.errors)
    return Scenario(
        configuration=config, j_ground=str(jg), j_excited=str(je), zeta0=zeta0,
        zeta0_imag=zeta0_imag, dzeta0_dk_imag=dzeta, detuning=detuning,
        amplitude=amplitude, k=k, tau_p=tau_p, x_grid=x_grid, v_grid=v_grid,
        basis=basis if config == "custom" else "circular", b_in=b_in or (), c_in=c_in or (),
        elements=elements)


def _elements(raw, col):
    if not isinstance(raw, list) or not raw:
        col.errors.append("custom configuration needs a non-empty 'elements' list")
        return ()
    out = []
    for i, item in enumerate(raw):
        where = f"elements[{i}]."
        if not isinstance(item, dict):
            col.errors.append(f"elements[{i}] must be a mapping")
            continue
        col.unknown(item, _ELEMENT_KEYS, where)
        kind = item.get("kind")
        if kind not in KINDS:
            col.errors.append(f"{where}kind must be one of {KINDS}, got {kind!r}")
            continue
        params = {key: item[key] for key in _ELEMENT_KEYS if key in item}
        try:
            _build_element(params)
        except (InvalidInputError, TypeError, ValueError, KeyError) as exc:
            col.errors.append(f"{where[:-1]}: {exc}")
            continue
        out.append(tuple(sorted((k, _freeze(v)) for k, v in params.items())))
    atoms = sum(1 for e in raw if isinstance(e, dict) and e.get("kind") == "atom")
    if atoms != 1:
        col.errors.append(f"custom configuration needs exactly one atom element, found {atoms}")
    return tuple(out)


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def _complex(value):
    # number, {re, im} mapping, or a per-polarization pair of those
    if isinstance(value, tuple) and value and isinstance(value[0], tuple) and len(value[0]) == 2 \
            and isinstance(value[0][0], str):
        value = dict(value)
    if isinstance(value, dict):
        unknown = set(value) - {"re", "im"}
        if unknown:
            raise InvalidInputError(f"unknown complex-number keys {sorted(unknown)}")
        return complex(value.get("re", 0.0), value.get("im", 0.0))
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInputError("per-polarization values need exactly two entries")
        return tuple(_complex(v) for v in value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInputError(f"expected a number, got {value!r}")
    return value


def _build_element(params):
    params = dict(params)
    for key in ("reflectivity", "transmission"):
        if key in params:
            params[key] = _complex(params[key])
    return Element(**params)


def parse_scenario(text):
    """Parse and validate a UTF-8 scenario document."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioValidationError([f"malformed document: {exc}"]) from None
    return validate(doc)
