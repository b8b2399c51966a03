"""JSON input and output for bodies, lattices and certificates."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .. import geom2d, geom3d
from ..errors import GeometryError
from ..lattice import Lattice

_TYPES_2D = {"polygon2d", "support2d", "ellipse2d"}
_TYPES_3D = {"polytope3d", "ball3d", "ellipsoid3d"}


class InputError(Exception):
    """Unreadable or malformed input; the CLI maps it to exit code 2."""


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def body_from_json(data):
    if not isinstance(data, dict) or "type" not in data:
        raise InputError("a body must be a JSON object with a 'type' field")
    try:
        if data["type"] in _TYPES_2D:
            return geom2d.body_from_dict(data)
        if data["type"] in _TYPES_3D:
            return geom3d.body_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid {data['type']} body: {exc}") from exc
    raise InputError(f"unknown body type {data['type']!r}")


def lattice_from_json(data):
    if not isinstance(data, dict) or not data.get("basis"):
        raise InputError("a lattice must be a JSON object with a non-empty 'basis'")
    try:
        return Lattice.from_dict(data)
    except (GeometryError, TypeError, ValueError) as exc:
        raise InputError(f"invalid lattice: {exc}") from exc


def load_body(path):
    return body_from_json(read_json(path))


def load_lattice(path):
    return lattice_from_json(read_json(path))


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON text (sorted keys, repr-precision floats)."""
    return json.dumps(obj, default=_plain, sort_keys=True, indent=2)


def write_json(obj, path):
    Path(path).write_text(dumps(obj) + "\n")
