"""Single-file container for grid states.

Layout: one JSON document with a ``header`` (grid geometry plus the sign
conventions the amplitudes assume) and a base64 payload of the row-major
complex128 little-endian amplitude array.  Round trips are bit exact.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .errors import ConfigError
from .grid import GridSpace, GridState

FORMAT_NAME = "warpconv-grid-state"
FORMAT_VERSION = 1


def state_to_dict(state: GridState) -> dict:
    amps = np.ascontiguousarray(state.amplitudes, dtype="<c16")
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "header": state.space.header(),
        "amplitudes": {
            "encoding": "base64",
            "dtype": "complex128-le",
            "order": "row-major",
            "data": base64.b64encode(amps.tobytes()).decode("ascii"),
        },
    }


def state_from_dict(doc: dict) -> GridState:
    if doc.get("format") != FORMAT_NAME:
        raise ConfigError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ConfigError(f"unsupported container version {doc.get('version')}")
    h = doc["header"]
    space = GridSpace(h["dims"], h["points_per_axis"], h["half_width"],
                      h["offset"])
    payload = doc["amplitudes"]
    if payload.get("dtype") != "complex128-le":
        raise ConfigError(f"unsupported payload dtype {payload.get('dtype')}")
    raw = base64.b64decode(payload["data"])
    amps = np.frombuffer(raw, dtype="<c16")
    return GridState(space, amps)


def save_state(path, state: GridState) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(state_to_dict(state), fh)


def load_state(path) -> GridState:
    with open(path, "r", encoding="ascii") as fh:
        return state_from_dict(json.load(fh))
