"""JSON descriptors for channels, qubit states and bipartite states.

Channel descriptors take one of three forms::

    {"lambda": [[...], [...], [...]], "t": [t1, t2, t3]}
    {"canonical": {"alpha": a, "beta": b, "omega": [w1, w2, 1.0], "xi": [x1, x2, x3]}}
    {"named": {"type": "identity" | "unital" | "axial" | "amplitude_damping"
                        | "phase_damping" | "depolarizing", ...params}}

Qubit states are ``{"bloch": [x1, x2, x3]}`` or ``{"matrix": ...}`` with
complex entries encoded as ``[re, im]`` pairs.  Bipartite states carry
``{"dims": [2, n]}`` plus either a ``"matrix"`` (2n x 2n of pairs) or a
``"mixture"`` of ``{"weight": p, "ket": [[re, im], ...]}`` components;
kets are indexed with subsystem B fastest (index = a*n + b).
"""

from __future__ import annotations

import json

import numpy as np

from .bipartite import BipartiteState
from .channels import (
    AffineMap,
    CanonicalParams,
    amplitude_damping,
    axial,
    depolarizing,
    from_canonical,
    identity_map,
    phase_damping,
    unital,
)
from .exceptions import InvalidStateError
from .minkowski import FourVector, to_four_vector


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


def _complex_array(data, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    _require(
        arr.shape == shape + (2,),
        f"expected complex entries as [re, im] pairs with shape {shape}, got {arr.shape}",
    )
    return arr[..., 0] + 1j * arr[..., 1]


def complex_pairs(arr: np.ndarray) -> list:
    stacked = np.stack([np.real(arr), np.imag(arr)], axis=-1)
    return stacked.tolist()


_NAMED_REQUIRED = {
    "identity": (),
    "unital": ("lambda",),
    "axial": ("alpha", "beta", "gamma"),
    "amplitude_damping": ("alpha",),
    "phase_damping": ("beta",),
    "depolarizing": ("lambda",),
}


def _named_channel(spec: dict) -> AffineMap:
    _require(isinstance(spec, dict) and "type" in spec, "named channel needs a 'type' key")
    kind = spec["type"]
    _require(kind in _NAMED_REQUIRED, f"unknown named channel type {kind!r}")
    missing = [key for key in _NAMED_REQUIRED[kind] if key not in spec]
    _require(not missing, f"named channel {kind!r} is missing parameters {missing}")
    if kind == "identity":
        return identity_map()
    if kind == "unital":
        return unital(np.asarray(spec["lambda"], dtype=float))
    if kind == "axial":
        return axial(float(spec["alpha"]), float(spec["beta"]), float(spec["gamma"]))
    if kind == "amplitude_damping":
        return amplitude_damping(float(spec["alpha"]))
    if kind == "phase_damping":
        return phase_damping(float(spec["beta"]))
    return depolarizing(float(spec["lambda"]))


def channel_from_dict(data: dict) -> AffineMap:
    """Parse a channel descriptor dict into an AffineMap."""
    _require(isinstance(data, dict), "channel descriptor must be a JSON object")
    if "named" in data:
        return _named_channel(data["named"])
    if "canonical" in data:
        spec = data["canonical"]
        _require(isinstance(spec, dict), "'canonical' must be an object")
        missing = [k for k in ("alpha", "beta", "omega", "xi") if k not in spec]
        _require(not missing, f"canonical descriptor is missing {missing}")
        params = CanonicalParams(
            float(spec["alpha"]),
            float(spec["beta"]),
            np.asarray(spec["omega"], dtype=float),
            np.asarray(spec["xi"], dtype=float),
        )
        return from_canonical(params)
    _require(
        "lambda" in data and "t" in data,
        "channel descriptor needs 'lambda' and 't' (or 'named'/'canonical')",
    )
    lam = np.asarray(data["lambda"], dtype=float)
    _require(lam.shape == (3, 3), f"'lambda' must be a 3x3 matrix, got shape {lam.shape}")
    t = np.asarray(data["t"], dtype=float)
    _require(t.shape == (3,), f"'t' must be a 3-vector, got shape {t.shape}")
    return AffineMap(lam, t)


def channel_to_dict(phi: AffineMap) -> dict:
    """Normalized affine form of a channel, for report echoes."""
    return {"lambda": phi.lam.tolist(), "t": phi.t.tolist()}


def state_from_dict(data: dict) -> FourVector:
    """Parse a qubit state descriptor into a FourVector with x0 = 1."""
    _require(isinstance(data, dict), "state descriptor must be a JSON object")
    if "bloch" in data:
        bloch = np.asarray(data["bloch"], dtype=float)
        _require(bloch.shape == (3,), f"'bloch' must be a 3-vector, got shape {bloch.shape}")
        return FourVector(1.0, bloch)
    _require("matrix" in data, "state descriptor needs 'bloch' or 'matrix'")
    m = _complex_array(data["matrix"], (2, 2))
    if np.max(np.abs(m - m.conj().T)) > 1e-9:
        raise InvalidStateError("state matrix must be Hermitian")
    v = to_four_vector(m)
    if abs(v.x0 - 1.0) > 1e-9:
        raise InvalidStateError(f"state matrix must have unit trace, got {v.x0}")
    return FourVector(1.0, v.x)


def bipartite_from_dict(data: dict) -> BipartiteState:
    """Parse a bipartite state descriptor into a BipartiteState."""
    _require(isinstance(data, dict), "bipartite descriptor must be a JSON object")
    _require("dims" in data, "bipartite descriptor needs 'dims'")
    dims = data["dims"]
    _require(
        isinstance(dims, (list, tuple)) and len(dims) == 2 and int(dims[0]) == 2,
        f"'dims' must be [2, n], got {dims}",
    )
    n = int(dims[1])
    if "matrix" in data:
        m = _complex_array(data["matrix"], (2 * n, 2 * n))
        return BipartiteState(m, (2, n))
    _require("mixture" in data, "bipartite descriptor needs 'matrix' or 'mixture'")
    mixture = data["mixture"]
    _require(isinstance(mixture, list) and mixture, "'mixture' must be a non-empty list")
    components = []
    for entry in mixture:
        _require(
            isinstance(entry, dict) and "weight" in entry and "ket" in entry,
            "each mixture component needs 'weight' and 'ket'",
        )
        ket = _complex_array(entry["ket"], (2 * n,))
        components.append((float(entry["weight"]), ket))
    return BipartiteState.from_mixture((2, n), components)


def load_json(path: str):
    """Read a JSON file, raising ValueError on syntax errors."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ValueError(f"{path}: {exc}") from exc
