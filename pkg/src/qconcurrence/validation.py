"""Input validation helpers shared by the solver, the estimator and the CLI."""

from __future__ import annotations

import numpy as np

from .channels import AffineMap, CanonicalParams, from_canonical
from .exceptions import InvalidStateError
from .minkowski import FourVector

#: How far outside the closed Bloch ball (and off x0 = 1) a state may sit.
BALL_TOL = 1e-9


def check_bloch_vectors(X, ball_tol: float = BALL_TOL) -> np.ndarray:
    """Validate Bloch vectors and return them as an (n, 3) float array.

    Accepts a single (3,) vector or an (n, 3) array.  Rows must be finite
    and lie inside the closed unit ball within ``ball_tol``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != 3:
        raise InvalidStateError(f"expected shape (n, 3) Bloch vectors, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidStateError("Bloch vectors must be finite")
    norms = np.linalg.norm(X, axis=1)
    worst = float(np.max(norms)) if len(norms) else 0.0
    if worst > 1.0 + ball_tol:
        raise InvalidStateError(f"Bloch vector outside the closed unit ball: |x| = {worst}")
    return X


def state_to_vec4(state, ball_tol: float = BALL_TOL) -> np.ndarray:
    """Validate a qubit state and return it as a (4,) vector with x0 = 1.

    Accepts a :class:`FourVector`, a (4,) vector with first component 1,
    or a (3,) Bloch vector.
    """
    if isinstance(state, FourVector):
        vec = state.as_array()
    else:
        arr = np.asarray(state, dtype=float).reshape(-1)
        if arr.size == 3:
            vec = np.concatenate(([1.0], arr))
        elif arr.size == 4:
            vec = arr
        else:
            raise InvalidStateError(f"expected a 3- or 4-vector state, got size {arr.size}")
    if not np.all(np.isfinite(vec)):
        raise InvalidStateError("state must be finite")
    if abs(vec[0] - 1.0) > ball_tol:
        raise InvalidStateError(f"state must have x0 = 1, got {vec[0]}")
    if np.linalg.norm(vec[1:]) > 1.0 + ball_tol:
        raise InvalidStateError(
            f"state lies outside the closed Bloch ball: |x| = {np.linalg.norm(vec[1:])}"
        )
    return vec


def coerce_channel(obj) -> AffineMap:
    """Coerce a channel given as AffineMap, CanonicalParams, (lam, t) pair or dict."""
    if isinstance(obj, AffineMap):
        return obj
    if isinstance(obj, CanonicalParams):
        return from_canonical(obj)
    if isinstance(obj, dict):
        from .descriptors import channel_from_dict

        return channel_from_dict(obj)
    if isinstance(obj, (tuple, list)) and len(obj) == 2:
        return AffineMap(obj[0], obj[1])
    raise TypeError(f"cannot interpret {type(obj).__name__} as a qubit channel")
