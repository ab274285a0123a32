"""Minkowski picture of 2x2 Hermitian matrices.

A Hermitian matrix ``m`` corresponds to the real 4-vector ``(x0, x)`` with
``x0 = tr(m)`` and ``x`` the Pauli expansion coefficients,

    m = (x0 * I + x . sigma) / 2 .

In this picture ``4 det(m)`` equals the Minkowski square ``x0^2 - |x|^2``,
positive matrices fill the forward light cone, and qubit states form the
Bloch ball on the hyperplane ``x0 = 1``: mixed states are time-like,
pure states light-like.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

#: Tolerance for causal classification, applied to the Minkowski square of a
#: vector normalized to Euclidean norm 1.  Keeps the classification stable
#: under eigen-solver noise.
TAU_CAUSAL = 1e-9

#: The metric tensor diag(+1, -1, -1, -1); its square is the identity.
MINKOWSKI_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
MINKOWSKI_METRIC.setflags(write=False)


class CausalClass(Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass(frozen=True, eq=False)
class FourVector:
    """A point ``(x0, x)`` of the Minkowski representation.

    ``x0`` is the trace component and ``x`` the 3-dimensional Bloch part.
    Values are never normalized implicitly; callers normalize states to
    ``x0 = 1`` explicitly.
    """

    x0: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", float(self.x0))
        x = np.asarray(self.x, dtype=float).reshape(3).copy()
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def from_array(cls, arr) -> "FourVector":
        arr = np.asarray(arr, dtype=float).reshape(4)
        return cls(arr[0], arr[1:])

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.x0], self.x))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.as_array(), dtype=dtype)

    def __repr__(self):
        return f"FourVector(x0={self.x0!r}, x={self.x.tolist()!r})"


def as_vec4(v) -> np.ndarray:
    """Coerce a FourVector or length-4 array-like to a (4,) float array."""
    if isinstance(v, FourVector):
        return v.as_array()
    return np.asarray(v, dtype=float).reshape(4)


def to_four_vector(m) -> FourVector:
    """Minkowski 4-vector of a Hermitian 2x2 matrix.

    Components: ``x0 = m00 + m11``, ``x1 = 2 Re m01``, ``x2 = 2 Im m01``,
    ``x3 = m00 - m11``.  Round-trips with :func:`from_four_vector`.
    """
    m = np.asarray(m)
    return FourVector(
        (m[0, 0] + m[1, 1]).real,
        np.array([2.0 * m[0, 1].real, 2.0 * np.imag(m[0, 1]), (m[0, 0] - m[1, 1]).real]),
    )


def from_four_vector(v) -> np.ndarray:
    """Hermitian 2x2 matrix of a Minkowski 4-vector (inverse of to_four_vector)."""
    x0, x1, x2, x3 = as_vec4(v)
    return np.array(
        [
            [(x0 + x3) / 2.0, (x1 + 1j * x2) / 2.0],
            [(x1 - 1j * x2) / 2.0, (x0 - x3) / 2.0],
        ]
    )


def to_four_vector_array(ms: np.ndarray) -> np.ndarray:
    """Vectorized :func:`to_four_vector`: (..., 2, 2) matrices -> (..., 4)."""
    ms = np.asarray(ms)
    out = np.empty(ms.shape[:-2] + (4,))
    out[..., 0] = (ms[..., 0, 0] + ms[..., 1, 1]).real
    out[..., 1] = 2.0 * ms[..., 0, 1].real
    out[..., 2] = 2.0 * np.imag(ms[..., 0, 1])
    out[..., 3] = (ms[..., 0, 0] - ms[..., 1, 1]).real
    return out


def from_four_vector_array(vs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`from_four_vector`: (..., 4) vectors -> (..., 2, 2)."""
    vs = np.asarray(vs, dtype=float)
    out = np.empty(vs.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = (vs[..., 0] + vs[..., 3]) / 2.0
    out[..., 0, 1] = (vs[..., 1] + 1j * vs[..., 2]) / 2.0
    out[..., 1, 0] = (vs[..., 1] - 1j * vs[..., 2]) / 2.0
    out[..., 1, 1] = (vs[..., 0] - vs[..., 3]) / 2.0
    return out


def minkowski_dot(a, b) -> float:
    """Indefinite inner product ``a0 b0 - a . b`` (symmetric, bilinear)."""
    a = as_vec4(a)
    b = as_vec4(b)
    return float(a[0] * b[0] - a[1:] @ b[1:])


def det_from_vector(v) -> float:
    """Determinant of the matrix represented by ``v``: one quarter of its Minkowski square."""
    return minkowski_dot(v, v) / 4.0


def causal_class(v, tau_causal: float = TAU_CAUSAL) -> CausalClass:
    """Classify a nonzero 4-vector as time-, light- or space-like.

    The Minkowski square of the Euclidean-normalized vector is compared
    against ``tau_causal``: above it time-like, below its negative
    space-like, light-like in between.
    """
    v = as_vec4(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot classify the zero vector")
    u = v / norm
    square = minkowski_dot(u, u)
    if square > tau_causal:
        return CausalClass.TIMELIKE
    if square < -tau_causal:
        return CausalClass.SPACELIKE
    return CausalClass.LIGHTLIKE
