"""Positive trace-preserving (stochastic) 1-qubit maps.

A trace-preserving positive linear map on 2x2 Hermitian matrices acts on
Minkowski 4-vectors as ``(x0, x) -> (x0, x0*t + Lam x)`` for a real 3x3
matrix ``Lam`` and a translation 3-vector ``t``.  The map is positive
exactly when the image of the unit (Bloch) sphere stays inside the closed
unit ball, and completely positive when its Choi matrix is positive
semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import NotPositiveMapError
from .minkowski import FourVector, as_vec4, from_four_vector, to_four_vector

#: Absolute tolerance on the image norm in the positivity test.
POSITIVITY_TOL = 1e-9

#: Eigenvalue floor of the Choi matrix in the complete-positivity test.
CP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Affine Bloch-ball action ``(x0, x) -> (x0, x0*t + lam @ x)``.

    Trace preservation holds by construction (the x0 component is passed
    through).  Instances are immutable values and safe to share between
    threads.
    """

    lam: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float).reshape(3, 3).copy()
        t = np.asarray(self.t, dtype=float).reshape(3).copy()
        lam.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "t", t)

    def apply(self, v) -> FourVector:
        """Image of a 4-vector under the map; linear, preserves x0 exactly."""
        v = as_vec4(v)
        return FourVector(v[0], v[0] * self.t + self.lam @ v[1:])

    def apply_bloch(self, points: np.ndarray) -> np.ndarray:
        """Image Bloch parts for an (..., 3) array of Bloch vectors with x0 = 1."""
        points = np.asarray(points, dtype=float)
        return points @ self.lam.T + self.t

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        """Action on an arbitrary 2x2 matrix by complex-linear extension.

        The affine form acts on Hermitian matrices; a general matrix is
        split as ``m = h1 + i h2`` with ``h1, h2`` Hermitian.
        """
        m = np.asarray(m, dtype=complex)
        h1 = (m + m.conj().T) / 2.0
        h2 = (m - m.conj().T) / 2j
        out1 = from_four_vector(self.apply(to_four_vector(h1)))
        out2 = from_four_vector(self.apply(to_four_vector(h2)))
        return out1 + 1j * out2


def apply(phi: AffineMap, v) -> FourVector:
    """Functional alias for :meth:`AffineMap.apply`."""
    return phi.apply(v)


@dataclass(frozen=True, eq=False)
class CanonicalParams:
    """Canonical parameters of a stochastic 1-qubit map.

    ``alpha, beta`` in [0, 1]; ``omega`` sorted ascending with
    ``omega[2] = 1``; ``xi`` a unit 3-vector.  The represented map (up to
    orthogonal transformations) is diagonal:

        t_i   = beta * xi_i * (1 - alpha * omega_i**2)
        lam_i = alpha * beta * nu * omega_i

    with ``nu = sqrt(sum(xi_i**2 * omega_i**2))``.  Maps on the boundary of
    the positive set are exactly those with ``beta = 1``; there ``xi`` is a
    point where the image ellipsoid touches the unit sphere.
    """

    alpha: float
    beta: float
    omega: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = float(self.beta)
        omega = np.asarray(self.omega, dtype=float).reshape(3).copy()
        xi = np.asarray(self.xi, dtype=float).reshape(3).copy()
        if not (0.0 <= alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        if not (0.0 <= beta <= 1.0):
            raise ValueError(f"beta must lie in [0, 1], got {beta}")
        if not (0.0 <= omega[0] <= omega[1] <= omega[2]):
            raise ValueError(f"omega must be sorted into [0, 1], got {omega.tolist()}")
        if omega[2] != 1.0:
            raise ValueError(f"omega[2] must equal 1, got {omega[2]}")
        if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
            raise ValueError(f"xi must be a unit vector, got norm {np.linalg.norm(xi)}")
        omega.setflags(write=False)
        xi.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "xi", xi)

    @property
    def nu(self) -> float:
        return float(np.sqrt(np.sum(self.xi**2 * self.omega**2)))


def from_canonical(p: CanonicalParams) -> AffineMap:
    """Affine map of canonical parameters: diagonal ``lam``, ``t`` along ``xi``."""
    t = p.beta * p.xi * (1.0 - p.alpha * p.omega**2)
    lam = np.diag(p.alpha * p.beta * p.nu * p.omega)
    return AffineMap(lam, t)


# ---------------------------------------------------------------------------
# Positivity: numerical search for the largest image norm over the sphere.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _icosphere(subdivisions: int) -> np.ndarray:
    """Unit vectors of a subdivided icosahedron (10 * 4**n + 2 vertices)."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(subdivisions):
        midpoint_cache: dict[tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint_cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                midpoint_cache[key] = len(verts) - 1
            return midpoint_cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        faces = new_faces
    grid = np.asarray(verts)
    grid.setflags(write=False)
    return grid


def _tangent_frame(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pivot = np.zeros(3)
    pivot[np.argmin(np.abs(m))] = 1.0
    u = np.cross(m, pivot)
    u /= np.linalg.norm(u)
    return u, np.cross(m, u)


_COMPASS = np.stack(
    [np.cos(np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False)),
     np.sin(np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False))],
    axis=1,
)
_COMPASS.setflags(write=False)


def max_output_norm(phi: AffineMap, subdivisions: int = 4, refine: bool = True) -> float:
    """Largest Euclidean norm of ``t + lam @ m`` over unit 3-vectors ``m``.

    Grid search over an icosphere followed by derivative-free local
    refinement (a shrinking compass search on the tangent plane) around
    the best grid point.
    """
    grid = _icosphere(subdivisions)
    norms = np.linalg.norm(phi.apply_bloch(grid), axis=1)
    best_idx = int(np.argmax(norms))
    best = float(norms[best_idx])
    if not refine:
        return best
    current = grid[best_idx]
    u, v = _tangent_frame(current)
    frame = np.stack([u, v])
    # mesh spacing at subdivision level n is about 1.1 / 2**n radians
    step = 1.2 / 2.0**subdivisions
    lam_t, t = phi.lam.T, phi.t
    for _ in range(300):
        if step < 1e-8:
            break
        cand = current + step * (_COMPASS @ frame)
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        vals = np.linalg.norm(cand @ lam_t + t, axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            current = cand[i]
        else:
            step *= 0.4
    return best


def is_positive(phi: AffineMap, tol: float = POSITIVITY_TOL) -> bool:
    """Whether the map sends the closed Bloch ball into itself."""
    return max_output_norm(phi) <= 1.0 + tol


# ---------------------------------------------------------------------------
# Complete positivity via the Choi matrix.
# ---------------------------------------------------------------------------


def choi_matrix(phi: AffineMap) -> np.ndarray:
    """Choi matrix ``sum_ij E_ij (x) phi(E_ij)`` over the 2x2 matrix units.

    Of the two standard index conventions only the spectrum matters here,
    and both give the same eigenvalues.  Trace equals 2 for
    trace-preserving maps.
    """
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            choi += np.kron(e, phi.apply_matrix(e))
    return choi


def is_completely_positive(phi: AffineMap, tol: float = CP_TOL) -> bool:
    """Whether all Choi eigenvalues are at least ``-tol``."""
    return bool(np.linalg.eigvalsh(choi_matrix(phi))[0] >= -tol)


# ---------------------------------------------------------------------------
# Named channels.
# ---------------------------------------------------------------------------


def identity_map() -> AffineMap:
    return AffineMap(np.eye(3), np.zeros(3))


def unital(lam) -> AffineMap:
    """Diagonal unital channel ``lam = (l1, l2, l3)``, ``t = 0``.

    Positive exactly when ``max |l_i| <= 1``.
    """
    lam = np.asarray(lam, dtype=float).reshape(3)
    if np.max(np.abs(lam)) > 1.0 + 1e-12:
        raise NotPositiveMapError(f"unital map needs max|lam| <= 1, got {lam.tolist()}")
    return AffineMap(np.diag(lam), np.zeros(3))


def axial(alpha: float, beta: float, gamma: float) -> AffineMap:
    """Channel commuting with rotations about the 3-axis.

    ``lam = diag(beta, beta, alpha + gamma - 1)``, ``t = (0, 0, alpha - gamma)``.
    Raises :class:`NotPositiveMapError` for parameter combinations whose
    image ellipsoid leaves the Bloch ball.
    """
    phi = AffineMap(
        np.diag([beta, beta, alpha + gamma - 1.0]),
        np.array([0.0, 0.0, alpha - gamma]),
    )
    if not is_positive(phi):
        raise NotPositiveMapError(
            f"axial map alpha={alpha}, beta={beta}, gamma={gamma} is not positive"
        )
    return phi


def amplitude_damping(alpha: float) -> AffineMap:
    """Amplitude damping: the axial channel with gamma = 1, beta**2 = alpha."""
    if not (0.0 <= alpha <= 1.0):
        raise NotPositiveMapError(f"amplitude damping needs alpha in [0, 1], got {alpha}")
    return axial(alpha, float(np.sqrt(alpha)), 1.0)


def phase_damping(beta: float) -> AffineMap:
    """Phase damping: the unital channel with lam = (beta, beta, 1)."""
    return unital([beta, beta, 1.0])


def depolarizing(lam: float) -> AffineMap:
    """Isotropic contraction lam * identity on the Bloch part.

    Positive for ``lam`` in [-1, 1]; completely positive only on [-1/3, 1].
    """
    return unital([lam, lam, lam])
