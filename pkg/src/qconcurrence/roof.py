"""Convex-roof construction for the concurrence of a stochastic 1-qubit map.

For a map ``phi`` and a real parameter ``w`` the quadratic form

    q_w(x) = 4 (det phi(x) - w det x) = phi(x).phi(x) - w x.x

is represented by the symmetric matrix ``Q_w = Q_0 - w eta`` with ``eta``
the Minkowski metric.  There is a unique ``w0`` at which ``Q_w`` becomes
positive semidefinite and degenerate with a space- or light-like kernel
vector; ``sqrt(q_w0)`` is then the concurrence, a convex roof.  The roof
is flat when the kernel contains a vector with vanishing time component;
otherwise its leaves are the chords aimed at the apex point where the
kernel line crosses the hyperplane ``x0 = 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import AffineMap, CanonicalParams, is_positive
from .exceptions import NoPsdWindowError, NotPositiveMapError, QConcurrenceError
from .minkowski import MINKOWSKI_METRIC, CausalClass, FourVector, causal_class
from .validation import state_to_vec4

logger = logging.getLogger(__name__)

#: PSD tolerance, relative to the Frobenius norm of Q_0.
TOL_PSD = 1e-10

#: Eigenvectors with |eigenvalue| below this multiple of the PSD tolerance
#: are counted as kernel vectors.
KERNEL_FACTOR = 10.0

#: Size of |n0| (for a Euclidean-unit kernel vector) below which a
#: one-dimensional kernel is treated as flat.
FLAT_TOL = 1e-9

#: Negative q values larger than this in magnitude are logged when clamped.
CLAMP_LOG_THRESHOLD = 1e-12

#: 1 - |x|^2 below this treats a state as lying on the Bloch sphere.
SPHERE_CUT = 1e-12


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Symmetric matrix of ``q_w`` together with its parameter ``w``."""

    matrix: np.ndarray
    w: float

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(4, 4).copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "w", float(self.w))

    def value(self, x) -> float:
        """Evaluate ``q_w`` at a 4-vector."""
        v = np.asarray(x, dtype=float).reshape(4)
        return float(v @ self.matrix @ v)


@dataclass(frozen=True, eq=False)
class RoofSolution:
    """Roof data of a channel: threshold parameter, kernel and geometry.

    ``w0`` equals the lower endpoint of the closed interval of parameters
    with ``Q_w`` positive semidefinite.  ``n`` is a representative kernel
    vector: spatial unit vector with ``n0 = 0`` for flat roofs, the apex
    point normalized to ``n0 = 1`` otherwise.  ``q_matrix`` is ``Q_{w0}``,
    and ``method`` records whether the pencil eigenvalues or the bisection
    fallback produced the window.
    """

    w0: float
    psd_interval: tuple[float, float]
    kernel_basis: tuple[FourVector, ...]
    flat: bool
    n: FourVector
    q_matrix: np.ndarray
    method: str = "pencil"

    def __post_init__(self):
        m = np.asarray(self.q_matrix, dtype=float).reshape(4, 4).copy()
        m.setflags(write=False)
        object.__setattr__(self, "q_matrix", m)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Convex decomposition of a state into pure states on the Bloch sphere.

    ``weights`` sum to one and ``sum_j weights[j] * pures[j]`` reproduces
    the decomposed state; each row of ``pures`` is a light-like 4-vector
    with x0 = 1.  ``degenerate_leaf`` marks channels with identically zero
    concurrence, where every chord is optimal.
    """

    weights: np.ndarray
    pures: np.ndarray
    degenerate_leaf: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1).copy()
        p = np.asarray(self.pures, dtype=float).reshape(len(w), 4).copy()
        w.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "pures", p)

    def components(self) -> list[tuple[float, FourVector]]:
        return [(float(w), FourVector.from_array(p)) for w, p in zip(self.weights, self.pures)]

    def average(self) -> np.ndarray:
        """The reconstructed 4-vector ``sum_j weights[j] * pures[j]``."""
        return self.weights @ self.pures


def _q_zero(phi: AffineMap) -> np.ndarray:
    lam, t = phi.lam, phi.t
    tl = t @ lam
    gram = lam.T @ lam
    gram = (gram + gram.T) / 2.0
    q = np.empty((4, 4))
    q[0, 0] = 1.0 - t @ t
    q[0, 1:] = -tl
    q[1:, 0] = -tl
    q[1:, 1:] = -gram
    return q


def build_q(phi: AffineMap, w: float) -> QuadraticForm:
    """Matrix of ``q_w``: first row ``(1 - |t|^2 - w, -t.lam)``, spatial block ``w I - lam.T lam``."""
    return QuadraticForm(_q_zero(phi) - w * MINKOWSKI_METRIC, w)


def _min_eigenvalue(q0: np.ndarray, w: float) -> float:
    return float(np.linalg.eigvalsh(q0 - w * MINKOWSKI_METRIC)[0])


def _expand_bracket(q0, start, direction, tol_abs):
    """March outward until Q_w is clearly not PSD."""
    w = start
    step = 1.0
    for _ in range(80):
        if _min_eigenvalue(q0, w) < -100.0 * tol_abs:
            return w
        w += direction * step
        step *= 2.0
    raise NoPsdWindowError("could not bracket the PSD window")


def _bisect_edge(q0, inside, outside, tol_abs):
    """Edge of {w : min eig of Q_w >= -tol_abs} between an inside and an outside point."""
    for _ in range(200):
        if abs(inside - outside) <= 1e-15 * max(1.0, abs(inside), abs(outside)):
            break
        mid = (inside + outside) / 2.0
        if _min_eigenvalue(q0, mid) >= -tol_abs:
            inside = mid
        else:
            outside = mid
    return inside


def _window_by_bisection(q0, candidates, tol_abs):
    """PSD window from the concavity of w -> min eig of Q_w.

    The minimum eigenvalue is a concave function of w (a minimum of affine
    functions), so the PSD set is an interval and one-dimensional search
    is reliable even when the pencil eigenvalues are defective.
    """
    center = float(np.mean(candidates)) if candidates.size else 0.0
    lo = _expand_bracket(q0, (candidates.min() if candidates.size else center) - 1.0, -1.0, tol_abs)
    hi = _expand_bracket(q0, (candidates.max() if candidates.size else center) + 1.0, +1.0, tol_abs)
    res = minimize_scalar(
        lambda w: -_min_eigenvalue(q0, w),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-14},
    )
    w_star = float(res.x)
    if _min_eigenvalue(q0, w_star) < -tol_abs:
        raise NoPsdWindowError(
            "no parameter makes the quadratic form positive semidefinite "
            f"(best minimum eigenvalue {_min_eigenvalue(q0, w_star):.3e})"
        )
    w1 = _bisect_edge(q0, w_star, lo, tol_abs)
    w2 = _bisect_edge(q0, w_star, hi, tol_abs)
    return w1, w2


def _kernel_at(q0, w, kernel_tol):
    evals, evecs = np.linalg.eigh(q0 - w * MINKOWSKI_METRIC)
    mask = np.abs(evals) <= kernel_tol
    if not mask.any():
        mask[int(np.argmin(np.abs(evals)))] = True
    return evecs[:, mask]


def _polish_endpoint(q0, w, scale, tol_abs):
    """Sharpen a degeneracy point found from the pencil eigenvalues.

    Eigenvalues of the nonsymmetric pencil lose half the machine digits
    near double roots, but each eigenvalue branch of the symmetric Q_w
    crosses zero with slope ``-n.eta.n``, so a Newton step on the steepest
    vanishing branch recovers full precision.  Where every vanishing
    branch has near-zero slope (a light-like kernel: the PSD window
    degenerates to a tangency) the branch is locally a concave parabola
    and its vertex is taken instead.  Reverts when the polished value does
    not keep Q_w semidefinite.
    """
    start = w
    eta_diag = np.diag(MINKOWSKI_METRIC)
    for _ in range(3):
        evals, evecs = np.linalg.eigh(q0 - w * MINKOWSKI_METRIC)
        near = np.abs(evals) <= 1e-5 * scale
        if not near.any():
            break
        slopes = np.einsum("ij,i,ij->j", evecs, eta_diag, evecs)
        idx = [i for i in range(4) if near[i]]
        j = max(idx, key=lambda i: abs(slopes[i]))
        if abs(slopes[j]) >= 1e-3:
            delta = evals[j] / slopes[j]
            w += delta
            if abs(delta) <= 1e-14 * max(1.0, abs(w)):
                break
            continue
        h = 1e-6 * max(1.0, abs(w))
        f_minus = _min_eigenvalue(q0, w - h)
        f_zero = _min_eigenvalue(q0, w)
        f_plus = _min_eigenvalue(q0, w + h)
        curvature = f_plus + f_minus - 2.0 * f_zero
        if curvature >= -1e-14 * scale:
            break
        vertex = w + h * (f_minus - f_plus) / (2.0 * curvature)
        if abs(vertex - w) > 10.0 * h:
            break
        w = vertex
        break
    if _min_eigenvalue(q0, w) < -tol_abs:
        return start
    return w


def _representative_vector(kernel, qw, kernel_tol):
    """Flat flag and representative kernel vector.

    A kernel of dimension >= 2 always admits a combination with vanishing
    time component, hence a flat roof; for a one-dimensional kernel the
    roof is flat exactly when the kernel vector itself has n0 = 0.
    """
    if kernel.shape[1] == 1:
        v = kernel[:, 0]
        if abs(v[0]) <= FLAT_TOL:
            n = v.copy()
            n[0] = 0.0
            return True, _orient(n / np.linalg.norm(n))
        return False, v / v[0]
    order = np.argsort(-np.abs(kernel[0]))
    if abs(kernel[0, order[0]]) <= 1e-12:
        v = kernel[:, order[0]].copy()
    else:
        j1, j2 = order[0], order[1]
        v = kernel[:, j1] * kernel[0, j2] - kernel[:, j2] * kernel[0, j1]
    v[0] = 0.0
    v = v / np.linalg.norm(v)
    residual = float(np.linalg.norm(qw @ v))
    if residual > kernel_tol:
        logger.warning(
            "flat kernel combination has residual %.3e above tolerance %.3e",
            residual,
            kernel_tol,
        )
    return True, _orient(v)


def _orient(v: np.ndarray) -> np.ndarray:
    """Fix the overall sign so the largest-magnitude component is positive."""
    return -v if v[int(np.argmax(np.abs(v)))] < 0.0 else v


def _qualifies(kernel, tau_causal) -> bool:
    """Whether a kernel contains a space- or light-like vector."""
    if kernel.shape[1] >= 2:
        return True
    return causal_class(kernel[:, 0], tau_causal) is not CausalClass.TIMELIKE


def solve_w0(
    phi: AffineMap,
    *,
    tol_psd: float = TOL_PSD,
    tau_causal: float = 1e-9,
    check_positive: bool = True,
) -> RoofSolution:
    """Find the unique roof parameter of a positive trace-preserving map.

    Returns ``w0 = min{w : Q_w >= 0}``.  Candidate degeneracy points are
    the real eigenvalues of ``eta Q_0`` (``Q_w`` is singular exactly when
    ``Q_0 n = w eta n``); since positive semidefinite matrices form a
    convex cone and ``Q_w`` is affine in ``w``, the PSD set is a closed
    interval whose endpoints lie among the candidates.  The kernel at the
    lower endpoint is space- or light-like, at the upper endpoint (when
    distinct) time-like; a bisection on the smallest eigenvalue serves as
    fallback for defective pencils.

    Parameters
    ----------
    phi : AffineMap
        The channel; must be positive (precondition, checked by default).
    tol_psd : float
        PSD tolerance relative to the Frobenius norm of ``Q_0``.
    tau_causal : float
        Tolerance of the causal classification of kernel vectors.
    check_positive : bool
        Skip the (numerical) positivity check when the caller guarantees it.

    Raises
    ------
    NotPositiveMapError
        If the positivity precondition fails.
    NoPsdWindowError
        If no PSD window is found; this is a numerical failure that cannot
        occur for positive maps and is reported, never silently patched.
    """
    if check_positive and not is_positive(phi):
        raise NotPositiveMapError("the map does not send the Bloch ball into itself")
    q0 = _q_zero(phi)
    scale = max(float(np.linalg.norm(q0)), 1.0)
    tol_abs = tol_psd * scale
    kernel_tol = KERNEL_FACTOR * tol_abs

    eigs = np.linalg.eigvals(MINKOWSKI_METRIC @ q0)
    candidates = np.sort(eigs.real[np.abs(eigs.imag) <= 1e-8 * scale])
    passing = []
    for w in candidates:
        w = float(w)
        lam_min = _min_eigenvalue(q0, w)
        if lam_min >= -tol_abs:
            passing.append(w)
        elif lam_min >= -1e-5 * scale:
            # near miss: the pencil value may be off by ~sqrt(eps) at a
            # nearly defective double root; polishing recovers the edge
            w = _polish_endpoint(q0, w, scale, tol_abs)
            if _min_eigenvalue(q0, w) >= -tol_abs:
                passing.append(w)
    if passing:
        w1 = _polish_endpoint(q0, min(passing), scale, tol_abs)
        w2 = _polish_endpoint(q0, max(passing), scale, tol_abs)
        method = "pencil"
    else:
        w1, w2 = _window_by_bisection(q0, candidates, tol_abs)
        method = "bisection"

    qw1 = q0 - w1 * MINKOWSKI_METRIC
    kernel = _kernel_at(q0, w1, kernel_tol)
    flat, n_vec = _representative_vector(kernel, qw1, kernel_tol)
    if not flat and causal_class(n_vec, tau_causal) is CausalClass.TIMELIKE:
        raise QConcurrenceError(
            "time-like kernel at the lower PSD endpoint; the map violates the "
            "roof construction's assumptions"
        )

    # there must be a single qualifying endpoint; a second one indicates a
    # numerically ambiguous solution and is reported as a diagnostic
    if w2 - w1 > max(100.0 * tol_abs, 1e-9 * max(1.0, abs(w1))):
        if _qualifies(_kernel_at(q0, w2, kernel_tol), tau_causal):
            raise QConcurrenceError(
                f"both PSD endpoints w1={w1!r}, w2={w2!r} carry space- or "
                "light-like kernel vectors; roof parameter is ambiguous"
            )

    return RoofSolution(
        w0=w1,
        psd_interval=(w1, w2),
        kernel_basis=tuple(FourVector.from_array(kernel[:, j]) for j in range(kernel.shape[1])),
        flat=flat,
        n=FourVector.from_array(n_vec),
        q_matrix=qw1,
        method=method,
    )


def concurrence(
    phi: AffineMap,
    state,
    *,
    solution: RoofSolution | None = None,
    tol_psd: float = TOL_PSD,
    check_positive: bool = True,
) -> float:
    """Concurrence of ``phi`` at a state of the closed Bloch ball.

    Equals ``sqrt(q_w0(state))``; on pure states this is
    ``2 sqrt(det phi(state))``.  Pass a precomputed ``solution`` to reuse
    the per-channel roof data for many states.
    """
    vec = state_to_vec4(state)
    if solution is None:
        solution = solve_w0(phi, tol_psd=tol_psd, check_positive=check_positive)
    q = float(vec @ solution.q_matrix @ vec)
    if q < 0.0:
        if q < -CLAMP_LOG_THRESHOLD:
            logger.warning("clamping negative quadratic form value %.3e to zero", q)
        q = 0.0
    return float(np.sqrt(q))


def unital_concurrence_closed_form(lam, state) -> float:
    """Concurrence of the diagonal unital channel, in closed form.

    With ``w = max lam_i**2`` the value is
    ``sqrt((1 - w) x0^2 + sum_i (w - lam_i^2) x_i^2)``.
    """
    lam = np.asarray(lam, dtype=float).reshape(3)
    if np.max(np.abs(lam)) > 1.0 + 1e-12:
        raise NotPositiveMapError(f"unital map needs max|lam| <= 1, got {lam.tolist()}")
    vec = state_to_vec4(state)
    w = float(np.max(lam**2))
    val = (1.0 - w) * vec[0] ** 2 + np.sum((w - lam**2) * vec[1:] ** 2)
    return float(np.sqrt(max(val, 0.0)))


def _axial_window(alpha: float, gamma: float) -> tuple[float, float]:
    """Endpoints of the PSD window of the time/x3 block of an axial channel."""
    root = 2.0 * np.sqrt(max(alpha * (1.0 - alpha) * gamma * (1.0 - gamma), 0.0))
    base = 1.0 + 2.0 * alpha * gamma - alpha - gamma
    return base - root, base + root


def axial_w0_closed_form(alpha: float, beta: float, gamma: float) -> tuple[float, bool]:
    """Roof parameter and flatness of the axial channel, in closed form.

    ``w0 = max(beta^2, beta_c^2)`` with the critical value
    ``beta_c^2 = 1 + 2 alpha gamma - alpha - gamma
    - 2 sqrt(alpha (1-alpha) gamma (1-gamma))``.  The roof is flat for
    ``beta^2 >= beta_c^2`` and, independently, always for ``alpha = gamma``
    (the unital subfamily, where the kernel direction is the 3-axis).
    """
    if not (0.0 <= alpha <= 1.0 and 0.0 <= gamma <= 1.0):
        raise NotPositiveMapError(f"axial map needs alpha, gamma in [0, 1], got {alpha}, {gamma}")
    b2 = beta * beta
    c = alpha + gamma - 1.0
    bc2, upper = _axial_window(alpha, gamma)
    if not (b2 <= c * c + 1e-12 or (bc2 - 1e-12 <= b2 <= upper + 1e-12)):
        raise NotPositiveMapError(
            f"axial map alpha={alpha}, beta={beta}, gamma={gamma} is not positive"
        )
    w0 = max(b2, bc2)
    flat = b2 >= bc2 - 1e-12 or alpha == gamma
    return float(w0), bool(flat)


def cholesky_boundary_check(p: CanonicalParams) -> np.ndarray:
    """Triangular factor ``R`` with ``R @ R.T = Q_{w0}`` for a boundary map.

    Requires ``beta = 1``; then ``w0 = alpha * nu**2`` and, with
    ``mu_i = sqrt(alpha (1 - alpha omega_i^2))``, the factor is upper
    triangular with diagonal ``(0, nu mu_1, nu mu_2, nu mu_3)`` and first
    row ``(0, -omega_i xi_i mu_i)``.  The light-like vector
    ``(1, xi_i omega_i / nu)`` spans the kernel of ``Q_{w0}``.
    """
    if abs(p.beta - 1.0) > 1e-12:
        raise ValueError(f"boundary factorization requires beta = 1, got beta = {p.beta}")
    mu = np.sqrt(p.alpha * (1.0 - p.alpha * p.omega**2))
    r = np.zeros((4, 4))
    r[0, 1:] = -p.omega * p.xi * mu
    r[1, 1], r[2, 2], r[3, 3] = p.nu * mu
    return r


def optimal_decomposition(
    phi: AffineMap,
    state,
    *,
    solution: RoofSolution | None = None,
    tol_psd: float = TOL_PSD,
    check_positive: bool = True,
) -> Decomposition:
    """Two-component optimal decomposition of a state for ``phi``.

    The decomposition lies on the leaf through the state: for a flat roof
    the chord through the state along the kernel direction, otherwise the
    chord through the state and the apex point.  Its endpoints are the two
    intersections of that line with the unit sphere, and the weights solve
    the convex combination, so the weighted pure-state concurrences
    average exactly to the state's concurrence.  States on the sphere
    return a singleton.
    """
    vec = state_to_vec4(state)
    x = vec[1:]
    r2 = float(x @ x)
    if 1.0 - r2 <= SPHERE_CUT:
        pure = np.concatenate(([1.0], x / np.linalg.norm(x)))
        return Decomposition(weights=np.array([1.0]), pures=pure[None, :])
    if solution is None:
        solution = solve_w0(phi, tol_psd=tol_psd, check_positive=check_positive)
    degenerate = len(solution.kernel_basis) == 4
    if solution.flat:
        direction = solution.n.x
    else:
        direction = solution.n.x - x
        direction = direction / np.linalg.norm(direction)
    xu = float(x @ direction)
    root = float(np.sqrt(max(xu * xu + (1.0 - r2), 0.0)))
    s_plus = -xu + root
    s_minus = -xu - root
    w_plus = -s_minus / (s_plus - s_minus)
    pures = np.empty((2, 4))
    pures[0] = np.concatenate(([1.0], x + s_plus * direction))
    pures[1] = np.concatenate(([1.0], x + s_minus * direction))
    return Decomposition(
        weights=np.array([w_plus, 1.0 - w_plus]),
        pures=pures,
        degenerate_leaf=degenerate,
    )
