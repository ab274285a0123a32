"""Shared generators and independent reference implementations for the tests.

Reference routines here deliberately avoid the library's code paths so
they can serve as oracles: the axial window comes from the 2x2 block
determinant, the partial trace from an explicit double loop, and so on.
"""

import numpy as np

from qconcurrence import AffineMap, BipartiteState, CanonicalParams


def random_hermitian(rng, scale=1.0):
    a, b, re, im = rng.standard_normal(4) * scale
    return np.array([[a + 0j, re + 1j * im], [re - 1j * im, b + 0j]])


def random_unit(rng, dim=3):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_bloch(rng, radius=1.0):
    # uniform over the ball of the given radius
    return random_unit(rng) * radius * rng.uniform() ** (1.0 / 3.0)


def random_state4(rng, radius=1.0):
    return np.concatenate(([1.0], random_bloch(rng, radius)))


def random_canonical(rng, beta=None):
    omega = np.sort(rng.uniform(0.0, 1.0, 2))
    return CanonicalParams(
        alpha=rng.uniform(),
        beta=rng.uniform() if beta is None else beta,
        omega=np.array([omega[0], omega[1], 1.0]),
        xi=random_unit(rng),
    )


def random_unital_lam(rng):
    return rng.uniform(-1.0, 1.0, 3)


def random_ket(rng, dim):
    k = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return k / np.linalg.norm(k)


def random_rank2_state(rng, n=2):
    p = rng.uniform(0.05, 0.95)
    return BipartiteState.from_mixture(
        (2, n), [(p, random_ket(rng, 2 * n)), (1.0 - p, random_ket(rng, 2 * n))]
    )


def axial_map(alpha, beta, gamma):
    """Axial affine map built directly, bypassing the positivity check."""
    return AffineMap(np.diag([beta, beta, alpha + gamma - 1.0]), [0.0, 0.0, alpha - gamma])


def axial_block_window(alpha, gamma):
    """PSD window of the (x0, x3) block, straight from its determinant.

    The block [[1 - d^2 - w, -d c], [-d c, w - c^2]] with c = alpha+gamma-1,
    d = alpha-gamma is PSD between the roots of w^2 - (1 + c^2 - d^2) w + c^2.
    """
    c = alpha + gamma - 1.0
    d = alpha - gamma
    roots = np.roots([1.0, -(1.0 + c * c - d * d), c * c])
    roots = np.sort(roots.real)
    return float(roots[0]), float(roots[1])


def axial_w0_reference(alpha, beta, gamma):
    lower, _ = axial_block_window(alpha, gamma)
    return max(beta * beta, lower)


def axial_positive_mask(alpha, beta, gamma, margin=1e-12):
    """Vectorized positivity of axial maps, derived from the image ellipsoid.

    The squared image norm along the symmetry axis is the quadratic
    f(m3) = (c^2 - b^2) m3^2 + 2 c d m3 + b^2 + d^2 on [-1, 1].  Convex
    case (b^2 <= c^2) and clamped-maximum case (|c d| >= b^2 - c^2) peak at
    the endpoints, whose values (2 alpha - 1)^2, (2 gamma - 1)^2 never
    exceed 1; otherwise the interior maximum stays inside the ball exactly
    when b^2 lies between the roots of u^2 - (1 + c^2 - d^2) u + c^2.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    c = alpha + gamma - 1.0
    d = alpha - gamma
    b2 = beta * beta
    base = 1.0 + 2.0 * alpha * gamma - alpha - gamma
    root = 2.0 * np.sqrt(np.maximum(alpha * (1.0 - alpha) * gamma * (1.0 - gamma), 0.0))
    endpoint_max = (b2 <= c * c + margin) | (np.abs(c * d) >= b2 - c * c - margin)
    interior_ok = (base - root - margin <= b2) & (b2 <= base + root + margin)
    return endpoint_max | interior_ok


def loop_partial_trace_b(m, n):
    """Reference partial trace over B via an explicit index loop."""
    m = np.asarray(m, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for c in range(2):
            for b in range(n):
                out[a, c] += m[a * n + b, c * n + b]
    return out


def det_phi(phi, vec4):
    """det of the image matrix, via the explicit 2x2 determinant."""
    from qconcurrence import from_four_vector

    out = phi.apply(vec4)
    return float(np.linalg.det(from_four_vector(out)).real)
