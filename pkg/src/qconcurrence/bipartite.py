"""Rank-2 states of 2 x n systems and their induced 1-qubit maps.

A rank-2 density operator ``rho = sum_ij c_ij |v_i><v_j|`` of a 2 x n
system determines a completely positive trace-preserving 1-qubit map
through the partial-trace blocks ``D_ij = Tr_B |v_i><v_j|``; its
concurrence equals the concurrence of that map evaluated at the 2x2
coefficient matrix ``c``.  The Wootters closed form for two qubits serves
as an independent oracle, and the entanglement of formation follows from
the concurrence through the binary entropy (exactly for flat roofs, as a
lower bound otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import AffineMap
from .exceptions import RankTooHighError
from .minkowski import FourVector, from_four_vector, to_four_vector
from .roof import RoofSolution, concurrence, solve_w0

#: Eigenvalues below this multiple of the largest eigenvalue do not count
#: towards the rank; keeps rank-2 inputs stable under file roundoff.
RANK_CUTOFF = 1e-9


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density operator of a 2 x n system, subsystem B fastest.

    The matrix is indexed by the product basis ``|a b> -> a*n + b``.
    Validated to be Hermitian, positive semidefinite (within 1e-10) and of
    unit trace (within 1e-12).
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        dims = (int(self.dims[0]), int(self.dims[1]))
        if dims[0] != 2 or dims[1] < 1:
            raise ValueError(f"dims must be (2, n) with n >= 1, got {dims}")
        d = dims[0] * dims[1]
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12 or abs(np.trace(m).imag) > 1e-12:
            raise ValueError(f"density matrix must have unit trace, got {np.trace(m)}")
        if np.linalg.eigvalsh(m)[0] < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_mixture(cls, dims, components) -> "BipartiteState":
        """Build ``sum_k weight_k |ket_k><ket_k|`` from (weight, ket) pairs.

        Kets are normalized; weights must be positive and sum to one
        within 1e-9.
        """
        d = int(dims[0]) * int(dims[1])
        weights = np.array([float(w) for w, _ in components])
        if np.any(weights <= 0.0):
            raise ValueError("mixture weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError(f"mixture weights must sum to 1, got {weights.sum()}")
        m = np.zeros((d, d), dtype=complex)
        for w, ket in components:
            k = np.asarray(ket, dtype=complex).reshape(d)
            k = k / np.linalg.norm(k)
            m += float(w) * np.outer(k, k.conj())
        return cls(m, (int(dims[0]), int(dims[1])))

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (descending) and matching eigenvector columns."""
        evals, evecs = np.linalg.eigh(self.matrix)
        order = np.argsort(evals)[::-1]
        return evals[order], evecs[:, order]

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        evals = np.linalg.eigvalsh(self.matrix)
        top = float(evals[-1])
        return int(np.sum(evals > cutoff * top))


def partial_trace_b(m: np.ndarray, n: int) -> np.ndarray:
    """Partial trace over the n-dimensional B factor of a (2n, 2n) matrix."""
    m = np.asarray(m, dtype=complex).reshape(2, n, 2, n)
    return np.trace(m, axis1=1, axis2=3)


@dataclass(frozen=True, eq=False)
class InducedMap:
    """Support basis, partial-trace blocks and affine form of the induced map.

    ``basis`` holds the two support kets as rows; ``d_blocks[i, j]`` is
    ``Tr_B |v_i><v_j|``.  The diagonal blocks have unit trace and the
    off-diagonal blocks are traceless, so the map is trace preserving; it
    is completely positive because it arises from a partial trace.
    """

    basis: np.ndarray
    d_blocks: np.ndarray
    map: AffineMap


def _support_basis(state: BipartiteState) -> np.ndarray:
    evals, evecs = state.eigensystem()
    if state.rank() > 2:
        raise RankTooHighError(
            f"state has rank {state.rank()} > 2; the reduction applies only to rank-2 states"
        )
    basis = evecs[:, :2].T.copy()
    # fix the phase so serialized bases are reproducible
    for row in basis:
        k = int(np.argmax(np.abs(row)))
        phase = row[k] / abs(row[k])
        row *= phase.conjugate()
    return basis


def induced_map(state: BipartiteState) -> InducedMap:
    """Reduce a rank-2 bipartite state to its induced 1-qubit map.

    The support basis consists of the eigenvectors of the two largest
    eigenvalues; the affine form is extracted by applying the map to the
    identity and the three Pauli directions.
    """
    n = state.dims[1]
    basis = _support_basis(state)
    d_blocks = np.empty((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            d_blocks[i, j] = partial_trace_b(np.outer(basis[i], basis[j].conj()), n)

    def act(coeff: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ijab->ab", coeff, d_blocks)

    t = to_four_vector(act(np.eye(2) / 2.0)).x
    lam = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(4)
        e[k + 1] = 1.0
        lam[:, k] = to_four_vector(act(from_four_vector(e))).x
    return InducedMap(basis=basis, d_blocks=d_blocks, map=AffineMap(lam, t))


def coefficient_four_vector(state: BipartiteState, basis: np.ndarray) -> FourVector:
    """The state's 2x2 coefficient matrix in the support basis, as a 4-vector.

    Renormalized to unit trace; support truncation at the rank cutoff can
    shave off weight of order 1e-9.
    """
    coeff = basis.conj() @ state.matrix @ basis.T
    coeff = coeff / np.trace(coeff).real
    return to_four_vector(coeff)


def concurrence_2xn(
    state: BipartiteState,
    *,
    solution: RoofSolution | None = None,
) -> float:
    """Concurrence of a rank <= 2 state of a 2 x n system.

    Pure (rank-1) states are evaluated directly as
    ``2 sqrt(det Tr_B rho)``; rank-2 states go through the induced map and
    the roof construction.  Induced maps are completely positive by
    construction, so the numerical positivity check is skipped.
    """
    if state.rank() <= 1:
        marginal = partial_trace_b(state.matrix, state.dims[1])
        return float(2.0 * np.sqrt(max(np.linalg.det(marginal).real, 0.0)))
    im = induced_map(state)
    x = coefficient_four_vector(state, im.basis)
    return concurrence(im.map, x, solution=solution, check_positive=False)


def wootters_concurrence(state: BipartiteState) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)`` (independent oracle).

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy x sy) conj(rho) (sy x sy)``, sorted descending.
    """
    if state.dims != (2, 2):
        raise ValueError(f"the closed form applies to 2 x 2 systems only, got dims {state.dims}")
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    yy = np.kron(sy, sy).real
    rho = state.matrix
    product = rho @ yy @ rho.conj() @ yy
    evals = np.sort(np.abs(np.linalg.eigvals(product).real))[::-1]
    roots = np.sqrt(evals)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation of a given concurrence.

    ``h((1 + sqrt(1 - c^2)) / 2)`` with ``h`` the binary entropy in bits;
    monotone increasing on [0, 1].
    """
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    x = (1.0 + np.sqrt(1.0 - c * c)) / 2.0
    return float(_binary_entropy(x))


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)


def eof_bound(state: BipartiteState) -> tuple[float, bool]:
    """Entanglement of formation from the concurrence, with an exactness flag.

    Returns ``(value, exact)``.  For pure states and flat roofs the
    optimal decompositions of the concurrence are optimal for the
    entanglement of formation too and the value is exact; for conical
    roofs it is a lower bound.
    """
    if state.rank() <= 1:
        return eof_from_concurrence(concurrence_2xn(state)), True
    im = induced_map(state)
    sol = solve_w0(im.map, check_positive=False)
    c = concurrence(im.map, coefficient_four_vector(state, im.basis), solution=sol)
    return eof_from_concurrence(c), bool(sol.flat)
