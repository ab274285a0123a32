import numpy as np
import pytest

from qconcurrence import (
    BipartiteState,
    RankTooHighError,
    brute_force_concurrence,
    concurrence,
    concurrence_2xn,
    eof_bound,
    eof_from_concurrence,
    from_four_vector,
    induced_map,
    is_completely_positive,
    minimize_pure_average,
    partial_trace_b,
    to_four_vector,
    wootters_concurrence,
)
from qconcurrence.bipartite import coefficient_four_vector
from qconcurrence.channels import AffineMap
from qconcurrence.oracle import OracleConfig

from util import loop_partial_trace_b, random_ket, random_rank2_state

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
KET00 = np.array([1.0, 0.0, 0.0, 0.0])


def bell_00_mixture(p):
    return BipartiteState.from_mixture((2, 2), [(p, BELL), (1.0 - p, KET00)])


# ---------------------------------------------------------------------------
# state construction and partial trace
# ---------------------------------------------------------------------------


def test_state_validation():
    with pytest.raises(ValueError):
        BipartiteState(np.eye(4), (2, 2))  # trace 4
    with pytest.raises(ValueError):
        BipartiteState(np.diag([1.5, -0.5, 0.0, 0.0]), (2, 2))  # not PSD
    m = np.eye(4) / 4.0
    m[0, 1] = 0.3  # not Hermitian
    with pytest.raises(ValueError):
        BipartiteState(m, (2, 2))
    with pytest.raises(ValueError):
        BipartiteState.from_mixture((2, 2), [(0.5, BELL), (0.6, KET00)])


def test_rank_cutoff_is_relative():
    s = BipartiteState.from_mixture(
        (2, 2), [(0.7, BELL), (0.3 - 1e-12, KET00), (1e-12, random_ket(np.random.default_rng(0), 4))]
    )
    assert s.rank() == 2


def test_partial_trace_matches_loop_reference():
    rng = np.random.default_rng(1)
    for n in (2, 3, 5):
        for _ in range(20):
            m = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
            np.testing.assert_allclose(
                partial_trace_b(m, n), loop_partial_trace_b(m, n), atol=1e-13
            )


def test_partial_trace_of_cross_projector():
    # Tr_B |Bell><00| = diag(1/sqrt(2), 0), Tr_B |Bell><Bell| = I/2
    np.testing.assert_allclose(
        partial_trace_b(np.outer(BELL, KET00.conj()), 2),
        np.diag([1.0 / np.sqrt(2.0), 0.0]),
        atol=1e-15,
    )
    np.testing.assert_allclose(
        partial_trace_b(np.outer(BELL, BELL.conj()), 2), np.eye(2) / 2.0, atol=1e-15
    )


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------


def test_induced_map_of_pure_bell_state():
    s = BipartiteState.from_mixture((2, 2), [(1.0, BELL)])
    im = induced_map(s)
    # the leading support vector is the Bell state (up to phase), so
    # D_11 = I/2
    np.testing.assert_allclose(im.d_blocks[0, 0], np.eye(2) / 2.0, atol=1e-12)


def test_induced_map_product_support_is_identity():
    rng = np.random.default_rng(2)
    phi_b = random_ket(rng, 3)
    k0 = np.kron([1.0, 0.0], phi_b)
    k1 = np.kron([0.0, 1.0], phi_b)
    s = BipartiteState.from_mixture((2, 3), [(0.7, k0), (0.3, k1)])
    im = induced_map(s)
    np.testing.assert_allclose(im.map.lam, np.eye(3), atol=1e-10)
    np.testing.assert_allclose(im.map.t, np.zeros(3), atol=1e-10)


def test_induced_blocks_trace_structure():
    rng = np.random.default_rng(3)
    for _ in range(50):
        im = induced_map(random_rank2_state(rng, n=rng.integers(2, 5)))
        for i in range(2):
            for j in range(2):
                expected = 1.0 if i == j else 0.0
                assert abs(np.trace(im.d_blocks[i, j]) - expected) <= 1e-12


def test_induced_map_is_completely_positive():
    rng = np.random.default_rng(4)
    for _ in range(50):
        im = induced_map(random_rank2_state(rng, n=rng.integers(2, 5)))
        assert is_completely_positive(im.map)


def test_induced_map_rejects_rank_three():
    rng = np.random.default_rng(5)
    s = BipartiteState.from_mixture(
        (2, 2), [(0.4, random_ket(rng, 4)), (0.3, random_ket(rng, 4)), (0.3, random_ket(rng, 4))]
    )
    with pytest.raises(RankTooHighError):
        induced_map(s)
    with pytest.raises(RankTooHighError):
        concurrence_2xn(s)


# ---------------------------------------------------------------------------
# concurrence of 2 x n states
# ---------------------------------------------------------------------------


def test_concurrence_of_maximally_entangled_pure_state():
    s = BipartiteState.from_mixture((2, 2), [(1.0, BELL)])
    assert concurrence_2xn(s) == pytest.approx(1.0, abs=1e-12)
    assert wootters_concurrence(s) == pytest.approx(1.0, abs=1e-10)


def test_concurrence_of_product_state_vanishes():
    rng = np.random.default_rng(6)
    ket = np.kron(random_ket(rng, 2), random_ket(rng, 3))
    s = BipartiteState.from_mixture((2, 3), [(1.0, ket)])
    assert concurrence_2xn(s) <= 1e-10


def test_pure_rank1_path_matches_marginal_determinant():
    rng = np.random.default_rng(7)
    for n in (2, 3, 4):
        ket = random_ket(rng, 2 * n)
        s = BipartiteState.from_mixture((2, n), [(1.0, ket)])
        marginal = partial_trace_b(np.outer(ket, ket.conj()), n)
        expected = 2.0 * np.sqrt(max(np.linalg.det(marginal).real, 0.0))
        assert concurrence_2xn(s) == pytest.approx(expected, abs=1e-12)


def test_bell_00_mixture_matches_wootters():
    s = bell_00_mixture(0.5)
    assert concurrence_2xn(s) == pytest.approx(wootters_concurrence(s), abs=1e-6)


def test_wootters_agreement_on_random_states():
    rng = np.random.default_rng(8)
    for _ in range(100):
        s = random_rank2_state(rng)
        assert abs(concurrence_2xn(s) - wootters_concurrence(s)) <= 1e-6


def test_concurrence_2xn_oracle_agreement_for_2x3():
    rng = np.random.default_rng(9)
    for _ in range(5):
        s = random_rank2_state(rng, n=3)
        im = induced_map(s)
        coeff = coefficient_four_vector(s, im.basis)
        value = concurrence_2xn(s)
        oracle = brute_force_concurrence(im.map, coeff, check_positive=False)
        assert abs(value - oracle) <= 1e-3


def test_basis_invariance_under_support_rotation():
    rng = np.random.default_rng(10)
    for _ in range(20):
        s = random_rank2_state(rng, n=3)
        baseline = concurrence_2xn(s)
        # rotate the support basis by a random unitary and redo the
        # reduction by hand
        im = induced_map(s)
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        u, _ = np.linalg.qr(z)
        basis = u @ im.basis
        d = np.empty((2, 2, 2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                d[i, j] = partial_trace_b(np.outer(basis[i], basis[j].conj()), 3)

        def act(coeff):
            return np.einsum("ij,ijab->ab", coeff, d)

        t = to_four_vector(act(np.eye(2) / 2.0)).x
        lam = np.empty((3, 3))
        for k in range(3):
            e = np.zeros(4)
            e[k + 1] = 1.0
            lam[:, k] = to_four_vector(act(from_four_vector(e))).x
        coeff = basis.conj() @ s.matrix @ basis.T
        coeff = coeff / np.trace(coeff).real
        rotated = concurrence(AffineMap(lam, t), to_four_vector(coeff), check_positive=False)
        assert abs(rotated - baseline) <= 1e-9


# ---------------------------------------------------------------------------
# Wootters oracle
# ---------------------------------------------------------------------------


def test_wootters_maximally_mixed_is_separable():
    s = BipartiteState(np.eye(4) / 4.0, (2, 2))
    assert wootters_concurrence(s) == 0.0


def test_wootters_werner_closed_form():
    for p in np.linspace(0.0, 1.0, 21):
        m = p * np.outer(BELL, BELL) + (1.0 - p) * np.eye(4) / 4.0
        s = BipartiteState(m, (2, 2))
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert wootters_concurrence(s) == pytest.approx(expected, abs=1e-10)


def test_wootters_requires_two_qubits():
    rng = np.random.default_rng(11)
    s = random_rank2_state(rng, n=3)
    with pytest.raises(ValueError):
        wootters_concurrence(s)


# ---------------------------------------------------------------------------
# entanglement of formation
# ---------------------------------------------------------------------------


def test_eof_from_concurrence_endpoints():
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1.0) == 1.0
    assert eof_from_concurrence(0.5) == pytest.approx(0.35457890266527003, abs=1e-12)


def test_eof_from_concurrence_monotone():
    grid = np.linspace(0.0, 1.0, 101)
    vals = [eof_from_concurrence(c) for c in grid]
    assert np.all(np.diff(vals) >= 0.0)


def test_eof_from_concurrence_range_check():
    with pytest.raises(ValueError):
        eof_from_concurrence(1.5)
    with pytest.raises(ValueError):
        eof_from_concurrence(-0.2)


def test_eof_bound_pure_entangled_state_is_marginal_entropy():
    rng = np.random.default_rng(12)
    for n in (2, 3):
        ket = random_ket(rng, 2 * n)
        s = BipartiteState.from_mixture((2, n), [(1.0, ket)])
        value, exact = eof_bound(s)
        assert exact
        marg = partial_trace_b(np.outer(ket, ket.conj()), n)
        evals = np.clip(np.linalg.eigvalsh(marg), 1e-300, 1.0)
        entropy = float(-(evals * np.log2(evals)).sum())
        assert value == pytest.approx(entropy, abs=1e-10)


def test_eof_bound_product_state():
    rng = np.random.default_rng(13)
    ket = np.kron(random_ket(rng, 2), random_ket(rng, 2))
    s = BipartiteState.from_mixture((2, 2), [(1.0, ket)])
    assert eof_bound(s) == (0.0, True)


def test_eof_bound_flat_case_matches_entropy_chord_oracle():
    # minimize the average marginal entropy over two-point decompositions
    # and compare with the concurrence route
    rng = np.random.default_rng(14)
    checked = 0
    while checked < 10:
        s = random_rank2_state(rng)
        value, exact = eof_bound(s)
        if not exact:
            continue
        checked += 1
        im = induced_map(s)
        coeff = coefficient_four_vector(s, im.basis)
        lam_t, t = im.map.lam.T, im.map.t

        def entropy_values(points):
            img = points @ lam_t + t
            c = np.sqrt(np.maximum(1.0 - np.sum(img * img, axis=1), 0.0))
            return np.array([eof_from_concurrence(ci) for ci in c])

        oracle = minimize_pure_average(
            im.map,
            coeff,
            pure_values=entropy_values,
            cfg=OracleConfig(grid_resolution=128, refine_iterations=120, restarts=4),
            check_positive=False,
        )
        assert abs(value - oracle) <= 2e-3


def test_eof_bound_two_qubit_closed_form():
    rng = np.random.default_rng(15)
    for _ in range(20):
        s = random_rank2_state(rng)
        value, exact = eof_bound(s)
        assert exact  # two-qubit roofs are flat
        assert value == pytest.approx(eof_from_concurrence(wootters_concurrence(s)), abs=1e-6)
