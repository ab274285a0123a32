import numpy as np
import pytest

from qconcurrence import InvalidStateError, NotPositiveMapError
from qconcurrence.descriptors import (
    bipartite_from_dict,
    channel_from_dict,
    channel_to_dict,
    complex_pairs,
    load_json,
    state_from_dict,
)


def test_channel_raw_form():
    phi = channel_from_dict({"lambda": [[0.2, 0, 0], [0, 0.5, 0], [0, 0, 0.8]], "t": [0, 0, 0.1]})
    np.testing.assert_array_equal(phi.lam, np.diag([0.2, 0.5, 0.8]))
    np.testing.assert_array_equal(phi.t, [0, 0, 0.1])


def test_channel_canonical_form():
    phi = channel_from_dict(
        {"canonical": {"alpha": 1.0, "beta": 1.0, "omega": [1, 1, 1], "xi": [0, 0, 1]}}
    )
    np.testing.assert_allclose(phi.lam, np.eye(3), atol=1e-15)


@pytest.mark.parametrize(
    "named, lam_diag",
    [
        ({"type": "identity"}, [1, 1, 1]),
        ({"type": "unital", "lambda": [0.1, 0.2, 0.3]}, [0.1, 0.2, 0.3]),
        ({"type": "phase_damping", "beta": 0.6}, [0.6, 0.6, 1.0]),
        ({"type": "depolarizing", "lambda": 0.5}, [0.5, 0.5, 0.5]),
    ],
)
def test_channel_named_forms(named, lam_diag):
    phi = channel_from_dict({"named": named})
    np.testing.assert_allclose(np.diag(phi.lam), lam_diag, atol=1e-15)


def test_channel_named_axial_and_ad():
    ad = channel_from_dict({"named": {"type": "amplitude_damping", "alpha": 0.25}})
    np.testing.assert_allclose(np.diag(ad.lam), [0.5, 0.5, 0.25], atol=1e-15)
    ax = channel_from_dict({"named": {"type": "axial", "alpha": 0.9, "beta": 0.1, "gamma": 0.3}})
    np.testing.assert_allclose(ax.t, [0, 0, 0.6], atol=1e-15)


def test_channel_descriptor_errors():
    with pytest.raises(ValueError):
        channel_from_dict({"lambda": [[1, 0], [0, 1]], "t": [0, 0, 0]})
    with pytest.raises(ValueError):
        channel_from_dict({"named": {"type": "warp"}})
    with pytest.raises(ValueError):
        channel_from_dict({"named": {"type": "axial", "alpha": 0.5}})
    with pytest.raises(ValueError):
        channel_from_dict({"nonsense": 1})
    with pytest.raises(NotPositiveMapError):
        channel_from_dict({"named": {"type": "unital", "lambda": [2, 0, 0]}})


def test_channel_round_trip_through_dict():
    phi = channel_from_dict({"named": {"type": "axial", "alpha": 0.9, "beta": 0.1, "gamma": 0.3}})
    again = channel_from_dict(channel_to_dict(phi))
    np.testing.assert_array_equal(phi.lam, again.lam)
    np.testing.assert_array_equal(phi.t, again.t)


def test_state_bloch_form():
    v = state_from_dict({"bloch": [0.1, 0.2, 0.3]})
    assert v.x0 == 1.0
    np.testing.assert_array_equal(v.x, [0.1, 0.2, 0.3])


def test_state_matrix_form():
    # |+><+| as [re, im] pairs
    matrix = [
        [[0.5, 0.0], [0.5, 0.0]],
        [[0.5, 0.0], [0.5, 0.0]],
    ]
    v = state_from_dict({"matrix": matrix})
    np.testing.assert_allclose(v.as_array(), [1, 1, 0, 0], atol=1e-15)


def test_state_matrix_must_be_unit_trace_hermitian():
    with pytest.raises(InvalidStateError):
        state_from_dict({"matrix": [[[1.0, 0], [0, 0]], [[0, 0], [1.0, 0]]]})  # trace 2
    with pytest.raises(InvalidStateError):
        state_from_dict(
            {"matrix": [[[0.5, 0], [0.4, 0]], [[0.1, 0], [0.5, 0]]]}  # not Hermitian
        )
    with pytest.raises(ValueError):
        state_from_dict({"matrix": [[0.5, 0.5], [0.5, 0.5]]})  # entries not [re, im]


def test_bipartite_mixture_form():
    s = 1.0 / np.sqrt(2.0)
    state = bipartite_from_dict(
        {
            "dims": [2, 2],
            "mixture": [
                {"weight": 0.5, "ket": [[s, 0], [0, 0], [0, 0], [s, 0]]},
                {"weight": 0.5, "ket": [[1, 0], [0, 0], [0, 0], [0, 0]]},
            ],
        }
    )
    assert state.dims == (2, 2)
    assert state.rank() == 2


def test_bipartite_matrix_form_round_trip():
    rng = np.random.default_rng(0)
    k = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    k /= np.linalg.norm(k)
    m = np.outer(k, k.conj())
    state = bipartite_from_dict({"dims": [2, 3], "matrix": complex_pairs(m)})
    np.testing.assert_allclose(state.matrix, m, atol=1e-15)


def test_bipartite_descriptor_errors():
    with pytest.raises(ValueError):
        bipartite_from_dict({"mixture": []})  # missing dims
    with pytest.raises(ValueError):
        bipartite_from_dict({"dims": [3, 2], "mixture": [{"weight": 1.0, "ket": [[1, 0]] * 6}]})
    with pytest.raises(ValueError):
        bipartite_from_dict({"dims": [2, 2], "mixture": [{"weight": 0.5, "ket": [[1, 0]] * 4}]})


def test_load_json_raises_value_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ValueError):
        load_json(str(bad))
    with pytest.raises(ValueError):
        load_json(str(tmp_path / "missing.json"))
