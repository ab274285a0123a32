"""Scikit-learn style front end: fit a channel once, evaluate many states."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .minkowski import TAU_CAUSAL
from .roof import TOL_PSD, Decomposition, optimal_decomposition, solve_w0
from .validation import check_bloch_vectors, coerce_channel, state_to_vec4


class ChannelConcurrence(BaseEstimator):
    """Concurrence of a fixed stochastic 1-qubit map over batches of states.

    ``fit`` solves the channel's convex roof once; ``predict`` then
    evaluates the concurrence at Bloch vectors with a single quadratic
    form, which makes bulk evaluation cheap and thread safe.

    Parameters
    ----------
    tol_psd : float
        PSD tolerance of the roof solver, relative to the Frobenius norm
        of the channel's quadratic form.
    tol_causal : float
        Causal-classification tolerance for kernel vectors.
    check_positive : bool
        Verify the positivity precondition during ``fit``.

    Attributes
    ----------
    map_ : AffineMap
        The fitted channel in affine form.
    solution_ : RoofSolution
        Roof data (threshold parameter, kernel, flatness, Q matrix).
    w0_ : float
    flat_ : bool
    psd_interval_ : tuple of float
    n_ : FourVector
        Representative kernel vector (flat direction or apex point).

    Examples
    --------
    >>> from qconcurrence import ChannelConcurrence
    >>> est = ChannelConcurrence().fit({"named": {"type": "phase_damping", "beta": 0.6}})
    >>> est.predict([[0.6, 0.0, 0.2]])
    array([0.48])
    """

    def __init__(
        self,
        tol_psd: float = TOL_PSD,
        tol_causal: float = TAU_CAUSAL,
        check_positive: bool = True,
    ):
        self.tol_psd = tol_psd
        self.tol_causal = tol_causal
        self.check_positive = check_positive

    def fit(self, X, y=None):
        """Solve the roof of a channel.

        ``X`` may be an :class:`~qconcurrence.channels.AffineMap`,
        :class:`~qconcurrence.channels.CanonicalParams`, a ``(lam, t)``
        pair, or a JSON-style channel descriptor dict.  ``y`` is ignored.
        """
        phi = coerce_channel(X)
        solution = solve_w0(
            phi,
            tol_psd=self.tol_psd,
            tau_causal=self.tol_causal,
            check_positive=self.check_positive,
        )
        self.map_ = phi
        self.solution_ = solution
        self.w0_ = solution.w0
        self.flat_ = solution.flat
        self.psd_interval_ = solution.psd_interval
        self.n_ = solution.n
        return self

    def _require_fitted(self):
        if not hasattr(self, "solution_"):
            raise NotFittedError(
                "this ChannelConcurrence instance is not fitted yet; call fit first"
            )

    def predict(self, X) -> np.ndarray:
        """Concurrence at each Bloch vector row of ``X`` (shape (n, 3) or (3,))."""
        self._require_fitted()
        bloch = check_bloch_vectors(X)
        vecs = np.hstack([np.ones((len(bloch), 1)), bloch])
        q = np.einsum("ni,ij,nj->n", vecs, self.solution_.q_matrix, vecs)
        return np.sqrt(np.clip(q, 0.0, None))

    def transform(self, X) -> np.ndarray:
        """Column-vector form of :meth:`predict`, for pipeline composition."""
        return self.predict(X)[:, None]

    def decompose(self, state) -> Decomposition:
        """Two-component optimal decomposition of a single state."""
        self._require_fitted()
        return optimal_decomposition(
            self.map_, state_to_vec4(state), solution=self.solution_
        )
