"""Scikit-learn style estimator wrapping the full extraction pipeline.

``PrincipalSkewnessAnalysis`` follows the usual transformer contract:
``fit`` learns a centering/whitening transform, builds the coskewness
tensor and extracts the requested number of skewness directions;
``transform`` projects new samples onto them.  Samples are rows, features
(bands) are columns, as everywhere in scikit-learn; internally the data is
transposed to the (bands, pixels) layout used by the numeric modules.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .coskewness import build_coskewness
from .eigensearch import SearchConfig, run
from .whitening import apply_whitening, fit_whitening

_DEFLATION_TO_STRATEGY = {
    "orthogonal": "psa",
    "nonorthogonal": "npsa_improved",
    "nonorthogonal_reference": "npsa_reference",
}


class PrincipalSkewnessAnalysis(TransformerMixin, BaseEstimator):
    """Sequential extraction of maximally skewed projection directions.

    Parameters
    ----------
    n_components : int or None
        Directions to extract; defaults to the retained whitened dimension.
    deflation : {"nonorthogonal", "orthogonal", "nonorthogonal_reference"}
        How the working tensor is shrunk after each direction.  The
        orthogonal rule confines later directions to the complement of the
        earlier ones; the nonorthogonal rules only remove the found
        rank-one component, searching a strictly larger space.
    tol : float
        Fixed-point stop tolerance on ``1 - |<u_new, u_old>|``.
    max_iter : int
        Iteration cap per direction.
    restarts : int
        Random restarts per direction; the best (largest skewness) wins.
    random_state : int
        Seed for the restart draws.
    chunk_size, n_threads : int
        Pixel chunking for the third-moment accumulation.

    Attributes
    ----------
    mean_ : ndarray, shape (n_features,)
        Per-feature training mean.
    whitening_ : ndarray, shape (n_features, n_retained_)
        Whitening operator ``F``.
    eigenvalues_ : ndarray, shape (n_retained_,)
        Covariance eigenvalues of the retained directions.
    transformation_ : ndarray, shape (n_retained_, n_components_)
        Extracted directions ``U`` in whitened coordinates.
    components_ : ndarray, shape (n_components_, n_features)
        Total linear map: ``transform(X) = (X - mean_) @ components_.T``.
    skewness_ : ndarray, shape (n_components_,)
        Skewness value of each extracted direction (non-negative).
    n_iter_ : ndarray of int
        Fixed-point iterations spent on each direction.
    converged_ : ndarray of bool
        Per-direction convergence records.
    pairs_ : list of EigenPair
        Full per-direction records, in extraction order.
    """

    def __init__(
        self,
        n_components=None,
        deflation="nonorthogonal",
        tol=1e-4,
        max_iter=50,
        restarts=1,
        random_state=0,
        chunk_size=8192,
        n_threads=1,
    ):
        self.n_components = n_components
        self.deflation = deflation
        self.tol = tol
        self.max_iter = max_iter
        self.restarts = restarts
        self.random_state = random_state
        self.chunk_size = chunk_size
        self.n_threads = n_threads

    def _search_config(self):
        if self.deflation not in _DEFLATION_TO_STRATEGY:
            raise ValueError(
                f"deflation must be one of {sorted(_DEFLATION_TO_STRATEGY)}, "
                f"got {self.deflation!r}"
            )
        return SearchConfig(
            epsilon=self.tol,
            max_iters=self.max_iter,
            restarts=self.restarts,
            rng_seed=0 if self.random_state is None else int(self.random_state),
            strategy=_DEFLATION_TO_STRATEGY[self.deflation],
        )

    def fit(self, X, y=None):
        """Learn whitening and skewness directions from samples-by-features X."""
        cfg = self._search_config()
        X = validate_data(self, X, dtype=np.float64, ensure_min_samples=2)
        data = X.T  # (bands, pixels)
        model = fit_whitening(data)
        whitened = apply_whitening(model, data)
        p = model.retained if self.n_components is None else int(self.n_components)
        if not 1 <= p <= model.retained:
            raise ValueError(
                f"n_components must be in [1, {model.retained}] for this data, "
                f"got {self.n_components}"
            )
        tensor = build_coskewness(
            whitened, chunk_size=self.chunk_size, n_threads=self.n_threads
        )
        pairs, u_matrix = run(tensor, p, cfg)
        self.mean_ = model.mean
        self.whitening_ = model.operator
        self.eigenvalues_ = model.eigenvalues
        self.n_retained_ = model.retained
        self.transformation_ = u_matrix
        self.components_ = (model.operator @ u_matrix).T
        self.skewness_ = np.array([pair.lam for pair in pairs])
        self.n_iter_ = np.array([pair.iterations for pair in pairs])
        self.converged_ = np.array([pair.converged for pair in pairs])
        self.pairs_ = pairs
        self.n_components_ = p
        return self

    def transform(self, X):
        """Project samples-by-features X onto the extracted directions."""
        check_is_fitted(self, "components_")
        X = validate_data(self, X, dtype=np.float64, reset=False)
        return (X - self.mean_) @ self.components_.T
