"""Centering and whitening of multiband pixel data.

Data matrices are (bands, pixels): each column is one pixel spectrum.  The
whitening operator is built from the eigendecomposition of the (1/N)
covariance; directions whose eigenvalue falls below ``EIGENVALUE_RTOL``
times the largest are dropped, so rank-deficient data is truncated rather
than amplified.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateData, ShapeMismatch
from .linalg import sym_eig

#: Covariance eigenvalues below this fraction of the largest are dropped.
EIGENVALUE_RTOL = 1e-10


def as_data_matrix(x, name="data"):
    """Coerce to a finite (bands, pixels) float64 array."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-dimensional (bands x pixels)")
    if not np.all(np.isfinite(x)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return x


@dataclass
class WhiteningModel:
    """Fitted centering/whitening transform.

    Attributes
    ----------
    mean : ndarray, shape (bands,)
        Per-band sample mean.
    operator : ndarray, shape (bands, retained)
        Whitening operator ``F``; whitened data is ``F.T @ (X - mean)``.
    retained : int
        Number of variance directions kept.
    eigenvalues : ndarray, shape (retained,)
        Covariance eigenvalues of the kept directions, descending.
    """

    mean: np.ndarray
    operator: np.ndarray
    retained: int
    eigenvalues: np.ndarray


def fit_whitening(x):
    """Fit a :class:`WhiteningModel` on (bands, pixels) data.

    Uses the 1/N covariance normalization.  Raises
    :class:`~npsa.exceptions.DegenerateData` when fewer than two pixels are
    given or no direction carries variance above threshold.
    """
    x = as_data_matrix(x)
    bands, pixels = x.shape
    if pixels < 2:
        raise DegenerateData(f"need at least 2 pixels to whiten, got {pixels}")
    mean = x.mean(axis=1)
    centered = x - mean[:, None]
    cov = (centered @ centered.T) / pixels
    w, e = sym_eig(cov)
    top = float(w[0]) if w.size else 0.0
    if top <= 0.0:
        raise DegenerateData("data has no variance in any band")
    keep = w > EIGENVALUE_RTOL * top
    w, e = w[keep], e[:, keep]
    operator = e / np.sqrt(w)
    return WhiteningModel(mean=mean, operator=operator, retained=int(w.size), eigenvalues=w)


def apply_whitening(model, x):
    """Center and whiten (bands, pixels) data: ``R = F.T @ (X - mean)``.

    Output has shape (retained, pixels).
    """
    x = as_data_matrix(x)
    if x.shape[0] != model.mean.shape[0]:
        raise ShapeMismatch(
            f"data has {x.shape[0]} bands but model was fitted on {model.mean.shape[0]}"
        )
    return model.operator.T @ (x - model.mean[:, None])
