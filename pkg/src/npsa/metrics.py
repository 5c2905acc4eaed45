"""Blind-separation quality metrics.

The global permutation/sign ambiguity of blind separation is resolved
before any per-source metric is reported: estimates are assigned to
sources by maximizing the total absolute correlation (exhaustively for up
to five sources, greedily beyond), and each matched estimate is flipped to
positive correlation.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .exceptions import DegenerateRowOrColumn, ShapeMismatch, ZeroVector
from .linalg import as_matrix, as_vector

EXHAUSTIVE_MATCH_LIMIT = 5


def isi(p):
    """Intersymbol-interference index of a square mixing-estimate product.

    Zero exactly when ``p`` is a scaled permutation matrix; invariant to
    row/column rescaling and permutations.  Rows or columns that are
    entirely zero are rejected.
    """
    p = as_matrix(p, "p")
    n, m = p.shape
    if n != m:
        raise ShapeMismatch(f"p must be square, got {n}x{m}")
    sq = np.abs(p) ** 2
    row_max = sq.max(axis=1)
    col_max = sq.max(axis=0)
    if np.any(row_max == 0.0) or np.any(col_max == 0.0):
        raise DegenerateRowOrColumn("p has an all-zero row or column")
    rows = (sq / row_max[:, None]).sum(axis=1) - 1.0
    cols = (sq / col_max[None, :]).sum(axis=0) - 1.0
    return float(rows.sum() + cols.sum())


def mse(image, estimate):
    """Mean square error ``(1/N) * ||image - estimate||^2``.

    Both inputs are expected to be normalized to unit Frobenius norm
    beforehand (see :func:`evaluate_separation`, which does so).
    """
    image = as_vector(np.ravel(image), "image")
    estimate = as_vector(np.ravel(estimate), "estimate")
    if image.shape != estimate.shape:
        raise ShapeMismatch(
            f"images differ in size: {image.shape[0]} vs {estimate.shape[0]}"
        )
    diff = image - estimate
    return float(diff @ diff) / image.shape[0]


def tmse(mses):
    """Total mean square error: the mean of the squared per-source MSEs."""
    mses = as_vector(np.asarray(mses, dtype=float), "mses")
    if mses.size == 0:
        raise ShapeMismatch("tmse needs at least one per-source value")
    return float(np.mean(mses ** 2))


def correlation(image, estimate):
    """Cosine similarity of two flattened images, in [-1, 1]."""
    image = as_vector(np.ravel(image), "image")
    estimate = as_vector(np.ravel(estimate), "estimate")
    if image.shape != estimate.shape:
        raise ShapeMismatch(
            f"images differ in size: {image.shape[0]} vs {estimate.shape[0]}"
        )
    ni = float(np.linalg.norm(image))
    ne = float(np.linalg.norm(estimate))
    if ni == 0.0 or ne == 0.0:
        raise ZeroVector("correlation is undefined for a zero image")
    return float(np.clip(image @ estimate / (ni * ne), -1.0, 1.0))


def match_components(sources, estimates):
    """Resolve the permutation/sign ambiguity between two component sets.

    Parameters
    ----------
    sources, estimates : sequences of equally sized arrays
        Flattened or 2-d component images; equal counts required.

    Returns
    -------
    perm : list of int
        ``estimates[perm[i]]`` is the match for ``sources[i]``.
    signs : list of float
        +1 or -1 per matched pair, making the matched correlation positive.

    The assignment maximizes the total absolute correlation, exhaustively
    for up to EXHAUSTIVE_MATCH_LIMIT sources and greedily above.
    """
    sources = [as_vector(np.ravel(s), "source") for s in sources]
    estimates = [as_vector(np.ravel(e), "estimate") for e in estimates]
    if len(sources) != len(estimates):
        raise ShapeMismatch(
            f"{len(sources)} sources vs {len(estimates)} estimates"
        )
    n = len(sources)
    corr = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            corr[i, j] = correlation(sources[i], estimates[j])
    if n <= EXHAUSTIVE_MATCH_LIMIT:
        best, best_perm = -np.inf, None
        for perm in permutations(range(n)):
            total = sum(abs(corr[i, perm[i]]) for i in range(n))
            if total > best:
                best, best_perm = total, perm
        perm = list(best_perm)
    else:
        perm = [-1] * n
        taken = set()
        for flat in np.argsort(-np.abs(corr), axis=None):
            i, j = divmod(int(flat), n)
            if perm[i] == -1 and j not in taken:
                perm[i] = j
                taken.add(j)
    signs = [1.0 if corr[i, perm[i]] >= 0.0 else -1.0 for i in range(n)]
    return perm, signs


@dataclass
class SeparationScore:
    """Bundle of separation metrics, reported after component matching."""

    isi: float
    tmse: float
    correlations: list
    per_source_mse: list


def evaluate_separation(sources, estimates, p_matrix):
    """Score a separation run against known sources.

    Sources and estimates are matched (permutation and sign), normalized to
    unit Frobenius norm, and compared; ``p_matrix`` is the product of the
    estimated demixing matrix with the true mixing matrix.
    """
    perm, signs = match_components(sources, estimates)
    per_mse, rhos = [], []
    for i, (j, sign) in enumerate(zip(perm, signs)):
        src = np.ravel(np.asarray(sources[i], dtype=float))
        src = src / np.linalg.norm(src)
        est = np.ravel(np.asarray(estimates[j], dtype=float))
        est = sign * est / np.linalg.norm(est)
        per_mse.append(mse(src, est))
        rhos.append(correlation(src, est))
    return SeparationScore(
        isi=isi(p_matrix),
        tmse=tmse(per_mse),
        correlations=rhos,
        per_source_mse=per_mse,
    )
