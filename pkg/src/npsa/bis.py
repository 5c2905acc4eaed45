"""Blind image separation runs: mix, estimate, score."""

from dataclasses import dataclass

import numpy as np

from .estimator import PrincipalSkewnessAnalysis
from .exceptions import ShapeMismatch
from .metrics import SeparationScore, evaluate_separation


@dataclass
class BisResult:
    """Outcome of one separation run."""

    estimates: np.ndarray    # (n, pixels), matched order not applied
    demixing: np.ndarray     # total linear map, (n, n)
    p_matrix: np.ndarray     # demixing @ mixing
    score: SeparationScore
    estimator: PrincipalSkewnessAnalysis


def separate(mixed, deflation, tol=1e-8, max_iter=200, restarts=8, random_state=0):
    """Estimate sources from (n, pixels) mixed data.

    Returns the fitted estimator and the component images (rows).
    """
    est = PrincipalSkewnessAnalysis(
        n_components=mixed.shape[0],
        deflation=deflation,
        tol=tol,
        max_iter=max_iter,
        restarts=restarts,
        random_state=random_state,
    )
    components = est.fit_transform(np.asarray(mixed, dtype=float).T).T
    return est, components


def run_bis(sources, mixing, deflation, tol=1e-8, max_iter=200, restarts=8,
            random_state=0):
    """Mix known sources, separate them blindly, and score the result.

    Parameters
    ----------
    sources : ndarray, shape (n, pixels) or sequence of image arrays
    mixing : ndarray, shape (n, n)
    deflation : {"orthogonal", "nonorthogonal", "nonorthogonal_reference"}
    """
    flat = np.stack([np.ravel(np.asarray(s, dtype=float)) for s in sources])
    mixing = np.asarray(mixing, dtype=float)
    n = flat.shape[0]
    if mixing.shape != (n, n):
        raise ShapeMismatch(
            f"mixing matrix {mixing.shape} does not fit {n} sources"
        )
    mixed = mixing @ flat
    est, components = separate(
        mixed, deflation, tol=tol, max_iter=max_iter, restarts=restarts,
        random_state=random_state,
    )
    demixing = est.components_
    p_matrix = demixing @ mixing
    centered = flat - flat.mean(axis=1, keepdims=True)
    score = evaluate_separation(list(centered), list(components), p_matrix)
    return BisResult(
        estimates=components,
        demixing=demixing,
        p_matrix=p_matrix,
        score=score,
        estimator=est,
    )
