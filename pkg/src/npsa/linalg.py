"""Dense matrix and vector primitives.

Matrices and vectors are plain ``numpy.ndarray`` objects with float64
entries.  Whenever a matrix has to be flattened (see :mod:`npsa.tensor`),
column-major (Fortran) order is used: ``vec`` of a matrix stacks its
columns.  That convention is what makes the Kronecker identities

    vec(A B C) = (C^T kron A) vec(B)
    kron(A, B)^T = kron(A^T, B^T)
    kron(A, C) @ kron(B, D) = kron(A @ B, C @ D)

hold in the forms used throughout the package.
"""

import numpy as np

from .exceptions import NotSymmetric, NoConvergence, RankDeficient, ShapeMismatch

#: Relative threshold under which an eigen/singular value counts as zero.
RANK_RTOL = 1e-9

#: Condition-number cap for Gram-matrix inversion in projector construction.
GRAM_CONDITION_CAP = 1e12


def as_matrix(a, name="matrix"):
    """Coerce to a finite 2-d float64 array, raising ShapeMismatch otherwise."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return a


def as_vector(v, name="vector"):
    """Coerce to a finite 1-d float64 array, raising ShapeMismatch otherwise."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-dimensional, got ndim={v.ndim}")
    if not np.all(np.isfinite(v)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return v


def kron(a, b):
    """Kronecker product of two matrices.

    The result is (I*K) x (J*L) for ``a`` of shape (I, J) and ``b`` of shape
    (K, L); block (i, j) equals ``a[i, j] * b``.
    """
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def kron_power(a, p):
    """``p``-fold Kronecker product of ``a`` with itself (p >= 1)."""
    if p < 1:
        raise ShapeMismatch(f"kron power must be >= 1, got {p}")
    a = as_matrix(a, "a")
    out = a
    for _ in range(p - 1):
        out = np.kron(out, a)
    return out


def sym_eig(a):
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Symmetric matrix; symmetry is checked to ``1e-10 * max|a|``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in descending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors, one per column, matching ``w``.

    Raises
    ------
    NotSymmetric
        If ``a`` is not square or not symmetric within tolerance.
    NoConvergence
        If the underlying solver fails to converge.
    """
    a = as_matrix(a, "a")
    n, m = a.shape
    if n != m:
        raise NotSymmetric(f"matrix must be square, got {n}x{m}")
    scale = np.abs(a).max() if a.size else 0.0
    if scale and np.abs(a - a.T).max() > 1e-10 * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-10 * max|a|")
    try:
        w, v = np.linalg.eigh((a + a.T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"symmetric eigensolver failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def rank(a):
    """Numerical rank: the number of eigen/singular values above
    ``RANK_RTOL`` times the largest one.

    Symmetric inputs take the (cheaper) eigenvalue route; general inputs use
    singular values.
    """
    a = as_matrix(a, "a")
    if a.size == 0:
        return 0
    n, m = a.shape
    if n == m and np.abs(a - a.T).max() <= 1e-10 * max(np.abs(a).max(), 1e-300):
        s = np.abs(np.linalg.eigvalsh((a + a.T) / 2.0))
    else:
        s = np.linalg.svd(a, compute_uv=False)
    top = s.max()
    if top == 0.0:
        return 0
    return int(np.count_nonzero(s > RANK_RTOL * top))


def _gram_inverse(s):
    """Inverse of s^T s via eigendecomposition, guarded by the condition cap."""
    g = s.T @ s
    w, v = sym_eig(g)
    if w[-1] <= 0.0 or w[0] / w[-1] > GRAM_CONDITION_CAP:
        raise RankDeficient(
            "columns are numerically dependent (Gram condition number above "
            f"{GRAM_CONDITION_CAP:g})"
        )
    return (v / w) @ v.T


def proj_complement(s):
    """Orthogonal-complement projector ``I - S (S^T S)^{-1} S^T``.

    Accepts a matrix with full column rank (a 1-d array is treated as a
    single column).  The result ``P`` is symmetric, idempotent, and
    annihilates the columns of ``s``.

    Raises
    ------
    RankDeficient
        If the Gram matrix is too ill-conditioned to invert.
    """
    s = as_matrix(s, "s")
    n = s.shape[0]
    p = np.eye(n) - s @ _gram_inverse(s) @ s.T
    return (p + p.T) / 2.0
