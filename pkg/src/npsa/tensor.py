"""Dense third-order tensors with frontal-slice layout.

A third-order tensor is a float64 ``numpy.ndarray`` of shape (L, L, L),
indexed ``t[i, j, k]`` where ``k`` selects the frontal slice ``t[:, :, k]``.
Vectorization stacks the column-major vectorization of each frontal slice:

    vec(t) = [vec(T_1); vec(T_2); ...; vec(T_L)]

which coincides with ``t.reshape(-1, order="F")``.  Under this layout

    vec(t x1 A x2 B x3 C) = kron(C, kron(B, A)) @ vec(t),

the third-order specialization of the Kronecker/vec identity for n-mode
products.
"""

import math
from itertools import permutations

import numpy as np

from .exceptions import NotUnit, ShapeMismatch
from .linalg import as_vector

#: Unit-norm slack accepted by directional evaluations.
UNIT_NORM_ATOL = 1e-8


def as_tensor3(t, name="tensor"):
    """Coerce to a finite cubic (L, L, L) float64 array."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 3 or len(set(t.shape)) != 1:
        raise ShapeMismatch(f"{name} must be cubic 3-dimensional, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return t


def n_mode_product(t, m, mode):
    """n-mode product of a third-order tensor with a matrix.

    Element formula: ``(t x_n M)[.., j, ..] = sum_i t[.., i, ..] * M[j, i]``
    with the sum over the ``mode``-th index.  The output size along ``mode``
    becomes ``M.shape[0]``; the other modes are untouched (so the result need
    not be cubic).
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 3:
        raise ShapeMismatch(f"tensor must be 3-dimensional, got ndim={t.ndim}")
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ShapeMismatch(f"matrix must be 2-dimensional, got ndim={m.ndim}")
    if mode not in (1, 2, 3):
        raise ShapeMismatch(f"mode must be 1, 2 or 3, got {mode}")
    if m.shape[1] != t.shape[mode - 1]:
        raise ShapeMismatch(
            f"matrix has {m.shape[1]} columns but tensor mode {mode} has size "
            f"{t.shape[mode - 1]}"
        )
    if mode == 1:
        return np.einsum("ijk,ai->ajk", t, m)
    if mode == 2:
        return np.einsum("ijk,aj->iak", t, m)
    return np.einsum("ijk,ak->ija", t, m)


def contract_13(t, u):
    """Contract modes 1 and 3 with the same vector: ``v[j] = sum_{i,k}
    t[i, j, k] u[i] u[k]``."""
    t = as_tensor3(t)
    u = as_vector(u, "u")
    if u.shape[0] != t.shape[0]:
        raise ShapeMismatch(
            f"vector length {u.shape[0]} does not match tensor dimension {t.shape[0]}"
        )
    return np.einsum("ijk,i,k->j", t, u, u)


def require_unit(u, name="u"):
    """Validate that ``u`` has unit Euclidean norm within UNIT_NORM_ATOL."""
    u = as_vector(u, name)
    nrm = float(np.linalg.norm(u))
    if abs(nrm - 1.0) > UNIT_NORM_ATOL:
        raise NotUnit(f"{name} must have unit norm, got {nrm!r}")
    return u


def skewness(t, u):
    """Directional value of the cubic form: ``t x1 u x2 u x3 u`` for unit ``u``.

    Equals ``u @ contract_13(t, u)``.
    """
    t = as_tensor3(t)
    u = require_unit(u)
    if u.shape[0] != t.shape[0]:
        raise ShapeMismatch(
            f"vector length {u.shape[0]} does not match tensor dimension {t.shape[0]}"
        )
    return float(u @ np.einsum("ijk,i,k->j", t, u, u))


def tensor_vec(t):
    """Vectorize a third-order tensor by stacking column-major frontal slices."""
    return as_tensor3(t).reshape(-1, order="F").copy()


def tensor_unvec(s, dim):
    """Inverse of :func:`tensor_vec` for a cubic tensor of the given dimension."""
    s = as_vector(s, "s")
    if s.shape[0] != dim ** 3:
        raise ShapeMismatch(f"expected {dim ** 3} entries for dim={dim}, got {s.shape[0]}")
    return s.reshape((dim, dim, dim), order="F").copy()


def outer3(r):
    """Rank-one third-order tensor ``r o r o r``."""
    r = as_vector(r, "r")
    return np.einsum("i,j,k->ijk", r, r, r)


def accumulate_outer3(acc, r, weight=1.0):
    """Return ``acc + weight * (r o r o r)`` without mutating ``acc``."""
    acc = as_tensor3(acc, "acc")
    r = as_vector(r, "r")
    if r.shape[0] != acc.shape[0]:
        raise ShapeMismatch(
            f"vector length {r.shape[0]} does not match tensor dimension {acc.shape[0]}"
        )
    return acc + float(weight) * np.einsum("i,j,k->ijk", r, r, r)


def is_supersymmetric(t, rtol=1e-10):
    """True when every index permutation leaves the tensor unchanged to
    ``rtol * max|t|``."""
    t = as_tensor3(t)
    tol = rtol * max(float(np.abs(t).max()), 1e-300)
    return all(
        np.abs(t - np.transpose(t, perm)).max() <= tol
        for perm in permutations(range(3))
    )


def symmetrize(t):
    """Average over the six index permutations."""
    t = as_tensor3(t)
    acc = np.zeros_like(t)
    for perm in permutations(range(3)):
        acc += np.transpose(t, perm)
    return acc / math.factorial(3)


def random_supersymmetric(dim, rng):
    """Random supersymmetric tensor with entries of order one."""
    return symmetrize(rng.standard_normal((dim, dim, dim)))
