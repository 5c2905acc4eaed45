"""Fixed-point search for tensor eigenpairs and the deflation strategies.

A pair ``(lam, u)`` with unit ``u`` solving ``t x1 u x3 u = lam * u`` is an
eigenpair of the supersymmetric tensor ``t``; ``lam`` equals the skewness of
the data projected on ``u``.  The search iterates

    u <- normalize(t x1 u x3 u)

and, once a direction is found, shrinks the working tensor so the next
search avoids it.  Two deflation families are provided:

* orthogonal ("psa"): project every mode onto the complement of ``u``.
  The remaining search space is the subsphere orthogonal to ``u``.
* nonorthogonal ("npsa_reference" / "npsa_improved"): remove only the
  component of the vectorized tensor along ``kron(u, u, u)``.  The
  reference form materializes the (L^3 x L^3) complement projector; the
  improved form evaluates the identical update as a single weighted
  rank-one subtraction in O(L^3) time and O(L^3) memory.

Both nonorthogonal forms produce the same tensor; the reference one exists
as an executable cross-check and is capped at small dimensions.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionTooLarge,
    ShapeMismatch,
    UnsupportedDimension,
    ZeroContraction,
)
from .linalg import kron_power, proj_complement, rank
from .tensor import as_tensor3, outer3, require_unit, tensor_unvec, tensor_vec

#: A converged pair must satisfy ||t x1 u x3 u - lam u|| below this bound.
EIGEN_RESIDUAL_TOL = 1e-3

#: Largest tensor dimension for which the reference deflation may
#: materialize its (L^3 x L^3) projector (~24 MB at the cap).
REFERENCE_DIM_CAP = 12

#: Largest n**p for which lemma-style projectors are materialized.
PROJECTOR_DIM_CAP = 4096

#: Residual bound for pairs reported by the brute-force search.
ORACLE_RESIDUAL_TOL = 1e-6

#: Angular separation below which two directions count as the same pair.
ORACLE_DEDUP_RADIANS = 0.01

STRATEGIES = ("psa", "npsa_reference", "npsa_improved")


@dataclass
class SearchConfig:
    """Knobs of the eigenpair search.

    ``epsilon`` bounds the update angle via ``1 - |<u_new, u_old>|``; the
    absolute value makes the criterion immune to the sign flips an
    odd-order fixed point can oscillate through.  ``restarts`` draws that
    many fresh random starts per component and keeps the pair with the
    largest skewness.
    """

    epsilon: float = 1e-4
    max_iters: int = 50
    restarts: int = 1
    rng_seed: int = 0
    strategy: str = "npsa_improved"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ShapeMismatch(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ShapeMismatch(f"max_iters must be >= 1, got {self.max_iters}")
        if self.restarts < 1:
            raise ShapeMismatch(f"restarts must be >= 1, got {self.restarts}")
        if self.strategy not in STRATEGIES:
            raise ShapeMismatch(
                f"strategy must be one of {STRATEGIES}, got {self.strategy!r}"
            )


@dataclass
class EigenPair:
    """One extracted direction with its convergence record.

    ``residual`` is the final update-angle measure ``1 - |<u_new, u_old>|``;
    ``eigen_residual`` is ``||t x1 u x3 u - lam u||``.  ``converged`` is set
    only when the update criterion was met within budget *and* the eigen
    residual is below EIGEN_RESIDUAL_TOL, so every converged pair is a
    verified eigenpair.  The sign of ``u`` is fixed so ``lam >= 0``.
    """

    u: np.ndarray
    lam: float
    iterations: int
    converged: bool
    residual: float
    eigen_residual: float = float("nan")


def _contract(t, u):
    return np.einsum("ijk,i,k->j", t, u, u)


def fixed_point(t, u0, cfg=None):
    """Run the fixed-point iteration from the unit start ``u0``.

    Stops when ``1 - |<u_new, u_old>| < cfg.epsilon`` or after
    ``cfg.max_iters`` steps.  Raises ZeroContraction if the contraction
    collapses to the zero vector.
    """
    cfg = cfg or SearchConfig()
    t = as_tensor3(t)
    u = require_unit(u0, "u0")
    if u.shape[0] != t.shape[0]:
        raise ShapeMismatch(
            f"start length {u.shape[0]} does not match tensor dimension {t.shape[0]}"
        )
    gap = np.inf
    iterations = 0
    eps_met = False
    for _ in range(cfg.max_iters):
        v = _contract(t, u)
        nrm = float(np.linalg.norm(v))
        if nrm < np.finfo(float).tiny:
            raise ZeroContraction(
                "tensor contraction vanished; the tensor is degenerate along "
                "the current direction"
            )
        v /= nrm
        gap = 1.0 - abs(float(v @ u))
        u = v
        iterations += 1
        if gap < cfg.epsilon:
            eps_met = True
            break
    lam = float(u @ _contract(t, u))
    if lam < 0.0:
        u, lam = -u, -lam
    eig_res = float(np.linalg.norm(_contract(t, u) - lam * u))
    return EigenPair(
        u=u,
        lam=lam,
        iterations=iterations,
        converged=eps_met and eig_res <= EIGEN_RESIDUAL_TOL,
        residual=float(gap),
        eigen_residual=eig_res,
    )


# --- deflation strategies ---------------------------------------------------

def deflate_psa(t, u):
    """Orthogonal deflation: project all three modes onto the complement of
    the unit direction ``u``.

    Afterwards any single-mode contraction of the result with ``u``
    vanishes.
    """
    t = as_tensor3(t)
    u = require_unit(u)
    p = np.eye(t.shape[0]) - np.outer(u, u)
    return np.einsum("ijk,ai,bj,ck->abc", t, p, p, p)


def deflate_npsa_reference(t, u):
    """Nonorthogonal deflation via the explicit (L^3 x L^3) projector.

    Vectorizes the tensor, removes its component along ``kron(u, u, u)``
    with the complement projector, and folds back.  Only intended for small
    dimensions; raises DimensionTooLarge above REFERENCE_DIM_CAP.
    """
    t = as_tensor3(t)
    u = require_unit(u)
    dim = t.shape[0]
    if dim > REFERENCE_DIM_CAP:
        raise DimensionTooLarge(
            f"reference deflation materializes {dim ** 3}x{dim ** 3}; "
            f"cap is dimension {REFERENCE_DIM_CAP}"
        )
    w = np.kron(np.kron(u, u), u)  # unit again: kron of unit vectors
    projector = np.eye(dim ** 3) - np.outer(w, w)
    return tensor_unvec(projector @ tensor_vec(t), dim)


def deflate_npsa_improved(t, u):
    """Nonorthogonal deflation as a rank-one update in O(L^3).

    Subtracting the three-mode product of ``t`` with ``u u^T`` collapses to
    ``t - (t x1 u x2 u x3 u) * (u o u o u)``, which is exactly the
    reference projection without ever forming an L^3 x L^3 matrix.
    """
    t = as_tensor3(t)
    u = require_unit(u)
    if u.shape[0] != t.shape[0]:
        raise ShapeMismatch(
            f"direction length {u.shape[0]} does not match tensor dimension {t.shape[0]}"
        )
    weight = float(np.einsum("ijk,i,j,k->", t, u, u, u))
    return t - weight * outer3(u)


_DEFLATORS = {
    "psa": deflate_psa,
    "npsa_reference": deflate_npsa_reference,
    "npsa_improved": deflate_npsa_improved,
}


def run(t, n_components, cfg=None):
    """Extract ``n_components`` eigenpairs sequentially.

    Each component starts from ``cfg.restarts`` fresh seeded random unit
    vectors, keeps the pair with the largest skewness, then deflates the
    working tensor according to ``cfg.strategy``.  Non-convergence is
    recorded on the pair rather than raised; the last iterate still drives
    the deflation.  The input tensor is never mutated.

    Returns
    -------
    pairs : list of EigenPair
    u_matrix : ndarray, shape (L, n_components)
        The extracted directions as columns, in extraction order.
    """
    cfg = cfg or SearchConfig()
    t = as_tensor3(t)
    dim = t.shape[0]
    if not 1 <= n_components <= dim:
        raise ShapeMismatch(
            f"n_components must be in [1, {dim}], got {n_components}"
        )
    deflate = _DEFLATORS[cfg.strategy]
    rng = np.random.default_rng(cfg.rng_seed)
    working = t.copy()
    pairs = []
    for _ in range(n_components):
        best = None
        for _ in range(cfg.restarts):
            u0 = rng.standard_normal(dim)
            u0 /= np.linalg.norm(u0)
            pair = fixed_point(working, u0, cfg)
            if best is None or pair.lam > best.lam:
                best = pair
        pairs.append(best)
        working = deflate(working, best.u)
    u_matrix = np.column_stack([p.u for p in pairs])
    return pairs, u_matrix


# --- brute-force enumeration (small dimensions only) -------------------------

def _hemisphere_grid(dim, grid):
    if dim == 2:
        theta = np.linspace(0.0, np.pi, grid, endpoint=False)
        return np.vstack([np.cos(theta), np.sin(theta)])
    # Fibonacci lattice on the upper hemisphere.
    k = np.arange(grid, dtype=float)
    z = (k + 0.5) / grid  # (0, 1]: upper half only; the lower is redundant
    phi = k * np.pi * (3.0 - np.sqrt(5.0))
    rho = np.sqrt(np.clip(1.0 - z**2, 0.0, None))
    return np.vstack([rho * np.cos(phi), rho * np.sin(phi), z])


def brute_force_eigenpairs(t, grid=720, polish_iters=400):
    """Enumerate eigenpairs of a 2- or 3-dimensional tensor.

    Seeds the unit hemisphere with ``grid`` directions, polishes every
    candidate with the fixed-point map simultaneously, keeps sign-fixed
    solutions whose eigen residual falls below ORACLE_RESIDUAL_TOL, and
    deduplicates directions closer than ORACLE_DEDUP_RADIANS.  Directions
    with vanishing contraction (skewness-free subspaces) are dropped, so
    only pairs with positive skewness are reported, sorted by decreasing
    skewness.
    """
    t = as_tensor3(t)
    dim = t.shape[0]
    if dim not in (2, 3):
        raise UnsupportedDimension(
            f"brute-force enumeration supports dimensions 2 and 3, got {dim}"
        )
    if grid < 360:
        raise ShapeMismatch(f"grid must be >= 360, got {grid}")
    candidates = _hemisphere_grid(dim, grid)
    alive = np.ones(candidates.shape[1], dtype=bool)
    for _ in range(polish_iters):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        block = candidates[:, idx]
        v = np.einsum("ijk,in,kn->jn", t, block, block)
        norms = np.linalg.norm(v, axis=0)
        ok = norms > np.finfo(float).tiny
        v = v / np.where(ok, norms, 1.0)
        candidates[:, idx[ok]] = v[:, ok]
        alive[idx[~ok]] = False
        if ok.all() and np.max(1.0 - np.abs(np.sum(v * block, axis=0))) < 1e-15:
            break
    lams = np.einsum("ijk,in,jn,kn->n", t, candidates, candidates, candidates)
    flip = np.where(lams < 0.0, -1.0, 1.0)
    candidates *= flip
    lams *= flip
    residuals = np.linalg.norm(
        np.einsum("ijk,in,kn->jn", t, candidates, candidates) - lams * candidates,
        axis=0,
    )
    scale = max(float(np.abs(t).max()), 1e-300)
    keep = alive & (residuals < ORACLE_RESIDUAL_TOL) & (lams > 1e-9 * scale)
    pairs = []
    cos_dedup = np.cos(ORACLE_DEDUP_RADIANS)
    for j in np.flatnonzero(keep):
        u = candidates[:, j]
        if any(abs(float(u @ p.u)) >= cos_dedup for p in pairs):
            continue
        pairs.append(
            EigenPair(
                u=u.copy(),
                lam=float(lams[j]),
                iterations=polish_iters,
                converged=True,
                residual=0.0,
                eigen_residual=float(residuals[j]),
            )
        )
    pairs.sort(key=lambda p: p.lam, reverse=True)
    return pairs


# --- subspace projectors for the containment property ------------------------

def lemma1_projectors(s, p):
    """Complement projectors comparing the two deflation geometries.

    For a full-column-rank matrix ``s`` (n x m) and power ``p``:

    * ``left  = kron_power(proj_complement(s), p)`` spans the p-fold product
      of the complement, dimension ``(n - m) ** p``;
    * ``right = proj_complement(kron_power(s, p))`` spans the complement of
      the p-fold product, dimension ``n ** p - m ** p``.

    ``right @ left == left`` always: the first space is contained in the
    second, and for ``p > 1`` it is strictly smaller.  Both matrices are
    ``n**p`` square, capped at PROJECTOR_DIM_CAP.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim == 1:
        s = s[:, None]
    n = s.shape[0]
    if p < 1:
        raise ShapeMismatch(f"power must be >= 1, got {p}")
    if n ** p > PROJECTOR_DIM_CAP:
        raise DimensionTooLarge(
            f"projectors would be {n ** p}x{n ** p}; cap is {PROJECTOR_DIM_CAP}"
        )
    left = kron_power(proj_complement(s), p)
    right = proj_complement(kron_power(s, p))
    return left, right


def subspace_dimensions(left, right):
    """Numerical ranks of the two projectors from :func:`lemma1_projectors`."""
    return rank(left), rank(right)
