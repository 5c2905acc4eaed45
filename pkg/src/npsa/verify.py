"""Randomized property suites, runnable from the CLI.

Each suite returns ``(passed, failed, failures)`` where ``failures`` lists
human-readable descriptions of any violated check.  The suites cover the
algebra the rest of the package relies on:

* ``kron``: transpose, mixed-product and rank laws of the Kronecker
  product, the vec identity for matrix triples, and the Kronecker/vec
  identity for tensor mode products;
* ``equivalence``: reference and improved nonorthogonal deflation produce
  the same tensor, elementwise;
* ``lemma1``: the complement-of-power projector fixes the power-of-
  complement projector, with ranks ``(n - m)^p`` and ``n^p - m^p``.
"""

import numpy as np

from .eigensearch import (
    PROJECTOR_DIM_CAP,
    deflate_npsa_improved,
    deflate_npsa_reference,
    lemma1_projectors,
    subspace_dimensions,
)
from .linalg import kron, rank
from .tensor import n_mode_product, random_supersymmetric, tensor_vec

EQUIVALENCE_TOL = 1e-12
FIXED_POINT_TOL = 1e-10


def check_kron_properties(trials=100, seed=0):
    """Kronecker-product and vectorization laws on random shapes."""
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(trials):
        i, j, k, l = rng.integers(2, 5, size=4)
        a = rng.standard_normal((i, j))
        b = rng.standard_normal((k, l))
        if np.abs(kron(a, b).T - kron(a.T, b.T)).max() > 1e-12:
            failures.append(f"trial {trial}: transpose law failed")
        c = rng.standard_normal((i, j))
        d = rng.standard_normal((j, k))
        e = rng.standard_normal((l, i))
        f = rng.standard_normal((i, j))
        lhs = kron(c, e) @ kron(d, f)
        rhs = kron(c @ d, e @ f)
        if np.abs(lhs - rhs).max() > 1e-10:
            failures.append(f"trial {trial}: mixed-product law failed")
        g = rng.standard_normal((3, 2))
        h = rng.standard_normal((2, 2))
        if rank(kron(g, h)) != rank(g) * rank(h):
            failures.append(f"trial {trial}: rank multiplicativity failed")
        m1 = rng.standard_normal((i, j))
        m2 = rng.standard_normal((j, k))
        m3 = rng.standard_normal((k, l))
        lhs = (m1 @ m2 @ m3).reshape(-1, order="F")
        rhs = kron(m3.T, m1) @ m2.reshape(-1, order="F")
        if np.abs(lhs - rhs).max() > 1e-10:
            failures.append(f"trial {trial}: vec(ABC) identity failed")
        dim = int(rng.integers(2, 5))
        t = rng.standard_normal((dim, dim, dim))
        ma = rng.standard_normal((dim, dim))
        mb = rng.standard_normal((dim, dim))
        mc = rng.standard_normal((dim, dim))
        product = n_mode_product(n_mode_product(n_mode_product(t, ma, 1), mb, 2), mc, 3)
        lhs = product.reshape(-1, order="F")
        rhs = kron(mc, kron(mb, ma)) @ tensor_vec(t)
        if np.abs(lhs - rhs).max() > 1e-10:
            failures.append(f"trial {trial}: tensor mode/vec identity failed")
    passed = trials - len({f.split(":")[0] for f in failures})
    return passed, trials - passed, failures


def check_equivalence(trials=50, seed=0, dims=(2, 3, 4, 5, 6)):
    """Reference vs improved nonorthogonal deflation, elementwise."""
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(trials):
        dim = int(rng.choice(dims))
        t = random_supersymmetric(dim, rng)
        u = rng.standard_normal(dim)
        u /= np.linalg.norm(u)
        diff = np.abs(
            deflate_npsa_reference(t, u) - deflate_npsa_improved(t, u)
        ).max()
        if diff > EQUIVALENCE_TOL:
            failures.append(f"trial {trial}: dim {dim} disagrees by {diff:.3e}")
    return trials - len(failures), len(failures), failures


def _lemma1_cases(trials, seed, heavy_cases):
    rng = np.random.default_rng(seed)
    combos = [
        (n, p)
        for n in range(2, 9)
        for p in range(1, 13)
        if n ** p <= 729
    ]
    light = max(0, trials - len(heavy_cases))
    cases = []
    for _ in range(light):
        n, p = combos[int(rng.integers(len(combos)))]
        m = int(rng.integers(1, n))
        cases.append((n, m, p))
    cases.extend(heavy_cases)
    return rng, cases


def check_lemma1(trials=100, seed=0, heavy_cases=((2, 1, 11), (7, 3, 4), (8, 3, 4))):
    """Containment of the deflation search spaces, via projector algebra.

    Samples random subspaces (orthonormal bases of random Gaussian
    matrices) with ``n <= 8`` and ``n ** p`` up to PROJECTOR_DIM_CAP; the
    listed heavy cases exercise the cap.
    """
    rng, cases = _lemma1_cases(trials, seed, list(heavy_cases))
    failures = []
    for case_no, (n, m, p) in enumerate(cases):
        if n ** p > PROJECTOR_DIM_CAP:
            failures.append(f"case {case_no}: {n}**{p} exceeds the cap")
            continue
        s = np.linalg.qr(rng.standard_normal((n, m)))[0]
        left, right = lemma1_projectors(s, p)
        if np.abs(right @ left - left).max() > FIXED_POINT_TOL:
            failures.append(f"case {case_no}: right@left != left for n={n} m={m} p={p}")
        rank_left, rank_right = subspace_dimensions(left, right)
        if rank_left != (n - m) ** p:
            failures.append(
                f"case {case_no}: rank(left)={rank_left}, expect {(n - m) ** p}"
            )
        if rank_right != n ** p - m ** p:
            failures.append(
                f"case {case_no}: rank(right)={rank_right}, expect {n ** p - m ** p}"
            )
        if (n - m) ** p > n ** p - m ** p:
            failures.append(f"case {case_no}: dimension inequality violated")
    failed_cases = len({f.split(":")[0] for f in failures})
    return len(cases) - failed_cases, failed_cases, failures


SUITES = {
    "kron": check_kron_properties,
    "equivalence": check_equivalence,
    "lemma1": check_lemma1,
}
