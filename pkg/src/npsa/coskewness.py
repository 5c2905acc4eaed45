"""Coskewness tensor of whitened data and directional skewness.

The coskewness tensor of data ``R`` with columns ``r_1 ... r_N`` is the
(1/N)-weighted sum of the rank-one cubes ``r_n o r_n o r_n``; it is
supersymmetric by construction.  Accumulation is chunked over pixels so the
data never needs to be materialized twice, and chunks may be evaluated by a
thread pool; partial sums are combined in a fixed order so the result is
deterministic regardless of scheduling.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import EmptyData, ShapeMismatch
from .tensor import as_tensor3, require_unit
from .whitening import as_data_matrix

DEFAULT_CHUNK = 8192


def build_coskewness(r, chunk_size=DEFAULT_CHUNK, n_threads=1):
    """Third-moment tensor of (bands, pixels) data.

    Parameters
    ----------
    r : array_like, shape (L, N)
        Data whose columns are observations; meant to be centered/whitened
        output (not enforced).
    chunk_size : int
        Number of pixels accumulated per partial sum.
    n_threads : int
        Worker threads for chunk accumulation; 1 keeps everything inline.

    Returns
    -------
    ndarray, shape (L, L, L)
        ``(1/N) * einsum('in,jn,kn->ijk', r, r, r)``, supersymmetric.
    """
    r = as_data_matrix(r)
    bands, pixels = r.shape
    if pixels == 0:
        raise EmptyData("cannot build a coskewness tensor from zero pixels")
    chunk_size = max(1, int(chunk_size))
    chunks = [r[:, i:i + chunk_size] for i in range(0, pixels, chunk_size)]

    def partial(block):
        return np.einsum("in,jn,kn->ijk", block, block, block)

    if n_threads and n_threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=int(n_threads)) as pool:
            partials = list(pool.map(partial, chunks))
    else:
        partials = [partial(block) for block in chunks]
    # np.sum over the stacked partials uses pairwise reduction in a fixed
    # order, independent of how the chunks were scheduled.
    total = np.sum(np.stack(partials), axis=0) if len(partials) > 1 else partials[0]
    return total / pixels


def directional_skewness(s, u):
    """Skewness of the data behind ``s`` projected on the unit direction ``u``.

    When ``s`` was built from data ``R`` this equals the sample third moment
    ``mean((u @ R) ** 3)``.
    """
    s = as_tensor3(s)
    u = require_unit(u)
    if u.shape[0] != s.shape[0]:
        raise ShapeMismatch(
            f"direction length {u.shape[0]} does not match tensor dimension {s.shape[0]}"
        )
    return float(u @ np.einsum("ijk,i,k->j", s, u, u))
