"""Seeded synthetic imagery for separation experiments and demos.

The three stock sources combine skewed noise with distinct spatial
structure (speckle, bright blobs, striped speckle), so their pixel
distributions are strongly non-Gaussian, mutually uncorrelated, and easy
to tell apart visually once separated.
"""

import numpy as np

from .io_ingest import Cube


def bis_sources(size=64, seed=7):
    """Three skewed gray-scale source images.

    Returns
    -------
    ndarray, shape (3, size, size)
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / (size - 1.0)
    speckle = rng.exponential(1.0, size=(size, size))
    blobs = np.zeros((size, size))
    for cx, cy, radius in ((0.25, 0.30, 0.12), (0.70, 0.65, 0.18), (0.45, 0.85, 0.08)):
        blobs += np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * radius ** 2))
    blobs += 0.05 * rng.standard_normal((size, size))
    stripes = (np.sin(12 * np.pi * (xx + yy)) > 0.6) * rng.exponential(1.0, size=(size, size))
    return np.stack([speckle, blobs, stripes])


def random_mixing_matrix(n, seed):
    """Uniform(0, 1) mixing matrix."""
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, n))


def mix_sources(sources, mixing):
    """Mix flattened source images: returns (n, pixels) data."""
    flat = np.stack([np.ravel(np.asarray(s, dtype=float)) for s in sources])
    return np.asarray(mixing, dtype=float) @ flat


def mixed_cube(size=64, source_seed=7, mix_seed=0):
    """Three-band cube of linearly mixed stock sources."""
    sources = bis_sources(size=size, seed=source_seed)
    mixing = random_mixing_matrix(3, mix_seed)
    mixed = mix_sources(sources, mixing)
    return Cube(
        samples=size,
        lines=size,
        bands=3,
        interleave="bsq",
        data=mixed.reshape(3, size, size),
    ), sources, mixing


def minmax_stretch(values):
    """Affinely map values to [0, 1]; constant input maps to zeros."""
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)
