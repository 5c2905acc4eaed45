"""File ingestion and run reports.

Supported formats:

* binary PGM (``P5``) images, 8- or 16-bit (16-bit rasters are MSB-first
  as the format prescribes), scaled to [0, 1] on read;
* raw little-endian cubes described by a plain-text ``key = value`` header
  (samples / lines / bands / interleave / data type), BSQ, BIL or BIP;
* JSON run reports with the transformation matrix duplicated as a CSV side
  file (RFC-4180 subset, ``.`` decimal separator).

Readers validate eagerly and raise typed errors; there are no partial
silent reads.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    IoError,
    MalformedHeader,
    MissingKey,
    ShapeMismatch,
    SizeMismatch,
    TruncatedData,
    UnsupportedDataType,
)


# --- PGM images -------------------------------------------------------------

@dataclass
class ImagePlane:
    """Single gray-scale image with pixels scaled to [0, 1]."""

    width: int
    height: int
    pixels: np.ndarray  # shape (height, width), float64 in [0, 1]


def _read_pgm_token(data, pos):
    """Next whitespace-delimited header token, skipping '#' comments."""
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise MalformedHeader("unterminated comment in header")
            pos = nl + 1
        elif c.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise MalformedHeader("header ended before all fields were read")
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def read_pgm(path):
    """Read a binary (``P5``) PGM file.

    Returns an :class:`ImagePlane` with values divided by the declared
    maximum.  ASCII (``P2``) files and other magics are rejected.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    magic, pos = _read_pgm_token(data, 0)
    if magic != b"P5":
        raise MalformedHeader(
            f"unsupported PGM flavor {magic!r}; only binary P5 is accepted"
        )
    fields = []
    for _ in range(3):
        token, pos = _read_pgm_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise MalformedHeader(f"non-numeric header field {token!r}") from None
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise MalformedHeader(f"maxval must be in [1, 65535], got {maxval}")
    pos += 1  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = width * height * dtype.itemsize
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise TruncatedData(
            f"raster has {len(raster)} bytes, header promises {need}"
        )
    values = np.frombuffer(raster, dtype=dtype).astype(float) / maxval
    return ImagePlane(width=width, height=height, pixels=values.reshape(height, width))


def write_pgm(path, image, maxval=255):
    """Write pixels in [0, 1] as a binary PGM; values are rounded to the
    nearest level and clipped."""
    if not 0 < maxval <= 65535:
        raise MalformedHeader(f"maxval must be in [1, 65535], got {maxval}")
    pixels = np.asarray(image.pixels if isinstance(image, ImagePlane) else image,
                        dtype=float)
    if pixels.ndim != 2:
        raise ShapeMismatch("image must be 2-dimensional")
    levels = np.clip(np.rint(pixels * maxval), 0, maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    height, width = pixels.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n{maxval}\n".encode("ascii"))
            fh.write(levels.astype(dtype).tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


# --- raw binary cubes ---------------------------------------------------------

_DATA_TYPES = {
    "1": np.dtype("<u1"),   # 8-bit unsigned
    "2": np.dtype("<i2"),   # 16-bit signed
    "12": np.dtype("<u2"),  # 16-bit unsigned
    "4": np.dtype("<f4"),   # 32-bit float
}

_INT_SCALE = {"1": 255.0, "2": 32767.0, "12": 65535.0}


@dataclass
class Cube:
    """Image cube in band-sequential memory layout.

    ``data`` has shape (bands, lines, samples).  Integer inputs are scaled
    by the type maximum at ingest (so unsigned data lands in [0, 1]);
    floating-point data is taken verbatim.
    """

    samples: int
    lines: int
    bands: int
    interleave: str
    data: np.ndarray


def _parse_cube_header(path):
    entries = {}
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith((";", "#")) or "=" not in line:
            continue
        key, _, value = line.partition("=")
        entries[key.strip().lower()] = value.strip()
    return entries


def read_cube(header_path, data_path):
    """Read a raw binary cube described by a text header.

    Required keys: ``samples``, ``lines``, ``bands``, ``interleave``,
    ``data type``.  An optional ``byte order`` must be 0 (little-endian).
    """
    entries = _parse_cube_header(header_path)
    for key in ("samples", "lines", "bands", "interleave", "data type"):
        if key not in entries:
            raise MissingKey(f"header is missing required key {key!r}")
    try:
        samples = int(entries["samples"])
        lines = int(entries["lines"])
        bands = int(entries["bands"])
    except ValueError as exc:
        raise MalformedHeader(f"non-integer dimension in header: {exc}") from None
    if min(samples, lines, bands) <= 0:
        raise MalformedHeader("dimensions must be positive")
    interleave = entries["interleave"].lower()
    if interleave not in ("bsq", "bil", "bip"):
        raise MalformedHeader(f"unknown interleave {entries['interleave']!r}")
    type_code = entries["data type"]
    if type_code not in _DATA_TYPES:
        raise UnsupportedDataType(
            f"data type {type_code!r} not supported (expect one of "
            f"{sorted(_DATA_TYPES)})"
        )
    if entries.get("byte order", "0").strip() != "0":
        raise UnsupportedDataType("only little-endian data (byte order = 0) is read")
    dtype = _DATA_TYPES[type_code]
    try:
        raw = np.fromfile(data_path, dtype=dtype)
    except OSError as exc:
        raise IoError(f"cannot read {data_path}: {exc}") from exc
    expected = samples * lines * bands
    if raw.size != expected:
        raise SizeMismatch(
            f"data file holds {raw.size} samples, header promises {expected}"
        )
    if interleave == "bsq":
        cube = raw.reshape(bands, lines, samples)
    elif interleave == "bil":
        cube = raw.reshape(lines, bands, samples).transpose(1, 0, 2)
    else:  # bip
        cube = raw.reshape(lines, samples, bands).transpose(2, 0, 1)
    cube = cube.astype(float)
    if type_code in _INT_SCALE:
        cube /= _INT_SCALE[type_code]
    return Cube(samples=samples, lines=lines, bands=bands,
                interleave=interleave, data=np.ascontiguousarray(cube))


def cube_to_matrix(cube):
    """Unfold a cube to a (bands, pixels) matrix, pixels in line-major order."""
    return cube.data.reshape(cube.bands, cube.lines * cube.samples)


def matrix_to_cube(matrix, lines, samples, interleave="bsq"):
    """Fold a (bands, pixels) matrix back into a cube (inverse of
    :func:`cube_to_matrix`)."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != lines * samples:
        raise ShapeMismatch(
            f"matrix with {matrix.shape} cannot fold into {lines}x{samples} pixels"
        )
    return Cube(samples=samples, lines=lines, bands=matrix.shape[0],
                interleave=interleave,
                data=matrix.reshape(matrix.shape[0], lines, samples).copy())


# --- run reports --------------------------------------------------------------

@dataclass
class SkewReport:
    """Serialized outcome of one extraction or separation run."""

    config: dict
    eigenpairs: list
    transformation: np.ndarray
    metrics: dict = field(default_factory=dict)
    whitening: dict = field(default_factory=dict)


def write_matrix_csv(path, matrix):
    """Write a matrix as CSV with full float64 precision (17 significant
    digits)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            for row in matrix:
                writer.writerow([format(v, ".17g") for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_matrix_csv(path):
    """Parse a matrix written by :func:`write_matrix_csv`."""
    rows = []
    try:
        with open(path, "r", newline="", encoding="ascii") as fh:
            for row in csv.reader(fh):
                if row:
                    rows.append([float(v) for v in row])
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise TruncatedData(f"{path} holds no rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise SizeMismatch(f"{path} has ragged rows")
    return np.array(rows)


def _pair_to_dict(pair):
    return {
        "u": [float(v) for v in pair.u],
        "lambda": float(pair.lam),
        "iterations": int(pair.iterations),
        "converged": bool(pair.converged),
        "residual": float(pair.residual),
        "eigen_residual": float(pair.eigen_residual),
    }


def write_report(path, report):
    """Write a :class:`SkewReport` as JSON plus a ``*_U.csv`` side file.

    JSON floats use Python's shortest round-trip decimal form (up to 17
    significant digits), so reading the report back reproduces the
    transformation matrix exactly.
    """
    path = str(path)
    payload = {
        "config": report.config,
        "eigenpairs": [_pair_to_dict(p) for p in report.eigenpairs],
        "transformation": [[float(v) for v in row] for row in np.atleast_2d(report.transformation)],
        "metrics": report.metrics,
        "whitening": report.whitening,
    }
    try:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    stem = path[:-5] if path.endswith(".json") else path
    write_matrix_csv(stem + "_U.csv", report.transformation)
    return path


def read_report(path):
    """Read back a JSON report written by :func:`write_report`."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
