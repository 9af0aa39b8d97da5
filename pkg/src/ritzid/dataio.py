"""Data file formats: CSV and the raw little-endian ``RIDM`` binary.

Binary layout: ``b"RIDM"``, version (u16), N (u64), D (u64), then N*D
float64 values, row-major, all little-endian.
"""

import csv
import io
import struct
from pathlib import Path

import numpy as np

from .errors import DataFormatError

MAGIC = b"RIDM"
VERSION = 1
_HEADER = struct.Struct("<4sHQQ")
BINARY_SUFFIXES = (".bin", ".ridm")


def detect_format(path, fmt: str = "auto") -> str:
    if fmt != "auto":
        if fmt not in ("csv", "bin"):
            raise DataFormatError(f"unknown format {fmt!r}")
        return fmt
    return "bin" if Path(path).suffix.lower() in BINARY_SUFFIXES else "csv"


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def parse_csv(text: str) -> np.ndarray:
    """Rows are samples. A first row with any non-numeric cell is a header."""
    rows = []
    width = None
    header_skipped = False
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if width is None and not header_skipped and not all(_is_number(c) for c in cells):
            header_skipped = True
            width = len(cells)
            continue
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataFormatError(f"expected {width} columns, found {len(cells)}", row=lineno)
        vals = []
        for j, c in enumerate(cells, start=1):
            try:
                v = float(c)
            except ValueError:
                raise DataFormatError(f"not a number: {c!r}", row=lineno, col=j) from None
            if not np.isfinite(v):
                raise DataFormatError(f"non-finite value {c!r}", row=lineno, col=j)
            vals.append(v)
        rows.append(vals)
    if not rows:
        raise DataFormatError("no numeric rows found")
    return np.array(rows, dtype=np.float64)


def read_binary(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise DataFormatError("file shorter than the RIDM header")
    magic, version, n, d = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DataFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise DataFormatError(f"unsupported RIDM version {version}")
    expected = _HEADER.size + 8 * n * d
    if len(data) != expected:
        raise DataFormatError(f"expected {expected} bytes for {n}x{d}, found {len(data)}")
    arr = np.frombuffer(data, dtype="<f8", offset=_HEADER.size, count=n * d)
    return arr.reshape(n, d).astype(np.float64)


def write_binary(X, path) -> None:
    X = np.ascontiguousarray(X, dtype="<f8")
    n, d = X.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, n, d))
        fh.write(X.tobytes(order="C"))


def write_csv(X, path) -> None:
    np.savetxt(path, np.asarray(X, dtype=float), delimiter=",", fmt="%.17g")


def load(path, fmt: str = "auto") -> np.ndarray:
    fmt = detect_format(path, fmt)
    if fmt == "bin":
        return read_binary(Path(path).read_bytes())
    return parse_csv(Path(path).read_text())


def save(X, path, fmt: str = "auto") -> None:
    if detect_format(path, fmt) == "bin":
        write_binary(X, path)
    else:
        write_csv(X, path)
