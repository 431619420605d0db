"""Low-level helpers for the versioned little-endian binary file formats.

Every on-disk binary format in this package (word vectors, contextual
vectors, model checkpoints, baseline bundles, tf-idf models) is built from
the primitives here so the byte layout stays consistent: fixed-width
little-endian integers, length-prefixed UTF-8 strings, raw array blocks,
and an atomic write-temp-then-rename save path.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from typing import BinaryIO

import numpy as np


class FormatError(ValueError):
    """Raised when a binary file does not match its declared format."""


def write_u8(fh: BinaryIO, value: int) -> None:
    fh.write(struct.pack("<B", value))


def write_u16(fh: BinaryIO, value: int) -> None:
    fh.write(struct.pack("<H", value))


def write_u32(fh: BinaryIO, value: int) -> None:
    fh.write(struct.pack("<I", value))


def write_u64(fh: BinaryIO, value: int) -> None:
    fh.write(struct.pack("<Q", value))


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated file: wanted {n} bytes, got {len(data)}")
    return data


def read_u8(fh: BinaryIO) -> int:
    return struct.unpack("<B", _read_exact(fh, 1))[0]


def read_u16(fh: BinaryIO) -> int:
    return struct.unpack("<H", _read_exact(fh, 2))[0]


def read_u32(fh: BinaryIO) -> int:
    return struct.unpack("<I", _read_exact(fh, 4))[0]


def read_u64(fh: BinaryIO) -> int:
    return struct.unpack("<Q", _read_exact(fh, 8))[0]


def write_str(fh: BinaryIO, text: str) -> None:
    raw = text.encode("utf-8")
    write_u32(fh, len(raw))
    fh.write(raw)


def read_str(fh: BinaryIO) -> str:
    n = read_u32(fh)
    return _read_exact(fh, n).decode("utf-8")


def write_json(fh: BinaryIO, obj) -> None:
    write_str(fh, json.dumps(obj, sort_keys=True, ensure_ascii=False))


def read_json(fh: BinaryIO):
    return json.loads(read_str(fh))


def write_array(fh: BinaryIO, arr: np.ndarray) -> None:
    """Write shape-prefixed raw array data as little-endian."""
    arr = np.ascontiguousarray(arr)
    write_u8(fh, arr.ndim)
    for dim in arr.shape:
        write_u32(fh, dim)
    fh.write(arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes())


def read_array(fh: BinaryIO, dtype) -> np.ndarray:
    dtype = np.dtype(dtype).newbyteorder("<")
    ndim = read_u8(fh)
    shape = tuple(read_u32(fh) for _ in range(ndim))
    count = int(np.prod(shape)) if shape else 1
    raw = _read_exact(fh, count * dtype.itemsize)
    arr = np.frombuffer(raw, dtype=dtype).reshape(shape)
    return arr.astype(dtype.newbyteorder("="))


def check_magic(fh: BinaryIO, magic: bytes, what: str) -> None:
    got = fh.read(len(magic))
    if got != magic:
        raise FormatError(f"not a {what} file (bad magic {got!r})")


def atomic_write(path, write_fn) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
