"""Versioned binary checkpoint format for the classifier.

Layout (little-endian): magic "CSCK", version u32, d_in u32, d_h u32,
flags u32 (bit 0: contextual-concatenation inputs), a JSON provenance blob
(training config, seed, data/embedding paths, best epoch), then named
float32 parameter blocks. Writes are atomic (temp file + rename).
"""

from __future__ import annotations

import numpy as np

from .. import binio
from .params import BiGRUAttParams, from_named, named_arrays

MAGIC = b"CSCK"
VERSION = 1
FLAG_CONTEXTUAL = 1


def save_checkpoint(path, params: BiGRUAttParams, meta: dict) -> None:
    flags = FLAG_CONTEXTUAL if meta.get("contextual") else 0

    def _write(fh):
        fh.write(MAGIC)
        binio.write_u32(fh, VERSION)
        binio.write_u32(fh, params.input_size)
        binio.write_u32(fh, params.hidden_size)
        binio.write_u32(fh, flags)
        binio.write_json(fh, meta)
        blocks = named_arrays(params)
        binio.write_u32(fh, len(blocks))
        for name, arr in blocks:
            raw = name.encode("utf-8")
            binio.write_u16(fh, len(raw))
            fh.write(raw)
            binio.write_array(fh, np.asarray(arr, dtype=np.float32))

    binio.atomic_write(path, _write)


def load_checkpoint(path) -> tuple[BiGRUAttParams, dict]:
    with open(path, "rb") as fh:
        binio.check_magic(fh, MAGIC, "checkpoint")
        version = binio.read_u32(fh)
        if version != VERSION:
            raise binio.FormatError(f"unsupported checkpoint version {version}")
        d_in = binio.read_u32(fh)
        d_h = binio.read_u32(fh)
        flags = binio.read_u32(fh)
        meta = binio.read_json(fh)
        n_blocks = binio.read_u32(fh)
        arrays = {}
        for _ in range(n_blocks):
            name_len = binio.read_u16(fh)
            name = fh.read(name_len).decode("utf-8")
            arrays[name] = binio.read_array(fh, np.float32)
    params = from_named(arrays)
    if params.input_size != d_in or params.hidden_size != d_h:
        raise binio.FormatError(f"{path}: header dims ({d_in}, {d_h}) do not "
                                f"match parameter blocks")
    meta = dict(meta)
    meta["contextual"] = bool(flags & FLAG_CONTEXTUAL)
    return params, meta
