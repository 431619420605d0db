"""GRU kernel backend selection.

The compiled Cython kernel is used when it imported cleanly; otherwise the
numpy reference implementation takes over. Both expose the same
gru_forward/gru_backward contract and produce numerically equivalent
results. Set CAUSALSENT_KERNEL=py or =cy to force a backend (cy raises if
the extension is unavailable).
"""

from __future__ import annotations

import os

from . import pyref

_choice = os.environ.get("CAUSALSENT_KERNEL", "auto")
_compiled = None
if _choice in ("auto", "cy"):
    try:
        from . import _gru_cy as _compiled
    except ImportError:
        if _choice == "cy":
            raise
elif _choice != "py":
    raise ValueError(f"CAUSALSENT_KERNEL must be auto, cy, or py; got {_choice!r}")

if _compiled is not None:
    BACKEND = "cython"
    gru_forward = _compiled.gru_forward
    gru_backward = _compiled.gru_backward
else:
    BACKEND = "python"
    gru_forward = pyref.gru_forward
    gru_backward = pyref.gru_backward


def available_backends() -> dict:
    """Importable kernel modules keyed by name (for parity tests/benchmarks)."""
    backends = {"python": pyref}
    if _compiled is not None:
        backends["cython"] = _compiled
    else:
        try:
            from . import _gru_cy
            backends["cython"] = _gru_cy
        except ImportError:
            pass
    return backends
