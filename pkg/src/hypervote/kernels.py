"""Backend selection for the hot kernels.

The compiled extension (:mod:`hypervote._ckernels`) is preferred when it was
built; otherwise the numpy fallback is used. Set ``HYPERVOTE_BACKEND=python``
or ``HYPERVOTE_BACKEND=cython`` to force a choice. Both backends are
bit-for-bit interchangeable; the choice only affects speed.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None


def _select():
    requested = os.environ.get("HYPERVOTE_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        return _ckernels if _ckernels is not None else _pykernels
    if requested == "python":
        return _pykernels
    if requested == "cython":
        if _ckernels is None:
            raise ImportError(
                "HYPERVOTE_BACKEND=cython but the compiled extension is not "
                "available; reinstall with Cython present or unset the variable"
            )
        return _ckernels
    raise ValueError(f"unknown HYPERVOTE_BACKEND value: {requested!r}")


_impl = _select()

BACKEND = "cython" if _impl is not _pykernels else "python"

encode_keys = _impl.encode_keys
count_class_incidence = _impl.count_class_incidence
sum_weight_rows = _impl.sum_weight_rows


def available_backends() -> dict:
    """Name -> module map of importable backends (for tests and benchmarks)."""
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out
