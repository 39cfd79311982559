"""Backend selection for the support-counting kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Set ``MRAPRIORI_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import contextlib
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

if os.environ.get("MRAPRIORI_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
    _active = _pykernels
else:
    _active = _ckernels


def active():
    return _active


def available() -> list[str]:
    return sorted(BACKENDS)


def get(name: str):
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {available()}") from None


@contextlib.contextmanager
def use(name: str):
    """Temporarily switch the active backend (affects stores frozen inside the block)."""
    global _active
    prev = _active
    _active = get(name)
    try:
        yield _active
    finally:
        _active = prev
