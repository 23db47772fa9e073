"""Counting kernels: compiled extension when available, NumPy fallback otherwise.

The hot loops (n-gram counting, threshold-pruned phrase growth, exhaustive
enumeration, containment scans) exist twice with identical semantics:

* :mod:`elske.kernels._ckernels` — Cython/C++ implementation
* :mod:`elske.kernels._pure` — NumPy implementation, no compilation needed

The backend is chosen once at import.  Set ``ELSKE_KERNELS=pure`` (or
``compiled``) to force a backend; forcing ``compiled`` raises if the
extension is missing.  Both backends produce bit-identical phrase counts,
which the test suite asserts on randomized corpora.

Phrases are keyed by the little-endian int32 bytes of their token ids
(``array.tobytes()``), the cheapest hashable spelling of a token span.
"""

import os

from . import _pure

_forced = os.environ.get("ELSKE_KERNELS", "").strip().lower()

if _forced == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _pure
        BACKEND = "pure"

NgramKernel = _impl.NgramKernel
count_docs_containing = _impl.count_docs_containing

__all__ = ["BACKEND", "NgramKernel", "count_docs_containing"]
