"""Kernel selection: compiled C++ term kernels when available, else pure Python.

Set ``ADJKIT_PURE=1`` in the environment to force the pure-Python kernels
(useful for benchmarking and for debugging the compiled twin).
"""

from __future__ import annotations

import os

from . import _termkernels_py as _py

if os.environ.get("ADJKIT_PURE", "") not in ("", "0"):
    _impl = _py
else:
    try:
        from . import _termkernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _py

IMPL = _impl.IMPL

# Largest |coefficient| the packed path may produce.  The compiled kernels
# accumulate in int64, so callers must certify a bound below this before
# packing; the pure kernels use Python ints and have no limit.
PACKED_COEFF_LIMIT = (1 << 62) if IMPL == "c" else None

# Primes above this cannot use the packed mod-p path (int64 overflow).
PACKED_PRIME_LIMIT = 1 << 31

add_terms = _impl.add_terms
neg_terms = _impl.neg_terms
scale_terms = _impl.scale_terms
mul_terms = _impl.mul_terms
fma_terms = _impl.fma_terms
sub_scaled_terms = _impl.sub_scaled_terms

add_terms_mod = _impl.add_terms_mod
neg_terms_mod = _impl.neg_terms_mod
scale_terms_mod = _impl.scale_terms_mod
mul_terms_mod = _impl.mul_terms_mod
fma_terms_mod = _impl.fma_terms_mod
sub_scaled_terms_mod = _impl.sub_scaled_terms_mod

det_laplace_terms = _impl.det_laplace_terms
det_laplace_terms_mod = _impl.det_laplace_terms_mod

packed_mul_terms = _impl.packed_mul_terms
packed_det_laplace = _impl.packed_det_laplace
