"""Backend selection for the hot loops.

The compiled extension ``radcoulomb._kernels`` is used when it imports;
otherwise (or when ``RADCOULOMB_PURE_PYTHON`` is set to a non-empty value) the
numpy implementations in ``_kernels_py`` take over.  Both expose identical
signatures.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("RADCOULOMB_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

sine_sum = _impl.sine_sum
gagliardo_sum = _impl.gagliardo_sum
coulomb_prefix = _impl.coulomb_prefix

__all__ = ["BACKEND", "sine_sum", "gagliardo_sum", "coulomb_prefix"]
