"""Pure numpy versions of the hot loops; same signatures as the compiled module."""
from __future__ import annotations

import numpy as np

_CHUNK = 1 << 21  # elements per sin() block


def sine_sum(rhos: np.ndarray, r: np.ndarray, wg: np.ndarray) -> np.ndarray:
    """``out[j] = sum_i wg[i] * sin(rhos[j] * r[i])``."""
    rhos = np.ascontiguousarray(rhos, dtype=float)
    r = np.ascontiguousarray(r, dtype=float)
    wg = np.ascontiguousarray(wg, dtype=float)
    out = np.empty(len(rhos))
    step = max(1, _CHUNK // max(1, len(r)))
    for j0 in range(0, len(rhos), step):
        block = rhos[j0 : j0 + step]
        out[j0 : j0 + step] = np.sin(np.multiply.outer(block, r)) @ wg
    return out


def gagliardo_sum(
    r: np.ndarray, h: np.ndarray, w: np.ndarray, ur: np.ndarray, uh: np.ndarray, s: float
) -> float:
    """``sum w r (r-h) (ur-uh)^2 (h^(-1-2s) - (2r-h)^(-1-2s))`` with ``uh = u(r-h)``."""
    e = -1.0 - 2.0 * s
    du = ur - uh
    kern = h**e - (2.0 * r - h) ** e
    return float(np.sum(w * r * (r - h) * du * du * kern))


def coulomb_prefix(
    x: np.ndarray, w: np.ndarray, f: np.ndarray, M: np.ndarray, half: np.ndarray
) -> float:
    """``sum_i w_i x_i f_i A(x_i)`` where ``A(r) = int_0^r t^2 f(t) dt``.

    ``x, w, f`` have shape (P, n) on Gauss-Legendre panels, ``M`` is the
    within-panel cumulative integration matrix and ``half`` the panel
    half-widths.
    """
    q = x * x * f
    within = half[:, None] * (q @ M.T)
    totals = np.sum(w * q, axis=1)
    start = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
    A = start[:, None] + within
    return float(np.sum(w * x * f * A))
