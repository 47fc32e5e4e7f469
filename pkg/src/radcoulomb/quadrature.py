"""One-dimensional quadrature primitives on the half line.

Everything downstream reduces to integrals of the form ``int_0^inf F(r) dr``.
Two tools live here:

* :func:`radial_integral`, a globally adaptive Gauss-Kronrod (7/15) integrator
  with an error estimate, endpoint-singularity substitution and the tail map
  ``r = lo + t/(1-t)`` for unbounded intervals;
* fixed composite Gauss-Legendre / Gauss-Jacobi panel rules used by the
  grid-based kernels (Fourier sums, Coulomb prefix sums, Gagliardo pairs).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "DEFAULT_QUAD",
    "radial_integral",
    "gauss_legendre",
    "gauss_jacobi_left",
    "panel_rule",
    "cumulative_matrix",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    max_subdiv: int = 2000

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_subdiv < 1:
            raise ValueError("max_subdiv must be >= 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUAD = QuadratureSpec()


class QuadResult(NamedTuple):
    value: float
    error: float
    converged: bool


# Kronrod 15-point abscissae (positive half) and weights; the embedded 7-point
# Gauss rule uses the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_KX = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[9:15:2] = _WG[2::-1]
_GW[7] = _WG[3]


def _gk15(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _KX
    fx = np.asarray(fn(x), dtype=float)
    k = half * float(_KW @ fx)
    g = half * float(_GW @ fx)
    return k, abs(k - g)


def _piece_map(lo: float, hi: float, alpha: float | None):
    """Return (u0, u1, transformed integrand builder) for one initial piece."""
    if math.isinf(hi):
        def wrap(f):
            def g(t):
                one_m = 1.0 - t
                return f(lo + t / one_m) / (one_m * one_m)
            return g
        return 0.0, 1.0, wrap
    if alpha is not None and alpha != 0.0:
        # r = lo + x**k with k = 1/(1+alpha) turns (r-lo)**alpha dr into a
        # bounded density
        k = 1.0 / (1.0 + alpha)
        u1 = (hi - lo) ** (1.0 / k)

        def wrap(f):
            def g(x):
                xk1 = x ** (k - 1.0)
                return f(lo + x * xk1) * k * xk1
            return g
        return 0.0, u1, wrap
    return lo, hi, lambda f: f


def radial_integral(
    integrand: Callable[[np.ndarray], np.ndarray],
    interval: tuple[float, float],
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    singularity: float | None = None,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Adaptively integrate ``integrand`` over ``[lo, hi]`` (``hi`` may be inf).

    ``integrand`` must accept a numpy array of radii.  ``singularity`` is the
    exponent ``alpha > -1`` of an integrable ``(r - lo)**alpha`` factor at the
    left endpoint.  Interior ``breakpoints`` (kinks, support edges) start the
    subdivision so non-smooth points never sit inside a panel.

    Returns ``QuadResult(value, error, converged)``; ``converged`` is False
    when the subdivision budget ran out before the tolerance was met.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        if hi == lo:
            return QuadResult(0.0, 0.0, True)
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if singularity is not None and singularity <= -1.0:
        raise ValueError("singularity exponent must exceed -1")

    cuts = sorted({float(b) for b in breakpoints if lo < b < hi})
    edges = [lo, *cuts, hi]
    if singularity is not None and math.isinf(hi) and len(edges) == 2:
        edges = [lo, lo + 1.0, hi]

    heap: list[tuple[float, int, float, float, float, Callable]] = []
    total = 0.0
    total_err = 0.0
    counter = 0
    for j, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        alpha = singularity if j == 0 else None
        u0, u1, wrap = _piece_map(a, b, alpha)
        g = wrap(integrand)
        val, err = _gk15(g, u0, u1)
        total += val
        total_err += err
        heapq.heappush(heap, (-err, counter, u0, u1, val, g))
        counter += 1

    n_sub = 0
    while total_err > quad.target(total) and n_sub < quad.max_subdiv:
        neg_err, _, a, b, val, g = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            # interval collapsed to floating-point resolution
            heapq.heappush(heap, (neg_err, counter, a, b, val, g))
            break
        v1, e1 = _gk15(g, a, mid)
        v2, e2 = _gk15(g, mid, b)
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, counter, a, mid, v1, g))
        heapq.heappush(heap, (-e2, counter + 1, mid, b, v2, g))
        counter += 2
        n_sub += 1

    # re-sum to shed accumulated update round-off
    total = math.fsum(item[4] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadResult(total, total_err, total_err <= quad.target(total))


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def _jacobi_unit(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    # weight (1+x)**beta on [-1, 1], mapped to t**beta on [0, 1]
    x, w = roots_jacobi(n, 0.0, beta)
    t = 0.5 * (x + 1.0)
    wt = w * 0.5 ** (beta + 1.0)
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def gauss_jacobi_left(a: float, b: float, n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for ``int_a^b (x-a)**beta g(x) dx`` (weight included)."""
    t, w = _jacobi_unit(n, round(float(beta), 15))
    length = b - a
    return a + length * t, w * length ** (beta + 1.0)


def panel_rule(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule; returns ``(nodes, weights)`` of shape (P, n)."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return mid[:, None] + half[:, None] * x[None, :], half[:, None] * w[None, :]


@lru_cache(maxsize=16)
def cumulative_matrix(n: int) -> np.ndarray:
    """``M[i, k] = int_{-1}^{x_i} l_k(t) dt`` for the n-point Legendre nodes.

    Applied to nodal values it integrates the interpolating polynomial from
    the panel's left edge up to each node.
    """
    x, _ = gauss_legendre(n)
    V = np.polynomial.legendre.legvander(x, n - 1)
    coef_of_lagrange = np.linalg.inv(V)  # column k: Legendre coefficients of l_k
    M = np.empty((n, n))
    for k in range(n):
        antider = np.polynomial.legendre.legint(coef_of_lagrange[:, k], lbnd=-1.0)
        M[:, k] = np.polynomial.legendre.legval(x, antider)
    M.setflags(write=False)
    return M
