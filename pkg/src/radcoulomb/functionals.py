"""Norms and energies of radial functions on R^3.

Where possible each quantity has two independent routes:

* homogeneous Sobolev norm: spectral (``sobolev_spectral``) and real-space
  Gagliardo double integral (``sobolev_gagliardo``), plus the gradient norm at
  s = 1 (``dirichlet_energy``);
* Coulomb energy ``D(phi) = iint phi(x)^2 phi(y)^2 / |x-y|``: Newton's
  theorem with prefix sums (``coulomb_newton``) and the frequency-side
  identity ``D = 16 pi^2 int_0^inf |f_hat(rho)|^2 d rho`` with ``f = phi^2``
  (``coulomb_spectral``).

Functions return a float; ``full_output=True`` returns ``(value, error)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .exponents import denapoli_exponents, gagliardo_constant
from .profiles import GaussianMixture, PiecewisePolynomial
from .quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    QuadResult,
    cumulative_matrix,
    gauss_legendre,
    gauss_jacobi_left,
    panel_rule,
    radial_integral,
)
from .transforms import as_radial_function, spectral_moment

__all__ = [
    "lp_norm",
    "weighted_lq_norm",
    "sobolev_spectral",
    "sobolev_gagliardo",
    "dirichlet_energy",
    "coulomb_newton",
    "coulomb_spectral",
    "coulomb_direct_2d",
    "energy_norm",
    "ruiz_functional",
    "hardy_weight_integral",
    "pointwise_decay_ratio",
    "FunctionalReport",
    "functional_report",
    "mixture_sobolev_sq",
    "mixture_coulomb",
]

FOUR_PI = 4.0 * math.pi


def _square(fn):
    return fn.squared() if isinstance(fn, GaussianMixture) else fn.square()


def _ret(value: float, err: float, full_output: bool):
    return (value, err) if full_output else value


def _radial_moment(fn, transform, quad: QuadratureSpec, r_power: float = 2.0,
                   extra_breaks: Sequence[float] = (), use_derivative: bool = False) -> QuadResult:
    """``int_0^inf r^r_power * transform(u(r)) dr``, split at the profile's structure."""
    if isinstance(fn, GaussianMixture):
        values = fn.derivative if use_derivative else fn.evaluate
        lo, hi = 0.0, math.inf
        breaks = [1.0 / math.sqrt(a) for a in fn.widths]
    else:
        values = (fn.derivative(1) if use_derivative else fn).evaluate
        lo, hi = fn.support()
        breaks = list(fn.edges)
    breaks += list(extra_breaks)
    sing = r_power if (lo == 0.0 and r_power < 0.0) else None
    return radial_integral(lambda r: r**r_power * transform(values(r)), (lo, hi), quad,
                           singularity=sing, breakpoints=breaks)


def lp_norm(profile, p: float, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``(4 pi int r^2 |u|^p dr)^(1/p)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    res = _radial_moment(fn, lambda u: np.abs(u) ** p, quad)
    val = (FOUR_PI * res.value) ** (1.0 / p)
    return _ret(val, val * res.error / (p * res.value), full_output)


def weighted_lq_norm(profile, q: float, a: float, quad: QuadratureSpec = DEFAULT_QUAD,
                     *, full_output: bool = False):
    """``(int |x|^a |u|^q dx)^(1/q)``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if a <= -3:
        raise ValueError("weight power a must exceed -3")
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    res = _radial_moment(fn, lambda u: np.abs(u) ** q, quad, r_power=2.0 + a)
    val = (FOUR_PI * res.value) ** (1.0 / q)
    return _ret(val, val * res.error / (q * res.value), full_output)


def sobolev_spectral(profile, s: float, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``(int |xi|^(2s) |phi_hat|^2 d xi)^(1/2)`` from the sampled transform."""
    if not 0 < s < 1.5:
        raise ValueError("spectral Sobolev norm needs 0 < s < 3/2")
    m, err = spectral_moment(profile, 2.0 * s, quad, full_output=True)
    val = math.sqrt(FOUR_PI * m)
    return _ret(val, 0.5 * FOUR_PI * err / val if val > 0 else 0.0, full_output)


def dirichlet_energy(profile, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``||grad phi||_2 = (4 pi int r^2 u'(r)^2 dr)^(1/2)``."""
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    res = _radial_moment(fn, np.square, quad, use_derivative=True)
    val = math.sqrt(FOUR_PI * res.value)
    return _ret(val, 0.5 * FOUR_PI * res.error / val, full_output)


# ---------------------------------------------------------------------------
# Coulomb energy


def _gaussian_panels(fn: GaussianMixture, ratio: float = 1.2) -> np.ndarray:
    r0 = 0.05 * fn.resolution
    ext = fn.extent
    k = max(1, int(math.ceil(math.log(ext / r0) / math.log(ratio))))
    return np.concatenate([[0.0], np.geomspace(r0, ext, k + 1)])


def _coulomb_newton_value(f, n: int) -> float:
    if isinstance(f, GaussianMixture):
        edges = _gaussian_panels(f)
        x, w = panel_rule(edges, n)
        half = 0.5 * np.diff(edges)
    else:
        segs = list(f.segments())
        starts = np.array([lo for lo, _, _ in segs])
        ends = np.array([hi for _, hi, _ in segs])
        half = 0.5 * (ends - starts)
        xr, wr = gauss_legendre(n)
        x = 0.5 * (starts + ends)[:, None] + half[:, None] * xr[None, :]
        w = half[:, None] * wr[None, :]
    fx = np.ascontiguousarray(f.evaluate(x.ravel()).reshape(x.shape))
    val = kernels.coulomb_prefix(
        np.ascontiguousarray(x), np.ascontiguousarray(w), fx, np.ascontiguousarray(cumulative_matrix(n)),
        np.ascontiguousarray(half),
    )
    return 2.0 * FOUR_PI**2 * val


def coulomb_newton(profile, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``D(phi)`` via ``(4 pi)^2 iint r^2 r'^2 f f / max(r, r')`` with ``f = u^2``.

    Uses the symmetric prefix form ``2 (4 pi)^2 int r f(r) A(r) dr`` with
    ``A(r) = int_0^r t^2 f(t) dt`` accumulated panel by panel.
    """
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    f = _square(fn)
    val = _coulomb_newton_value(f, 16)
    if not full_output:
        return val
    return val, abs(val - _coulomb_newton_value(f, 10))


def coulomb_spectral(profile, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``D(phi) = 16 pi^2 int_0^inf |f_hat(rho)|^2 d rho`` with ``f = u^2``."""
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    m, err = spectral_moment(_square(fn), -2.0, quad, full_output=True)
    return _ret(16 * math.pi**2 * m, 16 * math.pi**2 * err, full_output)


def coulomb_direct_2d(profile, n: int = 24, panels: int = 48) -> float:
    """O(N^2) tensor-product evaluation of the max-kernel double integral.

    Slow reference only: the square is split along the diagonal so the kink
    of ``1/max(r, r')`` never falls inside a panel.
    """
    fn = as_radial_function(profile)
    if fn.is_zero:
        return 0.0
    f = _square(fn)
    if isinstance(f, GaussianMixture):
        edges = _gaussian_panels(f, ratio=1.1)
    else:
        lo, hi = f.support()
        e = f.edges[(f.edges >= lo) & (f.edges <= hi)]
        sub = [np.linspace(a, b, max(2, panels // len(e)) + 1)[:-1] for a, b in zip(e[:-1], e[1:])]
        edges = np.concatenate(sub + [[hi]])
    x, w = panel_rule(edges, n)
    x, w = x.ravel(), w.ravel()
    q = x * x * f.evaluate(x) * w
    total = 0.0
    # off-diagonal panel pairs: r' < r panel-wise, kernel 1/r
    xr = x.reshape(-1, n)
    qr = q.reshape(-1, n)
    for p in range(xr.shape[0]):
        below = qr[:p].sum()
        total += 2.0 * below * np.sum(qr[p] / xr[p])
        # diagonal panel: integrate the triangle r' < r exactly with a
        # Duffy-free split: map r' = a + (r - a) t
        a, b = edges[p], edges[p + 1]
        xt, wt = panel_rule(np.array([0.0, 1.0]), n)
        xt, wt = xt.ravel(), wt.ravel()
        for r, wq in zip(xr[p], qr[p]):
            rp = a + (r - a) * xt
            inner = np.sum(wt * (r - a) * rp * rp * f.evaluate(rp)) / r
            total += 2.0 * wq * inner
    return FOUR_PI**2 * total


def energy_norm(profile, s: float, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``(||phi||_{H^s}^2 + D(phi)^(1/2))^(1/2)`` using the Newton Coulomb route."""
    hs, hs_err = sobolev_spectral(profile, s, quad, full_output=True)
    d, d_err = coulomb_newton(profile, quad, full_output=True)
    val = math.sqrt(hs * hs + math.sqrt(d))
    if not full_output:
        return val
    if val == 0:
        return 0.0, 0.0
    err = (hs * hs_err + (0.25 * d_err / math.sqrt(d) if d > 0 else 0.0)) / val
    return val, err


def ruiz_functional(profile, alpha: float, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """``int |phi|^2 / (|x|^(1/2) (1 + |log|x||)^alpha) dx``."""
    if not alpha > 0.5:
        raise ValueError("alpha must exceed 1/2")
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)

    def integrand(r):
        log_r = np.log(np.maximum(r, 1e-300))
        return r**1.5 * fn.evaluate(r) ** 2 * (1.0 + np.abs(log_r)) ** (-alpha)

    if isinstance(fn, GaussianMixture):
        lo, hi = 0.0, math.inf
        breaks = [1.0] + [1.0 / math.sqrt(a) for a in fn.widths]
    else:
        lo, hi = fn.support()
        breaks = [1.0, *fn.edges]
    res = radial_integral(integrand, (lo, hi), quad, breakpoints=breaks)
    return _ret(FOUR_PI * res.value, FOUR_PI * res.error, full_output)


def hardy_weight_integral(profile, gamma: float, quad: QuadratureSpec = DEFAULT_QUAD,
                          *, full_output: bool = False):
    """``int |x|^(-gamma) |phi|^2 dx`` for 0 < gamma < 3."""
    if not 0 < gamma < 3:
        raise ValueError("gamma must lie in (0, 3)")
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    res = _radial_moment(fn, np.square, quad, r_power=2.0 - gamma)
    return _ret(FOUR_PI * res.value, FOUR_PI * res.error, full_output)


# ---------------------------------------------------------------------------
# Gagliardo double integral


def _graded(a: float, b: float, levels: int, max_width: float, left: bool, right: bool) -> np.ndarray:
    """Edges on [a, b], geometrically refined toward the flagged ends."""
    mid = 0.5 * (a + b)
    pts = [a, mid, b]
    if left:
        pts += list(a + (mid - a) * 0.5 ** np.arange(1, levels + 1))
    if right:
        pts += list(b - (b - mid) * 0.5 ** np.arange(1, levels + 1))
    pts = np.unique(np.array(pts))
    if math.isfinite(max_width):
        out = [pts[:1]]
        for p, q in zip(pts[:-1], pts[1:]):
            k = max(1, int(math.ceil((q - p) / max_width)))
            out.append(np.linspace(p, q, k + 1)[1:])
        pts = np.concatenate(out)
    return pts


def _inner_panels(r: float, kinks: np.ndarray, max_width: float) -> list[tuple[float, float]]:
    """h-intervals on (0, r] for fixed outer radius r; first one touches h = 0."""
    breaks = r - kinks[(kinks < r) & (kinks > 0)]
    b = np.unique(np.concatenate([[0.0, r], breaks[breaks > 0]]))
    first = min(b[1], max_width)
    out = [(0.0, first)]
    edges = [first]
    for p, q in zip(b[:-1], b[1:]):
        p = max(p, first)
        if q <= p:
            continue
        x = p
        while x < q:
            nxt = min(q, 2.0 * x, x + max_width)
            edges.append(nxt)
            x = nxt
    for p, q in zip(edges[:-1], edges[1:]):
        if q > p:
            out.append((p, q))
    return out


def _gagliardo_tail(r: np.ndarray, L: float, s: float) -> np.ndarray:
    """``int_L^inf r' (|r'-r|^(-1-2s) - (r'+r)^(-1-2s)) dr'`` for r < L."""
    dm, dp = L - r, L + r
    if abs(1.0 - 2.0 * s) < 1e-12:
        first = np.log(dm / dp)
    else:
        first = (dm ** (1 - 2 * s) - dp ** (1 - 2 * s)) / (1 - 2 * s)
    G = first - (r / (2 * s)) * (dm ** (-2 * s) + dp ** (-2 * s))
    return -G


def _gagliardo_integral(fn, s: float, n: int) -> float:
    if isinstance(fn, GaussianMixture):
        lo, L = 0.0, fn.extent
        kinks = np.array([0.0, L])
        width = 0.5 * fn.resolution
        outer_edges = _graded(lo, L, 0, width, False, False)
    else:
        lo, L = fn.support()
        e = fn.edges
        kinks = e[(e >= lo) & (e <= L)]
        width = math.inf
        outer_edges = np.unique(np.concatenate(
            [_graded(a, b, 30, width, True, True) for a, b in zip(kinks[:-1], kinks[1:])]
        ))
    xo, wo = panel_rule(outer_edges, n)
    xo, wo = xo.ravel(), wo.ravel()
    beta = 1.0 - 2.0 * s
    rs, hs, ws = [], [], []
    for r, w_out in zip(xo, wo):
        for j, (p, q) in enumerate(_inner_panels(r, kinks, width)):
            if j == 0:
                h, wj = gauss_jacobi_left(p, q, n, beta)
                wj = wj / h**beta
            else:
                h, wj = panel_rule(np.array([p, q]), n)
                h, wj = h.ravel(), wj.ravel()
            rs.append(np.full(h.shape, r))
            hs.append(h)
            ws.append(w_out * wj)
    r_all = np.concatenate(rs)
    h_all = np.concatenate(hs)
    w_all = np.concatenate(ws)
    ur = fn.evaluate(r_all)
    uh = fn.evaluate(np.maximum(r_all - h_all, 0.0))
    pair = kernels.gagliardo_sum(
        np.ascontiguousarray(r_all), np.ascontiguousarray(h_all), np.ascontiguousarray(w_all),
        np.ascontiguousarray(ur), np.ascontiguousarray(uh), float(s),
    )
    u_out = fn.evaluate(xo)
    tail = float(np.sum(wo * xo * u_out * u_out * _gagliardo_tail(xo, L, s)))
    return 2.0 * pair + 2.0 * tail


def sobolev_gagliardo(profile, s: float, quad: QuadratureSpec = DEFAULT_QUAD, *, full_output: bool = False):
    """Homogeneous Sobolev norm from the real-space double integral (0 < s < 1).

    After angular integration::

        iint |u(x)-u(y)|^2 / |x-y|^(3+2s) dx dy
          = 8 pi^2 / (1+2s) int int r r' |u(r)-u(r')|^2 (|r-r'|^(-1-2s) - (r+r')^(-1-2s)) dr dr'

    The diagonal factor ``|r-r'|^(1-2s)`` is absorbed by a Gauss-Jacobi rule
    on the panel touching the diagonal; the outer integral is graded toward
    kinks of the profile.
    """
    if not 0 < s < 1:
        raise ValueError("Gagliardo route needs 0 < s < 1; use dirichlet_energy at s = 1")
    fn = as_radial_function(profile)
    if fn.is_zero:
        return _ret(0.0, 0.0, full_output)
    pref = gagliardo_constant(s) * 8.0 * math.pi**2 / (1.0 + 2.0 * s)
    val = math.sqrt(pref * _gagliardo_integral(fn, s, 12))
    if not full_output:
        return val
    lower = math.sqrt(pref * _gagliardo_integral(fn, s, 8))
    return val, abs(val - lower)


# ---------------------------------------------------------------------------
# pointwise decay


def pointwise_decay_ratio(profile, s: float, q: float, a: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``sup_r r^sigma |u(r)| / (||phi||_{H^s}^theta ||phi||_{L^q_a}^(1-theta))``.

    The sup runs over 2048 log-spaced radii spanning the support widened by a
    decade on each side, polished by a bounded scalar search around the best
    grid point; it is a lower bound on the true sup.
    """
    theta, sigma = (float(v) for v in denapoli_exponents(s, q, a, 3))
    fn = as_radial_function(profile)
    if fn.is_zero:
        return 0.0
    if isinstance(fn, GaussianMixture):
        r_lo, r_hi = 1e-3 * fn.resolution, fn.extent
    else:
        lo, hi = fn.support()
        r_lo, r_hi = (lo if lo > 0 else 1e-3 * hi), hi
    grid = np.geomspace(r_lo / 10.0, r_hi * 10.0, 2048)

    def weighted(r):
        return r**sigma * np.abs(fn.evaluate(r))

    vals = weighted(grid)
    k = int(np.argmax(vals))
    best = float(vals[k])
    a_, b_ = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if b_ > a_:
        res = minimize_scalar(lambda r: -float(weighted(np.array(r))), bounds=(a_, b_), method="bounded",
                              options={"xatol": 1e-12 * b_})
        best = max(best, -float(res.fun))
    hs = sobolev_spectral(profile, s, quad)
    lq = weighted_lq_norm(profile, q, a, quad)
    return best / (hs**theta * lq ** (1.0 - theta))


# ---------------------------------------------------------------------------
# report


@dataclass
class FunctionalReport:
    profile_id: str
    s: float
    lp: dict[float, float] = field(default_factory=dict)
    hs_spectral: float = math.nan
    hs_gagliardo: float | None = None
    dirichlet: float | None = None
    coulomb_newton: float = math.nan
    coulomb_spectral: float = math.nan
    energy_norm: float = math.nan
    errors: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def coulomb_delta(self) -> float:
        return _rel_delta(self.coulomb_newton, self.coulomb_spectral)

    @property
    def hs_delta(self) -> float | None:
        if self.hs_gagliardo is not None:
            return _rel_delta(self.hs_spectral, self.hs_gagliardo)
        if self.dirichlet is not None:
            return _rel_delta(self.hs_spectral, self.dirichlet)
        return None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"profile_id": self.profile_id, "s": self.s}
        for p, v in self.lp.items():
            key = f"lp[{_pkey(p)}]"
            out[key] = v
            out[key + "_err"] = self.errors.get(key, 0.0)
        for key in ("hs_spectral", "hs_gagliardo", "dirichlet", "coulomb_newton",
                    "coulomb_spectral", "energy_norm"):
            v = getattr(self, key)
            if v is None:
                continue
            out[key] = v
            out[key + "_err"] = self.errors.get(key, 0.0)
        out["coulomb_delta"] = self.coulomb_delta
        if self.hs_delta is not None:
            out["hs_delta"] = self.hs_delta
        out["flagged"] = sorted(k for k, bad in self.flags.items() if bad)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, default=_json_default)


def _json_default(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(type(x))


def _pkey(p: float) -> str:
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def _rel_delta(a: float, b: float) -> float:
    m = max(abs(a), abs(b))
    return abs(a - b) / m if m > 0 else 0.0


def functional_report(profile, s: float, ps: Sequence[float] = (2.0,), quad: QuadratureSpec = DEFAULT_QUAD,
                      profile_id: str = "profile") -> FunctionalReport:
    rep = FunctionalReport(profile_id=profile_id, s=float(s))

    def put(key: str, value_err):
        value, err = value_err
        rep.errors[key] = err
        rep.flags[key] = err > quad.target(value) * 10.0
        return value

    for p in ps:
        rep.lp[float(p)] = put(f"lp[{_pkey(p)}]", lp_norm(profile, p, quad, full_output=True))
    rep.hs_spectral = put("hs_spectral", sobolev_spectral(profile, s, quad, full_output=True))
    if 0 < s < 1:
        rep.hs_gagliardo = put("hs_gagliardo", sobolev_gagliardo(profile, s, quad, full_output=True))
    if s == 1:
        rep.dirichlet = put("dirichlet", dirichlet_energy(profile, quad, full_output=True))
    rep.coulomb_newton = put("coulomb_newton", coulomb_newton(profile, quad, full_output=True))
    rep.coulomb_spectral = put("coulomb_spectral", coulomb_spectral(profile, quad, full_output=True))
    rep.energy_norm = math.sqrt(rep.hs_spectral**2 + math.sqrt(rep.coulomb_newton))
    return rep


# ---------------------------------------------------------------------------
# closed forms for Gaussian mixtures


def mixture_sobolev_sq(mix: GaussianMixture, s: float) -> float:
    """``||phi||_{H^s}^2`` for ``sum c_i exp(-a_i r^2)`` in closed form."""
    c, a = np.asarray(mix.coeffs), np.asarray(mix.widths)
    b = 0.25 / a[:, None] + 0.25 / a[None, :]
    amp = np.outer(c * (2 * a) ** -1.5, c * (2 * a) ** -1.5)
    return float(2.0 * math.pi * math.gamma(s + 1.5) * np.sum(amp * b ** -(s + 1.5)))


def mixture_coulomb(mix: GaussianMixture) -> float:
    """``D(phi)`` for a Gaussian mixture from the pairwise Gaussian interaction
    ``(pi^2 / (al be))^(3/2) 2 / sqrt(pi) sqrt(al be / (al + be))``."""
    f = mix.squared()
    d, al = np.asarray(f.coeffs), np.asarray(f.widths)
    prod = np.outer(al, al)
    pair = (math.pi**2 / prod) ** 1.5 * 2.0 / math.sqrt(math.pi) * np.sqrt(prod / np.add.outer(al, al))
    return float(d @ pair @ d)
