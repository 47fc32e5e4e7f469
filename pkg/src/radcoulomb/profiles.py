"""Radial profiles on R^3 and the piecewise-polynomial algebra behind them.

A radial function ``phi(x) = u(|x|)`` is identified with its profile ``u`` on
``[0, inf)``.  Three public kinds exist (tent, Gaussian mixture, piecewise
linear).  Squaring a profile (the charge density ``phi**2`` entering the
Coulomb energy) stays inside the same two families, which is why
:class:`PiecewisePolynomial` and :class:`GaussianMixture` double as generic
"radial functions" for the transform and functional code.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Union

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = [
    "PiecewisePolynomial",
    "RadialProfile",
    "Tent",
    "GaussianMixture",
    "PiecewiseLinear",
    "make_tent",
    "gaussian_mixture",
    "piecewise_linear",
    "ramp_ball",
    "zero_profile",
    "evaluate",
    "profile_from_json",
    "load_profile",
    "BUILTINS",
]

# relative amplitude below which a Gaussian tail is treated as zero
_GAUSS_CUTOFF_LOG = math.log(1e18)


def _as_radii(r) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise ValueError("radius must be >= 0")
    return arr


def _scalar_or_array(out: np.ndarray, r):
    return float(out) if np.ndim(r) == 0 else out


class PiecewisePolynomial:
    """Piecewise polynomial on ``[edges[0], edges[-1]]``, zero beyond the last edge.

    ``coeffs[k]`` holds the power-basis coefficients of segment ``k`` in the
    local variable ``x = r - edges[k]``.
    """

    def __init__(self, edges, coeffs) -> None:
        edges = np.asarray(edges, dtype=float)
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if edges.ndim != 1 or len(edges) < 2:
            raise ValueError("need at least two edges")
        if edges[0] != 0.0:
            raise ValueError("first edge must be 0")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        if coeffs.shape[0] != len(edges) - 1:
            raise ValueError("one coefficient row per segment")
        self.edges = edges
        self.coeffs = coeffs
        self.edges.setflags(write=False)
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def n_segments(self) -> int:
        return len(self.edges) - 1

    def _active(self) -> np.ndarray:
        return np.any(self.coeffs != 0.0, axis=1)

    @property
    def is_zero(self) -> bool:
        return not bool(np.any(self._active()))

    def support(self) -> tuple[float, float]:
        active = np.flatnonzero(self._active())
        if active.size == 0:
            return 0.0, 0.0
        return float(self.edges[active[0]]), float(self.edges[active[-1] + 1])

    @property
    def extent(self) -> float:
        return self.support()[1]

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(float(e) for e in self.edges)

    @property
    def resolution(self) -> float:
        lo, hi = self.support()
        widths = np.diff(self.edges)
        mask = (self.edges[:-1] >= lo) & (self.edges[1:] <= hi)
        return float(widths[mask].min()) if np.any(mask) else 1.0

    def segments(self):
        """Yield ``(a, b, coeffs)`` for segments that are not identically zero."""
        for k in np.flatnonzero(self._active()):
            yield float(self.edges[k]), float(self.edges[k + 1]), self.coeffs[k]

    def __call__(self, r):
        return self.evaluate(r)

    def evaluate(self, r):
        rr = _as_radii(r)
        flat = rr.ravel()
        k = np.searchsorted(self.edges, flat, side="right") - 1
        inside = k < self.n_segments
        out = np.zeros_like(flat)
        kk = k[inside]
        x = flat[inside] - self.edges[kk]
        c = self.coeffs[kk]
        acc = c[:, -1].copy()
        for j in range(self.degree - 1, -1, -1):
            acc = acc * x + c[:, j]
        out[inside] = acc
        return _scalar_or_array(out.reshape(rr.shape), r)

    def derivative(self, m: int = 1) -> "PiecewisePolynomial":
        c = self.coeffs
        for _ in range(m):
            if c.shape[1] == 1:
                c = np.zeros_like(c)
            else:
                c = c[:, 1:] * np.arange(1, c.shape[1])[None, :]
        return PiecewisePolynomial(self.edges, c)

    def square(self) -> "PiecewisePolynomial":
        rows = [P.polymul(c, c) for c in self.coeffs]
        width = max(len(row) for row in rows)
        out = np.zeros((len(rows), width))
        for k, row in enumerate(rows):
            out[k, : len(row)] = row
        return PiecewisePolynomial(self.edges, out)

    def times_r(self) -> "PiecewisePolynomial":
        """Coefficients of ``r * f(r)`` (local variable shift r = x + edge)."""
        n = self.coeffs.shape[1]
        out = np.zeros((self.n_segments, n + 1))
        out[:, 1:] += self.coeffs
        out[:, :-1] += self.coeffs * self.edges[:-1, None]
        return PiecewisePolynomial(self.edges, out)

    def scaled(self, t: float) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.edges, self.coeffs * t)

    def jumps(self) -> np.ndarray:
        """``J[i, m] = f^(m)(e_i-) - f^(m)(e_i+)`` at every edge, m = 0..degree.

        The left limit at ``r = 0`` and the right limit past the last edge are 0.
        """
        d = self.degree
        K = self.n_segments
        J = np.zeros((K + 1, d + 1))
        fact = np.array([math.factorial(m) for m in range(d + 1)], dtype=float)
        widths = np.diff(self.edges)
        for m in range(d + 1):
            # right limits: m! * c[k, m]
            right = fact[m] * self.coeffs[:, m]
            # left limits at edge k+1: derivative of segment k at x = width
            dc = self.coeffs[:, m:] * np.array(
                [math.factorial(j) / math.factorial(j - m) for j in range(m, d + 1)]
            )[None, :]
            powers = widths[:, None] ** np.arange(d + 1 - m)[None, :]
            left = np.sum(dc * powers, axis=1)
            left_mag = np.sum(np.abs(dc * powers), axis=1)
            J[1:, m] += left
            J[:-1, m] -= right
            mag = np.zeros(K + 1)
            mag[1:] = left_mag
            mag[:-1] = np.maximum(mag[:-1], np.abs(right))
            # continuity that only fails by round-off is continuity
            J[np.abs(J[:, m]) <= 64 * np.finfo(float).eps * mag, m] = 0.0
        return J


class RadialProfile:
    """Base class; concrete kinds are immutable frozen dataclasses."""

    kind: str = "abstract"

    def evaluate(self, r):
        raise NotImplementedError

    def __call__(self, r):
        return self.evaluate(r)

    def derivative(self, r):
        raise NotImplementedError

    def squared(self):
        raise NotImplementedError

    def scaled(self, t: float) -> "RadialProfile":
        raise NotImplementedError

    def dilated(self, lam: float) -> "RadialProfile":
        """Profile of ``x -> phi(lam * x)``."""
        raise NotImplementedError

    def to_json(self) -> dict[str, Any]:
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        raise NotImplementedError

    @property
    def extent(self) -> float:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def resolution(self) -> float:
        raise NotImplementedError


class _PiecewiseBacked(RadialProfile):
    """Shared behaviour for profiles that are piecewise linear underneath."""

    @property
    def poly(self) -> PiecewisePolynomial:
        raise NotImplementedError

    def evaluate(self, r):
        return self.poly.evaluate(r)

    def derivative(self, r):
        return self.poly.derivative(1).evaluate(r)

    def squared(self) -> PiecewisePolynomial:
        return self.poly.square()

    def support(self) -> tuple[float, float]:
        return self.poly.support()

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    @property
    def extent(self) -> float:
        return self.poly.extent

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.poly.breakpoints

    @property
    def resolution(self) -> float:
        return self.poly.resolution


@dataclass(frozen=True)
class Tent(_PiecewiseBacked):
    """``epsilon * (S - |r - R|) / S`` on ``|r - R| < S``, zero elsewhere."""

    epsilon: float
    R: float
    S: float
    kind: str = field(default="tent", init=False, repr=False)

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and self.S > 0):
            raise ValueError("tent needs epsilon > 0 and S > 0")
        if not self.R > self.S:
            raise ValueError("tent needs R > S so the support avoids the origin")

    @cached_property
    def poly(self) -> PiecewisePolynomial:
        e, R, S = self.epsilon, self.R, self.S
        edges = [0.0, R - S, R, R + S]
        coeffs = [[0.0, 0.0], [0.0, e / S], [e, -e / S]]
        return PiecewisePolynomial(edges, coeffs)

    def scaled(self, t: float) -> "Tent":
        return Tent(self.epsilon * t, self.R, self.S)

    def dilated(self, lam: float) -> "Tent":
        return Tent(self.epsilon, self.R / lam, self.S / lam)

    def to_json(self) -> dict[str, Any]:
        return {"type": "tent", "epsilon": self.epsilon, "R": self.R, "S": self.S}


@dataclass(frozen=True)
class PiecewiseLinear(_PiecewiseBacked):
    """Linear interpolation through ``(knots, values)``.

    Constant on ``[0, knots[0]]``, zero beyond the last knot.
    """

    knots: tuple[float, ...]
    values: tuple[float, ...]
    kind: str = field(default="piecewise_linear", init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "knots", tuple(float(k) for k in self.knots))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.knots) != len(self.values) or not self.knots:
            raise ValueError("knots and values must be non-empty and of equal length")
        k = np.asarray(self.knots)
        if k[0] < 0 or np.any(np.diff(k) <= 0):
            raise ValueError("knots must be >= 0 and strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    @cached_property
    def poly(self) -> PiecewisePolynomial:
        k = np.asarray(self.knots)
        v = np.asarray(self.values)
        slopes = np.diff(v) / np.diff(k)
        rows = [[a, b] for a, b in zip(v[:-1], slopes)]
        if k[0] > 0:
            edges = np.concatenate([[0.0], k])
            rows = [[v[0], 0.0], *rows]
        else:
            edges = k
        if len(edges) < 2:
            # single knot at the origin: zero profile
            return PiecewisePolynomial([0.0, 1.0], [[0.0, 0.0]])
        return PiecewisePolynomial(edges, rows)

    def scaled(self, t: float) -> "PiecewiseLinear":
        return PiecewiseLinear(self.knots, tuple(t * v for v in self.values))

    def dilated(self, lam: float) -> "PiecewiseLinear":
        return PiecewiseLinear(tuple(k / lam for k in self.knots), self.values)

    def to_json(self) -> dict[str, Any]:
        return {"type": "piecewise_linear", "knots": list(self.knots), "values": list(self.values)}


@dataclass(frozen=True)
class GaussianMixture(RadialProfile):
    """``sum_i coeffs[i] * exp(-widths[i] * r**2)``; widths are decay rates."""

    coeffs: tuple[float, ...]
    widths: tuple[float, ...]
    kind: str = field(default="gaussian_mixture", init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "widths", tuple(float(a) for a in self.widths))
        if len(self.coeffs) != len(self.widths) or not self.coeffs:
            raise ValueError("coeffs and widths must be non-empty and of equal length")
        if not all(a > 0 and math.isfinite(a) for a in self.widths):
            raise ValueError("widths must be positive")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("coeffs must be finite")

    @property
    def _c(self) -> np.ndarray:
        return np.asarray(self.coeffs)

    @property
    def _a(self) -> np.ndarray:
        return np.asarray(self.widths)

    def evaluate(self, r):
        rr = _as_radii(r)
        r2 = rr[..., None] ** 2
        out = np.sum(self._c * np.exp(-self._a * r2), axis=-1)
        return _scalar_or_array(out, r)

    def derivative(self, r):
        rr = _as_radii(r)
        r2 = rr[..., None] ** 2
        out = np.sum(-2.0 * self._a * self._c * np.exp(-self._a * r2), axis=-1) * rr
        return _scalar_or_array(out, r)

    def squared(self) -> "GaussianMixture":
        c, a = self._c, self._a
        i, j = np.triu_indices(len(c))
        mult = np.where(i == j, 1.0, 2.0)
        return GaussianMixture(tuple(mult * c[i] * c[j]), tuple(a[i] + a[j]))

    def scaled(self, t: float) -> "GaussianMixture":
        return GaussianMixture(tuple(t * c for c in self.coeffs), self.widths)

    def dilated(self, lam: float) -> "GaussianMixture":
        return GaussianMixture(self.coeffs, tuple(a * lam * lam for a in self.widths))

    def to_json(self) -> dict[str, Any]:
        return {"type": "gaussian_mixture", "coeffs": list(self.coeffs), "widths": list(self.widths)}

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def extent(self) -> float:
        c = np.abs(self._c)
        if not c.any():
            return 0.0
        rel = np.log(np.maximum(c / c.max(), 1e-300))
        r2 = np.maximum(_GAUSS_CUTOFF_LOG + rel, 0.0) / self._a
        return float(math.sqrt(r2.max()))

    @property
    def resolution(self) -> float:
        return float(1.0 / math.sqrt(max(self.widths)))

    def fourier(self, rho):
        """Closed-form unitary transform ``sum c_i (2 a_i)^(-3/2) exp(-rho^2/(4 a_i))``."""
        rho = np.asarray(rho, dtype=float)
        c, a = self._c, self._a
        return np.sum(c * (2 * a) ** -1.5 * np.exp(-(rho[..., None] ** 2) / (4 * a)), axis=-1)


RadialFunction = Union[PiecewisePolynomial, GaussianMixture]


def make_tent(epsilon: float, R: float, S: float) -> Tent:
    return Tent(float(epsilon), float(R), float(S))


def gaussian_mixture(coeffs, widths) -> GaussianMixture:
    return GaussianMixture(tuple(coeffs), tuple(widths))


def piecewise_linear(knots, values) -> PiecewiseLinear:
    return PiecewiseLinear(tuple(knots), tuple(values))


def ramp_ball(radius: float = 1.0, ramp: float = 1e-6) -> PiecewiseLinear:
    """Indicator of the ball of given radius, smoothed by a linear ramp of width ``ramp * radius``."""
    w = ramp * radius
    return PiecewiseLinear((radius - 0.5 * w, radius + 0.5 * w), (1.0, 0.0))


def zero_profile() -> GaussianMixture:
    return GaussianMixture((0.0,), (1.0,))


def evaluate(profile: RadialProfile, r):
    return profile.evaluate(r)


BUILTINS = {
    "builtin:gaussian": lambda: gaussian_mixture([1.0], [0.5]),
    "builtin:tent": lambda: make_tent(1.0, 2.0, 1.0),
    "builtin:mixture2": lambda: gaussian_mixture([1.0, -0.6], [0.5, 2.0]),
    "builtin:ball": ramp_ball,
    "builtin:zero": zero_profile,
}


def profile_from_json(obj: dict[str, Any] | str) -> RadialProfile:
    if isinstance(obj, str):
        if obj in BUILTINS:
            return BUILTINS[obj]()
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("profile JSON must be an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "tent":
            return make_tent(obj["epsilon"], obj["R"], obj["S"])
        if kind == "gaussian_mixture":
            return gaussian_mixture(obj["coeffs"], obj["widths"])
        if kind == "piecewise_linear":
            return piecewise_linear(obj["knots"], obj["values"])
    except KeyError as exc:
        raise ValueError(f"profile JSON missing field {exc}") from None
    raise ValueError(f"unknown profile type {kind!r}")


def load_profile(source: str) -> RadialProfile:
    """Builtin alias, path to a JSON file, or an inline JSON object."""
    if source in BUILTINS:
        return BUILTINS[source]()
    text = source.strip()
    if not text.startswith(("{", "[")):
        text = Path(source).read_text(encoding="utf-8")
    return profile_from_json(json.loads(text))
