"""Exponents, endpoints, admissible ranges and explicit constants.

Every formula evaluates in exact rational arithmetic when its inputs are
rational (``int`` or :class:`fractions.Fraction`) and in floating point
otherwise, so identities between exponents can be tested with ``==``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "Number",
    "Interval",
    "ExponentSet",
    "as_number",
    "lanczos_gamma",
    "theta_gn",
    "gn_range",
    "radial_endpoint",
    "sobolev_endpoint",
    "nonradial_endpoint",
    "corollary_range",
    "denapoli_exponents",
    "sigma_limit",
    "pitt_constant",
    "pitt_constant_unitary",
    "gagliardo_constant",
    "coupling",
    "exponent_set",
]

Number = Union[int, float, Fraction]


def as_number(x) -> Number:
    """Fractions and ints stay exact; decimal strings like "0.75" become exact."""
    if isinstance(x, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return float(x)


def _exact(*xs) -> bool:
    return all(isinstance(x, Rational) for x in xs)


# ---------------------------------------------------------------------------
# gamma function (Lanczos, g = 7, 9 terms)

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    t = x + _LANCZOS_G + 0.5
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class Interval:
    low: Number
    high: Number
    low_closed: bool
    high_closed: bool
    case: str = ""

    def __contains__(self, x) -> bool:
        above = x >= self.low if self.low_closed else x > self.low
        below = x <= self.high if self.high_closed else x < self.high
        return bool(above and below)

    @property
    def is_point(self) -> bool:
        return self.low == self.high

    def scaled(self, k) -> "Interval":
        return Interval(self.low * k, self.high * k, self.low_closed, self.high_closed, self.case)

    def midpoint(self) -> Number:
        return (self.low + self.high) / 2

    def __str__(self) -> str:
        lb = "[" if self.low_closed else "("
        rb = "]" if self.high_closed else ")"
        return f"{lb}{_fmt(self.low)}, {_fmt(self.high)}{rb}"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return f"{x:.10g}"


def _check_open(s, lo, hi, what: str) -> None:
    if not lo < s < hi:
        raise ValueError(f"{what} requires {_fmt(Fraction(lo))} < s < {_fmt(Fraction(hi))}, got s={_fmt(s)}")


HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


# ---------------------------------------------------------------------------
# Gagliardo-Nirenberg type exponent and ranges


def theta_gn(p, s) -> Number:
    """``theta = (6 - 5p) / (3 - 2ps - 2p)``."""
    p, s = as_number(p), as_number(s)
    den = 3 - 2 * p * s - 2 * p
    if den == 0:
        raise ZeroDivisionError(f"theta undefined at p={_fmt(p)}, s={_fmt(s)}")
    return (6 - 5 * p) / den


def gn_range(s) -> Interval:
    """Admissible ``p`` for the non-radial lower bound, by case in ``s``."""
    s = as_number(s)
    if s <= 0:
        raise ValueError("s must be positive")
    lower = (1 + 2 * s) / (1 + s)
    quarter = Fraction(1, 4) if _exact(s) else 0.25
    if s < quarter:
        return Interval(3 / (3 - 2 * s), lower, True, True, "0<s<1/4")
    if s == quarter:
        p = 3 / (3 - 2 * s)
        return Interval(p, p, True, True, "s=1/4")
    if s < THREE_HALVES:
        return Interval(lower, 3 / (3 - 2 * s), True, True, "1/4<s<3/2")
    if s == THREE_HALVES:
        return Interval(lower, math.inf, True, False, "s=3/2")
    return Interval(lower, math.inf, True, True, "s>3/2")


def radial_endpoint(s) -> Number:
    """Lower endpoint ``(16s+2)/(6s+1)`` of the radial embedding range."""
    s = as_number(s)
    _check_open(s, HALF, THREE_HALVES, "radial_endpoint")
    return (16 * s + 2) / (6 * s + 1)


def sobolev_endpoint(s) -> Number:
    s = as_number(s)
    _check_open(s, HALF, THREE_HALVES, "sobolev_endpoint")
    return 6 / (3 - 2 * s)


def nonradial_endpoint(s) -> Number:
    """``(2+4s)/(1+s)``, the endpoint without symmetry."""
    s = as_number(s)
    return (2 + 4 * s) / (1 + s)


def corollary_range(s) -> Interval:
    """Range of ``p`` (acting on ``L^{2p}``) for the scale-invariant inequality."""
    s = as_number(s)
    _check_open(s, HALF, THREE_HALVES, "corollary_range")
    return Interval((8 * s + 1) / (6 * s + 1), 3 / (3 - 2 * s), False, True, "1/2<s<3/2")


def denapoli_exponents(s, q, a, d=3) -> tuple[Number, Number]:
    """``(theta, sigma)`` of the pointwise decay bound for radial functions."""
    s, q, a, d = (as_number(v) for v in (s, q, a, d))
    if not s > HALF:
        raise ValueError("pointwise decay needs s > 1/2")
    if not (-(d - 1) < a < d * (q - 1)):
        raise ValueError(f"need -(d-1) < a < d(q-1); got a={_fmt(a)}, q={_fmt(q)}, d={_fmt(d)}")
    den = 2 * s * q + 2 - q
    return 2 / den, (2 * a * s + 2 * d * s - a - 2 * s) / den


def sigma_limit(s) -> Number:
    """``(3s + 1/2) / (4s)``: decay rate in the limit gamma -> 1/2."""
    s = as_number(s)
    half = HALF if _exact(s) else 0.5
    return (3 * s + half) / (4 * s)


def pitt_constant(s) -> float:
    """``pi^(2s) [Gamma((3-2s)/4) / Gamma((3+2s)/4)]^2``."""
    s = float(s)
    if not 0 < s < 1.5:
        raise ValueError("Pitt constant needs 0 < s < 3/2")
    ratio = lanczos_gamma((3 - 2 * s) / 4) / lanczos_gamma((3 + 2 * s) / 4)
    return math.pi ** (2 * s) * ratio * ratio


def pitt_constant_unitary(s) -> float:
    """Sharp Pitt constant for the unitary ``(2 pi)^(-3/2)`` transform: ``4^(-s)`` times the bracket."""
    s = float(s)
    if not 0 < s < 1.5:
        raise ValueError("Pitt constant needs 0 < s < 3/2")
    ratio = lanczos_gamma((3 - 2 * s) / 4) / lanczos_gamma((3 + 2 * s) / 4)
    return 4.0 ** (-s) * ratio * ratio


def gagliardo_constant(s) -> float:
    """``2^(2s-1) pi^(-3/2) Gamma((3+2s)/2) / |Gamma(-s)|`` for 0 < s < 1."""
    s = float(s)
    if not 0 < s < 1:
        raise ValueError("Gagliardo constant needs 0 < s < 1")
    return 2 ** (2 * s - 1) * math.pi ** -1.5 * lanczos_gamma((3 + 2 * s) / 2) / abs(lanczos_gamma(-s))


def coupling(epsilon, s) -> tuple[float, float]:
    """Radius and half-width ``(R, S) = (eps^(-8s/(6s+1)), eps^(-2/(6s+1)))``."""
    eps = float(epsilon)
    s_f = float(s)
    if not 0 < eps < 1:
        raise ValueError("coupling needs 0 < epsilon < 1")
    if not 0.5 < s_f < 1.5:
        raise ValueError("coupling needs 1/2 < s < 3/2")
    if s_f > 1:
        warnings.warn("s > 1 lies outside the sharpness range; exploring only", stacklevel=2)
    R = eps ** (-8 * s_f / (6 * s_f + 1))
    S = eps ** (-2 / (6 * s_f + 1))
    if not R > S:
        raise ArithmeticError("coupling produced R <= S")
    return R, S


@dataclass(frozen=True)
class ExponentSet:
    s: Number
    p: Number | None
    q: Number | None
    a: Number | None
    d: int
    gamma: Number | None
    theta_gn: Number | None
    denapoli_theta: Number | None
    denapoli_sigma: Number | None
    radial_endpoint: Number
    sobolev_endpoint: Number
    nonradial_endpoint: Number
    corollary_range: Interval
    gn_range: Interval
    pitt_c: float
    sigma_limit: Number

    def to_json(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            if isinstance(val, dict):  # Interval
                iv = getattr(self, key)
                out[key] = {
                    "low": _json_num(iv.low),
                    "high": _json_num(iv.high),
                    "low_closed": iv.low_closed,
                    "high_closed": iv.high_closed,
                    "text": str(iv),
                }
            else:
                out[key] = _json_num(val)
        return out

    def rows(self) -> list[tuple[str, str]]:
        rows = []
        for key in self.__dataclass_fields__:
            val = getattr(self, key)
            if val is None:
                continue
            if isinstance(val, Interval):
                rows.append((key, str(val)))
            elif isinstance(val, Fraction):
                text = _fmt(val)
                if val.denominator != 1:
                    text += f" ({float(val):.10g})"
                rows.append((key, text))
            else:
                rows.append((key, _fmt(val)))
        return rows


def _json_num(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else int(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def exponent_set(s, p=None, q=None, a=None, d=3, gamma=None) -> ExponentSet:
    """Evaluate every exponent formula at the given parameters.

    ``p`` is the ``L^{2p}`` parameter of the scale-invariant inequality.  When
    ``gamma`` is given and ``a`` is not, the weight is ``a = -gamma`` with
    ``q = 2``.
    """
    s = as_number(s)
    p = None if p is None else as_number(p)
    gamma = None if gamma is None else as_number(gamma)
    if gamma is not None and a is None:
        a, q = -gamma, (2 if q is None else q)
    q = None if q is None else as_number(q)
    a = None if a is None else as_number(a)
    th = theta_gn(p, s) if p is not None else None
    dth = dsig = None
    if q is not None and a is not None:
        dth, dsig = denapoli_exponents(s, q, a, d)
    return ExponentSet(
        s=s, p=p, q=q, a=a, d=d, gamma=gamma,
        theta_gn=th,
        denapoli_theta=dth,
        denapoli_sigma=dsig,
        radial_endpoint=radial_endpoint(s),
        sobolev_endpoint=sobolev_endpoint(s),
        nonradial_endpoint=nonradial_endpoint(s),
        corollary_range=corollary_range(s),
        gn_range=gn_range(s),
        pitt_c=pitt_constant(s),
        sigma_limit=sigma_limit(s),
    )
