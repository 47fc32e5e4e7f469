"""Scale-invariant quotient, closed-form lambda minimization and best-constant search.

The quotient is

    J(phi) = ||phi||_{2p} / (||phi||_{H^s}^(theta/(2-theta)) * D(phi)^((1-theta)/(4-2theta)))

with ``theta = theta_gn(p, s)``.  It is invariant under ``phi -> t phi`` and
``phi -> phi(lambda .)``, so its supremum over radial functions is the best
constant.  ``best_constant_search`` reports that supremum restricted to
Gaussian mixtures.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize

from .exponents import corollary_range, sobolev_endpoint, theta_gn
from .functionals import (
    _gaussian_panels,
    coulomb_newton,
    energy_norm,
    lp_norm,
    mixture_coulomb,
    mixture_sobolev_sq,
    ruiz_functional,
    sobolev_spectral,
)
from .profiles import GaussianMixture, gaussian_mixture
from .quadrature import DEFAULT_QUAD, QuadratureSpec, panel_rule
from .transforms import as_radial_function

__all__ = [
    "quotient_exponents",
    "quotient_J",
    "lambda_minimize",
    "OptimizerConfig",
    "BestConstantResult",
    "best_constant_search",
    "ruiz_constant_estimate",
    "embedding_constant_estimate",
]


def _check_two_p(two_p: float, s: float) -> float:
    p = float(two_p) / 2.0
    if p not in corollary_range(s):
        raise ValueError(f"2p = {two_p} lies outside the admissible range {corollary_range(s).scaled(2)} at s = {s}")
    return p


def quotient_exponents(two_p: float, s: float) -> tuple[float, float]:
    """Exponents ``(theta/(2-theta), (1-theta)/(4-2theta))`` on the Sobolev and Coulomb parts."""
    th = float(theta_gn(float(two_p) / 2.0, s))
    return th / (2.0 - th), (1.0 - th) / (4.0 - 2.0 * th)


def _assemble(lq: float, hs: float, d: float, two_p: float, s: float) -> float:
    e_h, e_d = quotient_exponents(two_p, s)
    return lq / (hs**e_h * d**e_d)


def quotient_J(profile, two_p: float, s: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    _check_two_p(two_p, s)
    fn = as_radial_function(profile)
    if fn.is_zero:
        raise ValueError("quotient is undefined for the zero profile")
    # J ignores amplitude; unit L^2 keeps the absolute quadrature tolerance from dominating
    fn = fn.scaled(1.0 / lp_norm(fn, 2.0, quad))
    lq = lp_norm(fn, two_p, quad)
    hs = sobolev_spectral(fn, s, quad)
    d = coulomb_newton(fn, quad)
    return _assemble(lq, hs, d, two_p, s)


def lambda_minimize(A: float, B: float, a_exp: float, b_exp: float) -> tuple[float, float]:
    """Minimize ``A lam^a + B lam^(-b)`` over ``lam > 0``.

    ``a_exp = 0`` (the Sobolev endpoint) has no finite minimizer: the
    sentinel ``(inf, A)`` is returned.
    """
    if not (A > 0 and B > 0):
        raise ValueError("A and B must be positive (the infimum is not attained otherwise)")
    if a_exp < 0 or not b_exp > 0:
        raise ValueError("need a_exp >= 0 and b_exp > 0")
    if a_exp == 0:
        return math.inf, float(A)
    lam = (b_exp * B / (a_exp * A)) ** (1.0 / (a_exp + b_exp))
    return lam, A * lam**a_exp + B * lam**-b_exp


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class OptimizerConfig:
    m: int = 4
    restarts: int = 8
    max_iters: int = 4000
    seed: int = 42
    simplex_tol: float = 1e-5
    threads: int = 1

    def __post_init__(self) -> None:
        if self.m < 1 or self.restarts < 1 or self.max_iters < 1:
            raise ValueError("m, restarts and max_iters must be positive")


@dataclass
class BestConstantResult:
    s: float
    two_p: float
    best_J: float
    params: dict[str, list[float]]
    history: list[float]
    stagnated: bool
    gaussian_J: float = math.nan
    evaluations: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    def profile(self) -> GaussianMixture:
        return gaussian_mixture(self.params["coeffs"], self.params["widths"])

    def to_json(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "two_p": self.two_p,
            "best_J": self.best_J,
            "params": self.params,
            "history": self.history,
            "stagnated": self.stagnated,
            "gaussian_J": self.gaussian_J,
            "evaluations": self.evaluations,
        }


# J is dilation invariant, so log widths are centred on log(1/2) and only
# their spread is bounded
_LOG_SPREAD = 4.0


class _MixtureObjective:
    """``-log J`` for an m-Gaussian mixture parametrized by (coeffs, log widths).

    Sobolev and Coulomb parts use closed forms; the L^{2p} part uses fixed
    Gauss-Legendre panels so the objective is a smooth function of the
    parameters.
    """

    def __init__(self, m: int, two_p: float, s: float) -> None:
        self.m, self.two_p, self.s = m, float(two_p), float(s)
        self.e_d = quotient_exponents(two_p, s)[1]
        self.evaluations = 0

    def _centred(self, x: np.ndarray) -> np.ndarray:
        lw = x[self.m :]
        return lw - lw.mean()

    def mixture(self, x: np.ndarray) -> GaussianMixture | None:
        c = x[: self.m]
        lw = np.clip(self._centred(x), -_LOG_SPREAD, _LOG_SPREAD) + math.log(0.5)
        if not np.any(c):
            return None
        return GaussianMixture(tuple(c), tuple(np.exp(lw)))

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        mix = self.mixture(x)
        if mix is None:
            return math.inf
        hs_sq = mixture_sobolev_sq(mix, self.s)
        if not hs_sq > 0:
            return math.inf
        mix = mix.scaled(1.0 / math.sqrt(hs_sq))  # unit Sobolev norm
        d = mixture_coulomb(mix)
        if not d > 0:
            return math.inf
        edges = _gaussian_panels(mix)
        r, w = panel_rule(edges, 16)
        lq_pow = 4.0 * math.pi * float(np.sum(w * r * r * np.abs(mix.evaluate(r)) ** self.two_p))
        if not lq_pow > 0:
            return math.inf
        penalty = 10.0 * float(np.sum(np.maximum(np.abs(self._centred(x)) - _LOG_SPREAD, 0.0) ** 2))
        log_J = math.log(lq_pow) / self.two_p - self.e_d * math.log(d)
        return penalty - log_J


def _start_point(m: int, k: int, seed: int) -> np.ndarray:
    if k == 0:
        # the Gaussian e^{-r^2/2}, other components switched off but spread in scale
        c = np.zeros(m)
        c[0] = 1.0
        offsets = [0] + [(j + 2) // 2 * (1 if j % 2 == 0 else -1) for j in range(m - 1)]
        return np.concatenate([c, math.log(0.5) + math.log(4.0) * np.array(offsets, dtype=float)])
    rng = np.random.default_rng([seed, k])
    c = rng.normal(size=m)
    c[0] = abs(c[0]) + 0.5
    lw = math.log(0.5) + rng.uniform(-3.0, 3.0, size=m)
    return np.concatenate([c, lw])


def _restart(obj: _MixtureObjective, x0: np.ndarray, cfg: OptimizerConfig):
    local = _MixtureObjective(obj.m, obj.two_p, obj.s)
    # initial simplex: unit steps in coefficients, half-decade steps in log widths
    n = len(x0)
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += 0.5 if i < obj.m else 1.0
    res = minimize(
        local,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iters,
            "maxfev": 2 * cfg.max_iters,
            "xatol": cfg.simplex_tol,
            "fatol": cfg.simplex_tol * 1e-2,
            "initial_simplex": simplex,
            "adaptive": True,
        },
    )
    return res.x, res.fun, local.evaluations


def best_constant_search(s: float, two_p: float, config: OptimizerConfig = OptimizerConfig(),
                         quad: QuadratureSpec = DEFAULT_QUAD) -> BestConstantResult:
    """Nelder-Mead over m-Gaussian mixtures; restart 0 starts from ``e^{-r^2/2}``.

    Each restart owns the RNG stream ``default_rng([seed, k])`` so results do
    not depend on scheduling.  Per-restart optima are re-evaluated with the
    adaptive routes of :func:`quotient_J` before being merged.
    """
    p = _check_two_p(two_p, s)
    if p == sobolev_endpoint(s) / 2:
        raise ValueError("the Sobolev endpoint p = 3/(3-2s) is excluded: the best constant need not be attained there")
    cfg = config
    obj = _MixtureObjective(cfg.m, two_p, s)
    starts = [_start_point(cfg.m, k, cfg.seed) for k in range(cfg.restarts)]

    def run(x0):
        return _restart(obj, x0, cfg)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            outs = list(pool.map(run, starts))
    else:
        outs = [run(x0) for x0 in starts]

    gaussian = gaussian_mixture([1.0], [0.5])
    g_J = quotient_J(gaussian, two_p, s, quad)
    history = []
    best_J, best_mix = -math.inf, None
    for x, fun, _ in outs:
        mix = obj.mixture(x)
        if mix is None or not math.isfinite(fun):
            history.append(math.nan)
            continue
        mix = _tidy(mix, s)
        J = quotient_J(mix, two_p, s, quad)
        history.append(J)
        if J > best_J:
            best_J, best_mix = J, mix
    stagnated = not best_J > g_J * (1.0 + 1e-9)
    if best_mix is None or best_J < g_J:
        best_J, best_mix = g_J, gaussian
    return BestConstantResult(
        s=float(s),
        two_p=float(two_p),
        best_J=best_J,
        params={"coeffs": list(best_mix.coeffs), "widths": list(best_mix.widths)},
        history=history,
        stagnated=stagnated,
        gaussian_J=g_J,
        evaluations=int(sum(o[2] for o in outs)),
    )


def _tidy(mix: GaussianMixture, s: float) -> GaussianMixture:
    """Normalize to unit Sobolev norm and drop components that are exactly zero."""
    keep = [i for i, c in enumerate(mix.coeffs) if c != 0.0]
    mix = GaussianMixture(tuple(mix.coeffs[i] for i in keep), tuple(mix.widths[i] for i in keep))
    return mix.scaled(1.0 / math.sqrt(mixture_sobolev_sq(mix, s)))


# ---------------------------------------------------------------------------
# empirical constants over fixture families


def ruiz_constant_estimate(family: Sequence, alpha: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``min D(phi) / V_alpha(phi)^2`` over the family.

    The sharp constant is the infimum over all radial functions, so this is an
    upper estimate of it; it can only decrease as the family grows.
    """
    if not family:
        raise ValueError("family must be nonempty")
    best = math.inf
    for prof in family:
        fn = as_radial_function(prof)
        if fn.is_zero:
            raise ValueError("zero profile in family")
        v = ruiz_functional(fn, alpha, quad)
        best = min(best, coulomb_newton(fn, quad) / (v * v))
    return best


def embedding_constant_estimate(family: Sequence, s: float, p_tilde: float,
                                quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``max ||phi||_{p~} / ||phi||_{E^s}`` over the family."""
    if not family:
        raise ValueError("family must be nonempty")
    return max(lp_norm(f, p_tilde, quad) / energy_norm(f, s, quad) for f in family)
