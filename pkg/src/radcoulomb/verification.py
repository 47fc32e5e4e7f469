"""Named check suites run by ``radcoulomb verify``.

Each check yields a :class:`Check` row: name, measured value, bound and
whether the bound holds.  Relative discrepancies are compared with ``<=``;
lower bounds are marked with ``kind="ge"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .counterexample import DEFAULT_EPSILONS, fit_slope, run_sweep
from .exponents import (
    corollary_range,
    nonradial_endpoint,
    pitt_constant,
    pitt_constant_unitary,
    radial_endpoint,
    sobolev_endpoint,
    theta_gn,
)
from .functionals import (
    coulomb_newton,
    coulomb_spectral,
    dirichlet_energy,
    hardy_weight_integral,
    lp_norm,
    sobolev_gagliardo,
    sobolev_spectral,
)
from .optimize import quotient_J
from .profiles import gaussian_mixture, make_tent
from .quadrature import DEFAULT_QUAD, QuadratureSpec
from .transforms import plancherel_check

__all__ = ["Check", "FIXTURES", "SUITES", "run_suite", "rel_delta", "figure1_grid"]


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    bound: float
    kind: str = "le"  # "le": measured <= bound, "ge": measured >= bound

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.measured):
            return False
        return self.measured <= self.bound if self.kind == "le" else self.measured >= self.bound

    def line(self) -> str:
        op = "<=" if self.kind == "le" else ">="
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<48} {self.measured:>14.6e} {op} {self.bound:<12.4e} {status}"


def FIXTURES():
    return {
        "gaussian": gaussian_mixture([1.0], [0.5]),
        "tent(1,2,1)": make_tent(1.0, 2.0, 1.0),
        "mixture2": gaussian_mixture([1.0, -0.6], [0.5, 2.0]),
    }


def rel_delta(a: float, b: float) -> float:
    m = max(abs(a), abs(b))
    return abs(a - b) / m if m > 0 else 0.0


def figure1_grid(n: int = 91, lo: Fraction = Fraction(55, 100), hi: Fraction = Fraction(145, 100)):
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n)]


def _identities(tol: float | None, quad: QuadratureSpec) -> Iterator[Check]:
    tol = 1e-3 if tol is None else tol
    for name, prof in FIXTURES().items():
        yield Check(f"coulomb newton~spectral [{name}]",
                    rel_delta(coulomb_newton(prof, quad), coulomb_spectral(prof, quad)), tol)
        for s in (0.6, 0.75, 0.9):
            yield Check(f"H^s gagliardo~spectral s={s} [{name}]",
                        rel_delta(sobolev_gagliardo(prof, s, quad), sobolev_spectral(prof, s, quad)), tol)
        yield Check(f"dirichlet~spectral s=1 [{name}]",
                    rel_delta(dirichlet_energy(prof, quad), sobolev_spectral(prof, 1.0, quad)), min(tol, 1e-5))
        yield Check(f"plancherel [{name}]", rel_delta(*plancherel_check(prof, quad)), min(tol, 1e-5))
    grid = figure1_grid()
    worst = 0
    for s in grid:
        p = 3 / (3 - 2 * s)
        worst += theta_gn(p, s) != 1
        worst += 2 * corollary_range(s).low != radial_endpoint(s)
        worst += not radial_endpoint(s) < nonradial_endpoint(s) < sobolev_endpoint(s)
    yield Check("exponent identities (count of violations)", float(worst), 0.0)
    yield Check("radial_endpoint(1) - 18/7", float(abs(radial_endpoint(1) - Fraction(18, 7))), 0.0)


def _pitt(tol: float | None, quad: QuadratureSpec) -> Iterator[Check]:
    tol = 1e-6 if tol is None else tol
    for name, prof in FIXTURES().items():
        for s in (0.6, 0.75, 1.0, 1.25):
            hardy = hardy_weight_integral(prof, 2 * s, quad)
            hs_sq = sobolev_spectral(prof, s, quad) ** 2
            yield Check(f"hardy/(c_s H^s^2) s={s} [{name}]", hardy / (pitt_constant(s) * hs_sq), 1.0 + tol)
            yield Check(f"hardy/(sharp unitary H^s^2) s={s} [{name}]",
                        hardy / (pitt_constant_unitary(s) * hs_sq), 1.0 + tol)


def _scaling(tol: float | None, quad: QuadratureSpec) -> Iterator[Check]:
    tol_amp = 1e-9 if tol is None else tol
    tol_dil = 1e-4 if tol is None else tol
    for name, prof in FIXTURES().items():
        for t in (0.5, 3.0):
            tp = prof.scaled(t)
            yield Check(f"lp amplitude t={t} [{name}]", rel_delta(lp_norm(tp, 3.0, quad), t * lp_norm(prof, 3.0, quad)), tol_amp)
            yield Check(f"coulomb amplitude t={t} [{name}]",
                        rel_delta(coulomb_newton(tp, quad), t**4 * coulomb_newton(prof, quad)), tol_amp)
            yield Check(f"H^s amplitude t={t} [{name}]",
                        rel_delta(sobolev_spectral(tp, 0.75, quad), t * sobolev_spectral(prof, 0.75, quad)), tol_amp)
        for lam in (0.5, 2.0):
            dp = prof.dilated(lam)
            s = 0.75
            yield Check(f"H^s dilation lam={lam} [{name}]",
                        rel_delta(sobolev_spectral(dp, s, quad) ** 2,
                                  lam ** (2 * s - 3) * sobolev_spectral(prof, s, quad) ** 2), tol_dil)
            yield Check(f"coulomb dilation lam={lam} [{name}]",
                        rel_delta(coulomb_newton(dp, quad), lam**-5 * coulomb_newton(prof, quad)), tol_dil)
        for s, two_p in ((1.0, 4.0), (0.75, 3.0)):
            J = quotient_J(prof, two_p, s, quad)
            yield Check(f"J amplitude s={s} 2p={two_p} [{name}]",
                        max(rel_delta(quotient_J(prof.scaled(t), two_p, s, quad), J) for t in (0.5, 3.0)), tol_amp)
            yield Check(f"J dilation s={s} 2p={two_p} [{name}]",
                        max(rel_delta(quotient_J(prof.dilated(l), two_p, s, quad), J) for l in (0.5, 2.0)), tol_dil)


def _lemma_bounds(tol: float | None, quad: QuadratureSpec) -> Iterator[Check]:
    slope_tol = 0.15 if tol is None else tol
    cases = {1.0: (2.4, float(Fraction(18, 7)), 2.8), 0.75: (2.6,)}
    for s, ps in cases.items():
        for p in ps:
            recs = run_sweep(s, p, DEFAULT_EPSILONS, quad)
            if p == ps[0]:
                lr = [r.lemma_ratio for r in recs]
                yield Check(f"lemma band max/min s={s}", max(lr) / min(lr), 10.0)
                cb = [r.coulomb / (r.epsilon**4 * r.S**2 * r.R**3) for r in recs]
                yield Check(f"coulomb/(eps^4 S^2 R^3) band s={s}", max(cb) / min(cb), 10.0)
            low = [r.lp_norm_p / (r.epsilon**p * r.S * r.R**2) for r in recs]
            yield Check(f"lp^p/(eps^p S R^2) min s={s} p={p:.6g}", min(low), 0.0, kind="ge")
            measured, predicted = fit_slope(recs, p, s)
            yield Check(f"slope error s={s} p={p:.6g}", abs(measured - predicted), slope_tol)
            ratios = np.array([r.ratio for r in recs])
            end = float(radial_endpoint(s))
            if abs(p - end) > 1e-9:
                steps = np.diff(ratios) * (1 if p < end else -1)
                yield Check(f"ratio monotone s={s} p={p:.6g} (min step)", float(steps.min()), 0.0, kind="ge")


SUITES: dict[str, Callable[[float | None, QuadratureSpec], Iterator[Check]]] = {
    "identities": _identities,
    "pitt": _pitt,
    "scaling": _scaling,
    "lemma-bounds": _lemma_bounds,
}


def run_suite(name: str, tol: float | None = None, quad: QuadratureSpec = DEFAULT_QUAD) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](tol, quad)]
    if name not in SUITES:
        raise KeyError(name)
    return list(SUITES[name](tol, quad))
