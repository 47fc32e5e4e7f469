"""Coupled tent families whose Sobolev and Coulomb parts stay bounded while the
L^p norm drifts at the rate ``eps^(p - (16s+2)/(6s+1))``."""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exponents import coupling, radial_endpoint
from .functionals import coulomb_newton, dirichlet_energy, lp_norm, sobolev_spectral
from .profiles import make_tent
from .quadrature import DEFAULT_QUAD, QuadratureSpec

__all__ = [
    "DEFAULT_EPSILONS",
    "CSV_COLUMNS",
    "SweepRecord",
    "run_sweep",
    "check_lemma_bound",
    "fit_slope",
    "predicted_slope",
    "tent_closed_forms",
    "tent_lp_power",
    "write_sweep_csv",
    "sweep_csv_text",
]

DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.02, 0.01)
CSV_COLUMNS = ("epsilon", "R", "S", "hs_norm_sq", "coulomb", "lp_norm_p", "energy_norm", "ratio", "lemma_ratio")


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    R: float
    S: float
    hs_norm_sq: float
    coulomb: float
    lp_norm_p: float
    energy_norm: float
    ratio: float
    lemma_ratio: float
    flags: tuple[str, ...] = field(default=(), compare=False)

    def row(self) -> list[str]:
        return [f"{getattr(self, c):.17g}" for c in CSV_COLUMNS]

    def to_json(self) -> dict:
        out = asdict(self)
        out["flags"] = list(self.flags)
        return out


def tent_closed_forms(epsilon: float, R: float, S: float, p: float = 2.0) -> tuple[float, float]:
    """Exact ``||u||_2^2`` and the constant-free lower-bound shape ``eps^p S R^2``."""
    make_tent(epsilon, R, S)  # validates
    l2_sq = 4.0 * math.pi * epsilon**2 * (2.0 * S * R**2 / 3.0 + S**3 / 15.0)
    return l2_sq, epsilon**p * S * R**2


def tent_lp_power(epsilon: float, R: float, S: float, p: float) -> float:
    """Exact ``||u||_p^p`` of the tent."""
    make_tent(epsilon, R, S)
    return 4.0 * math.pi * epsilon**p * (
        2.0 * S * R**2 / (p + 1) + 4.0 * S**3 / ((p + 1) * (p + 2) * (p + 3))
    )


def check_lemma_bound(record: SweepRecord, s: float) -> float:
    """``||u||_{H^s}^2 S^(2s-1) / (eps^2 R^2)``; bounded along a sweep."""
    return record.hs_norm_sq * record.S ** (2 * s - 1) / (record.epsilon**2 * record.R**2)


def _record(eps: float, s: float, p: float, quad: QuadratureSpec) -> SweepRecord:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        R, S = coupling(eps, s)
    u = make_tent(eps, R, S)
    flags = []
    if s == 1:
        hs, hs_err = dirichlet_energy(u, quad, full_output=True)
    else:
        hs, hs_err = sobolev_spectral(u, s, quad, full_output=True)
    if hs_err > 10 * quad.target(hs):
        flags.append("hs")
    d, d_err = coulomb_newton(u, quad, full_output=True)
    if d_err > 10 * quad.target(d):
        flags.append("coulomb")
    lp, lp_err = lp_norm(u, p, quad, full_output=True)
    if lp_err > 10 * quad.target(lp):
        flags.append("lp")
    energy = math.sqrt(hs * hs + math.sqrt(d))
    partial = SweepRecord(eps, R, S, hs * hs, d, lp**p, energy, lp / energy, 0.0)
    return SweepRecord(**{**asdict(partial), "lemma_ratio": check_lemma_bound(partial, s), "flags": tuple(flags)})


def run_sweep(s: float, p: float, epsilons: Sequence[float] = DEFAULT_EPSILONS,
              quad: QuadratureSpec = DEFAULT_QUAD, threads: int = 1) -> list[SweepRecord]:
    """One record per epsilon, in the order given.

    Each record uses the couplings ``R = eps^(-8s/(6s+1))`` and
    ``S = eps^(-2/(6s+1))``.  At ``s = 1`` the Sobolev part is the gradient
    norm; otherwise it is spectral.
    """
    if not 0.5 < s < 1.5:
        raise ValueError("sweep needs 1/2 < s < 3/2")
    if s > 1:
        warnings.warn("s > 1 lies outside the sharpness range; exploring only", stacklevel=2)
    if not p > 1:
        raise ValueError("p must exceed 1")
    eps = [float(e) for e in epsilons]
    if not eps:
        raise ValueError("need at least one epsilon")
    if any(not 0 < e < 1 for e in eps):
        raise ValueError("every epsilon must lie in (0, 1)")
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda e: _record(e, s, p, quad), eps))
    return [_record(e, s, p, quad) for e in eps]


def predicted_slope(p: float, s: float) -> float:
    return float(p) - float(radial_endpoint(s))


def fit_slope(records: Sequence[SweepRecord], p: float, s: float) -> tuple[float, float]:
    """Least-squares slope of ``log ||u||_p^p`` against ``log eps`` and its prediction."""
    if len(records) < 4:
        raise ValueError("slope fit needs at least 4 records")
    eps = np.array([r.epsilon for r in records])
    if eps.max() / eps.min() < 10.0:
        raise ValueError("slope fit needs epsilons spanning at least one decade")
    y = np.log([r.lp_norm_p for r in records])
    slope = float(np.polyfit(np.log(eps), y, 1)[0])
    return slope, predicted_slope(p, s)


def sweep_csv_text(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.row())
    return buf.getvalue()


def write_sweep_csv(records: Iterable[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(sweep_csv_text(records))
