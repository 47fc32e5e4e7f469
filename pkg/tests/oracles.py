"""Closed-form reference values, derived independently of the package code.

Gaussian values use e^{-r^2/2} under the unitary transform; tent values use
symbolic integration of the piecewise-linear profile.
"""
import math

import mpmath

PI = math.pi

# e^{-r^2/2}
GAUSS_L2 = PI**0.75
GAUSS_H1 = math.sqrt(1.5 * PI**1.5)
GAUSS_HHALF = math.sqrt(2 * PI)
GAUSS_COULOMB = math.sqrt(2) * PI**2.5
GAUSS_HARDY_1 = 2 * PI  # int |x|^-1 e^{-r^2} dx
GAUSS_WEIGHTED_L2_AM1 = math.sqrt(2 * PI)
GAUSS_ENERGY_S1 = math.sqrt(1.5 * PI**1.5 + math.sqrt(math.sqrt(2) * PI**2.5))
GAUSS_DECAY_RATIO = math.exp(-0.5) / math.sqrt(GAUSS_H1 * GAUSS_L2)
GAUSS_J_S1_2P4 = (PI / 2) ** 0.375 / (GAUSS_H1 ** (2 / 3) * GAUSS_COULOMB ** (1 / 12))

BALL_COULOMB = 32 * PI**2 / 15


def gauss_hs_sq(s: float) -> float:
    """||e^{-r^2/2}||_{H^s}^2 = 2 pi Gamma(s + 3/2)."""
    return 2 * PI * math.gamma(s + 1.5)


def gauss_lp(p: float) -> float:
    """||e^{-r^2/2}||_p = (2 pi / p)^{3/(2p)}."""
    return (2 * PI / p) ** (1.5 / p)


def tent_l2_sq(eps, R, S):
    return 4 * PI * eps**2 * (2 * S * R**2 / 3 + S**3 / 15)


def tent_lp_p(eps, R, S, p):
    return 4 * PI * eps**p * (2 * S * R**2 / (p + 1) + 4 * S**3 / ((p + 1) * (p + 2) * (p + 3)))


def tent_dirichlet_sq(eps, R, S):
    return 4 * PI * (eps / S) ** 2 * (2 * R**2 * S + 2 * S**3 / 3)


def tent_coulomb(eps, R, S):
    """Max-kernel double integral of f = tent^2 evaluated by mpmath at 30 digits."""
    a, b = R - S, R + S

    def f(t):
        return (eps * (S - abs(t - R)) / S) ** 2

    def inner(r):
        return mpmath.quad(lambda t: t * t * f(t), [a, R, r] if r > R else [a, r])

    def outer(r):
        return r * f(r) * inner(r)

    with mpmath.workdps(30):
        return float(2 * (4 * mpmath.pi) ** 2 * mpmath.quad(outer, [a, R, b]))


def gauss_fourier(rho):
    return math.exp(-rho * rho / 2)


def lanczos_reference(x):
    return float(mpmath.gamma(x))
