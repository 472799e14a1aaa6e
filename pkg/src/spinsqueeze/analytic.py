"""Closed-form collective moments and squeezing for Ising chains.

H = sum_i chi_i jx_i jx_{i+1} acting on all spins up along z. With
a_i = chi_i t / 2 the moments are

    <J_z>         = 1/2 sum_i cos a_i cos a_{i+1}
    <J_x^2>       = N/4
    <J_y^2>       = N/4 + 1/2 sum_i cos a_i sin a_{i+1} sin a_{i+2} cos a_{i+3}   (N >= 5)
    <JxJy + JyJx> = -1/2 sum_i sin(a_i + a_{i+1})

and xi^2 = N Var(J_theta) / <J_z>^2. Chains with N <= 4 have index
collisions in the y-y correlators and use their own expressions.

Numerators are written with 1 - sin x = 2 sin^2(pi/4 - x/2) so that the
cancellation near sin x = 1 does not eat the precision. A vanishing
denominator gives +inf unless the numerator vanishes with it, in which case
the value is taken as the symmetric limit in t.
"""

from __future__ import annotations

import math

import numpy as np

from ._numerics import symmetric_limit
from .chains import CouplingChain, ExpectationSet, SqueezingCurve, UnsupportedSizeError

EPS = np.finfo(float).eps
PI4 = math.pi / 4

__all__ = [
    "normalize_theta",
    "mean_jz",
    "corr_yy",
    "jy_squared",
    "jxjy_sym",
    "expectations",
    "xi_theta",
    "xi_theta_optimal",
    "xi_pi4_general",
    "xi_pi4_uniform",
    "xi_pi4_n2",
    "xi_pi4_n3",
    "xi_pi4_n4",
    "xi_pi4_dimerized",
    "xi_pi4",
    "xi_chain",
    "curve",
]


def normalize_theta(theta: float) -> float:
    """Map theta onto (-pi/2, pi/2]; J_theta and J_{theta+pi} have equal variance."""
    th = math.remainder(theta, math.pi)
    return math.pi / 2 if th == -math.pi / 2 else th


def _half_angles(chain: CouplingChain, t: float) -> np.ndarray:
    return chain.as_array() * t / 2.0


def _shift(a: np.ndarray, k: int) -> np.ndarray:
    """Element i of the result is a_{i+k} (cyclic)."""
    return np.roll(a, -k)


def _one_minus_sin(x):
    return 2.0 * np.sin(PI4 - 0.5 * np.asarray(x)) ** 2


def _zero_floor(a: np.ndarray) -> float:
    # rounding floor of a mean of products of cosines of the a_i
    return 8.0 * EPS * (1.0 + float(np.max(np.abs(a)))) if a.size else 8.0 * EPS


def _limit_step(chi_max: float) -> float:
    return 1e-2 / chi_max if chi_max > 0 else 1e-2


def _ratio(num: float, den: float, floor: float, limit) -> float:
    """num / den**2 with the singular-point policy."""
    if abs(den) > floor:
        return num / (den * den)
    if abs(num) >= 1e-12:
        return math.inf
    return limit()


def _require_ring(chain: CouplingChain, what: str) -> None:
    if chain.n <= 4:
        raise UnsupportedSizeError(
            f"{what} holds for N >= 5 only (got N = {chain.n}); use xi_pi4 for small chains"
        )


# -- moments ------------------------------------------------------------------


def mean_jz(chain: CouplingChain, t: float) -> float:
    """<J_z>(t) for N >= 3; for N = 2 both bonds act on one pair (see expectations)."""
    a = _half_angles(chain, t)
    if chain.n == 2:
        return math.cos(a.sum())
    return 0.5 * float(np.sum(np.cos(a) * np.cos(_shift(a, 1))))


def corr_yy(chain: CouplingChain, i: int, k: int, t: float) -> float:
    """Symmetrized <jy_i jy_{i+k}>(t) for sites i (1-based) and offset 0 <= k < N."""
    _require_ring(chain, "corr_yy")
    n = chain.n
    if not 0 <= k < n:
        raise ValueError(f"offset must lie in 0..{n - 1}, got {k}")
    if k == 0:
        return 0.25
    if k == n - 2:
        # mirror image of offset 2 seen from site i-2
        i, k = i - 2, 2
    if k != 2:
        return 0.0

    def c(j):
        return math.cos(chain.bond(j) * t / 2)

    def s(j):
        return math.sin(chain.bond(j) * t / 2)

    return 0.25 * c(i - 1) * s(i) * s(i + 1) * c(i + 2)


def _quad_sum(a: np.ndarray) -> float:
    """sum_i cos a_i sin a_{i+1} sin a_{i+2} cos a_{i+3}."""
    return float(np.sum(np.cos(a) * np.sin(_shift(a, 1)) * np.sin(_shift(a, 2)) * np.cos(_shift(a, 3))))


def jy_squared(chain: CouplingChain, t: float) -> float:
    _require_ring(chain, "jy_squared")
    return chain.n / 4 + 0.5 * _quad_sum(_half_angles(chain, t))


def jxjy_sym(chain: CouplingChain, t: float) -> float:
    """<J_x J_y + J_y J_x>(t); valid for every N >= 2."""
    a = _half_angles(chain, t)
    return -0.5 * float(np.sum(np.sin(a + _shift(a, 1))))


def expectations(chain: CouplingChain, t: float) -> ExpectationSet:
    """Collective moments for any N >= 2."""
    n = chain.n
    a = _half_angles(chain, t)
    if n == 2:
        # H = (chi_1 + chi_2) jx_1 jx_2
        return ExpectationSet(t, math.cos(a.sum()), 0.5, 0.5, -math.sin(a.sum()))
    if n == 3:
        jy2 = 0.75 + 0.5 * float(np.sum(np.sin(a) * np.sin(_shift(a, 1))))
    elif n == 4:
        jy2 = 1.0 + 0.5 * float(
            np.sum(np.sin(a) * np.sin(_shift(a, 1)) * np.cos(_shift(a, 2)) * np.cos(_shift(a, 3)))
        )
    else:
        jy2 = jy_squared(chain, t)
    return ExpectationSet(t, mean_jz(chain, t), n / 4, jy2, jxjy_sym(chain, t))


# -- squeezing from moments ---------------------------------------------------


def _quadratic_form(es: ExpectationSet, theta: float) -> float:
    c, s = math.cos(theta), math.sin(theta)
    return c * c * es.jx2 + s * s * es.jy2 + s * c * es.jxjy_sym


def xi_theta(es: ExpectationSet, theta: float, n: int) -> float:
    """N Var(cos(theta) J_x + sin(theta) J_y) / <J_z>^2; +inf when <J_z> vanishes."""
    if abs(es.jz) < 1e-12 * n:
        return math.inf
    return n * _quadratic_form(es, theta) / es.jz ** 2


def xi_theta_optimal(es: ExpectationSet, n: int) -> tuple[float, float]:
    """(theta*, xi2_min) minimizing xi_theta over the quadrature angle."""
    a, b, c = es.jx2, es.jy2, es.jxjy_sym
    half_diff = 0.5 * (a - b)
    radius = math.hypot(half_diff, 0.5 * c)
    # Q(theta) = (A+B)/2 + radius*cos(2 theta - phi)
    phi = math.atan2(0.5 * c, half_diff) if radius > 0 else 0.0
    theta = normalize_theta(0.5 * (phi + math.pi))
    if abs(es.jz) < 1e-12 * n:
        return theta, math.inf
    return theta, n * (0.5 * (a + b) - radius) / es.jz ** 2


# -- xi^2 at theta = pi/4 -----------------------------------------------------


def _general_parts(a: np.ndarray) -> tuple[float, float]:
    n = a.size
    num = float(np.sum(_one_minus_sin(a + _shift(a, 1)))) + _quad_sum(a)
    den = float(np.sum(np.cos(a) * np.cos(_shift(a, 1))))
    return num / n, den / n


def xi_pi4_general(chain: CouplingChain, t: float) -> float:
    """xi^2 at theta = pi/4 for arbitrary couplings, N >= 5."""
    _require_ring(chain, "xi_pi4_general")
    chi = chain.as_array()

    def f(tt):
        a = chi * tt / 2
        num, den = _general_parts(a)
        return _ratio(num, den, _zero_floor(a), lambda: symmetric_limit(f, tt, _limit_step(np.abs(chi).max())))

    return f(t)


def xi_pi4_uniform(chi: float, t: float) -> float:
    """Uniform closed chain with N >= 4: (1 - sin(chi t)/2)^2 / cos^4(chi t / 2)."""
    x = chi * t
    c = math.cos(x / 2)
    if abs(c) <= 8.0 * EPS * (1.0 + abs(x / 2)):
        return math.inf
    return (1.0 - 0.5 * math.sin(x)) ** 2 / c ** 4


def xi_pi4_n2(chi_pair: float, t: float) -> float:
    """Two spins with H = 2 chi jx_1 jx_2: (1 - sin chi t)/cos^2 chi t = 1/(1 + sin chi t)."""
    d = 1.0 + math.sin(chi_pair * t)
    if d <= 8.0 * EPS * (1.0 + abs(chi_pair * t)):
        return math.inf
    return 1.0 / d


def _small_parts(a: np.ndarray) -> tuple[float, float]:
    n = a.size
    pair = a + _shift(a, 1)
    if n == 3:
        extra = np.sin(a) * np.sin(_shift(a, 1))
    else:
        extra = np.sin(a) * np.sin(_shift(a, 1)) * np.cos(_shift(a, 2)) * np.cos(_shift(a, 3))
    num = float(np.sum(_one_minus_sin(pair) + extra))
    den = float(np.sum(np.cos(a) * np.cos(_shift(a, 1))))
    return num / n, den / n


def _xi_small(chi: np.ndarray, t: float) -> float:
    def f(tt):
        a = chi * tt / 2
        num, den = _small_parts(a)
        return _ratio(num, den, _zero_floor(a), lambda: symmetric_limit(f, tt, _limit_step(np.abs(chi).max())))

    return f(t)


def xi_pi4_n3(chi1: float, chi2: float, chi3: float, t: float) -> float:
    return _xi_small(np.array([chi1, chi2, chi3], dtype=float), t)


def xi_pi4_n4(chi1: float, chi2: float, chi3: float, chi4: float, t: float) -> float:
    return _xi_small(np.array([chi1, chi2, chi3, chi4], dtype=float), t)


def xi_pi4_dimerized(chi: float, delta: float, t: float) -> float:
    """Dimerized ring chi_i = chi (1 + (-1)^(i+1) delta), any even N >= 6."""
    chi_o, chi_e = chi * (1 + delta), chi * (1 - delta)

    def f(tt):
        num = float(_one_minus_sin(chi * tt)) + 0.25 * math.sin(chi_o * tt) * math.sin(chi_e * tt)
        ao, ae = chi_o * tt / 2, chi_e * tt / 2
        den = math.cos(ao) * math.cos(ae)
        floor = 8.0 * EPS * (1.0 + max(abs(ao), abs(ae)))
        return _ratio(num, den, floor, lambda: symmetric_limit(f, tt, _limit_step(max(abs(chi_o), abs(chi_e)))))

    return f(t)


def xi_pi4(chain: CouplingChain, t: float) -> float:
    """xi^2 at theta = pi/4, choosing the expression valid for the chain size."""
    n = chain.n
    if n == 2:
        return xi_pi4_n2(0.5 * (chain.couplings[0] + chain.couplings[1]), t)
    if n == 3:
        return xi_pi4_n3(*chain.couplings, t)
    if n == 4:
        return xi_pi4_n4(*chain.couplings, t)
    return xi_pi4_general(chain, t)


def xi_chain(chain: CouplingChain, t: float, theta: float = PI4) -> float:
    """xi^2 for any quadrature angle, with the same singular-point policy as xi_pi4."""
    theta = normalize_theta(theta)
    if math.isclose(theta, PI4, rel_tol=0, abs_tol=1e-15):
        return xi_pi4(chain, t)
    chi_max = float(np.abs(chain.as_array()).max())

    def f(tt):
        es = expectations(chain, tt)
        # N Q / jz^2 == (Q / (N/4)) / (jz / (N/2))^2
        num = _quadratic_form(es, theta) / (chain.n / 4)
        den = es.jz / (chain.n / 2)
        a = _half_angles(chain, tt)
        floor = _zero_floor(np.array([a.sum()]) if chain.n == 2 else a)
        return _ratio(num, den, floor, lambda: symmetric_limit(f, tt, _limit_step(chi_max)))

    return f(t)


def curve(chain: CouplingChain, times, theta: float = PI4) -> SqueezingCurve:
    times = np.asarray(times, dtype=float)
    xi2 = np.array([xi_chain(chain, float(t), theta) for t in times])
    return SqueezingCurve(normalize_theta(theta), times, xi2)
