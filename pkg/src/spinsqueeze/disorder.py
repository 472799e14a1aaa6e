"""Randomly diluted chains: bond averages, large-N squeezing, Monte Carlo.

Each bond is chi with probability p and 0 otherwise, independently. Monte
Carlo realizations draw from numpy's PCG64; the seed is split with
``SeedSequence(seed).spawn(samples)`` so sample j always sees the same
stream no matter how the samples are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import symmetric_limit
from .analytic import xi_pi4_general
from .chains import CouplingChain, InvalidChainError, _check_probability, random_bonds


@dataclass(frozen=True)
class EnsembleEstimate:
    mean: float
    std_error: float
    samples: int


def trig_means(p: float, mu: float) -> tuple[float, float, float]:
    """Bond averages of cos(chi_i t/2), sin(chi_i t/2), sin((chi_i + chi_{i+1}) t/2), mu = chi t/2."""
    _check_probability(p)
    return (
        p * math.cos(mu) + (1 - p),
        p * math.sin(mu),
        p * p * math.sin(2 * mu) + 2 * p * (1 - p) * math.sin(mu),
    )


def xi_random_analytic(p: float, chi: float, t: float) -> float:
    """Large-N xi^2 at theta = pi/4 for the diluted chain."""
    c, s, s_pair = trig_means(p, chi * t / 2)
    num = 1 + c * c * s * s - s_pair
    if abs(c) > 8 * np.finfo(float).eps * (1 + abs(chi * t / 2)):
        return num / c ** 4
    if abs(num) >= 1e-12:
        return math.inf
    step = 1e-2 / abs(chi) if chi else 1e-2
    return symmetric_limit(lambda tt: xi_random_analytic(p, chi, tt), t, step)


def xi_random_mc(p: float, chi: float, n: int, t: float, samples: int, seed: int = 0) -> EnsembleEstimate:
    """Mean and standard error of the per-realization xi^2 over random chains."""
    _check_probability(p)
    if n < 5:
        raise InvalidChainError(f"Monte Carlo uses the N >= 5 expression, got N = {n}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    children = np.random.SeedSequence(seed).spawn(samples)
    values = np.array(
        [
            xi_pi4_general(CouplingChain(tuple(random_bonds(n, chi, p, np.random.default_rng(c)))), t)
            for c in children
        ]
    )
    if np.all(values == values[0]):
        return EnsembleEstimate(float(values[0]), 0.0, samples)
    mean = float(values.mean())
    return EnsembleEstimate(mean, float(values.std(ddof=1) / math.sqrt(samples)), samples)
