"""Verification suites comparing closed forms against the state-vector oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic, disorder, oracle, shorttime
from .chains import DimerSpec, Orientation, RandomChainSpec, make_chain, make_dimerized, make_uniform, sample_random


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: max error {self.error:.3e} <= {self.tolerance:.1e}{extra}"


def scaled_gap(a: float, b: float) -> float:
    """|a - b| / max(1, |b|): absolute for O(1) values, relative near divergences."""
    return abs(a - b) / max(1.0, abs(b))


def oracle_sweep(n_values, chains: int, rng: np.random.Generator, times=None):
    """Yield (n, t, analytic, oracle) for random chains with couplings in [0, 2]."""
    if times is None:
        times = np.linspace(0.0, 2.0 * np.pi, 20)
    for n in n_values:
        for _ in range(chains):
            chain = make_chain(rng.uniform(0.0, 2.0, n))
            for t in times:
                yield n, float(t), analytic.xi_pi4(chain, float(t)), oracle.ising_xi(chain, float(t))


def check_oracle_equivalence(n_max: int, chains: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst, flag_mismatch, points = 0.0, 0, 0
    for _, _, a, o in oracle_sweep(range(2, n_max + 1), chains, rng):
        points += 1
        if math.isinf(a) or math.isinf(o):
            flag_mismatch += math.isinf(a) != math.isinf(o)
            continue
        worst = max(worst, scaled_gap(a, o))
    return [
        Check(f"xi2 analytic vs oracle, N=2..{n_max}, {chains} chains", worst, 1e-9,
              f"{points} points, error scaled by max(1, xi2)"),
        Check("divergence flags agree", float(flag_mismatch), 0.0),
    ]


def check_initial_condition(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    chains = [make_uniform(n, 1.3) for n in range(2, 9)]
    chains += [make_dimerized(DimerSpec(m, 0.8, 0.4)) for m in range(1, 5)]
    chains += [sample_random(RandomChainSpec(n, 1.0, 0.5, int(rng.integers(2**32)))) for n in range(2, 9)]
    worst = max(abs(analytic.xi_pi4(c, 0.0) - 1.0) for c in chains)
    worst = max(worst, max(abs(oracle.ising_xi(c, 0.0) - 1.0) for c in chains))
    conserved = 0.0
    for n in (3, 6, 9):
        chain = make_chain(rng.uniform(0, 2, n))
        up = oracle.prepare_polarized(n)
        for t in np.linspace(0, 5, 7):
            conserved = max(conserved, abs(oracle.moments(oracle.evolve_ising(up, chain, t)).jx2 - n / 4))
    return [
        Check("xi2(0) = 1 on every path", worst, 1e-12),
        Check("<Jx^2> = N/4 under Ising evolution", conserved, 1e-12),
    ]


def check_short_time(sets: int, orientations: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for j in range(sets):
        ps = shorttime.random_pairset(4 + j % 3, rng)
        ac = shorttime.aggregate(ps)
        for _ in range(orientations):
            o = Orientation(*rng.uniform(0, 2 * np.pi, 3))
            exact = shorttime.noise_derivative(ac, o)
            fd = oracle.fd_derivative(ps, o)
            worst = max(worst, abs(fd - exact) / max(1e-8, 1e-6 * abs(exact)))
    return [Check("short-time derivative vs finite differences", worst, 1.0,
                  "error in units of max(1e-8, 1e-6 |value|)")]


def check_disorder(seed: int) -> list[Check]:
    worst_rel, worst_sigma = 0.0, 0.0
    for p in (0.25, 0.5, 0.75):
        for chi_t in np.linspace(0.2, 1.2, 6):
            est = disorder.xi_random_mc(p, 1.0, 100_000, float(chi_t), 8, seed)
            ref = disorder.xi_random_analytic(p, 1.0, float(chi_t))
            worst_rel = max(worst_rel, abs(est.mean - ref) / abs(ref))
            worst_sigma = max(worst_sigma, abs(est.mean - ref) / est.std_error if est.std_error else 0.0)
    return [
        Check("Monte Carlo vs large-N formula, relative", worst_rel, 0.02),
        Check("Monte Carlo vs large-N formula, standard errors", worst_sigma, 5.0),
    ]


def run(level: str = "fast", seed: int = 0) -> list[Check]:
    if level == "fast":
        checks = check_oracle_equivalence(8, 10, seed)
        checks += check_initial_condition(seed)
    elif level == "full":
        checks = check_oracle_equivalence(12, 50, seed)
        checks += check_initial_condition(seed)
        checks += check_short_time(20, 10, seed)
        checks += check_disorder(seed)
    else:
        raise ValueError(f"unknown verification level {level!r}")
    return checks
