"""Coupling chains, orientations and moment containers.

Conventions used throughout the package:

* hbar = 1, so couplings are angular frequencies and only products chi*t matter.
* Bonds are numbered 1..n. Bond i couples spin i to spin i+1 and spin n+1 is
  spin 1. Open chains are closed chains whose last bond is zero.
* Random chains use numpy's PCG64 generator seeded through ``SeedSequence``.
  Bond i (in order 1..n) is present iff the i-th draw of ``Generator.random``
  is below p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class InvalidChainError(ValueError):
    pass


class InvalidProbabilityError(ValueError):
    pass


class UnsupportedSizeError(ValueError):
    """Raised when a formula is used outside the chain sizes it holds for."""


class ResourceError(ValueError):
    """Raised when a state-vector computation would exceed the size guard."""


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class CouplingChain:
    """N spin-1/2 sites on a ring with nearest-neighbour Ising bonds."""

    couplings: tuple[float, ...]

    def __post_init__(self):
        chi = tuple(float(c) for c in self.couplings)
        if len(chi) < 2:
            raise InvalidChainError(f"a chain needs at least 2 spins, got {len(chi)}")
        if not all(math.isfinite(c) for c in chi):
            raise InvalidChainError("couplings must be finite")
        object.__setattr__(self, "couplings", chi)

    @property
    def n(self) -> int:
        return len(self.couplings)

    @property
    def boundary(self) -> str:
        return "open" if self.couplings[-1] == 0.0 else "closed"

    def bond(self, i: int) -> float:
        """Coupling of bond ``i`` (1-based, cyclic: bond n+k is bond k)."""
        return self.couplings[(i - 1) % self.n]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.couplings, dtype=float)

    def rolled(self, shift: int) -> "CouplingChain":
        """The same ring relabelled so bond i becomes bond i+shift."""
        return CouplingChain(tuple(np.roll(self.couplings, shift)))

    def __len__(self):
        return self.n


def make_chain(couplings: Sequence[float], boundary: str = "closed") -> CouplingChain:
    """Build a chain from explicit couplings.

    With ``boundary="open"`` the closing bond (spin n to spin 1) is forced to 0.
    """
    chi = [float(c) for c in couplings]
    if boundary not in ("closed", "open"):
        raise InvalidChainError(f"unknown boundary {boundary!r}")
    if boundary == "open" and chi:
        chi[-1] = 0.0
    return CouplingChain(tuple(chi))


def make_uniform(n: int, chi: float) -> CouplingChain:
    if n < 2:
        raise InvalidChainError(f"a chain needs at least 2 spins, got {n}")
    return CouplingChain((float(chi),) * int(n))


@dataclass(frozen=True)
class DimerSpec:
    pair_count: int
    chi: float
    delta: float

    @property
    def chi_odd(self) -> float:
        return self.chi * (1 + self.delta)

    @property
    def chi_even(self) -> float:
        return self.chi * (1 - self.delta)


def make_dimerized(spec: DimerSpec) -> CouplingChain:
    """Chain of 2M spins with chi_i = chi*(1 + (-1)**(i+1) * delta).

    Odd bonds (1, 3, ...) carry chi*(1+delta), even bonds chi*(1-delta).
    """
    if spec.pair_count < 1:
        raise InvalidChainError("a dimerized chain needs at least one pair")
    n = 2 * spec.pair_count
    return CouplingChain(
        tuple(spec.chi * (1 + (-1) ** (i + 1) * spec.delta) for i in range(1, n + 1))
    )


@dataclass(frozen=True)
class RandomChainSpec:
    n: int
    chi: float
    p: float
    seed: int = 0


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidProbabilityError(f"probability must lie in [0, 1], got {p}")


def random_bonds(n: int, chi: float, p: float, rng: np.random.Generator) -> np.ndarray:
    """Draw n bonds, one uniform draw per bond in bond order."""
    _check_probability(p)
    return np.where(rng.random(n) < p, float(chi), 0.0)


def sample_random(spec: RandomChainSpec) -> CouplingChain:
    _check_probability(spec.p)
    if spec.n < 2:
        raise InvalidChainError(f"a chain needs at least 2 spins, got {spec.n}")
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    return CouplingChain(tuple(random_bonds(spec.n, spec.chi, spec.p, rng)))


def _rz(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _ry(b: float) -> np.ndarray:
    c, s = math.cos(b), math.sin(b)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


@dataclass(frozen=True)
class Orientation:
    """Active Z-Y-Z Euler angles (radians): R = Rz(alpha) Ry(beta) Rz(gamma).

    The rotated frame has mean spin along R e_z and the measured
    perpendicular component along R e_x.
    """

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def matrix(self) -> np.ndarray:
        return _rz(self.alpha) @ _ry(self.beta) @ _rz(self.gamma)

    @classmethod
    def from_matrix(cls, r: np.ndarray) -> "Orientation":
        """Z-Y-Z angles of a proper rotation matrix."""
        r = np.asarray(r, dtype=float)
        cb = min(1.0, max(-1.0, r[2, 2]))
        sb = math.hypot(r[0, 2], r[1, 2])
        beta = math.atan2(sb, cb)
        if sb > 1e-12:
            alpha = math.atan2(r[1, 2], r[0, 2])
            gamma = math.atan2(r[2, 1], -r[2, 0])
        elif cb > 0:
            # beta = 0: only alpha + gamma is defined
            alpha = math.atan2(r[1, 0], r[0, 0])
            gamma = 0.0
        else:
            # beta = pi: only alpha - gamma is defined
            alpha = math.atan2(-r[0, 1], -r[0, 0])
            gamma = 0.0
            beta = math.pi
        return cls(alpha, beta, gamma)


@dataclass(frozen=True)
class ExpectationSet:
    """Collective moments for a z-polarized mean spin at time t."""

    t: float
    jz: float
    jx2: float
    jy2: float
    jxjy_sym: float


@dataclass(frozen=True)
class SqueezingCurve:
    theta: float
    times: np.ndarray = field(repr=False)
    xi2: np.ndarray = field(repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        xi2 = np.asarray(self.xi2, dtype=float)
        if times.shape != xi2.shape:
            raise ValueError("times and xi2 must have the same length")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "xi2", xi2)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.xi2.tolist()))

    @property
    def divergent(self) -> np.ndarray:
        return np.isposinf(self.xi2)

    def minimum(self) -> tuple[float, float]:
        """(t, xi2) at the smallest finite point of the curve."""
        finite = np.where(np.isfinite(self.xi2), self.xi2, np.inf)
        k = int(np.argmin(finite))
        return float(self.times[k]), float(self.xi2[k])
