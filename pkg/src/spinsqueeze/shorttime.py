"""Short-time noise change for arbitrary pairwise spin Hamiltonians.

For H = sum_{k != l} j_k^T m^{kl} j_l and a coherent state polarized along
R e_z, the initial rate of change of the variance of J along R e_x is

    d/dt (Delta J_perp)^2 = 1/2 * (R^T M R)[y, x],   M = sym(sum m^{kl}),

so only the symmetrized aggregate matrix M matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import CouplingChain, Orientation
from .eig3 import eigh3


@dataclass(frozen=True)
class PairTerm:
    k: int
    l: int
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"coupling matrix for ({self.k}, {self.l}) must be 3x3, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("coupling matrices must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


@dataclass(frozen=True)
class PairCouplingSet:
    """Spin count plus a collection of (k, l, m) terms, sites 1-based."""

    n: int
    terms: tuple[PairTerm, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("pair coupling set needs at least one spin")
        terms = tuple(t if isinstance(t, PairTerm) else PairTerm(*t) for t in self.terms)
        for t in terms:
            if t.k == t.l:
                raise ValueError(f"term couples site {t.k} to itself")
            if not (1 <= t.k <= self.n and 1 <= t.l <= self.n):
                raise ValueError(f"term ({t.k}, {t.l}) outside sites 1..{self.n}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, doc: dict) -> "PairCouplingSet":
        """Parse ``{"n": int, "terms": [{"k": int, "l": int, "m": [[...]]}, ...]}``."""
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValueError("'n' must be an integer")
        terms = []
        for entry in doc.get("terms", []):
            k, l = entry["k"], entry["l"]
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (k, l)):
                raise ValueError("'k' and 'l' must be integers")
            terms.append(PairTerm(k, l, np.asarray(entry["m"], dtype=float)))
        return cls(n, tuple(terms))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"k": t.k, "l": t.l, "m": t.m.tolist()} for t in self.terms],
        }


@dataclass(frozen=True)
class AggregateCoupling:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, matching eigenvalues (descending)

    @classmethod
    def from_matrix(cls, m) -> "AggregateCoupling":
        m = np.asarray(m, dtype=float)
        m = 0.5 * (m + m.T)
        vals, vecs = eigh3(m)
        return cls(m, vals, vecs)


def aggregate(ps: PairCouplingSet) -> AggregateCoupling:
    s = np.zeros((3, 3))
    for t in ps.terms:
        s += t.m
    return AggregateCoupling.from_matrix(s)


def rotation_matrix(o: Orientation) -> np.ndarray:
    return o.matrix()


def noise_derivative(ac: AggregateCoupling | np.ndarray, o: Orientation) -> float:
    """Initial rate of change of the variance of J along R e_x (hbar = 1)."""
    m = ac.matrix if isinstance(ac, AggregateCoupling) else np.asarray(ac, dtype=float)
    m = 0.5 * (m + m.T)
    r = o.matrix()
    return 0.5 * float(r[:, 1] @ m @ r[:, 0])


def _frame(mean_axis: np.ndarray, p: np.ndarray, sign: int) -> np.ndarray:
    """Right-handed frame with e_z = mean_axis and e_x at +-45 deg from p."""
    q = np.cross(mean_axis, p)
    e1 = (p + sign * q) / math.sqrt(2.0)
    e2 = np.cross(mean_axis, e1)
    return np.column_stack([e1, e2, mean_axis])


def optimal_orientation(ac: AggregateCoupling) -> tuple[Orientation, float]:
    """Orientation with the most negative initial noise rate, and that rate.

    Candidates put the mean spin along each eigenvector of M in turn and the
    measured component at +-45 degrees between the other two. The best rate
    is -(M_max - M_min)/4, reached with the mean spin along the middle
    eigenvector, which is also the tie-break when several candidates reach it.
    """
    vals, vecs = ac.eigenvalues, ac.eigenvectors
    spread = float(vals[0] - vals[2])
    scale = max(float(np.abs(vals).max()), 1e-300)
    if spread <= 1e-12 * scale:
        return Orientation(), 0.0

    best = None
    for axis in (1, 0, 2):
        others = [k for k in range(3) if k != axis]
        for sign in (1, -1):
            r = _frame(vecs[:, axis], vecs[:, others[0]], sign)
            rate = 0.5 * float(r[:, 1] @ ac.matrix @ r[:, 0])
            if best is None or rate < best[1] - 1e-14 * scale:
                best = (r, rate)
    return Orientation.from_matrix(best[0]), -0.25 * spread


def ising_to_pairset(chain: CouplingChain) -> PairCouplingSet:
    """Write H = sum_i chi_i jx_i jx_{i+1} as symmetric (i, i+1) / (i+1, i) terms."""
    n = chain.n
    terms = []
    for i in range(1, n + 1):
        j = i % n + 1
        m = np.zeros((3, 3))
        m[0, 0] = chain.bond(i) / 2.0
        terms.append(PairTerm(i, j, m))
        terms.append(PairTerm(j, i, m))
    return PairCouplingSet(n, tuple(terms))


def random_pairset(n: int, rng: np.random.Generator, n_terms: int | None = None,
                   scale: float = 1.0) -> PairCouplingSet:
    """Pair set with Gaussian 3x3 matrices on random ordered site pairs."""
    if n_terms is None:
        n_terms = n * (n - 1)
    terms = []
    for _ in range(n_terms):
        k, l = rng.choice(n, size=2, replace=False) + 1
        terms.append(PairTerm(int(k), int(l), scale * rng.standard_normal((3, 3))))
    return PairCouplingSet(n, tuple(terms))


def euler_grid(points: int = 30) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened (alpha, beta, gamma) arrays of a points**3 grid.

    alpha and gamma cover [0, 2pi), beta covers [0, pi].
    """
    ang = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    bet = np.linspace(0.0, np.pi, points)
    a, b, g = np.meshgrid(ang, bet, ang, indexing="ij")
    return a.ravel(), b.ravel(), g.ravel()


def noise_derivative_many(m, alpha, beta, gamma) -> np.ndarray:
    """Vectorized noise_derivative over arrays of Euler angles."""
    m = np.asarray(m, dtype=float)
    m = 0.5 * (m + m.T)
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    # columns x and y of Rz(alpha) Ry(beta) Rz(gamma)
    ex = np.stack([ca * cb * cg - sa * sg, sa * cb * cg + ca * sg, -sb * cg])
    ey = np.stack([-ca * cb * sg - sa * cg, -sa * cb * sg + ca * cg, sb * sg])
    return 0.5 * np.einsum("in,ij,jn->n", ey, m, ex)
