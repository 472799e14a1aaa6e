"""Exact state-vector simulation of small spin-1/2 ensembles.

Site i (1-based) is bit i-1 of the amplitude index; bit value 0 is spin up
along z. Everything here is brute force on the full 2**n space and serves as
the reference the closed-form results are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sparse

from ._numerics import richardson_derivative, symmetric_limit
from .chains import CouplingChain, DimensionError, Orientation, ResourceError
from .shorttime import PairCouplingSet

MAX_QUBITS = 14
MAX_GENERAL_QUBITS = 10
DENSE_LIMIT = 8

_SX = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
_SY = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = 0.5 * np.array([[1, 0], [0, -1]], dtype=complex)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ResourceError(f"state vectors are limited to 1..{MAX_QUBITS} qubits, got {self.n}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n,):
            raise DimensionError(f"expected {2 ** self.n} amplitudes, got {amps.shape}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class CollectiveMoments:
    """First moments <J_a> and symmetrized second moments <J_a J_b + J_b J_a>/2."""

    first: np.ndarray
    second: np.ndarray
    n: int

    @property
    def jx(self) -> float:
        return float(self.first[0])

    @property
    def jy(self) -> float:
        return float(self.first[1])

    @property
    def jz(self) -> float:
        return float(self.first[2])

    @property
    def jx2(self) -> float:
        return float(self.second[0, 0])

    @property
    def jy2(self) -> float:
        return float(self.second[1, 1])

    @property
    def jxjy_sym(self) -> float:
        return 2.0 * float(self.second[0, 1])

    def covariance(self) -> np.ndarray:
        return self.second - np.outer(self.first, self.first)

    def variance(self, direction) -> float:
        u = np.asarray(direction, dtype=float)
        return float(u @ self.covariance() @ u)


@lru_cache(maxsize=None)
def _bits(n: int) -> np.ndarray:
    """bits[i, idx] = value of site i+1 in basis state idx."""
    idx = np.arange(2 ** n)
    return np.array([(idx >> i) & 1 for i in range(n)], dtype=np.int8)


def _single_spinor(o: Orientation) -> np.ndarray:
    def rz(a):
        return np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])

    def ry(b):
        c, s = math.cos(b / 2), math.sin(b / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)

    u = rz(o.alpha) @ ry(o.beta) @ rz(o.gamma)
    return u @ np.array([1, 0], dtype=complex)


def prepare_polarized(n: int, o: Orientation | None = None) -> StateVector:
    """Product state with every spin rotated from +z by ``o`` (default: all up)."""
    if not 2 <= n <= MAX_QUBITS:
        raise ResourceError(f"prepare_polarized supports 2..{MAX_QUBITS} spins, got {n}")
    spinor = _single_spinor(o or Orientation())
    amps = np.array([1.0 + 0j])
    for _ in range(n):
        amps = np.kron(spinor, amps)
    return StateVector(n, amps)


def _apply_each_site(amps: np.ndarray, n: int, gate: np.ndarray) -> np.ndarray:
    """Apply the same single-qubit gate to every site."""
    psi = amps.reshape((2,) * n)
    for axis in range(n):
        psi = np.moveaxis(np.tensordot(gate, psi, axes=([1], [axis])), 0, axis)
    return psi.reshape(-1)


def ising_energies(chain: CouplingChain) -> np.ndarray:
    """sum_i chi_i s_i s_{i+1} for every x-basis product state, s = +-1/2."""
    s = 0.5 - _bits(chain.n)
    chi = chain.as_array()
    return (chi[:, None] * s * np.roll(s, -1, axis=0)).sum(axis=0)


def evolve_ising(s: StateVector, chain: CouplingChain, t: float) -> StateVector:
    """exp(-i t sum_i chi_i jx_i jx_{i+1}) applied exactly in the x basis."""
    if chain.n != s.n:
        raise DimensionError(f"chain has {chain.n} spins but state has {s.n}")
    psi = _apply_each_site(s.amplitudes, s.n, _HADAMARD)
    psi = psi * np.exp(-1j * t * ising_energies(chain))
    return StateVector(s.n, _apply_each_site(psi, s.n, _HADAMARD))


@lru_cache(maxsize=64)
def _site_operators(n: int) -> tuple:
    """ops[i][a] = sparse j_a on site i+1 (a = x, y, z)."""
    ops = []
    for i in range(n):
        left = sparse.identity(2 ** (n - 1 - i), format="csr")
        right = sparse.identity(2 ** i, format="csr")
        ops.append(tuple(sparse.kron(sparse.kron(left, op), right, format="csr") for op in (_SX, _SY, _SZ)))
    return tuple(ops)


def pair_hamiltonian(ps: PairCouplingSet) -> sparse.csr_matrix:
    """Sparse H = sum_terms j_k^T m j_l."""
    if ps.n > MAX_GENERAL_QUBITS:
        raise ResourceError(f"general Hamiltonians are limited to {MAX_GENERAL_QUBITS} spins")
    ops = _site_operators(ps.n)
    dim = 2 ** ps.n
    h = sparse.csr_matrix((dim, dim), dtype=complex)
    for term in ps.terms:
        for a in range(3):
            for b in range(3):
                if term.m[a, b] != 0.0:
                    h = h + term.m[a, b] * (ops[term.k - 1][a] @ ops[term.l - 1][b])
    return h


def _hamiltonian_bound(ps: PairCouplingSet) -> float:
    return sum(0.25 * float(np.abs(t.m).sum()) for t in ps.terms)


def _taylor_expm_multiply(h, psi: np.ndarray, t: float, bound: float, tol: float = 1e-13) -> np.ndarray:
    """exp(-iHt) psi by scaled Taylor series.

    With x = bound*|t|/steps <= 1 the remainder after K terms of each step is at
    most e * x**(K+1)/(K+1)!; K is raised until the summed remainder over all
    steps is below ``tol``.
    """
    steps = max(1, math.ceil(bound * abs(t)))
    tau = t / steps
    x = bound * abs(tau)
    k_max, rem = 0, math.e * x
    while rem * steps > tol:
        k_max += 1
        rem = math.e * x ** (k_max + 1) / math.factorial(k_max + 1)
    out = psi.astype(complex)
    for _ in range(steps):
        term = out
        acc = out.copy()
        for k in range(1, k_max + 1):
            term = (-1j * tau / k) * (h @ term)
            acc += term
        out = acc
    return out


def propagator(ps: PairCouplingSet, method: str | None = None):
    """Return ``step(amplitudes, t) -> amplitudes`` applying exp(-i H t).

    Dense Hermitian diagonalization up to 8 spins, scaled Taylor series with a
    certified remainder for 9 and 10 spins. ``method`` ("dense" or "taylor")
    overrides the choice. The Hamiltonian is built and factored once.
    """
    if ps.n > MAX_GENERAL_QUBITS:
        raise ResourceError(f"general evolution is limited to {MAX_GENERAL_QUBITS} spins")
    if not ps.terms:
        return lambda psi, t: psi
    method = method or ("dense" if ps.n <= DENSE_LIMIT else "taylor")
    h = pair_hamiltonian(ps)
    if method == "dense":
        hd = h.toarray()
        energies, vecs = np.linalg.eigh(0.5 * (hd + hd.conj().T))
        vecs_h = vecs.conj().T
        return lambda psi, t: vecs @ (np.exp(-1j * energies * t) * (vecs_h @ psi))
    if method == "taylor":
        bound = _hamiltonian_bound(ps)
        return lambda psi, t: _taylor_expm_multiply(h, psi, t, bound)
    raise ValueError(f"unknown method {method!r}")


def evolve_general(s: StateVector, ps: PairCouplingSet, t: float, method: str | None = None) -> StateVector:
    """exp(-i H t)|s> for H = sum_{k != l} j_k^T m^{kl} j_l."""
    if ps.n != s.n:
        raise DimensionError(f"pair set has {ps.n} spins but state has {s.n}")
    if s.n > MAX_GENERAL_QUBITS:
        raise ResourceError(f"general evolution is limited to {MAX_GENERAL_QUBITS} spins")
    if not ps.terms or t == 0.0:
        return s
    return StateVector(s.n, propagator(ps, method)(s.amplitudes, t))


def collective_actions(s: StateVector) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J_x psi, J_y psi, J_z psi)."""
    n, psi = s.n, s.amplitudes
    bits = _bits(n)
    idx = np.arange(2 ** n)
    jx = np.zeros_like(psi)
    jy = np.zeros_like(psi)
    for i in range(n):
        flipped = psi[idx ^ (1 << i)]
        jx += 0.5 * flipped
        jy += 0.5j * (2 * bits[i] - 1) * flipped
    jz = (0.5 * n - bits.sum(axis=0)) * psi
    return jx, jy, jz


def moments(s: StateVector) -> CollectiveMoments:
    psi = s.amplitudes
    acts = collective_actions(s)
    first = np.array([np.vdot(psi, a).real for a in acts])
    second = np.array([[np.vdot(a, b).real for b in acts] for a in acts])
    return CollectiveMoments(first, 0.5 * (second + second.T), s.n)


def site_corr_yy(s: StateVector, i: int, j: int) -> float:
    """Symmetrized <jy_i jy_j> for 1-based sites i, j."""
    for site in (i, j):
        if not 1 <= site <= s.n:
            raise ValueError(f"site {site} outside 1..{s.n}")
    bits = _bits(s.n)
    idx = np.arange(2 ** s.n)

    def jy(site):
        b = site - 1
        return 0.5j * (2 * bits[b] - 1) * s.amplitudes[idx ^ (1 << b)]

    return float(np.vdot(jy(i), jy(j)).real)


def perpendicular_frame(mean: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors (e1, e2) spanning the plane normal to ``mean``.

    Gram-Schmidt of x, y (then z) against the mean direction, so that a mean
    spin along +-z gives e1 = x, e2 = y.
    """
    n = mean / np.linalg.norm(mean)
    basis = [n]
    for cand in np.eye(3):
        v = cand - sum((cand @ b) * b for b in basis)
        if np.linalg.norm(v) > 1e-6:
            basis.append(v / np.linalg.norm(v))
        if len(basis) == 3:
            break
    return basis[1], basis[2]


def xi_from_moments(m: CollectiveMoments, theta: float) -> float:
    length2 = float(m.first @ m.first)
    if math.sqrt(length2) < 1e-12:
        return math.inf
    e1, e2 = perpendicular_frame(m.first)
    u = math.cos(theta) * e1 + math.sin(theta) * e2
    return m.n * m.variance(u) / length2


def xi_oracle(s: StateVector, theta: float = math.pi / 4) -> float:
    """N (Delta J_theta)^2 / |<J>|^2 with J_theta normal to the mean spin."""
    return xi_from_moments(moments(s), theta)


def variance_track(ps: PairCouplingSet, o: Orientation):
    """t -> variance of J along R e_x, starting polarized along R e_z."""
    step = propagator(ps)
    psi0 = prepare_polarized(ps.n, o).amplitudes
    axis = o.matrix()[:, 0]
    return lambda t: moments(StateVector(ps.n, step(psi0, t))).variance(axis)


def mean_spin_track(ps: PairCouplingSet, o: Orientation):
    """t -> |<J>|^2, starting polarized along R e_z."""
    step = propagator(ps)
    psi0 = prepare_polarized(ps.n, o).amplitudes

    def f(t):
        first = moments(StateVector(ps.n, step(psi0, t))).first
        return float(first @ first)

    return f


def default_fd_step(ps: PairCouplingSet) -> float:
    s = np.zeros((3, 3))
    for term in ps.terms:
        s += term.m
    norm = np.linalg.norm(0.5 * (s + s.T), 2)
    return 1e-3 / norm if norm > 0 else 1e-3


def fd_derivative(ps: PairCouplingSet, o: Orientation, dt: float | None = None) -> float:
    """Numerical d/dt of the perpendicular variance at t = 0."""
    if dt is None:
        dt = default_fd_step(ps)
    if dt <= 0:
        raise ValueError("dt must be positive")
    if ps.n > MAX_GENERAL_QUBITS:
        raise ResourceError(f"general evolution is limited to {MAX_GENERAL_QUBITS} spins")
    if not ps.terms:
        return 0.0
    return richardson_derivative(variance_track(ps, o), dt)


def ising_xi(chain: CouplingChain, t: float, theta: float = math.pi / 4) -> float:
    """xi^2 of the all-up state evolved under the Ising chain.

    When the mean spin vanishes together with the lab-frame J_theta variance
    (a 0/0 point such as two spins at chi t = pi/2) the symmetric limit in t is
    returned; a vanishing mean spin alone gives +inf.
    """
    up = prepare_polarized(chain.n)

    def f(tt):
        m = moments(evolve_ising(up, chain, tt))
        if math.sqrt(float(m.first @ m.first)) >= 1e-12:
            return xi_from_moments(m, theta)
        u = np.array([math.cos(theta), math.sin(theta), 0.0])
        if m.variance(u) >= 1e-12:
            return math.inf
        chi_max = float(np.abs(chain.as_array()).max())
        return symmetric_limit(f, tt, 1e-2 / chi_max if chi_max > 0 else 1e-2)

    return f(t)
