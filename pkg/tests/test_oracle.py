import math

import numpy as np
import pytest

from spinsqueeze._numerics import richardson_derivative, symmetric_limit
from spinsqueeze.chains import DimensionError, Orientation, ResourceError, make_chain, make_uniform
from spinsqueeze.shorttime import aggregate, ising_to_pairset, noise_derivative, random_pairset
from spinsqueeze.oracle import (
    MAX_QUBITS,
    StateVector,
    evolve_general,
    evolve_ising,
    fd_derivative,
    ising_energies,
    ising_xi,
    mean_spin_track,
    moments,
    prepare_polarized,
    propagator,
    site_corr_yy,
    variance_track,
    xi_oracle,
)


@pytest.fixture
def rng():
    return np.random.default_rng(777)


def random_state(n, rng):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(n, v / np.linalg.norm(v))


# -- states --------------------------------------------------------------------


def test_all_up_moments():
    m = moments(prepare_polarized(4))
    assert np.allclose(m.first, [0, 0, 2])
    assert m.jx2 == pytest.approx(1.0)
    assert m.jy2 == pytest.approx(1.0)
    assert m.second[2, 2] == pytest.approx(4.0)


def test_all_up_is_basis_state_zero():
    amps = prepare_polarized(3).amplitudes
    assert amps[0] == pytest.approx(1.0)
    assert np.allclose(amps[1:], 0)


@pytest.mark.parametrize("angles", [(0.3, 1.1, -0.4), (2.0, 0.2, 1.0), (0, math.pi / 2, 0)])
def test_polarized_mean_follows_rotation(angles):
    o = Orientation(*angles)
    m = moments(prepare_polarized(5, o))
    assert np.allclose(m.first, 2.5 * o.matrix()[:, 2], atol=1e-13)
    # coherent state: variance N/4 in every perpendicular direction
    for k in (0, 1):
        assert m.variance(o.matrix()[:, k]) == pytest.approx(5 / 4, abs=1e-13)


def test_state_size_limits():
    with pytest.raises(ResourceError):
        prepare_polarized(MAX_QUBITS + 1)
    with pytest.raises(DimensionError):
        StateVector(3, np.ones(7))


def test_amplitudes_read_only():
    s = prepare_polarized(3)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


def test_second_moments_psd(rng):
    for n in (2, 4, 6):
        m = moments(random_state(n, rng))
        assert np.linalg.eigvalsh(m.covariance()).min() >= -1e-12
        assert np.trace(m.second) <= n / 2 * (n / 2 + 1) + 1e-12


def test_casimir_of_polarized_state():
    m = moments(prepare_polarized(6, Orientation(0.5, 0.7, 0.9)))
    assert np.trace(m.second) == pytest.approx(3 * 4, abs=1e-12)


# -- Ising evolution -----------------------------------------------------------


def test_ising_energies_sign_convention():
    e = ising_energies(make_chain([1.0, 2.0, 3.0]))
    # all x-spins aligned: every bond contributes +chi/4
    assert e[0] == pytest.approx(1.5)


@pytest.mark.parametrize("n", [2, 5, 9])
def test_ising_evolution_is_unitary(n, rng):
    chain = make_chain(rng.uniform(0, 2, n))
    s = evolve_ising(random_state(n, rng), chain, 1.7)
    assert s.norm() == pytest.approx(1.0, abs=1e-13)


def test_ising_time_reversal(rng):
    chain = make_chain(rng.uniform(0, 2, 6))
    s0 = random_state(6, rng)
    back = evolve_ising(evolve_ising(s0, chain, 2.3), chain, -2.3)
    assert np.allclose(back.amplitudes, s0.amplitudes, atol=1e-13)


@pytest.mark.parametrize("n", [3, 7, 11])
def test_jx_squared_conserved(n, rng):
    chain = make_chain(rng.uniform(0, 2, n))
    up = prepare_polarized(n)
    for t in np.linspace(0, 6, 7):
        m = moments(evolve_ising(up, chain, t))
        assert m.jx2 == pytest.approx(n / 4, abs=1e-12)
        assert m.jx == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_ising_and_general_paths_agree(n, rng):
    chain = make_chain(rng.uniform(0, 2, n))
    ps = ising_to_pairset(chain)
    s0 = random_state(n, rng)
    for t in (0.4, 2.1):
        a = evolve_ising(s0, chain, t).amplitudes
        b = evolve_general(s0, ps, t).amplitudes
        assert np.allclose(a, b, atol=1e-12)


def test_taylor_matches_dense(rng):
    ps = random_pairset(6, rng)
    s0 = random_state(6, rng)
    for t in (0.05, 0.7):
        a = evolve_general(s0, ps, t, method="dense").amplitudes
        b = evolve_general(s0, ps, t, method="taylor").amplitudes
        assert np.allclose(a, b, atol=1e-11)


def test_general_evolution_reversible(rng):
    ps = random_pairset(5, rng)
    s0 = random_state(5, rng)
    step = propagator(ps)
    assert np.allclose(step(step(s0.amplitudes, 0.9), -0.9), s0.amplitudes, atol=1e-12)


def test_general_evolution_limits(rng):
    with pytest.raises(ResourceError):
        evolve_general(prepare_polarized(11), random_pairset(11, rng, n_terms=3), 0.1)
    with pytest.raises(DimensionError):
        evolve_general(prepare_polarized(3), random_pairset(4, rng), 0.1)


# -- correlations and xi -------------------------------------------------------


def test_site_correlations_vanish_at_odd_offsets(rng):
    chain = make_chain(rng.uniform(0, 2, 8))
    s = evolve_ising(prepare_polarized(8), chain, 1.3)
    for i in range(1, 9):
        for k in (1, 3):
            assert site_corr_yy(s, i, (i - 1 + k) % 8 + 1) == pytest.approx(0.0, abs=1e-13)


def test_site_corr_bounds():
    s = prepare_polarized(3)
    with pytest.raises(ValueError):
        site_corr_yy(s, 0, 2)
    assert site_corr_yy(s, 2, 2) == pytest.approx(0.25)


def test_xi_oracle_coherent_state_is_one():
    for angles in [(0, 0, 0), (0.3, 1.2, 2.2)]:
        assert xi_oracle(prepare_polarized(5, Orientation(*angles)), 0.4) == pytest.approx(1.0, abs=1e-12)


def test_ising_xi_examples():
    assert ising_xi(make_uniform(3, 1.0), math.pi / 2) == pytest.approx(2.0, abs=1e-10)
    assert ising_xi(make_chain([1.0, 1.0]), math.pi / 2) == pytest.approx(0.5, abs=1e-10)
    assert ising_xi(make_uniform(6, 1.0), math.pi) == math.inf


# -- short-time tracks ---------------------------------------------------------


def test_mean_spin_length_stationary(rng):
    ps = random_pairset(5, rng)
    o = Orientation(*rng.uniform(0, 2 * math.pi, 3))
    assert richardson_derivative(mean_spin_track(ps, o), 1e-3) == pytest.approx(0.0, abs=1e-8)


def test_fd_matches_noise_derivative(rng):
    for _ in range(4):
        ps = random_pairset(4, rng)
        o = Orientation(*rng.uniform(0, 2 * math.pi, 3))
        exact = noise_derivative(aggregate(ps), o)
        assert fd_derivative(ps, o) == pytest.approx(exact, rel=1e-6, abs=1e-8)


def test_fd_convergence_order(rng):
    ps = random_pairset(4, rng)
    o = Orientation(0.4, 1.0, 0.3)
    exact = noise_derivative(aggregate(ps), o)
    f = variance_track(ps, o)
    h = 0.05
    e1 = abs((f(h) - f(-h)) / (2 * h) - exact)
    e2 = abs((f(h / 2) - f(-h / 2)) / h - exact)
    assert math.log2(e1 / e2) >= 1.9


def test_fd_no_terms():
    from spinsqueeze.shorttime import PairCouplingSet

    assert fd_derivative(PairCouplingSet(3), Orientation(0.1, 0.2, 0.3)) == 0.0


def test_fd_rejects_bad_step(rng):
    with pytest.raises(ValueError):
        fd_derivative(random_pairset(3, rng), Orientation(), dt=0.0)


def test_symmetric_limit_removes_hole():
    def f(t):
        return math.sin(t) / t if t != 0 else math.nan

    assert symmetric_limit(f, 0.0, 1e-2) == pytest.approx(1.0, abs=1e-10)
