"""Spin squeezing in interacting spin-1/2 systems.

Closed-form squeezing curves for Ising chains with arbitrary nearest-neighbour
couplings, the initial squeezing rate of general pairwise Hamiltonians, and an
exact state-vector oracle for small N.
"""

from .analytic import (
    curve,
    expectations,
    xi_chain,
    xi_pi4,
    xi_pi4_dimerized,
    xi_pi4_general,
    xi_pi4_n2,
    xi_pi4_n3,
    xi_pi4_n4,
    xi_pi4_uniform,
    xi_theta,
    xi_theta_optimal,
)
from .chains import (
    CouplingChain,
    DimerSpec,
    ExpectationSet,
    Orientation,
    RandomChainSpec,
    SqueezingCurve,
    make_chain,
    make_dimerized,
    make_uniform,
    sample_random,
)
from .disorder import EnsembleEstimate, trig_means, xi_random_analytic, xi_random_mc
from .shorttime import (
    AggregateCoupling,
    PairCouplingSet,
    aggregate,
    ising_to_pairset,
    noise_derivative,
    optimal_orientation,
)

__version__ = "0.1.0"
