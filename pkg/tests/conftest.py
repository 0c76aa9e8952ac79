"""Shared corpus helpers for the test suite.

All randomness is seed-deterministic so expected values frozen in tests stay
stable across runs.
"""

import numpy as np

from pptq import (BipartiteOperator, QuasiState, log_negativity,
                  random_state)


def random_hermitian(side, rng, scale=1.0):
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    return scale * 0.5 * (g + g.conj().T)


def embedded_mes(d_a, d_b):
    """Maximally entangled state of rank min(d_a, d_b) on a d_a x d_b space."""
    r = min(d_a, d_b)
    vec = np.zeros(d_a * d_b, dtype=np.complex128)
    for i in range(r):
        vec[i * d_b + i] = 1.0
    vec /= np.sqrt(r)
    return QuasiState(BipartiteOperator(d_a, d_b, np.outer(vec, vec.conj())))


def entangled_blend(d_a, d_b, seed, weight=None):
    """Random NPT-leaning state: entangled anchor mixed with random noise."""
    rng = np.random.default_rng(seed)
    if weight is None:
        weight = 0.35 + 0.6 * rng.random()
    noise = random_state(d_a, d_b, seed + 1)
    m = weight * embedded_mes(d_a, d_b).matrix + (1 - weight) * noise.matrix
    return QuasiState(BipartiteOperator(d_a, d_b, m))


def ordered_pair(d_a, d_b, seed):
    """(rho, sigma) with E_N(rho) >= E_N(sigma), mixing NPT and PPT targets."""
    rho = entangled_blend(d_a, d_b, seed)
    rng = np.random.default_rng(seed + 7)
    if rng.random() < 0.5:
        sigma = random_state(d_a, d_b, seed + 2)
    else:
        sigma = entangled_blend(d_a, d_b, seed + 3)
    if (log_negativity(rho).log_negativity
            < log_negativity(sigma).log_negativity):
        rho, sigma = sigma, rho
    return rho, sigma


def converse_pair(d_a, d_b, seed, gap=1e-9):
    """(rho, sigma) with E_N(rho) < E_N(sigma) - gap, or None."""
    sigma = entangled_blend(d_a, d_b, seed, weight=0.8)
    rho = random_state(d_a, d_b, seed + 5)
    if (log_negativity(rho).log_negativity
            < log_negativity(sigma).log_negativity - gap):
        return rho, sigma
    return None


def npt_state(d_a, d_b, seed):
    """A certainly-NPT state at the given dims."""
    s = entangled_blend(d_a, d_b, seed, weight=0.75)
    assert log_negativity(s).log_negativity > 1e-6
    return s


def maximally_mixed(d_a, d_b):
    n = d_a * d_b
    return QuasiState(BipartiteOperator(d_a, d_b, np.eye(n) / n))
