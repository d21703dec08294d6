"""Exact and Euler-Maruyama stepping for 2D linear SDEs.

The Markovian and RWA dynamics are both linear systems

    dS = A S dt + dW,   cov(dW) = Q dt

whose transition over a step h is Gaussian with mean expm(A h) S and
covariance Int_0^h expm(A s) Q expm(A^T s) ds.  Both are computed once
from the Van Loan block-matrix exponential, making the per-step update
exact for any step size; the plain Euler-Maruyama scheme is kept as a
cross-check mode.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .errors import DomainError

__all__ = ["exact_discretization", "noise_factor", "trajectory_seeds"]


def exact_discretization(drift, diffusion, dt):
    """One-step propagator and noise covariance of a linear SDE.

    Parameters
    ----------
    drift : (n, n) array
        Drift matrix A.
    diffusion : (n, n) array
        Noise covariance rate Q (symmetric positive semidefinite).
    dt : float
        Step size.

    Returns
    -------
    (E, Q_dt) : propagator expm(A dt) and the exact per-step noise
        covariance, symmetrized.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    a = np.asarray(drift, dtype=float)
    q = np.asarray(diffusion, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or q.shape != (n, n):
        raise DomainError("drift and diffusion must be square and same size")
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = a
    block[:n, n:] = q
    block[n:, n:] = -a.T
    eb = expm(block * dt)
    prop = eb[:n, :n]
    q_dt = eb[:n, n:] @ prop.T
    q_dt = 0.5 * (q_dt + q_dt.T)
    return prop, q_dt


def noise_factor(cov):
    """Matrix L with L @ L.T = cov, robust to semidefinite covariances."""
    cov = np.asarray(cov, dtype=float)
    vals, vecs = np.linalg.eigh(cov)
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)


def trajectory_seeds(seed: int, indices):
    """Independent per-trajectory bit generators keyed by (seed, index).

    Streams depend only on the pair, so chunked, parallel and serial
    executions consume identical randomness per trajectory.
    """
    return [np.random.default_rng(np.random.SeedSequence(entropy=(seed, int(i))))
            for i in indices]
