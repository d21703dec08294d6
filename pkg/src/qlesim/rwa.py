"""Rotating-wave-approximation sector of the damped oscillator.

Dropping the counter-rotating terms turns half of the coordinate
coupling into momentum coupling and produces a Langevin pair in which
position and momentum each acquire their own drag and noise:

    x' = -gamma x + p/m + f_x,    p' = -gamma p - m w0^2 x + f_p

with independent noises of intensities I_x = (2 gamma hbar / m w0) coth
and I_p = 2 m gamma hbar w0 coth (no cross-correlation is prescribed, and
none is assumed).  The position equation no longer reads x' = p/m, which
is the RWA's Ehrenfest anomaly; this module simulates the pair, solves
its stationary covariance exactly, and reports the anomaly.

The same symmetric-intensity convention as :mod:`qlesim.markovian`
applies (white-noise covariance rate I/2 per channel).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from .bath import SystemSpec
from .ensemble import EnsembleResult, MomentAccumulator
from .errors import DomainError, UnstableIntegrationError
from .sde import exact_discretization, noise_factor, trajectory_seeds

__all__ = [
    "RwaParams",
    "rwa_coupling",
    "rwa_hamiltonian_split",
    "rwa_stationary_analytic",
    "drift_matrix",
    "simulate_rwa",
]

# gamma/omega0 above which the weak-coupling premise of the RWA is dubious
_WEAK_COUPLING_RATIO = 0.1


@dataclass(frozen=True)
class RwaParams:
    """Oscillator, damping and the two RWA noise intensities."""

    system: SystemSpec
    gamma: float
    intensity_x: float
    intensity_p: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")
        if not self.system.omega0 > 0:
            raise DomainError("RWA dynamics needs omega0 > 0")
        ix, ip = _intensities(self.system, self.gamma)
        if not math.isclose(self.intensity_x, ix, rel_tol=1e-12) or \
           not math.isclose(self.intensity_p, ip, rel_tol=1e-12):
            raise DomainError("noise intensities inconsistent with system and gamma")
        ratio = self.intensity_p / self.intensity_x
        expected = (self.system.mass * self.system.omega0) ** 2
        if not math.isclose(ratio, expected, rel_tol=1e-12):
            raise DomainError("intensity ratio must equal (m * omega0)^2")

    @classmethod
    def from_system(cls, system: SystemSpec, gamma: float) -> "RwaParams":
        ix, ip = _intensities(system, gamma)
        return cls(system=system, gamma=gamma, intensity_x=ix, intensity_p=ip)

    @property
    def narrowband(self) -> bool:
        """True when gamma is small enough for the RWA to be trustworthy."""
        return self.gamma <= _WEAK_COUPLING_RATIO * self.system.omega0


def _intensities(system, gamma):
    c = float(system.thermal_coth(system.omega0))
    ix = 2.0 * gamma * system.hbar / (system.mass * system.omega0) * c
    ip = 2.0 * system.mass * gamma * system.hbar * system.omega0 * c
    return ix, ip


def rwa_coupling(c_j, system_mass, mode_mass, omega0, omega_j, hbar: float = 1.0):
    """Rotating-frame coupling hbar c_j / (2 sqrt(m m_j w0 w_j))."""
    if min(system_mass, mode_mass, omega0) <= 0:
        raise DomainError("masses and omega0 must be positive")
    omega_j = np.asarray(omega_j, dtype=float)
    if np.any(omega_j <= 0):
        raise DomainError("mode frequencies must be positive")
    out = hbar * np.asarray(c_j, dtype=float) / (
        2.0 * np.sqrt(system_mass * mode_mass * omega0 * omega_j)
    )
    return out if np.ndim(out) else float(out)


def rwa_hamiltonian_split(c_j, system_mass, mode_mass, omega0, omega_j):
    """Coupling coefficients after the RWA, written in oscillator variables.

    Returns (position_coefficient, momentum_coefficient): the coordinate
    coupling keeps half its strength, c_j/2, and the other half reappears
    as a momentum-momentum coupling c_j / (2 m w0 m_j w_j).  Their ratio
    is 1 / (m m_j w0 w_j).
    """
    if min(system_mass, mode_mass, omega0) <= 0:
        raise DomainError("masses and omega0 must be positive")
    omega_j = np.asarray(omega_j, dtype=float)
    if np.any(omega_j <= 0):
        raise DomainError("mode frequencies must be positive")
    c_j = np.asarray(c_j, dtype=float)
    pos = c_j / 2.0
    mom = c_j / (2.0 * system_mass * omega0 * mode_mass * omega_j)
    if np.ndim(pos):
        return pos, mom
    return float(pos), float(mom)


def drift_matrix(params: RwaParams) -> np.ndarray:
    """Drift of the (x, p) pair; its eigenvalues are -gamma +/- i omega0."""
    m, w0 = params.system.mass, params.system.omega0
    return np.array([[-params.gamma, 1.0 / m], [-m * w0 * w0, -params.gamma]])


def _diffusion_matrix(params: RwaParams) -> np.ndarray:
    return np.diag([params.intensity_x / 2.0, params.intensity_p / 2.0])


def rwa_stationary_analytic(params: RwaParams):
    """Exact stationary (<x^2>, <p^2>) from the 2x2 Lyapunov equation.

    The prescribed intensities balance the two channels so precisely that
    the solution is gamma-independent: both channel energies equal the
    weak-coupling value (hbar w0 / 2) coth(...) for every gamma, with zero
    stationary x-p correlation.
    """
    a = drift_matrix(params)
    q = _diffusion_matrix(params)
    cov = solve_continuous_lyapunov(a, -q)
    cov = 0.5 * (cov + cov.T)
    return float(cov[0, 0]), float(cov[1, 1])


def simulate_rwa(params: RwaParams, dt: float, n_steps: int, n_traj: int,
                 seed: int, method: str = "exact", burn_in: float | None = None,
                 chunk_size: int = 2048) -> EnsembleResult:
    """Monte Carlo moments of the RWA Langevin pair.

    Same stepping and sampling contract as
    :func:`qlesim.markovian.simulate_sde`.  Reported moments: ``x2``,
    ``p2``, the symmetrized cross moment ``xp``, and ``ehrenfest``, the
    mean square of the discrete residual (x_{k+1} - x_k)/dt - p_k/m.  The
    residual is driven by the white x-noise, so its magnitude grows with
    the sampling bandwidth as I_x/(2 dt); it is reported, not checked
    against a target.

    Simulation outside the narrowband regime (gamma > omega0/10) is
    permitted but warns, since the underlying approximation is then
    unjustified.
    """
    if method not in ("exact", "euler"):
        raise DomainError("method must be 'exact' or 'euler'")
    if not dt > 0 or n_steps < 1 or n_traj < 1:
        raise DomainError("dt, n_steps and n_traj must be positive")
    if method == "euler" and dt * params.system.omega0 > 0.01:
        raise DomainError("euler mode requires dt * omega0 <= 0.01")
    if not params.narrowband:
        warnings.warn(
            "gamma exceeds omega0/10; RWA dynamics is physically dubious here",
            stacklevel=2,
        )

    sys_ = params.system
    m = sys_.mass
    a = drift_matrix(params)
    q = _diffusion_matrix(params)
    if burn_in is None:
        burn_in = 10.0 / params.gamma
    burn_steps = max(1, math.ceil(burn_in / dt))

    if method == "exact":
        prop, q_dt = exact_discretization(a, q, dt)
        factor = noise_factor(q_dt)
    else:
        prop = np.eye(2) + a * dt
        factor = noise_factor(q * dt)

    total = burn_steps + n_steps
    accs = {name: MomentAccumulator() for name in ("x2", "p2", "xp", "ehrenfest")}
    scale = math.sqrt(abs(rwa_stationary_analytic(params)[0])) + 1e-300

    for start in range(0, n_traj, chunk_size):
        idx = range(start, min(start + chunk_size, n_traj))
        rngs = trajectory_seeds(seed, idx)
        noise = np.stack([r.standard_normal((total, 2)) for r in rngs])
        state = np.zeros((len(rngs), 2))
        sums = {name: np.zeros(len(rngs)) for name in accs}
        for k in range(total):
            prev = state
            state = state @ prop.T + noise[:, k, :] @ factor.T
            if k >= burn_steps:
                sums["x2"] += state[:, 0] ** 2
                sums["p2"] += state[:, 1] ** 2
                sums["xp"] += state[:, 0] * state[:, 1]
                resid = (state[:, 0] - prev[:, 0]) / dt - prev[:, 1] / m
                sums["ehrenfest"] += resid**2
        if not np.all(np.isfinite(state)) or np.max(np.abs(state[:, 0])) > 1e6 * scale:
            raise UnstableIntegrationError(
                "RWA trajectories diverged; reduce dt or use method='exact'"
            )
        for name, acc in accs.items():
            acc.update_batch(sums[name] / n_steps)

    return EnsembleResult(
        moments={name: acc.estimate() for name, acc in accs.items()},
        n_traj=n_traj,
        seed=seed,
        meta={"dt": dt, "n_steps": n_steps, "burn_steps": burn_steps,
              "method": method, "gamma": params.gamma,
              "noise_bandwidth": 1.0 / dt},
    )
