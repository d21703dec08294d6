"""Finite-N microscopic bath: sampled noise and memory-kernel dynamics.

A bath prepared in the displaced thermal state generates the noise

    f(t) = sum_j c_j [ s_j cos(w_j t) + (p_j / m_j w_j) sin(w_j t) ]

where s_j is the mode coordinate measured from its displaced equilibrium
c_j x(0) / (m_j w_j^2).  Sampling s_j and p_j as independent zero-mean
Gaussians with the thermal-state variances reproduces every symmetrized
noise statistic of the quantum bath; the antisymmetric (commutator) part
has no classical sample representation and is provided analytically only.

The memory equation of motion

    m x'' + Int_0^t mu(t - t') x'(t') dt' + m w0^2 x = f(t)

is integrated by explicit RK4 with the convolution evaluated by the
trapezoidal rule over the recorded velocity history and frozen across the
substeps of each step.  Realizations are independent work units keyed by
(seed, index); ensembles are processed in chunks with mergeable moment
accumulators, so chunked and serial runs agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathKind, BathSpec, ModeSet, SystemSpec
from .ensemble import EnsembleResult, MomentAccumulator
from .errors import DomainError, UnstableIntegrationError, UnsupportedBathError
from .quadrature import QuadratureConfig, integrate_panels, scaled_omega_coth
from .sde import trajectory_seeds

__all__ = [
    "BathInitialConditions",
    "TrajectoryGrid",
    "sample_initial_conditions",
    "noise_trajectory",
    "initial_slip",
    "noise_commutator_analytic",
    "noise_autocorrelation_quadrature",
    "integrate_gle",
    "noise_ensemble_stats",
    "gle_ensemble_moments",
]


@dataclass(frozen=True, eq=False)
class BathInitialConditions:
    """Sampled mode coordinates (relative to the displaced minima) and momenta."""

    displacement: np.ndarray
    momentum: np.ndarray
    x0: float

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.displacement, dtype=float))
        p = np.atleast_1d(np.asarray(self.momentum, dtype=float))
        object.__setattr__(self, "displacement", d)
        object.__setattr__(self, "momentum", p)
        if d.size != p.size:
            raise DomainError("displacement and momentum counts differ")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(p))):
            raise DomainError("initial conditions must be finite")

    @property
    def count(self) -> int:
        return int(self.displacement.size)


@dataclass(frozen=True)
class TrajectoryGrid:
    """Uniform time grid t_i = i * dt, i = 0..n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if self.n_steps < 1:
            raise DomainError("n_steps must be >= 1")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    @property
    def half_times(self) -> np.ndarray:
        return 0.5 * self.dt * np.arange(2 * self.n_steps + 1)

    def check_resolves(self, modes: ModeSet):
        fastest = float(np.max(modes.omega))
        if self.dt * fastest >= 0.1:
            raise DomainError(
                f"dt * max mode frequency = {self.dt * fastest:.3f} must be < 0.1"
            )


def thermal_variances(modes: ModeSet, system: SystemSpec):
    """Per-mode variances of the displaced coordinate and the momentum.

    (hbar / 2 m_j w_j) coth(hbar w_j / 2 kB T) and
    (hbar m_j w_j / 2) coth(...); in the hbar -> 0 limit these reduce to
    the equipartition values kB T / (m_j w_j^2) and m_j kB T.
    """
    c = system.thermal_coth(modes.omega)
    var_s = system.hbar / (2.0 * modes.mass * modes.omega) * c
    var_p = system.hbar * modes.mass * modes.omega / 2.0 * c
    return var_s, var_p


def sample_initial_conditions(modes: ModeSet, system: SystemSpec, x0: float,
                              rng) -> BathInitialConditions:
    """Draw one realization of the displaced thermal state.

    ``rng`` is a :class:`numpy.random.Generator` or an integer seed.  Only
    the symmetric second moments are realized; the imaginary cross moment
    of the quantum state is not sampleable and cancels from symmetrized
    observables.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    var_s, var_p = thermal_variances(modes, system)
    s = rng.standard_normal(modes.count) * np.sqrt(var_s)
    p = rng.standard_normal(modes.count) * np.sqrt(var_p)
    return BathInitialConditions(displacement=s, momentum=p, x0=float(x0))


def _noise_coefficients(modes: ModeSet, ics: BathInitialConditions):
    a = modes.coupling * ics.displacement
    b = modes.coupling * ics.momentum / (modes.mass * modes.omega)
    return a, b


def noise_trajectory(modes: ModeSet, ics: BathInitialConditions,
                     grid: TrajectoryGrid) -> np.ndarray:
    """Deterministic noise series f(t_i) for one sampled realization."""
    if ics.count != modes.count:
        raise DomainError("initial conditions do not match the mode count")
    grid.check_resolves(modes)
    a, b = _noise_coefficients(modes, ics)
    phases = np.multiply.outer(grid.times, modes.omega)
    return np.cos(phases) @ a + np.sin(phases) @ b


def initial_slip(modes: ModeSet, x0: float, t):
    """Initial-slip force mu(t) * x0 from the discrete kernel.

    Under the displaced preparation this term is absorbed into the noise:
    f(t) = g(t) - mu(t) x0 holds exactly per realization, with g the noise
    of the undisplaced preparation.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be nonnegative")
    weights = modes.kernel_weights()
    out = (np.cos(np.multiply.outer(t, modes.omega)) @ weights) * x0
    return out if out.ndim else float(out)


def noise_commutator_analytic(modes: ModeSet, system: SystemSpec, tau):
    """<[f(t), f(t')]> = -2 i hbar * sum_j (c_j^2 / 2 m_j w_j) sin(w_j tau).

    Returned as the imaginary coefficient (the sum with its real
    prefactor); the commutator itself is i times this.  Not sampled: a
    classical ensemble cannot realize it.
    """
    tau = np.asarray(tau, dtype=float)
    w = modes.coupling**2 / (2.0 * modes.mass * modes.omega)
    out = -2.0 * system.hbar * (np.sin(np.multiply.outer(tau, modes.omega)) @ w)
    return out if out.ndim else float(out)


def noise_autocorrelation_quadrature(system: SystemSpec, bath: BathSpec, tau,
                                     cfg: QuadratureConfig | None = None) -> float:
    """Continuum symmetric noise autocorrelation (hbar/pi) Int J coth cos.

    Only cutoff-Ohmic baths are supported: the strict-Ohmic version is a
    delta at tau = 0 and a discrete bath's J is a comb (its exact finite-N
    correlation is the cosine sum over modes instead).
    """
    if bath.kind is not BathKind.CUTOFF_OHMIC:
        raise UnsupportedBathError(
            "continuum noise autocorrelation requires a cutoff-Ohmic bath"
        )
    cfg = cfg or QuadratureConfig()
    a = system.thermal_coth_scale
    slope = 3.0 * math.pi * bath.mode_coupling**2 / (2.0 * bath.mode_mass * bath.cutoff**3)
    integrand = lambda w: slope * scaled_omega_coth(w, a)
    edges = np.linspace(0.0, bath.cutoff, 9)
    value, _ = integrate_panels(integrand, edges, cfg, tau=abs(float(tau)),
                                label="noise autocorrelation")
    return system.hbar / math.pi * value


def integrate_gle(modes: ModeSet, ics: BathInitialConditions, system: SystemSpec,
                  grid: TrajectoryGrid, x0: float | None = None,
                  v0: float = 0.0):
    """Integrate one realization of the memory equation of motion.

    Returns (x, v) arrays on ``grid.times``.  The oscillator starts at
    ``ics.x0`` (or an explicit ``x0``) with velocity ``v0``; the noise is
    the deterministic mode sum for this realization.
    """
    start_x = ics.x0 if x0 is None else float(x0)
    a, b = _noise_coefficients(modes, ics)
    x, v = _integrate_gle_batch(
        modes, a[:, None], b[:, None], system, grid,
        np.array([start_x]), np.array([float(v0)]),
    )
    return x[:, 0], v[:, 0]


def _integrate_gle_batch(modes, a, b, system, grid, x0, v0):
    """RK4 + trapezoidal-memory integration of a batch of realizations.

    ``a``, ``b`` are per-mode noise coefficients with one column per
    realization; returns position and velocity histories of shape
    (n_steps + 1, batch).
    """
    grid.check_resolves(modes)
    n = grid.n_steps
    dt = grid.dt
    m = system.mass
    k_spring = m * system.omega0**2

    phases = np.multiply.outer(grid.half_times, modes.omega)
    force = np.cos(phases) @ a + np.sin(phases) @ b
    del phases

    weights = modes.kernel_weights()
    mu = np.cos(np.multiply.outer(grid.times, modes.omega)) @ weights
    mu_rev = mu[::-1].copy()

    batch = x0.size
    xs = np.zeros((n + 1, batch))
    vs = np.zeros((n + 1, batch))
    xs[0] = x0
    vs[0] = v0
    x = x0.astype(float).copy()
    v = v0.astype(float).copy()

    scale_guard = 1e9 * max(1.0, float(np.max(np.abs(x0))), math.sqrt(
        system.kB * system.temperature / k_spring) if k_spring > 0 else 1.0)

    for i in range(n):
        if i == 0:
            memory = np.zeros(batch)
        else:
            window = vs[: i + 1]
            conv = mu_rev[n - i:] @ window
            conv -= 0.5 * (mu[i] * window[0] + mu[0] * window[i])
            memory = dt * conv

        f0 = force[2 * i]
        fh = force[2 * i + 1]
        f1 = force[2 * i + 2]

        def accel(xx, ff):
            return (ff - memory - k_spring * xx) / m

        k1x = v
        k1v = accel(x, f0)
        k2x = v + 0.5 * dt * k1v
        k2v = accel(x + 0.5 * dt * k1x, fh)
        k3x = v + 0.5 * dt * k2v
        k3v = accel(x + 0.5 * dt * k2x, fh)
        k4x = v + dt * k3v
        k4v = accel(x + dt * k3x, f1)

        x = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xs[i + 1] = x
        vs[i + 1] = v

        if i % 256 == 0 and (not np.all(np.isfinite(x)) or np.max(np.abs(x)) > scale_guard):
            raise UnstableIntegrationError(
                "memory-kernel integration diverged; reduce dt"
            )
    if not np.all(np.isfinite(xs)):
        raise UnstableIntegrationError("memory-kernel integration diverged; reduce dt")
    return xs, vs


def noise_ensemble_stats(modes: ModeSet, system: SystemSpec, taus, n_real: int,
                         seed: int, origins=None, chunk_size: int = 4096):
    """Monte Carlo noise statistics over an ensemble of realizations.

    Returns a dict with per-lag estimates of the mean noise f(tau) and of
    the symmetric autocorrelation at lag tau.  For classical samples the
    operator ordering is immaterial, so <f(t0) f(t0 + tau)> estimates the
    symmetrized correlation; the ensemble is stationary, and passing a
    grid of time ``origins`` averages the product over t0 within each
    realization before accumulating, which tightens the standard error
    without biasing it (realizations stay independent units).
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0):
        raise DomainError("lags must be nonnegative")
    origins = np.atleast_1d(np.asarray(origins if origins is not None else [0.0],
                                       dtype=float))
    times = np.unique(np.concatenate([taus, origins, (origins[:, None] + taus).ravel()]))
    where = {t: i for i, t in enumerate(times)}
    tau_idx = np.array([where[t] for t in taus])
    cos_t = np.cos(np.multiply.outer(times, modes.omega))
    sin_t = np.sin(np.multiply.outer(times, modes.omega))
    var_s, var_p = thermal_variances(modes, system)
    sd_s = np.sqrt(var_s)
    sd_p = np.sqrt(var_p)

    lag_origin_idx = np.array([[where[t0 + tau] for t0 in origins] for tau in taus])
    base_idx = np.array([where[t0] for t0 in origins])

    mean_acc = [MomentAccumulator() for _ in taus]
    corr_acc = [MomentAccumulator() for _ in taus]
    for start in range(0, n_real, chunk_size):
        idx = range(start, min(start + chunk_size, n_real))
        rngs = trajectory_seeds(seed, idx)
        draws = np.stack([r.standard_normal(2 * modes.count) for r in rngs])
        s = draws[:, : modes.count] * sd_s
        p = draws[:, modes.count:] * sd_p
        a = s * modes.coupling
        b = p * modes.coupling / (modes.mass * modes.omega)
        f = a @ cos_t.T + b @ sin_t.T
        f_base = f[:, base_idx]
        for j in range(taus.size):
            mean_acc[j].update_batch(f[:, tau_idx[j]])
            products = (f_base * f[:, lag_origin_idx[j]]).mean(axis=1)
            corr_acc[j].update_batch(products)
    return {
        "taus": taus,
        "mean": [acc.estimate() for acc in mean_acc],
        "autocorr": [acc.estimate() for acc in corr_acc],
    }


def gle_ensemble_moments(modes: ModeSet, system: SystemSpec, grid: TrajectoryGrid,
                         n_real: int, seed: int, x0: float = 0.0,
                         chunk_size: int = 2048,
                         dump=None) -> EnsembleResult:
    """Ensemble moments of the memory dynamics at the final grid time.

    Starts every realization at (x0, 0) with bath modes drawn from the
    displaced thermal state; reports <x^2> and <v^2> at t = n_steps * dt.
    ``dump``, if given, is called once per chunk with
    (indices, times, x_hist, v_hist, force_hist) for trajectory export.
    """
    var_s, var_p = thermal_variances(modes, system)
    sd_s = np.sqrt(var_s)
    sd_p = np.sqrt(var_p)
    acc_x2 = MomentAccumulator()
    acc_v2 = MomentAccumulator()
    for start in range(0, n_real, chunk_size):
        idx = range(start, min(start + chunk_size, n_real))
        rngs = trajectory_seeds(seed, idx)
        draws = np.stack([r.standard_normal(2 * modes.count) for r in rngs], axis=1)
        s = draws[: modes.count] * sd_s[:, None]
        p = draws[modes.count:] * sd_p[:, None]
        a = s * modes.coupling[:, None]
        b = p * (modes.coupling / (modes.mass * modes.omega))[:, None]
        n_batch = len(rngs)
        xs, vs = _integrate_gle_batch(
            modes, a, b, system, grid,
            np.full(n_batch, float(x0)), np.zeros(n_batch),
        )
        acc_x2.update_batch(xs[-1] ** 2)
        acc_v2.update_batch(vs[-1] ** 2)
        if dump is not None:
            phases = np.multiply.outer(grid.times, modes.omega)
            force = np.cos(phases) @ a + np.sin(phases) @ b
            dump(list(idx), grid.times, xs, vs, force)
    return EnsembleResult(
        moments={"x2": acc_x2.estimate(), "v2": acc_v2.estimate()},
        n_traj=n_real,
        seed=seed,
        meta={"dt": grid.dt, "n_steps": grid.n_steps, "x0": float(x0),
              "n_modes": modes.count},
    )
