"""Adaptive frequency-domain quadrature with resonance-peak isolation.

The thermal integrals evaluated here share one difficulty: a Lorentzian
resonance whose width (set by the damping) can be orders of magnitude
narrower than the integration range.  Global adaptive quadrature misses
such peaks, so every integral is assembled from panels whose edges pin
the resonance, with scipy's oscillatory (QAWO/QAWF) rules taking over
when a cos(omega*tau) factor is present.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError

__all__ = ["QuadratureConfig", "coth", "scaled_omega_coth", "integrate_panels"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and panel policy for the frequency-domain integrals.

    Attributes
    ----------
    rel_tol, abs_tol : float
        Target relative/absolute tolerance of each full integral.
    peak_halfwidths : float
        Half-width of the isolated resonance window in units of the
        damping rate (the window is omega0 * (1 +/- k*gamma/omega0)).
    omega_max : float or None
        Upper cutoff for integrals whose integrand decays too slowly to
        be summed to infinity.  None means "no cutoff requested".
    max_panels : int
        Hard cap on the number of quadrature panels per integral.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    peak_halfwidths: float = 20.0
    omega_max: float | None = None
    max_panels: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.peak_halfwidths >= 1:
            raise DomainError("peak_halfwidths must be >= 1")
        if self.omega_max is not None and not self.omega_max > 0:
            raise DomainError("omega_max must be positive when finite")
        if self.max_panels < 4:
            raise DomainError("max_panels too small")


def coth(x):
    """Stable hyperbolic cotangent, series-expanded for small arguments."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, _coth_series(np.where(small, x, 0.0)), 1.0 / np.tanh(safe))
    return out if out.ndim else float(out)


def _coth_series(x):
    # Laurent series around 0; the 1/x term is evaluated last so x = 0
    # propagates an inf rather than a nan.
    with np.errstate(divide="ignore"):
        return 1.0 / x + x / 3.0 - x**3 / 45.0


def scaled_omega_coth(omega, a):
    """Return omega * coth(a * omega), regular at omega = 0.

    This is the thermal weight of every fluctuation integral; its
    omega -> 0 limit is 1/a (the classical equipartition value), which
    the direct product 0 * inf would miss.
    """
    omega = np.asarray(omega, dtype=float)
    x = a * omega
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, omega)
    series = (1.0 + x**2 / 3.0 - x**4 / 45.0) / a
    out = np.where(small, series, safe / np.tanh(np.where(small, 1.0, x)))
    return out if out.ndim else float(out)


def integrate_panels(f, edges, cfg, *, tau=0.0, tail_to_inf=False, label=""):
    """Integrate ``f(omega) * cos(omega * tau)`` over panels plus a tail.

    Parameters
    ----------
    f : callable
        Smooth scalar integrand (the cos factor is NOT included in f).
    edges : sequence of float
        Strictly increasing panel boundaries, starting at the lower limit.
    cfg : QuadratureConfig
    tau : float
        Oscillation period of the cosine weight; 0 disables the weight.
    tail_to_inf : bool
        Integrate [edges[-1], inf) as a final panel (plain or Fourier).
    label : str
        Name used in error messages.

    Returns
    -------
    (value, error_bound) : tuple of float

    Raises
    ------
    QuadratureError
        If the summed error bound exceeds the configured tolerance or the
        panel budget is exhausted.
    """
    edges = [float(e) for e in edges]
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise DomainError(f"panel edges must be strictly increasing ({label})")
    if len(edges) > cfg.max_panels:
        raise QuadratureError(
            f"{label}: panel budget exceeded ({len(edges)} > {cfg.max_panels})"
        )
    tau = abs(float(tau))

    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges, edges[1:]):
            if tau > 0.0:
                v, e = integrate.quad(
                    f, a, b, weight="cos", wvar=tau,
                    epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=200, maxp1=100,
                )
            else:
                v, e = integrate.quad(
                    f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=200
                )
            total += v
            err += e
        if tail_to_inf:
            a = edges[-1]
            if tau > 0.0:
                scale = max(abs(total), cfg.abs_tol)
                v, e = integrate.quad(
                    f, a, np.inf, weight="cos", wvar=tau,
                    epsabs=max(cfg.abs_tol, cfg.rel_tol * scale), limit=200, maxp1=100,
                )
            else:
                v, e = integrate.quad(
                    f, a, np.inf, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=200
                )
            total += v
            err += e

    tol = max(cfg.abs_tol, cfg.rel_tol * abs(total)) * 50.0
    if err > tol:
        raise QuadratureError(
            f"{label}: quadrature did not converge (error bound {err:.3e}, "
            f"estimate {total:.6e})",
            estimate=total,
            error_bound=err,
        )
    return total, err


def resonance_edges(omega0, width, halfwidths, upper):
    """Panel edges [0, ...] isolating the resonance at ``omega0``.

    ``width`` is the damping rate; the peak window omega0 +/- k*width is
    clipped to stay inside (0, upper).  The resonance itself sits on a
    panel edge, where Gauss-Kronrod handles it best.
    """
    lo = omega0 - halfwidths * width
    hi = omega0 + halfwidths * width
    edges = [0.0]
    if lo > 0:
        edges.append(lo)
    if omega0 > 0 and omega0 < upper:
        edges.append(omega0)
    if hi < upper:
        edges.append(hi)
    edges.append(upper)
    edges = sorted(set(e for e in edges if 0.0 <= e <= upper))
    return edges
