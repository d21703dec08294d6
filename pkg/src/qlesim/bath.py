"""Heat-bath models for the damped quantum oscillator.

Three bath descriptions are supported:

* ``STRICT_OHMIC``: delta-function friction kernel, J(omega) = m*gamma*omega.
  The kernel is distributional, so every consumer handles this case through
  the damping rate directly rather than integrating the kernel numerically.
* ``CUTOFF_OHMIC``: density of states g(omega) = 3*omega^2 / Omega^3 below a
  sharp cutoff Omega, giving the sinc friction kernel.
* ``DISCRETE``: an explicit finite list of bath oscillators, typically built
  by :func:`discretize_bath` for microscopic simulation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedBathError
from .quadrature import coth

__all__ = [
    "BathKind",
    "ModeSet",
    "SystemSpec",
    "BathSpec",
    "ohmic_dos",
    "gamma_from_micro",
    "friction_kernel",
    "spectral_density",
    "discretize_bath",
]

# sin(x)/x switches to its Taylor series below this argument
_SINC_SERIES_CUT = 1e-8


class BathKind(enum.Enum):
    STRICT_OHMIC = "strict_ohmic"
    CUTOFF_OHMIC = "cutoff_ohmic"
    DISCRETE = "discrete"


@dataclass(frozen=True, eq=False)
class ModeSet:
    """Explicit bath oscillators: frequencies, masses and couplings.

    All arrays have the same length N >= 1 and strictly positive entries
    (couplings may have either sign, but must be finite).
    """

    omega: np.ndarray
    mass: np.ndarray
    coupling: np.ndarray

    def __post_init__(self):
        for name in ("omega", "mass", "coupling"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)
        n = self.omega.size
        if n < 1:
            raise DomainError("ModeSet needs at least one mode")
        if self.mass.size != n or self.coupling.size != n:
            raise DomainError("ModeSet arrays must have equal length")
        if not np.all(np.isfinite(self.omega)) or np.any(self.omega <= 0):
            raise DomainError("mode frequencies must be positive and finite")
        if not np.all(np.isfinite(self.mass)) or np.any(self.mass <= 0):
            raise DomainError("mode masses must be positive and finite")
        if not np.all(np.isfinite(self.coupling)):
            raise DomainError("mode couplings must be finite")

    @property
    def count(self) -> int:
        return int(self.omega.size)

    def kernel_weights(self) -> np.ndarray:
        """Per-mode kernel amplitudes c_j^2 / (m_j * omega_j^2)."""
        return self.coupling**2 / (self.mass * self.omega**2)


@dataclass(frozen=True)
class SystemSpec:
    """Oscillator and unit constants.

    ``omega0 = 0`` selects the free-particle limit.  Natural units
    (hbar = kB = 1) are the default; pass explicit constants to work in
    any other unit system.
    """

    mass: float = 1.0
    omega0: float = 1.0
    temperature: float = 1.0
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("mass must be positive")
        if self.omega0 < 0:
            raise DomainError("omega0 must be nonnegative")
        if not self.temperature > 0:
            raise DomainError("temperature must be positive")
        if not self.hbar > 0 or not self.kB > 0:
            raise DomainError("hbar and kB must be positive")

    @property
    def beta(self) -> float:
        return 1.0 / (self.kB * self.temperature)

    @property
    def thermal_coth_scale(self) -> float:
        """The coefficient a in coth(a * omega), a = hbar / (2 kB T)."""
        return self.hbar / (2.0 * self.kB * self.temperature)

    def thermal_coth(self, omega):
        """coth(hbar * omega / (2 kB T)), vectorized and overflow-safe."""
        return coth(self.thermal_coth_scale * np.asarray(omega, dtype=float))


@dataclass(frozen=True, eq=False)
class BathSpec:
    """A bath model plus the damping rate gamma it produces.

    For ``CUTOFF_OHMIC`` the microscopic parameters (mode mass, coupling,
    cutoff) and the system mass the spec was built against are stored, and
    gamma is required to equal 3*pi*c^2 / (2*m*mt*Omega^3) for that mass.
    """

    kind: BathKind
    gamma: float
    cutoff: float | None = None
    mode_mass: float | None = None
    mode_coupling: float | None = None
    modes: ModeSet | None = None
    built_for_mass: float | None = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")
        if self.kind is BathKind.CUTOFF_OHMIC:
            for name in ("cutoff", "mode_mass", "mode_coupling", "built_for_mass"):
                val = getattr(self, name)
                if val is None or not val > 0:
                    raise DomainError(f"cutoff-Ohmic bath requires positive {name}")
            implied = gamma_from_micro(
                self.mode_coupling, self.mode_mass, self.cutoff, self.built_for_mass
            )
            if not math.isclose(self.gamma, implied, rel_tol=1e-9):
                raise DomainError(
                    "gamma inconsistent with microscopic parameters: "
                    f"stored {self.gamma!r}, implied {implied!r}"
                )
        elif self.kind is BathKind.DISCRETE:
            if self.modes is None:
                raise DomainError("discrete bath requires a ModeSet")

    @classmethod
    def strict_ohmic(cls, gamma: float) -> "BathSpec":
        """Memoryless Ohmic bath: mu(t) = 2*m*gamma*delta(t)."""
        return cls(kind=BathKind.STRICT_OHMIC, gamma=gamma)

    @classmethod
    def cutoff_ohmic(
        cls,
        gamma: float,
        cutoff: float,
        system_mass: float = 1.0,
        mode_mass: float = 1.0,
    ) -> "BathSpec":
        """Cutoff-Ohmic bath with the coupling solved for the target gamma.

        The coupling scales as cutoff^(3/2), which is exactly the scaling
        that keeps gamma finite as the cutoff grows.
        """
        if not gamma > 0 or not cutoff > 0 or not system_mass > 0 or not mode_mass > 0:
            raise DomainError("all cutoff-Ohmic parameters must be positive")
        ctilde = math.sqrt(2.0 * system_mass * mode_mass * cutoff**3 * gamma / (3.0 * math.pi))
        return cls(
            kind=BathKind.CUTOFF_OHMIC,
            gamma=gamma,
            cutoff=cutoff,
            mode_mass=mode_mass,
            mode_coupling=ctilde,
            built_for_mass=system_mass,
        )

    @classmethod
    def cutoff_ohmic_from_micro(
        cls, mode_coupling: float, mode_mass: float, cutoff: float, system_mass: float
    ) -> "BathSpec":
        """Cutoff-Ohmic bath from microscopic parameters, deriving gamma."""
        gamma = gamma_from_micro(mode_coupling, mode_mass, cutoff, system_mass)
        return cls(
            kind=BathKind.CUTOFF_OHMIC,
            gamma=gamma,
            cutoff=cutoff,
            mode_mass=mode_mass,
            mode_coupling=mode_coupling,
            built_for_mass=system_mass,
        )

    @classmethod
    def discrete(cls, modes: ModeSet, gamma: float) -> "BathSpec":
        """Explicit finite bath; gamma is the damping the modes realize."""
        return cls(kind=BathKind.DISCRETE, gamma=gamma, modes=modes)


def ohmic_dos(omega, cutoff):
    """Ohmic density of states g(omega) = 3*omega^2/Omega^3 below the cutoff.

    Normalized so the integral over [0, inf) is exactly 1.
    """
    omega = np.asarray(omega, dtype=float)
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    if np.any(omega < 0):
        raise DomainError("omega must be nonnegative")
    out = np.where(omega < cutoff, 3.0 * omega**2 / cutoff**3, 0.0)
    return out if out.ndim else float(out)


def gamma_from_micro(ctilde, mtilde, cutoff, system_mass):
    """Damping rate 3*pi*ctilde^2 / (2 * m * mtilde * Omega^3)."""
    if min(ctilde, mtilde, cutoff, system_mass) <= 0:
        raise DomainError("all microscopic parameters must be positive")
    return 3.0 * math.pi * ctilde**2 / (2.0 * system_mass * mtilde * cutoff**3)


def friction_kernel(spec: BathSpec, t):
    """Memory kernel mu(t), causal (exactly zero for t < 0).

    Cutoff-Ohmic baths give the sinc kernel
    (3*c^2/(mt*Omega^3)) * sin(Omega*t)/t, with a series evaluation of the
    removable singularity; discrete baths give the cosine sum over modes.
    The strict-Ohmic kernel is a delta distribution and is rejected.
    """
    t = np.asarray(t, dtype=float)
    if spec.kind is BathKind.STRICT_OHMIC:
        raise UnsupportedBathError(
            "strict-Ohmic kernel is distributional; use gamma directly"
        )
    if spec.kind is BathKind.CUTOFF_OHMIC:
        amp = 3.0 * spec.mode_coupling**2 / (spec.mode_mass * spec.cutoff**3)
        x = spec.cutoff * t
        small = np.abs(x) < _SINC_SERIES_CUT
        safe_t = np.where(small, 1.0, t)
        series = spec.cutoff * (1.0 - x**2 / 6.0)
        value = amp * np.where(small, series, np.sin(x) / safe_t)
        out = np.where(t < 0, 0.0, value)
        return out if out.ndim else float(out)
    weights = spec.modes.kernel_weights()
    phases = np.multiply.outer(t, spec.modes.omega)
    value = np.cos(phases) @ weights
    out = np.where(t < 0, 0.0, value)
    return out if out.ndim else float(out)


def spectral_density(spec: BathSpec, system: SystemSpec, omega):
    """Bath spectral density J(omega).

    Strict Ohmic: m*gamma*omega on [0, inf).  Cutoff Ohmic:
    (pi/2)*(c^2/mt)*g(omega)/omega, which below the cutoff reduces to the
    same linear law with the gamma implied by the microscopic parameters.
    Discrete baths have a delta-comb J and are rejected.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("omega must be nonnegative")
    if spec.kind is BathKind.DISCRETE:
        raise UnsupportedBathError(
            "spectral density of a discrete bath is a delta comb; "
            "use the ModeSet directly"
        )
    if spec.kind is BathKind.STRICT_OHMIC:
        out = system.mass * spec.gamma * omega
        return out if out.ndim else float(out)
    # (pi/2)*(c^2/mt) * (3*omega^2/Omega^3) / omega, written without the
    # 0/0 at the origin
    slope = 3.0 * math.pi * spec.mode_coupling**2 / (2.0 * spec.mode_mass * spec.cutoff**3)
    out = np.where(omega < spec.cutoff, slope * omega, 0.0)
    return out if out.ndim else float(out)


def discretize_bath(spec: BathSpec, n_modes: int) -> ModeSet:
    """Deterministic quantile discretization of a cutoff-Ohmic bath.

    Mode j sits at the midpoint quantile of the omega^2 density,
    omega_j = Omega * ((j - 1/2)/N)^(1/3), with equal masses and couplings
    ctilde/sqrt(N).  Quantile placement is reproducible and converges to
    the continuum kernel faster than random sampling.
    """
    if spec.kind is not BathKind.CUTOFF_OHMIC:
        raise UnsupportedBathError("only cutoff-Ohmic baths can be discretized")
    if n_modes < 1:
        raise DomainError("n_modes must be >= 1")
    j = np.arange(1, n_modes + 1, dtype=float)
    omega = spec.cutoff * ((j - 0.5) / n_modes) ** (1.0 / 3.0)
    mass = np.full(n_modes, spec.mode_mass)
    coupling = np.full(n_modes, spec.mode_coupling / math.sqrt(n_modes))
    return ModeSet(omega=omega, mass=mass, coupling=coupling)
