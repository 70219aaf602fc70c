"""Engine configuration and elementary state records."""

from __future__ import annotations

from dataclasses import dataclass

from .kernels import ReservoirSpec

__all__ = ["EngineParams", "DiagonalState"]


@dataclass(frozen=True)
class EngineParams:
    """All physical and protocol constants of one engine configuration.

    omega_h / omega_c are the level splittings during contact with the
    hot / cold reservoir, T_h / T_c the reservoir temperatures, lam and
    cutoff the shared Ohmic coupling parameters, t1 / t2 the contact
    durations.  Degenerate settings (omega_h == omega_c, T_h == T_c,
    lam == 0) are representable so that boundary cases can be analyzed;
    a working engine has omega_h > omega_c > 0 and T_h > T_c > 0.
    """

    omega_h: float
    omega_c: float
    T_h: float
    T_c: float
    lam: float
    cutoff: float
    t1: float
    t2: float

    def __post_init__(self):
        if not (self.omega_h >= self.omega_c > 0):
            raise ValueError("need omega_h >= omega_c > 0")
        if not (self.T_h >= self.T_c > 0):
            raise ValueError("need T_h >= T_c > 0")
        if self.lam < 0:
            raise ValueError("coupling must be nonnegative")
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if not (self.t1 > 0 and self.t2 > 0):
            raise ValueError("contact durations must be positive")

    @property
    def hot_reservoir(self) -> ReservoirSpec:
        return ReservoirSpec(self.T_h, self.lam, self.cutoff)

    @property
    def cold_reservoir(self) -> ReservoirSpec:
        return ReservoirSpec(self.T_c, self.lam, self.cutoff)

    @property
    def eta_otto(self) -> float:
        """Otto efficiency 1 - omega_c / omega_h (backend independent)."""
        return 1.0 - self.omega_c / self.omega_h

    @property
    def eta_carnot(self) -> float:
        """Carnot efficiency 1 - T_c / T_h."""
        return 1.0 - self.T_c / self.T_h


@dataclass(frozen=True)
class DiagonalState:
    """Populations of the two-level system; all the cycle ever needs.

    rho00 is the lower level.  Coherences are not tracked: for the
    transversal coupling used here they decouple from the populations
    and never enter the work formulas.
    """

    rho00: float
    rho11: float

    def __post_init__(self):
        if self.rho00 < 0 or self.rho11 < 0:
            raise ValueError("populations must be nonnegative")
        if abs(self.rho00 + self.rho11 - 1.0) > 1e-12:
            raise ValueError("populations must sum to one")
