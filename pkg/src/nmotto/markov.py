"""Born-Markov baseline: closed-form relaxation and the work criterion.

The long-time limit of the time-local generator gives exponential
relaxation of the ground population,

    rho00(t) = rho_inf + (rho00(0) - rho_inf) exp(-Gamma t),

with stationary value rho_inf = (1 + n) / (1 + 2 n) and rate
Gamma = 2 pi J(omega) (1 + 2 n(omega)), n the Bose occupation of the
reservoir at the level splitting.  In this limit the reservoir absorbs
exactly what the system releases, so the interaction stores no energy
and both net-work definitions coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import EngineParams
from .kernels import ReservoirSpec, ohmic_j

__all__ = [
    "MarkovStroke",
    "bose_n",
    "stationary_rho00",
    "relaxation_rate",
    "markov_rho00",
    "positive_work_condition",
]


def bose_n(omega: float, temperature: float) -> float:
    """Bose occupation n = 1 / (exp(omega / T) - 1); diverges as omega/T -> 0."""
    if not omega > 0 or not temperature > 0:
        raise ValueError("bose_n needs omega > 0 and temperature > 0")
    return 1.0 / np.expm1(omega / temperature)


def stationary_rho00(omega: float, temperature: float) -> float:
    """Ground population of the Gibbs state at splitting omega: (1+n)/(1+2n)."""
    n = bose_n(omega, temperature)
    return (1.0 + n) / (1.0 + 2.0 * n)


def relaxation_rate(omega: float, reservoir: ReservoirSpec) -> float:
    """Decay rate 2 pi J(omega) (1 + 2 n(omega))."""
    n = bose_n(omega, reservoir.temperature)
    return 2.0 * np.pi * ohmic_j(omega, reservoir) * (1.0 + 2.0 * n)


@dataclass(frozen=True)
class MarkovStroke:
    """One isochoric stroke under Born-Markov relaxation."""

    reservoir: ReservoirSpec
    omega: float
    rho00_init: float
    t_end: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("level splitting must be positive")
        if not 0.0 <= self.rho00_init <= 1.0:
            raise ValueError("initial population must lie in [0, 1]")
        if not self.t_end > 0:
            raise ValueError("stroke duration must be positive")


def markov_rho00(t, stroke: MarkovStroke):
    """Ground population at time(s) t; monotonic from rho00(0) to rho_inf."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    rho_inf = stationary_rho00(stroke.omega, stroke.reservoir.temperature)
    gamma = relaxation_rate(stroke.omega, stroke.reservoir)
    out = rho_inf + (stroke.rho00_init - rho_inf) * np.exp(-gamma * t)
    return out if out.ndim else float(out)


def positive_work_condition(params: EngineParams) -> bool:
    """True iff omega_c / omega_h > T_c / T_h (strictly).

    Under Markovian dynamics this is equivalent to positive net work
    extraction, and to the Otto efficiency staying below Carnot.  The
    boundary case of equality yields zero work, hence False.
    """
    return params.omega_c / params.omega_h > params.T_c / params.T_h
