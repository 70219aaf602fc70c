"""Stroboscopic map of the Otto protocol and its limit cycle.

Between strokes the state is projectively measured, so a cycle is fully
described by the probability P of finding the system in the lower level
before each reservoir contact.  One contact acts as the affine map

    P -> P * r0 + (1 - P) * r1,

where r_m is the final ground population of a stroke started from the
pure state |m><m|.  Composing the hot and cold maps gives a contraction
with factor p0; its fixed point is the limit cycle.  The algebra is the
same whether the stroke populations came from the time-convolutionless
solver or from the Markovian baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import markov, tcl2
from .engine import EngineParams
from .errors import DegenerateCycle

__all__ = [
    "DEGENERACY_TOL",
    "StrokeMap",
    "LimitCycle",
    "stroke_map",
    "limit_cycle",
    "iterate_cycle",
]

DEGENERACY_TOL = 1e-12

_MAP_TOL = tcl2.POSITIVITY_TOL  # stroke populations may carry solver jitter


@dataclass(frozen=True)
class StrokeMap:
    """Endpoint ground populations of one stroke from both pure starts.

    r0 = rho00(t_end) for rho00(0) = 1,  r1 for rho00(0) = 0.
    """

    r0: float
    r1: float

    def __post_init__(self):
        for v in (self.r0, self.r1):
            if not -_MAP_TOL <= v <= 1.0 + _MAP_TOL:
                raise ValueError(f"stroke-map population {v} outside [0, 1]")

    def apply(self, p: float) -> float:
        return p * self.r0 + (1.0 - p) * self.r1

    @property
    def contraction(self) -> float:
        return self.r0 - self.r1


@dataclass(frozen=True)
class LimitCycle:
    """Fixed point of the repeated protocol.

    P_h / P_c are the ground-state probabilities just before the hot /
    cold contact, p0 the per-cycle contraction factor, n_iter_check the
    number of fixed-point iterations a direct verification needed
    (capped at 10000 for maps contracting very slowly).
    """

    P_h: float
    P_c: float
    p0: float
    n_iter_check: int


def stroke_map(
    engine: EngineParams,
    which: str,
    dynamics: str = "tcl2",
    h: float | None = None,
) -> StrokeMap:
    """Propagate both pure initial states through one stroke.

    which: "hot" (splitting omega_h, reservoir T_h, duration t1) or
    "cold".  dynamics selects the backend, "tcl2" or "markov".
    """
    if which == "hot":
        reservoir, omega, t_end = engine.hot_reservoir, engine.omega_h, engine.t1
    elif which == "cold":
        reservoir, omega, t_end = engine.cold_reservoir, engine.omega_c, engine.t2
    else:
        raise ValueError(f"which must be 'hot' or 'cold', got {which!r}")

    if dynamics == "tcl2":
        traj0, traj1 = tcl2.evolve_branch_pair(reservoir, omega, t_end, h)
        return StrokeMap(r0=float(traj0.rho00[-1]), r1=float(traj1.rho00[-1]))
    if dynamics == "markov":
        r0 = markov.markov_rho00(t_end, markov.MarkovStroke(reservoir, omega, 1.0, t_end))
        r1 = markov.markov_rho00(t_end, markov.MarkovStroke(reservoir, omega, 0.0, t_end))
        return StrokeMap(r0=r0, r1=r1)
    raise ValueError(f"unknown dynamics backend {dynamics!r}")


def limit_cycle(hot: StrokeMap, cold: StrokeMap) -> LimitCycle:
    """Closed-form fixed point of the composed cycle map.

    P_h = p_h / (1 - p0) with p0 the product of the two stroke
    contractions; raises ``DegenerateCycle`` when |p0| is within
    ``DEGENERACY_TOL`` of 1 (no relaxation, no unique fixed point).
    """
    p0 = cold.contraction * hot.contraction
    if abs(p0) >= 1.0 - DEGENERACY_TOL:
        raise DegenerateCycle(
            f"cycle map is (nearly) the identity, |p0| = {abs(p0):.17g}", p0=p0
        )
    p_h = cold.r0 * hot.r1 + cold.r1 * (1.0 - hot.r1)
    p_c = hot.r0 * cold.r1 + hot.r1 * (1.0 - cold.r1)
    ph = p_h / (1.0 - p0)
    pc = p_c / (1.0 - p0)

    # direct verification: iterate the composed affine map to the same point
    p, n = 0.0, 0
    while abs(p - ph) > 1e-12 and n < 10_000:
        p = cold.apply(hot.apply(p))
        n += 1
    return LimitCycle(P_h=ph, P_c=pc, p0=p0, n_iter_check=n)


def iterate_cycle(hot: StrokeMap, cold: StrokeMap, p_start: float, n: int):
    """Explicit n-cycle orbit of the stroboscopic map.

    Returns [(P_h_1, P_c_1), ..., (P_h_n, P_c_n)] with P_h_1 = p_start
    and P_c_k the probability after the k-th hot contact.  Convergence
    toward the fixed point is geometric with ratio |p0|.
    """
    if not 0.0 <= p_start <= 1.0:
        raise ValueError("p_start must lie in [0, 1]")
    if n < 1:
        raise ValueError("need at least one cycle")
    orbit = []
    ph = p_start
    for _ in range(n):
        pc = hot.apply(ph)
        orbit.append((ph, pc))
        ph = cold.apply(pc)
    return orbit
