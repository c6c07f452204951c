"""Bundled 8-variable example problem and the convergence-study pipeline.

The example has coefficients (1,1,1,2,2,2,3,3), a linear objective, a
hand-picked feasible warm start, and target value 8 (the constraint
value shared by the warm start and the optimum; any other target would
describe a different instance, so 8 is recorded as derived rather than
given).  The pipeline sweeps circuit depth p doubling from 2, optimizes
the simple-schedule timestep at each depth, refines a Chebyshev
parameterization seeded from that optimum, and stops each branch at the
first depth reaching the target optimal-solution probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mixers import MixingFamily, family_max, family_min, family_mu_max
from .optimize import OptResult, optimize_chebyshev, optimize_dt, schedule_from_params
from .problem import ProblemInstance, build_instance
from .schedules import ChebyshevSchedule, SimpleSchedule, fit_schedule
from .sim import Hamiltonians, build_hamiltonians
from .spectral import TimescaleCurve, adiabatic_timescale

CASE_STUDY_COEFFICIENTS = (1, 1, 1, 2, 2, 2, 3, 3)
CASE_STUDY_LINEAR = (1.181, 0.640, 1.840, 0.643, 0.015, 0.352, 2.633, 0.696)
CASE_STUDY_B = 8  # derived: equals the warm start's and optimum's constraint value
CASE_STUDY_WARM_START = "11100110"
CASE_STUDY_OPTIMUM = "01001101"

PR_TARGET = 0.999


def case_study_instance() -> ProblemInstance:
    return build_instance(CASE_STUDY_COEFFICIENTS, CASE_STUDY_B,
                          CASE_STUDY_LINEAR, warm_start=CASE_STUDY_WARM_START)


def named_family(instance: ProblemInstance, name: str) -> MixingFamily:
    """Family from a short spec: "min", "max", or "mu-max:<mu>"."""
    if name == "min":
        return family_min(instance)
    if name == "max":
        return family_max(instance)
    if name.startswith("mu-max:"):
        return family_mu_max(instance, int(name.split(":", 1)[1]))
    raise ValueError(f"unknown family spec {name!r}")


@dataclass
class SweepPoint:
    p: int
    dt: float | None = None
    pr_simple: float | None = None
    pr_chebyshev: float | None = None
    dt_result: OptResult | None = field(default=None, repr=False)
    cheb_result: OptResult | None = field(default=None, repr=False)


@dataclass
class FamilyRun:
    """Everything the depth sweep produced for one mixing family."""

    name: str
    family: MixingFamily
    scale: float
    points: list[SweepPoint]
    simple_converged_p: int | None
    cheb_converged_p: int | None
    cheb_schedule: ChebyshevSchedule | None
    timescale_simple: TimescaleCurve | None = None
    timescale_chebyshev: TimescaleCurve | None = None

    @property
    def dt_values(self) -> list[float]:
        return [pt.dt for pt in self.points if pt.dt is not None]


def run_family_sweep(hams: Hamiltonians, name: str,
                     pr_target: float = PR_TARGET,
                     max_p_simple: int = 512, max_p_cheb: int = 64,
                     mixer_mode: str = "seq", dt_tol: float = 1e-3,
                     timescales: bool = True,
                     progress=None) -> FamilyRun:
    points: list[SweepPoint] = []
    simple_at: int | None = None
    cheb_at: int | None = None
    best_cheb: ChebyshevSchedule | None = None

    p = 2
    while p <= max(max_p_simple, max_p_cheb):
        want_simple = simple_at is None and p <= max_p_simple
        want_cheb = cheb_at is None and p <= max_p_cheb
        if not (want_simple or want_cheb):
            break
        point = SweepPoint(p=p)
        if want_simple or want_cheb:
            dt_result = optimize_dt(hams, p, mixer_mode=mixer_mode, tol=dt_tol)
            point.dt = float(dt_result.best_params[0])
            point.pr_simple = dt_result.best_value
            point.dt_result = dt_result
            if want_simple and dt_result.best_value >= pr_target:
                simple_at = p
        if want_cheb:
            init = fit_schedule(SimpleSchedule(hams.instance.k), dt=point.dt)
            cheb_result = optimize_chebyshev(hams, p, init, mixer_mode=mixer_mode)
            point.pr_chebyshev = cheb_result.best_value
            point.cheb_result = cheb_result
            best_cheb = schedule_from_params(cheb_result.best_params)
            if cheb_result.best_value >= pr_target:
                cheb_at = p
        points.append(point)
        if progress is not None:
            progress(name, point)
        p *= 2

    run = FamilyRun(name=name, family=hams.family, scale=hams.scale, points=points,
                    simple_converged_p=simple_at, cheb_converged_p=cheb_at,
                    cheb_schedule=best_cheb)
    if timescales:
        run.timescale_simple = adiabatic_timescale(hams, SimpleSchedule(hams.instance.k))
        if best_cheb is not None:
            run.timescale_chebyshev = adiabatic_timescale(
                hams, best_cheb.with_normalize(True))
    return run


def run_case_study(families=("mu-max:3", "min"), pr_target: float = PR_TARGET,
                   max_p_simple: int = 512, max_p_cheb: int = 64,
                   mixer_mode: str = "seq", timescales: bool = True,
                   progress=None) -> dict[str, FamilyRun]:
    """Full depth sweep of the bundled instance for each requested family."""
    instance = case_study_instance()
    runs = {}
    for name in families:
        hams = build_hamiltonians(instance, named_family(instance, name))
        runs[name] = run_family_sweep(
            hams, name, pr_target=pr_target, max_p_simple=max_p_simple,
            max_p_cheb=max_p_cheb, mixer_mode=mixer_mode,
            timescales=timescales, progress=progress)
    return runs
