"""Timestep and Chebyshev-coefficient optimization of the ansatz.

Both optimizers maximize the optimal-solution probability of the final
state.  The timestep search is a deterministic golden-section refinement
around a fixed seed grid; the Chebyshev search is quasi-Newton (BFGS)
ascent with central-difference gradients.  Nothing here draws random
numbers, so every reported value reproduces bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as scipy_optimize

from .schedules import ChebyshevSchedule, SimpleSchedule, angles_from_schedule
from .sim import Hamiltonians, pr_opt, qaoa_state

DT_SEEDS = tuple(np.arange(0.25, 10.0 + 1e-9, 0.25))
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OptResult:
    """Best parameters found, with the per-seed and per-iteration record."""

    best_params: np.ndarray
    best_value: float
    seed_trace: tuple = ()
    evaluations: int = 0
    method: str = ""
    iterate_values: tuple = field(default=(), repr=False)


class _Counter:
    def __init__(self, fn):
        self.fn = fn
        self.count = 0

    def __call__(self, x):
        self.count += 1
        return self.fn(x)


def _pr_objective(hams: Hamiltonians, p: int, mixer_mode: str):
    """Pr_opt as a function of the simple-schedule timestep."""
    schedule = SimpleSchedule(hams.instance.k)
    mask = hams.optimal_mask

    def objective(dt: float) -> float:
        angles = angles_from_schedule(schedule, p, float(dt))
        state = qaoa_state(hams, angles, mixer_mode=mixer_mode)
        return float(np.sum(np.abs(state[mask]) ** 2))

    return objective


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Deterministic golden-section maximization on [lo, hi]."""
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def optimize_dt(hams: Hamiltonians, p: int, mixer_mode: str = "seq",
                seeds=None, bracket: float = 0.25, tol: float = 1e-4) -> OptResult:
    """Best timestep over local golden-section searches around each seed.

    Ties go to the smaller timestep; a flat landscape therefore returns
    the refinement of the first seed.
    """
    if p < 1:
        raise ValueError("need at least one layer")
    seeds = DT_SEEDS if seeds is None else tuple(float(s) for s in seeds)
    objective = _Counter(_pr_objective(hams, p, mixer_mode))

    trace = []
    best_dt, best_value = None, -1.0
    for seed in seeds:
        dt, value = _golden_max(objective, max(seed - bracket, 0.0), seed + bracket, tol)
        trace.append((seed, value))
        if value > best_value + 1e-15 or (best_dt is None):
            best_dt, best_value = dt, value
        elif abs(value - best_value) <= 1e-15 and dt < best_dt:
            best_dt = dt
    return OptResult(best_params=np.array([best_dt]), best_value=best_value,
                     seed_trace=tuple(trace), evaluations=objective.count,
                     method="golden-section")


def _central_gradient(f, x: np.ndarray, h: float) -> np.ndarray:
    grad = np.empty(len(x))
    for i in range(len(x)):
        step = np.zeros(len(x))
        step[i] = h
        grad[i] = (f(x + step) - f(x - step)) / (2.0 * h)
    return grad


def optimize_chebyshev(hams: Hamiltonians, p: int, init: ChebyshevSchedule,
                       mixer_mode: str = "seq", max_iter: int = 500,
                       grad_h: float = 1e-4, gtol: float = 1e-6) -> OptResult:
    """BFGS ascent over the stacked (alpha, beta, gamma) coefficients.

    Gradients are central differences at step `grad_h`; iteration is
    capped at `max_iter` or gradient infinity-norm below `gtol`.  The
    best accepted iterate is returned, so a run that never improves
    hands back the initial schedule.
    """
    if p < 1:
        raise ValueError("need at least one layer")
    order = len(init.coeffs_alpha)
    if not (len(init.coeffs_beta) == len(init.coeffs_gamma) == order):
        raise ValueError("coefficient vectors must share one expansion order")
    mask = hams.optimal_mask

    def unpack(x: np.ndarray) -> ChebyshevSchedule:
        return ChebyshevSchedule(tuple(x[:order]), tuple(x[order:2 * order]),
                                 tuple(x[2 * order:]))

    def value(x: np.ndarray) -> float:
        angles = angles_from_schedule(unpack(x), p)
        state = qaoa_state(hams, angles, mixer_mode=mixer_mode)
        return float(np.sum(np.abs(state[mask]) ** 2))

    counted = _Counter(value)
    x0 = np.concatenate([init.coeffs_alpha, init.coeffs_beta, init.coeffs_gamma])

    best = {"x": x0.copy(), "value": counted(x0)}
    iterates = [best["value"]]

    def track(xk):
        v = counted(xk)
        iterates.append(v)
        if v > best["value"]:
            best["x"], best["value"] = np.array(xk, copy=True), v

    scipy_optimize.minimize(
        lambda x: -counted(x), x0, method="BFGS",
        jac=lambda x: -_central_gradient(counted, x, grad_h),
        callback=track, options={"gtol": gtol, "maxiter": max_iter})

    return OptResult(best_params=best["x"], best_value=best["value"],
                     seed_trace=((0, iterates[0]),), evaluations=counted.count,
                     method="bfgs-central-diff",
                     iterate_values=tuple(iterates))


def schedule_from_params(params: np.ndarray, normalize: bool = False) -> ChebyshevSchedule:
    """Rebuild the schedule from a stacked coefficient vector."""
    order = len(params) // 3
    return ChebyshevSchedule(tuple(params[:order]), tuple(params[order:2 * order]),
                             tuple(params[2 * order:]), normalize)
