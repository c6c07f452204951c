"""Annealing schedules and their per-layer angle sets.

Two parameterizations of the coefficient triple (alpha, beta, gamma) on
s in [0, 1] are supported:

* the simple rational schedule
      alpha = (1-s)/d,  beta = k*s*(1-s)/d,  gamma = s/d,
  with d = 1 + k*s*(1-s), normalized so the triple sums to 1; and
* independent Chebyshev expansions of each coefficient on x = 2s - 1.

Chebyshev series use the halved-first-coefficient convention
    f(x) = sum_{j=0}^{n-1} c_j T_j(x) - c_0 / 2,
so a constant function of value 1 has c = (2, 0, ..., 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_ORDER = 6  # coefficients per expansion: degree-5 polynomials


@dataclass(frozen=True)
class SimpleSchedule:
    """Rational schedule keyed by the instance's maximum coefficient k."""

    k: int


@dataclass(frozen=True)
class ChebyshevSchedule:
    """Coefficient vectors for alpha, beta, gamma on x = 2s - 1.

    With `normalize` set, emitted triples are divided by their sum;
    this is used when the curves act as annealing coefficients.
    """

    coeffs_alpha: tuple[float, ...]
    coeffs_beta: tuple[float, ...]
    coeffs_gamma: tuple[float, ...]
    normalize: bool = False

    def with_normalize(self, normalize: bool) -> "ChebyshevSchedule":
        return ChebyshevSchedule(self.coeffs_alpha, self.coeffs_beta,
                                 self.coeffs_gamma, normalize)


@dataclass
class AngleSet:
    """Per-layer angles (alpha_l, beta_l, gamma_l), one entry per layer."""

    alphas: np.ndarray
    betas: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=float)
        self.betas = np.asarray(self.betas, dtype=float)
        self.gammas = np.asarray(self.gammas, dtype=float)
        if not (len(self.alphas) == len(self.betas) == len(self.gammas)):
            raise ValueError("angle vectors must have equal length")
        for arr in (self.alphas, self.betas, self.gammas):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError("angles must be finite")

    @property
    def p(self) -> int:
        return len(self.alphas)


def simple_eval(k: int, s: float) -> tuple[float, float, float]:
    """Schedule triple at s; (1,0,0) at s=0 and (0,0,1) at s=1."""
    d = 1.0 + k * s * (1.0 - s)
    return (1.0 - s) / d, k * s * (1.0 - s) / d, s / d


def simple_derivative(k: int, s: float) -> tuple[float, float, float]:
    """d/ds of the simple schedule triple, in closed form."""
    d = 1.0 + k * s * (1.0 - s)
    dd = k * (1.0 - 2.0 * s)
    return ((-d - (1.0 - s) * dd) / d ** 2,
            dd / d ** 2,
            (d - s * dd) / d ** 2)


def cheb_eval(coeffs, x: float) -> float:
    """Evaluate a Chebyshev series at x in [-1, 1] by the Clenshaw recurrence."""
    if abs(x) > 1.0 + 1e-12:
        raise DomainError(f"x={x} outside [-1, 1]")
    c = np.asarray(coeffs, dtype=float)
    d = dd = 0.0
    for j in range(len(c) - 1, 0, -1):
        d, dd = 2.0 * x * d - dd + c[j], d
    return x * d - dd + 0.5 * c[0]


def cheb_fit(f, n: int) -> tuple[float, ...]:
    """Fit n coefficients to a callable on [-1, 1] at the n Chebyshev nodes."""
    if n < 1:
        raise ValueError("need at least one coefficient")
    ks = np.arange(1, n + 1)
    nodes = np.cos(np.pi * (ks - 0.5) / n)
    values = np.array([f(x) for x in nodes])
    coeffs = []
    for j in range(n):
        coeffs.append(2.0 / n * float(np.sum(values * np.cos(np.pi * j * (ks - 0.5) / n))))
    return tuple(coeffs)


def cheb_derivative(coeffs) -> tuple[float, ...]:
    """Coefficients of the derivative series on [-1, 1] (same convention)."""
    c = list(coeffs)
    n = len(c)
    der = [0.0] * n
    if n >= 2:
        der[n - 2] = 2.0 * (n - 1) * c[n - 1]
        for j in range(n - 3, -1, -1):
            der[j] = der[j + 2] + 2.0 * (j + 1) * c[j + 1]
    return tuple(der)


def _cheb_triple(schedule: ChebyshevSchedule, s: float):
    x = 2.0 * s - 1.0
    return np.array([cheb_eval(schedule.coeffs_alpha, x),
                     cheb_eval(schedule.coeffs_beta, x),
                     cheb_eval(schedule.coeffs_gamma, x)])


def schedule_eval(schedule, s: float) -> tuple[float, float, float]:
    """(alpha, beta, gamma) at s for either schedule kind."""
    if isinstance(schedule, SimpleSchedule):
        return simple_eval(schedule.k, s)
    triple = _cheb_triple(schedule, s)
    if schedule.normalize:
        total = float(triple.sum())
        if abs(total) < 1e-9:
            raise ValueError(f"schedule triple sums to {total} at s={s}; cannot normalize")
        triple = triple / total
    return tuple(float(v) for v in triple)


def schedule_derivative(schedule, s: float) -> tuple[float, float, float]:
    """d/ds of the schedule triple (quotient rule when normalized)."""
    if isinstance(schedule, SimpleSchedule):
        return simple_derivative(schedule.k, s)
    x = 2.0 * s - 1.0
    ders = np.array([cheb_eval(cheb_derivative(schedule.coeffs_alpha), x),
                     cheb_eval(cheb_derivative(schedule.coeffs_beta), x),
                     cheb_eval(cheb_derivative(schedule.coeffs_gamma), x)]) * 2.0
    if not schedule.normalize:
        return tuple(float(v) for v in ders)
    triple = _cheb_triple(schedule, s)
    total = float(triple.sum())
    if abs(total) < 1e-9:
        raise ValueError(f"schedule triple sums to {total} at s={s}; cannot normalize")
    dtotal = float(ders.sum())
    out = (ders * total - triple * dtotal) / total ** 2
    return tuple(float(v) for v in out)


def fit_schedule(schedule, dt: float = 1.0, order: int = DEFAULT_ORDER) -> ChebyshevSchedule:
    """Chebyshev expansion of dt-scaled schedule curves (seed for refinement)."""
    def curve(component):
        def f(x):
            return schedule_eval(schedule, (x + 1.0) / 2.0)[component] * dt
        return f
    return ChebyshevSchedule(cheb_fit(curve(0), order),
                             cheb_fit(curve(1), order),
                             cheb_fit(curve(2), order))


def angles_from_schedule(schedule, p: int, dt: float = 1.0) -> AngleSet:
    """Sample the schedule at s_l = l/(p+1), l = 1..p, scaled by dt.

    Chebyshev schedules carry their amplitudes in the coefficients, so
    dt is left at 1 for them by convention.
    """
    if p < 0:
        raise ValueError("layer count must be nonnegative")
    alphas, betas, gammas = [], [], []
    for l in range(1, p + 1):
        a, bb, g = schedule_eval(schedule, l / (p + 1))
        alphas.append(a * dt)
        betas.append(bb * dt)
        gammas.append(g * dt)
    return AngleSet(np.array(alphas), np.array(betas), np.array(gammas))
