"""Instantaneous spectra of H(s) = alpha(s)A + beta(s)B+ + gamma(s)C.

The adiabatic timescale at s is

    T_A(s) = max_j |<E_0| dH/ds |E_j>| / (E_0 - E_j)^2

over the excited levels computed.  Finiteness of T_A across the sweep
certifies an adiabatic path from the warm start to the optimum; a
vanishing interior gap signals a broken mixing family.  Since only the
lowest m levels enter the maximum, the reported curve is a lower bound
on the all-levels quantity (recorded in the curve metadata).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GapCollapse, NegativeBeta
from .problem import find_optimum
from .schedules import schedule_derivative, schedule_eval
from .sim import Hamiltonians

DEGENERACY_TOL = 1e-10
DEFAULT_LEVELS = 20


def default_grid(points: int = 201, margin: float = 0.0025) -> np.ndarray:
    """Uniform s-grid avoiding the exact endpoints, where degeneracy handling differs."""
    return np.linspace(margin, 1.0 - margin, points)


@dataclass
class SpectrumSlice:
    """Lowest-m eigenpairs of H(s) at one schedule point."""

    s: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column j is |E_j>
    gap: float


@dataclass
class TimescaleCurve:
    grid: np.ndarray
    t_a: np.ndarray
    s_at_max: float
    max_value: float
    min_gap: float
    levels_used: int  # T_A maximized over this many levels only: a lower bound
    overlap_start: float | None = None  # |<ground(H(s_first)) | warm start>|
    overlap_end: float | None = None    # |<ground(H(s_last)) | optimum>|


def hamiltonian_at(hams: Hamiltonians, schedule, s: float,
                   require_positive_beta: bool = True) -> np.ndarray:
    """Dense H(s) on the feasible subspace."""
    alpha, beta, gamma = schedule_eval(schedule, s)
    if require_positive_beta and beta < 0.0:
        raise NegativeBeta(f"beta({s}) = {beta} < 0; not a valid annealing coefficient")
    return (alpha * np.diag(hams.a_diag) + beta * hams.bplus_matrix()
            + gamma * np.diag(hams.c_diag))


def spectrum_slice(h: np.ndarray, m: int, s: float = float("nan")) -> SpectrumSlice:
    """Lowest m eigenpairs by dense symmetric eigensolve."""
    h = np.asarray(h)
    if h.ndim == 1:
        h = np.diag(h)
    m = min(m, h.shape[0])
    vals, vecs = np.linalg.eigh(h)
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else float("inf")
    return SpectrumSlice(s, vals[:m], vecs[:, :m], gap)


def _timescale_at(hams: Hamiltonians, schedule, s: float, m: int) -> tuple[float, float]:
    h = hamiltonian_at(hams, schedule, s)
    vals, vecs = np.linalg.eigh(h)
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else float("inf")
    if gap < DEGENERACY_TOL and 0.0 < s < 1.0:
        raise GapCollapse(f"gap {gap} below {DEGENERACY_TOL} at interior s={s}")
    da, db, dg = schedule_derivative(schedule, s)
    dh = da * np.diag(hams.a_diag) + db * hams.bplus_matrix() + dg * np.diag(hams.c_diag)
    ground = vecs[:, 0]
    couplings = ground.conj() @ dh @ vecs[:, 1:min(m, len(vals))]
    denom = (vals[0] - vals[1:min(m, len(vals))]) ** 2
    keep = np.abs(vals[1:min(m, len(vals))] - vals[0]) >= DEGENERACY_TOL
    if not np.all(keep):
        warnings.warn(f"excluding {int(np.sum(~keep))} level(s) degenerate with the "
                      f"ground state from T_A at s={s}")
    if not np.any(keep):
        return 0.0, gap
    t_a = float(np.max(np.abs(couplings[keep]) / denom[keep]))
    return t_a, gap


def adiabatic_timescale(hams: Hamiltonians, schedule, grid=None,
                        m: int = DEFAULT_LEVELS) -> TimescaleCurve:
    """T_A(s) across the grid, with the minimum interior gap and endpoint overlaps."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    t_a = np.empty(len(grid))
    min_gap = float("inf")
    for i, s in enumerate(grid):
        t_a[i], gap = _timescale_at(hams, schedule, float(s), m)
        min_gap = min(min_gap, gap)
    at = int(np.argmax(t_a))

    overlap_start = overlap_end = None
    first = spectrum_slice(hamiltonian_at(hams, schedule, float(grid[0])), 1, float(grid[0]))
    overlap_start = float(np.abs(first.eigenvectors[hams.warm_index, 0]))
    z_opt, _ = find_optimum(hams.instance, hams.basis)
    last = spectrum_slice(hamiltonian_at(hams, schedule, float(grid[-1])), 1, float(grid[-1]))
    overlap_end = float(np.abs(last.eigenvectors[hams.basis.index_of(z_opt), 0]))

    return TimescaleCurve(grid=grid, t_a=t_a, s_at_max=float(grid[at]),
                          max_value=float(t_a[at]), min_gap=min_gap,
                          levels_used=min(m, hams.dimension),
                          overlap_start=overlap_start, overlap_end=overlap_end)
