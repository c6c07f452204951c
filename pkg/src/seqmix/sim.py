"""Statevector evolution restricted to the feasible subspace.

States are complex vectors indexed by the feasible basis.  A layer of
the generalized ansatz applies, in order, the warm-start phase
exp(-i*alpha*A), the mixer at angle beta, and the objective phase
exp(-i*gamma*C); the state starts from the warm-start basis vector.

The mixer Hamiltonian is B+ = scale * sum_j (-M_j) over the family
operators.  Its "sequential" form applies exp(-i*beta*scale*(-M_j)) one
operator at a time: on each disjoint basis-index pair (u, v) coupled by
M_j this is the rotation

    (a_u, a_v)  ->  (cos(t)*a_u + i*sin(t)*a_v,  i*sin(t)*a_u + cos(t)*a_v)

with t = beta * scale.  The "simultaneous" form exponentiates the dense
restriction of B+ through a cached eigendecomposition.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLarge, MissingWarmStart, TooLarge
from .mixers import MixingFamily, pauli_decompose, transition_pairs
from .problem import (FeasibleBasis, ProblemInstance, constraint_values_all,
                      enumerate_feasible, objective_values)
from .schedules import AngleSet, angles_from_schedule

DENSE_CAP_ENV = "SEQMIX_DENSE_CAP"
_DEFAULT_DENSE_CAP = 4096


def dense_cap() -> int:
    return int(os.environ.get(DENSE_CAP_ENV, _DEFAULT_DENSE_CAP))


def default_scale(family: MixingFamily, n: int) -> float:
    """1 for the minimal family, 1/N for max-type truncations."""
    if family.provenance.startswith(("max", "mu-max")):
        return 1.0 / n
    return 1.0


@dataclass
class Hamiltonians:
    """Diagonal A and C plus the pair-coupled mixer, bound to one basis.

    `pair_groups[j]` holds the disjoint (u, v) index pairs of family
    operator j; `scale` multiplies the summed, negated operators.
    """

    instance: ProblemInstance
    family: MixingFamily
    basis: FeasibleBasis
    a_diag: np.ndarray
    c_diag: np.ndarray
    pair_groups: tuple[np.ndarray, ...]
    scale: float
    warm_index: int
    _bplus: np.ndarray | None = field(default=None, repr=False)
    _bplus_eig: tuple | None = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def a_matrix(self) -> np.ndarray:
        return np.diag(self.a_diag.astype(complex))

    def c_matrix(self) -> np.ndarray:
        return np.diag(self.c_diag.astype(complex))

    def bplus_matrix(self) -> np.ndarray:
        if self._bplus is None:
            dim = self.dimension
            out = np.zeros((dim, dim))
            for pairs in self.pair_groups:
                for u, v in pairs:
                    out[u, v] -= 1.0
                    out[v, u] -= 1.0
            self._bplus = self.scale * out
        return self._bplus

    def bplus_eig(self):
        if self._bplus_eig is None:
            self._bplus_eig = np.linalg.eigh(self.bplus_matrix())
        return self._bplus_eig

    @property
    def optimal_mask(self) -> np.ndarray:
        return np.abs(self.c_diag - self.c_diag.min()) <= 1e-12

    def warm_state(self) -> np.ndarray:
        state = np.zeros(self.dimension, dtype=complex)
        state[self.warm_index] = 1.0
        return state


def build_hamiltonians(instance: ProblemInstance, family: MixingFamily,
                       scale_bplus: float | None = None,
                       basis: FeasibleBasis | None = None) -> Hamiltonians:
    """Restrict A, B+, C to the feasible subspace of the instance.

    A is the warm-start Hamiltonian 0.5 * sum_i sigma(z0_i) * Z_i with
    sigma(z) = 2z - 1, whose unique ground state is the warm start with
    eigenvalue -N/2 and unit level spacing.  C carries the objective
    values.  `scale_bplus` defaults per :func:`default_scale`.
    """
    if instance.warm_start is None:
        raise MissingWarmStart("building A requires an instance with a warm start")
    basis = basis if basis is not None else enumerate_feasible(instance)
    bits = basis.bit_columns()
    sigma = 2.0 * np.array([int(c) for c in instance.warm_start]) - 1.0
    a_diag = 0.5 * (bits * -2.0 + 1.0) @ sigma  # 0.5 * sum sigma(z0_i) * (1 - 2 z_i)
    c_diag = objective_values(instance, basis)
    pair_groups = tuple(
        np.array(transition_pairs(op, basis), dtype=np.int64).reshape(-1, 2)
        for op in family.operators)
    scale = default_scale(family, instance.n) if scale_bplus is None else float(scale_bplus)
    return Hamiltonians(instance, family, basis, a_diag, c_diag, pair_groups,
                        scale, basis.index_of(instance.warm_start))


def evolve_diagonal(state: np.ndarray, diag: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i*theta*D) applied elementwise; norm preserved exactly."""
    return state * np.exp(-1j * theta * np.asarray(diag))


def resolve_ordering(count: int, ordering) -> range | list:
    """Operator application order: None/'canonical', 'reversed', or explicit indices."""
    if ordering is None or ordering == "canonical":
        return range(count)
    if ordering == "reversed":
        return range(count - 1, -1, -1)
    order = [int(i) for i in ordering]
    if sorted(order) != list(range(count)):
        raise ValueError("ordering must be a permutation of the operator indices")
    return order


def evolve_sequential(state: np.ndarray, pair_groups, beta: float,
                      ordering=None) -> np.ndarray:
    """Product of per-operator exponentials exp(-i*beta*(-M_j)), fixed order."""
    out = state.copy()
    c = np.cos(beta)
    s = 1j * np.sin(beta)
    for j in resolve_ordering(len(pair_groups), ordering):
        pairs = pair_groups[j]
        if len(pairs) == 0:
            continue
        u, v = pairs[:, 0], pairs[:, 1]
        au, av = out[u], out[v]
        out[u] = c * au + s * av
        out[v] = s * au + c * av
    return out


def evolve_simultaneous(state: np.ndarray, h, theta: float,
                        eig=None) -> np.ndarray:
    """exp(-i*theta*H) via dense eigendecomposition.

    `h` may be a dense Hermitian matrix or a 1-D diagonal; pass a
    precomputed `eig = (vals, vecs)` to reuse a decomposition.
    """
    h = np.asarray(h)
    if h.ndim == 1:
        return evolve_diagonal(state, h, theta)
    if h.shape[0] > dense_cap():
        raise DimensionTooLarge(
            f"dimension {h.shape[0]} exceeds dense cap {dense_cap()} "
            f"(override with ${DENSE_CAP_ENV})")
    vals, vecs = np.linalg.eigh(h) if eig is None else eig
    return vecs @ (np.exp(-1j * theta * vals) * (vecs.conj().T @ state))


def qaoa_state(hams: Hamiltonians, angles: AngleSet, mixer_mode: str = "seq",
               ordering=None) -> np.ndarray:
    """Run the full ansatz from the warm-start state; returns the final vector."""
    state = hams.warm_state()
    if mixer_mode not in ("seq", "sim"):
        raise ValueError(f"unknown mixer mode {mixer_mode!r}")
    eig = hams.bplus_eig() if mixer_mode == "sim" else None
    for a, bb, g in zip(angles.alphas, angles.betas, angles.gammas):
        state = evolve_diagonal(state, hams.a_diag, a)
        if mixer_mode == "seq":
            state = evolve_sequential(state, hams.pair_groups, bb * hams.scale, ordering)
        else:
            state = evolve_simultaneous(state, hams.bplus_matrix(), bb, eig=eig)
        state = evolve_diagonal(state, hams.c_diag, g)
    return state


def pr_opt(state: np.ndarray, instance: ProblemInstance,
           basis: FeasibleBasis) -> float:
    """Total probability on the objective-minimizing feasible states."""
    values = objective_values(instance, basis)
    mask = np.abs(values - values.min()) <= 1e-12
    return float(np.sum(np.abs(state[mask]) ** 2))


def _parity(states: np.ndarray, mask: int, n: int) -> np.ndarray:
    acc = np.zeros(len(states), dtype=np.int64)
    for pos in range(n):
        if (mask >> pos) & 1:
            acc ^= (states >> pos) & 1
    return acc


def _full_space_diagonals(instance: ProblemInstance):
    n = instance.n
    states = np.arange(1 << n, dtype=np.int64)
    bits = np.stack([(states >> (n - 1 - i)) & 1 for i in range(n)], axis=1)
    sigma = 2.0 * np.array([int(c) for c in instance.warm_start]) - 1.0
    a_full = 0.5 * (bits * -2.0 + 1.0) @ sigma
    c_full = bits @ np.asarray(instance.linear, dtype=float)
    for i, j, jij in instance.quadratic:
        c_full = c_full + jij * bits[:, i] * bits[:, j]
    return a_full, c_full


def leakage_check(instance: ProblemInstance, family, angles: AngleSet,
                  scale: float | None = None, ordering=None) -> float:
    """Probability leaked outside the feasible subspace in a full 2^N run.

    Deliberately avoids the pair-rotation machinery: each operator's
    exponential is applied through its commuting Pauli expansion,
    exp(i*t*M) = prod_T (cos(t*c_T) + i*sin(t*c_T)*P_T), acting on the
    full Hilbert space.  For a valid family the result is < 1e-12.
    """
    n = instance.n
    if n > 12:
        raise TooLarge(f"full-space check limited to 12 variables, got {n}")
    if instance.warm_start is None:
        raise MissingWarmStart("leakage check starts from the warm-start state")
    operators = list(family.operators) if isinstance(family, MixingFamily) else list(family)
    if scale is None:
        scale = default_scale(family, n) if isinstance(family, MixingFamily) else 1.0

    a_full, c_full = _full_space_diagonals(instance)
    states = np.arange(1 << n, dtype=np.int64)

    terms_per_op = []
    for op in operators:
        prepared = []
        for term in pauli_decompose(op):
            flip = 0
            ymask = 0
            for q, axis in zip(term.qubits, term.axes):
                flip |= 1 << (n - 1 - q)
                if axis == "Y":
                    ymask |= 1 << (n - 1 - q)
            n_y = bin(ymask).count("1")
            phase = (1j ** n_y) * (-1.0) ** _parity(states, ymask, n)
            prepared.append((term.coefficient, states ^ flip, phase))
        terms_per_op.append(prepared)

    psi = np.zeros(1 << n, dtype=complex)
    psi[instance.warm_start_int] = 1.0
    for a, bb, g in zip(angles.alphas, angles.betas, angles.gammas):
        psi = psi * np.exp(-1j * a * a_full)
        for j in resolve_ordering(len(operators), ordering):
            for coeff, perm, phase in terms_per_op[j]:
                t = bb * scale * coeff
                psi = np.cos(t) * psi + 1j * np.sin(t) * (phase[perm] * psi[perm])
        psi = psi * np.exp(-1j * g * c_full)

    outside = constraint_values_all(instance) != instance.b
    return float(np.sum(np.abs(psi[outside]) ** 2))


def adiabatic_evolve(hams: Hamiltonians, schedule, total_time: float,
                     n_steps: int, mixer_mode: str = "seq",
                     ordering=None) -> np.ndarray:
    """Trotterized annealing run: p = n_steps - 1 layers at dt = T/(p+1).

    The final diagonal-only step of the discretized schedule is dropped;
    it cannot change basis populations.
    """
    if n_steps < 1:
        raise ValueError("need at least one step")
    p = n_steps - 1
    dt = total_time / (p + 1)
    angles = angles_from_schedule(schedule, p, dt)
    return qaoa_state(hams, angles, mixer_mode=mixer_mode, ordering=ordering)
