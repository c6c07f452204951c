"""Constrained binary problem instances and feasible-subspace enumeration.

An instance minimizes a (linear plus optional quadratic) objective over
bitstrings z subject to a single constraint sum_i s_i * z_i == b with
positive integer coefficients.  The coefficients must be "sequential":
with k = max(s), the value 1 occurs at least twice and every value
2..k occurs at least once.

Conventions used throughout the package:

* Flat variable indices are 0-based.  Variable i may equivalently be
  addressed as [kappa, l], the l-th occurrence (1-based) of coefficient
  value kappa in the coefficient list.
* A bitstring "z1 z2 ... zN" maps to the integer with z1 as the most
  significant bit, so lexicographic order on strings equals numeric
  order on encodings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EmptyFeasibleSet, InfeasibleWarmStart, SequentialityViolation


def bit_mask(i: int, n: int) -> int:
    """Integer mask selecting variable i in an n-variable encoding."""
    return 1 << (n - 1 - i)


def bits_to_int(z) -> int:
    """Encode a bitstring (str or 0/1 sequence) as an integer, z1 most significant."""
    if isinstance(z, str):
        return int(z, 2) if z else 0
    out = 0
    for bit in z:
        out = (out << 1) | int(bit)
    return out


def int_to_bits(x: int, n: int) -> str:
    return format(x, f"0{n}b")


@dataclass(frozen=True, order=True)
class KappaIndex:
    """Label [kappa, l]: the l-th variable (1-based) with coefficient kappa."""

    kappa: int
    l: int


@dataclass(frozen=True)
class ProblemInstance:
    """A validated instance; construct via :func:`build_instance`.

    Fields `k`, `occurrences` and the index tables are derived from the
    coefficient list.  `occurrences[kappa - 1]` is the number of variables
    with coefficient kappa.
    """

    coefficients: tuple[int, ...]
    b: int
    linear: tuple[float, ...]
    quadratic: tuple[tuple[int, int, float], ...] = ()
    warm_start: str | None = None
    k: int = 0
    occurrences: tuple[int, ...] = ()
    labels: tuple[KappaIndex, ...] = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def total(self) -> int:
        """Largest attainable constraint value, sum of all coefficients."""
        return sum(self.coefficients)

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=np.int64)

    def flat_index(self, kappa: int, l: int) -> int:
        """Flat index of variable [kappa, l]; raises KeyError if absent."""
        try:
            return self._positions[kappa - 1][l - 1]
        except IndexError:
            raise KeyError(f"no variable [{kappa},{l}] in this instance") from None

    def kappa_index(self, i: int) -> KappaIndex:
        return self.labels[i]

    @cached_property
    def _positions(self) -> tuple[tuple[int, ...], ...]:
        by_kappa: list[list[int]] = [[] for _ in range(self.k)]
        for i, label in enumerate(self.labels):
            by_kappa[label.kappa - 1].append(i)
        return tuple(tuple(p) for p in by_kappa)

    def constraint_value(self, z) -> int:
        bits = _as_bits(z, self.n)
        return int(np.dot(self.coeff_array(), bits))

    def is_feasible(self, z) -> bool:
        return self.constraint_value(z) == self.b

    @property
    def warm_start_int(self) -> int | None:
        return None if self.warm_start is None else bits_to_int(self.warm_start)


def _as_bits(z, n: int) -> np.ndarray:
    if isinstance(z, str):
        if len(z) != n:
            raise ValueError(f"bitstring length {len(z)} != {n}")
        return np.frombuffer(z.encode(), dtype=np.uint8) - ord("0")
    bits = np.asarray(z)
    if bits.shape != (n,):
        raise ValueError(f"expected {n} bits, got shape {bits.shape}")
    return bits.astype(np.int64)


def build_instance(coefficients, b, objective_linear, objective_quadratic=None,
                   warm_start=None) -> ProblemInstance:
    """Validate and construct a problem instance.

    Raises SequentialityViolation when the coefficients are not a
    sequential set (1 twice, every 2..k at least once), and
    InfeasibleWarmStart when the warm start does not satisfy the
    constraint.
    """
    coeffs = tuple(int(c) for c in coefficients)
    if not coeffs:
        raise ValueError("coefficients must be nonempty")
    if any(c < 1 for c in coeffs):
        raise ValueError("coefficients must be >= 1")
    if int(b) < 0:
        raise ValueError("target b must be nonnegative")

    k = max(coeffs)
    counts = [0] * k
    labels = []
    for c in coeffs:
        counts[c - 1] += 1
        labels.append(KappaIndex(c, counts[c - 1]))
    if counts[0] < 2:
        raise SequentialityViolation(
            f"coefficient value 1 must appear at least twice (found {counts[0]})")
    for kappa in range(2, k + 1):
        if counts[kappa - 1] == 0:
            raise SequentialityViolation(
                f"coefficient value {kappa} missing (every value 2..{k} must appear)")

    linear = tuple(float(c) for c in objective_linear)
    if len(linear) != len(coeffs):
        raise ValueError(f"objective_linear has length {len(linear)}, expected {len(coeffs)}")

    quadratic = []
    for i, j, jij in (objective_quadratic or ()):
        i, j = int(i), int(j)
        if not (0 <= i < len(coeffs)) or not (0 <= j < len(coeffs)) or i == j:
            raise ValueError(f"quadratic term indices ({i},{j}) out of range")
        quadratic.append((i, j, float(jij)))

    if warm_start is not None:
        warm_start = str(warm_start)
        if len(warm_start) != len(coeffs) or set(warm_start) - {"0", "1"}:
            raise ValueError("warm_start must be a 0/1 string of length N")
        value = sum(c for c, z in zip(coeffs, warm_start) if z == "1")
        if value != int(b):
            raise InfeasibleWarmStart(
                f"warm start has constraint value {value}, expected {b}")

    return ProblemInstance(coefficients=coeffs, b=int(b), linear=linear,
                           quadratic=tuple(quadratic), warm_start=warm_start,
                           k=k, occurrences=tuple(counts), labels=tuple(labels))


def constraint_values_all(instance: ProblemInstance) -> np.ndarray:
    """Constraint value of every encoding 0 .. 2^N - 1."""
    n = instance.n
    states = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(1 << n, dtype=np.int64)
    for i, c in enumerate(instance.coefficients):
        values += ((states >> (n - 1 - i)) & 1) * c
    return values


class FeasibleBasis:
    """Ordered feasible bitstrings with a bidirectional index map.

    States are sorted lexicographically (z1 most significant), so the
    basis order is reproducible bit-for-bit across runs.
    """

    def __init__(self, n: int, b: int, ints: np.ndarray):
        self.n = n
        self.b = b
        self.ints = np.asarray(ints, dtype=np.int64)
        self.states = tuple(int_to_bits(int(x), n) for x in self.ints)
        self._index = {int(x): i for i, x in enumerate(self.ints)}

    def __len__(self) -> int:
        return len(self.ints)

    def __contains__(self, z) -> bool:
        return (z if isinstance(z, int) else bits_to_int(z)) in self._index

    def index_of(self, z) -> int:
        """Position of a state (bitstring or integer encoding)."""
        return self._index[z if isinstance(z, int) else bits_to_int(z)]

    def bit_columns(self) -> np.ndarray:
        """(len(basis), n) 0/1 matrix of the basis states' bits."""
        cols = [(self.ints >> (self.n - 1 - i)) & 1 for i in range(self.n)]
        return np.stack(cols, axis=1)


def enumerate_feasible(instance: ProblemInstance) -> FeasibleBasis:
    """Exhaustively enumerate the feasible set, in lexicographic order."""
    values = constraint_values_all(instance)
    ints = np.nonzero(values == instance.b)[0].astype(np.int64)
    return FeasibleBasis(instance.n, instance.b, ints)


def objective_value(instance: ProblemInstance, z) -> float:
    """Objective sum_ij J_ij z_i z_j + sum_i c_i z_i for a single bitstring."""
    bits = _as_bits(z, instance.n)
    value = float(np.dot(instance.linear, bits))
    for i, j, jij in instance.quadratic:
        value += jij * bits[i] * bits[j]
    return value


def objective_values(instance: ProblemInstance, basis: FeasibleBasis) -> np.ndarray:
    """Objective value of every basis state, in basis order."""
    bits = basis.bit_columns()
    values = bits @ np.asarray(instance.linear, dtype=float)
    for i, j, jij in instance.quadratic:
        values = values + jij * bits[:, i] * bits[:, j]
    return values


def find_optimum(instance: ProblemInstance, basis: FeasibleBasis | None = None):
    """Return (z_opt, value); ties broken by lexicographic order of z."""
    basis = basis if basis is not None else enumerate_feasible(instance)
    if len(basis) == 0:
        raise EmptyFeasibleSet(f"no bitstring satisfies the constraint (b={instance.b})")
    values = objective_values(instance, basis)
    best = int(np.argmin(values))  # first occurrence is lexicographically smallest
    return basis.states[best], float(values[best])
