"""Merge operators and mixing families.

An m-to-1 merge operator M exchanges the all-ones pattern on a source
index set I with a single 1 on a target index t (and vice versa), acting
as identity elsewhere:

    M = |0..0_I 1_t><1..1_I 0_t| + |1..1_I 0_t><0..0_I 1_t|

It preserves the constraint value exactly when the source coefficients
sum to the target coefficient, which is required at construction.

A mixing family is an ordered collection of such operators; the mixer
Hamiltonian is the (optionally scaled) sum of their negations, so every
computational-basis entry of each family member is 0 or -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CoefficientMismatch, MuTooSmall
from .problem import FeasibleBasis, ProblemInstance, bit_mask

DEFAULT_MAX_M = 4  # sources per merge; only binds for k >= 5, overridable


@dataclass(frozen=True)
class MergeOperator:
    """Merge of source variables `sources` into variable `target` (flat, 0-based)."""

    sources: frozenset[int]
    target: int

    @property
    def m(self) -> int:
        return len(self.sources)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.sources)) + (self.target,)

    def sort_key(self):
        return (self.m, self.target, tuple(sorted(self.sources)))

    def masks(self, n: int) -> tuple[int, int, int]:
        """(flip, source_mask, target_mask) bit masks in an n-variable encoding."""
        source_mask = 0
        for i in self.sources:
            source_mask |= bit_mask(i, n)
        target_mask = bit_mask(self.target, n)
        return source_mask | target_mask, source_mask, target_mask


@dataclass(frozen=True)
class PauliTerm:
    """One summand of a merge operator's Pauli expansion.

    `axes[j]` is the Pauli axis ("X" or "Y") acting on `qubits[j]`; the
    number of Y axes is always even and |coefficient| = 2^-m.
    """

    coefficient: float
    qubits: tuple[int, ...]
    axes: tuple[str, ...]


@dataclass(frozen=True)
class MixingFamily:
    """Ordered, duplicate-free operator collection with a provenance tag.

    The operator order is the canonical sequential-application order:
    ascending (m, target, sources).  Each operator is understood as
    entering the mixer negated.
    """

    operators: tuple[MergeOperator, ...]
    provenance: str

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def as_set(self) -> frozenset[MergeOperator]:
        return frozenset(self.operators)


def make_merge(instance: ProblemInstance, sources, target: int) -> MergeOperator:
    """Build a merge operator, checking the coefficient-sum condition."""
    sources = frozenset(int(i) for i in sources)
    target = int(target)
    if not sources:
        raise ValueError("source set must be nonempty")
    if target in sources:
        raise ValueError("target must not be a source")
    for i in sources | {target}:
        if not 0 <= i < instance.n:
            raise ValueError(f"variable index {i} out of range")
    total = sum(instance.coefficients[i] for i in sources)
    if total != instance.coefficients[target]:
        raise CoefficientMismatch(
            f"source coefficients sum to {total}, "
            f"target coefficient is {instance.coefficients[target]}")
    return MergeOperator(sources, target)


def make_family(instance: ProblemInstance, operators, provenance: str = "custom") -> MixingFamily:
    """Validate a custom operator list (no duplicates, coefficient sums) as a family.

    Accepts MergeOperator instances or (sources, target) pairs.
    """
    ops = []
    seen = set()
    for item in operators:
        if isinstance(item, MergeOperator):
            sources, target = item.sources, item.target
        else:
            sources, target = item
        op = make_merge(instance, sources, target)
        if op in seen:
            raise ValueError(f"duplicate operator {sorted(op.sources)} -> {op.target}")
        seen.add(op)
        ops.append(op)
    return MixingFamily(tuple(sorted(ops, key=MergeOperator.sort_key)), provenance)


def family_min(instance: ProblemInstance) -> MixingFamily:
    """Minimal family: swaps along each coefficient row plus one merge per new row.

    Contains the 1-to-1 swaps [kappa,l] -> [kappa,l+1] for every kappa and
    l < l_kappa, the merge {[1,1],[1,2]} -> [2,1], and the merges
    {[1,1],[kappa,1]} -> [kappa+1,1] for 2 <= kappa <= k-1.
    """
    ops = []
    for kappa in range(1, instance.k + 1):
        for l in range(1, instance.occurrences[kappa - 1]):
            ops.append(MergeOperator(
                frozenset({instance.flat_index(kappa, l)}),
                instance.flat_index(kappa, l + 1)))
    if instance.k >= 2:
        ops.append(MergeOperator(
            frozenset({instance.flat_index(1, 1), instance.flat_index(1, 2)}),
            instance.flat_index(2, 1)))
        for kappa in range(2, instance.k):
            ops.append(MergeOperator(
                frozenset({instance.flat_index(1, 1), instance.flat_index(kappa, 1)}),
                instance.flat_index(kappa + 1, 1)))
    return MixingFamily(tuple(sorted(ops, key=MergeOperator.sort_key)), "min")


def family_max(instance: ProblemInstance, max_m: int = DEFAULT_MAX_M) -> MixingFamily:
    """All merge operators satisfying the coefficient-sum condition, m <= max_m.

    1-to-1 swaps are deduplicated to the representative with
    min(source) < target, since both orientations are the same operator.
    """
    coeffs = instance.coefficients
    n = instance.n
    ops = set()
    for target in range(n):
        st = coeffs[target]
        others = [i for i in range(n) if i != target]
        for i in others:
            if coeffs[i] == st and i < target:
                ops.add(MergeOperator(frozenset({i}), target))
        for m in range(2, min(max_m, st) + 1):
            for group in combinations(others, m):
                if sum(coeffs[i] for i in group) == st:
                    ops.add(MergeOperator(frozenset(group), target))
    return MixingFamily(tuple(sorted(ops, key=MergeOperator.sort_key)), "max")


def family_mu_max(instance: ProblemInstance, mu: int, max_m: int | None = None) -> MixingFamily:
    """Truncation of the maximal family to operators on at most mu qubits (m <= mu-1)."""
    if mu < 3:
        raise MuTooSmall(f"mu={mu} would drop 2-to-1 merges the minimal family needs")
    cap = mu - 1 if max_m is None else min(mu - 1, max_m)
    ops = family_max(instance, max_m=cap).operators
    return MixingFamily(ops, f"mu-max:{mu}")


def pauli_decompose(op: MergeOperator) -> tuple[PauliTerm, ...]:
    """Exact Pauli expansion of a merge operator on its support qubits.

    Every term carries X or Y on each support qubit with an even number
    of Y's.  With m = |sources| and E the set of Y qubits, the
    coefficient is sign / 2^m where sign = (-1)^(|E|/2) when the target
    carries X and -(-1)^(|E|/2) when the target carries Y.
    """
    support = op.support
    m = len(op.sources)
    weight = 0.5 ** m
    terms = []
    for r in range(0, len(support) + 1, 2):
        for ys in combinations(support, r):
            sign = -1.0 if (r // 2) % 2 else 1.0
            if op.target in ys:
                sign = -sign
            axes = tuple("Y" if q in ys else "X" for q in support)
            terms.append(PauliTerm(sign * weight, support, axes))
    return tuple(terms)


_PAULI = {
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
}


def pauli_term_matrix(term: PauliTerm, qubits=None) -> np.ndarray:
    """Dense matrix of coefficient * tensor(axes) on the given qubit list.

    `qubits` defaults to the term's own support; qubits absent from the
    term contribute identity factors.  Qubit order: first in the list is
    the most significant bit.
    """
    qubits = tuple(qubits) if qubits is not None else term.qubits
    axis_of = dict(zip(term.qubits, term.axes))
    out = np.array([[term.coefficient]], dtype=complex)
    for q in qubits:
        factor = _PAULI[axis_of[q]] if q in axis_of else np.eye(2, dtype=complex)
        out = np.kron(out, factor)
    return out


def merge_matrix(op: MergeOperator, qubits=None) -> np.ndarray:
    """Dense matrix of the merge operator on the given qubit list (default: support)."""
    qubits = tuple(qubits) if qubits is not None else op.support
    n = len(qubits)
    pos = {q: i for i, q in enumerate(qubits)}
    for q in op.support:
        if q not in pos:
            raise ValueError(f"qubit list must cover the support, missing {q}")
    ones_sources = sum(bit_mask(pos[i], n) for i in op.sources)
    one_target = bit_mask(pos[op.target], n)
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    free = [i for i in range(1 << n) if (i & (ones_sources | one_target)) == 0]
    for rest in free:
        a = rest | one_target
        bb = rest | ones_sources
        out[a, bb] = 1.0
        out[bb, a] = 1.0
    return out


def transition_pairs(op: MergeOperator, basis: FeasibleBasis) -> list[tuple[int, int]]:
    """Disjoint basis-index pairs (u, v), u < v, connected by the operator.

    A state participates when its bits are all-ones on the sources and 0
    on the target, or the flipped pattern; its partner is the flipped
    state.  Partners missing from the basis (possible only for operators
    violating the coefficient-sum condition) are skipped.
    """
    flip, source_mask, _ = op.masks(basis.n)
    ints = basis.ints
    matched = ints[(ints & flip) == source_mask]
    partners = matched ^ flip
    pos = np.searchsorted(ints, partners)
    pairs = []
    for z, w, p in zip(matched.tolist(), partners.tolist(), pos.tolist()):
        if p < len(ints) and ints[p] == w:
            u, v = basis.index_of(z), p
            pairs.append((u, v) if u < v else (v, u))
    return sorted(pairs)
