"""Machine checks of the mixing-family conditions and constructive witnesses.

A family is a valid mixer when (a) no operator couples feasible to
infeasible states, (b) every negated operator is component-wise
nonpositive in the computational basis, and (c) the graph its operators
induce on the feasible basis is connected.  All three are checked
exhaustively over the full 2^N computational basis; (a) is verified in
the stronger form that every coupled pair of states has equal constraint
value, so leakage between different target values is caught too.

Empty and single-vertex graphs count as connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRange, TooLargeForExhaustive
from .mixers import (MergeOperator, MixingFamily, family_max, merge_matrix,
                     pauli_decompose, pauli_term_matrix, transition_pairs)
from .problem import (FeasibleBasis, ProblemInstance, bits_to_int,
                      constraint_values_all, enumerate_feasible, int_to_bits)

MAX_EXHAUSTIVE_N = 14


class DisjointSet:
    """Array-backed union-find with path halving."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


@dataclass(frozen=True)
class BasisInteractionGraph:
    """Feasible-basis graph; edge (u, v) lists the family operators generating it."""

    basis: FeasibleBasis
    edges: dict[tuple[int, int], tuple[int, ...]] = field(compare=False)

    def degree(self, u: int) -> int:
        return sum(len(ops) for edge, ops in self.edges.items() if u in edge)

    def adjacency(self) -> np.ndarray:
        out = np.zeros((len(self.basis), len(self.basis)))
        for (u, v), ops in self.edges.items():
            out[u, v] += len(ops)
            out[v, u] += len(ops)
        return out


@dataclass(frozen=True)
class QubitInteractionGraph:
    """One hyperedge (the support set) per family operator."""

    n: int
    hyperedges: tuple[tuple[int, ...], ...]


@dataclass
class VerificationReport:
    """Outcome of the three mixing-family conditions plus a per-b breakdown.

    Failure entries carry reproducible counterexamples: offending
    operator position, the coupled states for (a), the positive entry
    for (b), and the disconnected components for (c).
    """

    b: int
    condition_a: bool
    condition_a_counterexample: dict | None
    condition_b: bool
    condition_b_counterexample: dict | None
    condition_c: bool
    components: tuple[tuple[str, ...], ...]
    per_b: dict[int, tuple[bool, int, int]]  # b -> (connected, components, size)

    @property
    def passed(self) -> bool:
        return self.condition_a and self.condition_b and self.condition_c

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "passed": self.passed,
            "condition_a": {"passed": self.condition_a,
                            "counterexample": self.condition_a_counterexample},
            "condition_b": {"passed": self.condition_b,
                            "counterexample": self.condition_b_counterexample},
            "condition_c": {"passed": self.condition_c,
                            "components": [list(c) for c in self.components]},
            "per_b": {str(b): {"connected": ok, "components": ncomp, "size": size}
                      for b, (ok, ncomp, size) in self.per_b.items()},
        }


def basis_graph(instance: ProblemInstance, family: MixingFamily,
                basis: FeasibleBasis | None = None) -> BasisInteractionGraph:
    basis = basis if basis is not None else enumerate_feasible(instance)
    edges: dict[tuple[int, int], list[int]] = {}
    for j, op in enumerate(family.operators):
        for pair in transition_pairs(op, basis):
            edges.setdefault(pair, []).append(j)
    return BasisInteractionGraph(basis, {e: tuple(js) for e, js in edges.items()})


def qubit_graph(instance: ProblemInstance, family: MixingFamily) -> QubitInteractionGraph:
    return QubitInteractionGraph(instance.n,
                                 tuple(op.support for op in family.operators))


def _full_space_matches(instance: ProblemInstance, op: MergeOperator):
    """All (state, partner) couplings of the operator over the full 2^N basis."""
    states = np.arange(1 << instance.n, dtype=np.int64)
    flip, source_mask, _ = op.masks(instance.n)
    matched = states[(states & flip) == source_mask]
    return matched, matched ^ flip


def _union_all(instance: ProblemInstance, family: MixingFamily):
    values = constraint_values_all(instance)
    dsu = DisjointSet(1 << instance.n)
    bad = None
    for j, op in enumerate(family.operators):
        matched, partners = _full_space_matches(instance, op)
        equal = values[matched] == values[partners]
        if bad is None and not np.all(equal):
            at = int(np.nonzero(~equal)[0][0])
            bad = {"operator": j,
                   "sources": sorted(op.sources), "target": op.target,
                   "state": int_to_bits(int(matched[at]), instance.n),
                   "partner": int_to_bits(int(partners[at]), instance.n),
                   "values": (int(values[matched[at]]), int(values[partners[at]]))}
        for z, w in zip(matched.tolist(), partners.tolist()):
            dsu.union(z, w)
    return values, dsu, bad


def _check_nonpositive(family: MixingFamily) -> dict | None:
    """Entries of each -M, via the Pauli route, must all be 0 or -1."""
    for j, op in enumerate(family.operators):
        rebuilt = sum(pauli_term_matrix(t, op.support) for t in pauli_decompose(op))
        neg = -rebuilt
        bad = np.abs(neg.imag) > 1e-12
        bad |= (np.abs(neg.real) > 1e-12) & (np.abs(neg.real + 1.0) > 1e-12)
        bad |= neg.real > 1e-12
        if np.any(bad):
            r, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return {"operator": j, "entry": [int(r), int(c)],
                    "value": [float(neg.real[r, c]), float(neg.imag[r, c])]}
    return None


def _component_count(values: np.ndarray, dsu: DisjointSet, b: int) -> tuple[int, int]:
    members = np.nonzero(values == b)[0]
    roots = {dsu.find(int(z)) for z in members}
    return len(roots), len(members)


def verify_family(instance: ProblemInstance, family: MixingFamily,
                  max_n: int = MAX_EXHAUSTIVE_N) -> VerificationReport:
    """Exhaustively check conditions (a)-(c) plus connectivity at every b."""
    if instance.n > max_n:
        raise TooLargeForExhaustive(
            f"{instance.n} variables exceed the exhaustive limit {max_n}; "
            "run connectivity_scan for a subspace-only check")
    values, dsu, bad_a = _union_all(instance, family)
    bad_b = _check_nonpositive(family)

    per_b = {}
    for b in range(instance.total + 1):
        ncomp, size = _component_count(values, dsu, b)
        per_b[b] = (ncomp <= 1, ncomp, size)

    components: tuple[tuple[str, ...], ...] = ()
    connected, _, _ = per_b[instance.b]
    if not connected:
        groups: dict[int, list[str]] = {}
        for z in np.nonzero(values == instance.b)[0]:
            groups.setdefault(dsu.find(int(z)), []).append(int_to_bits(int(z), instance.n))
        components = tuple(tuple(sorted(g)) for g in groups.values())

    return VerificationReport(
        b=instance.b,
        condition_a=bad_a is None, condition_a_counterexample=bad_a,
        condition_b=bad_b is None, condition_b_counterexample=bad_b,
        condition_c=connected, components=components, per_b=per_b)


def connectivity_scan(instance: ProblemInstance, family: MixingFamily) -> dict:
    """{b: (connected, component count)} for every b in 0 .. sum(s)."""
    values, dsu, _ = _union_all(instance, family)
    out = {}
    for b in range(instance.total + 1):
        ncomp, _ = _component_count(values, dsu, b)
        out[b] = (ncomp <= 1, ncomp)
    return out


def _smallest_zero(instance: ProblemInstance, bits: list[int]):
    """Smallest (kappa, l), kappa then l ascending, with a 0 bit; None if full."""
    for kappa in range(1, instance.k + 1):
        for l in range(1, instance.occurrences[kappa - 1] + 1):
            if bits[instance.flat_index(kappa, l)] == 0:
                return kappa, l
    return None


def witness_with_bit(instance: ProblemInstance, kappa_star: int, l_star: int,
                     b: int) -> str:
    """Feasible bitstring with z[kappa*, l*] = 1, built constructively.

    Starting from the base solution at b = kappa* (only the required bit
    set), the target value is raised one unit at a time.  Each step finds
    the smallest coefficient row kappa' with an empty slot and either
    fills a unit slot (kappa' = 1), trades kappa' - 1 units of smaller
    rows for the slot (generic case), or trades the two specific unit
    bits when kappa' = kappa* + 1.  The unit bit cleared in that last
    case is chosen to avoid the required bit itself.
    """
    if not (1 <= kappa_star <= instance.k) or not (1 <= l_star <= instance.occurrences[kappa_star - 1]):
        raise OutOfRange(f"no variable [{kappa_star},{l_star}] in this instance")
    if not (kappa_star <= b <= instance.total):
        raise OutOfRange(f"b={b} outside [{kappa_star}, {instance.total}]")

    bits = [0] * instance.n
    bits[instance.flat_index(kappa_star, l_star)] = 1
    for _ in range(kappa_star + 1, b + 1):
        kp, lp = _smallest_zero(instance, bits)
        if kp == 1:
            bits[instance.flat_index(1, lp)] = 1
        elif kp == kappa_star + 1:
            if kappa_star > 1:
                bits[instance.flat_index(kappa_star - 1, 1)] = 0
            unit_l = 2 if (kappa_star, l_star) != (1, 2) else 1
            bits[instance.flat_index(1, unit_l)] = 0
            bits[instance.flat_index(kp, lp)] = 1
        else:
            bits[instance.flat_index(kp - 1, 1)] = 0
            bits[instance.flat_index(kp, lp)] = 1
    return "".join(str(z) for z in bits)


def witness_merge_pair(instance: ProblemInstance, b: int) -> str:
    """Feasible bitstring with z[1,1] = 1 and z[k,1] = 1, constructively.

    Same one-unit-at-a-time scheme as :func:`witness_with_bit`, starting
    from exactly the two required bits at b = k + 1.  For k = 1 the two
    requirements coincide, so the companion bit [1,2] stands in for
    [k,1] and the base solution is {[1,1], [1,2]} at b = 2.
    """
    k = instance.k
    if not (k + 1 <= b <= instance.total):
        raise OutOfRange(f"b={b} outside [{k + 1}, {instance.total}]")
    bits = [0] * instance.n
    bits[instance.flat_index(1, 1)] = 1
    if k >= 2:
        bits[instance.flat_index(k, 1)] = 1
    else:
        bits[instance.flat_index(1, 2)] = 1
    for _ in range(k + 2, b + 1):
        kp, lp = _smallest_zero(instance, bits)
        if kp == 1:
            bits[instance.flat_index(1, lp)] = 1
        elif kp == 2:
            bits[instance.flat_index(1, 2)] = 0
            bits[instance.flat_index(2, lp)] = 1
        else:
            bits[instance.flat_index(kp - 1, 1)] = 0
            bits[instance.flat_index(kp, lp)] = 1
    return "".join(str(z) for z in bits)


@dataclass
class MixerGroundState:
    """Degree statistics and lowest eigenvector of a mixer on its basis."""

    dimension: int
    regular: bool
    degree_histogram: dict[int, int]
    ground_state: np.ndarray
    uniform: bool


def _hypercube_edges(n: int):
    edges = []
    for z in range(1 << n):
        for i in range(n):
            w = z ^ (1 << i)
            if w > z:
                edges.append((z, w))
    return (1 << n), edges


def analyze_mixer_ground_state(instance: ProblemInstance, family,
                               uniform_tol: float = 1e-9) -> MixerGroundState:
    """Regularity of the basis graph and the mixer's adiabatic initial state.

    `family` is a MixingFamily, or one of the named mixers "transverse"
    (single-bit flips over the full 2^N basis, constraint ignored) and
    "xy" (all same-coefficient swaps on the feasible basis).  The ground
    state of B+ = -(adjacency) is uniform exactly when the graph is
    regular and connected.
    """
    if family == "transverse":
        dim, edge_list = _hypercube_edges(instance.n)
    else:
        if family == "xy":
            ops = [op for op in family_max(instance).operators if op.m == 1]
            family = MixingFamily(tuple(ops), "xy")
        graph = basis_graph(instance, family)
        dim = len(graph.basis)
        edge_list = [e for e, ops in graph.edges.items() for _ in ops]

    adjacency = np.zeros((dim, dim))
    for u, v in edge_list:
        adjacency[u, v] += 1.0
        adjacency[v, u] += 1.0
    degrees = adjacency.sum(axis=1).astype(int)
    histogram: dict[int, int] = {}
    for d in degrees.tolist():
        histogram[d] = histogram.get(d, 0) + 1
    regular = len(histogram) <= 1

    vals, vecs = np.linalg.eigh(-adjacency)
    ground = vecs[:, 0]
    anchor = int(np.argmax(np.abs(ground)))
    ground = ground * (np.sign(ground[anchor]) or 1.0)
    uniform = bool(np.max(np.abs(ground - ground[anchor])) < uniform_tol)
    return MixerGroundState(dim, regular, histogram, ground, uniform)
