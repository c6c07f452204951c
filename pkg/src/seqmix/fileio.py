"""JSON/CSV/DOT file formats and the run manifest.

All writers go through an atomic temp-file + rename so partially
written outputs never appear.  Instance and family files use 0-based
variable indices; bitstrings follow the package-wide flat ordering.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .mixers import MergeOperator, MixingFamily, make_family
from .problem import FeasibleBasis, ProblemInstance, build_instance, objective_values
from .schedules import ChebyshevSchedule, SimpleSchedule
from .spectral import TimescaleCurve


def atomic_write(path, text: str):
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".seqmix-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        digest.update(handle.read())
    return digest.hexdigest()


def load_instance(path) -> ProblemInstance:
    with open(path) as handle:
        data = json.load(handle)
    return build_instance(
        data["coefficients"], data["b"], data["linear"],
        objective_quadratic=[tuple(t) for t in data.get("quadratic", [])],
        warm_start=data.get("warm_start"))


def dump_instance(instance: ProblemInstance, path):
    data = {"coefficients": list(instance.coefficients), "b": instance.b,
            "linear": list(instance.linear),
            "quadratic": [list(t) for t in instance.quadratic]}
    if instance.warm_start is not None:
        data["warm_start"] = instance.warm_start
    atomic_write(path, json.dumps(data, indent=2) + "\n")


def load_family(path, instance: ProblemInstance) -> MixingFamily:
    with open(path) as handle:
        data = json.load(handle)
    pairs = [(entry["sources"], entry["target"]) for entry in data["operators"]]
    return make_family(instance, pairs, data.get("provenance", "custom"))


def dump_family(family: MixingFamily, path):
    data = {"provenance": family.provenance,
            "operators": [{"sources": sorted(op.sources), "target": op.target}
                          for op in family.operators]}
    atomic_write(path, json.dumps(data, indent=2) + "\n")


def load_schedule(path):
    with open(path) as handle:
        data = json.load(handle)
    if data["type"] == "simple":
        return SimpleSchedule(int(data["k"])), float(data.get("dt", 1.0))
    if data["type"] == "chebyshev":
        return ChebyshevSchedule(tuple(data["alpha"]), tuple(data["beta"]),
                                 tuple(data["gamma"]),
                                 bool(data.get("normalize", False))), 1.0
    raise ValueError(f"unknown schedule type {data['type']!r}")


def dump_schedule(schedule, path, dt: float = 1.0):
    if isinstance(schedule, SimpleSchedule):
        data = {"type": "simple", "k": schedule.k, "dt": dt}
    else:
        data = {"type": "chebyshev", "alpha": list(schedule.coeffs_alpha),
                "beta": list(schedule.coeffs_beta), "gamma": list(schedule.coeffs_gamma),
                "normalize": schedule.normalize}
    atomic_write(path, json.dumps(data, indent=2) + "\n")


def state_csv(state: np.ndarray, instance: ProblemInstance, basis: FeasibleBasis) -> str:
    values = objective_values(instance, basis)
    lines = ["bitstring,re,im,probability,objective"]
    for i, z in enumerate(basis.states):
        amp = state[i]
        lines.append(f"{z},{amp.real!r},{amp.imag!r},{abs(amp) ** 2!r},{values[i]!r}")
    return "\n".join(lines) + "\n"


def timescale_csv(curve: TimescaleCurve, spectra) -> str:
    """Columns s, E_0..E_{m-1}, gap, T_A, one row per grid point."""
    m = len(spectra[0].eigenvalues)
    header = ["s"] + [f"E_{j}" for j in range(m)] + ["gap", "T_A"]
    lines = [f"# levels_used={curve.levels_used} (T_A is a lower bound over these levels)",
             ",".join(header)]
    for i, s in enumerate(curve.grid):
        row = [repr(float(s))]
        row += [repr(float(e)) for e in spectra[i].eigenvalues]
        row.append(repr(float(spectra[i].gap)))
        row.append(repr(float(curve.t_a[i])))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def convergence_csv(points, which: str) -> str:
    if which == "simple":
        lines = ["p,dt,pr_opt"]
        for pt in points:
            if pt.pr_simple is not None:
                lines.append(f"{pt.p},{pt.dt!r},{pt.pr_simple!r}")
    else:
        lines = ["p,pr_opt"]
        for pt in points:
            if pt.pr_chebyshev is not None:
                lines.append(f"{pt.p},{pt.pr_chebyshev!r}")
    return "\n".join(lines) + "\n"


def basis_graph_dot(graph) -> str:
    lines = ["graph basis_states {"]
    for z in graph.basis.states:
        lines.append(f'  "{z}";')
    for (u, v), ops in sorted(graph.edges.items()):
        label = ",".join(str(j) for j in ops)
        lines.append(f'  "{graph.basis.states[u]}" -- "{graph.basis.states[v]}" '
                     f'[label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def qubit_graph_dot(graph) -> str:
    lines = ["graph qubits {"]
    for i in range(graph.n):
        lines.append(f"  q{i};")
    for j, support in enumerate(graph.hyperedges):
        if len(support) == 2:
            lines.append(f"  q{support[0]} -- q{support[1]} [label=\"{j}\"];")
        else:
            hub = f"op{j}"
            lines.append(f"  {hub} [shape=point,label=\"{j}\"];")
            for q in support:
                lines.append(f"  {hub} -- q{q};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class RunManifest:
    """Provenance record written alongside every command's outputs."""

    command: str
    arguments: dict
    instance_sha256: str | None = None
    family_provenance: str | None = None
    schedule: dict | None = None
    p: int | None = None
    mixer_mode: str | None = None
    outputs: list = field(default_factory=list)
    wall_time_s: float | None = None

    def write(self, path):
        payload = {k: v for k, v in self.__dict__.items() if v is not None}
        atomic_write(path, json.dumps(payload, indent=2) + "\n")
