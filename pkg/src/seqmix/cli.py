"""Command-line interface.

Commands: validate, simulate, spectrum, compile, casestudy.  Exit codes:
0 on success, 1 when a verification condition fails or a computation is
rejected, 2 on unreadable or malformed inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np
from scipy.linalg import expm

from . import casestudy as cs
from . import fileio
from .circuits import circuit_unitary, emit_merge_unitary, export_circuit
from .errors import SeqmixError
from .mixers import merge_matrix
from .problem import enumerate_feasible, find_optimum, objective_values
from .schedules import SimpleSchedule, angles_from_schedule
from .sim import build_hamiltonians, pr_opt, qaoa_state
from .spectral import adiabatic_timescale, default_grid, hamiltonian_at, spectrum_slice
from .verify import basis_graph, qubit_graph, verify_family


class ParseFailure(Exception):
    """Unreadable or malformed input files (exit code 2)."""


def _load_instance(path):
    try:
        return fileio.load_instance(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseFailure(f"cannot read instance {path}: {exc}") from exc


def _resolve_family(instance, spec: str):
    if spec.startswith("file:"):
        path = spec[5:]
        try:
            return fileio.load_family(path, instance)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseFailure(f"cannot read family {path}: {exc}") from exc
    try:
        return cs.named_family(instance, spec)
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc


def _resolve_schedule(instance, spec: str, dt: float):
    if spec == "simple":
        return SimpleSchedule(instance.k), dt
    if spec.startswith("chebyshev:"):
        path = spec.split(":", 1)[1]
        try:
            schedule, _ = fileio.load_schedule(path)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ParseFailure(f"cannot read schedule {path}: {exc}") from exc
        return schedule, 1.0
    raise ParseFailure(f"unknown schedule spec {spec!r}")


def _out_path(out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    family = _resolve_family(instance, args.family)
    report = verify_family(instance, family)
    for name, ok in (("feasibility preservation", report.condition_a),
                     ("nonpositivity", report.condition_b),
                     ("connectivity", report.condition_c)):
        print(f"{name}: {'pass' if ok else 'FAIL'}")
    if not report.condition_c:
        print(f"components: {[list(c) for c in report.components]}")
    outputs = []
    if args.out:
        path = _out_path(args.out, "verification.json")
        fileio.atomic_write(path, json.dumps(report.to_dict(), indent=2) + "\n")
        outputs.append(path)
        if args.dot:
            bpath = _out_path(args.out, "basis_graph.dot")
            qpath = _out_path(args.out, "qubit_graph.dot")
            fileio.atomic_write(bpath, fileio.basis_graph_dot(basis_graph(instance, family)))
            fileio.atomic_write(qpath, fileio.qubit_graph_dot(qubit_graph(instance, family)))
            outputs.extend([bpath, qpath])
        _write_manifest(args, "validate", instance_path=args.instance,
                        family=family, outputs=outputs)
    return 0 if report.passed else 1


def cmd_simulate(args) -> int:
    instance = _load_instance(args.instance)
    family = _resolve_family(instance, args.family)
    schedule, dt = _resolve_schedule(instance, args.schedule, args.dt)
    hams = build_hamiltonians(instance, family, scale_bplus=args.scale)
    angles = angles_from_schedule(schedule, args.p, dt)
    ordering = args.order if args.order != "canonical" else None
    state = qaoa_state(hams, angles, mixer_mode=args.mixer, ordering=ordering)
    probability = pr_opt(state, instance, hams.basis)
    print(f"pr_opt = {probability!r}")
    if args.out:
        path = _out_path(args.out, "state.csv")
        fileio.atomic_write(path, fileio.state_csv(state, instance, hams.basis))
        _write_manifest(args, "simulate", instance_path=args.instance, family=family,
                        schedule={"spec": args.schedule, "dt": dt}, p=args.p,
                        mixer=args.mixer, outputs=[path])
    return 0


def cmd_spectrum(args) -> int:
    instance = _load_instance(args.instance)
    family = _resolve_family(instance, args.family)
    schedule, _ = _resolve_schedule(instance, args.schedule, args.dt)
    hams = build_hamiltonians(instance, family, scale_bplus=args.scale)
    if args.s is not None:
        piece = spectrum_slice(hamiltonian_at(hams, schedule, args.s), args.levels, args.s)
        print(" ".join(repr(float(e)) for e in piece.eigenvalues))
        return 0
    lo, hi, num = (float(x) for x in args.grid.split(":"))
    grid = np.linspace(lo, hi, int(num))
    curve = adiabatic_timescale(hams, schedule, grid, m=args.levels)
    spectra = [spectrum_slice(hamiltonian_at(hams, schedule, float(s)), args.levels, float(s))
               for s in grid]
    print(f"max T_A = {curve.max_value!r} at s = {curve.s_at_max!r}; "
          f"min gap = {curve.min_gap!r}")
    if args.out:
        path = _out_path(args.out, "spectrum.csv")
        fileio.atomic_write(path, fileio.timescale_csv(curve, spectra))
        _write_manifest(args, "spectrum", instance_path=args.instance, family=family,
                        schedule={"spec": args.schedule}, outputs=[path])
    return 0


def cmd_compile(args) -> int:
    instance = _load_instance(args.instance)
    family = _resolve_family(instance, args.family)
    outputs = []
    worst = 0.0
    for j, op in enumerate(family.operators):
        circuit = emit_merge_unitary(op, args.theta, n_qubits=instance.n)
        text = export_circuit(circuit)
        if args.out:
            path = _out_path(args.out, f"operator_{j:03d}.qasm")
            fileio.atomic_write(path, text)
            outputs.append(path)
        if args.verify:
            target = expm(-1j * args.theta * merge_matrix(op, qubits=range(instance.n)))
            error = float(np.max(np.abs(circuit_unitary(circuit) - target)))
            worst = max(worst, error)
            print(f"operator {j} ({sorted(op.sources)} -> {op.target}): "
                  f"max |U_circuit - U_exact| = {error:.3e}")
    if args.verify:
        print(f"worst error: {worst:.3e}")
    if args.out:
        _write_manifest(args, "compile", instance_path=args.instance, family=family,
                        outputs=outputs)
    return 0 if (not args.verify or worst < 1e-10) else 1


def cmd_casestudy(args) -> int:
    start = time.monotonic()
    out = args.out
    families = args.families.split(",")

    def progress(name, point):
        pieces = [f"[{name}] p={point.p}"]
        if point.pr_simple is not None:
            pieces.append(f"simple: dt={point.dt:.4f} pr={point.pr_simple:.6f}")
        if point.pr_chebyshev is not None:
            pieces.append(f"chebyshev: pr={point.pr_chebyshev:.6f}")
        print("  ".join(pieces), flush=True)

    runs = cs.run_case_study(families=families, pr_target=args.target,
                             max_p_simple=args.max_p_simple, max_p_cheb=args.max_p_cheb,
                             mixer_mode=args.mixer, progress=progress)

    instance = cs.case_study_instance()
    outputs = []
    instance_path = _out_path(out, "instance.json")
    fileio.dump_instance(instance, instance_path)
    outputs.append(instance_path)

    summary = {}
    for name, run in runs.items():
        tag = name.replace(":", "")
        directory = os.path.join(out, tag)
        os.makedirs(directory, exist_ok=True)
        fileio.dump_family(run.family, os.path.join(directory, "family.json"))
        fileio.atomic_write(os.path.join(directory, "simple_convergence.csv"),
                            fileio.convergence_csv(run.points, "simple"))
        fileio.atomic_write(os.path.join(directory, "chebyshev_convergence.csv"),
                            fileio.convergence_csv(run.points, "chebyshev"))
        if args.trace:
            for pt in run.points:
                if pt.cheb_result is not None and pt.cheb_result.iterate_values:
                    rows = ["iteration,pr_opt"] + [
                        f"{i},{v!r}" for i, v in enumerate(pt.cheb_result.iterate_values)]
                    fileio.atomic_write(os.path.join(directory, f"trace_p{pt.p}.csv"),
                                        "\n".join(rows) + "\n")
        for pt in run.points:
            if pt.cheb_result is not None:
                payload = {"p": pt.p, "best_value": pt.cheb_result.best_value,
                           "best_params": [float(v) for v in pt.cheb_result.best_params],
                           "evaluations": pt.cheb_result.evaluations,
                           "method": pt.cheb_result.method}
                fileio.atomic_write(os.path.join(directory, f"chebyshev_p{pt.p}.json"),
                                    json.dumps(payload, indent=2) + "\n")
        if run.cheb_schedule is not None:
            fileio.dump_schedule(run.cheb_schedule, os.path.join(directory, "chebyshev_schedule.json"))
        hams = build_hamiltonians(instance, run.family)
        for label, curve, schedule in (
                ("simple", run.timescale_simple, SimpleSchedule(instance.k)),
                ("chebyshev", run.timescale_chebyshev,
                 run.cheb_schedule.with_normalize(True) if run.cheb_schedule else None)):
            if curve is None:
                continue
            spectra = [spectrum_slice(hamiltonian_at(hams, schedule, float(s)), curve.levels_used)
                       for s in curve.grid]
            fileio.atomic_write(os.path.join(directory, f"timescale_{label}.csv"),
                                fileio.timescale_csv(curve, spectra))
        summary[name] = {
            "simple_converged_p": run.simple_converged_p,
            "chebyshev_converged_p": run.cheb_converged_p,
            "dt_values": run.dt_values,
            "max_t_a_simple": run.timescale_simple.max_value if run.timescale_simple else None,
            "max_t_a_chebyshev": (run.timescale_chebyshev.max_value
                                  if run.timescale_chebyshev else None),
            "min_gap_simple": run.timescale_simple.min_gap if run.timescale_simple else None,
            "min_gap_chebyshev": (run.timescale_chebyshev.min_gap
                                  if run.timescale_chebyshev else None),
            "overlap_start": (run.timescale_chebyshev.overlap_start
                              if run.timescale_chebyshev else None),
            "overlap_end": (run.timescale_chebyshev.overlap_end
                            if run.timescale_chebyshev else None),
        }
    summary_path = _out_path(out, "summary.json")
    fileio.atomic_write(summary_path, json.dumps(summary, indent=2) + "\n")
    outputs.append(summary_path)

    manifest = fileio.RunManifest(
        command="casestudy", arguments=_public_args(args),
        instance_sha256=fileio.sha256_file(instance_path),
        family_provenance=",".join(families), p=None, mixer_mode=args.mixer,
        outputs=sorted(outputs), wall_time_s=time.monotonic() - start)
    manifest.write(_out_path(out, "run_manifest.json"))
    for name, entry in summary.items():
        print(f"[{name}] simple converged at p={entry['simple_converged_p']}, "
              f"chebyshev at p={entry['chebyshev_converged_p']}")
    return 0


def _public_args(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func" and v is not None}


def _write_manifest(args, command, instance_path=None, family=None, schedule=None,
                    p=None, mixer=None, outputs=()):
    manifest = fileio.RunManifest(
        command=command, arguments=_public_args(args),
        instance_sha256=fileio.sha256_file(instance_path) if instance_path else None,
        family_provenance=family.provenance if family is not None else None,
        schedule=schedule, p=p, mixer_mode=mixer, outputs=sorted(outputs))
    manifest.write(_out_path(args.out, "run_manifest.json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqmix",
        description="Feasible-subspace QAOA simulation for sequential-coefficient "
                    "linear constraints")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schedule=False):
        p.add_argument("--instance", required=True, help="instance JSON path")
        p.add_argument("--family", default="min",
                       help="min | max | mu-max:MU | file:PATH")
        p.add_argument("--scale", type=float, default=None,
                       help="mixer prefactor (default 1 for min, 1/N otherwise)")
        p.add_argument("--out", default=None, help="output directory")
        if schedule:
            p.add_argument("--schedule", default="simple",
                           help="simple | chebyshev:PATH")
            p.add_argument("--dt", type=float, default=1.0,
                           help="timestep for the simple schedule")

    p_validate = sub.add_parser("validate", help="check the mixing-family conditions")
    common(p_validate)
    p_validate.add_argument("--dot", action="store_true",
                            help="also write basis/qubit graphs in DOT format")
    p_validate.set_defaults(func=cmd_validate)

    p_sim = sub.add_parser("simulate", help="run the ansatz and dump the final state")
    common(p_sim, schedule=True)
    p_sim.add_argument("--p", type=int, required=True, help="layer count")
    p_sim.add_argument("--mixer", choices=("seq", "sim"), default="seq")
    p_sim.add_argument("--order", default="canonical",
                       help="sequential operator order: canonical | reversed")
    p_sim.set_defaults(func=cmd_simulate)

    p_spec = sub.add_parser("spectrum", help="instantaneous spectra and T_A curve")
    common(p_spec, schedule=True)
    p_spec.add_argument("--s", type=float, default=None,
                        help="single schedule point (prints eigenvalues)")
    p_spec.add_argument("--grid", default="0.0025:0.9975:201", help="lo:hi:points")
    p_spec.add_argument("--levels", type=int, default=20)
    p_spec.set_defaults(func=cmd_spectrum)

    p_comp = sub.add_parser("compile", help="emit gate circuits for each operator")
    common(p_comp)
    p_comp.add_argument("--theta", type=float, default=1.0, help="rotation angle")
    p_comp.add_argument("--verify", action="store_true",
                        help="compare each circuit against the dense exponential")
    p_comp.set_defaults(func=cmd_compile)

    p_case = sub.add_parser("casestudy", help="reproduce the bundled depth sweep")
    p_case.add_argument("--out", required=True)
    p_case.add_argument("--families", default="mu-max:3,min")
    p_case.add_argument("--target", type=float, default=cs.PR_TARGET)
    p_case.add_argument("--max-p-simple", type=int, default=512)
    p_case.add_argument("--max-p-cheb", type=int, default=64)
    p_case.add_argument("--mixer", choices=("seq", "sim"), default="seq")
    p_case.add_argument("--trace", action="store_true",
                        help="write per-iteration optimizer CSVs")
    p_case.set_defaults(func=cmd_casestudy)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SeqmixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
