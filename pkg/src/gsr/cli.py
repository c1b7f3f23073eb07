"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 inconclusive,
3 malformed input file, 4 numeric/domain failure during computation.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .characters import (
    DynOrbit,
    Sl2Character,
    dyn_classify,
    sl2_membership,
    stabilizer_and_orbit,
)
from .groups import Subgroup
from .imprimitivity import (
    DegenerateSystemError,
    build_induced_system,
    reconstruct_inducing_rep,
    verify_system,
)
from .induction import dyn_periodic_rep, induce_character, mackey_cocycle
from .verify import (
    VerificationReport,
    casimir_check,
    commutant_dimension,
    condition_sample_check,
    default_tolerance,
    equivalence_check,
    relation_residual,
    well_behaved_check,
)
from .virasoro import fqs_parameters

NUMERIC_ERRORS = (ValueError, ZeroDivisionError, ArithmeticError, KeyError)


def parse_specs(paths) -> list:
    """Load and validate a sequence of spec files into domain objects.

    Algebra files (with a "family" key) become algebra descriptions; character
    files (with a "kind" key) bind to the most recent algebra in the list.
    """
    out = []
    spec = None
    for path in paths:
        data = io.read_json(path)
        if isinstance(data, dict) and "family" in data:
            spec = io.load_algebra_spec(data)
            out.append(spec)
        elif isinstance(data, dict) and "kind" in data:
            out.append(io.load_character_spec(data, spec))
        else:
            raise io.SchemaError(path, "expected an algebra or character spec")
    return out


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _load_spec(args):
    if not getattr(args, "spec", None):
        raise io.SchemaError("--spec", "an algebra spec file is required")
    return io.load_algebra_spec(io.read_json(args.spec))


def _character_from_args(args, spec):
    """Build the character named by --character / --seed / --s,--t flags."""
    if getattr(args, "character", None):
        c = io.load_character_spec(io.read_json(args.character), spec)
        if isinstance(c, list):
            raise io.SchemaError("$.branches", "this command needs a single branch")
        return c
    if getattr(args, "s", None) is not None:
        if getattr(args, "t", None) is None:
            raise io.SchemaError("--t", "sl2 characters need both --s and --t")
        return Sl2Character(io.parse_fraction(args.s, "--s"),
                            io.parse_fraction(args.t, "--t"), spec.family)
    if getattr(args, "seed", None) is not None:
        data = {"kind": "dyn", "seed": args.seed, "back": args.back, "fwd": args.fwd}
        return io.load_character_spec(data, spec)
    raise io.SchemaError("--character", "no character given (--character/--seed/--s --t)")


def _emit(args, payload, text_lines=None) -> None:
    if getattr(args, "format", "json") == "text" and text_lines is not None:
        content = "\n".join(text_lines) + "\n"
    else:
        content = io.dumps(payload)
    if getattr(args, "output", None):
        io.write_atomic(args.output, content)
    else:
        sys.stdout.write(content)


def _report_payload(reports) -> dict:
    return {"reports": [io.report_json(r) for r in reports]}


def _report_lines(reports) -> list:
    return [
        f"{r.check}: {r.status} (residual {r.residual:.3e}, tolerance {r.tolerance:.3e})"
        for r in reports
    ]


def _exit_code(reports) -> int:
    if any(r.status == "fail" for r in reports):
        return 1
    if any(r.status == "inconclusive" for r in reports):
        return 2
    return 0


def _orbit_json(orbit: DynOrbit) -> dict:
    return {
        "K": orbit.K,
        "M": orbit.M,
        "branch": list(orbit.branch),
        "defect": orbit.defect,
        "values": {str(k): io.scalar_json(v) for k, v in sorted(orbit.values.items())},
    }


def _stabilizer_desc(stab: Subgroup) -> str:
    if stab.group.kind == "finite":
        return f"order {len(stab.members)}"
    if stab.group.rank == 1:
        return "trivial" if stab.modulus == 0 else f"{stab.modulus}Z"
    return "trivial" if stab.is_trivial() else repr(stab.basis)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_orbit(args) -> int:
    spec = _load_spec(args)
    data = {"kind": "dyn", "seed": args.seed, "back": args.back, "fwd": args.fwd,
            "branches": args.branches}
    result = io.load_character_spec(data, spec)
    orbits = result if isinstance(result, list) else [result]
    payload = {"orbits": [_orbit_json(o) for o in orbits]}
    lines = []
    for i, o in enumerate(orbits):
        lines.append(f"branch {i}: K={o.K} M={o.M} defect={o.defect}")
        for k, v in sorted(o.values.items()):
            lines.append(f"  x[{k}] = {v}")
    _emit(args, payload, lines)
    return 0


def _cmd_classify(args) -> int:
    spec = _load_spec(args)
    character = _character_from_args(args, spec)
    if isinstance(character, DynOrbit):
        cls = dyn_classify(character)
        report = stabilizer_and_orbit(character)
        payload = {
            "class": str(cls),
            "kind": cls.kind,
            "K": cls.K,
            "M": cls.M,
            "period": cls.period,
            "stabilizer": _stabilizer_desc(report.stabilizer),
            "definedness": report.definedness,
        }
    elif isinstance(character, Sl2Character):
        m = sl2_membership(character)
        report = stabilizer_and_orbit(character)
        payload = {
            "positive": m.verdict,
            "series": m.series,
            "witness": io.jsonable(m.witness),
            "violation": io.jsonable(m.violation),
            "stabilizer": _stabilizer_desc(report.stabilizer),
            "definedness": report.definedness,
        }
    else:
        report = stabilizer_and_orbit(character)
        payload = {
            "stabilizer": _stabilizer_desc(report.stabilizer),
            "orbit_size": len(report.orbit),
            "definedness": report.definedness,
        }
    lines = [f"{k}: {v}" for k, v in sorted(payload.items())]
    _emit(args, payload, lines)
    return 0


def _build_rep(args, spec, character):
    if getattr(args, "z", None) is not None:
        if not isinstance(character, DynOrbit):
            raise io.SchemaError("--z", "twists apply to periodic orbit characters")
        return dyn_periodic_rep(character, io.parse_scalar(args.z, "--z"), spec)
    window = io.parse_window(args.window)
    return induce_character(character, spec, window=window)


def _cmd_induce(args) -> int:
    spec = _load_spec(args)
    character = _character_from_args(args, spec)
    rep = _build_rep(args, spec, character)
    payload = io.rep_json(rep)
    if args.mm:
        for name, m in sorted(rep.ops.items()):
            safe = name.replace("*", "_star")
            io.write_atomic(f"{args.mm}.{safe}.mtx", io.matrix_market(m))
    lines = [f"dim {rep.dim}; generators: {', '.join(sorted(rep.ops))}"]
    _emit(args, payload, lines)
    return 0


def _cmd_verify(args) -> int:
    rep = io.load_rep(io.read_json(args.rep))
    spec = io.load_algebra_spec(io.read_json(args.spec)) if args.spec else None
    if spec is not None:
        rep.spec = spec
    tol = args.tolerance
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    reports = []
    for check in checks:
        if check == "relations":
            reports.append(relation_residual(rep, spec, tolerance=tol))
        elif check == "commutant":
            c = commutant_dimension(list(rep.ops.values()))
            reports.append(VerificationReport(
                check="commutant",
                status="pass",
                residual=0.0,
                witness={"dimension": c.dimension, "irreducible": c.irreducible},
                tolerance=tol if tol is not None else default_tolerance(),
            ))
        elif check == "casimir":
            if args.s is None:
                raise io.SchemaError("--s", "casimir check needs the --s value")
            reports.append(casimir_check(rep, io.parse_fraction(args.s, "--s"),
                                         tolerance=tol))
        elif check == "well_behaved":
            reports.append(well_behaved_check(rep, spec, tolerance=tol))
        elif check == "condition":
            if spec is None or not args.character:
                raise io.SchemaError("--checks",
                                     "condition check needs --spec and --character")
            character = io.load_character_spec(io.read_json(args.character), spec)
            reports.append(condition_sample_check(spec, character,
                                                  max_pairs=args.max_pairs,
                                                  tolerance=tol))
        elif check == "equivalence":
            if not args.other:
                raise io.SchemaError("--other", "equivalence check needs a second rep")
            other = io.load_rep(io.read_json(args.other))
            reports.append(equivalence_check(rep, other, tolerance=tol))
        else:
            raise io.SchemaError("--checks", f"unknown check {check!r}")
    _emit(args, _report_payload(reports), _report_lines(reports))
    return _exit_code(reports)


def _cmd_mackey(args) -> int:
    spec = _load_spec(args)
    character = _character_from_args(args, spec)
    cocycle = mackey_cocycle(character)
    payload = {
        "stabilizer": _stabilizer_desc(cocycle.stabilizer),
        "trivial": cocycle.trivial,
        "tau": {f"{h},{k}": io.scalar_json(v) for (h, k), v in sorted(cocycle.tau.items())},
        "extension_found": cocycle.extension is not None,
    }
    lines = [f"stabilizer: {payload['stabilizer']}", f"trivial: {cocycle.trivial}"]
    _emit(args, payload, lines)
    return 0


def _system_subgroup(args, spec, character, rep):
    if spec.family == "group_algebra":
        return spec.payload["subgroup"]
    if "period" in rep.meta:
        return Subgroup(spec.group, (rep.meta["period"],))
    return Subgroup(spec.group, ())


def _cmd_imprimitivity(args) -> int:
    spec = _load_spec(args)
    character = _character_from_args(args, spec)
    rep = _build_rep(args, spec, character)
    H = _system_subgroup(args, spec, character, rep)
    system = build_induced_system(rep, H)
    reports = [verify_system(system, tolerance=args.tolerance)]
    try:
        recon = reconstruct_inducing_rep(system, max_word_len=args.max_word_len)
        rep2 = recon.induce()
        reports.append(equivalence_check(rep, rep2, tolerance=args.tolerance))
    except (DegenerateSystemError, ValueError) as exc:
        reports.append(VerificationReport(
            check="round_trip",
            status="fail",
            residual=float("inf"),
            witness={"error": str(exc)},
            tolerance=args.tolerance if args.tolerance is not None else default_tolerance(),
        ))
    _emit(args, _report_payload(reports), _report_lines(reports))
    return _exit_code(reports)


def _cmd_fqs(args) -> int:
    points = fqs_parameters(args.n_max)
    payload = {"points": [
        {"n": p.n, "p": p.p, "q": p.q, "z": str(p.z), "a": str(p.a)} for p in points
    ]}
    lines = [f"n={p.n} (p,q)=({p.p},{p.q}) z={p.z} a={p.a}" for p in points]
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_common(p, spec=True, character=False, window=False):
    if spec:
        p.add_argument("--spec", help="algebra spec JSON file")
    if character:
        p.add_argument("--character", help="character spec JSON file")
        p.add_argument("--seed", help="orbit seed (dyn families)")
        p.add_argument("--back", type=int, default=50)
        p.add_argument("--fwd", type=int, default=50)
        p.add_argument("--s", help="degree-zero Casimir value (sl2 families)")
        p.add_argument("--t", help="degree-zero H value (sl2 families)")
    if window:
        p.add_argument("--window", default="-50:50", help="basis window K:M")
        p.add_argument("--z", help="unit twist for periodic orbits")
    p.add_argument("--output", help="write result to this file atomically")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsr",
        description="Induced representations over graded *-algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="extend a one-ladder orbit from a seed")
    p.add_argument("--seed", required=True)
    p.add_argument("--back", type=int, default=50)
    p.add_argument("--fwd", type=int, default=50)
    p.add_argument("--branches", choices=("principal", "all"), default="principal")
    _add_common(p)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("classify", help="orbit class, stabilizer, definedness")
    _add_common(p, character=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("induce", help="build the induced matrices")
    _add_common(p, character=True, window=True)
    p.add_argument("--mm", help="also write MatrixMarket files with this prefix")
    p.set_defaults(func=_cmd_induce)

    p = sub.add_parser("verify", help="run checks against an exported rep")
    p.add_argument("--rep", required=True, help="rep JSON file")
    p.add_argument("--other", help="second rep JSON file (equivalence)")
    p.add_argument("--checks", default="relations",
                   help="comma list: relations,commutant,casimir,well_behaved,condition,equivalence")
    p.add_argument("--character", help="character spec (condition check)")
    p.add_argument("--s", help="Casimir value (casimir check)")
    p.add_argument("--max-pairs", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("mackey", help="stabilizer cocycle and extension witness")
    _add_common(p, character=True)
    p.set_defaults(func=_cmd_mackey)

    p = sub.add_parser("imprimitivity", help="build, verify and round-trip a system")
    _add_common(p, character=True, window=True)
    p.add_argument("--max-word-len", type=int, default=4)
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=_cmd_imprimitivity)

    p = sub.add_parser("fqs", help="exact unitary-series parameter table")
    p.add_argument("--n-max", type=int, required=True)
    _add_common(p, spec=False)
    p.set_defaults(func=_cmd_fqs)

    return parser


def run(argv=None) -> int:
    """Parse arguments, dispatch, and map errors onto the exit-code contract."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except io.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 3
    except NUMERIC_ERRORS as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
