"""Command line front end.

Exit codes: 0 success, 1 validation failure (or a negative answer to ``iso``),
2 bad arguments, 3 a configured cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .brace import Brace, validate_brace
from .bridge import bachiller_solution
from .classify import (
    ORACLE_MAX_SIZE,
    count_size_mpl_le,
    enumerate_classes,
    manifest,
    oracle_bruteforce_classes,
)
from .errors import BraceError, CapExceeded, MatrixNotInNormalForm, SolutionError, YBError
from .solution import (
    DEFAULT_GROUP_CAP,
    DEFAULT_SUBSOLUTION_CAP,
    Solution,
    automorphism_group,
    is_indecomposable,
    isomorphic_solutions,
    min_generators_abelian,
    mpl,
    mpl_prime,
    orbits,
    permutation_group,
    proper_subsolutions,
    satisfies_condition_star,
    solution_type,
)
from .truncated import (
    DEFAULT_ORBIT_CAP,
    TypeSignature,
    brace_of_matrix,
    matrices_for_type,
    parse_matrix,
    require_class_matrix,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_object(path: str) -> Solution | Brace:
    data = _load_json(path)
    if "add" in data:
        return Brace.from_dict(data)
    if "sigma" in data:
        return Solution.from_dict(data)
    raise UsageError(f"{path} holds neither a solution nor a brace")


def _emit(obj, args) -> None:
    if args.format == "text":
        print(_as_text(obj))
    elif args.pretty:
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _as_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_as_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_as_text(v, indent) if isinstance(v, dict) else f"{pad}- {_scalar(v)}" for v in obj)
    return f"{pad}{_scalar(obj)}"


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, dict) for e in v)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return json.dumps(v, separators=(",", " ")) if isinstance(v, (list, dict)) else str(v)


# -- subcommands ----------------------------------------------------------------------


def cmd_validate(args) -> int:
    data = _load_json(args.file)
    if "add" in data:
        try:
            B = validate_brace(data["add"], data["mul"])
        except BraceError as exc:
            _emit({"kind": "brace", "valid": False, "error": type(exc).__name__,
                   "message": str(exc), "witness": list(getattr(exc, "witness", ()))}, args)
            return EXIT_INVALID
        _emit({"kind": "brace", "valid": True, "n": B.n, "is_brace": B.is_brace}, args)
        return EXIT_OK
    if "sigma" not in data:
        raise UsageError(f"{args.file} holds neither a solution nor a brace")
    try:
        S = Solution.from_dict(data)
    except SolutionError as exc:
        _emit({"kind": "solution", "valid": False, "error": type(exc).__name__,
               "message": str(exc), "witness": list(getattr(exc, "witness", ()))}, args)
        return EXIT_INVALID
    _emit({"kind": "solution", "valid": True, "n": S.n, "involutive": S.is_involutive}, args)
    return EXIT_OK


def analyze_solution(S: Solution, group_cap: int, subsolution_cap: int) -> dict:
    G = permutation_group(S, cap=group_cap)
    group = {"order": G.order, "abelian": G.is_abelian, "regular": G.is_regular}
    if G.is_abelian:
        group["abelian_invariants"] = list(G.abelian_invariants())
        group["min_generators"] = min_generators_abelian(G)
    if S.n <= subsolution_cap:
        subs = [list(Y) for Y in proper_subsolutions(S, cap=subsolution_cap)]
    else:
        subs = None
    aut = automorphism_group(S)
    level = mpl(S)
    return {
        "n": S.n,
        "involutive": S.is_involutive,
        "indecomposable": is_indecomposable(S),
        "orbits": [list(b) for b in orbits(S).blocks],
        "mpl": level if level is not None else "NotMultipermutation",
        "mpl_prime": mpl_prime(S) if mpl_prime(S) is not None else "NotMultipermutation",
        "condition_star": satisfies_condition_star(S),
        "square_free": S.is_square_free(),
        "permutation_group": group,
        "type": list(solution_type(S)) if solution_type(S) is not None else None,
        "subsolutions": subs,
        "automorphisms": {
            "order": aut.order,
            "abelian": aut.is_abelian,
            "abelian_invariants": list(aut.abelian_invariants()) if aut.is_abelian else None,
        },
    }


def cmd_analyze(args) -> int:
    S = Solution.from_dict(_load_json(args.file))
    _emit(analyze_solution(S, args.group_cap, args.subsolution_cap), args)
    return EXIT_OK


def _parse_type(text: str) -> TypeSignature:
    try:
        return TypeSignature.parse(text)
    except YBError as exc:
        raise UsageError(str(exc)) from exc


def cmd_construct(args) -> int:
    T = _parse_type(args.type)
    if args.matrix.isdigit():
        mats = matrices_for_type(T)
        k = int(args.matrix)
        if k >= len(mats):
            raise UsageError(f"type {T} has only {len(mats)} matrices")
        M = mats[k]
    else:
        try:
            M = parse_matrix(Path(args.matrix).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.matrix}: {exc.strerror}") from exc
        M = require_class_matrix(M, T)
    B, x = brace_of_matrix(M, T)
    S = bachiller_solution(B, x)
    _emit({"type": str(T), "matrix": [list(r) for r in M], "x": x,
           "brace": B.to_dict(), "solution": S.to_dict()}, args)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    T = _parse_type(args.type)
    records = enumerate_classes(T, cap=args.orbit_cap, verify_iso=args.verify_iso)
    data = manifest(T, records, emit_dir=args.emit_dir, formula=args.verify_formula)
    data["iso_verified"] = bool(args.verify_iso and T.size <= 16)
    _emit(data, args)
    if args.verify_formula and data["formula_agrees"] is False:
        return EXIT_INVALID
    return EXIT_OK


def cmd_count(args) -> int:
    if args.d < 0:
        raise UsageError("--d must be non-negative")
    try:
        TypeSignature(args.p, (args.d,))
    except YBError as exc:
        raise UsageError(str(exc)) from exc
    print(count_size_mpl_le(args.p, args.d, args.mpl_le))
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = _load_object(args.a), _load_object(args.b)
    if type(a) is not type(b):
        raise UsageError("both files must hold the same kind of object")
    if isinstance(a, Solution):
        f = isomorphic_solutions(a, b)
    else:
        from .brace import brace_iso

        f = brace_iso(a, b)
    _emit({"isomorphic": f is not None, "witness": list(f) if f is not None else None}, args)
    return EXIT_OK if f is not None else EXIT_INVALID


def cmd_oracle(args) -> int:
    reps = oracle_bruteforce_classes(args.size, max_size=args.oracle_max)
    _emit({"size": args.size, "count": len(reps), "solutions": [S.to_dict() for S in reps]}, args)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")
    common.add_argument("--group-cap", type=int, default=DEFAULT_GROUP_CAP)
    common.add_argument("--subsolution-cap", type=int, default=DEFAULT_SUBSOLUTION_CAP)
    common.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    common.add_argument("--oracle-max", type=int, default=ORACLE_MAX_SIZE)

    parser = argparse.ArgumentParser(prog="yangbaxter", description="Finite Yang-Baxter solutions and braces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check solution or brace axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="invariants of a solution")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", parents=[common], help="brace and solution from a matrix")
    p.add_argument("--type", required=True, help="p:d1,...,dn")
    p.add_argument("--matrix", required=True, help="matrix file or index into the sorted list")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", parents=[common], help="isomorphism classes of a type")
    p.add_argument("--type", required=True, help="p:d1,...,dn")
    p.add_argument("--verify-formula", action="store_true")
    p.add_argument("--verify-iso", action="store_true")
    p.add_argument("--emit-dir")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", parents=[common], help="closed count of classes of size p^d")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mpl-le", type=int, choices=(2, 3), required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test with witness")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("oracle", parents=[common], help="brute-force classes of a given size")
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SolutionError, BraceError, MatrixNotInNormalForm) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except YBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
