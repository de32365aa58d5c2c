"""Isomorphism classes of indecomposable involutive solutions with abelian permutation group."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .brace import Brace
from .bridge import bachiller_solution
from .errors import CarrierTooLarge, Unsupported
from .solution import (
    Solution,
    involutive_tau,
    is_indecomposable,
    isomorphic_solutions,
    permutation_group,
    validate_solution,
)
from .truncated import (
    DEFAULT_ORBIT_CAP,
    Matrix,
    TypeSignature,
    brace_of_matrix,
    format_matrix,
    matrices_for_type,
    matrix_orbits,
)

ISO_CHECK_MAX_SIZE = 16
ORACLE_MAX_SIZE = 6


@dataclass
class ClassRecord:
    matrix: Matrix
    orbit: tuple[Matrix, ...]
    brace: Brace
    x: int
    solution: Solution

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)


def enumerate_classes(
    T: TypeSignature, cap: int = DEFAULT_ORBIT_CAP, verify_iso: bool = True
) -> list[ClassRecord]:
    """One record per orbit of matrices, ordered by canonical representative.

    With ``verify_iso`` and carriers of at most 16 points the representatives
    are checked pairwise non-isomorphic.
    """
    records = []
    for orbit in matrix_orbits(T, cap):
        B, x = brace_of_matrix(orbit[0], T)
        records.append(ClassRecord(orbit[0], orbit, B, x, bachiller_solution(B, x)))
    if verify_iso and T.size <= ISO_CHECK_MAX_SIZE:
        for a, b in itertools.combinations(records, 2):
            if isomorphic_solutions(a.solution, b.solution) is not None:
                raise AssertionError(f"classes {a.matrix} and {b.matrix} are isomorphic")
    return records


def count_formula(T: TypeSignature) -> int:
    """Closed count of classes of type ``T`` (trailing zero exponents dropped)."""
    T = T.stripped()
    p, d = T.p, T.d
    if T.n == 1:
        return 1
    if T.n == 2:
        return p ** d[1]
    if T.n == 3:
        d1, d2, d3 = d
        if d1 < d2 + d3:
            value = p**d1 * (1 + (-d1 + d2 + d3) * (1 - Fraction(1, p)))
            assert value.denominator == 1
            return int(value)
        return p ** (d2 + d3)
    raise Unsupported(f"no closed formula for types of length {T.n}")


def admissible_types(p: int, d: int, length: int) -> list[TypeSignature]:
    """Non-increasing exponent tuples of the given length summing to ``d``."""
    out = []

    def rec(prefix: list[int], left: int, top: int):
        if len(prefix) == length:
            if left == 0:
                out.append(TypeSignature(p, tuple(prefix)))
            return
        for e in range(min(left, top), -1, -1):
            rec(prefix + [e], left - e, e)

    rec([], d, d)
    return out


def count_size_mpl_le(p: int, d: int, bound: int) -> int:
    """Number of classes of size ``p^d`` with multipermutation level at most ``bound``."""
    if bound not in (2, 3):
        raise Unsupported("closed counts exist only for bounds 2 and 3")
    return sum(count_formula(T) for T in admissible_types(p, d, bound))


# -- brute-force oracle ----------------------------------------------------------------


def _canonical_perms(n: int) -> list[tuple[int, ...]]:
    """One permutation per (cycle type, length of the cycle through 0)."""
    out = []

    def partitions(m, top):
        if m == 0:
            yield ()
            return
        for k in range(min(m, top), 0, -1):
            for rest in partitions(m - k, k):
                yield (k,) + rest

    for part in partitions(n, n):
        for first in sorted(set(part)):
            lengths = list(part)
            lengths.remove(first)
            perm = [0] * n
            start = 0
            for ell in [first] + lengths:
                for i in range(ell):
                    perm[start + i] = start + (i + 1) % ell
                start += ell
            out.append(tuple(perm))
    return out


def _consistent(L: np.ndarray, filled: int) -> bool:
    """The cycle-set identity ``(x.y).(x.z) = (y.x).(y.z)`` on the rows known so far."""
    rows = L[:filled]
    xy = rows[:, :filled]
    yx = xy.T
    x, y = np.nonzero((xy < filled) & (yx < filled))
    lhs = L[xy[x, y][:, None], rows[x]]
    rhs = L[yx[x, y][:, None], rows[y]]
    return bool(np.array_equal(lhs, rhs))


def all_involutive_solutions(N: int, max_size: int = ORACLE_MAX_SIZE) -> list[Solution]:
    """Every involutive solution of size ``N`` up to the labelling of its first row.

    Works with the left multiplications ``L_x = sigma_x^{-1}`` of the
    associated cycle set, filled row by row with early pruning.
    """
    if N > max_size:
        raise CarrierTooLarge(f"oracle size {N} exceeds {max_size}")
    perms = list(itertools.permutations(range(N)))
    found = []
    for first in _canonical_perms(N):
        L = np.full((N, N), -1, dtype=np.int64)
        L[0] = first

        def rec(k: int):
            if k == N:
                sigma = np.argsort(L, axis=1)
                try:
                    found.append(validate_solution(sigma, involutive_tau(sigma), involutive_expected=True))
                except ValueError:
                    pass
                return
            for row in perms:
                L[k] = row
                if _consistent(L, k + 1):
                    rec(k + 1)
            L[k] = -1

        if _consistent(L, 1):
            rec(1)
    return found


def oracle_bruteforce_classes(N: int, max_size: int = ORACLE_MAX_SIZE) -> list[Solution]:
    """Indecomposable involutive solutions of size ``N`` with abelian permutation group, up to isomorphism."""
    reps: list[Solution] = []
    for S in all_involutive_solutions(N, max_size):
        if not is_indecomposable(S) or not permutation_group(S).is_abelian:
            continue
        if all(isomorphic_solutions(S, R) is None for R in reps):
            reps.append(S)
    reps.sort(key=lambda S: (S.sigma.tolist(), S.tau.tolist()))
    return reps


def oracle_agrees(p: int, d: int) -> bool:
    """Does the oracle count at size ``p^d`` equal the sum of the class counts over all types?"""
    total = sum(len(enumerate_classes(T, verify_iso=False)) for T in admissible_types(p, d, max(d, 1)))
    return len(oracle_bruteforce_classes(p**d)) == total


# -- manifest ------------------------------------------------------------------------


def manifest(
    T: TypeSignature,
    records: list[ClassRecord],
    emit_dir: str | Path | None = None,
    formula: bool = True,
    oracle: bool | None = None,
) -> dict:
    """JSON-ready summary of an enumeration; writes representative files into ``emit_dir``."""
    try:
        formula_value = count_formula(T) if formula else None
    except Unsupported:
        formula_value = None
    classes = []
    for i, rec in enumerate(records):
        entry = {
            "matrix": [list(r) for r in rec.matrix],
            "orbit_size": rec.orbit_size,
            "x": rec.x,
        }
        if emit_dir is not None:
            out = Path(emit_dir)
            out.mkdir(parents=True, exist_ok=True)
            stem = f"type_{T.p}_{'_'.join(map(str, T.d))}_class_{i}"
            (out / f"{stem}.solution.json").write_text(rec.solution.to_json() + "\n")
            (out / f"{stem}.brace.json").write_text(rec.brace.to_json() + "\n")
            (out / f"{stem}.matrix.txt").write_text(format_matrix(rec.matrix))
            entry["solution_file"] = f"{stem}.solution.json"
            entry["brace_file"] = f"{stem}.brace.json"
        else:
            entry["solution"] = rec.solution.to_dict()
        classes.append(entry)
    return {
        "type": str(T),
        "size": T.size,
        "matrix_count": len(matrices_for_type(T)),
        "class_count": len(records),
        "formula": formula_value,
        "formula_agrees": None if formula_value is None else formula_value == len(records),
        "oracle_agrees": oracle,
        "classes": classes,
    }


def manifest_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


__all__ = [
    "ClassRecord",
    "enumerate_classes",
    "count_formula",
    "admissible_types",
    "count_size_mpl_le",
    "oracle_bruteforce_classes",
    "all_involutive_solutions",
    "oracle_agrees",
    "manifest",
    "manifest_json",
]
