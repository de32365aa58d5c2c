"""From braces to solutions: ``r_A``, the solutions ``r_x`` and their isomorphisms."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .brace import Brace, brace_automorphisms, in_transitive_cycle_base, require_cycle_base
from .errors import ConditionViolated, NotInTransitiveCycleBase
from .solution import Solution, involutive_tau, is_homomorphism, restrict, validate_solution


def _lam_inv(B: Brace) -> np.ndarray:
    out = np.empty_like(B.lam)
    rows = np.arange(B.n)[:, None]
    out[rows, B.lam] = np.arange(B.n)[None, :]
    return out


def solution_of_brace(B: Brace) -> Solution:
    """``r(a, b) = (lambda_a(b), lambda^{-1}_{lambda_a(b)}(-(a o b) + a + (a o b)))``."""
    lam = B.lam
    ab = B.mul
    conj = B.add[B.add[B.neg[ab], np.arange(B.n)[:, None]], ab]
    second = _lam_inv(B)[lam, conj]  # second[a, b] = tau_b(a)
    sol = validate_solution(lam, second.T, involutive_expected=B.is_brace)
    return sol


def bachiller_solution(B: Brace, x: int) -> Solution:
    """``sigma_a(b) = lambda_a(x) o b`` with ``tau`` fixed by involutivity."""
    if not B.is_brace:
        raise NotInTransitiveCycleBase("the additive group must be abelian")
    if not 0 <= x < B.n or not in_transitive_cycle_base(B, x):
        raise NotInTransitiveCycleBase(f"{x} is not in a transitive cycle base")
    sigma = B.mul[B.lam[:, x][:, None], np.arange(B.n)[None, :]]
    return validate_solution(sigma, involutive_tau(sigma), involutive_expected=True)


def _is_brace_automorphism(B: Brace, psi: np.ndarray) -> bool:
    if sorted(psi.tolist()) != list(range(B.n)):
        return False
    return bool(
        np.array_equal(psi[B.add], B.add[psi[:, None], psi[None, :]])
        and np.array_equal(psi[B.mul], B.mul[psi[:, None], psi[None, :]])
    )


def bachiller_isomorphism(B: Brace, x: int, y: int, z: int, psi: Sequence[int]) -> tuple[int, ...]:
    """The isomorphism ``a -> psi(a) o z`` from ``(A, r_x)`` onto ``(A, r_y)``."""
    psi = np.asarray(psi, dtype=np.int64)
    if psi.shape != (B.n,) or not _is_brace_automorphism(B, psi):
        raise ConditionViolated("psi is not a brace automorphism")
    if psi[x] != B.lam[z, y]:
        raise ConditionViolated("psi(x) must equal lambda_z(y)")
    f = tuple(int(v) for v in B.mul[psi, z])
    if not is_homomorphism(bachiller_solution(B, x), bachiller_solution(B, y), f):
        raise AssertionError("constructed map is not a solution morphism")
    return f


def bachiller_isomorphisms(B: Brace, x: int, y: int) -> list[tuple[int, ...]]:
    """Every map ``a -> psi(a) o z`` with ``psi(x) = lambda_z(y)``, sorted."""
    out = set()
    autos = brace_automorphisms(B)
    for z in range(B.n):
        target = B.lam[z, y]
        for psi in autos:
            if psi[x] == target:
                out.add(bachiller_isomorphism(B, x, y, z, psi))
    return sorted(out)


def restrict_to_cycle_base(B: Brace, X: Iterable[int]) -> tuple[Solution, tuple[int, ...]]:
    """``r_A`` restricted to a cycle base, re-indexed by the sorted points of ``X``."""
    pts = tuple(sorted(require_cycle_base(B, X)))
    return restrict(solution_of_brace(B), pts), pts
