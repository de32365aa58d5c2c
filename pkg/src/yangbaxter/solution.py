"""Finite non-degenerate set-theoretic solutions of the Yang-Baxter equation.

A solution on ``{0..n-1}`` is stored as two ``n x n`` tables with
``sigma[x][y] = sigma_x(y)`` and ``tau[x][y] = tau_x(y)``, so that
``r(x, y) = (sigma_x(y), tau_y(x))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import groups
from .errors import (
    BraidFailure,
    CarrierTooLarge,
    NonBijectiveRow,
    NotAbelian,
    NotInvolutive,
    OutOfRangeEntry,
    SolutionError,
)

DEFAULT_GROUP_CAP = 10**6
DEFAULT_SUBSOLUTION_CAP = 20


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class Solution:
    """A validated solution. Build instances with :func:`validate_solution`."""

    def __init__(self, sigma, tau):
        self.sigma = _frozen(sigma)
        self.tau = _frozen(tau)
        self.n = int(self.sigma.shape[0])

    def __repr__(self) -> str:
        return f"Solution(n={self.n}, involutive={self.is_involutive})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.sigma, other.sigma) and np.array_equal(self.tau, other.tau)

    def __hash__(self) -> int:
        return hash((self.n, self.sigma.tobytes(), self.tau.tobytes()))

    def r(self, x: int, y: int) -> tuple[int, int]:
        return int(self.sigma[x, y]), int(self.tau[y, x])

    @cached_property
    def sigma_inv(self) -> np.ndarray:
        return _inverse_rows(self.sigma)

    @cached_property
    def tau_inv(self) -> np.ndarray:
        return _inverse_rows(self.tau)

    @cached_property
    def is_involutive(self) -> bool:
        return _involutive_witness(self.sigma, self.tau) is None

    def is_trivial(self) -> bool:
        ident = np.arange(self.n)
        return bool((self.sigma == ident).all() and (self.tau == ident).all())

    def is_square_free(self) -> bool:
        d = np.arange(self.n)
        return bool((self.sigma[d, d] == d).all() and (self.tau[d, d] == d).all())

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "involutive": self.is_involutive,
            "sigma": self.sigma.tolist(),
            "tau": self.tau.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Solution":
        sigma = data["sigma"]
        tau = data.get("tau")
        flat = [v for row in sigma for v in row] + ([v for row in tau for v in row] if tau else [])
        n = len(sigma)
        if flat and min(flat) == 1 and max(flat) == n:
            # 1-based labels: a 0-based permutation table always contains 0
            sigma = [[v - 1 for v in row] for row in sigma]
            if tau:
                tau = [[v - 1 for v in row] for row in tau]
        return validate_solution(sigma, tau, involutive_expected=bool(data.get("involutive", False)))

    @classmethod
    def from_json(cls, text: str) -> "Solution":
        return cls.from_dict(json.loads(text))


def _inverse_rows(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    inv = np.empty_like(table)
    rows = np.repeat(np.arange(n), table.shape[1])
    inv[rows, table.ravel()] = np.tile(np.arange(table.shape[1]), n)
    inv.setflags(write=False)
    return inv


def _involutive_witness(sigma: np.ndarray, tau: np.ndarray) -> tuple[int, int] | None:
    n = sigma.shape[0]
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    u = sigma[x, y]
    v = tau[y, x]
    bad = (sigma[u, v] != x) | (tau[v, u] != y)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return int(i), int(j)
    return None


def _braid_witness(sigma: np.ndarray, tau: np.ndarray) -> tuple[int, int, int] | None:
    n = sigma.shape[0]
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    # r1 r2 r1
    a1, b1 = sigma[x, y], tau[y, x]
    b2, c2 = sigma[b1, z], tau[z, b1]
    lhs = (sigma[a1, b2], tau[b2, a1], c2)
    # r2 r1 r2
    u, v = sigma[y, z], tau[z, y]
    a3, b3 = sigma[x, u], tau[u, x]
    rhs = (a3, sigma[b3, v], tau[v, b3])
    bad = (lhs[0] != rhs[0]) | (lhs[1] != rhs[1]) | (lhs[2] != rhs[2])
    if bad.any():
        i, j, k = np.argwhere(bad)[0]
        return int(i), int(j), int(k)
    return None


def involutive_tau(sigma) -> np.ndarray:
    """The unique ``tau`` making ``r`` involutive: ``tau_y(x) = sigma^{-1}_{sigma_x(y)}(x)``."""
    sigma = np.asarray(sigma, dtype=np.int64)
    n = sigma.shape[0]
    sinv = _inverse_rows(sigma)
    y, x = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return sinv[sigma[x, y], x]


def validate_solution(sigma, tau=None, involutive_expected: bool = False) -> Solution:
    """Check the tables and return a :class:`Solution`.

    ``tau`` may be omitted for involutive input; it is then reconstructed from
    ``sigma``. Raises a :class:`SolutionError` subclass naming the first
    failing axiom and a witness.
    """
    sigma_l = [list(row) for row in sigma]
    n = len(sigma_l)
    if n == 0:
        raise SolutionError("empty carrier")
    tables = {"sigma": sigma_l}
    if tau is not None:
        tables["tau"] = [list(row) for row in tau]
    for name, t in tables.items():
        if len(t) != n or any(len(row) != n for row in t):
            raise SolutionError(f"{name} must be an {n}x{n} table")
        for x, row in enumerate(t):
            for y, v in enumerate(row):
                if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                    raise OutOfRangeEntry(name, x, y, v)
        for x, row in enumerate(t):
            if not groups.is_permutation(row):
                raise NonBijectiveRow(name, x)
    sig = np.array(sigma_l, dtype=np.int64)
    if tau is None:
        involutive_expected = True
        ta = involutive_tau(sig)
        for x, row in enumerate(ta.tolist()):
            if not groups.is_permutation(row):
                raise NonBijectiveRow("tau", x)
    else:
        ta = np.array(tables["tau"], dtype=np.int64)
    if involutive_expected:
        w = _involutive_witness(sig, ta)
        if w is not None:
            raise NotInvolutive(*w)
    w3 = _braid_witness(sig, ta)
    if w3 is not None:
        raise BraidFailure(*w3)
    return Solution(sig, ta)


# -- constructors --------------------------------------------------------------


def trivial_solution(n: int) -> Solution:
    ident = [list(range(n))] * n
    return Solution(ident, ident)


def permutation_solution(perm: Sequence[int]) -> Solution:
    """``r(x, y) = (f(y), f^{-1}(x))`` for a fixed permutation ``f``."""
    n = len(perm)
    inv = groups.inverse(perm)
    return validate_solution([list(perm)] * n, [list(inv)] * n, involutive_expected=True)


def cyclic_permutation_solution(n: int) -> Solution:
    return permutation_solution([(i + 1) % n for i in range(n)])


def relabel(S: Solution, f: Sequence[int]) -> Solution:
    """The solution transported along the bijection ``f``."""
    f = np.asarray(f, dtype=np.int64)
    finv = np.empty_like(f)
    finv[f] = np.arange(S.n)
    # sigma'_{f(x)}(f(y)) = f(sigma_x(y))
    sig = f[S.sigma[finv[:, None], finv[None, :]]]
    tau = f[S.tau[finv[:, None], finv[None, :]]]
    return Solution(sig, tau)


def restrict(S: Solution, subset: Sequence[int]) -> Solution:
    """Restriction to a subset closed under ``r``, re-indexed in sorted order."""
    pts = sorted(subset)
    index = {p: i for i, p in enumerate(pts)}
    try:
        sig = [[index[int(S.sigma[a, b])] for b in pts] for a in pts]
        tau = [[index[int(S.tau[a, b])] for b in pts] for a in pts]
    except KeyError:
        raise SolutionError("subset is not closed under r") from None
    return Solution(sig, tau)


# -- orbits, retraction, levels ----------------------------------------------


@dataclass(frozen=True)
class OrbitPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, x: int) -> tuple[int, ...]:
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)


def orbits(S: Solution) -> OrbitPartition:
    maps = np.concatenate([S.sigma, S.tau])
    return OrbitPartition(tuple(groups.orbit_blocks(S.n, maps)))


def is_indecomposable(S: Solution) -> bool:
    return len(orbits(S)) == 1


def retract(S: Solution) -> tuple[Solution, tuple[int, ...]]:
    """Quotient by ``x ~ y`` iff ``sigma_x = sigma_y`` and ``tau_x = tau_y``.

    Returns the retraction and the class map, classes numbered by first occurrence.
    """
    classes: dict[tuple[bytes, bytes], int] = {}
    cls = []
    reps = []
    for x in range(S.n):
        key = (S.sigma[x].tobytes(), S.tau[x].tobytes())
        if key not in classes:
            classes[key] = len(reps)
            reps.append(x)
        cls.append(classes[key])
    c = np.asarray(cls)
    r = np.asarray(reps)
    sig = c[S.sigma[r[:, None], r[None, :]]]
    tau = c[S.tau[r[:, None], r[None, :]]]
    return Solution(sig, tau), tuple(cls)


def retraction_chain(S: Solution) -> list[Solution]:
    """``[S, Ret(S), Ret^2(S), ...]`` up to a singleton or the first fixed point."""
    chain = [S]
    while chain[-1].n > 1:
        nxt, _ = retract(chain[-1])
        if nxt.n == chain[-1].n:
            break
        chain.append(nxt)
    return chain


def mpl(S: Solution) -> int | None:
    """Multipermutation level, or ``None`` when ``S`` is not multipermutation."""
    chain = retraction_chain(S)
    if chain[-1].n != 1:
        return None
    return len(chain) - 1


def mpl_prime(S: Solution) -> int | None:
    """Smallest ``k`` with ``Ret^k(S)`` trivial, or ``None`` if there is none."""
    for k, T in enumerate(retraction_chain(S)):
        if T.is_trivial():
            return k
    return None


def solution_type(S: Solution) -> tuple[int, ...] | None:
    chain = retraction_chain(S)
    if chain[-1].n != 1:
        return None
    return tuple(a.n // b.n for a, b in zip(chain, chain[1:]))


def satisfies_condition_star(S: Solution) -> bool:
    d = np.arange(S.n)
    fixed_by_sigma = (S.sigma == d[None, :]).any(axis=0)
    fixed_by_tau = (S.tau == d[None, :]).any(axis=0)
    return bool(fixed_by_sigma.all() and fixed_by_tau.all())


# -- permutation group -----------------------------------------------------------


@dataclass
class PermGroup:
    """The group generated by the pairs ``(sigma_x, tau_x^{-1})``.

    Elements are stored as one tuple of length ``2n``: the first half is the
    permutation of ``X`` through which the element acts.
    """

    n: int
    generators: tuple[tuple[int, ...], ...]
    elements: list[tuple[int, ...]] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators
        return all(_pair_mul(a, b, self.n) == _pair_mul(b, a, self.n) for a in gens for b in gens)

    @cached_property
    def is_transitive(self) -> bool:
        if not self.generators:
            return self.n == 1
        firsts = np.array([g[: self.n] for g in self.generators])
        return len(groups.orbit_blocks(self.n, firsts)) == 1

    @property
    def is_regular(self) -> bool:
        return self.is_transitive and self.order == self.n

    def element_orders(self) -> list[int]:
        return [groups.lcm_all(groups.cycle_type(g[: self.n]) + groups.cycle_type(g[self.n :])) for g in self.elements]

    def abelian_invariants(self) -> tuple[int, ...]:
        if not self.is_abelian:
            raise NotAbelian("permutation group is not abelian")
        return groups.abelian_invariants(self.element_orders())

    def cayley_table(self) -> np.ndarray:
        return groups.cayley_table(self.elements, lambda a, b: _pair_mul(a, b, self.n))


def _pair_mul(a: tuple[int, ...], b: tuple[int, ...], n: int) -> tuple[int, ...]:
    return tuple(a[i] for i in b[:n]) + tuple(a[n + i] for i in b[n:])


def permutation_group(S: Solution, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = tuple(
        tuple(S.sigma[x].tolist()) + tuple(S.tau_inv[x].tolist()) for x in range(S.n)
    )
    ident = tuple(range(S.n)) * 2
    elements = groups.closure(gens, lambda a, b: _pair_mul(a, b, S.n), ident, cap=cap)
    return PermGroup(S.n, tuple(dict.fromkeys(gens)), elements)


def min_generators_abelian(G: PermGroup) -> int:
    """Minimal number of generators of an abelian permutation group."""
    return len(G.abelian_invariants())


# -- homomorphism search ------------------------------------------------------------


def _point_signature(S: Solution, x: int) -> tuple:
    return groups.cycle_type(S.sigma[x].tolist()), groups.cycle_type(S.tau[x].tolist())


def is_homomorphism(S: Solution, T: Solution, f: Sequence[int]) -> bool:
    fa = np.asarray(f, dtype=np.int64)
    return bool(
        np.array_equal(fa[S.sigma], T.sigma[fa[:, None], fa[None, :]])
        and np.array_equal(fa[S.tau], T.tau[fa[:, None], fa[None, :]])
    )


def homomorphisms(S: Solution, T: Solution, injective: bool = True) -> Iterator[tuple[int, ...]]:
    """All homomorphisms ``S -> T`` (bijections only when ``injective``).

    Each assignment ``x -> y`` is propagated through
    ``f(sigma_a(b)) = sigma'_{f(a)}(f(b))`` and the analogous relations for
    ``tau`` and the inverse maps. The points reached from a seed form the
    subsolution it generates; further seeds are branched on only when that
    is a proper subset.
    """
    if injective and S.n != T.n:
        return
    n = S.n
    maps_s = (S.sigma, S.tau, S.sigma_inv, S.tau_inv)
    maps_t = (T.sigma, T.tau, T.sigma_inv, T.tau_inv)
    if injective:
        sig_t: dict[tuple, list[int]] = {}
        for y in range(T.n):
            sig_t.setdefault(_point_signature(T, y), []).append(y)
        cands = [sig_t.get(_point_signature(S, x), []) for x in range(n)]
    else:
        cands = [list(range(T.n))] * n

    def propagate(f: list[int], used: set[int], dom: list[int], start: int) -> bool:
        i = start
        while i < len(dom):
            a = dom[i]
            fa = f[a]
            for j in range(i + 1):
                b = dom[j]
                fb = f[b]
                for (u, fu), (v, fv) in (((a, fa), (b, fb)), ((b, fb), (a, fa))):
                    for ms, mt in zip(maps_s, maps_t):
                        c = int(ms[u, v])
                        fc = int(mt[fu, fv])
                        if f[c] == -1:
                            if injective and fc in used:
                                return False
                            f[c] = fc
                            used.add(fc)
                            dom.append(c)
                        elif f[c] != fc:
                            return False
            i += 1
        return True

    def search(f: list[int], used: set[int], dom: list[int]) -> Iterator[tuple[int, ...]]:
        if len(dom) == n:
            if is_homomorphism(S, T, f):
                yield tuple(f)
            return
        x = f.index(-1)
        for y in cands[x]:
            if injective and y in used:
                continue
            f2, used2, dom2 = list(f), set(used), list(dom)
            f2[x] = y
            used2.add(y)
            dom2.append(x)
            if propagate(f2, used2, dom2, len(dom)):
                yield from search(f2, used2, dom2)

    yield from search([-1] * n, set(), [])


def isomorphic_solutions(S: Solution, T: Solution) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``(f x f) r = s (f x f)``, or ``None``."""
    if S.n != T.n or S.is_involutive != T.is_involutive:
        return None
    if sorted(_point_signature(S, x) for x in range(S.n)) != sorted(
        _point_signature(T, y) for y in range(T.n)
    ):
        return None
    return next(homomorphisms(S, T, injective=True), None)


@dataclass
class AutomorphismGroup:
    elements: list[tuple[int, ...]] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def is_abelian(self) -> bool:
        return all(
            groups.compose(a, b) == groups.compose(b, a) for a in self.elements for b in self.elements
        )

    def abelian_invariants(self) -> tuple[int, ...] | None:
        if not self.is_abelian:
            return None
        return groups.abelian_invariants(
            groups.lcm_all(groups.cycle_type(g)) for g in self.elements
        )

    def cayley_table(self) -> np.ndarray:
        return groups.cayley_table(self.elements, groups.compose)


def automorphism_group(S: Solution) -> AutomorphismGroup:
    return AutomorphismGroup(sorted(homomorphisms(S, S, injective=True)))


def endomorphisms(S: Solution) -> list[tuple[int, ...]]:
    return sorted(homomorphisms(S, S, injective=False))


# -- subsolutions -------------------------------------------------------------------


def closure_under_r(S: Solution, seed) -> frozenset[int]:
    """Smallest subset containing ``seed`` and closed under ``r``."""
    members = set(seed)
    todo = list(members)
    while todo:
        a = todo.pop()
        for b in list(members):
            for c in (S.sigma[a, b], S.sigma[b, a], S.tau[a, b], S.tau[b, a]):
                c = int(c)
                if c not in members:
                    members.add(c)
                    todo.append(c)
    return frozenset(members)


def proper_subsolutions(S: Solution, cap: int = DEFAULT_SUBSOLUTION_CAP) -> list[tuple[int, ...]]:
    """All proper nonempty subsets ``Y`` with ``r(Y x Y) = Y x Y``.

    Closed sets are grown from the closures of singletons by adding one point
    at a time and re-closing, which reaches every closed set.
    """
    if S.n > cap:
        raise CarrierTooLarge(f"subsolution search limited to n <= {cap}")
    full = frozenset(range(S.n))
    found: set[frozenset[int]] = set()
    frontier = {closure_under_r(S, [x]) for x in range(S.n)}
    while frontier:
        found |= frontier
        nxt = set()
        for Y in frontier:
            if Y == full:
                continue
            for x in range(S.n):
                if x not in Y:
                    Z = closure_under_r(S, Y | {x})
                    if Z not in found:
                        nxt.add(Z)
        frontier = nxt
    found.discard(full)
    return sorted((tuple(sorted(Y)) for Y in found), key=lambda t: (len(t), t))
