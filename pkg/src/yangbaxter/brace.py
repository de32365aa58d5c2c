"""Finite skew braces stored as a pair of Cayley tables sharing the identity 0."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from . import groups
from .errors import (
    BadParameters,
    BraceAxiomFailure,
    NotACycleBase,
    NotAGroup,
    NotAnIdeal,
    SearchSpaceTooLarge,
)

DEFAULT_CYCLE_BASE_ORBIT_CAP = 16


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class Brace:
    """A validated skew brace. Build instances with :func:`validate_brace`."""

    def __init__(self, add, mul):
        self.add = _frozen(add)
        self.mul = _frozen(mul)
        self.n = int(self.add.shape[0])

    def __repr__(self) -> str:
        kind = "brace" if self.is_brace else "skew brace"
        return f"Brace(n={self.n}, {kind})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Brace):
            return NotImplemented
        return np.array_equal(self.add, other.add) and np.array_equal(self.mul, other.mul)

    def __hash__(self) -> int:
        return hash((self.n, self.add.tobytes(), self.mul.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.n)

    @cached_property
    def neg(self) -> np.ndarray:
        return _inverses(self.add)

    @cached_property
    def inv(self) -> np.ndarray:
        return _inverses(self.mul)

    @cached_property
    def lam(self) -> np.ndarray:
        """``lam[a, b] = -a + a o b``."""
        return self.add[self.neg[:, None], self.mul]

    @cached_property
    def star(self) -> np.ndarray:
        """``star[a, b] = -a + a o b - b``."""
        return self.add[self.lam, self.neg[None, :]]

    @cached_property
    def is_brace(self) -> bool:
        return groups.table_is_abelian(self.add)

    @cached_property
    def theta_partition(self) -> tuple[tuple[int, ...], ...]:
        return tuple(theta_orbits(self))

    @cached_property
    def _theta_block(self) -> dict[int, tuple[int, ...]]:
        return {x: b for b in self.theta_partition for x in b}

    @cached_property
    def _conj_block(self) -> dict[int, tuple[int, ...]]:
        idx = np.arange(self.n)
        conj = self.mul[self.mul[idx[:, None], idx[None, :]], self.inv[:, None]]
        return {x: b for b in groups.orbit_blocks(self.n, conj) for x in b}

    def to_dict(self) -> dict:
        return {"n": self.n, "add": self.add.tolist(), "mul": self.mul.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Brace":
        return validate_brace(data["add"], data["mul"])

    @classmethod
    def from_json(cls, text: str) -> "Brace":
        return cls.from_dict(json.loads(text))


def _inverses(table: np.ndarray) -> np.ndarray:
    inv = np.argmax(table == 0, axis=1)
    inv.setflags(write=False)
    return inv


def _check_group(name: str, t: np.ndarray) -> None:
    n = t.shape[0]
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise NotAGroup(name, "entries out of range")
    full = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(t[a]), full):
            raise NotAGroup(name, "row is not a permutation", (a,))
        if not np.array_equal(np.sort(t[:, a]), full):
            raise NotAGroup(name, "column is not a permutation", (a,))
    if not (np.array_equal(t[0], full) and np.array_equal(t[:, 0], full)):
        raise NotAGroup(name, "0 is not the identity", (0,))
    bad = t[t[:, :, None], full[None, None, :]] != t[full[:, None, None], t[None, :, :]]
    if bad.any():
        raise NotAGroup(name, "not associative", tuple(int(v) for v in np.argwhere(bad)[0]))


def validate_brace(add, mul) -> Brace:
    """Check both group tables and the skew brace axiom, then return a :class:`Brace`.

    If the additive identity is not labelled 0 the labels of the identity and
    0 are swapped first.
    """
    add = np.array(add, dtype=np.int64)
    mul = np.array(mul, dtype=np.int64)
    n = add.shape[0]
    if add.ndim != 2 or add.shape != (n, n) or mul.shape != (n, n) or n == 0:
        raise NotAGroup("add", "tables must be square and of equal size")
    ident = [e for e in range(n) if np.array_equal(add[e], np.arange(n))]
    if ident and ident[0] != 0:
        e = ident[0]
        swap = np.arange(n)
        swap[[0, e]] = [e, 0]
        add = swap[add[swap[:, None], swap[None, :]]]
        mul = swap[mul[swap[:, None], swap[None, :]]]
    _check_group("add", add)
    _check_group("mul", mul)
    neg = np.argmax(add == 0, axis=1)
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    lhs = mul[a, add[b, c]]
    rhs = add[add[mul[a, b], neg[a]], mul[a, c]]
    bad = lhs != rhs
    if bad.any():
        raise BraceAxiomFailure(*(int(v) for v in np.argwhere(bad)[0]))
    B = Brace(add, mul)
    lam = B.lam
    if not np.array_equal(lam[mul[a, b], c], lam[a, lam[b, c]]):
        raise BraceAxiomFailure(*(int(v) for v in np.argwhere(lam[mul[a, b], c] != lam[a, lam[b, c]])[0]))
    return B


# -- elementary operations ------------------------------------------------------


def lambda_map(B: Brace, a: int, b: int) -> int:
    return int(B.lam[a, b])


def star(B: Brace, a: int, b: int) -> int:
    return int(B.star[a, b])


def theta(B: Brace, a: int, b: int, x: int) -> int:
    """``a + lambda_b(x) - a``."""
    return int(B.add[B.add[a, B.lam[b, x]], B.neg[a]])


def additive_subgroup(B: Brace, gens: Iterable[int]) -> frozenset[int]:
    """Subgroup of ``(A, +)`` generated by ``gens``."""
    H: frozenset[int] = frozenset([0])
    kept: list[int] = []
    for g in sorted(set(int(v) for v in gens)):
        if g not in H:
            kept.append(g)
            H = frozenset(groups.closure(kept, lambda u, v: int(B.add[u, v]), 0))
    return H


def multiplicative_subgroup(B: Brace, gens: Iterable[int]) -> frozenset[int]:
    return frozenset(groups.closure(sorted(set(gens)), lambda u, v: int(B.mul[u, v]), 0))


@dataclass(frozen=True)
class SubsetHandle:
    """A subset of a brace together with verified structural flags."""

    elements: frozenset[int]
    is_subgroup: bool
    is_left_ideal: bool
    is_strong_left_ideal: bool
    is_ideal: bool

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements


def subset_handle(B: Brace, elements: Iterable[int]) -> SubsetHandle:
    S = frozenset(int(v) for v in elements)
    idx = np.array(sorted(S), dtype=np.int64)
    mask = np.zeros(B.n, dtype=bool)
    mask[idx] = True
    sub = bool(0 in S and mask[B.add[idx[:, None], idx[None, :]]].all())
    left = sub and bool(mask[B.lam[:, idx]].all())
    everything = np.arange(B.n)
    add_normal = bool(mask[B.add[B.add[everything[:, None], idx[None, :]], B.neg[everything][:, None]]].all())
    strong = left and add_normal
    mul_normal = bool(mask[B.mul[B.mul[everything[:, None], idx[None, :]], B.inv[everything][:, None]]].all())
    return SubsetHandle(S, sub, left, strong, strong and mul_normal)


def star_sets(B: Brace, X: Iterable[int], Y: Iterable[int]) -> SubsetHandle:
    X, Y = list(X), list(Y)
    prods = B.star[np.ix_(X, Y)].ravel() if X and Y else []
    return subset_handle(B, additive_subgroup(B, prods))


# -- series, socle, quotients -----------------------------------------------------


@dataclass(frozen=True)
class Series:
    terms: tuple[frozenset[int], ...]

    @property
    def nilpotent(self) -> bool:
        return len(self.terms[-1]) == 1

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.terms)


def left_series(B: Brace) -> Series:
    """``A^1 = A``, ``A^{k+1} = A * A^k`` until the chain stabilises."""
    terms = [frozenset(range(B.n))]
    while True:
        nxt = star_sets(B, range(B.n), terms[-1]).elements
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return Series(tuple(terms))


def right_series(B: Brace) -> Series:
    """``A^(1) = A``, ``A^(k+1) = A^(k) * A`` until the chain stabilises."""
    terms = [frozenset(range(B.n))]
    while True:
        nxt = star_sets(B, terms[-1], range(B.n)).elements
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return Series(tuple(terms))


def socle(B: Brace) -> SubsetHandle:
    idx = np.arange(B.n)
    ok = (B.mul == B.add).all(axis=1) & (B.add == B.add.T).all(axis=1)
    return subset_handle(B, idx[ok].tolist())


def quotient_brace(B: Brace, ideal: Iterable[int] | SubsetHandle) -> tuple[Brace, tuple[int, ...]]:
    """``B / I`` on canonical coset representatives, plus the projection."""
    handle = ideal if isinstance(ideal, SubsetHandle) else subset_handle(B, ideal)
    if not handle.is_ideal:
        raise NotAnIdeal("subset is not an ideal")
    I = np.array(sorted(handle.elements))
    proj = [-1] * B.n
    reps = []
    for a in range(B.n):
        if proj[a] == -1:
            for c in B.add[a, I]:
                proj[int(c)] = len(reps)
            reps.append(a)
    p = np.asarray(proj)
    r = np.asarray(reps)
    add = p[B.add[r[:, None], r[None, :]]]
    mul = p[B.mul[r[:, None], r[None, :]]]
    return Brace(add, mul), tuple(proj)


def socle_series(B: Brace) -> list[frozenset[int]]:
    """``Soc_0 = 0 <= Soc_1 <= ...`` until the chain stabilises."""
    series = [frozenset([0])]
    while True:
        Q, proj = quotient_brace(B, series[-1])
        soc_q = socle(Q).elements
        nxt = frozenset(a for a in range(B.n) if proj[a] in soc_q)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def mpl_brace(B: Brace) -> int | None:
    """Multipermutation level: first ``k`` with ``Soc_k = A``, or ``None``."""
    series = socle_series(B)
    if len(series[-1]) != B.n:
        return None
    return len(series) - 1


def retraction(B: Brace) -> Brace:
    return quotient_brace(B, socle(B))[0]


def is_left_nilpotent(B: Brace) -> bool:
    return left_series(B).nilpotent


def is_right_nilpotent(B: Brace) -> bool:
    return right_series(B).nilpotent


def is_annihilator_nilpotent(B: Brace) -> bool:
    return is_left_nilpotent(B) and mpl_brace(B) is not None


# -- theta action, cycle bases, generation -----------------------------------------


def theta_orbits(B: Brace) -> list[tuple[int, ...]]:
    """Orbits of ``x -> a + lambda_b(x) - a``, sorted by least element."""
    idx = np.arange(B.n)
    conj = B.add[B.add[idx[:, None], idx[None, :]], B.neg[:, None]]
    return groups.orbit_blocks(B.n, np.concatenate([conj, B.lam]))


def cycle_bases(B: Brace, max_orbits: int = DEFAULT_CYCLE_BASE_ORBIT_CAP) -> list[frozenset[int]]:
    """All unions of theta-orbits that generate ``(A, +)``."""
    orbs = B.theta_partition
    if len(orbs) > max_orbits:
        raise SearchSpaceTooLarge(f"{len(orbs)} theta-orbits exceed the cap of {max_orbits}")
    out = []
    for k in range(1, len(orbs) + 1):
        for combo in itertools.combinations(orbs, k):
            X = frozenset(itertools.chain.from_iterable(combo))
            if len(additive_subgroup(B, X)) == B.n:
                out.append(X)
    return out


def transitive_cycle_bases(B: Brace) -> list[frozenset[int]]:
    return [frozenset(o) for o in B.theta_partition if len(additive_subgroup(B, o)) == B.n]


def is_cycle_base(B: Brace, X: Iterable[int]) -> bool:
    X = frozenset(X)
    if not X:
        return False
    if any(not set(B._theta_block[x]) <= X for x in X):
        return False
    return len(additive_subgroup(B, X)) == B.n


def in_transitive_cycle_base(B: Brace, x: int) -> bool:
    return len(additive_subgroup(B, B._theta_block[x])) == B.n


def strong_left_ideal_generated(B: Brace, X: Iterable[int]) -> SubsetHandle:
    orbit_union = set()
    for x in X:
        orbit_union.update(B._theta_block[int(x)])
    return subset_handle(B, additive_subgroup(B, orbit_union))


def subbrace_generated(B: Brace, X: Iterable[int]) -> SubsetHandle:
    S = frozenset([0]) | frozenset(int(x) for x in X)
    while True:
        T = multiplicative_subgroup(B, additive_subgroup(B, S))
        if T == S:
            return subset_handle(B, S)
        S = T


def ideal_generated(B: Brace, X: Iterable[int]) -> SubsetHandle:
    """Alternate theta-closure and o-conjugation closure to a fixed point."""
    S = additive_subgroup(B, X)
    while True:
        grow = set()
        for s in S:
            grow.update(B._theta_block[s])
            grow.update(B._conj_block[s])
        T = additive_subgroup(B, grow)
        if T == S:
            return subset_handle(B, S)
        S = T


def omega(B: Brace) -> int:
    """Least size of a subset generating ``B`` as an ideal (exhaustive search)."""
    if B.n == 1:
        return 0
    # elements in one theta/conjugation class generate the same ideal
    reps = sorted({min(_joint_block(B, x)) for x in range(1, B.n)})
    for k in range(1, len(reps) + 1):
        for combo in itertools.combinations(reps, k):
            if len(ideal_generated(B, combo)) == B.n:
                return k
    raise AssertionError("the whole brace generates itself")


def _joint_block(B: Brace, x: int) -> set[int]:
    seen = {x}
    todo = [x]
    while todo:
        y = todo.pop()
        for z in B._theta_block[y] + B._conj_block[y]:
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return seen


def square(B: Brace) -> SubsetHandle:
    """``A^2 = A * A``."""
    return star_sets(B, range(B.n), range(B.n))


def one_generation_conditions(B: Brace, x: int) -> tuple[bool, bool, bool, bool]:
    """Whether ``x`` generates ``B`` as a skew brace, as a strong left ideal, as an
    ideal, and whether ``x + A^2`` generates ``(A/A^2, +)``."""
    Q, proj = quotient_brace(B, square(B))
    return (
        len(subbrace_generated(B, [x])) == B.n,
        len(strong_left_ideal_generated(B, [x])) == B.n,
        len(ideal_generated(B, [x])) == B.n,
        len(additive_subgroup(Q, [proj[x]])) == Q.n,
    )


def commutator_ideal(B: Brace) -> SubsetHandle:
    """``A'``: the ideal generated by ``A^2`` and the commutators of ``(A, +)``."""
    A2 = square(B).elements
    idx = np.arange(B.n)
    comm = B.add[B.add[B.add[idx[:, None], idx[None, :]], B.neg[:, None]], B.neg[None, :]]
    return ideal_generated(B, set(A2) | set(comm.ravel().tolist()))


def is_bi_skew(B: Brace) -> bool:
    """Whether ``(A, o, +)`` is also a skew brace."""
    n = B.n
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    lhs = B.add[a, B.mul[b, c]]
    rhs = B.mul[B.mul[B.add[a, b], B.inv[a]], B.add[a, c]]
    return bool((lhs == rhs).all())


def is_lambda_homomorphic(B: Brace) -> bool:
    n = B.n
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    return bool((B.lam[B.add[a, b], c] == B.lam[a, B.lam[b, c]]).all())


def is_two_sided(B: Brace) -> bool:
    n = B.n
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    return bool((B.mul[B.add[a, b], c] == B.add[B.add[B.mul[a, c], B.neg[c]], B.mul[b, c]]).all())


# -- isomorphisms, products, fixtures ----------------------------------------------


def _brace_maps(B1: Brace, B2: Brace, first_only: bool):
    if B1.n != B2.n:
        return
    gens = groups.generating_set(B1.add)
    add_o1, add_o2 = groups.table_orders(B1.add), groups.table_orders(B2.add)
    mul_o1, mul_o2 = groups.table_orders(B1.mul), groups.table_orders(B2.mul)
    cands = [
        [h for h in range(B2.n) if add_o2[h] == add_o1[g] and mul_o2[h] == mul_o1[g]] for g in gens
    ]
    for images in itertools.product(*cands):
        f = groups.extend_homomorphism(B1.add, B2.add, 0, 0, gens, images)
        if f is None:
            continue
        fa = np.asarray(f)
        if np.array_equal(fa[B1.mul], B2.mul[fa[:, None], fa[None, :]]):
            yield f
            if first_only:
                return


def brace_iso(B1: Brace, B2: Brace) -> tuple[int, ...] | None:
    """A brace isomorphism ``B1 -> B2`` or ``None`` (sizes differing gives ``None``)."""
    return next(_brace_maps(B1, B2, first_only=True), None)


def brace_automorphisms(B: Brace) -> list[tuple[int, ...]]:
    return sorted(_brace_maps(B, B, first_only=False))


def direct_product(B1: Brace, B2: Brace) -> Brace:
    """Componentwise product; ``(i, j)`` is stored at index ``i * |B2| + j``."""
    n1, n2 = B1.n, B2.n
    i = np.repeat(np.arange(n1), n2)
    j = np.tile(np.arange(n2), n1)
    add = B1.add[i[:, None], i[None, :]] * n2 + B2.add[j[:, None], j[None, :]]
    mul = B1.mul[i[:, None], i[None, :]] * n2 + B2.mul[j[:, None], j[None, :]]
    return Brace(add, mul)


def relabel_brace(B: Brace, f: Sequence[int]) -> Brace:
    """Transport along a bijection ``f`` fixing 0."""
    f = np.asarray(f)
    finv = np.empty_like(f)
    finv[f] = np.arange(B.n)
    return Brace(f[B.add[finv[:, None], finv[None, :]]], f[B.mul[finv[:, None], finv[None, :]]])


def subbrace(B: Brace, elements: Iterable[int]) -> Brace:
    pts = sorted(set(elements))
    index = np.full(B.n, -1)
    index[pts] = np.arange(len(pts))
    P = np.asarray(pts)
    return validate_brace(index[B.add[P[:, None], P[None, :]]], index[B.mul[P[:, None], P[None, :]]])


def sylow_components(B: Brace) -> dict[int, frozenset[int]]:
    """Sylow subgroups of an abelian ``(A, +)``, keyed by prime."""
    orders = groups.table_orders(B.add)
    out = {}
    for p in factorint(B.n):
        out[p] = frozenset(a for a in range(B.n) if set(factorint(orders[a])) <= {p})
    return out


def trivial_brace(table) -> Brace:
    """The brace with both operations equal to the given group table."""
    return validate_brace(table, table)


def cyclic_table(n: int) -> np.ndarray:
    idx = np.arange(n)
    return (idx[:, None] + idx[None, :]) % n


def elementary_abelian_table(p: int, k: int) -> np.ndarray:
    vecs = np.array(list(itertools.product(range(p), repeat=k)))[:, ::-1]
    weights = p ** np.arange(k)
    s = (vecs[:, None, :] + vecs[None, :, :]) % p
    return s @ weights


def jordan_block_fixture(p: int, n: int) -> Brace:
    """``(Z/p)^n`` with ``lambda_a = phi^{a_n}`` for the unipotent Jordan block ``phi``.

    ``a o b = a + phi^{a_n}(b)``; element ``(a_1, ..., a_n)`` has index
    ``sum a_i p^(i-1)``.
    """
    from sympy import isprime

    if not isprime(p) or not 2 <= n < p:
        raise BadParameters("need a prime p and 2 <= n < p")
    vecs = np.array(list(itertools.product(range(p), repeat=n)))[:, ::-1]
    weights = p ** np.arange(n)
    phi = np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64)
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(p - 1):
        powers.append(powers[-1] @ phi % p)
    powers = np.array(powers)
    add = ((vecs[:, None, :] + vecs[None, :, :]) % p) @ weights
    lam_b = np.einsum("aij,bj->abi", powers[vecs[:, -1]], vecs) % p
    mul = ((vecs[:, None, :] + lam_b) % p) @ weights
    return validate_brace(add, mul)


def require_cycle_base(B: Brace, X: Iterable[int]) -> frozenset[int]:
    X = frozenset(X)
    if not is_cycle_base(B, X):
        raise NotACycleBase("subset is not a union of theta-orbits generating (A, +)")
    return X
