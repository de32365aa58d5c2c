"""Small finite-group helpers: permutations, orbit partitions, closures, invariants.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``; ``compose(p, q)``
applies ``q`` first.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import factorint

from .errors import GroupTooLarge

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def is_permutation(row: Sequence[int]) -> bool:
    n = len(row)
    return sorted(row) == list(range(n))


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths))


def orbit_blocks(n: int, maps: np.ndarray) -> list[tuple[int, ...]]:
    """Connected components of ``{0..n-1}`` under the maps given as rows of ``maps``.

    Components are closed under images and preimages. Blocks are sorted by
    their smallest element and each block is sorted.
    """
    maps = np.asarray(maps, dtype=np.int64).reshape(-1, n)
    src = np.tile(np.arange(n), maps.shape[0])
    dst = maps.ravel()
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    blocks: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(x)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def closure(
    generators: Iterable[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    identity_element: Hashable,
    cap: int | None = None,
) -> list:
    """All products of ``generators`` (BFS order, identity first).

    For a finite group the monoid generated is the group itself.
    """
    gens = list(dict.fromkeys(generators))
    seen = {identity_element: None}
    order = [identity_element]
    queue = deque([identity_element])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mul(g, s)
            if h not in seen:
                seen[h] = None
                order.append(h)
                if cap is not None and len(order) > cap:
                    raise GroupTooLarge(f"group closure exceeded {cap} elements")
                queue.append(h)
    return order


def element_order(g, mul, identity_element) -> int:
    k, h = 1, g
    while h != identity_element:
        h = mul(h, g)
        k += 1
    return k


def abelian_invariants(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors ``(n_1 | n_2 | ... )`` of a finite abelian group.

    Only the multiset of element orders is needed: for each prime ``p`` the
    number of elements killed by ``p^k`` is ``p^(sum_i min(k, e_i))``, which
    recovers the ``p``-primary exponents ``e_i``. The trivial group gives ``()``.
    """
    orders = list(orders)
    total = len(orders)
    primary: dict[int, list[int]] = {}
    for p in factorint(total):
        # ranks[k] = #{i : e_i >= k}
        ranks = []
        prev = 0
        k = 1
        while True:
            killed = sum(1 for o in orders if (p**k) % o == 0)
            log = _exact_log(killed, p)
            if log == prev:
                break
            ranks.append(log - prev)
            prev = log
            k += 1
        exps = []
        for i in range(ranks[0] if ranks else 0):
            exps.append(sum(1 for r in ranks if r > i))
        primary[p] = sorted(exps)
    width = max((len(v) for v in primary.values()), default=0)
    factors = [1] * width
    for p, exps in primary.items():
        padded = [0] * (width - len(exps)) + exps
        for i, e in enumerate(padded):
            factors[i] *= p**e
    return tuple(f for f in factors if f > 1)


def _exact_log(value: int, p: int) -> int:
    k = 0
    while value > 1:
        if value % p:
            raise ValueError("element orders do not describe an abelian group")
        value //= p
        k += 1
    return k


# -- Cayley tables -----------------------------------------------------------


def cayley_table(elements: Sequence, mul) -> np.ndarray:
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return table


def table_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    for e in range(n):
        if np.array_equal(table[e], np.arange(n)):
            return e
    raise ValueError("table has no identity")


def table_is_abelian(table: np.ndarray) -> bool:
    return bool(np.array_equal(table, table.T))


def table_orders(table: np.ndarray) -> list[int]:
    e = table_identity(table)
    return [element_order(g, lambda a, b: int(table[a, b]), e) for g in range(table.shape[0])]


def table_abelian_invariants(table: np.ndarray) -> tuple[int, ...]:
    return abelian_invariants(table_orders(table))


def subgroup_generated(table: np.ndarray, gens: Iterable[int]) -> frozenset[int]:
    e = table_identity(table)
    return frozenset(closure(gens, lambda a, b: int(table[a, b]), e))


def generating_set(table: np.ndarray) -> list[int]:
    """A greedy generating set: repeatedly add the largest-order element outside."""
    orders = table_orders(table)
    by_order = sorted(range(table.shape[0]), key=lambda g: (-orders[g], g))
    gens: list[int] = []
    current = subgroup_generated(table, gens)
    for g in by_order:
        if len(current) == table.shape[0]:
            break
        if g not in current:
            gens.append(g)
            current = subgroup_generated(table, gens)
    return gens


def find_group_isomorphism(t1: np.ndarray, t2: np.ndarray) -> tuple[int, ...] | None:
    """An isomorphism between groups given by Cayley tables, or ``None``."""
    n = t1.shape[0]
    if n != t2.shape[0]:
        return None
    if table_is_abelian(t1) != table_is_abelian(t2):
        return None
    o1, o2 = table_orders(t1), table_orders(t2)
    if sorted(o1) != sorted(o2):
        return None
    e1, e2 = table_identity(t1), table_identity(t2)
    gens = generating_set(t1)
    candidates = [[h for h in range(n) if o2[h] == o1[g]] for g in gens]
    for images in itertools.product(*candidates):
        f = extend_homomorphism(t1, t2, e1, e2, gens, images)
        if f is not None:
            return f
    return None


def extend_homomorphism(t1, t2, e1, e2, gens, images) -> tuple[int, ...] | None:
    n = t1.shape[0]
    f = [-1] * n
    f[e1] = e2
    queue = deque([e1])
    while queue:
        g = queue.popleft()
        for s, fs in zip(gens, images):
            h = int(t1[g, s])
            fh = int(t2[f[g], fs])
            if f[h] == -1:
                f[h] = fh
                queue.append(h)
            elif f[h] != fh:
                return None
    if -1 in f or len(set(f)) != n:
        return None
    fa = np.asarray(f)
    if not np.array_equal(fa[t1], t2[fa[:, None], fa[None, :]]):
        return None
    return tuple(f)


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
