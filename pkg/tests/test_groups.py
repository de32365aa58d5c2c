import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from yangbaxter import groups
from yangbaxter.brace import cyclic_table, elementary_abelian_table
from yangbaxter.errors import GroupTooLarge


def direct_table(*orders):
    elems = list(itertools.product(*(range(k) for k in orders)))
    return groups.cayley_table(elems, lambda a, b: tuple((u + v) % k for u, v, k in zip(a, b, orders)))


@pytest.mark.parametrize(
    "orders, expected",
    [((1,), ()), ((4,), (4,)), ((2, 2), (2, 2)), ((2, 3), (6,)), ((2, 4), (2, 4)), ((6, 4), (2, 12)), ((3, 3, 9), (3, 3, 9))],
)
def test_abelian_invariants_of_products(orders, expected):
    assert groups.table_abelian_invariants(direct_table(*orders)) == expected


@given(st.lists(st.integers(min_value=1, max_value=8), min_size=1, max_size=3))
def test_invariant_product_is_order(orders):
    t = direct_table(*orders)
    inv = groups.table_abelian_invariants(t)
    assert int(np.prod(inv, dtype=np.int64)) == t.shape[0]
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_compose_applies_right_first():
    p, q = (1, 2, 0), (1, 0, 2)
    assert groups.compose(p, q) == (2, 1, 0)
    assert groups.compose(p, groups.inverse(p)) == groups.identity(3)


def test_cycle_type():
    assert groups.cycle_type((1, 0, 3, 4, 2)) == (2, 3)


def test_orbit_blocks_weak_components():
    maps = np.array([[1, 0, 2, 3], [0, 1, 3, 2]])
    assert groups.orbit_blocks(4, maps) == [(0, 1), (2, 3)]


def test_closure_cap():
    with pytest.raises(GroupTooLarge):
        groups.closure([(1, 2, 3, 4, 0)], groups.compose, groups.identity(5), cap=3)


def test_group_isomorphism():
    assert groups.find_group_isomorphism(cyclic_table(6), direct_table(2, 3)) is not None
    assert groups.find_group_isomorphism(cyclic_table(4), elementary_abelian_table(2, 2)) is None
