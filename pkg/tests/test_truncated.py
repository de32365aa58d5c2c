import itertools
import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from yangbaxter import groups
from yangbaxter.brace import (
    in_transitive_cycle_base,
    left_series,
    mpl_brace,
    square,
    strong_left_ideal_generated,
    transitive_cycle_bases,
)
from yangbaxter.errors import (
    BadAutomorphismSeed,
    BadParameters,
    MatrixNotInNormalForm,
    ModulusMismatch,
    SearchSpaceTooLarge,
    WrongType,
)
from yangbaxter.truncated import (
    RingElement,
    TypeSignature,
    brace_of_matrix,
    canonical_matrix,
    element_coordinates,
    format_matrix,
    ideal_of_matrix,
    matrices_for_type,
    matrix_of_ideal,
    matrix_orbits,
    orbit_size_formula,
    p_valuation,
    parse_matrix,
    phi_action,
    ring_circ,
    ring_inv_circ,
    ring_mul,
    ring_pow,
)


def all_types(p, max_d, max_n):
    for n in range(1, max_n + 1):
        for d in itertools.product(range(max_d + 1), repeat=n):
            if sum(d) <= max_d and all(a >= b for a, b in zip(d, d[1:])):
                yield TypeSignature(p, d)


# -- ring arithmetic ----------------------------------------------------------------


def test_monomial_products():
    for n in range(2, 6):
        x = RingElement.x(n)
        assert ring_mul(x, x) == RingElement.monomial(n, 2)
        top = ring_mul(x, RingElement.monomial(n, n - 1))
        assert top.coeffs == (0,) * (n - 1) + (1,)
        assert ring_mul(x, RingElement.monomial(n, n)) == RingElement.zero(n)


def test_circ_mod_four():
    a = RingElement((1, 0), 4)
    assert ring_circ(a, a).coeffs == (2, 1)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        ring_mul(RingElement((1, 0), 4), RingElement((1, 0), 8))
    with pytest.raises(ModulusMismatch):
        ring_circ(RingElement((1, 0)), RingElement((1, 0, 0)))


elements = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.tuples(*(st.lists(st.integers(-20, 20), min_size=n, max_size=n) for _ in range(3)))
)


@given(elements)
def test_circ_group_laws(vecs):
    a, b, c = (RingElement(tuple(v)) for v in vecs)
    zero = RingElement.zero(a.n)
    assert ring_circ(ring_circ(a, b), c) == ring_circ(a, ring_circ(b, c))
    assert ring_circ(a, ring_inv_circ(a)) == zero == ring_circ(ring_inv_circ(a), a)
    assert ring_circ(a, b) == ring_circ(b, a)
    # distributivity of the truncated product
    assert ring_mul(a, b + c) == ring_mul(a, b) + ring_mul(a, c)


@given(elements)
def test_nilpotent(vecs):
    a = RingElement(tuple(vecs[0]))
    assert ring_pow(a, a.n + 1) == RingElement.zero(a.n)


def test_p_valuation():
    assert p_valuation(8, 2) == 3
    assert p_valuation(0, 2) == math.inf
    assert p_valuation(18, 3) == 2


def test_type_signature_parsing():
    T = TypeSignature.parse("2:3,1,1")
    assert T.p == 2 and T.d == (3, 1, 1) and T.size == 32 and str(T) == "2:3,1,1"
    for bad in ("4:1,1", "2:1,2", "2", "x:1", "2:-1"):
        with pytest.raises(BadParameters):
            TypeSignature.parse(bad)


# -- normal form -------------------------------------------------------------------


def in_span_oracle(v, rows):
    """Solve over Q with sympy and check the solution is integral."""
    if not rows:
        return not any(v)
    A = sympy.Matrix(rows).T
    sol = A.gauss_jordan_solve(sympy.Matrix(v))
    coeffs = sol[0]
    return all(c.is_integer for c in coeffs)


def brute_force_matrices(T):
    n, diag = T.n, T.diagonal
    found = []
    free = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for vals in itertools.product(*(range(diag[j]) for _, j in free)):
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = diag[i]
        for (i, j), v in zip(free, vals):
            M[i][j] = v
        ok = True
        for k in range(n):
            shifted = [0] + M[k][:-1]
            try:
                if not in_span_oracle(shifted, [M[r] for r in range(k + 1, n)]):
                    ok = False
                    break
            except ValueError:
                ok = False
                break
        if ok:
            found.append(tuple(tuple(r) for r in M))
    return sorted(found)


@pytest.mark.parametrize("T", [TypeSignature(2, (1, 1, 1)), TypeSignature(2, (2, 1, 1)), TypeSignature(3, (1, 1, 1)),
                               TypeSignature(2, (2, 2, 1)), TypeSignature(2, (1, 1, 1, 1)), TypeSignature(3, (2, 1))],
                         ids=str)
def test_generation_matches_brute_force(T):
    assert matrices_for_type(T) == brute_force_matrices(T)


def test_matrix_examples():
    assert matrices_for_type(TypeSignature(2, (1,))) == [((2,),)]
    assert matrices_for_type(TypeSignature(2, (1, 1))) == [((2, 0), (0, 2)), ((2, 1), (0, 2))]
    mats = matrices_for_type(TypeSignature(2, (1, 1, 1)))
    assert len(mats) == 4
    assert all(M[0][1] == M[1][2] for M in mats)


@pytest.mark.parametrize("p", [2, 3])
def test_count_is_p_power(p):
    for T in all_types(p, 5, 4):
        assert len(matrices_for_type(T)) == p ** (T.total - T.d[0])


def test_round_trip_and_canonical():
    for T in all_types(2, 4, 3):
        for M in matrices_for_type(T):
            assert matrix_of_ideal(ideal_of_matrix(M, T)) == M
            assert canonical_matrix(M, T) == M


@given(st.data())
def test_canonical_recovers_after_row_operations(data):
    T = data.draw(st.sampled_from([TypeSignature(2, (2, 1, 1)), TypeSignature(3, (1, 1, 1)), TypeSignature(2, (2, 2, 1, 1))]))
    M = data.draw(st.sampled_from(matrices_for_type(T)))
    rows = [list(r) for r in M]
    for _ in range(data.draw(st.integers(0, 6))):
        i = data.draw(st.integers(0, T.n - 1))
        j = data.draw(st.integers(0, T.n - 1))
        k = data.draw(st.integers(-3, 3))
        if i != j:
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    order = data.draw(st.permutations(range(T.n)))
    assert canonical_matrix([rows[i] for i in order], T) == M


def test_wrong_type():
    with pytest.raises(WrongType):
        canonical_matrix([(2, 0), (0, 2)], TypeSignature(2, (2, 0)))
    with pytest.raises(MatrixNotInNormalForm):
        ideal_of_matrix(((2, 2), (0, 2)), TypeSignature(2, (1, 1)))


def test_matrix_text_round_trip():
    M = ((4, 1, 1), (0, 2, 1), (0, 0, 2))
    assert parse_matrix(format_matrix(M)) == M
    with pytest.raises(MatrixNotInNormalForm):
        parse_matrix("1 2\n3\n")


# -- quotient braces --------------------------------------------------------------


def test_additive_groups_of_type22():
    T = TypeSignature(2, (1, 1))
    B0, _ = brace_of_matrix(((2, 0), (0, 2)), T)
    B1, _ = brace_of_matrix(((2, 1), (0, 2)), T)
    assert groups.table_abelian_invariants(B0.add) == (2, 2)
    assert groups.table_abelian_invariants(B1.add) == (4,)
    # (1,0) + (1,0) = (2,0), reduced by the row (2,1) to (0,-1) = (0,1)
    assert element_coordinates(T, int(B1.add[1, 1])) == (0, 1)


@pytest.mark.parametrize("T", list(all_types(2, 4, 3)) + list(all_types(3, 2, 2)), ids=str)
def test_quotient_brace_properties(T):
    for M in matrices_for_type(T):
        B, x = brace_of_matrix(M, T)
        sizes = left_series(B).sizes()
        ratios = tuple(a // b for a, b in zip(sizes, sizes[1:]))
        expected = tuple(v for v in T.diagonal if v > 1)
        assert ratios == expected
        level = max((i + 1 for i, e in enumerate(T.d) if e >= 1), default=0)
        assert mpl_brace(B) == level
        assert len(strong_left_ideal_generated(B, [x])) == B.n
        if B.n > 1:
            assert in_transitive_cycle_base(B, x)
            orbit = next(X for X in transitive_cycle_bases(B) if x in X)
            assert orbit == {int(B.add[x, a]) for a in square(B).elements}


# -- automorphisms ----------------------------------------------------------------


def test_phi_identity_and_n2():
    for T in all_types(2, 4, 3):
        for M in matrices_for_type(T):
            assert phi_action(RingElement.x(T.n), M, T) == M
    T = TypeSignature(3, (2, 1))
    for M in matrices_for_type(T):
        for c in range(T.size):
            assert phi_action((1, c), M, T) == M


def test_phi_example_n3():
    T = TypeSignature(2, (1, 1, 1))
    M = ((2, 1, 0), (0, 2, 1), (0, 0, 2))
    assert phi_action((1, 1, 0), M, T) == ((2, 1, 1), (0, 2, 1), (0, 0, 2))


def test_bad_seed():
    T = TypeSignature(2, (1, 1))
    with pytest.raises(BadAutomorphismSeed):
        phi_action((0, 1), ((2, 0), (0, 2)), T)


def substitute(outer, inner, n):
    """Coefficients of ``outer(inner)`` where ``outer`` is a series in ``x``."""
    total = RingElement.zero(n)
    power = RingElement(tuple(inner))
    for c in outer:
        total = total + power.scale(c)
        power = ring_mul(power, RingElement(tuple(inner)))
    return total.coeffs


@pytest.mark.parametrize("T", [TypeSignature(2, (1, 1, 1)), TypeSignature(2, (2, 1, 1)), TypeSignature(3, (1, 1, 1))], ids=str)
def test_phi_is_an_action(T):
    seeds = [(1,) + c for c in itertools.product(range(T.size), repeat=T.n - 1)]
    for M in matrices_for_type(T):
        for y, z in itertools.product(seeds[:6], seeds[-6:]):
            # phi_y(phi_z(x)) = phi_y(z) = z evaluated at y
            composed = substitute(z, y, T.n)
            assert phi_action(y, phi_action(z, M, T), T) == phi_action(composed, M, T)


def test_orbit_examples():
    assert [len(o) for o in matrix_orbits(TypeSignature(2, (1, 1)))] == [1, 1]
    assert sorted(len(o) for o in matrix_orbits(TypeSignature(2, (1, 1, 1)))) == [1, 1, 2]
    for p, d in ((2, 3), (3, 2), (5, 1)):
        assert len(matrix_orbits(TypeSignature(p, (d,)))) == 1


def test_orbit_representatives_are_least():
    for T in all_types(2, 4, 3):
        orbits = matrix_orbits(T)
        assert sum(len(o) for o in orbits) == len(matrices_for_type(T))
        assert all(o[0] == min(o) for o in orbits)
        assert [o[0] for o in orbits] == sorted(o[0] for o in orbits)


def test_orbit_cap():
    with pytest.raises(SearchSpaceTooLarge):
        matrix_orbits(TypeSignature(2, (2, 1, 1)), cap=100)


def test_orbit_size_formula_n3():
    for T in all_types(2, 4, 3):
        if T.n != 3:
            continue
        for orbit in matrix_orbits(T):
            for M in orbit:
                assert len(orbit) == orbit_size_formula(M, T)
