"""The truncated ring F_n = xZ[x]/(x^(n+1)), its finite-index ideals and their matrices.

Ring elements are coefficient vectors on the basis ``x, x^2, ..., x^n``.
An ideal of index ``p^d`` is stored as an upper-triangular integer matrix
whose rows span it (together with ``p^d F_n``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

from .brace import Brace
from .errors import (
    BadAutomorphismSeed,
    BadParameters,
    MatrixNotInNormalForm,
    ModulusMismatch,
    SearchSpaceTooLarge,
    WrongType,
)

DEFAULT_ORBIT_CAP = 10**6

Matrix = tuple[tuple[int, ...], ...]


# -- ring arithmetic ----------------------------------------------------------------


@dataclass(frozen=True)
class RingElement:
    """``sum coeffs[i] x^(i+1)``; ``modulus == 0`` means integer coefficients."""

    coeffs: tuple[int, ...]
    modulus: int = 0

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if self.modulus:
            c = tuple(v % self.modulus for v in c)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def x(cls, n: int, modulus: int = 0) -> "RingElement":
        return cls.monomial(n, 1, modulus)

    @classmethod
    def monomial(cls, n: int, k: int, modulus: int = 0) -> "RingElement":
        c = [0] * n
        if 1 <= k <= n:
            c[k - 1] = 1
        return cls(tuple(c), modulus)

    @classmethod
    def zero(cls, n: int, modulus: int = 0) -> "RingElement":
        return cls((0,) * n, modulus)

    def __add__(self, other: "RingElement") -> "RingElement":
        _check_compatible(self, other)
        return RingElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.modulus)

    def __neg__(self) -> "RingElement":
        return RingElement(tuple(-a for a in self.coeffs), self.modulus)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return ring_mul(self, other)

    def scale(self, k: int) -> "RingElement":
        return RingElement(tuple(k * a for a in self.coeffs), self.modulus)


def _check_compatible(a: RingElement, b: RingElement) -> None:
    if a.n != b.n or a.modulus != b.modulus:
        raise ModulusMismatch(f"(n={a.n}, mod {a.modulus}) vs (n={b.n}, mod {b.modulus})")


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    """Product truncated at ``x^(n+1) = 0``."""
    _check_compatible(a, b)
    n = a.n
    out = [0] * n
    # x^(i+1) * x^(j+1) = x^(i+j+2) sits at position i+j+1
    for i, ai in enumerate(a.coeffs):
        if ai:
            for j in range(n - i - 1):
                out[i + j + 1] += ai * b.coeffs[j]
    return RingElement(tuple(out), a.modulus)


def ring_circ(a: RingElement, b: RingElement) -> RingElement:
    return a + b + ring_mul(a, b)


def ring_inv_circ(a: RingElement) -> RingElement:
    """The inverse for ``o``: ``sum_{i>=1} (-a)^i``, which stops after ``n`` terms."""
    neg = -a
    term = neg
    total = RingElement.zero(a.n, a.modulus)
    for _ in range(a.n):
        total = total + term
        term = ring_mul(term, neg)
    return total


def ring_pow(a: RingElement, k: int) -> RingElement:
    out = a
    for _ in range(k - 1):
        out = ring_mul(out, a)
    return out


# -- types ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeSignature:
    p: int
    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(v) for v in self.d)
        object.__setattr__(self, "d", d)
        if not isprime(self.p):
            raise BadParameters(f"{self.p} is not prime")
        if not d or any(v < 0 for v in d) or any(a < b for a, b in zip(d, d[1:])):
            raise BadParameters("exponents must be non-increasing and non-negative")

    @classmethod
    def parse(cls, text: str) -> "TypeSignature":
        try:
            p, rest = text.split(":")
            return cls(int(p), tuple(int(v) for v in rest.split(",")))
        except ValueError as exc:
            if isinstance(exc, BadParameters):
                raise
            raise BadParameters(f"cannot parse type {text!r}; expected p:d1,...,dn") from exc

    def __str__(self) -> str:
        return f"{self.p}:{','.join(map(str, self.d))}"

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total(self) -> int:
        return sum(self.d)

    @property
    def size(self) -> int:
        return self.p**self.total

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.p**e for e in self.d)

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.diagonal

    def stripped(self) -> "TypeSignature":
        """Drop trailing zero exponents (keeping at least one)."""
        d = list(self.d)
        while len(d) > 1 and d[-1] == 0:
            d.pop()
        return TypeSignature(self.p, tuple(d))


def p_valuation(k: int, p: int) -> float | int:
    if k == 0:
        return math.inf
    v = 0
    k = abs(k)
    while k % p == 0:
        k //= p
        v += 1
    return v


# -- integer row reduction ------------------------------------------------------------


def _hermite(rows: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Upper-triangular basis with positive pivots and entries above each pivot reduced.

    Raises ``WrongType`` if the rows do not span a full-rank lattice.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    basis: list[list[int]] = []
    for j in range(n):
        pivot = None
        rest = []
        for r in work:
            if r[j] == 0:
                rest.append(r)
            elif pivot is None:
                pivot = r
            else:
                g, s, t = _xgcd(pivot[j], r[j])
                a, b = pivot[j] // g, r[j] // g
                new_pivot = [s * u + t * v for u, v in zip(pivot, r)]
                other = [a * v - b * u for u, v in zip(pivot, r)]
                pivot = new_pivot
                if any(other):
                    rest.append(other)
        if pivot is None:
            raise WrongType("rows do not span a finite-index sublattice")
        if pivot[j] < 0:
            pivot = [-v for v in pivot]
        basis.append(pivot)
        work = rest
    for j in range(n):
        for i in range(j):
            q = basis[i][j] // basis[j][j]
            if q:
                basis[i] = [u - q * v for u, v in zip(basis[i], basis[j])]
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _in_span(v: Sequence[int], M: Sequence[Sequence[int]], start: int) -> bool:
    """Is ``v`` in the integer span of the triangular rows ``M[start:]``?"""
    v = list(v)
    n = len(v)
    if any(v[:start]):
        return False
    for j in range(start, n):
        if v[j]:
            q, r = divmod(v[j], M[j][j])
            if r:
                return False
            v = [a - q * b for a, b in zip(v, M[j])]
    return True


def shift_up(v: Sequence[int]) -> tuple[int, ...]:
    """``s+``: multiplication by ``x`` in coordinates."""
    return (0,) + tuple(v[:-1])


def shift_down(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(v[1:]) + (0,)


def is_class_matrix(M: Sequence[Sequence[int]], T: TypeSignature) -> bool:
    """Check the five defining conditions of the normal form directly."""
    n = T.n
    if len(M) != n or any(len(r) != n for r in M):
        return False
    for i in range(n):
        for j in range(n):
            if j < i and M[i][j] != 0:
                return False
            if M[i][j] < 0:
                return False
    diag = T.diagonal
    for j in range(n):
        if M[j][j] != diag[j]:
            return False
        if any(M[i][j] >= M[j][j] for i in range(n) if i != j):
            return False
    return all(_in_span(shift_up(M[k]), M, k + 1) for k in range(n))


def require_class_matrix(M, T: TypeSignature) -> Matrix:
    M = tuple(tuple(int(v) for v in r) for r in M)
    if not is_class_matrix(M, T):
        raise MatrixNotInNormalForm(f"matrix is not in normal form for type {T}")
    return M


def canonical_matrix(rows: Iterable[Sequence[int]], T: TypeSignature) -> Matrix:
    """Normal form of the lattice spanned by ``rows`` and ``p^d F_n``."""
    n = T.n
    lift = T.size
    gens = [list(r) for r in rows] + [[lift if i == k else 0 for i in range(n)] for k in range(n)]
    H = _hermite(gens, n)
    if tuple(H[i][i] for i in range(n)) != T.diagonal:
        raise WrongType(f"diagonal {[H[i][i] for i in range(n)]} does not match type {T}")
    return tuple(tuple(r) for r in H)


def matrices_for_type(T: TypeSignature) -> list[Matrix]:
    """All normal-form matrices of type ``T``, in lexicographic order.

    Rows 2..n form a matrix of the tail type. The first row is then filled
    column by column: ``s+`` moves entry ``k`` into column ``k+1``, where it
    must be cleared by the pivot ``p^(d_{k+1})`` below, so each entry is fixed
    modulo that pivot.
    """
    if T.n == 1:
        return [((T.diagonal[0],),)]
    tail = matrices_for_type(TypeSignature(T.p, T.d[1:]))
    out: list[Matrix] = []
    for Mp in tail:
        rows = [None] + [(0,) + r for r in Mp]
        out.extend(_first_rows(rows, T.diagonal, T.n))
    return sorted(out)


def _first_rows(M, diag, n) -> list[Matrix]:
    results = []
    lower = tuple(M[1:])

    def clear(res: list[int], k: int) -> list[int] | None:
        # eliminate column k of the residual with pivot row k
        q, r = divmod(res[k], diag[k])
        if r:
            return None
        return [a - q * b for a, b in zip(res, M[k])]

    def rec(first: list[int], res: list[int]):
        k = len(first)
        if k == n - 1:
            # the last entry is shifted out by s+, so it is free
            for val in range(diag[k]):
                results.append((tuple(first + [val]),) + lower)
            return
        start = -res[k + 1] % diag[k + 1]
        for val in range(start, diag[k], diag[k + 1]):
            nxt = list(res)
            nxt[k + 1] += val
            rec(first + [val], clear(nxt, k + 1))

    res = [0] * n
    res[1] = diag[0]
    rec([diag[0]], clear(res, 1))
    return results


# -- ideals and quotient braces -------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    """The ideal ``I_M`` of ``F_n``: the row span of ``M`` (it contains ``p^d F_n``)."""

    matrix: Matrix
    type: TypeSignature

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical coset representative with ``0 <= a_i < p^(d_i)``."""
        v = list(v)
        for i, row in enumerate(self.matrix):
            q = v[i] // row[i]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def representatives(self) -> list[tuple[int, ...]]:
        """Coset representatives ordered by mixed-radix index (first coordinate fastest)."""
        ranges = [range(m) for m in self.type.diagonal]
        return [tuple(reversed(t)) for t in itertools.product(*reversed(ranges))]

    def index_of(self, rep: Sequence[int]) -> int:
        idx, weight = 0, 1
        for a, m in zip(rep, self.type.diagonal):
            idx += a * weight
            weight *= m
        return idx


def ideal_of_matrix(M, T: TypeSignature) -> Ideal:
    return Ideal(require_class_matrix(M, T), T)


def matrix_of_ideal(ideal: Ideal) -> Matrix:
    return canonical_matrix(ideal.matrix, ideal.type)


def brace_of_matrix(M, T: TypeSignature) -> tuple[Brace, int]:
    """The brace ``F_n / I_M`` and the index of ``x + I_M``.

    Element ``(a_1, ..., a_n)`` has index ``a_1 + a_2 p^(d_1) + ...``, so the
    zero coset is 0.
    """
    from .brace import validate_brace

    ideal = ideal_of_matrix(M, T)
    n = T.n
    reps = np.array(ideal.representatives(), dtype=np.int64).reshape(-1, n)
    rows = np.array(ideal.matrix, dtype=np.int64)
    weights = np.cumprod((1,) + T.diagonal[:-1])

    def reduce_all(v: np.ndarray) -> np.ndarray:
        for i in range(n):
            q = np.floor_divide(v[..., i], rows[i, i])
            v = v - q[..., None] * rows[i]
        return v @ weights

    a = reps[:, None, :]
    b = reps[None, :, :]
    prod = np.zeros((len(reps), len(reps), n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i - 1):
            prod[..., i + j + 1] += a[..., i] * b[..., j]
    add = reduce_all(a + b)
    mul = reduce_all(a + b + prod)
    x = ideal.index_of(ideal.reduce(RingElement.x(n).coeffs))
    return validate_brace(add, mul), x


def element_coordinates(T: TypeSignature, index: int) -> tuple[int, ...]:
    out = []
    for m in T.diagonal:
        index, a = divmod(index, m)
        out.append(a)
    return tuple(out)


# -- automorphisms phi_y ---------------------------------------------------------------


def phi_action(y: RingElement | Sequence[int], M, T: TypeSignature) -> Matrix:
    """Image of ``I_M`` under the automorphism ``x -> y``, as a normal-form matrix."""
    coeffs = y.coeffs if isinstance(y, RingElement) else tuple(y)
    if len(coeffs) != T.n:
        raise BadAutomorphismSeed("seed has the wrong length")
    if coeffs[0] % T.size != 1 % T.size:
        raise BadAutomorphismSeed("seed must be x plus higher terms")
    return _phi_with_powers(_powers(coeffs, T.n), M, T)


def _powers(coeffs: Sequence[int], n: int) -> list[tuple[int, ...]]:
    y = RingElement(tuple(coeffs))
    out = [y]
    for _ in range(n - 1):
        out.append(ring_mul(out[-1], y))
    return [p.coeffs for p in out]


def _phi_with_powers(powers, M, T: TypeSignature) -> Matrix:
    n = T.n
    rows = []
    for row in M:
        img = [0] * n
        for m, pw in zip(row, powers):
            if m:
                for k in range(n):
                    img[k] += m * pw[k]
        rows.append(img)
    return canonical_matrix(rows, T)


def automorphism_seeds(T: TypeSignature, cap: int = DEFAULT_ORBIT_CAP) -> list[tuple[int, ...]]:
    """All ``y = x + c_2 x^2 + ... + c_n x^n`` with ``0 <= c_i < p^d``."""
    count = T.size ** (T.n - 1)
    if count > cap:
        raise SearchSpaceTooLarge(f"{count} automorphism seeds exceed the cap of {cap}")
    return [(1,) + c for c in itertools.product(range(T.size), repeat=T.n - 1)]


def matrix_orbits(T: TypeSignature, cap: int = DEFAULT_ORBIT_CAP) -> list[tuple[Matrix, ...]]:
    """Orbits of all ``phi_y`` on the matrices of type ``T``.

    Each orbit is sorted, so its first entry is the lexicographically least
    representative; orbits are ordered by that representative.
    """
    seeds = automorphism_seeds(T, cap)
    powers = [_powers(y, T.n) for y in seeds]
    remaining = set(matrices_for_type(T))
    orbits = []
    for M in sorted(remaining):
        if M not in remaining:
            continue
        orbit = {_phi_with_powers(pw, M, T) for pw in powers}
        remaining -= orbit
        orbits.append(tuple(sorted(orbit)))
    return orbits


def orbit_size_formula(M, T: TypeSignature) -> int:
    """``p^r`` with ``r = max(0, -d_1 + d_2 + d_3 - v_p(m_2))`` for ``n = 3``."""
    if T.n != 3:
        raise BadParameters("the closed orbit size is only known for n = 3")
    d1, d2, d3 = T.d
    v = p_valuation(M[1][2], T.p)
    r = 0 if v == math.inf else max(0, -d1 + d2 + d3 - v)
    return T.p**r


# -- text format ------------------------------------------------------------------------


def format_matrix(M) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in M) + "\n"


def parse_matrix(text: str) -> Matrix:
    rows = [tuple(int(v) for v in line.split()) for line in text.splitlines() if line.strip()]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise MatrixNotInNormalForm("matrix text must be n lines of n integers")
    return tuple(rows)
