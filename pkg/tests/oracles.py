"""Independent reference computations used to freeze expected values.

Everything here is deliberately naive: direct sums, rational-number
polynomial models, cofactor determinants.  The point is to check the
library's cleverer routes against slow arithmetic that is hard to get
wrong, not to be fast.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Tuple


def legendre_valuation(n: int, p: int) -> int:
    """ord_p(n!) as the direct sum of floor(n / p^i)."""
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Rational-coefficient model of divided-power polynomials.
#
# A monomial key is (ordinary exponents, plain pd exponents); the value is a
# Fraction.  The divided power u^[n] corresponds to u^n / n!, so converting
# a library element in means dividing by factorials, and reading a divided
# coefficient back out means multiplying by them.
# ---------------------------------------------------------------------------

FracPoly = Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]


def frac_from_element(element) -> FracPoly:
    out: FracPoly = {}
    for mono, coeff in element.terms.items():
        denom = 1
        for e in mono.pd:
            denom *= factorial(e)
        key = (mono.ordinary, mono.pd)
        out[key] = Fraction(coeff.lift(), denom)
    return out


def frac_mul(a: FracPoly, b: FracPoly) -> FracPoly:
    out: FracPoly = {}
    for (oa, da), ca in a.items():
        for (ob, db), cb in b.items():
            key = (
                tuple(x + y for x, y in zip(oa, ob)),
                tuple(x + y for x, y in zip(da, db)),
            )
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v}


def frac_divided_coefficient(poly: FracPoly, key) -> Fraction:
    """Coefficient in the divided-power basis: multiply the factorials back."""
    ordinary, pd = key
    c = poly.get((tuple(ordinary), tuple(pd)), Fraction(0))
    for e in pd:
        c *= factorial(e)
    return c


def frac_to_residue(c: Fraction, p: int, N: int) -> int:
    """Reduce a fraction with p-unit denominator into Z/p^N."""
    if c.denominator % p == 0:
        raise ValueError(f"denominator {c.denominator} not invertible mod {p}")
    mod = p ** N
    return c.numerator * pow(c.denominator, -1, mod) % mod


def element_matches_fracpoly(element, poly: FracPoly) -> bool:
    p = element.ring.modulus.p
    keys = set(poly)
    for mono, coeff in element.terms.items():
        keys.add((mono.ordinary, mono.pd))
    for key in keys:
        expected = frac_divided_coefficient(poly, key)
        got = 0
        prec = element.ring.modulus.N
        for mono, coeff in element.terms.items():
            if (mono.ordinary, mono.pd) == key:
                got = coeff.lift()
                prec = coeff.precision
        if frac_to_residue(expected, p, prec) != got % p ** prec:
            return False
    return True


# ---------------------------------------------------------------------------
# Integer determinants and the minors-gcd route to elementary divisors.
# ---------------------------------------------------------------------------


def det_int(matrix: List[List[int]]) -> int:
    """Bareiss fraction-free determinant over the integers."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def gcd_of_minors(matrix: List[List[int]], k: int) -> int:
    from itertools import combinations
    from math import gcd

    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    g = 0
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            sub = [[matrix[i][j] for j in cs] for i in rs]
            g = gcd(g, det_int(sub))
            if g == 1:
                return 1
    return g


def minors_gcd_divisors(matrix: List[List[int]]) -> List[int]:
    """Nonzero elementary divisors d_i = gcd_i / gcd_(i-1)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    divisors = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = gcd_of_minors(matrix, k)
        if g == 0:
            break
        divisors.append(g // prev)
        prev = g
    return divisors


def fermat_quotient_delta(c: int, p: int, N: int) -> int:
    """delta on the constant c: (c - c^p) / p reduced mod p^(N-1)."""
    return (c - c ** p) // p % p ** (N - 1)


def stage_basis_count(p: int, stages: int, weight: int) -> int:
    """Number of monomials t_1^(a_1) ... t_J^(a_J) of weighted degree
    `weight` with weights p^(j-1), a_j < p below the top stage and a_J
    unbounded.  Base-p digits make this 1 for weight < p^J."""
    count = 0

    def rec(j: int, remaining: int) -> None:
        nonlocal count
        if j == stages:
            if remaining % p ** (stages - 1) == 0:
                count += 1
            return
        w = p ** (j - 1)
        for a in range(p):
            if a * w > remaining:
                break
            rec(j + 1, remaining - a * w)

    if stages == 0:
        return 1 if weight == 0 else 0
    rec(1, weight)
    return count


def split_cokernel_divisors(matrix: List[List[int]], mod: int) -> List[int]:
    """Elementary divisors of coker(matrix) over Z/mod for row-split input.

    Requires every column to touch at most one row; the cokernel is then
    a direct sum, one cyclic group per row.  Row entries with gcd g
    (taken together with mod, so g | mod) generate the subgroup of index
    g in Z/mod, leaving a factor Z/g.  Returns nontrivial orders
    ascending.
    """
    from math import gcd

    for j in range(len(matrix[0]) if matrix else 0):
        touched = [i for i in range(len(matrix)) if matrix[i][j] % mod]
        if len(touched) > 1:
            raise ValueError("matrix is not row-split")
    orders = []
    for row in matrix:
        g = mod
        for entry in row:
            g = gcd(g, entry)
        if g > 1:
            orders.append(g)
    return sorted(orders)
