"""Integer Smith normal form and cohomology of complexes over Z/p^N.

Matrices are plain lists of integer rows.  The Smith decomposition
tracks both change-of-basis matrices and their inverses, so kernels and
cokernels modulo p^N come out as explicit lattices: the kernel of D is
spanned by the columns of V * diag(p^e), and the cohomology group at a
given degree is the cokernel of the previous differential rewritten in
that kernel basis.  Every invariant factor of such a cokernel must be a
p-power dividing p^N; the code asserts this rather than assuming it.

A chain map between complexes with matching degree ranges yields a
mapping cone; since all terms are finite free Z/p^N-modules, the cone is
acyclic exactly when it is acyclic mod p, which reduces the strict
quasi-isomorphism test to rank counts over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .padic import Modulus

Matrix = List[List[int]]


class GradingMismatch(ValueError):
    """Chain map between complexes with different degree ranges."""


# -- plain integer matrix helpers ---------------------------------------------


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def mat_mul(a: Matrix, b: Matrix, inner: Optional[int] = None) -> Matrix:
    rows = len(a)
    if inner is None:
        inner = len(a[0]) if rows else len(b)
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            v = ai[k]
            if v:
                bk = b[k]
                for j in range(cols):
                    oi[j] += v * bk[j]
    return out


def mat_vec(a: Matrix, x: Sequence[int]) -> List[int]:
    return [sum(v * w for v, w in zip(row, x)) for row in a]


def _hstack(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return [row[:] for row in b]
    if not b:
        return [row[:] for row in a]
    return [ra + rb for ra, rb in zip(a, b)]


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# -- Smith normal form ---------------------------------------------------------


@dataclass
class SmithDecomposition:
    """U * A * V = S with S diagonal, divisors nonnegative and chained.

    U, V are unimodular; their inverses are tracked alongside so callers
    can move between the original and diagonal coordinates without
    solving anything.
    """

    rows: int
    cols: int
    S: Matrix
    U: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix

    @property
    def divisors(self) -> List[int]:
        return [self.S[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)


def smith_normal_form(
    a: Matrix, rows: Optional[int] = None, cols: Optional[int] = None
) -> SmithDecomposition:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Pivot choice is deterministic: smallest absolute value in the
    remaining submatrix, ties broken by smallest row then smallest
    column.  Divisor chaining is enforced by the usual repair step
    (fold an offending row into the pivot row and rerun).
    """
    r = len(a) if rows is None else rows
    c = (len(a[0]) if a else 0) if cols is None else cols
    work = [list(row) for row in a] if a else [[] for _ in range(r)]
    U = identity_matrix(r)
    Uinv = identity_matrix(r)
    V = identity_matrix(c)
    Vinv = identity_matrix(c)

    def row_swap(i: int, j: int) -> None:
        work[i], work[j] = work[j], work[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def row_negate(i: int) -> None:
        work[i] = [-v for v in work[i]]
        U[i] = [-v for v in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    def row_add(i: int, j: int, k: int) -> None:
        # row_i += k * row_j
        work[i] = [v + k * w for v, w in zip(work[i], work[j])]
        U[i] = [v + k * w for v, w in zip(U[i], U[j])]
        for row in Uinv:
            row[j] -= k * row[i]

    def col_swap(i: int, j: int) -> None:
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_add(i: int, j: int, k: int) -> None:
        # col_i += k * col_j
        for row in work:
            row[i] += k * row[j]
        for row in V:
            row[i] += k * row[j]
        Vinv[j] = [v - k * w for v, w in zip(Vinv[j], Vinv[i])]

    def submatrix_pivot(k: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(k, r):
            for j in range(k, c):
                v = work[i][j]
                if v == 0:
                    continue
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[1], best[2])

    k = 0
    while k < min(r, c):
        piv = submatrix_pivot(k)
        if piv is None:
            break
        i, j = piv
        if i != k:
            row_swap(k, i)
        if j != k:
            col_swap(k, j)
        if work[k][k] < 0:
            row_negate(k)
        while True:
            dirty = False
            for i in range(r):
                if i != k and work[i][k]:
                    row_add(i, k, -(work[i][k] // work[k][k]))
                    if work[i][k]:
                        dirty = True
            for j in range(c):
                if j != k and work[k][j]:
                    col_add(j, k, -(work[k][j] // work[k][k]))
                    if work[k][j]:
                        dirty = True
            if not dirty:
                break
            piv = submatrix_pivot(k)
            i, j = piv
            if i != k:
                row_swap(k, i)
            if j != k:
                col_swap(k, j)
            if work[k][k] < 0:
                row_negate(k)
        bad = None
        d = work[k][k]
        for i in range(k + 1, r):
            for j in range(k + 1, c):
                if work[i][j] % d:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_add(k, bad, 1)
            continue
        k += 1

    return SmithDecomposition(rows=r, cols=c, S=work, U=U, V=V, Uinv=Uinv, Vinv=Vinv)


def kernel_basis_mod_prime_power(
    a: Matrix, modulus: Modulus, cols: Optional[int] = None
) -> Tuple[Matrix, List[int]]:
    """Columns spanning {x : a x = 0 mod p^N}, with their p-exponents.

    Returns (B, e) where B = V * diag(p^e): column i of B generates the
    i-th factor of the kernel, and e[i] is the power of p scaling the
    i-th column of V.
    """
    p, N = modulus.p, modulus.N
    r = len(a)
    c = (len(a[0]) if a else 0) if cols is None else cols
    dec = smith_normal_form(a, rows=r, cols=c)
    exps = []
    for i in range(c):
        if i < min(r, c) and dec.S[i][i] != 0:
            v = min(N, _int_valuation(dec.S[i][i], p))
        else:
            v = N
        exps.append(N - v)
    basis = [
        [dec.V[i][j] * p ** exps[j] for j in range(c)] for i in range(c)
    ]
    return basis, exps


# -- complexes ------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteComplex:
    """Bounded complex of finite free Z/p^N-modules.

    ranks[i] is the rank in degree min_degree + i; differentials[i] maps
    that degree to the next one and is stored as an integer matrix with
    ranks[i+1] rows.  The composite of consecutive differentials must
    vanish mod p^N.
    """

    modulus: Modulus
    min_degree: int
    ranks: Tuple[int, ...]
    differentials: Tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if len(self.differentials) != max(0, len(self.ranks) - 1):
            raise ValueError("need one differential per adjacent pair of degrees")
        pN = self.modulus.cardinality
        for i, d in enumerate(self.differentials):
            if len(d) != self.ranks[i + 1]:
                raise ValueError(f"differential {i} has wrong row count")
            for row in d:
                if len(row) != self.ranks[i]:
                    raise ValueError(f"differential {i} has wrong column count")
        for i in range(len(self.differentials) - 1):
            comp = mat_mul(
                self.differentials[i + 1], self.differentials[i],
                inner=self.ranks[i + 1],
            )
            if any(v % pN for row in comp for v in row):
                raise ValueError(f"d o d is nonzero between degrees "
                                 f"{self.min_degree + i} and {self.min_degree + i + 2}")

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.ranks) - 1

    def degree_index(self, q: int) -> int:
        if not (self.min_degree <= q <= self.max_degree):
            raise IndexError(f"degree {q} outside [{self.min_degree}, {self.max_degree}]")
        return q - self.min_degree

    def rank(self, q: int) -> int:
        if self.min_degree <= q <= self.max_degree:
            return self.ranks[q - self.min_degree]
        return 0

    def differential(self, q: int) -> Optional[Matrix]:
        """Matrix of d: C^q -> C^(q+1), or None when out of range."""
        i = q - self.min_degree
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        return None


@dataclass(frozen=True)
class CohomologyGroup:
    """Finite abelian p-group presented by its elementary divisors.

    exponents is ascending; a factor Z/p^e with e = N is indistinguishable
    from a free rank inside Z/p^N-modules and is reported via free_rank.
    """

    modulus: Modulus
    exponents: Tuple[int, ...]

    @property
    def free_rank(self) -> int:
        return sum(1 for e in self.exponents if e == self.modulus.N)

    @property
    def torsion_exponents(self) -> Tuple[int, ...]:
        return tuple(e for e in self.exponents if e < self.modulus.N)

    @property
    def order_exponent(self) -> int:
        return sum(self.exponents)

    def is_trivial(self) -> bool:
        return not self.exponents

    def describe(self) -> str:
        if not self.exponents:
            return "0"
        p = self.modulus.p
        return " + ".join(f"Z/{p}^{e}" if e > 1 else f"Z/{p}" for e in self.exponents)


def cohomology(cx: FiniteComplex, q: int) -> CohomologyGroup:
    """H^q as an explicit finite abelian p-group.

    The kernel of the outgoing differential is the lattice spanned by
    V * diag(p^e); the incoming image (augmented by p^N times the
    identity, which is zero in the ring) is rewritten in that basis by
    exact row division, and one more Smith pass reads off the quotient.
    """
    modulus = cx.modulus
    p, N = modulus.p, modulus.N
    pN = modulus.cardinality
    n = cx.rank(q)
    if n == 0:
        return CohomologyGroup(modulus, ())
    d_out = cx.differential(q)
    if d_out is None:
        d_out = zero_matrix(0, n)
    dec = smith_normal_form(d_out, rows=len(d_out), cols=n)
    exps = []
    for i in range(n):
        if i < min(len(d_out), n) and dec.S[i][i] != 0:
            v = min(N, _int_valuation(dec.S[i][i], p))
        else:
            v = N
        exps.append(N - v)

    d_in = cx.differential(q - 1)
    m_aug = _hstack(
        d_in if d_in is not None else zero_matrix(n, 0),
        [[pN if i == j else 0 for j in range(n)] for i in range(n)],
    )
    w = mat_mul(dec.Vinv, m_aug, inner=n)
    g: Matrix = []
    for i in range(n):
        scale = p ** exps[i]
        row = []
        for v in w[i]:
            if v % scale:
                raise ArithmeticError(
                    "image does not lie in the kernel lattice; "
                    "the complex is not a complex"
                )
            row.append(v // scale)
        g.append(row)

    quot = smith_normal_form(g, rows=n, cols=len(g[0]) if g else 0)
    out = []
    for f in quot.divisors:
        if f == 0:
            raise ArithmeticError("cokernel is not killed by p^N")
        k = _int_valuation(f, p)
        if f != p ** k:
            raise ArithmeticError(f"invariant factor {f} is not a p-power")
        if k == 0:
            continue
        if k > N:
            raise ArithmeticError(f"invariant factor exponent {k} exceeds {N}")
        out.append(k)
    return CohomologyGroup(modulus, tuple(sorted(out)))


def all_cohomology(cx: FiniteComplex) -> dict:
    return {q: cohomology(cx, q) for q in range(cx.min_degree, cx.max_degree + 1)}


# -- chain maps and cones --------------------------------------------------------


@dataclass(frozen=True)
class ChainMap:
    """Degreewise map of complexes commuting with the differentials mod p^N."""

    source: FiniteComplex
    target: FiniteComplex
    blocks: Tuple[Matrix, ...]

    def __post_init__(self) -> None:
        src, tgt = self.source, self.target
        if src.modulus != tgt.modulus:
            raise ValueError("chain map across different moduli")
        if (src.min_degree, src.max_degree) != (tgt.min_degree, tgt.max_degree):
            raise GradingMismatch(
                f"source degrees [{src.min_degree}, {src.max_degree}] vs "
                f"target [{tgt.min_degree}, {tgt.max_degree}]"
            )
        if len(self.blocks) != len(src.ranks):
            raise ValueError("need one block per degree")
        pN = src.modulus.cardinality
        for i, b in enumerate(self.blocks):
            if len(b) != tgt.ranks[i] or any(len(row) != src.ranks[i] for row in b):
                raise ValueError(f"block {i} has the wrong shape")
        for i in range(len(src.ranks) - 1):
            lhs = mat_mul(self.blocks[i + 1], src.differentials[i],
                          inner=src.ranks[i + 1])
            rhs = mat_mul(tgt.differentials[i], self.blocks[i],
                          inner=tgt.ranks[i])
            for ra, rb in zip(lhs, rhs):
                if any((x - y) % pN for x, y in zip(ra, rb)):
                    raise ValueError(
                        f"map does not commute with d at degree {src.min_degree + i}"
                    )

    def block(self, q: int) -> Matrix:
        return self.blocks[self.source.degree_index(q)]


def mapping_cone(f: ChainMap) -> FiniteComplex:
    """Cone(f)^q = C^(q+1) (+) C'^q with d = [[-d, 0], [f, d']]."""
    src, tgt = f.source, f.target
    lo = src.min_degree - 1
    hi = src.max_degree
    ranks = []
    for q in range(lo, hi + 1):
        ranks.append(src.rank(q + 1) + tgt.rank(q))
    diffs = []
    for q in range(lo, hi):
        rs_top, rs_bot = src.rank(q + 2), tgt.rank(q + 1)
        cs_top, cs_bot = src.rank(q + 1), tgt.rank(q)
        block = zero_matrix(rs_top + rs_bot, cs_top + cs_bot)
        d_src = src.differential(q + 1)
        if d_src is not None:
            for i in range(rs_top):
                for j in range(cs_top):
                    block[i][j] = -d_src[i][j]
        if cs_top:
            fb = f.block(q + 1)
            for i in range(rs_bot):
                for j in range(cs_top):
                    block[rs_top + i][j] = fb[i][j]
        d_tgt = tgt.differential(q)
        if d_tgt is not None:
            for i in range(rs_bot):
                for j in range(cs_bot):
                    block[rs_top + i][cs_top + j] = d_tgt[i][j]
        diffs.append(block)
    return FiniteComplex(
        modulus=src.modulus,
        min_degree=lo,
        ranks=tuple(ranks),
        differentials=tuple(diffs),
    )


@dataclass
class QuasiIsoReport:
    passed: bool
    failing_degree: Optional[int] = None
    detail: str = ""


def fp_cohomology_dims(cx: FiniteComplex) -> List[int]:
    """dim_Fp H^q(cx tensor F_p) for each degree, lowest first."""
    p = cx.modulus.p
    dims = []
    for q in range(cx.min_degree, cx.max_degree + 1):
        d_out = cx.differential(q)
        d_in = cx.differential(q - 1)
        r_out = fp_rank(d_out, p) if d_out is not None else 0
        r_in = fp_rank(d_in, p) if d_in is not None else 0
        dims.append(cx.rank(q) - r_out - r_in)
    return dims


def is_strict_quasi_iso(f: ChainMap, check_all_levels: bool = False) -> QuasiIsoReport:
    """Whether the cone of f is acyclic, i.e. f is a strict quasi-iso.

    All terms are finite free modules over Z/p^N, so acyclicity mod p is
    equivalent to acyclicity on the nose (an acyclic bounded complex of
    free modules over this local ring splits); check_all_levels verifies
    the integral cohomology groups as well instead of trusting that
    reduction.
    """
    cone = mapping_cone(f)
    dims = fp_cohomology_dims(cone)
    for q, dim in zip(range(cone.min_degree, cone.max_degree + 1), dims):
        if dim != 0:
            return QuasiIsoReport(
                passed=False,
                failing_degree=q,
                detail=f"cone has {dim}-dimensional mod-p cohomology at degree {q}",
            )
    if check_all_levels:
        for q in range(cone.min_degree, cone.max_degree + 1):
            group = cohomology(cone, q)
            if not group.is_trivial():
                return QuasiIsoReport(
                    passed=False,
                    failing_degree=q,
                    detail=f"cone has cohomology {group.describe()} at degree {q}",
                )
    return QuasiIsoReport(passed=True)


# -- F_p linear algebra -----------------------------------------------------------


def fp_rref(a: Matrix, p: int) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over F_p and the pivot column list."""
    rows = [[v % p for v in row] for row in a]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [(v - factor * w) % p for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def fp_rank(a: Matrix, p: int) -> int:
    if not a or not a[0]:
        return 0
    return len(fp_rref(a, p)[1])


def fp_nullspace(a: Matrix, p: int) -> List[List[int]]:
    """Basis vectors of {x : a x = 0 over F_p} (columns as lists)."""
    if not a:
        return []
    ncols = len(a[0])
    rref, pivots = fp_rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rref[r][fc]) % p
        basis.append(vec)
    return basis


def fp_solve(a: Matrix, b: Sequence[int], p: int) -> Optional[List[int]]:
    """One solution of a x = b over F_p, or None if inconsistent."""
    if not a:
        return None if any(v % p for v in b) else []
    ncols = len(a[0])
    aug = [row + [bv] for row, bv in zip(a, b)]
    rref, pivots = fp_rref(aug, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols] % p
    return x
