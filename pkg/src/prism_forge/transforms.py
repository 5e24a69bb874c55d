"""Frobenius comparisons between twisted and untwisted de Rham theories.

A relative Frobenius F substitutes p-th-power-like images for the
coordinates of a second copy of the base ring.  Dividing its coordinate
differentials by p gives the contraction zeta(dx'_k) = p^{-1} d(F x'_k),
the kernel of every comparison in this module:

  * the F-transform turns a p-connection on the primed side into an
    honest connection on the unprimed side, and the p-transform scales
    it back into a p-connection, recovering the pullback along F;
  * scaling chain maps p^q / p^(m-q) exhibit the two window complexes
    as isogenous, and the zeta comparison map has cone killed by p^m;
  * mod p, the p-th power of a transformed connection operator is
    linear, and its matrix (the p-curvature) is computed by the
    transform data alone;
  * mod p, multiplication by the top zeta wedge identifies the twisted
    complex of the primed side with the pushforward of the untwisted
    complex, and a two-term conormal complex with the truncated
    envelope complex.

Everything is assembled on explicit monomial windows and verified at
the stated precision; constructions that would leave a window or lose
precision refuse loudly rather than truncate silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .deltaring import FrobeniusLift
from .derham import (
    DeRhamComplex,
    EMatrix,
    PConnection,
    WindowOverflow,
    build_p_derham,
    polynomial_connection,
    polynomial_p_connection,
)
from .homology import (
    ChainMap,
    FiniteComplex,
    Matrix,
    QuasiIsoReport,
    all_cohomology,
    fp_cohomology_dims,
    fp_nullspace,
    fp_solve,
    identity_matrix,
    is_strict_quasi_iso,
    mapping_cone,
    zero_matrix,
)
from .padic import Modulus, NotDivisible, PrecisionExhausted, Scalar
from .pdpoly import (
    Element,
    Monomial,
    RingSpec,
    equal_reduced,
    exact_div_p_elem,
    partial_derivative,
    substitute,
    window_monomials,
)

__all__ = [
    "ZetaUndefined",
    "NotClosed",
    "WindowTooSmall",
    "RelativeFrobenius",
    "f_transform",
    "p_transform",
    "phi_pullback_matrices",
    "pullback_factorization_failures",
    "isogeny_maps",
    "frobenius_comparison",
    "IsogenyReport",
    "check_frobenius_isogeny",
    "p_curvature",
    "CurvatureData",
    "CurvatureReport",
    "check_pcurvature_formula",
    "cartier_identity_check",
    "ComparisonReport",
    "check_pushforward_quasi_iso",
    "CotangentReport",
    "cotangent_comparison",
]


class ZetaUndefined(ValueError):
    """Some coordinate differential of F is not divisible by p."""


class NotClosed(ValueError):
    """The Cartier identity takes closed 1-forms only."""


class WindowTooSmall(ValueError):
    """The ring caps cannot hold the window a comparison needs."""


# -- matrices of ring elements -------------------------------------------------


def _e_zero(ring: RingSpec, rows: int, cols: int) -> EMatrix:
    return [[ring.zero() for _ in range(cols)] for _ in range(rows)]


def _e_identity(ring: RingSpec, n: int) -> EMatrix:
    out = _e_zero(ring, n, n)
    for i in range(n):
        out[i][i] = ring.one()
    return out


def _e_add(a: EMatrix, b: EMatrix) -> EMatrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _e_sub(a: EMatrix, b: EMatrix) -> EMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _e_mul(a: EMatrix, b: EMatrix) -> EMatrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            val = a[i][0] * b[0][j]
            for l in range(1, k):
                val = val + a[i][l] * b[l][j]
            row.append(val)
        out.append(row)
    return out


def _e_pow(a: EMatrix, n: int, ring: RingSpec) -> EMatrix:
    out = _e_identity(ring, len(a))
    for _ in range(n):
        out = _e_mul(out, a)
    return out


def _e_equal(a: EMatrix, b: EMatrix) -> bool:
    return all(
        equal_reduced(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def _e_is_zero(a: EMatrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def _e_subst(
    a: EMatrix, images: Mapping[str, Element], target: RingSpec
) -> EMatrix:
    return [[substitute(x, images, target=target) for x in row] for row in a]


def _e_map_to(a: EMatrix, ring: RingSpec) -> EMatrix:
    return [[x.map_to(ring) for x in row] for row in a]


def _e_assert_untruncated(a: EMatrix, context: str) -> None:
    if any(x.truncated for row in a for x in row):
        raise WindowOverflow(
            f"{context} left the coefficient ring caps; raise poly_degree_cap"
        )


# -- the relative Frobenius ----------------------------------------------------


@dataclass
class RelativeFrobenius:
    """A Frobenius-like substitution between two coordinate polynomial rings.

    images sends each generator of domain_ring (the primed copy) to an
    element of image_ring congruent to the p-th power of the matching
    generator (matched by position).  zeta records the exact p-fold
    division of each coordinate differential of an image,

        zeta[x'][x] = p^{-1} * (d/dx) images[x'],

    an element known to one digit less than the ambient precision.
    """

    domain_ring: RingSpec
    image_ring: RingSpec
    images: Dict[str, Element]
    zeta: Dict[str, Dict[str, Element]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        dom, img = self.domain_ring, self.image_ring
        if dom.modulus != img.modulus:
            raise ValueError("domain and image rings disagree on the modulus")
        if dom.modulus.N < 2:
            raise ZetaUndefined(
                "dividing the differential by p needs precision at least 2"
            )
        if dom.pd_gens or img.pd_gens:
            raise ValueError("relative Frobenius is defined on polynomial rings")
        if len(dom.ordinary_gens) != len(img.ordinary_gens):
            raise ValueError("coordinate counts differ")
        p = dom.modulus.p
        for gp, g in zip(dom.ordinary_gens, img.ordinary_gens):
            if gp not in self.images:
                raise ValueError(f"no image for coordinate {gp!r}")
            e = self.images[gp]
            if e.ring != img:
                raise ValueError(f"image of {gp!r} lives in the wrong ring")
            diff = e - img.gen(g) ** p
            if not all(
                c.residue % p == 0 for c in diff.terms.values()
            ):
                raise ValueError(
                    f"image of {gp!r} is not {g}^p mod p; not a relative Frobenius"
                )
        if not self.zeta:
            zeta: Dict[str, Dict[str, Element]] = {}
            for gp in dom.ordinary_gens:
                row: Dict[str, Element] = {}
                for g in img.ordinary_gens:
                    d = partial_derivative(self.images[gp], g)
                    if d.is_zero():
                        continue
                    try:
                        row[g] = exact_div_p_elem(d, 1)
                    except NotDivisible as exc:
                        raise ZetaUndefined(
                            f"d({gp})/d{g} is not divisible by p: {exc}"
                        ) from exc
                zeta[gp] = row
            self.zeta = zeta

    @property
    def prime(self) -> int:
        return self.domain_ring.modulus.p

    def coordinate_pairs(self) -> List[Tuple[str, str]]:
        """(primed, unprimed) coordinate names, matched by position."""
        return list(zip(self.domain_ring.ordinary_gens, self.image_ring.ordinary_gens))

    def pushforward(self, a: Element) -> Element:
        """Substitute the images into an element of the primed ring."""
        return substitute(a, self.images, target=self.image_ring)

    @classmethod
    def from_lift(cls, lift: FrobeniusLift) -> "RelativeFrobenius":
        """Split a Frobenius lift into a map from a primed coordinate copy."""
        ring = lift.ring
        if ring.pd_gens:
            raise ValueError("relative Frobenius is defined on polynomial rings")
        taken = set(ring.ordinary_gens)
        primed = []
        for g in ring.ordinary_gens:
            name = g + "p"
            while name in taken:
                name += "_"
            taken.add(name)
            primed.append(name)
        domain = RingSpec(
            ordinary_gens=tuple(primed),
            pd_gens=(),
            modulus=ring.modulus,
            poly_degree_cap=ring.poly_degree_cap,
            pd_degree_cap=ring.pd_degree_cap,
        )
        images = {
            name: lift.images[g] for name, g in zip(primed, ring.ordinary_gens)
        }
        return cls(domain_ring=domain, image_ring=ring, images=images)


def _require_canonical_twist(conn: PConnection, what: str) -> None:
    ring = conn.ring
    if conn.coordinates != ring.all_gens():
        raise ValueError(f"{what} needs coordinates equal to the ring generators")
    p = ring.modulus.p
    for g in ring.ordinary_gens:
        row = conn.gen_differentials.get(g, {})
        live = {x for x, e in row.items() if not e.is_zero()}
        ok = live <= {g} and (
            g not in row or equal_reduced(row.get(g, ring.zero()), ring.constant(p))
        )
        if not ok:
            raise ValueError(
                f"{what} needs the canonical p-twisted derivative, "
                f"but d'{g} is nonstandard"
            )


# -- F-transform and p-transform ------------------------------------------------


def f_transform(rf: RelativeFrobenius, pconn: PConnection) -> PConnection:
    """Untwisted connection induced on the pullback along F.

    The derivative of a pulled-back function picks up the contraction
    zeta in place of the divided twist, so the result obeys the plain
    Leibniz rule with matrices

        A[x] = sum_k F(A'[x'_k]) * zeta[x'_k][x].

    zeta carries one digit less than the ambient precision, so the
    matrix entries of the result do too; scale by p (the p-transform)
    to restore full precision.
    """
    if pconn.ring != rf.domain_ring:
        raise ValueError("p-connection does not live on the Frobenius domain")
    _require_canonical_twist(pconn, "the F-transform")
    img = rf.image_ring
    n = pconn.rank
    matrices: Dict[str, EMatrix] = {}
    for x in img.ordinary_gens:
        acc: Optional[EMatrix] = None
        for xp in rf.domain_ring.ordinary_gens:
            amat = pconn.matrix(xp)
            if amat is None:
                continue
            z = rf.zeta[xp].get(x)
            if z is None:
                continue
            pushed = [
                [rf.pushforward(entry) * z for entry in row] for row in amat
            ]
            acc = pushed if acc is None else _e_add(acc, pushed)
        if acc is not None and not _e_is_zero(acc):
            matrices[x] = acc
    return polynomial_connection(img, rank=n, matrices=matrices)


def p_transform(conn: PConnection) -> PConnection:
    """Scale a connection by p, turning d into the p-twisted d'."""
    p = conn.ring.modulus.p
    return PConnection(
        ring=conn.ring,
        coordinates=conn.coordinates,
        gen_differentials={
            g: {x: e.scale(p) for x, e in row.items()}
            for g, row in conn.gen_differentials.items()
        },
        rank=conn.rank,
        matrices={
            x: [[e.scale(p) for e in row] for row in mat]
            for x, mat in conn.matrices.items()
        },
        weights=dict(conn.weights),
    )


def phi_pullback_matrices(
    rf: RelativeFrobenius, pconn: PConnection
) -> Dict[str, EMatrix]:
    """Matrices of the pullback p-connection, full precision.

    Contracting with the undivided Jacobian d(F x'_k)/dx instead of
    zeta avoids the division by p, so these entries keep all digits.
    """
    if pconn.ring != rf.domain_ring:
        raise ValueError("p-connection does not live on the Frobenius domain")
    img = rf.image_ring
    out: Dict[str, EMatrix] = {}
    for x in img.ordinary_gens:
        acc: Optional[EMatrix] = None
        for xp in rf.domain_ring.ordinary_gens:
            amat = pconn.matrix(xp)
            if amat is None:
                continue
            jac = partial_derivative(rf.images[xp], x)
            if jac.is_zero():
                continue
            pushed = [
                [rf.pushforward(entry) * jac for entry in row] for row in amat
            ]
            acc = pushed if acc is None else _e_add(acc, pushed)
        if acc is not None:
            out[x] = acc
    return out


def pullback_factorization_failures(
    rf: RelativeFrobenius, pconn: PConnection
) -> List[str]:
    """Obstructions to p o F-transform = pullback, entry by entry.

    The composite of the two transforms must reproduce the pullback
    p-connection exactly: the twist rules become d'x = p dx and the
    matrices match the Jacobian contraction at full precision.
    """
    composite = p_transform(f_transform(rf, pconn))
    expected = phi_pullback_matrices(rf, pconn)
    img = rf.image_ring
    failures = []
    for g in img.ordinary_gens:
        row = composite.gen_differentials.get(g, {})
        if not equal_reduced(row.get(g, img.zero()), img.constant(img.modulus.p)):
            failures.append(f"composite twist rule for {g} is not p dg")
    n = composite.rank
    for x in img.ordinary_gens:
        got = composite.matrix(x) or _e_zero(img, n, n)
        want = expected.get(x) or _e_zero(img, n, n)
        for i in range(n):
            for j in range(n):
                if not equal_reduced(got[i][j], want[i][j]):
                    failures.append(
                        f"matrix entry ({i},{j}) in d{x}: "
                        f"{got[i][j].render()} vs {want[i][j].render()}"
                    )
    return failures


# -- the isogeny ---------------------------------------------------------------


def isogeny_maps(cx: FiniteComplex, cx_p: FiniteComplex) -> Tuple[ChainMap, ChainMap]:
    """Scaling chain maps between a complex and its p-scaled sibling.

    Both complexes share the graded module; cx_p must carry p times the
    differential of cx.  Degree q of the forward map multiplies by p^q,
    of the backward map by p^(m-q) for m the top degree, so the two
    composites are multiplication by p^m.
    """
    if cx.ranks != cx_p.ranks or cx.min_degree != cx_p.min_degree:
        raise ValueError("isogeny needs the same underlying graded module")
    p = cx.modulus.p
    m = len(cx.ranks) - 1
    forward = []
    backward = []
    for q in range(m + 1):
        n = cx.ranks[q]
        b = identity_matrix(n)
        bt = identity_matrix(n)
        for i in range(n):
            b[i][i] = pow(p, q, cx.modulus.cardinality)
            bt[i][i] = pow(p, m - q, cx.modulus.cardinality)
        forward.append(b)
        backward.append(bt)
    return (
        ChainMap(source=cx, target=cx_p, blocks=tuple(forward)),
        ChainMap(source=cx_p, target=cx, blocks=tuple(backward)),
    )


def _assert_full_precision(e: Element) -> None:
    N = e.ring.modulus.N
    for mono, c in e.terms.items():
        if c.residue != 0 and c.precision < N:
            raise PrecisionExhausted(
                f"comparison coefficient of {mono} known only mod p^{c.precision}"
            )


def _zeta_wedge_columns(
    domain_gens: Tuple[str, ...],
    zeta: Mapping[str, Mapping[str, Element]],
    source: DeRhamComplex,
    target: DeRhamComplex,
    q: int,
    scale_power: int,
    pushforward,
) -> Matrix:
    """Matrix of p^scale_power * (q-fold zeta wedge) o pushforward.

    zeta rows must already live in the target coefficient ring.
    """
    img = target.connection.ring
    p = img.modulus.p
    rank = source.connection.rank
    coords = list(img.ordinary_gens)
    block = zero_matrix(target.rank(q), source.rank(q))
    one = Scalar(1, source.connection.ring.modulus)
    for col, (mono, slot, wedge) in enumerate(source.basis(q)):
        base = pushforward(Element(source.connection.ring, {mono: one}))
        if base.truncated:
            raise WindowOverflow(
                "pushforward left the image ring caps; raise poly_degree_cap"
            )
        parts: Dict[Tuple[int, ...], List[Element]] = {
            (): [img.zero()] * rank
        }
        parts[()][slot] = base
        for k in wedge:
            xp = domain_gens[k]
            new: Dict[Tuple[int, ...], List[Element]] = {}
            for held, comps in parts.items():
                for l, x in enumerate(coords):
                    z = zeta[xp].get(x)
                    if z is None or l in held:
                        continue
                    sign = -1 if sum(1 for t in held if t > l) % 2 else 1
                    grown = tuple(sorted(held + (l,)))
                    bucket = new.setdefault(grown, [img.zero()] * rank)
                    for i in range(rank):
                        if comps[i].is_zero():
                            continue
                        piece = comps[i] * z
                        bucket[i] = (
                            bucket[i] + piece if sign > 0 else bucket[i] - piece
                        )
            parts = new
        scaled: Dict[Tuple[int, ...], List[Element]] = {}
        for held, comps in parts.items():
            row = []
            for e in comps:
                e = e.scale(pow(p, scale_power)) if scale_power else e
                if e.truncated:
                    raise WindowOverflow(
                        "zeta wedge left the image ring caps; raise poly_degree_cap"
                    )
                _assert_full_precision(e)
                row.append(e)
            scaled[held] = row
        vec = target.vector_of(q, scaled)
        for r, v in enumerate(vec):
            block[r][col] = v
    return block


def frobenius_comparison(
    rf: RelativeFrobenius,
    window_cap: int,
    pconn: Optional[PConnection] = None,
) -> ChainMap:
    """Chain map from the primed twisted complex into the pushforward.

    Degree q multiplies by p^q times the q-fold wedge of zeta after
    substituting F, landing in the twisted window complex of the
    pullback p-connection over a window of cap p * window_cap.  The
    scaling restores the digit zeta loses, so the map is exact at full
    precision; its cone measures the failure of the two complexes to
    be equal, and is killed by p^(number of coordinates).

    Coefficient bundles must be matrix-free here: a nonzero matrix
    keeps polynomial degree while the staircase window shrinks, so the
    window complex would not close under its differential.  Matrix
    coefficients are handled mod p by check_pushforward_quasi_iso.
    """
    dom, img = rf.domain_ring, rf.image_ring
    if pconn is None:
        pconn = polynomial_p_connection(dom)
    if dom.poly_degree_cap < window_cap:
        raise WindowTooSmall("domain ring caps are below the requested window")
    if img.poly_degree_cap < rf.prime * window_cap:
        raise WindowTooSmall(
            "image ring caps cannot hold the pushforward window "
            f"(need {rf.prime * window_cap})"
        )
    source = build_p_derham(pconn, cap=window_cap)
    pulled = p_transform(f_transform(rf, pconn))
    target = build_p_derham(pulled, cap=rf.prime * window_cap)
    m = len(dom.ordinary_gens)
    blocks = tuple(
        _zeta_wedge_columns(
            dom.ordinary_gens, rf.zeta, source, target, q, q, rf.pushforward
        )
        for q in range(m + 1)
    )
    return ChainMap(source=source.complex, target=target.complex, blocks=blocks)


@dataclass
class IsogenyReport:
    passed: bool
    top_power: int
    cone_exponents: Dict[int, Tuple[int, ...]]
    detail: str = ""


def check_frobenius_isogeny(
    rf: RelativeFrobenius,
    window_cap: int,
    pconn: Optional[PConnection] = None,
) -> IsogenyReport:
    """Cone of the comparison map is killed by p^m, m = coordinate count."""
    c = frobenius_comparison(rf, window_cap, pconn)
    cone = mapping_cone(c)
    groups = all_cohomology(cone)
    m = len(rf.domain_ring.ordinary_gens)
    exps = {q: g.exponents for q, g in groups.items()}
    bad = [
        (q, e)
        for q, g in groups.items()
        for e in g.exponents
        if e > m
    ]
    detail = ""
    if bad:
        q, e = bad[0]
        detail = f"cone class of order p^{e} in degree {q} survives p^{m}"
    return IsogenyReport(
        passed=not bad, top_power=m, cone_exponents=exps, detail=detail
    )


# -- p-curvature -----------------------------------------------------------------


def p_curvature(conn: PConnection) -> Dict[str, EMatrix]:
    """Matrix of the p-th power of each coordinate connection operator.

    Works over a mod-p polynomial coefficient ring, where the p-th
    power of the coordinate derivation vanishes; the p-fold symbolic
    composition of (d/dx + A) then collapses to multiplication by a
    single matrix, returned per coordinate.  The intermediate orders
    1..p-1 must cancel (this is what makes the operator linear over
    p-th powers); a nonzero residue there is raised, not returned.
    """
    ring = conn.ring
    if ring.modulus.N != 1:
        raise ValueError("p-curvature is a mod-p operator; reduce to precision 1")
    if ring.pd_gens:
        raise ValueError(
            "divided-power generators have nonvanishing p-th partials; "
            "use a polynomial coefficient ring"
        )
    if conn.coordinates != ring.all_gens():
        raise ValueError("coordinates must be the ring generators")
    for g in ring.ordinary_gens:
        row = conn.gen_differentials.get(g, {})
        live = {x for x, e in row.items() if not e.is_zero()}
        if live != {g} or not equal_reduced(row[g], ring.one()):
            raise ValueError(
                "p-curvature needs the untwisted exterior derivative "
                f"(d{g} = dg); apply the F-transform first"
            )
    p = ring.modulus.p
    n = conn.rank
    out: Dict[str, EMatrix] = {}
    for coord in conn.coordinates:
        amat = conn.matrix(coord) or _e_zero(ring, n, n)
        powers: Dict[int, EMatrix] = {0: _e_identity(ring, n)}
        for _ in range(p):
            new: Dict[int, EMatrix] = {}

            def bump(e: int, mat: EMatrix) -> None:
                new[e] = _e_add(new[e], mat) if e in new else mat

            for e, bmat in powers.items():
                db = [
                    [partial_derivative(x, coord) for x in row] for row in bmat
                ]
                bump(e, _e_add(db, _e_mul(amat, bmat)))
                bump(e + 1, bmat)
            powers = new
            for bmat in powers.values():
                _e_assert_untruncated(bmat, "the operator composition")
        top = powers.get(p, _e_zero(ring, n, n))
        if not _e_equal(top, _e_identity(ring, n)):
            raise ArithmeticError("leading symbol of the p-th power is wrong")
        for i in range(1, p):
            stray = powers.get(i)
            if stray is not None and not _e_is_zero(stray):
                raise ArithmeticError(
                    f"p-th power keeps a derivation term of order {i}; "
                    "the operator is not linear over p-th powers"
                )
        out[coord] = powers.get(0, _e_zero(ring, n, n))
    return out


@dataclass
class CurvatureData:
    """Mod-p matrices entering the curvature formula, per coordinate."""

    psi: Dict[str, EMatrix]
    theta_source: Dict[str, EMatrix]
    theta_pullback: Dict[str, EMatrix]


@dataclass
class CurvatureReport:
    passed: bool
    data: CurvatureData
    failures: List[str]


def check_pcurvature_formula(
    rf: RelativeFrobenius, pconn: PConnection
) -> CurvatureReport:
    """p-curvature of the transform from the transform data alone.

    Mod p, with Theta the transformed matrices and theta' the source
    matrices, the p-curvature of the transformed connection in the
    coordinate paired with x'_k must equal

        Theta[x]^p - F(theta'[x'_k]),

    an exact matrix identity.  The report also verifies that the psi
    matrices commute with each other and with every Theta.
    """
    if pconn.ring != rf.domain_ring:
        raise ValueError("p-connection does not live on the Frobenius domain")
    _require_canonical_twist(pconn, "the curvature formula")
    dom1 = rf.domain_ring.at_precision(1)
    img1 = rf.image_ring.at_precision(1)
    n = pconn.rank
    theta_source = {
        xp: _e_map_to(pconn.matrix(xp) or _e_zero(rf.domain_ring, n, n), dom1)
        for xp in dom1.ordinary_gens
    }
    images1 = {gp: e.map_to(img1) for gp, e in rf.images.items()}
    theta_pullback: Dict[str, EMatrix] = {}
    for l, x in enumerate(img1.ordinary_gens):
        acc = _e_zero(img1, n, n)
        for xp in dom1.ordinary_gens:
            z = rf.zeta[xp].get(x)
            if z is None:
                continue
            z1 = z.map_to(img1)
            pushed = _e_subst(theta_source[xp], images1, img1)
            acc = _e_add(acc, [[e * z1 for e in row] for row in pushed])
        _e_assert_untruncated(acc, "the transformed twist matrix")
        theta_pullback[x] = acc
    conn1 = polynomial_connection(
        img1,
        rank=n,
        matrices={x: m for x, m in theta_pullback.items() if not _e_is_zero(m)},
    )
    psi = p_curvature(conn1)
    failures: List[str] = []
    for xp, x in rf.coordinate_pairs():
        power = _e_pow(theta_pullback[x], img1.modulus.p, img1)
        _e_assert_untruncated(power, "the matrix p-th power")
        rhs = _e_sub(power, _e_subst(theta_source[xp], images1, img1))
        if not _e_equal(psi[x], rhs):
            failures.append(f"curvature formula fails in the coordinate {x}")
    coords = list(img1.ordinary_gens)
    for x, y in combinations(coords, 2):
        ab, ba = _e_mul(psi[x], psi[y]), _e_mul(psi[y], psi[x])
        _e_assert_untruncated(ab, "the psi product")
        if not _e_equal(ab, ba):
            failures.append(f"psi matrices in {x} and {y} do not commute")
    for x in coords:
        for y in coords:
            lhs = _e_mul(psi[x], theta_pullback[y])
            rhs = _e_mul(theta_pullback[y], psi[x])
            _e_assert_untruncated(lhs, "the psi-twist product")
            if not _e_equal(lhs, rhs):
                failures.append(
                    f"psi in {x} does not commute with the twist matrix in {y}"
                )
    data = CurvatureData(
        psi=psi, theta_source=theta_source, theta_pullback=theta_pullback
    )
    return CurvatureReport(passed=not failures, data=data, failures=failures)


# -- the Cartier identity --------------------------------------------------------


def cartier_identity_check(
    rf: RelativeFrobenius,
    omega: Mapping[str, Element],
    claimed: Mapping[str, Element],
) -> bool:
    """Verify a claimed Cartier image of a closed mod-p 1-form.

    omega maps unprimed coordinates to mod-p coefficients f_x of f_x dx;
    claimed maps primed coordinates to the coefficients of the claimed
    image.  The defining identity pairs both sides with a coordinate
    derivation D: substituting F into the claimed coefficient must give
    minus the (p-1)-fold D-derivative of the matching coefficient of
    omega.  Only closed forms have a Cartier image; closedness is
    checked first.
    """
    img1 = rf.image_ring.at_precision(1)
    dom1 = rf.domain_ring.at_precision(1)
    p = img1.modulus.p
    fs = {
        x: (omega[x].map_to(img1) if x in omega else img1.zero())
        for x in img1.ordinary_gens
    }
    for x, y in combinations(img1.ordinary_gens, 2):
        if not equal_reduced(
            partial_derivative(fs[y], x), partial_derivative(fs[x], y)
        ):
            raise NotClosed(f"d omega has a nonzero dx_{x} dx_{y} component")
    images1 = {gp: e.map_to(img1) for gp, e in rf.images.items()}
    ok = True
    for xp, x in rf.coordinate_pairs():
        g = claimed.get(xp)
        g1 = img1.zero() if g is None else substitute(
            g.map_to(dom1) if g.ring != dom1 else g, images1, target=img1
        )
        rhs = fs[x]
        for _ in range(p - 1):
            rhs = partial_derivative(rhs, x)
        if not equal_reduced(g1, -rhs):
            ok = False
    return ok


# -- mod-p pushforward comparison -------------------------------------------------


@dataclass
class ComparisonReport:
    passed: bool
    source_dims: List[int]
    target_dims: List[int]
    quasi_iso: QuasiIsoReport
    detail: str = ""


def check_pushforward_quasi_iso(
    rf: RelativeFrobenius,
    pconn: PConnection,
    window_cap: int,
) -> ComparisonReport:
    """The zeta wedge is a mod-p quasi-isomorphism onto the pushforward.

    Mod p the twisted complex of the primed side keeps only its matrix
    part, while the pushforward of the transformed untwisted complex is
    finite over the primed ring with basis the coordinate powers below
    p.  Both are assembled as uniform-window complexes (the mod-p
    differentials never lower the window grading, so the high span is a
    genuine quotient) and the wedge map is checked to be a
    quasi-isomorphism via its cone.
    """
    if pconn.ring != rf.domain_ring:
        raise ValueError("p-connection does not live on the Frobenius domain")
    _require_canonical_twist(pconn, "the pushforward comparison")
    dom1 = rf.domain_ring.at_precision(1)
    img1 = rf.image_ring.at_precision(1)
    p = img1.modulus.p
    m = len(dom1.ordinary_gens)
    n = pconn.rank
    if dom1.poly_degree_cap < window_cap:
        raise WindowTooSmall("domain ring caps are below the requested window")
    need = m * (p - 1) + p * window_cap
    if img1.poly_degree_cap < need:
        raise WindowTooSmall(
            f"image ring caps cannot hold the pushforward basis (need {need})"
        )

    theta1 = {
        xp: _e_map_to(mat, dom1)
        for xp, mat in pconn.matrices.items()
        if not _e_is_zero(mat)
    }
    source_conn = polynomial_p_connection(dom1, rank=n, matrices=theta1)
    source_window = window_monomials(dom1, window_cap)
    source = build_p_derham(
        source_conn,
        cap=window_cap,
        clip=True,
        windows=[source_window] * (m + 1),
    )

    images1 = {gp: e.map_to(img1) for gp, e in rf.images.items()}
    zeta1 = {
        xp: {x: z.map_to(img1) for x, z in row.items()}
        for xp, row in rf.zeta.items()
    }
    theta_pullback: Dict[str, EMatrix] = {}
    for x in img1.ordinary_gens:
        acc = _e_zero(img1, n, n)
        for xp in dom1.ordinary_gens:
            z = zeta1[xp].get(x)
            if z is None:
                continue
            pushed = _e_subst(
                theta1.get(xp, _e_zero(dom1, n, n)), images1, img1
            )
            acc = _e_add(acc, [[e * z for e in row] for row in pushed])
        if not _e_is_zero(acc):
            theta_pullback[x] = acc
    target_conn = polynomial_connection(img1, rank=n, matrices=theta_pullback)
    shaped = [
        mono
        for mono in window_monomials(img1, need)
        if sum(e // p for e in mono.ordinary) <= window_cap
    ]
    target = build_p_derham(
        target_conn, cap=need, clip=True, windows=[shaped] * (m + 1)
    )

    def push(a: Element) -> Element:
        return substitute(a, images1, target=img1)

    blocks = tuple(
        _zeta_wedge_columns(
            dom1.ordinary_gens, zeta1, source, target, q, 0, push
        )
        for q in range(m + 1)
    )
    cmap = ChainMap(source=source.complex, target=target.complex, blocks=blocks)
    qi = is_strict_quasi_iso(cmap)
    sdims = fp_cohomology_dims(source.complex)
    tdims = fp_cohomology_dims(target.complex)
    detail = "" if qi.passed else qi.detail
    return ComparisonReport(
        passed=qi.passed,
        source_dims=sdims,
        target_dims=tdims,
        quasi_iso=qi,
        detail=detail,
    )


# -- the conormal comparison -------------------------------------------------------


@dataclass
class CotangentReport:
    passed: bool
    quasi_iso: QuasiIsoReport
    detail: str = ""


def cotangent_comparison(
    ambient: FrobeniusLift,
    cut_gens: Sequence[str],
    cap: int,
) -> CotangentReport:
    """Two-term conormal complex versus the truncated envelope complex.

    The conormal module of the cut locus (together with the class of p)
    maps to the mod-p divided-power envelope by sending the class of p
    to 1 and the class of a cut coordinate to its divided generator.
    Against the ambient differentials this is a chain map into the
    shift of the envelope window complex, truncated at its second
    term's cycles, and the check asserts it is a quasi-isomorphism.
    Windows follow the conormal weights: the class of p has weight 0,
    coordinate classes and differentials weight 1.
    """
    ring = ambient.ring
    if ring.pd_gens:
        raise ValueError("the conormal comparison wants a polynomial ambient ring")
    p = ring.modulus.p
    cut = tuple(cut_gens)
    if len(set(cut)) != len(cut):
        raise ValueError("duplicate cut generator")
    for g in cut:
        if g not in ring.ordinary_gens:
            raise ValueError(f"cut generator {g!r} is not an ambient coordinate")
    if cap < 1:
        raise ValueError("window cap must be at least 1")
    survivors = tuple(g for g in ring.ordinary_gens if g not in cut)
    mod1 = Modulus(p, 1)

    taken = set(ring.ordinary_gens)
    t_names = []
    for g in cut:
        name = "t_" + g
        while name in taken:
            name += "_"
        taken.add(name)
        t_names.append(name)
    env1 = RingSpec(
        ordinary_gens=survivors,
        pd_gens=tuple(t_names),
        modulus=mod1,
        poly_degree_cap=max(cap, 1),
        pd_degree_cap=max(cap, 1),
    )
    rules = {
        t: {x: env1.one()} for t, x in zip(t_names, cut)
    }
    conn = PConnection(
        ring=env1,
        coordinates=ring.ordinary_gens,
        gen_differentials=rules,
        weights={g: 1 for g in env1.all_gens()},
    )
    dr = build_p_derham(conn, cap=cap)

    ox = RingSpec(
        ordinary_gens=survivors,
        pd_gens=(),
        modulus=mod1,
        poly_degree_cap=max(cap, 1),
        pd_degree_cap=0,
    )
    v_full = window_monomials(ox, cap)
    v_prev = window_monomials(ox, cap - 1)
    m = len(ring.ordinary_gens)
    r = len(cut)

    # degree -1: the class of p over the full window, one conormal class
    # per cut coordinate over the lower window; degree 0: one ambient
    # differential per coordinate over the lower window
    n_minus = len(v_full) + r * len(v_prev)
    n_zero = m * len(v_prev)
    dbar = zero_matrix(n_zero, n_minus)
    coord_index = {g: i for i, g in enumerate(ring.ordinary_gens)}
    col = len(v_full)
    for i, g in enumerate(cut):
        base = coord_index[g] * len(v_prev)
        for vi in range(len(v_prev)):
            dbar[base + vi][col] = 1
            col += 1
    lhs = FiniteComplex(
        modulus=mod1,
        min_degree=-1,
        ranks=(n_minus, n_zero),
        differentials=(dbar,),
    )

    # target: envelope window complex shifted down once, second term
    # truncated to its cycles
    n0 = dr.rank(0)
    n1 = dr.rank(1)
    d0 = dr.differential(0)
    if m >= 2:
        d1 = dr.differential(1)
        kernel = fp_nullspace(d1, p)
        kdim = len(kernel)
        kmat = [[kernel[j][i] for j in range(kdim)] for i in range(n1)]
        new_diff = zero_matrix(kdim, n0)
        for j in range(n0):
            colv = [d0[i][j] for i in range(n1)]
            sol = fp_solve(kmat, colv, p)
            if sol is None:
                raise ArithmeticError("differential image escaped its cycles")
            for i in range(kdim):
                new_diff[i][j] = sol[i]
    else:
        kdim = n1
        kmat = identity_matrix(n1)
        new_diff = d0
    rhs = FiniteComplex(
        modulus=mod1,
        min_degree=-1,
        ranks=(n0, kdim),
        differentials=(new_diff,),
    )

    surv_count = len(survivors)
    block_minus = zero_matrix(n0, n_minus)
    for vi, v in enumerate(v_full):
        mono = Monomial(v.ordinary, (0,) * r)
        block_minus[dr.index_of(0, (mono, 0, ()))][vi] = 1
    col = len(v_full)
    for i in range(r):
        pd = tuple(1 if j == i else 0 for j in range(r))
        for v in v_prev:
            mono = Monomial(v.ordinary, pd)
            block_minus[dr.index_of(0, (mono, 0, ()))][col] = 1
            col += 1
    block_zero = zero_matrix(kdim, n_zero)
    for k in range(m):
        for vi, v in enumerate(v_prev):
            mono = Monomial(v.ordinary, (0,) * r)
            vec = [0] * n1
            vec[dr.index_of(1, (mono, 0, (k,)))] = 1
            sol = fp_solve(kmat, vec, p)
            if sol is None:
                raise ArithmeticError("comparison image is not a cycle")
            for i in range(kdim):
                block_zero[i][k * len(v_prev) + vi] = sol[i]

    cmap = ChainMap(source=lhs, target=rhs, blocks=(block_minus, block_zero))
    qi = is_strict_quasi_iso(cmap)
    return CotangentReport(
        passed=qi.passed, quasi_iso=qi, detail="" if qi.passed else qi.detail
    )
