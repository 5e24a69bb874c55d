"""Frobenius transforms: frozen fixtures and oracle cross-checks."""

import pytest

from prism_forge.padic import Modulus
from prism_forge.pdpoly import Element, Monomial, RingSpec, equal_reduced
from prism_forge.deltaring import FrobeniusLift
from prism_forge.derham import (
    apply_pconnection,
    build_p_derham,
    polynomial_connection,
    polynomial_p_connection,
)
from prism_forge.homology import all_cohomology, mapping_cone, mat_mul
from prism_forge.transforms import (
    NotClosed,
    RelativeFrobenius,
    WindowTooSmall,
    ZetaUndefined,
    cartier_identity_check,
    check_frobenius_isogeny,
    check_pcurvature_formula,
    check_pushforward_quasi_iso,
    cotangent_comparison,
    f_transform,
    frobenius_comparison,
    isogeny_maps,
    p_curvature,
    p_transform,
    phi_pullback_matrices,
    pullback_factorization_failures,
)


def line_frobenius(p, N, cap=30):
    ring = RingSpec(("x",), (), Modulus(p, N), cap, 0)
    lift = FrobeniusLift(ring=ring, images={"x": ring.gen("x") ** p})
    return RelativeFrobenius.from_lift(lift)


def plane_frobenius(p, N, cap=12, twist=False):
    ring = RingSpec(("x", "y"), (), Modulus(p, N), cap, 0)
    images = {"x": ring.gen("x") ** p, "y": ring.gen("y") ** p}
    if twist:
        # phi(x) = x^p + p y stays a lift but gives zeta a cross term
        images["x"] = images["x"] + ring.gen("y").scale(p)
    lift = FrobeniusLift(ring=ring, images=images)
    return RelativeFrobenius.from_lift(lift)


class TestRelativeFrobenius:
    def test_zeta_of_the_power_map(self):
        rf = line_frobenius(3, 3)
        assert rf.domain_ring.ordinary_gens == ("xp",)
        z = rf.zeta["xp"]["x"]
        assert equal_reduced(z, rf.image_ring.gen("x") ** 2)
        # one digit is spent on the division
        assert z.min_precision() == 2

    def test_cross_term_zeta(self):
        rf = plane_frobenius(2, 3, twist=True)
        assert equal_reduced(rf.zeta["xp"]["x"], rf.image_ring.gen("x"))
        assert equal_reduced(rf.zeta["xp"]["y"], rf.image_ring.one())
        assert "x" not in rf.zeta["yp"]

    def test_requires_two_digits(self):
        ring = RingSpec(("x",), (), Modulus(3, 1), 12, 0)
        with pytest.raises(ZetaUndefined, match="precision"):
            RelativeFrobenius(
                domain_ring=ring,
                image_ring=ring,
                images={"x": ring.gen("x") ** 3},
            )

    def test_rejects_non_frobenius_images(self):
        ring = RingSpec(("x",), (), Modulus(3, 2), 12, 0)
        primed = RingSpec(("u",), (), Modulus(3, 2), 12, 0)
        with pytest.raises(ValueError, match="not a relative Frobenius"):
            RelativeFrobenius(
                domain_ring=primed,
                image_ring=ring,
                images={"u": ring.gen("x") ** 2},
            )

    def test_pushforward_substitutes(self):
        rf = line_frobenius(2, 2)
        xp = rf.domain_ring.gen("xp")
        assert rf.pushforward(xp**2) == rf.image_ring.gen("x") ** 4


class TestFTransform:
    def test_trivial_goes_to_trivial(self):
        rf = line_frobenius(3, 3)
        conn = f_transform(rf, polynomial_p_connection(rf.domain_ring))
        assert conn.matrices == {}
        # untwisted rule d x = dx
        assert conn.gen_differentials["x"]["x"] == rf.image_ring.one()

    def test_unit_twist_becomes_power_matrix(self):
        # theta' = dx' turns into x^(p-1) dx
        for p in (2, 3, 5):
            rf = line_frobenius(p, 2)
            dom = rf.domain_ring
            conn = f_transform(
                rf,
                polynomial_p_connection(dom, matrices={"xp": [[dom.one()]]}),
            )
            want = rf.image_ring.gen("x") ** (p - 1)
            assert equal_reduced(conn.matrices["x"][0][0], want)

    def test_rejects_foreign_connection(self):
        rf = line_frobenius(3, 2)
        with pytest.raises(ValueError, match="Frobenius domain"):
            f_transform(rf, polynomial_p_connection(rf.image_ring))

    def test_rejects_untwisted_source(self):
        rf = line_frobenius(3, 2)
        with pytest.raises(ValueError, match="canonical p-twisted"):
            f_transform(rf, polynomial_connection(rf.domain_ring))


class TestPTransform:
    def test_scales_rules_and_matrices(self):
        ring = RingSpec(("x",), (), Modulus(3, 3), 10, 0)
        conn = polynomial_connection(ring, matrices={"x": [[ring.gen("x")]]})
        scaled = p_transform(conn)
        assert scaled.gen_differentials["x"]["x"] == ring.constant(3)
        assert scaled.matrices["x"][0][0] == ring.gen("x").scale(3)

    def test_factorization_through_the_pullback(self):
        # p o F-transform = pullback, at full precision
        rf = line_frobenius(3, 3)
        dom = rf.domain_ring
        fixtures = [
            {},
            {"xp": [[dom.one()]]},
            {"xp": [[dom.gen("xp") ** 2]]},
        ]
        for mats in fixtures:
            pc = polynomial_p_connection(dom, matrices=mats)
            assert pullback_factorization_failures(rf, pc) == []

    def test_factorization_with_cross_terms(self):
        rf = plane_frobenius(2, 3, twist=True)
        dom = rf.domain_ring
        pc = polynomial_p_connection(dom, matrices={"xp": [[dom.gen("yp")]]})
        assert pullback_factorization_failures(rf, pc) == []

    def test_pullback_matrix_frozen(self):
        # theta' = dx', F = x^3: Jacobian contraction gives 3 x^2
        rf = line_frobenius(3, 3)
        dom = rf.domain_ring
        mats = phi_pullback_matrices(
            rf, polynomial_p_connection(dom, matrices={"xp": [[dom.one()]]})
        )
        want = (rf.image_ring.gen("x") ** 2).scale(3)
        assert equal_reduced(mats["x"][0][0], want)


class TestIsogeny:
    def composite_diagonal(self, f, g, q):
        comp = mat_mul(g.blocks[q], f.blocks[q], inner=f.source.ranks[q])
        return {comp[i][i] for i in range(len(comp))}, any(
            comp[i][j] for i in range(len(comp)) for j in range(len(comp)) if i != j
        )

    def test_composites_are_p_to_the_m(self):
        for gens in (("x",), ("x", "y")):
            ring = RingSpec(gens, (), Modulus(2, 4), 6, 0)
            m = len(gens)
            cu = build_p_derham(polynomial_connection(ring), cap=4)
            ct = build_p_derham(polynomial_p_connection(ring), cap=4)
            b, bt = isogeny_maps(cu.complex, ct.complex)
            for q in range(m + 1):
                diag, off = self.composite_diagonal(b, bt, q)
                assert diag == {2**m} and not off
                diag, off = self.composite_diagonal(bt, b, q)
                assert diag == {2**m} and not off

    def test_rejects_unrelated_complexes(self):
        ring = RingSpec(("x",), (), Modulus(3, 2), 8, 0)
        cu = build_p_derham(polynomial_connection(ring), cap=4)
        with pytest.raises(ValueError, match="commute"):
            isogeny_maps(cu.complex, cu.complex)

    def test_comparison_cone_killed_by_p(self):
        # hand-checked at p=2, N=2, window 1: the cone carries exactly
        # two Z/2 classes in degrees 0 and 1
        rf = line_frobenius(2, 2, cap=8)
        c = frobenius_comparison(rf, 1)
        groups = all_cohomology(mapping_cone(c))
        assert groups[-1].exponents == ()
        assert groups[0].exponents == (1, 1)
        assert groups[1].exponents == (1, 1)

    def test_isogeny_report_one_and_two_variables(self):
        rep = check_frobenius_isogeny(line_frobenius(3, 2, cap=12), 2)
        assert rep.passed and rep.top_power == 1
        rep2 = check_frobenius_isogeny(plane_frobenius(2, 3, cap=8), 1)
        assert rep2.passed and rep2.top_power == 2

    def test_comparison_with_rank_two_bundle(self):
        # matrix-free higher rank; nonzero matrices cannot respect a
        # staircase window at full precision
        rf = line_frobenius(2, 3, cap=10)
        pc = polynomial_p_connection(rf.domain_ring, rank=2)
        rep = check_frobenius_isogeny(rf, 2, pc)
        assert rep.passed

    def test_window_too_small(self):
        rf = line_frobenius(2, 2, cap=4)
        with pytest.raises(WindowTooSmall):
            frobenius_comparison(rf, 3)


class TestPCurvature:
    def mod_p_line(self, p, cap=60):
        return RingSpec(("x",), (), Modulus(p, 1), cap, 0)

    def test_flat_is_zero(self):
        for p in (2, 3, 5):
            ring = self.mod_p_line(p)
            psi = p_curvature(polynomial_connection(ring))
            assert psi["x"][0][0].is_zero()

    def test_constant_matrix_powers(self):
        # (d/dx + c)^p = d^p + c^p for constant commuting c
        ring = self.mod_p_line(3)
        c = ring.constant(2)
        psi = p_curvature(polynomial_connection(ring, matrices={"x": [[c]]}))
        assert psi["x"][0][0] == ring.constant(2**3)

    def test_power_twist_frozen(self):
        # nabla = d + x^(p-1) dx: psi = x^(p(p-1)) - 1
        for p in (2, 3, 5):
            ring = self.mod_p_line(p)
            x = ring.gen("x")
            psi = p_curvature(
                polynomial_connection(ring, matrices={"x": [[x ** (p - 1)]]})
            )
            want = x ** (p * (p - 1)) - ring.one()
            assert equal_reduced(psi["x"][0][0], want)

    def test_brute_force_operator_oracle(self):
        # the p-fold application of d/dx + A to a section must equal
        # multiplication by psi, monomial by monomial
        for p in (2, 3):
            ring = self.mod_p_line(p, cap=30)
            x = ring.gen("x")
            conn = polynomial_connection(
                ring, rank=2,
                matrices={"x": [[ring.zero(), x ** (p - 1)],
                                [ring.zero(), ring.zero()]]},
            )
            psi = p_curvature(conn)["x"]
            for d in range(5):
                for slot in range(2):
                    vec = [ring.zero(), ring.zero()]
                    vec[slot] = x**d
                    out = vec
                    for _ in range(p):
                        out = apply_pconnection(conn, "x", out)
                    want = [psi[i][slot] * (x**d) for i in range(2)]
                    for a, b in zip(out, want):
                        assert equal_reduced(a, b)

    def test_formula_rank_one_fixtures(self):
        for p, cap in ((2, 30), (3, 40), (5, 60)):
            rf = line_frobenius(p, 2, cap=cap)
            dom = rf.domain_ring
            for mats in ({}, {"xp": [[dom.one()]]}, {"xp": [[dom.gen("xp")]]}):
                pc = polynomial_p_connection(dom, matrices=mats)
                rep = check_pcurvature_formula(rf, pc)
                assert rep.passed, rep.failures

    def test_formula_frozen_values(self):
        rf = line_frobenius(3, 2, cap=40)
        dom = rf.domain_ring
        rep = check_pcurvature_formula(
            rf, polynomial_p_connection(dom, matrices={"xp": [[dom.one()]]})
        )
        x1 = rf.image_ring.at_precision(1)
        want = x1.gen("x") ** 6 - x1.one()
        assert rep.data.psi["x"][0][0] == want
        assert rep.data.theta_pullback["x"][0][0] == x1.gen("x") ** 2

    def test_formula_rank_two_nilpotent(self):
        rf = line_frobenius(3, 2, cap=40)
        dom = rf.domain_ring
        nil = [[dom.zero(), dom.one()], [dom.zero(), dom.zero()]]
        rep = check_pcurvature_formula(
            rf, polynomial_p_connection(dom, rank=2, matrices={"xp": nil})
        )
        assert rep.passed
        got = rep.data.psi["x"]
        assert got[0][0].is_zero() and got[1][0].is_zero() and got[1][1].is_zero()
        assert got[0][1] == -rf.image_ring.at_precision(1).one()

    def test_formula_two_variables(self):
        rf = plane_frobenius(3, 2, cap=24)
        dom = rf.domain_ring
        pc = polynomial_p_connection(
            dom, matrices={"xp": [[dom.one()]], "yp": [[dom.one()]]}
        )
        rep = check_pcurvature_formula(rf, pc)
        assert rep.passed, rep.failures

    def test_guards(self):
        ring = RingSpec(("x",), (), Modulus(3, 2), 10, 0)
        with pytest.raises(ValueError, match="precision 1"):
            p_curvature(polynomial_connection(ring))
        pd_ring = RingSpec((), ("t",), Modulus(3, 1), 0, 6)
        with pytest.raises(ValueError, match="polynomial"):
            p_curvature(polynomial_connection(pd_ring))
        ring1 = RingSpec(("x",), (), Modulus(3, 1), 10, 0)
        with pytest.raises(ValueError, match="untwisted"):
            p_curvature(polynomial_p_connection(ring1))

    def test_truncation_refused(self):
        from prism_forge.derham import WindowOverflow

        ring = RingSpec(("x",), (), Modulus(3, 1), 4, 0)
        x = ring.gen("x")
        with pytest.raises(WindowOverflow, match="caps"):
            p_curvature(polynomial_connection(ring, matrices={"x": [[x**2]]}))


class TestCartier:
    def test_power_forms(self):
        for p in (2, 3, 5):
            rf = line_frobenius(p, 2)
            x = rf.image_ring.gen("x")
            dom = rf.domain_ring
            assert cartier_identity_check(rf, {"x": x ** (p - 1)}, {"xp": dom.one()})
            assert cartier_identity_check(rf, {"x": rf.image_ring.one()}, {})
            assert cartier_identity_check(
                rf, {"x": x ** (2 * p - 1)}, {"xp": dom.gen("xp")}
            )

    def test_wrong_claim_fails(self):
        rf = line_frobenius(3, 2)
        x = rf.image_ring.gen("x")
        assert not cartier_identity_check(
            rf, {"x": x**2}, {"xp": rf.domain_ring.gen("xp")}
        )

    def test_two_variable_closed_form(self):
        rf = plane_frobenius(3, 2)
        img = rf.image_ring
        omega = {"x": img.gen("x") ** 2, "y": img.gen("y") ** 2}
        claimed = {"xp": rf.domain_ring.one(), "yp": rf.domain_ring.one()}
        assert cartier_identity_check(rf, omega, claimed)

    def test_not_closed_raises(self):
        rf = plane_frobenius(3, 2)
        with pytest.raises(NotClosed):
            cartier_identity_check(rf, {"x": rf.image_ring.gen("y")}, {})


class TestPushforwardComparison:
    def test_trivial_coefficients_window_eight(self):
        rf = line_frobenius(3, 2, cap=30)
        rep = check_pushforward_quasi_iso(
            rf, polynomial_p_connection(rf.domain_ring), 8
        )
        assert rep.passed
        # Cartier: both sides have one class per window monomial
        assert rep.source_dims == [9, 9]
        assert rep.target_dims == [9, 9]

    def test_rank_two_nilpotent(self):
        rf = line_frobenius(3, 2, cap=30)
        dom = rf.domain_ring
        nil = [[dom.zero(), dom.one()], [dom.zero(), dom.zero()]]
        rep = check_pushforward_quasi_iso(
            rf, polynomial_p_connection(dom, rank=2, matrices={"xp": nil}), 8
        )
        assert rep.passed
        assert rep.source_dims == rep.target_dims

    def test_zero_window_degenerate(self):
        rf = line_frobenius(2, 2, cap=10)
        rep = check_pushforward_quasi_iso(
            rf, polynomial_p_connection(rf.domain_ring), 0
        )
        assert rep.passed

    def test_cross_term_lift(self):
        rf = plane_frobenius(2, 3, cap=12, twist=True)
        rep = check_pushforward_quasi_iso(
            rf, polynomial_p_connection(rf.domain_ring), 2
        )
        assert rep.passed

    def test_window_too_small(self):
        rf = line_frobenius(3, 2, cap=10)
        with pytest.raises(WindowTooSmall):
            check_pushforward_quasi_iso(
                rf, polynomial_p_connection(rf.domain_ring), 8
            )


class TestCotangent:
    def point_in_line(self, p, N):
        ring = RingSpec(("x",), (), Modulus(p, N), 10, 10)
        return FrobeniusLift(ring=ring, images={"x": ring.gen("x") ** p})

    def test_point_in_the_line(self):
        for N in (2, 3):
            rep = cotangent_comparison(self.point_in_line(2, N), ("x",), cap=4)
            assert rep.passed, rep.detail

    def test_cut_one_of_two(self):
        ring = RingSpec(("x", "y"), (), Modulus(3, 3), 10, 10)
        lift = FrobeniusLift(
            ring=ring,
            images={"x": ring.gen("x") ** 3, "y": ring.gen("y") ** 3},
        )
        rep = cotangent_comparison(lift, ("x",), cap=4)
        assert rep.passed, rep.detail

    def test_cut_both_of_two(self):
        ring = RingSpec(("x", "y"), (), Modulus(2, 2), 8, 8)
        lift = FrobeniusLift(
            ring=ring,
            images={"x": ring.gen("x") ** 2, "y": ring.gen("y") ** 2},
        )
        rep = cotangent_comparison(lift, ("x", "y"), cap=3)
        assert rep.passed, rep.detail

    def test_no_cut_degenerate(self):
        ring = RingSpec(("x", "y"), (), Modulus(3, 2), 8, 8)
        lift = FrobeniusLift(
            ring=ring,
            images={"x": ring.gen("x") ** 3, "y": ring.gen("y") ** 3},
        )
        rep = cotangent_comparison(lift, (), cap=3)
        assert rep.passed, rep.detail

    def test_unknown_cut_rejected(self):
        with pytest.raises(ValueError, match="ambient coordinate"):
            cotangent_comparison(self.point_in_line(2, 2), ("z",), cap=3)
