import pytest

from prism_forge.padic import Modulus, PrecisionExhausted
from prism_forge.deltaring import (
    FrobeniusLift,
    NotAFrobeniusLift,
    apply_phi,
    check_delta_axioms,
    delta,
    delta_iterate,
    free_phi_ring,
)
from prism_forge.pdpoly import RingSpec, equal_reduced
from oracles import fermat_quotient_delta


def line_lift(p=2, N=3, extra=(), poly_cap=24):
    ring = RingSpec(("x",) + tuple(extra), (), Modulus(p, N), poly_cap, 0)
    images = {g: ring.gen(g) ** p for g in ring.ordinary_gens}
    return FrobeniusLift(ring, images)


class TestLiftValidation:
    def test_accepts_power_lift(self):
        line_lift()

    def test_rejects_wrong_congruence(self):
        ring = RingSpec(("x",), (), Modulus(2, 3), 8, 0)
        with pytest.raises(NotAFrobeniusLift):
            FrobeniusLift(ring, {"x": ring.gen("x") ** 2 + ring.one()})

    def test_rejects_missing_image(self):
        ring = RingSpec(("x", "y"), (), Modulus(2, 3), 8, 0)
        with pytest.raises(NotAFrobeniusLift):
            FrobeniusLift(ring, {"x": ring.gen("x") ** 2})

    def test_pd_generator_image_must_be_divisible(self):
        ring = RingSpec((), ("t",), Modulus(3, 3), 4, 6)
        with pytest.raises(NotAFrobeniusLift):
            FrobeniusLift(ring, {"t": ring.gen("t")})
        FrobeniusLift(ring, {"t": ring.gen("t").scale(3)})


class TestDelta:
    def test_shifted_argument(self):
        # p=2, phi(x)=x^2: delta(x+2) = -2x-1, i.e. 2x+3 mod 4
        lift = line_lift(p=2, N=3)
        ring = lift.ring
        out = delta(lift, ring.gen("x") + 2)
        want = (ring.gen("x").scale(2) + 3).reduce_precision(2)
        assert out == want

    def test_nontrivial_lift_iterates(self):
        # p=2, N=4, phi(y)=y^2+2y: delta(y) = y, and the second iterate is
        # still y, carried at precision 2 on its weakest tracked coefficient
        ring = RingSpec(("y",), (), Modulus(2, 4), 16, 0)
        lift = FrobeniusLift(ring, {"y": ring.gen("y") ** 2 + ring.gen("y").scale(2)})
        d1 = delta(lift, ring.gen("y"))
        assert d1 == ring.gen("y").reduce_precision(3)
        d2 = delta_iterate(lift, ring.gen("y"), 2)
        assert equal_reduced(d2, ring.gen("y"))
        assert d2.min_precision() == 2

    @pytest.mark.parametrize("p,N", [(2, 3), (3, 3), (5, 2)])
    def test_fermat_quotient_on_constants(self, p, N):
        lift = line_lift(p=p, N=N)
        ring = lift.ring
        for c in range(0, p ** N, max(1, p ** N // 7)):
            out = delta(lift, ring.constant(c))
            want = fermat_quotient_delta(c, p, N)
            assert out == ring.constant(want).reduce_precision(N - 1)

    def test_iteration_needs_headroom(self):
        lift = line_lift(p=2, N=2)
        with pytest.raises(PrecisionExhausted):
            delta_iterate(lift, lift.ring.gen("x"), 2)


class TestFreePhiRing:
    def test_tower_images(self):
        lift = free_phi_ring(Modulus(3, 4), names=("y",), level_cap=2)
        ring = lift.ring
        assert ring.ordinary_gens == ("y_0", "y_1", "y_2")
        assert delta(lift, ring.gen("y_0")) == ring.gen("y_1").reduce_precision(3)
        assert delta(lift, ring.gen("y_1")) == ring.gen("y_2").reduce_precision(3)
        assert delta(lift, ring.gen("y_2")).is_zero()

    def test_second_iterate(self):
        lift = free_phi_ring(Modulus(3, 4), names=("y",), level_cap=2)
        ring = lift.ring
        d2 = delta_iterate(lift, ring.gen("y_0"), 2)
        assert equal_reduced(d2, ring.gen("y_2"))
        assert d2.min_precision() == 2

    def test_phi_of_divided_tower(self):
        lift = free_phi_ring(Modulus(2, 3), names=2, level_cap=1)
        ring = lift.ring
        out = apply_phi(lift, ring.gen("u1_0") * ring.gen("u2_0"))
        want = (ring.gen("u1_0") ** 2 + ring.gen("u1_1").scale(2)) * (
            ring.gen("u2_0") ** 2 + ring.gen("u2_1").scale(2)
        )
        assert out == want


class TestAxiomSuite:
    def test_plain_lift_passes(self):
        report = check_delta_axioms(line_lift(p=3, N=3, extra=("y",), poly_cap=40),
                                    samples=25, seed=11)
        assert report.passed
        assert report.checked + report.skipped == 25

    def test_tower_lift_passes(self):
        lift = free_phi_ring(Modulus(2, 3), names=("a",), level_cap=1, poly_degree_cap=30)
        report = check_delta_axioms(lift, samples=25, seed=5)
        assert report.passed
