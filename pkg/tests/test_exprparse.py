"""Grammar coverage for the ring and expression parsers."""

import pytest

from prism_forge.padic import Modulus
from prism_forge.pdpoly import RingSpec
from prism_forge.exprparse import (
    ParseError,
    parse_expression,
    parse_image_map,
    parse_ring,
)


M = Modulus(3, 3)


def plane():
    return RingSpec(("x", "y"), (), M, 12, 0)


class TestRingGrammar:
    def test_polynomial_ring(self):
        ring = parse_ring("W[x,y]", M, 10, 8)
        assert ring.ordinary_gens == ("x", "y")
        assert ring.pd_gens == ()
        assert ring.poly_degree_cap == 10 and ring.pd_degree_cap == 0

    def test_pd_ring(self):
        ring = parse_ring("W<t1, t2>", M, 10, 8)
        assert ring.pd_gens == ("t1", "t2")
        assert ring.poly_degree_cap == 0

    def test_mixed_ring(self):
        ring = parse_ring(" W[s]<t> ", M, 10, 8)
        assert ring.ordinary_gens == ("s",)
        assert ring.pd_gens == ("t",)

    def test_bare_coefficients(self):
        ring = parse_ring("W", M, 10, 8)
        assert ring.all_gens() == ()

    @pytest.mark.parametrize(
        "bad",
        ["V[x]", "W[x", "W[x]extra", "W[x,x]", "W[p]", "W[1x]", "W[x]<x>"],
    )
    def test_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_ring(bad, M, 10, 8)


class TestExpressionGrammar:
    def test_arithmetic(self):
        ring = plane()
        x, y = ring.gen("x"), ring.gen("y")
        assert parse_expression("x^3 + p*y", ring) == x**3 + y.scale(3)
        assert parse_expression("2*x*y - y^2", ring) == (x * y).scale(2) - y**2
        assert parse_expression("-x + 4", ring) == ring.constant(4) - x
        assert parse_expression("(x + y)^2", ring) == (x + y) ** 2
        assert parse_expression("7", ring) == ring.constant(7)
        assert parse_expression("x^0", ring) == ring.one()

    def test_p_is_the_prime(self):
        assert parse_expression("p^2", plane()) == plane().constant(9)

    @pytest.mark.parametrize(
        "bad",
        ["", "x +", "z", "x^y", "x^", "(x", "x )", "x$", "x**2", "2x"],
    )
    def test_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_expression(bad, plane())

    def test_image_map(self):
        ring = plane()
        images = parse_image_map(["x->x^3", "y -> y^3 + p*x"], ring)
        assert images["x"] == ring.gen("x") ** 3
        assert images["y"] == ring.gen("y") ** 3 + ring.gen("x").scale(3)

    def test_image_map_rejects(self):
        ring = plane()
        with pytest.raises(ParseError, match="arrow"):
            parse_image_map(["x = x^3"], ring)
        with pytest.raises(ParseError, match="unknown"):
            parse_image_map(["z->x"], ring)
        with pytest.raises(ParseError, match="twice"):
            parse_image_map(["x->x", "x->x^3"], ring)
