"""Tiny recursive-descent parser for ring and polynomial expressions.

Rings are written "W[x,y]<t>": W is the coefficient ring Z/p^N, square
brackets hold ordinary generators, angle brackets hold divided-power
generators.  Polynomial expressions follow the grammar

    expr   := ("+" | "-")? term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := atom ("^" nat)?
    atom   := nat | "p" | name | "(" expr ")"

where the bare name p is reserved for the prime.  Frobenius images come
as arrow clauses, "x->x^3 + p*y".
"""

from __future__ import annotations

import re
from typing import Dict, List, Sequence, Tuple

from .padic import Modulus
from .pdpoly import Element, RingSpec

__all__ = ["ParseError", "parse_expression", "parse_image_map", "parse_ring"]


class ParseError(ValueError):
    """Input text does not match the grammar."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*^()])|(\S))")

_RING = re.compile(
    r"W(?:\[(?P<poly>[^\]]*)\])?(?:<(?P<pd>[^>]*)>)?\Z"
)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, op, junk = m.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r} in {text!r}")
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op is not None:
            tokens.append(("op", op))
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingSpec):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Tuple[str, str]:
        return self.tokens[self.pos]

    def take(self) -> Tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def expr(self) -> Element:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                out = out + nxt if val == "+" else out - nxt
            else:
                return out

    def term(self) -> Element:
        out = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.factor()
            else:
                return out

    def factor(self) -> Element:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a number in {self.text!r}")
            return base ** int(val)
        return base

    def atom(self) -> Element:
        kind, val = self.take()
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "name":
            if val == "p":
                return self.ring.constant(self.ring.modulus.p)
            if val not in self.ring.all_gens():
                raise ParseError(f"unknown generator {val!r} in {self.text!r}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            out = self.expr()
            self.expect_op(")")
            return out
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_expression(text: str, ring: RingSpec) -> Element:
    """One polynomial over the given ring."""
    parser = _Parser(text, ring)
    out = parser.expr()
    if parser.peek()[0] != "end":
        raise ParseError(f"trailing input in {text!r}")
    return out


def _split_names(raw: str, what: str) -> Tuple[str, ...]:
    names = tuple(n.strip() for n in raw.split(",")) if raw.strip() else ()
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n) or n == "p":
            raise ParseError(f"bad {what} generator name {n!r}")
    if len(set(names)) != len(names):
        raise ParseError(f"duplicate {what} generator")
    return names


def parse_ring(
    text: str, modulus: Modulus, poly_degree_cap: int, pd_degree_cap: int
) -> RingSpec:
    """Ring written as W, W[x,y], W<t>, or W[s]<t>."""
    m = _RING.match(text.strip())
    if m is None:
        raise ParseError(f"bad ring {text!r}; expected the shape W[x,y]<t>")
    poly = _split_names(m.group("poly") or "", "ordinary")
    pd = _split_names(m.group("pd") or "", "divided-power")
    if set(poly) & set(pd):
        raise ParseError("a generator cannot be both ordinary and divided-power")
    return RingSpec(
        ordinary_gens=poly,
        pd_gens=pd,
        modulus=modulus,
        poly_degree_cap=poly_degree_cap if poly else 0,
        pd_degree_cap=pd_degree_cap if pd else 0,
    )


def parse_image_map(
    clauses: Sequence[str], ring: RingSpec
) -> Dict[str, Element]:
    """Arrow clauses "x->x^3" into a generator-to-element mapping."""
    images: Dict[str, Element] = {}
    for clause in clauses:
        head, sep, body = clause.partition("->")
        if not sep:
            raise ParseError(f"image clause {clause!r} needs an arrow")
        g = head.strip()
        if g not in ring.all_gens():
            raise ParseError(f"unknown generator {g!r} in {clause!r}")
        if g in images:
            raise ParseError(f"generator {g!r} mapped twice")
        images[g] = parse_expression(body, ring)
    return images
