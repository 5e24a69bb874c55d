"""Sparse polynomial rings with divided-power generators over Z/p^N.

A ring spec declares ordinary generators (plain polynomial variables)
and divided-power generators u, whose monomials carry the weight-n
symbol u^[n] subject to u^[m] * u^[n] = C(m+n, n) * u^[m+n].  Elements
are immutable sparse maps from monomials to scalars.  Both total
ordinary degree and total divided-power weight are capped; products
falling outside the caps are dropped and the element is marked with a
sticky truncation flag so downstream checks can refuse to trust it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .padic import (
    Modulus,
    NotDivisible,
    PrecisionExhausted,
    Scalar,
    exact_div_p,
    factorial_valuation,
    unit_part_inverse,
)


class RingMismatch(ValueError):
    """Operands or images belong to different ring specs."""


class InvalidPdImage(ValueError):
    """A divided-power generator was sent somewhere divided powers of the
    image cannot be formed: some term has weight zero and a unit coefficient."""


class UnknownGenerator(KeyError):
    """A generator name not declared by the ring spec."""


@dataclass(frozen=True)
class Monomial:
    """Exponent vectors, ordinary then divided-power.

    pd entry n in slot i stands for the divided power u_i^[n], not the
    plain power u_i^n.
    """

    ordinary: Tuple[int, ...]
    pd: Tuple[int, ...]

    @property
    def ordinary_degree(self) -> int:
        return sum(self.ordinary)

    @property
    def pd_weight(self) -> int:
        return sum(self.pd)

    def is_constant(self) -> bool:
        return self.ordinary_degree == 0 and self.pd_weight == 0

    def sort_key(self) -> tuple:
        # graded lex, divided-power weight dominant
        return (self.pd_weight, self.ordinary_degree, self.pd, self.ordinary)


@dataclass(frozen=True)
class RingSpec:
    """Generators, modulus and degree caps for one polynomial ring."""

    ordinary_gens: Tuple[str, ...]
    pd_gens: Tuple[str, ...]
    modulus: Modulus
    poly_degree_cap: int
    pd_degree_cap: int

    def __post_init__(self) -> None:
        names = list(self.ordinary_gens) + list(self.pd_gens)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name in names:
            if not name or not name.replace("_", "").isalnum() or name[0].isdigit():
                raise ValueError(f"bad generator name {name!r}")
        if self.poly_degree_cap < 0 or self.pd_degree_cap < 0:
            raise ValueError("degree caps must be nonnegative")

    # -- generator bookkeeping -------------------------------------------

    def ordinary_index(self, name: str) -> int:
        try:
            return self.ordinary_gens.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def pd_index(self, name: str) -> int:
        try:
            return self.pd_gens.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def all_gens(self) -> Tuple[str, ...]:
        return self.ordinary_gens + self.pd_gens

    def has_gen(self, name: str) -> bool:
        return name in self.ordinary_gens or name in self.pd_gens

    # -- element constructors --------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.constant(1)

    def constant(self, value: Union[int, Scalar]) -> "Element":
        s = value if isinstance(value, Scalar) else Scalar(value, self.modulus)
        if s.modulus.p != self.modulus.p:
            raise RingMismatch("constant from a different prime")
        mono = Monomial((0,) * len(self.ordinary_gens), (0,) * len(self.pd_gens))
        return Element(self, {mono: s} if not s.is_zero() else {})

    def gen(self, name: str) -> "Element":
        """The generator as an element: x for ordinary, u^[1] for pd."""
        if name in self.ordinary_gens:
            return self.monomial({name: 1}, {})
        if name in self.pd_gens:
            return self.monomial({}, {name: 1})
        raise UnknownGenerator(name)

    def pd_power(self, name: str, weight: int) -> "Element":
        return self.monomial({}, {name: weight})

    def monomial(
        self,
        ordinary: Mapping[str, int],
        pd: Mapping[str, int],
        coefficient: Union[int, Scalar] = 1,
    ) -> "Element":
        o = [0] * len(self.ordinary_gens)
        d = [0] * len(self.pd_gens)
        for name, e in ordinary.items():
            o[self.ordinary_index(name)] = e
        for name, e in pd.items():
            d[self.pd_index(name)] = e
        mono = Monomial(tuple(o), tuple(d))
        if mono.ordinary_degree > self.poly_degree_cap:
            raise ValueError("monomial exceeds ordinary degree cap")
        if mono.pd_weight > self.pd_degree_cap:
            raise ValueError("monomial exceeds divided-power weight cap")
        s = coefficient if isinstance(coefficient, Scalar) else Scalar(coefficient, self.modulus)
        return Element(self, {mono: s} if not s.is_zero() else {})

    def at_precision(self, N: int) -> "RingSpec":
        return RingSpec(
            self.ordinary_gens,
            self.pd_gens,
            Modulus(self.modulus.p, N),
            self.poly_degree_cap,
            self.pd_degree_cap,
        )


class Element:
    """Immutable sparse polynomial; do not mutate `terms` after creation."""

    __slots__ = ("ring", "terms", "truncated")

    def __init__(
        self,
        ring: RingSpec,
        terms: Dict[Monomial, Scalar],
        truncated: bool = False,
    ) -> None:
        self.ring = ring
        # a zero residue below the ring's nominal precision still carries
        # information (the coefficient is only known to vanish mod p^k),
        # so it must survive; dropping it would let a later sum claim
        # more precision than the computation supports
        self.terms = {
            m: c
            for m, c in terms.items()
            if c.residue != 0 or c.precision < ring.modulus.N
        }
        self.truncated = truncated

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return all(c.residue == 0 for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(m.is_constant() for m in self.terms)

    def constant_coefficient(self) -> Scalar:
        for m, c in self.terms.items():
            if m.is_constant():
                return c
        return Scalar(0, self.ring.modulus)

    def coefficient(self, monomial: Monomial) -> Scalar:
        return self.terms.get(monomial, Scalar(0, self.ring.modulus))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key(), reverse=True)

    def min_precision(self) -> int:
        if not self.terms:
            return self.ring.modulus.N
        return min(c.precision for c in self.terms.values())

    def ordinary_degree(self) -> int:
        return max((m.ordinary_degree for m in self.terms), default=0)

    def pd_weight(self) -> int:
        return max((m.pd_weight for m in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "Element") -> None:
        if self.ring != other.ring:
            raise RingMismatch(
                f"elements of {self.ring.all_gens()} vs {other.ring.all_gens()}"
            )

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            return other
        if isinstance(other, (int, Scalar)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_ring(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return Element(self.ring, acc, self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.ring, {m: -c for m, c in self.terms.items()}, self.truncated)

    def __sub__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other) -> "Element":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_ring(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    def scale(self, c: Union[int, Scalar]) -> "Element":
        s = c if isinstance(c, Scalar) else Scalar(c, self.ring.modulus)
        return Element(
            self.ring, {m: coeff * s for m, coeff in self.terms.items()}, self.truncated
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None  # mutable dict inside; elements are not hashable

    def reduce_precision(self, N: int) -> "Element":
        out = {}
        for m, c in self.terms.items():
            out[m] = c.reduce_to(min(N, c.precision))
        return Element(self.ring, out, self.truncated)

    def map_to(self, other_ring: RingSpec) -> "Element":
        """Move to a spec with the same generators (possibly new modulus/caps)."""
        if other_ring.ordinary_gens != self.ring.ordinary_gens or (
            other_ring.pd_gens != self.ring.pd_gens
        ):
            raise RingMismatch("generator lists differ")
        out = {}
        trunc = self.truncated
        for m, c in self.terms.items():
            if (
                m.ordinary_degree > other_ring.poly_degree_cap
                or m.pd_weight > other_ring.pd_degree_cap
            ):
                trunc = True
                continue
            out[m] = Scalar(c.residue, Modulus(c.modulus.p, min(c.precision, other_ring.modulus.N)))
        return Element(other_ring, out, trunc)

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        pieces = []
        for mono, coeff in self.sorted_terms():
            if coeff.residue == 0:
                continue
            body = _render_monomial(self.ring, mono)
            c = coeff.lift_balanced()
            if body == "1":
                text = str(c)
            elif c == 1:
                text = body
            elif c == -1:
                text = "-" + body
            else:
                text = f"{c}*{body}"
            pieces.append(text)
        if not pieces:
            return "0"
        out = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("-"):
                out += " - " + piece[1:]
            else:
                out += " + " + piece
        return out

    def __repr__(self) -> str:
        flag = ", truncated" if self.truncated else ""
        return f"<{self.render()} over {self.ring.modulus!r}{flag}>"


def _render_monomial(ring: RingSpec, mono: Monomial) -> str:
    parts = []
    for name, e in zip(ring.ordinary_gens, mono.ordinary):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    for name, e in zip(ring.pd_gens, mono.pd):
        if e >= 1:
            parts.append(f"{name}^[{e}]")
    return "*".join(parts) if parts else "1"


def mul(a: Element, b: Element) -> Element:
    """Product with divided-power coefficients and cap truncation."""
    if a.ring != b.ring:
        raise RingMismatch("product across ring specs")
    ring = a.ring
    acc: Dict[Monomial, Scalar] = {}
    truncated = a.truncated or b.truncated
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            o = tuple(x + y for x, y in zip(ma.ordinary, mb.ordinary))
            d = tuple(x + y for x, y in zip(ma.pd, mb.pd))
            if sum(o) > ring.poly_degree_cap or sum(d) > ring.pd_degree_cap:
                truncated = True
                continue
            c = ca * cb
            for x, y in zip(ma.pd, mb.pd):
                if x and y:
                    c = c * math.comb(x + y, y)
            m = Monomial(o, d)
            acc[m] = acc[m] + c if m in acc else c
    return Element(ring, acc, truncated)


def _single_term_divided_power(
    ring: RingSpec, mono: Monomial, coeff: Scalar, n: int
) -> Element:
    """(coeff * mono)^[n] for one term.

    Terms of weight >= 1 use the composition rule for divided powers of
    a divided power; weight-zero terms must have coefficient divisible
    by p and use (p*w)^[n] = (p^n / n!) * w^n, evaluated as the exact
    division of coeff^n by the p-part of n!.
    """
    if n == 0:
        return ring.one()
    if n == 1:
        return Element(ring, {mono: coeff})
    if mono.pd_weight >= 1:
        slot = next(i for i, e in enumerate(mono.pd) if e)
        k = mono.pd[slot]
        rest = Monomial(mono.ordinary, tuple(
            0 if i == slot else e for i, e in enumerate(mono.pd)
        ))
        comp = 1
        for a in range(1, n):
            comp *= math.comb(a * k + k - 1, k - 1)
        if k * n > ring.pd_degree_cap:
            return Element(ring, {}, truncated=True)
        base = Element(ring, {rest: coeff}) ** n
        power = Element(ring, {Monomial(
            (0,) * len(ring.ordinary_gens),
            tuple(k * n if i == slot else 0 for i in range(len(ring.pd_gens))),
        ): Scalar(comp, ring.modulus)})
        return base * power
    # plain monomial: need a p-divisible coefficient
    if coeff.residue % ring.modulus.p != 0:
        raise InvalidPdImage(
            f"term {coeff.residue}*{_render_monomial(ring, mono)} has weight 0 "
            "and a unit coefficient"
        )
    v = factorial_valuation(n, ring.modulus.p)
    scaled = exact_div_p(coeff ** n, v) * unit_part_inverse(n, coeff.modulus)
    o = tuple(e * n for e in mono.ordinary)
    if sum(o) > ring.poly_degree_cap:
        return Element(ring, {}, truncated=True)
    return Element(ring, {Monomial(o, mono.pd): scaled})


def divided_power(e: Element, n: int) -> Element:
    """e^[n] for an element admitting divided powers.

    Every term must have divided-power weight >= 1 or coefficient
    divisible by p; otherwise InvalidPdImage is raised.  The sum rule
    (a + b)^[n] = sum a^[i] b^[n-i] is applied over the terms.
    """
    if n < 0:
        raise ValueError("negative divided power")
    ring = e.ring
    if n == 0:
        return ring.one()
    terms = e.sorted_terms()
    if not terms:
        return ring.zero()
    cache: Dict[Tuple[int, int], Element] = {}

    def rec(idx: int, budget: int) -> Element:
        if budget == 0:
            return ring.one()
        if idx == len(terms) - 1:
            m, c = terms[idx]
            return _single_term_divided_power(ring, m, c, budget)
        key = (idx, budget)
        if key in cache:
            return cache[key]
        m, c = terms[idx]
        acc = ring.zero()
        for i in range(budget + 1):
            head = _single_term_divided_power(ring, m, c, i)
            if head.is_zero() and not head.truncated and i > 0:
                continue
            acc = acc + head * rec(idx + 1, budget - i)
        cache[key] = acc
        return acc

    out = rec(0, n)
    if e.truncated:
        out = Element(ring, out.terms, truncated=True)
    return out


def validate_pd_image(gen: str, image: Element) -> None:
    """Check that divided powers of the image exist term by term."""
    p = image.ring.modulus.p
    for m, c in image.terms.items():
        if m.pd_weight == 0 and c.residue % p != 0:
            raise InvalidPdImage(
                f"image of {gen} has weight-0 unit term "
                f"{c.residue}*{_render_monomial(image.ring, m)}"
            )


def substitute(
    a: Element,
    images: Mapping[str, Element],
    target: Optional[RingSpec] = None,
) -> Element:
    """Evaluate a under generator -> image.

    Every generator of a's ring needs an image in one common target
    ring.  Ordinary generators may go anywhere; divided-power
    generators must land on elements admitting divided powers (each
    term of weight >= 1 or with p-divisible coefficient), and
    u^[n] |-> image^[n].
    """
    ring = a.ring
    for name in images:
        if not ring.has_gen(name):
            raise UnknownGenerator(name)
    for name in ring.all_gens():
        if name not in images:
            raise UnknownGenerator(f"no image for generator {name}")
    for img in images.values():
        if target is None:
            target = img.ring
        elif img.ring != target:
            raise RingMismatch("images live in different rings")
    if target is None:
        if not a.is_constant():
            raise RingMismatch("no target ring deducible")
        target = ring
    for name in ring.pd_gens:
        validate_pd_image(name, images[name])

    pow_cache: Dict[Tuple[str, int], Element] = {}

    def power_of(name: str, n: int, divided: bool) -> Element:
        key = (name, n)
        if key not in pow_cache:
            img = images[name]
            pow_cache[key] = divided_power(img, n) if divided else img ** n
        return pow_cache[key]

    result = target.zero()
    for mono, coeff in a.terms.items():
        acc = target.constant(coeff)
        for name, e in zip(ring.ordinary_gens, mono.ordinary):
            if e:
                acc = acc * power_of(name, e, divided=False)
        for name, e in zip(ring.pd_gens, mono.pd):
            if e:
                acc = acc * power_of(name, e, divided=True)
        result = result + acc
    if a.truncated:
        result = Element(target, result.terms, truncated=True)
    return result


def partial_derivative(a: Element, gen: str) -> Element:
    """d/d(gen); on divided powers the weight-lowering map u^[n] -> u^[n-1]."""
    ring = a.ring
    acc: Dict[Monomial, Scalar] = {}
    if gen in ring.ordinary_gens:
        i = ring.ordinary_index(gen)
        for m, c in a.terms.items():
            e = m.ordinary[i]
            if e == 0:
                continue
            o = tuple(x - 1 if j == i else x for j, x in enumerate(m.ordinary))
            nm = Monomial(o, m.pd)
            nc = c * e
            acc[nm] = acc[nm] + nc if nm in acc else nc
    elif gen in ring.pd_gens:
        i = ring.pd_index(gen)
        for m, c in a.terms.items():
            e = m.pd[i]
            if e == 0:
                continue
            d = tuple(x - 1 if j == i else x for j, x in enumerate(m.pd))
            nm = Monomial(m.ordinary, d)
            acc[nm] = acc[nm] + c if nm in acc else c
    else:
        raise UnknownGenerator(gen)
    return Element(ring, acc, a.truncated)


def hasse_derivative(a: Element, gen: str, order: int) -> Element:
    """Order-m divided differential operator dual to monomials.

    On ordinary generators x^n -> C(n, m) x^(n-m); on divided-power
    generators u^[n] -> u^[n-m].  These compose with a multinomial
    factor in the ordinary case and on the nose in the pd case.
    """
    if order < 0:
        raise ValueError("negative operator order")
    if order == 0:
        return a
    ring = a.ring
    acc: Dict[Monomial, Scalar] = {}
    if gen in ring.ordinary_gens:
        i = ring.ordinary_index(gen)
        for m, c in a.terms.items():
            e = m.ordinary[i]
            if e < order:
                continue
            o = tuple(x - order if j == i else x for j, x in enumerate(m.ordinary))
            nm = Monomial(o, m.pd)
            nc = c * math.comb(e, order)
            acc[nm] = acc[nm] + nc if nm in acc else nc
    elif gen in ring.pd_gens:
        i = ring.pd_index(gen)
        for m, c in a.terms.items():
            e = m.pd[i]
            if e < order:
                continue
            d = tuple(x - order if j == i else x for j, x in enumerate(m.pd))
            nm = Monomial(m.ordinary, d)
            acc[nm] = acc[nm] + c if nm in acc else c
    else:
        raise UnknownGenerator(gen)
    return Element(ring, acc, a.truncated)


def exact_div_p_elem(a: Element, k: int) -> Element:
    """Coefficientwise exact division by p^k, shrinking precision by k."""
    out = {}
    for m, c in a.terms.items():
        try:
            out[m] = exact_div_p(c, k)
        except NotDivisible:
            raise NotDivisible(
                f"coefficient {c.residue} of {_render_monomial(a.ring, m)} "
                f"is not divisible by p^{k}"
            ) from None
    return Element(a.ring, out, a.truncated)


def divisible_by_p(a: Element, k: int = 1) -> bool:
    """True when every coefficient is divisible by p^k at its precision.

    A coefficient whose tracked precision is below k cannot certify
    divisibility and raises PrecisionExhausted.
    """
    p = a.ring.modulus.p
    for m, c in a.terms.items():
        if c.precision < k:
            raise PrecisionExhausted(
                f"coefficient of {_render_monomial(a.ring, m)} known only "
                f"mod p^{c.precision}, cannot test divisibility by p^{k}"
            )
        if c.residue % p ** k != 0:
            return False
    return True


def equal_reduced(a: Element, b: Element) -> bool:
    """Equality at the largest precision both sides actually carry."""
    shared = min(a.min_precision(), b.min_precision())
    return (a - b).reduce_precision(shared).is_zero()


def congruent_mod_p(a: Element, b: Element, k: int = 1) -> bool:
    """a = b mod p^k, honoring per-coefficient precision."""
    return divisible_by_p(a - b, k)


def apply_derivation(a: Element, images: Mapping[str, Element]) -> Element:
    """Extend gen -> images[gen] to a derivation and apply to a.

    On divided powers the extension follows u^[n] -> u^[n-1] * images[u],
    which is the unique divided-power compatible choice.
    """
    ring = a.ring
    out = None
    for name in ring.all_gens():
        img = images.get(name)
        if img is None or img.is_zero():
            continue
        piece = partial_derivative(a, name) * img
        out = piece if out is None else out + piece
    if out is None:
        target = next((img.ring for img in images.values()), ring)
        return target.zero()
    return out


def window_monomials(
    ring: RingSpec,
    weight_cap: int,
    weights: Optional[Mapping[str, int]] = None,
) -> list:
    """All monomials of weighted total degree <= weight_cap, within caps.

    Weights default to 1 per generator.  Returned in ascending canonical
    order, so enumeration is deterministic.
    """
    weights = weights or {}
    names = ring.all_gens()
    wts = [weights.get(name, 1) for name in names]
    n_ord = len(ring.ordinary_gens)
    found = []

    def rec(idx: int, budget: int, exps: list) -> None:
        if idx == len(names):
            o, d = tuple(exps[:n_ord]), tuple(exps[n_ord:])
            if sum(o) <= ring.poly_degree_cap and sum(d) <= ring.pd_degree_cap:
                found.append(Monomial(o, d))
            return
        w = wts[idx]
        top = budget // w if w > 0 else 0
        for e in range(top + 1):
            exps.append(e)
            rec(idx + 1, budget - e * w, exps)
            exps.pop()

    rec(0, weight_cap, [])
    found.sort(key=lambda m: m.sort_key())
    return found


def monomial_weight(mono: Monomial, ring: RingSpec, weights: Optional[Mapping[str, int]] = None) -> int:
    weights = weights or {}
    total = 0
    for name, e in zip(ring.ordinary_gens, mono.ordinary):
        total += e * weights.get(name, 1)
    for name, e in zip(ring.pd_gens, mono.pd):
        total += e * weights.get(name, 1)
    return total
