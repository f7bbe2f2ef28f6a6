"""Inc(N)-respecting monomial orders and an exhaustive axiom checker.

Every order is realised by a sort key on monomials; keys only depend on
relative comparisons of indices, which increasing maps preserve.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .symmetry import ONE, Monomial, RingSignature, Variable, apply_inc, increasing_maps

LT, EQ, GT = -1, 0, 1


class RingMismatch(ValueError):
    """Monomial outside the ring an order was built for."""


def variable_key(v: Variable):
    """Largest index first, then remaining indices right to left, then orbit."""
    idx = v.indices
    return (max(idx, default=0), idx[::-1], v.orbit, v.labels)


class MonomialOrder:
    kind = "abstract"
    is_width_order = False

    def __init__(self, signature: Optional[RingSignature] = None):
        self.signature = signature
        self._cache: dict = {}

    def _key(self, m: Monomial):
        raise NotImplementedError

    def key(self, m: Monomial):
        k = self._cache.get(m)
        if k is None:
            k = self._cache[m] = self._key(m)
        return k

    def compare(self, a: Monomial, b: Monomial) -> int:
        if self.signature is not None:
            for m in (a, b):
                if not self.signature.contains_monomial(m):
                    raise RingMismatch("%s is not in the ring of this %s order" % (m, self.kind))
        return self.compare_unchecked(a, b)

    def compare_unchecked(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return LT if ka < kb else (GT if ka > kb else EQ)

    def max(self, monos):
        return max(monos, key=self.key)

    def sorted(self, monos, reverse=False):
        return sorted(monos, key=self.key, reverse=reverse)

    def __repr__(self):
        return "<%s order>" % self.kind


OrderSpec = MonomialOrder


def _lex_key(m: Monomial, vk) -> tuple:
    return tuple(sorted(((vk(v), e) for v, e in m.items), reverse=True))


def _revlex_key(m: Monomial, vk) -> tuple:
    return tuple(sorted((vk(v), -e) for v, e in m.items))


class LexOrder(MonomialOrder):
    """Lexicographic with x_1 < x_2 < ...; a width order."""

    kind = "lex"
    is_width_order = True

    def __init__(self, signature=None, var_key: Callable = variable_key):
        super().__init__(signature)
        self.var_key = var_key

    def _key(self, m):
        return _lex_key(m, self.var_key)


class GradedLexOrder(MonomialOrder):
    kind = "gradedLex"

    def __init__(self, signature=None, var_key: Callable = variable_key):
        super().__init__(signature)
        self.var_key = var_key

    def _key(self, m):
        return (m.degree, _lex_key(m, self.var_key))


class GradedRevLexOrder(MonomialOrder):
    """Degree, then the smaller exponent at the smallest differing variable wins."""

    kind = "gradedRevLex"

    def __init__(self, signature=None, var_key: Callable = variable_key):
        super().__init__(signature)
        self.var_key = var_key

    def _key(self, m):
        return (m.degree, _revlex_key(m, self.var_key))


class FiberRevLexOrder(GradedRevLexOrder):
    """The reverse-lex tie-breaker used inside fibers of the matching map."""

    kind = "fiberRevLex"


class HybridToricOrder(MonomialOrder):
    """Compare images under ``pi`` by ``order1``; ties broken by ``order2``."""

    kind = "hybridToric"

    def __init__(self, pi: Callable, order1: MonomialOrder, order2: MonomialOrder, signature=None):
        super().__init__(signature)
        self.pi = pi
        self.order1 = order1
        self.order2 = order2
        self.is_width_order = order1.is_width_order

    def _key(self, m):
        return (self.order1.key(self.pi(m)), self.order2.key(m))


class EliminationOrder(MonomialOrder):
    """Block order on ``[Y][X]``: graded lex on the X part dominates.

    Remaining ties compare ``pi`` of the Y part by ``order1`` and then the Y
    part itself by ``order2``.  Any monomial with an X variable exceeds every
    X-free monomial.
    """

    kind = "elimination"

    def __init__(self, x_names, pi: Callable, order_x: MonomialOrder, order1: MonomialOrder,
                 order2: MonomialOrder, signature=None):
        super().__init__(signature)
        self.x_names = frozenset(x_names)
        self.pi = pi
        self.order_x = order_x
        self.order1 = order1
        self.order2 = order2

    def split(self, m: Monomial):
        xs = tuple(t for t in m.items if t[0].orbit in self.x_names)
        if not xs:
            return ONE, m
        ys = tuple(t for t in m.items if t[0].orbit not in self.x_names)
        return Monomial._raw(xs), Monomial._raw(ys)

    def has_x(self, m: Monomial) -> bool:
        return any(v.orbit in self.x_names for v, _ in m.items)

    def _key(self, m):
        xp, yp = self.split(m)
        return (self.order_x.key(xp), self.order1.key(self.pi(yp)), self.order2.key(yp))


ORDER_NAMES = {
    "lex": LexOrder,
    "grlex": GradedLexOrder,
    "grevlex": GradedRevLexOrder,
}


def make_order(name: str, signature=None) -> MonomialOrder:
    try:
        return ORDER_NAMES[name](signature)
    except KeyError:
        raise ValueError("unknown order %r (choose from %s)" % (name, ", ".join(ORDER_NAMES))) from None


DEFAULT_ORDER = GradedLexOrder()


def compare(order: MonomialOrder, a: Monomial, b: Monomial) -> int:
    return order.compare(a, b)


@dataclass
class OrderReport:
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def validate_order(order: MonomialOrder, width_cap: int, deg_cap: int,
                   signature: Optional[RingSignature] = None, max_failures: int = 5) -> OrderReport:
    """Exhaustively check the order axioms on a finite window of monomials.

    Checks totality/antisymmetry/transitivity, multiplicativity, Inc-respect,
    ``1 <= m``, ``m <= rho m`` and refinement of Pi-divisibility for all
    monomials of width <= width_cap and degree <= deg_cap, and IncMaps into
    [width_cap + 2].  Failures carry a witness tuple.
    """
    sig = signature or order.signature
    if sig is None:
        raise ValueError("validate_order needs a ring signature")
    monos = sig.monomials(width_cap, deg_cap)
    variables = sig.variables_up_to_width(width_cap)
    fails: list = []
    for m in monos:
        if not sig.contains_monomial(m):
            raise RingMismatch("%s is not in the ring of this %s order" % (m, order.kind))
    cmp = order.compare_unchecked
    checked = 0

    def fail(kind, *witness):
        fails.append((kind,) + witness)
        return len(fails) >= max_failures

    def done():
        return OrderReport(not fails, checked, fails)

    # sort with the comparator itself, then confirm the sorted chain pairwise
    chain = sorted(monos, key=functools.cmp_to_key(cmp))
    for i, a in enumerate(chain):
        if cmp(a, a) != EQ:
            if fail("reflexivity", a):
                return done()
        for b in chain[i + 1:]:
            checked += 1
            if cmp(a, b) != LT or cmp(b, a) != GT:
                if fail("total-order", a, b):
                    return done()
    for a in chain:
        if cmp(ONE, a) == GT:
            if fail("one-is-least", a):
                return done()
    # consecutive checks suffice once the chain is a verified linear order
    for v in variables:
        xv = Monomial.var(v)
        for a, b in zip(chain, chain[1:]):
            checked += 1
            if cmp(a * xv, b * xv) != LT:
                if fail("multiplicative", a, b, xv):
                    return done()
    rhos = [r for w in range(width_cap + 1) for r in increasing_maps(w, width_cap + 2)]
    by_domain: dict = {}
    for r in rhos:
        by_domain.setdefault(r.domain_size, []).append(r)
    for n, rs in by_domain.items():
        sub = [m for m in chain if m.width <= n]
        for r in rs:
            imgs = [apply_inc(r, m) for m in sub]
            for (a, ra), (b, rb) in zip(zip(sub, imgs), zip(sub[1:], imgs[1:])):
                checked += 1
                if cmp(ra, rb) != LT:
                    if fail("inc-respect", a, b, r):
                        return done()
            for a, ra in zip(sub, imgs):
                checked += 1
                if cmp(a, ra) == GT:
                    if fail("shift-ascent", a, r):
                        return done()
    # a |_Pi b  iff  b = c * rho(a); enumerate those b inside the window
    by_deg: dict = {}
    for c in monos:
        by_deg.setdefault(c.degree, []).append(c)
    for a in monos:
        cof = [c for d in range(deg_cap - a.degree + 1) for c in by_deg.get(d, [])]
        for r in increasing_maps(a.width, width_cap):
            ra = apply_inc(r, a)
            for c in cof:
                b = ra * c
                checked += 1
                if cmp(a, b) == GT:
                    if fail("divisibility-refinement", a, b, r):
                        return done()
    return done()
