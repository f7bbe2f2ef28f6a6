"""Sparse polynomials over Q and equivariant (Pi-) reduction."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .symmetry import ONE, IncMap, Monomial, Variable, apply_inc, equivariant_divides


class ZeroPolynomial(ValueError):
    """Operation undefined on the zero polynomial."""


class Term(NamedTuple):
    coefficient: Fraction
    monomial: Monomial

    def __str__(self):
        return format_terms([(self.monomial, self.coefficient)])


def _frac(c) -> Fraction:
    return c if type(c) is Fraction else Fraction(c)


class Polynomial:
    """Immutable map from monomials to nonzero rationals."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        acc: dict = {}
        if terms:
            if isinstance(terms, dict):
                terms = terms.items()
            for m, c in terms:
                c = _frac(c)
                if c:
                    acc[m] = acc.get(m, 0) + c
        self.terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def from_monomial(cls, m: Monomial, c=1) -> "Polynomial":
        return cls({m: c})

    @classmethod
    def variable(cls, v: Variable) -> "Polynomial":
        return cls({Monomial.var(v): 1})

    @classmethod
    def binomial(cls, a: Monomial, b: Monomial) -> "Polynomial":
        return cls([(a, 1), (b, -1)])

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> list:
        return list(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    @property
    def width(self) -> int:
        return max((m.width for m in self.terms), default=0)

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self.terms)

    def variables(self) -> set:
        return {v for m in self.terms for v in m.variables()}

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Polynomial._raw(acc)

    __radd__ = __add__

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self.sub_term_multiple(Fraction(1), ONE, other)

    def __rsub__(self, other):
        return (-self) + other

    def sub_term_multiple(self, c: Fraction, m: Monomial, g: "Polynomial") -> "Polynomial":
        """``self - c * m * g``."""
        acc = dict(self.terms)
        for gm, gc in g.terms.items():
            mm = gm * m
            s = acc.get(mm, 0) - c * gc
            if s:
                acc[mm] = s
            else:
                acc.pop(mm, None)
        return Polynomial._raw(acc)

    def mul_term(self, c, m: Monomial) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial()
        return Polynomial._raw({gm * m: gc * c for gm, gc in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return self.mul_term(1, other)
        if isinstance(other, (int, Fraction)):
            return self.mul_term(other, ONE)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, 0) + c1 * c2
        return Polynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def map_monomials(self, fn, injective: bool = False) -> "Polynomial":
        if injective:
            return Polynomial._raw({fn(m): c for m, c in self.terms.items()})
        return Polynomial((fn(m), c) for m, c in self.terms.items())

    def evaluate(self, subst) -> "Polynomial":
        """Substitute each variable ``v`` by the monomial ``subst(v)``."""
        def ev(m):
            out = ONE
            for v, e in m.items:
                out = out * subst(v) ** e
            return out
        return self.map_monomials(ev)

    def sorted_terms(self, order=None) -> list:
        from .orders import DEFAULT_ORDER
        order = order or DEFAULT_ORDER
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def format(self, order=None) -> str:
        return format_terms(self.sorted_terms(order))

    def __str__(self):
        return self.format()

    def __repr__(self):
        return "Polynomial(%s)" % self


def format_terms(terms: Sequence) -> str:
    if not terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if m.is_one():
            body = str(a)
        elif a == 1:
            body = str(m)
        else:
            body = "%s*%s" % (a, m)
        if k == 0:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def leading_term(f: Polynomial, order) -> Term:
    if not f.terms:
        raise ZeroPolynomial("leading term of the zero polynomial")
    key = order.key
    m = max(f.terms, key=key)
    return Term(f.terms[m], m)


def leading_monomial(f: Polynomial, order) -> Monomial:
    return leading_term(f, order).monomial


def monic(f: Polynomial, order) -> Polynomial:
    lc = leading_term(f, order).coefficient
    if lc == 1:
        return f
    inv = 1 / lc
    return Polynomial._raw({m: c * inv for m, c in f.terms.items()})


class _Lead:
    __slots__ = ("poly", "mono", "coef", "need", "deg", "width")

    def __init__(self, poly, order):
        lt = leading_term(poly, order)
        self.poly = poly
        self.mono = lt.monomial
        self.coef = lt.coefficient
        self.deg = lt.monomial.degree
        self.width = poly.width
        need: dict = {}
        for v, e in self.mono.items:
            k = (v.orbit, v.labels, len(v.indices))
            need[k] = need.get(k, 0) + e
        self.need = need


class Reducer:
    """Equivariant reduction against ``Inc(N) G``.

    ``classical=True`` switches to ordinary division by the elements of ``G``
    themselves (no shifts), used for finite-variable computations.
    """

    def __init__(self, G: Iterable[Polynomial], order, classical: bool = False):
        self.order = order
        self.classical = classical
        self.leads: list = []
        self.inactive: set = set()
        self.memo: dict = {}  # t -> (leads scanned, first hit or None)
        for g in G:
            self.add(g)

    def add(self, g: Polynomial):
        if not g.terms:
            raise ZeroPolynomial("cannot reduce by zero")
        self.leads.append(_Lead(g, self.order))

    def deactivate(self, idx: int):
        """Stop using element ``idx`` as a reducer (indices stay stable)."""
        self.inactive.add(idx)

    def find(self, t: Monomial, skip: Optional[int] = None):
        """First active ``(index, rho, cofactor)`` whose shifted lead divides ``t``."""
        n = len(self.leads)
        start = 0
        if skip is None:
            hit = self.memo.get(t)
            if hit is not None:
                scanned, found = hit
                if found is None:
                    start = min(scanned, n)
                elif found[0] >= n:
                    start = n  # [0, found) is hit-free
                elif found[0] not in self.inactive:
                    return found
                else:
                    start = found[0] + 1
        found = self._scan(t, start, n, skip)
        if skip is None:
            self.memo[t] = (n, found)
        return found

    def _scan(self, t: Monomial, start: int, stop: int, skip: Optional[int]):
        tdeg = t.degree
        have = None
        leads = self.leads
        for idx in range(start, stop):
            ld = leads[idx]
            if idx == skip or ld.deg > tdeg or idx in self.inactive:
                continue
            if self.classical:
                if ld.mono.divides(t):
                    return idx, None, t / ld.mono
                continue
            if have is None:
                have = {}
                for v, e in t.items:
                    k = (v.orbit, v.labels, len(v.indices))
                    have[k] = have.get(k, 0) + e
            if any(have.get(k, 0) < e for k, e in ld.need.items()):
                continue
            hit = equivariant_divides(ld.mono, t)
            if hit is not None:
                return idx, hit[0], hit[1]
        return None

    def shifted(self, idx: int, rho: Optional[IncMap]) -> Polynomial:
        ld = self.leads[idx]
        if rho is None:
            return ld.poly
        return apply_inc(rho.extend(ld.width), ld.poly)

    def reduce(self, f: Polynomial, trace: Optional[list] = None, full: bool = True,
               skip: Optional[int] = None) -> Polynomial:
        """Normal form of ``f``; reduces the largest reducible term first.

        With ``trace`` a list, appends ``(q, cofactor, index, rho)`` so that
        ``f - result == sum(q * cofactor * rho(G[index]))``.
        """
        key = self.order.key
        p = dict(f.terms)
        rem: dict = {}
        while p:
            t = max(p, key=key)
            c = p[t]
            hit = self.find(t, skip)
            if hit is None:
                if not full:
                    rem.update(p)
                    break
                rem[t] = c
                del p[t]
                continue
            idx, rho, cof = hit
            g = self.shifted(idx, rho)
            q = c / self.leads[idx].coef
            if trace is not None:
                trace.append((q, cof, idx, rho))
            for gm, gc in g.terms.items():
                mm = gm * cof
                s = p.get(mm, 0) - q * gc
                if s:
                    p[mm] = s
                else:
                    p.pop(mm, None)
        return Polynomial._raw(rem)


def reduce_once(f: Polynomial, g: Polynomial, order) -> Optional[Polynomial]:
    """One reduction step of the largest term of ``f`` reducible by ``Inc(N) g``."""
    red = Reducer([g], order)
    for t, c in f.sorted_terms(order):
        hit = red.find(t)
        if hit is not None:
            _, rho, cof = hit
            sg = red.shifted(0, rho)
            return f.sub_term_multiple(c / red.leads[0].coef, cof, sg)
    return None


def normal_form(f: Polynomial, G: Sequence[Polynomial], order, trace: Optional[list] = None) -> Polynomial:
    """Full equivariant normal form of ``f`` with respect to ``G``."""
    G = [g for g in G]
    if any(not g for g in G):
        raise ZeroPolynomial("normal form against a zero polynomial")
    return Reducer(G, order).reduce(f, trace)


def replay_trace(trace: list, G: Sequence[Polynomial]) -> Polynomial:
    """Rebuild ``sum q * cofactor * rho(G[idx])`` from a reduction trace."""
    out = Polynomial()
    for q, cof, idx, rho in trace:
        g = G[idx] if rho is None else apply_inc(rho.extend(G[idx].width), G[idx])
        out = out + g.mul_term(q, cof)
    return out
