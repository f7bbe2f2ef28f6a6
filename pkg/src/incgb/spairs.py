"""Finite generating sets of the S-pair sets via interlacings."""

from __future__ import annotations

import itertools
from typing import Optional

from .poly import Polynomial, ZeroPolynomial, leading_term
from .symmetry import IncMap, Monomial, apply_inc


class SPair:
    """The pair ``(m/a) rho1 f, (m/b) rho2 g`` with ``m = lcm(a, b)``.

    ``a``, ``b`` are the shifted leading monomials.  Polynomials and the lcm
    are built on first use; the queue only needs the sort key.
    """

    __slots__ = ("f", "g", "lf", "lg", "width", "provenance", "_lcm", "_sides")

    def __init__(self, f, g, lf, lg, width, provenance):
        self.f = f
        self.g = g
        self.lf = lf
        self.lg = lg
        self.width = width
        self.provenance = provenance  # (i, j, rho1, rho2)
        self._lcm = None
        self._sides = None

    @property
    def lcm(self) -> Monomial:
        if self._lcm is None:
            _, _, r1, r2 = self.provenance
            self._lcm = apply_inc(r1, self.lf).lcm(apply_inc(r2, self.lg))
        return self._lcm

    def _build(self):
        if self._sides is None:
            _, _, r1, r2 = self.provenance
            a = apply_inc(r1.extend(self.f.width), self.f)
            b = apply_inc(r2.extend(self.g.width), self.g)
            self._sides = (a, b)
        return self._sides

    def sides(self, order) -> tuple:
        """The two multiplied shifts, each with leading monomial ``lcm``."""
        a, b = self._build()
        la, lb = leading_term(a, order).monomial, leading_term(b, order).monomial
        return a.mul_term(1, self.lcm / la), b.mul_term(1, self.lcm / lb)

    def difference(self, order) -> Polynomial:
        """``LC(right) * left - LC(left) * right``."""
        a, b = self._build()
        la, lb = leading_term(a, order), leading_term(b, order)
        m = self.lcm
        left = a.mul_term(lb.coefficient, m / la.monomial)
        return left.sub_term_multiple(la.coefficient, m / lb.monomial, b)

    def sort_key(self):
        """Width, then creation order: newer basis index, partner, interlacing."""
        i, j, r1, r2 = self.provenance
        return (self.width, j, i, r1.images, r2.images)

    def __repr__(self):
        return "SPair(width=%d, lcm=%s, provenance=%r)" % (self.width, self.lcm, self.provenance[:2])


def interlacings(wf: int, wg: int) -> list:
    """All pairs of increasing maps ``[wf] -> [wf+wg]`` and ``[wg] -> [wf+wg]``."""
    n = wf + wg
    return [(IncMap(a), IncMap(b))
            for a in itertools.combinations(range(1, n + 1), wf)
            for b in itertools.combinations(range(1, n + 1), wg)]


def _joint(wf: int, wg: int, forced: Optional[dict] = None) -> list:
    # image tuples of the joint interlacings, in depth-first order
    fmap = forced or {}
    gmap = {b: a for a, b in fmap.items()}
    out = []
    r1: list = []
    r2: list = []

    def walk(i, j, s):
        if i == wf and j == wg:
            out.append((tuple(r1), tuple(r2)))
            return
        a, b = i + 1, j + 1
        if i < wf and j < wg and fmap.get(a, b) == b and gmap.get(b, a) == a:
            r1.append(s + 1)
            r2.append(s + 1)
            walk(a, b, s + 1)
            r1.pop()
            r2.pop()
        if i < wf and a not in fmap:
            r1.append(s + 1)
            walk(a, j, s + 1)
            r1.pop()
        if j < wg and b not in gmap:
            r2.append(s + 1)
            walk(i, b, s + 1)
            r2.pop()

    walk(0, 0, 0)
    return out


def joint_interlacings(wf: int, wg: int, forced: Optional[dict] = None) -> list:
    """Interlacings whose images jointly cover an initial segment [s].

    Every interlacing is an Inc-shift of exactly one of these.  ``forced``
    maps f-positions to g-positions that must receive the same image.
    """
    return [(IncMap._raw(a), IncMap._raw(b)) for a, b in _joint(wf, wg, forced)]


def _identifications(lf: Monomial, lg: Monomial) -> Optional[list]:
    """Forced index identifications making some lead variables coincide.

    Returns ``None`` when an index-free variable is shared (no constraint).
    """
    out = []
    for v, _ in lf.items:
        for u, _ in lg.items:
            if v.orbit != u.orbit or v.labels != u.labels or len(v.indices) != len(u.indices):
                continue
            if not v.indices:
                return None
            pairs = {}
            ok = True
            for a, b in zip(v.indices, u.indices):
                if pairs.get(a, b) != b:
                    ok = False
                    break
                pairs[a] = b
            if not ok:
                continue
            items = sorted(pairs.items())
            if any(p[1] >= q[1] for p, q in zip(items, items[1:])):
                continue
            out.append(pairs)
    return out


def _pattern(m: Monomial) -> list:
    return [((v.orbit, v.labels), v.indices, e) for v, e in m.items]


def _place(pattern, img) -> dict:
    return {(ck, tuple([img[i - 1] for i in idx])): e for ck, idx, e in pattern}


def spair_generators(f: Polynomial, g: Polynomial, order, prune_coprime: bool = True,
                     indices: tuple = (0, 1)) -> list:
    """S-pairs of ``rho1 f, rho2 g`` over all joint interlacings.

    With ``prune_coprime`` pairs whose shifted leads are coprime are dropped.
    """
    if not f or not g:
        raise ZeroPolynomial("S-pairs of the zero polynomial")
    if f.is_constant() or g.is_constant():
        return []
    lf = leading_term(f, order).monomial
    lg = leading_term(g, order).monomial
    wf, wg = f.width, g.width
    if prune_coprime:
        idents = _identifications(lf, lg)
        if idents is None:
            maps = _joint(wf, wg)
        else:
            seen = set()
            maps = []
            for forced in idents:
                for pair in _joint(wf, wg, forced):
                    if pair not in seen:
                        seen.add(pair)
                        maps.append(pair)
    else:
        maps = _joint(wf, wg)
    same = f is g or f == g
    pf, pg = _pattern(lf), _pattern(lg)
    out = []
    for i1, i2 in maps:
        if same and i1 > i2:
            continue  # mirror image of an emitted self-pair
        a = _place(pf, i1)
        b = _place(pg, i2)
        if prune_coprime and a.keys().isdisjoint(b):
            continue
        w = max(i1[-1] if i1 else 0, i2[-1] if i2 else 0)
        sp = SPair(f, g, lf, lg, w, (indices[0], indices[1], IncMap._raw(i1), IncMap._raw(i2)))
        out.append(sp)
    out.sort(key=SPair.sort_key)
    sf, sg = _used(f), _used(g)
    if len(sf) < wf or len(sg) < wg:
        out = _dedup_shifts(out, sf, sg, same)
    return out


def _used(f: Polynomial) -> list:
    return sorted({i for m in f.terms for v, _ in m.items for i in v.indices})


def _dedup_shifts(pairs: list, sf: list, sg: list, same: bool) -> list:
    # positions outside the support of f or g do not affect the pair
    seen = set()
    out = []
    for sp in pairs:
        _, _, r1, r2 = sp.provenance
        a = tuple(r1.images[p - 1] for p in sf)
        b = tuple(r2.images[p - 1] for p in sg)
        rank = {v: k for k, v in enumerate(sorted(set(a) | set(b)), 1)}
        key = (tuple(rank[v] for v in a), tuple(rank[v] for v in b))
        if same:
            key = min(key, key[::-1])
        if key not in seen:
            seen.add(key)
            out.append(sp)
    return out
