"""Brute-force oracles and random generators shared by the test modules."""

import itertools
import random
from fractions import Fraction

from incgb.poly import Polynomial
from incgb.symmetry import IncMap, Monomial, Variable, apply_inc, increasing_maps, x, y


def brute_divides(a: Monomial, b: Monomial):
    """Some increasing map rho on [w(a)] with rho(a) | b, by enumeration."""
    wa = a.width
    for rho in increasing_maps(wa, max(b.width, wa)):
        if apply_inc(rho, a).divides(b):
            return rho
    return None


def rand_x_monomial(rng: random.Random, rows=1, width=4, deg=3) -> Monomial:
    acc = {}
    for _ in range(rng.randint(0, deg)):
        v = x(rng.randint(1, rows), rng.randint(1, width))
        acc[v] = acc.get(v, 0) + 1
    return Monomial(acc)


def rand_y_monomial(rng: random.Random, arity=2, width=4, deg=3, name="y") -> Monomial:
    acc = {}
    for _ in range(rng.randint(0, deg)):
        v = Variable(name, (), tuple(rng.sample(range(1, width + 1), arity)))
        acc[v] = acc.get(v, 0) + 1
    return Monomial(acc)


def rand_x_poly(rng: random.Random, terms=3, rows=1, width=3, deg=2) -> Polynomial:
    return Polynomial([(rand_x_monomial(rng, rows, width, deg), Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
                       for _ in range(terms)])


def rand_binomial(rng: random.Random, width=2, deg=2) -> Polynomial:
    while True:
        a = rand_x_monomial(rng, 1, width, deg)
        b = rand_x_monomial(rng, 1, width, deg)
        if a != b:
            return Polynomial.binomial(a, b)


def all_increasing(n, m):
    return [IncMap(c) for c in itertools.combinations(range(1, m + 1), n)]


def brute_pairs(G, order, W=5):
    """All lcm pairs of shifts sigma1 f, sigma2 g with images in [W]."""
    from incgb.poly import leading_term
    for f in G:
        for g in G:
            for s1 in increasing_maps(f.width, W):
                sf = apply_inc(s1, f)
                a = leading_term(sf, order)
                for s2 in increasing_maps(g.width, W):
                    sg = apply_inc(s2, g)
                    b = leading_term(sg, order)
                    m = a.monomial.lcm(b.monomial)
                    yield sf.mul_term(b.coefficient, m / a.monomial).sub_term_multiple(
                        a.coefficient, m / b.monomial, sg)


def brute_criterion(G, order, W=5) -> bool:
    """Every matching-lead pair of width <= W reduces to zero modulo Inc(N) G."""
    from incgb.poly import Reducer
    red = Reducer(G, order)
    return all(not red.reduce(h) for h in brute_pairs(G, order, W))


def random_binomial_set(rng: random.Random, order):
    """Two or three random width-<=2 binomials; every other call closes them to an EGB."""
    from incgb.engine import MaxWidthReached, truncated_egb
    G = [rand_binomial(rng) for _ in range(rng.randint(1, 3))]
    if rng.random() < 0.5:
        try:
            G, _ = truncated_egb(G, order, 4, strategy="queue")
        except MaxWidthReached:
            pass
    return G


def brute_fiber(block):
    """All multisets of column tuples (one distinct column per row) summing to ``block``.

    Returns a frozenset of sorted tuples; empty when no decomposition exists.
    """
    import numpy as np
    memo = {}

    def go(key):
        if key in memo:
            return memo[key]
        a = np.array(key, dtype=np.int64)
        if not a.any():
            memo[key] = {()}
            return memo[key]
        k, w = a.shape
        out = set()
        for cols in itertools.permutations(range(w), k):
            if all(a[i, c] > 0 for i, c in enumerate(cols)):
                b = a.copy()
                for i, c in enumerate(cols):
                    b[i, c] -= 1
                for rest in go(tuple(map(tuple, b))):
                    out.add(tuple(sorted(rest + (cols,))))
        memo[key] = out
        return out

    return frozenset(go(tuple(map(tuple, block))))


def member_brute(block) -> bool:
    return bool(brute_fiber(block))


def row_compositions(d, c):
    for cut in itertools.combinations(range(d + c - 1), c - 1):
        parts, prev = [], -1
        for x_ in cut + (d + c - 1,):
            parts.append(x_ - prev - 1)
            prev = x_
        yield tuple(parts)


def all_blocks(k, c, d):
    """Every k x c nonnegative matrix whose rows all sum to d."""
    rows = list(row_compositions(d, c))
    return [tuple(r) for r in itertools.product(rows, repeat=k)]
