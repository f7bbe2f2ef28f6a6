import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import all_increasing, brute_divides, rand_x_monomial, rand_y_monomial
from incgb.poly import Polynomial
from incgb.symmetry import (ONE, DomainTooSmall, IncMap, Monomial, OrbitSpec, RingSignature, Variable, apply_inc,
                            canonical_form, equivariant_divides, orbit_members_up_to_width, sinfty_to_inc_reps,
                            width, x, y)


def mono(*pairs):
    return Monomial(pairs)


def test_width_examples():
    assert width(ONE) == 0
    assert width(Monomial.var(x(1, 5))) == 5
    assert width(mono((y(2, 7), 1), (y(1, 3), 1))) == 7
    assert width(Polynomial.constant(4)) == 0


def test_rendering():
    assert str(x(1, 2)) == "x[1,2]"
    assert str(y(3, 1)) == "y(3,1)"
    assert str(mono((x(1, 1), 1), (x(1, 2), 2))) == "x[1,1]*x[1,2]^2"


def test_apply_inc_examples():
    m = mono((x(1, 1), 1), (x(1, 2), 2))
    assert apply_inc(IncMap.identity(2), m) == m
    assert apply_inc(IncMap((2, 4)), m) == mono((x(1, 2), 1), (x(1, 4), 2))
    assert apply_inc(IncMap((1, 3)), Monomial.var(y(2, 1))) == Monomial.var(y(3, 1))


def test_apply_inc_domain_too_small():
    with pytest.raises(DomainTooSmall):
        apply_inc(IncMap((1,)), Monomial.var(x(1, 2)))


def test_incmap_must_increase():
    with pytest.raises(ValueError):
        IncMap((2, 2))
    with pytest.raises(ValueError):
        IncMap((0, 1))


def test_incmap_compose_and_extend():
    r = IncMap((2, 5))
    s = IncMap((1, 3, 4, 6, 9))
    assert s.compose(r) == IncMap((3, 9))
    assert r.extend(4) == IncMap((2, 5, 6, 7))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_action_is_monoid_homomorphism(seed):
    rng = random.Random(seed)
    a = rand_x_monomial(rng, 2, 4, 3)
    b = rand_x_monomial(rng, 2, 4, 3)
    r1 = IncMap(tuple(sorted(rng.sample(range(1, 9), 4))))
    r2 = IncMap(tuple(sorted(rng.sample(range(1, 15), 8))))
    assert apply_inc(r1, a * b) == apply_inc(r1, a) * apply_inc(r1, b)
    assert apply_inc(r2.compose(r1), a) == apply_inc(r2, apply_inc(r1, a))


def test_sinfty_reps_examples():
    assert sinfty_to_inc_reps(Polynomial.variable(x(1, 1))) == {Polynomial.variable(x(1, 1))}
    assert sinfty_to_inc_reps(Polynomial.variable(y(1, 2))) == {Polynomial.variable(y(1, 2)),
                                                                Polynomial.variable(y(2, 1))}
    f = Polynomial.variable(x(1, 1)) + Polynomial.variable(x(1, 2))
    assert sinfty_to_inc_reps(f) == {f}


def test_sinfty_reps_respects_stabilizers():
    sig = RingSignature((OrbitSpec.symmetric("y", 2),))
    assert sinfty_to_inc_reps(Polynomial.variable(y(1, 2)), sig) == {Polynomial.variable(y(1, 2))}


def test_orbit_members_examples():
    f = Polynomial.variable(x(1, 1))
    assert orbit_members_up_to_width(f, 3) == {Polynomial.variable(x(1, j)) for j in (1, 2, 3)}
    g = Polynomial.from_monomial(mono((x(1, 1), 1), (x(1, 2), 1)))
    assert len(orbit_members_up_to_width(g, 3)) == 3
    assert orbit_members_up_to_width(g, 1) == set()


def test_orbit_members_cover_all_shifts():
    f = Polynomial.from_monomial(mono((x(1, 1), 1), (x(1, 3), 1))) - Polynomial.variable(x(1, 2))
    members = orbit_members_up_to_width(f, 5)
    assert all(g.width <= 5 for g in members)
    for rho in all_increasing(3, 5):
        assert apply_inc(rho, f) in members


def test_equivariant_divides_examples():
    hit = equivariant_divides(Monomial.var(x(1, 1)), mono((x(1, 3), 2), (x(1, 5), 1)))
    assert hit is not None
    rho, c = hit
    assert rho(1) == 3 and c == mono((x(1, 3), 1), (x(1, 5), 1))
    assert equivariant_divides(Monomial.var(x(1, 1), 2), mono((x(1, 1), 1), (x(1, 2), 1))) is None
    assert equivariant_divides(Monomial.var(y(1, 2)), Monomial.var(y(2, 1))) is None
    m = mono((y(1, 3), 1), (x(1, 2), 1))
    rho, c = equivariant_divides(m, m)
    assert c == ONE and apply_inc(rho, m) == m


def test_divisibility_respects_gaps():
    # x1*x3 cannot map onto x2*x3: the gap between 1 and 3 must survive
    a = mono((x(1, 1), 1), (x(1, 3), 1))
    assert equivariant_divides(a, mono((x(1, 2), 1), (x(1, 3), 1))) is None
    assert brute_divides(a, mono((x(1, 2), 1), (x(1, 3), 1))) is None
    assert equivariant_divides(Monomial.var(x(1, 2)), Monomial.var(x(1, 1))) is None


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_equivariant_divides_matches_enumeration(seed, use_y):
    rng = random.Random(seed)
    if use_y:
        a = rand_y_monomial(rng, 2, 4, 2)
        b = rand_y_monomial(rng, 2, 6, 4)
    else:
        a = rand_x_monomial(rng, 2, 4, 3)
        b = rand_x_monomial(rng, 2, 6, 5)
    hit = equivariant_divides(a, b)
    oracle = brute_divides(a, b)
    assert (hit is None) == (oracle is None)
    if hit is not None:
        rho, c = hit
        assert c * apply_inc(rho, a) == b


def test_divisibility_quasi_order():
    rng = random.Random(7)
    monos = [rand_x_monomial(rng, 1, 4, 3) for _ in range(40)]
    for a in monos:
        assert equivariant_divides(a, a) is not None
    for a, b, c in itertools.islice(itertools.permutations(monos, 3), 4000):
        if equivariant_divides(a, b) and equivariant_divides(b, c):
            assert equivariant_divides(a, c) is not None
    for a, b in itertools.permutations(monos, 2):
        if equivariant_divides(a, b) and equivariant_divides(b, a):
            assert canonical_form(a)[0] == canonical_form(b)[0]


def test_canonical_form_examples():
    m, rho = canonical_form(Monomial.var(x(1, 4)))
    assert m == Monomial.var(x(1, 1)) and rho == IncMap((4,))
    m, rho = canonical_form(mono((y(3, 7), 1), (y(7, 3), 1)))
    assert m == mono((y(1, 2), 1), (y(2, 1), 1)) and rho == IncMap((3, 7))
    base = mono((x(1, 1), 1), (x(1, 2), 1))
    m, rho = canonical_form(base)
    assert m == base and rho == IncMap.identity(2)


def test_canonical_form_recovers_input():
    rng = random.Random(3)
    for _ in range(50):
        a = rand_x_monomial(rng, 2, 8, 4)
        m, rho = canonical_form(a)
        assert apply_inc(rho, m) == a


def test_orbit_spec_validation():
    with pytest.raises(ValueError):
        OrbitSpec("y", 3, frozenset({(1, 0, 2), (0, 2, 1)}))  # not closed
    o = OrbitSpec.symmetric("y", 2)
    assert o.canonical_indices((5, 2)) == (2, 5)
    assert not o.is_trivial


def test_ring_signature_validation():
    with pytest.raises(ValueError):
        RingSignature((OrbitSpec("y", 1), OrbitSpec("y", 2)))
    with pytest.raises(ValueError):
        RingSignature((OrbitSpec.symmetric("y", 2),), "Yprime-ring")
    with pytest.raises(ValueError):
        RingSignature(())
    sig = RingSignature((OrbitSpec.symmetric("y", 2),))
    assert sig.contains(y(1, 2)) and not sig.contains(y(2, 1))
    assert not sig.contains(Variable("y", (), (1, 1)))
