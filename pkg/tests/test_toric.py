import itertools
import random

import numpy as np
import pytest

from helpers import all_blocks, brute_fiber, member_brute, rand_y_monomial
from incgb.engine import classical_buchberger, generator_truncation
from incgb.poly import Polynomial, Reducer
from incgb.symmetry import ONE, Monomial, OrbitSpec, RingSignature, Variable, x, y
from incgb.toric import (ExponentMatrix, MonomialMapSpec, NotEquivariant, NotMember, ImageTooWide,
                         build_free_cover, compute_kernel_egb, graph_setup, kernel_egb_details, kernel_pi_egb,
                         lift, lift_degree, lift_with_kept, make_pi, mm_divides, mm_member, mm_norm_distance,
                         mm_preimage, pi_image, psi_image, validate_map)

Y2 = RingSignature((OrbitSpec("y", 2),), "Yprime-ring")


def mono(*pairs):
    return Monomial(pairs)


def Z(p, i, j):
    return Variable("z", (p, i), (j,))


def spec(arity, img, symmetric=False):
    o = OrbitSpec.symmetric("y", arity) if symmetric else OrbitSpec("y", arity)
    return MonomialMapSpec(RingSignature((o,), "Y-ring"), 1, {"y": img})


PAIR = mono((x(1, 1), 1), (x(1, 2), 1))


def test_validate_map_examples():
    validate_map(spec(2, PAIR))
    validate_map(spec(2, PAIR, symmetric=True))
    with pytest.raises(NotEquivariant) as exc:
        validate_map(spec(2, mono((x(1, 1), 2), (x(1, 2), 1)), symmetric=True))
    assert exc.value.witness == (1, 0)
    with pytest.raises(ImageTooWide):
        validate_map(spec(1, mono((x(1, 2), 1))))
    with pytest.raises(ValueError):
        validate_map(MonomialMapSpec(RingSignature((OrbitSpec("y", 1),), "Y-ring"), 1,
                                     {"y": Monomial.var(x(2, 1))}))


def test_free_cover_examples():
    triv = build_free_cover(spec(2, PAIR))
    assert triv.trivial and triv.theta(Monomial.var(y(2, 1))) == Monomial.var(y(2, 1))
    cov = build_free_cover(spec(2, PAIR, symmetric=True))
    assert not cov.trivial
    base = Variable("y", (), (1, 2))
    assert cov.fiber(base) == [Variable("y'", (), (1, 2)), Variable("y'", (), (2, 1))]
    assert {cov.theta_var(v) for v in cov.fiber(base)} == {base}
    one = build_free_cover(spec(1, mono((x(1, 1), 1))))
    assert one.yprime.orbits == one.base.orbits


def test_factorization_phi_theta_equals_psi_pi():
    s = spec(2, PAIR, symmetric=True)
    cov = build_free_cover(s)
    rng = random.Random(5)
    pi = make_pi(cov.yprime)
    for _ in range(50):
        u = rand_y_monomial(rng, 2, 5, 3, name="y'")
        assert s.evaluate(cov.theta(u)) == psi_image(pi(u), cov.spec)


def test_pi_image_examples():
    assert pi_image(Monomial.var(y(1, 2)), Y2) == mono((Z(1, 1, 1), 1), (Z(1, 2, 2), 1))
    assert pi_image(Monomial.var(y(3, 1)), Y2) == mono((Z(1, 1, 3), 1), (Z(1, 2, 1), 1))
    rng = random.Random(1)
    for _ in range(50):
        u, v = rand_y_monomial(rng), rand_y_monomial(rng)
        assert pi_image(u * v, Y2) == pi_image(u, Y2) * pi_image(v, Y2)


def test_mm_member_examples():
    assert mm_member(ExponentMatrix.single(np.zeros((2, 0))))
    assert mm_member(ExponentMatrix.single([[1, 0, 1], [0, 1, 1]]))
    assert not mm_member(ExponentMatrix.single([[1, 1], [2, 0]]))


def test_mm_divides_examples():
    A = ExponentMatrix.of(Monomial.var(y(1, 2)), Y2)
    B = ExponentMatrix.of(mono((y(1, 2), 1), (y(3, 4), 1)), Y2)
    assert mm_divides(A, A) and mm_divides(A, B)
    C = ExponentMatrix.single([[1, 0, 1], [0, 1, 1]])
    assert A <= C and not mm_divides(A, C)
    assert not member_brute((C - A).blocks[0])
    with pytest.raises(NotMember):
        mm_divides(A, ExponentMatrix.single([[1, 1], [2, 0]]))


def test_mm_preimage_examples():
    A = ExponentMatrix.single([[1, 0, 1], [0, 1, 1]])
    assert mm_preimage(A, Y2) == mono((y(1, 3), 1), (y(3, 2), 1))
    with pytest.raises(NotMember):
        mm_preimage(ExponentMatrix.single([[1, 1], [2, 0]]))
    rng = random.Random(2)
    sig3 = RingSignature((OrbitSpec("y", 3),), "Yprime-ring")
    for _ in range(100):
        u = rand_y_monomial(rng, 3, 6, 4)
        assert pi_image(mm_preimage(ExponentMatrix.of(u, sig3), sig3), sig3) == pi_image(u, sig3)


def test_mm_oracle_small_exhaustive():
    for c in (2, 3):
        blocks = [b for d in range(3) for b in all_blocks(2, c, d)]
        for b in blocks:
            assert mm_member(ExponentMatrix.single(b)) == member_brute(b)


def test_mm_norm_distance():
    A = ExponentMatrix.single([[1, 0]])
    B = ExponentMatrix.single([[0, 1]])
    assert mm_norm_distance(A, A) == 0
    assert mm_norm_distance(A, B) == mm_norm_distance(B, A) == 2


def test_lift_examples():
    u = Monomial.var(y(1, 2))
    assert lift(u, ExponentMatrix.of(u, Y2), Y2) == u
    B = ExponentMatrix.of(Monomial.var(y(1, 3)), Y2)
    v = lift(u, B, Y2)
    assert v == Monomial.var(y(1, 3))
    assert lift_degree(u, v) == 1 <= 5 * mm_norm_distance(ExponentMatrix.of(u, Y2), B)


def test_lift_bound_sample():
    rng = random.Random(8)
    for _ in range(150):
        k = rng.randint(1, 3)
        sig = RingSignature((OrbitSpec("y", k),), "Yprime-ring")
        u = rand_y_monomial(rng, k, 6, 3)
        B = ExponentMatrix.of(rand_y_monomial(rng, k, 6, 3), sig)
        v, kept = lift_with_kept(u, B, sig)
        assert ExponentMatrix.of(v, sig) == B
        assert kept.divides(u) and kept.divides(v)
        assert lift_degree(u, v) <= 5 * mm_norm_distance(ExponentMatrix.of(u, sig), B)


def test_graph_setup_examples():
    setup = graph_setup(spec(2, PAIR))
    xx = Polynomial.from_monomial(PAIR)
    assert set(setup.generators) == {Polynomial.variable(y(1, 2)) - xx, Polynomial.variable(y(2, 1)) - xx}
    assert len(graph_setup(spec(1, mono((x(1, 1), 2)))).generators) == 1

    def subst(v):
        return Monomial.var(v) if v.orbit == "x" else setup.spec.image_of(v)
    assert all(not g.evaluate(subst) for g in setup.generators)


def test_identity_map_has_zero_kernel():
    assert compute_kernel_egb(spec(1, mono((x(1, 1), 1)))) == []


def test_ordered_pairs_kernel():
    s = spec(2, PAIR)
    G = compute_kernel_egb(s)
    assert any(str(g) == "y(1,2) - y(2,1)" for g in G)
    assert all(not s.evaluate(g) for g in G)


def test_unordered_pairs_kernel():
    s = spec(2, PAIR, symmetric=True)
    G = compute_kernel_egb(s)
    assert G and all(g.degree == 2 and len(g) == 2 for g in G)
    assert all(not s.evaluate(g) for g in G)


def test_ordered_pairs_match_classical_elimination_at_width_4():
    res = kernel_egb_details(spec(2, PAIR))
    elim = res.setup.elim_order
    B = classical_buchberger(generator_truncation(res.setup.generators, 4), elim)
    K = [b for b in B if not any(elim.has_x(m) for m in b.terms)]
    red = Reducer(res.basis, res.order)
    assert K and all(not red.reduce(k) for k in K)


def test_kernel_pi_trivial_arity():
    assert kernel_pi_egb(RingSignature((OrbitSpec("y", 1),), "Yprime-ring")) == []
    with pytest.raises(ValueError):
        kernel_pi_egb(RingSignature((OrbitSpec.symmetric("y", 2),), "Yprime-ring"))


def test_exponent_matrix_basics():
    A = ExponentMatrix.of(mono((y(1, 2), 1), (y(3, 1), 1)), Y2)
    assert A.width == 3 and A.arities == [2]
    assert A.degrees() == [2]
    assert A.to_z() == pi_image(mono((y(1, 2), 1), (y(3, 1), 1)), Y2)
    assert hash(A) == hash(ExponentMatrix.single(np.pad(A.blocks[0], ((0, 0), (0, 2)))))
    assert ExponentMatrix.single([[1, 0]]).degrees() == [1]
    assert ExponentMatrix.single([[1, 0], [0, 0]]).degrees() == [None]
    assert ONE.degree == 0
    assert brute_fiber([[0, 0]]) == frozenset({()})
    assert list(itertools.islice(all_blocks(1, 2, 1), 5)) == [((0, 1),), ((1, 0),)]
