"""Symmetric toric ideals: monomial maps, the free cover, matching monoids,
the lift of fibres, and the graph-ideal elimination pipeline."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .engine import reduce_basis, truncated_egb
from .orders import EliminationOrder, FiberRevLexOrder, GradedLexOrder, HybridToricOrder, MonomialOrder
from .poly import Polynomial
from .symmetry import ONE, Monomial, OrbitSpec, RingSignature, Variable, apply_permutation

X_NAME = "x"
Z_NAME = "z"


class NotEquivariant(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ImageTooWide(ValueError):
    pass


class NotMember(ValueError):
    """Exponent matrix outside the matching monoid."""


@dataclass(frozen=True)
class MonomialMapSpec:
    """An S-infinity-equivariant monomial map K[Y] -> K[X].

    ``images`` maps each orbit name to the image of its representative
    ``name(1, ..., k)``, a monomial in the variables ``x[r, j]``.
    """

    domain: RingSignature
    xrows: int
    images: dict = field(hash=False)

    def image_of(self, v: Variable) -> Monomial:
        """phi(v) for any variable v of the domain (by equivariance)."""
        img = self.images[v.orbit]
        return img.map_variables(lambda w: Variable(w.orbit, w.labels, tuple(v.indices[i - 1] for i in w.indices)))

    def evaluate(self, f):
        if isinstance(f, Monomial):
            out = ONE
            for v, e in f.items:
                out = out * self.image_of(v) ** e
            return out
        return f.map_monomials(self.evaluate)


def validate_map(spec: MonomialMapSpec) -> None:
    """Raise unless every image is narrow enough and stabilizer-fixed."""
    for o in spec.domain.orbits:
        if o.name in (X_NAME, Z_NAME):
            raise ValueError("orbit name %r is reserved" % o.name)
        if o.arity < 1:
            raise ValueError("orbit %s: arity must be at least 1" % o.name)
        if o.name not in spec.images:
            raise ValueError("no image given for orbit %s" % o.name)
        img = spec.images[o.name]
        for v, _ in img.items:
            if v.orbit != X_NAME or len(v.labels) != 1 or not 1 <= v.labels[0] <= spec.xrows:
                raise ValueError("image of %s uses %s, not an x[r,j] with r <= %d" % (o.name, v, spec.xrows))
        if img.width > o.arity:
            raise ImageTooWide("image of %s has width %d > arity %d" % (o.name, img.width, o.arity))
        for s in sorted(o.stabilizer):
            perm = {i + 1: s[i] + 1 for i in range(o.arity)}
            if apply_permutation(perm, img) != img:
                raise NotEquivariant("image of %s is not fixed by the stabilizer element %r" % (o.name, s),
                                     witness=s)


# ---------------------------------------------------------------------------
# free cover and the matching map


@dataclass
class FreeCover:
    spec: MonomialMapSpec  # phi o theta on the cover ring
    yprime: RingSignature
    base: RingSignature
    names: dict  # cover orbit name -> base orbit name

    @property
    def trivial(self) -> bool:
        return all(o.is_trivial for o in self.base.orbits)

    def theta_var(self, v: Variable) -> Variable:
        name = self.names[v.orbit]
        return self.base.canonical_variable(Variable(name, (), v.indices))

    def theta(self, f):
        if isinstance(f, Variable):
            return self.theta_var(f)
        if isinstance(f, Monomial):
            return f.map_variables(self.theta_var)
        return f.map_monomials(lambda m: m.map_variables(self.theta_var))

    def fiber(self, v: Variable) -> list:
        """Cover variables mapping to the base variable v."""
        o = self.base.orbit(v)
        cname = {b: c for c, b in self.names.items()}[v.orbit]
        return sorted({Variable(cname, (), tuple(v.indices[s[i]] for i in range(o.arity))) for s in o.stabilizer})

    def nu(self, m: Monomial, order: MonomialOrder) -> Monomial:
        """Right inverse of theta choosing the order-minimal preimage variable."""
        out = {}
        for v, e in m.items:
            best = min(self.fiber(v), key=lambda w: order.key(Monomial.var(w)))
            out[best] = out.get(best, 0) + e
        return Monomial(out)


def build_free_cover(spec: MonomialMapSpec) -> FreeCover:
    orbits = []
    names = {}
    images = {}
    for o in spec.domain.orbits:
        cname = o.name if o.is_trivial else o.name + "'"
        orbits.append(OrbitSpec(cname, o.arity))
        names[cname] = o.name
        images[cname] = spec.images[o.name]
    yprime = RingSignature(tuple(orbits), "Yprime-ring")
    return FreeCover(MonomialMapSpec(yprime, spec.xrows, images), yprime, spec.domain, names)


def _orbit_numbers(signature: RingSignature) -> dict:
    return {o.name: p for p, o in enumerate(signature.orbits, 1)}


def make_pi(signature: RingSignature) -> Callable[[Monomial], Monomial]:
    """The map y'_{p,(a_1..a_k)} -> prod_i z[p,i,a_i], memoised."""
    num = _orbit_numbers(signature)
    cache: dict = {}

    def pi(m: Monomial) -> Monomial:
        r = cache.get(m)
        if r is None:
            acc: dict = {}
            for v, e in m.items:
                p = num[v.orbit]
                for i, a in enumerate(v.indices, 1):
                    zv = Variable(Z_NAME, (p, i), (a,))
                    acc[zv] = acc.get(zv, 0) + e
            r = cache[m] = Monomial._raw(tuple(sorted(acc.items())))
        return r
    return pi


def pi_image(m: Monomial, signature: Optional[RingSignature] = None) -> Monomial:
    if signature is None:
        signature = _infer_signature(m)
    return make_pi(signature)(m)


def _infer_signature(m: Monomial) -> RingSignature:
    ar: dict = {}
    for v, _ in m.items:
        ar[v.orbit] = len(v.indices)
    if not ar:
        ar["y"] = 1
    return RingSignature(tuple(OrbitSpec(n, k) for n, k in sorted(ar.items())), "Yprime-ring")


def psi_image(zm: Monomial, spec: MonomialMapSpec) -> Monomial:
    """z[p,i,j] -> the part of phi(y_p) sitting at index i, moved to column j."""
    orbits = spec.domain.orbits
    acc: dict = {}
    for v, e in zm.items:
        p, i = v.labels
        (j,) = v.indices
        img = spec.images[orbits[p - 1].name]
        for w, ew in img.items:
            if w.indices == (i,):
                xv = Variable(X_NAME, w.labels, (j,))
                acc[xv] = acc.get(xv, 0) + ew * e
    return Monomial(acc)


# ---------------------------------------------------------------------------
# matching monoid


class ExponentMatrix:
    """Per-orbit k_p x w exponent matrices of a monomial in [Z]."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        arrs = []
        for b in blocks:
            a = np.asarray(b, dtype=np.int64)
            if a.ndim != 2:
                raise ValueError("each block must be a 2-d matrix")
            arrs.append(a)
        w = max((a.shape[1] for a in arrs), default=0)
        self.blocks = tuple(np.pad(a, ((0, 0), (0, w - a.shape[1]))) for a in arrs)

    @classmethod
    def single(cls, rows) -> "ExponentMatrix":
        return cls([rows])

    @classmethod
    def from_z(cls, zm: Monomial, arities) -> "ExponentMatrix":
        w = zm.width
        blocks = [np.zeros((k, w), dtype=np.int64) for k in arities]
        for v, e in zm.items:
            p, i = v.labels
            blocks[p - 1][i - 1, v.indices[0] - 1] += e
        return cls(blocks)

    @classmethod
    def of(cls, u: Monomial, signature: RingSignature) -> "ExponentMatrix":
        return cls.from_z(make_pi(signature)(u), [o.arity for o in signature.orbits])

    @property
    def width(self) -> int:
        return self.blocks[0].shape[1] if self.blocks else 0

    @property
    def arities(self) -> list:
        return [b.shape[0] for b in self.blocks]

    def _aligned(self, other: "ExponentMatrix"):
        if self.arities != other.arities:
            raise ValueError("exponent matrices of different shapes")
        w = max(self.width, other.width)
        pa = [np.pad(b, ((0, 0), (0, w - b.shape[1]))) for b in self.blocks]
        pb = [np.pad(b, ((0, 0), (0, w - b.shape[1]))) for b in other.blocks]
        return pa, pb

    def __add__(self, other):
        pa, pb = self._aligned(other)
        return ExponentMatrix([a + b for a, b in zip(pa, pb)])

    def __sub__(self, other):
        pa, pb = self._aligned(other)
        return ExponentMatrix([a - b for a, b in zip(pa, pb)])

    def __le__(self, other):
        pa, pb = self._aligned(other)
        return all((a <= b).all() for a, b in zip(pa, pb))

    def __eq__(self, other):
        if not isinstance(other, ExponentMatrix):
            return NotImplemented
        try:
            pa, pb = self._aligned(other)
        except ValueError:
            return False
        return all((a == b).all() for a, b in zip(pa, pb))

    def __hash__(self):
        trimmed = []
        for b in self.blocks:
            nz = np.nonzero(b.any(axis=0))[0]
            w = int(nz[-1]) + 1 if len(nz) else 0
            trimmed.append(tuple(map(tuple, b[:, :w])))
        return hash(tuple(trimmed))

    def row_sums(self) -> list:
        return [b.sum(axis=1) for b in self.blocks]

    def col_sums(self) -> list:
        return [b.sum(axis=0) for b in self.blocks]

    def degrees(self) -> list:
        """d_p per orbit, or None where the row sums are not all equal."""
        out = []
        for b in self.blocks:
            rs = b.sum(axis=1)
            out.append(int(rs[0]) if len(rs) and (rs == rs[0]).all() else (0 if not len(rs) else None))
        return out

    def to_z(self) -> Monomial:
        acc = {}
        for p, b in enumerate(self.blocks, 1):
            for (i, j), e in np.ndenumerate(b):
                if e:
                    acc[Variable(Z_NAME, (p, i + 1), (j + 1,))] = int(e)
        return Monomial(acc)

    def __repr__(self):
        return "ExponentMatrix(%s)" % [b.tolist() for b in self.blocks]


def mm_member(A: ExponentMatrix) -> bool:
    """Equal row sums d_p and column sums <= d_p in every block."""
    for b, d in zip(A.blocks, A.degrees()):
        if (b < 0).any() or d is None:
            return False
        if b.shape[1] and (b.sum(axis=0) > d).any():
            return False
    return True


def mm_divides(A: ExponentMatrix, B: ExponentMatrix) -> bool:
    if not (mm_member(A) and mm_member(B)):
        raise NotMember("both matrices must lie in the matching monoid")
    return A <= B and mm_member(B - A)


def mm_norm_distance(A: ExponentMatrix, B: ExponentMatrix) -> int:
    pa, pb = A._aligned(B)
    return int(sum(np.abs(a - b).sum() for a, b in zip(pa, pb)))


def _extract_sdr(rem: np.ndarray, d: int) -> tuple:
    """Lexicographically smallest column tuple hitting every tight column.

    Picks one positive entry per row in pairwise distinct columns so that the
    remainder keeps column sums <= d - 1.
    """
    k, w = rem.shape
    tight = {j for j in range(w) if rem[:, j].sum() == d}

    def feasible(fixed: list) -> bool:
        used = set(fixed)
        rows = list(range(len(fixed), k))
        need = tight - used
        # bipartite matching of remaining rows into unused columns covering `need`
        match_col: dict = {}

        def aug(r, seen, allowed):
            for j in allowed:
                if j in used or rem[r, j] <= 0 or j in seen:
                    continue
                seen.add(j)
                if j not in match_col or aug(match_col[j], seen, allowed):
                    match_col[j] = r
                    return True
            return False

        # cover the tight columns first; augmenting keeps them matched
        for j in sorted(need):
            ok = False
            for r in rows:
                if r in match_col.values():
                    continue
                if rem[r, j] > 0:
                    match_col[j] = r
                    ok = True
                    break
            if not ok:
                # try reassigning through augmenting paths from the column side
                if not _augment_col(j, rows, rem, used, match_col):
                    return False
        matched_rows = set(match_col.values())
        for r in rows:
            if r not in matched_rows and not aug(r, set(), range(w)):
                return False
        return True

    fixed: list = []
    for r in range(k):
        for j in range(w):
            if rem[r, j] > 0 and j not in fixed and feasible(fixed + [j]):
                fixed.append(j)
                break
        else:
            raise NotMember("no system of distinct representatives")
    return tuple(fixed)


def _augment_col(j, rows, rem, used, match_col) -> bool:
    row_of = dict(match_col)

    def visit(col, seen):
        for r in rows:
            if rem[r, col] <= 0 or r in seen:
                continue
            seen.add(r)
            owner = next((c for c, rr in row_of.items() if rr == r), None)
            if owner is None:
                row_of[col] = r
                return True
            del row_of[owner]
            row_of[col] = r
            if visit(owner, seen):
                return True
            del row_of[col]
            row_of[owner] = r
        return False

    if visit(j, set()):
        match_col.clear()
        match_col.update(row_of)
        return True
    return False


def mm_preimage(A: ExponentMatrix, signature: Optional[RingSignature] = None) -> Monomial:
    """A monomial u over the cover ring with pi(u) = z^A."""
    if not mm_member(A):
        raise NotMember("%r is not in the matching monoid" % (A,))
    if signature is None:
        names = ["y"] if len(A.blocks) == 1 else ["y%d" % p for p in range(1, len(A.blocks) + 1)]
    else:
        names = [o.name for o in signature.orbits]
    acc: dict = {}
    for name, b, d in zip(names, A.blocks, A.degrees()):
        rem = b.copy()
        for step in range(d):
            cols = _extract_sdr(rem, d - step)
            for i, j in enumerate(cols):
                rem[i, j] -= 1
            v = Variable(name, (), tuple(j + 1 for j in cols))
            acc[v] = acc.get(v, 0) + 1
    return Monomial(acc)


def lift_degree(u: Monomial, v: Monomial) -> int:
    """Total degree of the binomial (u - v) / gcd(u, v)."""
    g = u.gcd(v)
    return max((u / g).degree, (v / g).degree)


def lift(u: Monomial, B: ExponentMatrix, signature: Optional[RingSignature] = None) -> Monomial:
    """A preimage v of z^B close to u: deg((u-v)/gcd) <= 5 * ||A - B||."""
    return lift_with_kept(u, B, signature)[0]


def lift_with_kept(u: Monomial, B: ExponentMatrix, signature: Optional[RingSignature] = None) -> tuple:
    """``(v, u')`` where ``u'`` is the kept part of ``u`` and ``v / u'`` the completion."""
    if not mm_member(B):
        raise NotMember("target matrix is not in the matching monoid")
    if signature is None:
        signature = _infer_signature(u)
    names = [o.name for o in signature.orbits]
    dB = B.degrees()
    out = ONE
    kept_all = ONE
    for p, name in enumerate(names):
        Bp = B.blocks[p]
        k = Bp.shape[0]
        m = dB[p]
        seq = [v for v, e in u.items if v.orbit == name for _ in range(e)]
        w = max([Bp.shape[1]] + [max(v.indices) for v in seq])
        Bpad = np.pad(Bp, ((0, 0), (0, w - Bp.shape[1])))
        bcol = Bpad.sum(axis=0)
        run = np.zeros((k, w), dtype=np.int64)
        rcol = np.zeros(w, dtype=np.int64)
        kept = []
        for j, v in enumerate(seq, 1):
            cols = [a - 1 for a in v.indices]
            for i, c in enumerate(cols):
                run[i, c] += 1
                rcol[c] += 1
            if j > m:
                continue
            if any(run[i, c] > Bpad[i, c] for i, c in enumerate(cols)):
                continue
            others = np.ones(w, dtype=bool)
            others[cols] = False
            if (j - rcol[others] > m - bcol[others]).any():
                continue
            kept.append(v)
        uprime = Monomial([(v, 1) for v in kept])
        sub_sig = RingSignature((OrbitSpec(name, k),), "Yprime-ring")
        Ap = ExponentMatrix.of(uprime, sub_sig) if kept else ExponentMatrix([np.zeros((k, 0))])
        rest = ExponentMatrix([Bpad]) - Ap
        out = out * uprime * mm_preimage(rest, sub_sig)
        kept_all = kept_all * uprime
    return out, kept_all


# ---------------------------------------------------------------------------
# graph ideal and elimination


def toric_orders(yprime: RingSignature):
    """The hybrid order on [Y'] and the elimination order on [Y'][X]."""
    pi = make_pi(yprime)
    order1 = GradedLexOrder()
    order2 = FiberRevLexOrder()
    hybrid = HybridToricOrder(pi, order1, order2, signature=yprime)
    elim = EliminationOrder({X_NAME}, pi, GradedLexOrder(), order1, order2)
    return hybrid, elim


@dataclass
class GraphIdealSetup:
    product_ring: RingSignature
    generators: list
    elim_order: EliminationOrder
    hybrid_order: HybridToricOrder
    spec: MonomialMapSpec


def graph_setup(spec: MonomialMapSpec) -> GraphIdealSetup:
    """Inc(N)-generators sigma y_p - phi(sigma y_p) of the graph ideal."""
    if not all(o.is_trivial for o in spec.domain.orbits):
        raise ValueError("graph_setup needs trivial stabilizers; build the free cover first")
    gens = []
    for o in spec.domain.orbits:
        for perm in itertools.permutations(range(1, o.arity + 1)):
            yv = Variable(o.name, (), perm)
            gens.append(Polynomial([(Monomial.var(yv), 1), (spec.image_of(yv), -1)]))
    xs = RingSignature.x_ring(spec.xrows).orbits
    ring = RingSignature(tuple(spec.domain.orbits) + tuple(xs), "product-ring")
    hybrid, elim = toric_orders(spec.domain)
    return GraphIdealSetup(ring, gens, elim, hybrid, spec)


class TransportedOrder(MonomialOrder):
    """Order on [Y]: compare the order-minimal lifts to the cover ring."""

    kind = "transported"

    def __init__(self, cover: FreeCover, base_order: MonomialOrder):
        super().__init__(cover.base)
        self.cover = cover
        self.base_order = base_order

    def _key(self, m):
        return self.base_order.key(self.cover.nu(m, self.base_order))


@dataclass
class KernelResult:
    basis: list  # over Y
    cover_basis: list  # over the cover ring Y'
    graph_basis: list
    setup: GraphIdealSetup
    cover: FreeCover
    order: MonomialOrder  # order on Y the basis is a Groebner basis for
    report: object


def kernel_egb_details(spec: MonomialMapSpec, max_width: int = 8, strategy: str = "queue",
                       threads: int = 1, progress=None) -> KernelResult:
    validate_map(spec)
    cover = build_free_cover(spec)
    setup = graph_setup(cover.spec)
    H, report = truncated_egb(setup.generators, setup.elim_order, max_width, strategy=strategy,
                              symmetric=True, threads=threads, progress=progress)
    elim = setup.elim_order
    Gp = [h for h in H if not any(elim.has_x(m) for m in h.terms)]
    hybrid = setup.hybrid_order
    Gp = reduce_basis(Gp, hybrid, symmetric=True)
    if cover.trivial:
        return KernelResult(Gp, Gp, H, setup, cover, hybrid, report)
    order = TransportedOrder(cover, hybrid)
    G = [cover.theta(g) for g in Gp]
    G = reduce_basis([g for g in G if g], order, symmetric=True)
    return KernelResult(G, Gp, H, setup, cover, order, report)


def compute_kernel_egb(spec: MonomialMapSpec, max_width: int = 8, strategy: str = "queue",
                       threads: int = 1, progress=None) -> list:
    """Finite Inc(N)-equivariant Groebner basis of ker(phi)."""
    return kernel_egb_details(spec, max_width, strategy, threads, progress).basis


def pi_spec(signature: RingSignature) -> MonomialMapSpec:
    """The matching map pi written as a monomial map into an X-ring."""
    images = {}
    row = 0
    for o in signature.orbits:
        images[o.name] = Monomial((Variable(X_NAME, (row + i,), (i,)), 1) for i in range(1, o.arity + 1))
        row += o.arity
    return MonomialMapSpec(signature, row, images)


def kernel_pi_egb(signature: RingSignature, max_width: int = 8, threads: int = 1, progress=None) -> list:
    """Equivariant Groebner basis of ker(pi) for the hybrid order."""
    if not all(o.is_trivial for o in signature.orbits):
        raise ValueError("kernel_pi_egb expects a ring with trivial stabilizers")
    return compute_kernel_egb(pi_spec(signature), max_width, threads=threads, progress=progress)
