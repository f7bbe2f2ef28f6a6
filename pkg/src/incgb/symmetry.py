"""Variables, monomials and the Inc(N) / finite permutation actions on them.

A variable carries an orbit name, a tuple of fixed labels (rows of an
X-ring, ``(p, i)`` for the Z-ring) and a tuple of natural indices that the
symmetric group permutes.  Monomials are immutable sorted tuples of
``(variable, exponent)`` pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional


class DomainTooSmall(ValueError):
    """An IncMap was applied to an element wider than its domain."""


class Variable(NamedTuple):
    orbit: str
    labels: tuple
    indices: tuple

    @property
    def width(self) -> int:
        return max(self.indices, default=0)

    def __str__(self):
        if self.labels:
            return "%s[%s]" % (self.orbit, ",".join(map(str, self.labels + self.indices)))
        return "%s(%s)" % (self.orbit, ",".join(map(str, self.indices)))


def x(row: int, j: int, name: str = "x") -> Variable:
    return Variable(name, (row,), (j,))


def y(*indices: int, name: str = "y") -> Variable:
    return Variable(name, (), tuple(indices))


def z(p: int, i: int, j: int) -> Variable:
    return Variable("z", (p, i), (j,))


class Monomial:
    """Product of variables with positive exponents, stored sorted."""

    __slots__ = ("items", "_hash", "_width", "_degree")

    def __init__(self, items: Iterable = ()):
        if isinstance(items, dict):
            items = items.items()
        acc: dict = {}
        for v, e in items:
            if e < 0:
                raise ValueError("negative exponent for %s" % (v,))
            if e:
                acc[v] = acc.get(v, 0) + e
        self._set(tuple(sorted(acc.items())))

    @classmethod
    def _raw(cls, items: tuple) -> "Monomial":
        m = cls.__new__(cls)
        m._set(items)
        return m

    def _set(self, items: tuple):
        self.items = items
        self._hash = hash(items)
        self._width = max((v.width for v, _ in items), default=0)
        self._degree = sum(e for _, e in items)

    @classmethod
    def var(cls, v: Variable, e: int = 1) -> "Monomial":
        return cls._raw(((v, e),)) if e else ONE

    @property
    def width(self) -> int:
        return self._width

    @property
    def degree(self) -> int:
        return self._degree

    def as_dict(self) -> dict:
        return dict(self.items)

    def variables(self) -> list:
        return [v for v, _ in self.items]

    def support(self) -> list:
        """Sorted list of the natural indices occurring in the monomial."""
        return sorted({i for v, _ in self.items for i in v.indices})

    def exponent(self, v: Variable) -> int:
        for w, e in self.items:
            if w == v:
                return e
        return 0

    def is_one(self) -> bool:
        return not self.items

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._hash == other._hash and self.items == other.items

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other.items:
            return self
        if not self.items:
            return other
        acc = dict(self.items)
        for v, e in other.items:
            acc[v] = acc.get(v, 0) + e
        return Monomial._raw(tuple(sorted(acc.items())))

    def __pow__(self, n: int) -> "Monomial":
        if n == 0:
            return ONE
        return Monomial._raw(tuple((v, e * n) for v, e in self.items))

    def divides(self, other: "Monomial") -> bool:
        if self._degree > other._degree:
            return False
        od = dict(other.items)
        return all(od.get(v, 0) >= e for v, e in self.items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        acc = dict(self.items)
        for v, e in other.items:
            r = acc.get(v, 0) - e
            if r < 0:
                raise ValueError("%s does not divide %s" % (other, self))
            if r:
                acc[v] = r
            else:
                del acc[v]
        return Monomial._raw(tuple(sorted(acc.items())))

    def lcm(self, other: "Monomial") -> "Monomial":
        acc = dict(self.items)
        for v, e in other.items:
            if acc.get(v, 0) < e:
                acc[v] = e
        return Monomial._raw(tuple(sorted(acc.items())))

    def gcd(self, other: "Monomial") -> "Monomial":
        od = dict(other.items)
        return Monomial._raw(tuple((v, min(e, od[v])) for v, e in self.items if v in od))

    def is_coprime(self, other: "Monomial") -> bool:
        od = dict(other.items)
        return not any(v in od for v, _ in self.items)

    def map_variables(self, fn) -> "Monomial":
        """Apply ``fn`` to every variable; merges exponents on collisions."""
        return Monomial((fn(v), e) for v, e in self.items)

    def __str__(self):
        if not self.items:
            return "1"
        return "*".join(str(v) if e == 1 else "%s^%d" % (v, e) for v, e in self.items)

    def __repr__(self):
        return "Monomial(%s)" % self


ONE = Monomial()


@dataclass(frozen=True)
class IncMap:
    """Strictly increasing map on the finite domain {1, ..., n}."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        prev = 0
        for a in imgs:
            if a <= prev:
                raise ValueError("IncMap images must be positive and strictly increasing: %r" % (imgs,))
            prev = a

    @classmethod
    def _raw(cls, images: tuple) -> "IncMap":
        # trusted constructor: images already strictly increasing ints
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @classmethod
    def identity(cls, n: int) -> "IncMap":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def shift(cls, n: int, by: int = 1) -> "IncMap":
        return cls(tuple(range(1 + by, n + 1 + by)))

    @property
    def domain_size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise DomainTooSmall("index %d outside IncMap domain [%d]" % (i, len(self.images)))
        return self.images[i - 1]

    def compose(self, inner: "IncMap") -> "IncMap":
        """The map ``i -> self(inner(i))``."""
        return IncMap(tuple(self(j) for j in inner.images))

    def extend(self, n: int) -> "IncMap":
        """Extend to domain [n] by consecutive values past the last image."""
        imgs = list(self.images)
        last = imgs[-1] if imgs else 0
        while len(imgs) < n:
            last += 1
            imgs.append(last)
        return IncMap(tuple(imgs))

    def __str__(self):
        return "(%s)" % ",".join(map(str, self.images))


def width(obj) -> int:
    """Largest natural index occurring; 0 for constants."""
    return obj.width


def _map_var(rho: IncMap, v: Variable) -> Variable:
    if not v.indices:
        return v
    imgs = rho.images
    try:
        return Variable(v.orbit, v.labels, tuple(imgs[i - 1] for i in v.indices))
    except IndexError:
        raise DomainTooSmall("IncMap of size %d cannot act on %s" % (len(imgs), v)) from None


def apply_inc(rho: IncMap, obj):
    """Act by ``rho`` on a variable, monomial or polynomial.

    Increasing maps preserve the relative order of indices, so variables that
    are stabilizer-canonical stay canonical.
    """
    if isinstance(obj, Variable):
        return _map_var(rho, obj)
    if isinstance(obj, Monomial):
        if obj.width > rho.domain_size:
            raise DomainTooSmall("IncMap of size %d cannot act on width %d" % (rho.domain_size, obj.width))
        # increasing maps preserve the lexicographic order of index tuples
        return Monomial._raw(tuple((_map_var(rho, v), e) for v, e in obj.items))
    if hasattr(obj, "map_monomials"):
        if obj.width > rho.domain_size:
            raise DomainTooSmall("IncMap of size %d cannot act on width %d" % (rho.domain_size, obj.width))
        return obj.map_monomials(lambda m: apply_inc(rho, m), injective=True)
    raise TypeError("cannot apply IncMap to %r" % type(obj))


def apply_permutation(perm: dict, obj, canon=None):
    """Act by a finite permutation of N given as a dict (identity elsewhere).

    ``canon`` re-canonicalizes variables under orbit stabilizers.
    """
    def mv(v):
        w = Variable(v.orbit, v.labels, tuple(perm.get(i, i) for i in v.indices))
        return canon(w) if canon else w

    if isinstance(obj, Variable):
        return mv(obj)
    if isinstance(obj, Monomial):
        return obj.map_variables(mv)
    return obj.map_monomials(lambda m: m.map_variables(mv), injective=canon is None)


def support_of(obj) -> list:
    if isinstance(obj, Monomial):
        return obj.support()
    return sorted({i for m in obj.monomials() for i in m.support()})


def canonical_form(obj):
    """Compress the index support onto {1, ..., s}.

    Returns ``(compressed, rho)`` with ``apply_inc(rho, compressed) == obj``.
    """
    supp = support_of(obj)
    rho = IncMap(tuple(supp))
    if supp == list(range(1, len(supp) + 1)):
        return obj, rho
    down = {a: i for i, a in enumerate(supp, 1)}
    return apply_permutation_partial(down, obj), rho


def apply_permutation_partial(mapping: dict, obj):
    # order-preserving relabeling on the support, so no canonicalization needed
    def mv(v):
        return Variable(v.orbit, v.labels, tuple(mapping[i] for i in v.indices)) if v.indices else v

    if isinstance(obj, Monomial):
        return Monomial._raw(tuple((mv(v), e) for v, e in obj.items))
    return obj.map_monomials(
        lambda m: Monomial._raw(tuple((mv(v), e) for v, e in m.items)), injective=True)


def increasing_maps(n: int, m: int) -> Iterator[IncMap]:
    """All strictly increasing maps [n] -> [m], lexicographically."""
    for c in itertools.combinations(range(1, m + 1), n):
        yield IncMap(c)


def orbit_members_up_to_width(f, n: int) -> set:
    """Elements ``rho f`` (rho in Inc(N)) whose width is at most ``n``."""
    w = f.width
    if n < w:
        return set()
    return {apply_inc(rho, f) for rho in increasing_maps(w, n)}


def _class_of(v: Variable):
    return (v.orbit, v.labels, len(v.indices))


def equivariant_divides(a: Monomial, b: Monomial) -> Optional[tuple]:
    """Search for ``rho`` in Inc(N) with ``rho(a) | b``.

    Returns ``(rho, c)`` with ``c * apply_inc(rho, a) == b`` where ``rho`` is
    defined on [w(a)], or ``None``.  Among all witnesses the one with the
    lexicographically smallest image sequence is returned.
    """
    if a.degree > b.degree:
        return None
    if not a.items:
        return IncMap(()), b
    bd = dict(b.items)
    # per-class exponent totals must dominate
    need: dict = {}
    for v, e in a.items:
        k = _class_of(v)
        need[k] = need.get(k, 0) + e
    have: dict = {}
    for v, e in b.items:
        k = _class_of(v)
        have[k] = have.get(k, 0) + e
    for k, e in need.items():
        if have.get(k, 0) < e:
            return None
    for v, e in a.items:
        if not v.indices and bd.get(v, 0) < e:
            return None

    sa = a.support()
    sb = b.support()
    if len(sa) > len(sb):
        return None
    pos = {s: t for t, s in enumerate(sa)}
    # variables checkable once the support prefix up to their last index is fixed
    ready: list = [[] for _ in sa]
    for v, e in a.items:
        if v.indices:
            ready[max(pos[i] for i in v.indices)].append((v, e))
    assign = [0] * len(sa)
    nb = len(sb)

    def search(t: int, start: int) -> bool:
        if t == len(sa):
            return True
        # leave room for the remaining support elements
        for jb in range(start, nb - (len(sa) - t) + 1):
            val = sb[jb]
            if t == 0:
                if val < sa[0]:
                    continue
            elif val - assign[t - 1] < sa[t] - sa[t - 1]:
                continue
            assign[t] = val
            ok = True
            for v, e in ready[t]:
                img = Variable(v.orbit, v.labels, tuple(assign[pos[i]] for i in v.indices))
                if bd.get(img, 0) < e:
                    ok = False
                    break
            if ok and search(t + 1, jb + 1):
                return True
        return False

    if not search(0, 0):
        return None
    amap = dict(zip(sa, assign))
    imgs = []
    for i in range(1, a.width + 1):
        if i in amap:
            imgs.append(amap[i])
        else:
            # gap: place right after the previous image; gap sizes were checked
            imgs.append(imgs[-1] + 1 if imgs else amap[sa[0]] - (sa[0] - i))
    rho = IncMap(tuple(imgs))
    ra = apply_inc(rho, a)
    return rho, b / ra


@dataclass(frozen=True)
class OrbitSpec:
    """One S-infinity orbit of variables.

    ``stabilizer`` holds position permutations ``s`` (0-based tuples) such
    that ``name(a_1..a_k)`` and ``name(a_s(1)..a_s(k))`` are the same variable.
    """

    name: str
    arity: int
    stabilizer: frozenset = frozenset()
    labels: tuple = ()

    def __post_init__(self):
        ident = tuple(range(self.arity))
        stab = frozenset(tuple(s) for s in self.stabilizer) | {ident}
        object.__setattr__(self, "stabilizer", stab)
        for s in stab:
            if sorted(s) != list(range(self.arity)):
                raise ValueError("stabilizer element %r is not a permutation of %d positions" % (s, self.arity))
        for s in stab:
            for t in stab:
                if tuple(s[t[i]] for i in range(self.arity)) not in stab:
                    raise ValueError("stabilizer of %s is not closed under composition" % self.name)

    @property
    def key(self):
        return (self.name, self.labels)

    @property
    def is_trivial(self) -> bool:
        return len(self.stabilizer) == 1

    @classmethod
    def symmetric(cls, name: str, arity: int) -> "OrbitSpec":
        return cls(name, arity, frozenset(itertools.permutations(range(arity))))

    def canonical_indices(self, idx: tuple) -> tuple:
        if len(self.stabilizer) == 1:
            return idx
        return min(tuple(idx[s[i]] for i in range(self.arity)) for s in self.stabilizer)

    def representative(self) -> Variable:
        return Variable(self.name, self.labels, tuple(range(1, self.arity + 1)))

    def variables_up_to_width(self, n: int) -> list:
        out = set()
        for idx in itertools.permutations(range(1, n + 1), self.arity):
            out.add(Variable(self.name, self.labels, self.canonical_indices(idx)))
        return sorted(out)


@dataclass(frozen=True)
class RingSignature:
    orbits: tuple
    kind: str = "Y-ring"
    _by_key: dict = field(default=None, compare=False, repr=False, hash=False)

    KINDS = ("Y-ring", "Yprime-ring", "Z-ring", "X-ring", "product-ring")

    def __post_init__(self):
        orbits = tuple(self.orbits)
        object.__setattr__(self, "orbits", orbits)
        if not orbits:
            raise ValueError("a ring signature needs at least one orbit")
        if self.kind not in self.KINDS:
            raise ValueError("unknown ring kind %r" % self.kind)
        keys = [o.key for o in orbits]
        if len(set(keys)) != len(keys):
            raise ValueError("orbit ids must be unique")
        if self.kind in ("Yprime-ring", "Z-ring", "X-ring"):
            if not all(o.is_trivial for o in orbits):
                raise ValueError("%s orbits must have trivial stabilizers" % self.kind)
        object.__setattr__(self, "_by_key", {o.key: o for o in orbits})

    @classmethod
    def x_ring(cls, rows: int, name: str = "x") -> "RingSignature":
        return cls(tuple(OrbitSpec(name, 1, labels=(r,)) for r in range(1, rows + 1)), "X-ring")

    def orbit(self, v: Variable) -> Optional[OrbitSpec]:
        o = self._by_key.get((v.orbit, v.labels))
        if o is None or o.arity != len(v.indices):
            return None
        return o

    def contains(self, v: Variable) -> bool:
        o = self.orbit(v)
        return (o is not None and len(set(v.indices)) == len(v.indices)
                and all(i >= 1 for i in v.indices) and o.canonical_indices(v.indices) == v.indices)

    def contains_monomial(self, m: Monomial) -> bool:
        return all(self.contains(v) for v, _ in m.items)

    def canonical_variable(self, v: Variable) -> Variable:
        o = self.orbit(v)
        if o is None:
            return v
        return Variable(v.orbit, v.labels, o.canonical_indices(v.indices))

    def variables_up_to_width(self, n: int) -> list:
        return [v for o in self.orbits for v in o.variables_up_to_width(n)]

    def monomials(self, width_cap: int, deg_cap: int) -> list:
        """All monomials of width <= width_cap and total degree <= deg_cap."""
        vs = self.variables_up_to_width(width_cap)
        out = []
        for d in range(deg_cap + 1):
            for combo in itertools.combinations_with_replacement(vs, d):
                acc: dict = {}
                for v in combo:
                    acc[v] = acc.get(v, 0) + 1
                out.append(Monomial._raw(tuple(sorted(acc.items()))))
        return out


def sinfty_to_inc_reps(f, signature: Optional[RingSignature] = None) -> set:
    """The elements ``tau f`` for tau in S_{w(f)}, deduplicated.

    Their Inc(N)-orbits together make up the S-infinity orbit of ``f``.
    """
    w = f.width
    canon = signature.canonical_variable if signature is not None else None
    out = set()
    for perm in itertools.permutations(range(1, w + 1)):
        out.add(apply_permutation(dict(zip(range(1, w + 1), perm)), f, canon))
    return out
