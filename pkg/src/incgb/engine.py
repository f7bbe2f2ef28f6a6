"""Equivariant Buchberger, the truncated (width-by-width) variant, and a
classical finite-variable Buchberger used for truncations and as oracle."""

from __future__ import annotations

import heapq
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .poly import Polynomial, Reducer, leading_term, monic
from .spairs import SPair, spair_generators
from .symmetry import canonical_form, equivariant_divides, orbit_members_up_to_width

log = logging.getLogger(__name__)

DEFAULT_WIDTH_CAP = 12


@dataclass
class TruncationReport:
    width: int
    basis: list
    is_equivariant_gb: bool
    certificate: list = field(default_factory=list)  # (SPair, nonzero normal form)


@dataclass
class BasisState:
    generators: list
    queue: list
    width_cursor: int
    stats: dict


class WidthCapExceeded(RuntimeError):
    def __init__(self, msg, state: BasisState):
        super().__init__(msg)
        self.state = state


class MaxWidthReached(RuntimeError):
    def __init__(self, msg, report: TruncationReport):
        super().__init__(msg)
        self.report = report


def poly_sort_key(f: Polynomial):
    return (f.width, f.degree, str(f))


def _width_of(F) -> int:
    return max((f.width for f in F), default=0)


def generator_truncation(F: Iterable[Polynomial], n: int) -> list:
    """Generators of the ideal spanned by the Inc(N)-images of F inside R_n."""
    out = set()
    for f in F:
        if f:
            out |= orbit_members_up_to_width(f, n)
    return sorted(out, key=poly_sort_key)


def reduce_basis(G: Sequence[Polynomial], order, symmetric: bool = False) -> list:
    """Drop elements with Pi-divisible leads, make monic, tail-reduce.

    The orbits of the result span the same initial ideal as those of ``G``.
    """
    polys = []
    for g in G:
        if not g:
            continue
        g = monic(g, order)
        if symmetric:
            g = canonical_form(g)[0]
        polys.append(g)
    if any(g.is_constant() for g in polys):
        return [Polynomial.constant(1)]
    key = order.key
    polys.sort(key=lambda g: (key(leading_term(g, order).monomial), poly_sort_key(g)))
    kept: list = []
    kept_leads: list = []
    for g in polys:
        lm = leading_term(g, order).monomial
        if any(equivariant_divides(a, lm) is not None for a in kept_leads):
            continue
        kept.append(g)
        kept_leads.append(lm)
    red = Reducer(kept, order)
    out = []
    for g in kept:
        lt = leading_term(g, order)
        tail = Polynomial._raw({m: c for m, c in g.terms.items() if m != lt.monomial})
        t = red.reduce(tail)
        h = t + Polynomial._raw({lt.monomial: lt.coefficient})
        if symmetric:
            h = canonical_form(h)[0]
        out.append(h)
    return out


# ---------------------------------------------------------------------------
# classical Buchberger in finitely many variables


def _classical_update(f, G, B, ih, order):
    # Gebauer-Moeller pair criteria
    mh = f[ih][0]

    def lcm(a, b):
        return a.lcm(b)

    C = sorted(G)
    D = []
    while C:
        ig = C.pop()
        mg = f[ig][0]
        lhg = lcm(mh, mg)

        def lcm_divides(ip):
            return lcm(mh, f[ip][0]).divides(lhg)

        if mh * mg == lhg or (not any(lcm_divides(ipx) for ipx in C)
                              and not any(lcm_divides(pr[1]) for pr in D)):
            D.append((ih, ig))
    E = [(a, b) for a, b in D if mh * f[b][0] != lcm(mh, f[b][0])]
    B_new = set()
    for ig1, ig2 in B:
        mg1, mg2 = f[ig1][0], f[ig2][0]
        l12 = lcm(mg1, mg2)
        if not mh.divides(l12) or lcm(mg1, mh) == l12 or lcm(mg2, mh) == l12:
            B_new.add((ig1, ig2))
    B_new |= set(E)
    G_new = {ig for ig in G if not mh.divides(f[ig][0])}
    G_new.add(ih)
    return G_new, B_new


def classical_buchberger(F: Iterable[Polynomial], order, width_bound: Optional[int] = None) -> list:
    """Reduced Groebner basis of the ideal generated by F (no symmetry)."""
    F = [p for p in F if p]
    if width_bound is not None and _width_of(F) > width_bound:
        raise ValueError("input wider than the stated bound %d" % width_bound)
    if not F:
        return []
    key = order.key
    f: list = []  # (lead monomial, poly)
    G: set = set()
    B: set = set()

    def reducer():
        return Reducer([f[i][1] for i in sorted(G)], order, classical=True)

    red = reducer()
    for p in sorted(F, key=poly_sort_key):
        h = red.reduce(p)
        if not h:
            continue
        h = monic(h, order)
        f.append((leading_term(h, order).monomial, h))
        G, B = _classical_update(f, G, B, len(f) - 1, order)
        red = reducer()
    while B:
        ig1, ig2 = min(B, key=lambda pr: (key(f[pr[0]][0].lcm(f[pr[1]][0])), pr))
        B.discard((ig1, ig2))
        (m1, p1), (m2, p2) = f[ig1], f[ig2]
        m = m1.lcm(m2)
        s = p1.mul_term(1, m / m1).sub_term_multiple(1, m / m2, p2)
        h = red.reduce(s)
        if h:
            h = monic(h, order)
            f.append((leading_term(h, order).monomial, h))
            G, B = _classical_update(f, G, B, len(f) - 1, order)
            red = reducer()
    basis = [f[i][1] for i in sorted(G)]
    # minimal then reduced
    basis = [g for g in basis
             if not any(h is not g and leading_term(h, order).monomial.divides(leading_term(g, order).monomial)
                        for h in basis)]
    red = Reducer(basis, order, classical=True)
    out = []
    for i, g in enumerate(basis):
        lt = leading_term(g, order)
        tail = Polynomial._raw({m: c for m, c in g.terms.items() if m != lt.monomial})
        out.append(red.reduce(tail, skip=i) + Polynomial._raw({lt.monomial: lt.coefficient}))
    out.sort(key=lambda g: key(leading_term(g, order).monomial))
    return out


# ---------------------------------------------------------------------------
# equivariant criterion


def is_equivariant_gb(G: Sequence[Polynomial], order, prune_coprime: bool = True,
                      stop_at_first: bool = False) -> TruncationReport:
    """Check that every generating S-pair reduces to zero modulo Inc(N) G."""
    G = [g for g in G if g]
    red = Reducer(G, order)
    cert = []
    for j in range(len(G)):
        for i in range(j + 1):
            for sp in spair_generators(G[i], G[j], order, prune_coprime, (i, j)):
                h = red.reduce(sp.difference(order))
                if h:
                    cert.append((sp, h))
                    if stop_at_first:
                        return TruncationReport(_width_of(G), list(G), False, cert)
    return TruncationReport(_width_of(G), list(G), not cert, cert)


# ---------------------------------------------------------------------------
# queue-driven equivariant Buchberger


class _Run:
    """Mutable engine state shared by both Buchberger drivers."""

    def __init__(self, F, order, symmetric=False, prune_coprime=True, threads=1,
                 progress: Optional[Callable] = None):
        self.order = order
        self.symmetric = symmetric
        self.prune = prune_coprime
        self.threads = max(1, int(threads or 1))
        self.progress = progress
        self.G: list = []
        self.active: list = []
        self.seen: set = set()
        self.red = Reducer([], order)
        self.queue: list = []
        self.seq = itertools.count()
        self.stats = {"pairs": 0, "zero_reductions": 0, "added": 0}
        self.cursor = 0
        for f in F:
            if f:
                self.insert(f)

    def state(self) -> BasisState:
        return BasisState(list(self.G), [e[-1] for e in sorted(self.queue)], self.cursor, dict(self.stats))

    def insert(self, h: Polynomial):
        h = monic(h, self.order)
        if self.symmetric:
            h = canonical_form(h)[0]
        if h in self.seen:
            return
        self.seen.add(h)
        idx = len(self.G)
        self.G.append(h)
        lh = leading_term(h, self.order).monomial
        self.stats["added"] += 1
        for j in range(idx + 1):
            if j < idx and not self.active[j]:
                continue
            for sp in spair_generators(self.G[j], h, self.order, self.prune, (j, idx)):
                heapq.heappush(self.queue, (sp.sort_key(), next(self.seq), sp))
        # elements whose lead is now Pi-divisible by lh are superseded; the
        # pair with h just queued carries their reduction
        for j in range(idx):
            if self.active[j] and equivariant_divides(lh, self.red.leads[j].mono) is not None:
                self.active[j] = False
                self.red.deactivate(j)
        self.active.append(True)
        self.red.add(h)

    def unit(self) -> bool:
        return any(g.is_constant() for g in self.G)

    def _reduce_snapshot(self, limit: int):
        leads = self.red.leads[:limit]
        snap = Reducer([], self.order)
        snap.leads = leads
        snap.inactive = set(self.red.inactive)
        snap.memo = self.red.memo

        def go(sp: SPair):
            return snap.reduce(sp.difference(self.order))
        return go

    def process(self, limit_width: Optional[int], cap: Optional[int] = None):
        """Reduce queued pairs of width <= limit_width, one width level at a time."""
        while self.queue and not self.unit():
            head = self.queue[0][0][:2]
            w = head[0]
            if limit_width is not None and w > limit_width:
                return
            if cap is not None and w > cap:
                raise WidthCapExceeded("S-pair of width %d exceeds cap %d" % (w, cap), self.state())
            batch = []
            while self.queue and self.queue[0][0][:2] == head:
                batch.append(heapq.heappop(self.queue)[2])
            go = self._reduce_snapshot(len(self.red.leads))
            snap_size = len(self.red.leads)
            if self.threads > 1 and len(batch) > 1:
                with ThreadPoolExecutor(self.threads) as ex:
                    results = list(ex.map(go, batch))
            else:
                results = [go(sp) for sp in batch]
            for sp, h in zip(batch, results):
                self.stats["pairs"] += 1
                if h and len(self.red.leads) > snap_size:
                    h = self.red.reduce(h)
                if h:
                    self.insert(h)
                    if self.unit():
                        break
                else:
                    self.stats["zero_reductions"] += 1
            self.cursor = max(self.cursor, w)
            level_done = not self.queue or self.queue[0][0][0] > w
            if self.progress is not None and level_done:
                self.progress({"n": w, "basis": len(self.G), "queue": len(self.queue),
                               "zero_reductions": self.stats["zero_reductions"]})

    def remaining_reduce_to_zero(self):
        """Pop queued pairs while they reduce to zero; return the first failure."""
        while self.queue:
            entry = self.queue[0]
            h = self.red.reduce(entry[2].difference(self.order))
            if h:
                return entry[2], h
            heapq.heappop(self.queue)
            self.stats["pairs"] += 1
            self.stats["zero_reductions"] += 1
        return None


def equivariant_buchberger(F: Iterable[Polynomial], order, width_cap: Optional[int] = DEFAULT_WIDTH_CAP,
                           symmetric: bool = False, prune_coprime: bool = True, threads: int = 1,
                           progress: Optional[Callable] = None) -> list:
    """Equivariant Buchberger with S-pairs taken by (width, creation order).

    Raises WidthCapExceeded (carrying the partial state) once the next S-pair
    is wider than ``width_cap``.
    """
    run = _Run(list(F), order, symmetric, prune_coprime, threads, progress)
    run.process(None, cap=width_cap)
    return reduce_basis(run.G, order, symmetric)


def truncated_egb(F: Iterable[Polynomial], order, max_width: int, strategy: str = "auto",
                  symmetric: bool = False, prune_coprime: bool = True, threads: int = 1,
                  progress: Optional[Callable] = None):
    """Width-by-width computation; returns ``(basis, report)``.

    ``strategy``: ``"queue"`` keeps one S-pair queue and, after each width
    level n, checks the equivariant criterion on the pairs still queued;
    ``"restart"`` computes a classical Groebner basis of each generator
    truncation and then checks the criterion; ``"auto"`` picks ``queue`` for
    width orders.
    """
    F = [f for f in F if f]
    if strategy == "auto":
        strategy = "queue" if order.is_width_order else "restart"
    if not F:
        return [], TruncationReport(0, [], True)
    n = max(_width_of(F), 1)
    if strategy == "queue":
        return _truncated_queue(F, order, n, max_width, symmetric, prune_coprime, threads, progress)
    if strategy == "restart":
        return _truncated_restart(F, order, n, max_width, prune_coprime, progress)
    raise ValueError("unknown strategy %r" % strategy)


def _truncated_queue(F, order, n, max_width, symmetric, prune, threads, progress):
    run = _Run(F, order, symmetric, prune, threads, progress)
    while True:
        run.process(n)
        fail = None if run.unit() else run.remaining_reduce_to_zero()
        if fail is None:
            basis = reduce_basis(run.G, order, symmetric)
            log.info("equivariant basis found at width %d with %d elements", n, len(basis))
            return basis, TruncationReport(n, basis, True)
        if n >= max_width:
            report = TruncationReport(n, reduce_basis(run.G, order, symmetric), False, [fail])
            raise MaxWidthReached("no equivariant Groebner basis up to width %d" % max_width, report)
        n += 1


def _truncated_restart(F, order, n, max_width, prune, progress):
    prev: list = []
    while True:
        gens = generator_truncation(F + prev, n)
        B = classical_buchberger(gens, order)
        Gn = reduce_basis(B, order)
        report = is_equivariant_gb(Gn, order, prune, stop_at_first=True)
        report.width = n
        if progress is not None:
            progress({"n": n, "basis": len(Gn), "queue": 0, "zero_reductions": 0})
        if report.is_equivariant_gb:
            return Gn, report
        if n >= max_width:
            raise MaxWidthReached("no equivariant Groebner basis up to width %d" % max_width, report)
        prev = Gn
        n += 1
