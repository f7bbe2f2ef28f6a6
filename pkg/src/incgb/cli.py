"""Command-line front end.

Exit codes: 0 success, 2 parse or semantic error, 3 width cap reached,
4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .engine import MaxWidthReached, WidthCapExceeded, classical_buchberger, generator_truncation, truncated_egb
from .orders import ORDER_NAMES, FiberRevLexOrder, make_order, validate_order
from .parsing import ParseError, SemanticError, parse_generators, parse_map_file, parse_polynomial
from .poly import Reducer, ZeroPolynomial, leading_term, normal_form
from .symmetry import OrbitSpec, RingSignature, equivariant_divides
from .toric import X_NAME, NotEquivariant, kernel_egb_details, toric_orders

EXIT_OK, EXIT_INPUT, EXIT_WIDTH, EXIT_ORACLE = 0, 2, 3, 4


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SemanticError("cannot read %s: %s" % (path, exc.strerror)) from exc


def _emit(lines, output: Optional[str]):
    text = "".join(line + "\n" for line in lines)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _progress(enabled: bool):
    if not enabled:
        return None

    def report(record):
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        sys.stderr.flush()
    return report


def oracle_check(result, width: int) -> list:
    """Compare a kernel basis with a classical elimination at one truncation.

    Returns a list of problems; empty means the check passed.
    """
    setup = result.setup
    elim = setup.elim_order
    gens = generator_truncation(setup.generators, width)
    B = classical_buchberger(gens, elim)
    K = [b for b in B if not any(elim.has_x(m) for m in b.terms)]
    problems = []
    # membership: every oracle element reduces to zero against Inc(N) G
    red = Reducer(result.basis, result.order)
    for k in K:
        kk = result.cover.theta(k)
        if kk and red.reduce(kk):
            problems.append("oracle element %s does not reduce to 0" % kk.format(result.order))
    # initial ideals: every oracle lead is Pi-divisible by an output lead
    leads = [leading_term(g, setup.hybrid_order).monomial for g in result.cover_basis]
    for k in K:
        lk = leading_term(k, setup.hybrid_order).monomial
        if not any(equivariant_divides(a, lk) is not None for a in leads):
            problems.append("oracle lead %s is not Pi-divisible by any output lead" % lk)
    return problems


def _kernel(args) -> int:
    spec = parse_map_file(_read(args.map))
    try:
        result = kernel_egb_details(spec, args.max_width, threads=args.threads, progress=_progress(args.stats))
    except MaxWidthReached as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_WIDTH
    lines = [g.format(result.order) for g in result.basis]
    if args.check_oracle is not None:
        problems = oracle_check(result, args.check_oracle)
        bad = [g for g in result.basis if spec.evaluate(g)]
        problems += ["%s does not map to 0" % g.format(result.order) for g in bad]
        if problems:
            _emit(lines, args.output)
            for p in problems:
                sys.stderr.write("oracle mismatch: %s\n" % p)
            return EXIT_ORACLE
    _emit(lines, args.output)
    return EXIT_OK


def order_for(name: str, polys) -> object:
    """Named order; ``toric`` builds the hybrid (or, with x-variables, the
    elimination) order over the y-orbits occurring in ``polys``."""
    if name != "toric":
        return make_order(name)
    arity: dict = {}
    has_x = False
    for f in polys:
        for v in f.variables():
            if v.orbit == X_NAME:
                has_x = True
            elif arity.setdefault(v.orbit, len(v.indices)) != len(v.indices) or v.labels:
                raise SemanticError("variable %s does not fit a y-orbit of the toric order" % (v,))
    if not arity:
        arity["y"] = 1
    yprime = RingSignature(tuple(OrbitSpec(n, k) for n, k in sorted(arity.items())), "Yprime-ring")
    hybrid, elim = toric_orders(yprime)
    return elim if has_x else hybrid


def _egb(args) -> int:
    gens = parse_generators(_read(args.gens))
    order = order_for(args.order, gens)
    try:
        basis, _ = truncated_egb(gens, order, args.max_width, strategy=args.strategy, threads=args.threads,
                                 progress=_progress(args.stats))
    except (MaxWidthReached, WidthCapExceeded) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_WIDTH
    _emit([g.format(order) for g in basis], args.output)
    return EXIT_OK


def _nf(args) -> int:
    gens = parse_generators(_read(args.gens))
    f = parse_polynomial(args.poly)
    order = order_for(args.order, gens + [f])
    try:
        r = normal_form(f, gens, order)
    except ZeroPolynomial as exc:
        raise SemanticError(str(exc)) from exc
    _emit([r.format(order)], args.output)
    return EXIT_OK


ORDER_CHOICES = sorted(ORDER_NAMES) + ["fiberRevLex", "hybridToric", "elimination", "toric"]


def build_order_for_validation(name: str, rows: int, arity: int):
    """An order together with the ring it is validated on."""
    if name in ORDER_NAMES:
        sig = RingSignature.x_ring(rows)
        return make_order(name, sig), sig
    yprime = RingSignature((OrbitSpec("y", arity),), "Yprime-ring")
    if name == "fiberRevLex":
        return FiberRevLexOrder(yprime), yprime
    hybrid, elim = toric_orders(yprime)
    if name in ("hybridToric", "toric"):
        return hybrid, yprime
    ring = RingSignature(yprime.orbits + RingSignature.x_ring(rows).orbits, "product-ring")
    elim.signature = ring
    return elim, ring


def _validate(args) -> int:
    order, sig = build_order_for_validation(args.order, args.rows, args.arity)
    rep = validate_order(order, args.width, args.deg, sig)
    lines = ["%s: %s (%d checks)" % (args.order, "pass" if rep.passed else "FAIL", rep.checked)]
    for f in rep.failures:
        lines.append("  %s: %s" % (f[0], ", ".join(map(str, f[1:]))))
    _emit(lines, args.output)
    return EXIT_OK if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="incgb", description="Equivariant Groebner bases for Inc(N)-invariant ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, threads=True):
        sp.add_argument("--output", help="write the result to FILE instead of stdout")
        if threads:
            sp.add_argument("--threads", type=int, default=1, help="worker threads for S-pair reduction")
            sp.add_argument("--stats", action="store_true", help="JSON progress records on stderr")

    k = sub.add_parser("kernel", help="equivariant Groebner basis of the kernel of a monomial map")
    k.add_argument("--map", required=True, help="map specification file")
    k.add_argument("--max-width", type=int, default=8)
    k.add_argument("--check-oracle", type=int, metavar="W", help="cross-check with a classical elimination at width W")
    common(k)
    k.set_defaults(run=_kernel)

    e = sub.add_parser("egb", help="truncated equivariant Buchberger on a generator file")
    e.add_argument("--gens", required=True)
    e.add_argument("--order", choices=sorted(ORDER_NAMES) + ["toric"], required=True)
    e.add_argument("--max-width", type=int, default=8)
    e.add_argument("--strategy", choices=["auto", "queue", "restart"], default="auto")
    common(e)
    e.set_defaults(run=_egb)

    n = sub.add_parser("nf", help="equivariant normal form")
    n.add_argument("--gens", required=True)
    n.add_argument("--poly", required=True)
    n.add_argument("--order", choices=sorted(ORDER_NAMES) + ["toric"], required=True)
    common(n, threads=False)
    n.set_defaults(run=_nf)

    v = sub.add_parser("validate-order", help="check the monomial order axioms on a finite window")
    v.add_argument("--order", choices=ORDER_CHOICES, required=True)
    v.add_argument("--width", type=int, default=4)
    v.add_argument("--deg", type=int, default=3)
    v.add_argument("--rows", type=int, default=1, help="rows of x[r,j] variables")
    v.add_argument("--arity", type=int, default=2, help="arity of the y orbit for toric orders")
    common(v, threads=False)
    v.set_defaults(run=_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ParseError, SemanticError, NotEquivariant, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
