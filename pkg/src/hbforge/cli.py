"""Command-line surface: run computations, print certificates, replay the registry.

Polynomials are plain strings such as ``x^2*y - 3*z``.  Ideals are given as
positional generators or with ``-I "f1, f2, ..."`` (repeatable).  Matrices are
JSON lists of rows of strings, inline or as ``@path``.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import registry
from .groebner import Budget, BudgetError, eliminate, groebner_basis, normal_form, reset_budget, set_budget
from .ideal import Ideal, hilbert, intersect, quotient, saturate
from .matrix import PolyMatrix
from .points import (
    PointSet,
    arrangement_gradient,
    ideal_of_points,
    plane_ring,
    position_report,
    random_points,
    sector2_audit,
    uniform_check,
)
from .poly import DEFAULT_PRIME, Field, PolyError, PolyRing
from .rees import (
    bigraded_min_gens,
    cm_via_pd,
    fiber_and_spread,
    g_condition,
    is_linear_type,
    is_reduction,
    rees_presentation,
    symmetric_ideal,
    sylvester_form,
)
from .resolutions import (
    TwoDegreeShape,
    acyclicity_check,
    buchsbaum_rim,
    fixed_minors,
    minimal_resolution,
    minors_ideal,
    signed_maximal_minors,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers


def default_field() -> str:
    return os.environ.get("HBFORGE_FIELD", str(DEFAULT_PRIME))


def make_field(args) -> Field:
    return Field(getattr(args, "field", None) or default_field())


def make_ring(args, variables=None) -> PolyRing:
    names = variables or getattr(args, "vars", None) or "x,y,z"
    return PolyRing(names, make_field(args), getattr(args, "order", None) or "grevlex")


def _load(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def parse_matrix(ring: PolyRing, text: str) -> PolyMatrix:
    rows = _load(text)
    if isinstance(rows, dict):
        rows = rows["entries"]
    return PolyMatrix(ring, [[ring(str(e)) for e in r] for r in rows])


def split_polys(text: str):
    return [s for s in (p.strip() for p in text.split(",")) if s]


def ideal_args(args, ring: PolyRing):
    """Ideals from -I options, or a single ideal from positional generators."""
    out = [Ideal(ring, [ring(p) for p in split_polys(t)]) for t in (getattr(args, "ideal", None) or [])]
    if getattr(args, "polys", None):
        out.insert(0, Ideal(ring, [ring(p) for p in args.polys]))
    return out


def one_ideal(args, ring):
    ideals = ideal_args(args, ring)
    if len(ideals) != 1:
        raise UsageError("give exactly one ideal (positional generators or one -I)")
    return ideals[0]


def two_ideals(args, ring):
    ideals = ideal_args(args, ring)
    if len(ideals) != 2:
        raise UsageError("give two ideals with -I A -I B")
    return ideals


def matrix_or_gens(args, ring):
    """(generators, presentation matrix or None) from --matrix or an ideal."""
    if getattr(args, "matrix", None):
        phi = parse_matrix(ring, args.matrix)
        return signed_maximal_minors(phi), phi
    return one_ideal(args, ring).gens, None


def maximal_ideal(ring):
    return Ideal(ring, [ring.var(v) for v in ring.variables])


def parse_points(args) -> PointSet:
    if args.points:
        data = _load(args.points)
        if isinstance(data, list):
            data = {"field": make_field(args).p or "Q", "points": data}
        return PointSet.from_json(data)
    if args.n is None:
        raise UsageError("give --points or --n")
    return random_points(args.n, make_field(args), _seed(args))


def _seed(args, default=0):
    s = getattr(args, "seed", None)
    return default if s is None else s


# ---------------------------------------------------------------------------
# output


def emit(args, data, text=None):
    if getattr(args, "json", False) or text is None:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def poly_lines(polys):
    return "\n".join(str(p) for p in polys) if polys else "0"


# ---------------------------------------------------------------------------
# commands


def cmd_gb(args):
    ring = make_ring(args)
    I = one_ideal(args, ring)
    gb = I.gb()
    emit(args, {"ring": ring.describe(), "basis": [str(f) for f in gb.basis]}, poly_lines(gb.basis))


def cmd_nf(args):
    ring = make_ring(args)
    p = ring(args.poly)
    divisors = [ring(q) for q in split_polys(args.by)]
    r = normal_form(p, groebner_basis(divisors, ring=ring))
    emit(args, {"normalForm": str(r), "isZero": not r}, str(r))


def cmd_elim(args):
    ring = make_ring(args)
    I = one_ideal(args, ring)
    drop = split_polys(args.drop)
    out = eliminate(I.gens, drop)
    emit(args, {"eliminated": drop, "generators": [str(f) for f in out]}, poly_lines(out))


def _ideal_result(args, I: Ideal, extra=None):
    gens = I.gb().basis
    data = {"ring": I.ring.describe(), "generators": [str(f) for f in gens]}
    data.update(extra or {})
    emit(args, data, poly_lines(gens))


def cmd_intersect(args):
    ring = make_ring(args)
    A, B = two_ideals(args, ring)
    _ideal_result(args, intersect(A, B))


def cmd_quotient(args):
    ring = make_ring(args)
    A, B = two_ideals(args, ring)
    _ideal_result(args, quotient(A, B))


def cmd_saturate(args):
    ring = make_ring(args)
    ideals = ideal_args(args, ring)
    if len(ideals) == 1:
        ideals.append(maximal_ideal(ring))
    if len(ideals) != 2:
        raise UsageError("give A (and optionally B, default the maximal ideal)")
    S, steps = saturate(*ideals)
    data = {"generators": [str(f) for f in S.gb().basis], "steps": steps}
    emit(args, data, poly_lines(S.gb().basis) + f"\n(stabilized after {steps} step(s))")


def cmd_hilbert(args):
    ring = make_ring(args)
    H = hilbert(one_ideal(args, ring))
    data = H.to_json()
    emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))


def _resolution(args):
    ring = make_ring(args)
    if getattr(args, "matrix", None):
        return minimal_resolution(parse_matrix(ring, args.matrix))
    return minimal_resolution(one_ideal(args, ring))


def cmd_res(args):
    res, betti = _resolution(args)
    text = "\n\n".join(f"d_{i + 1}:\n{m}" for i, m in enumerate(res.maps)) + f"\n\nBetti table:\n{betti}"
    emit(args, res.to_json(), text)


def cmd_betti(args):
    _, betti = _resolution(args)
    emit(args, {"betti": betti.to_json(), "regularity": betti.regularity}, str(betti))


def cmd_minors(args):
    ring = make_ring(args)
    M = parse_matrix(ring, args.matrix)
    if args.k == min(M.shape) and M.nrows == M.ncols + 1:
        polys = signed_maximal_minors(M)
    else:
        polys = minors_ideal(M, args.k).gens
    emit(args, {"k": args.k, "minors": [str(f) for f in polys]}, poly_lines(polys))


def _shape(args, ring):
    M = parse_matrix(ring, args.matrix)
    n = M.nrows

    def row_degree(i):
        degs = {e.multidegree() for e in M.row(i) if e}
        if len(degs) != 1:
            raise UsageError(f"row {i} is not made of forms of one degree")
        return degs.pop()

    eps1 = args.eps1 if args.eps1 is not None else row_degree(0)
    eps2 = args.eps2 if args.eps2 is not None else row_degree(n - 1)
    return TwoDegreeShape(n, args.a, eps1, eps2, M)


def cmd_fixed_minors(args):
    ring = make_ring(args)
    shape = _shape(args, ring)
    J = fixed_minors(shape)
    data = {"n": shape.n, "a": shape.a, "eps1": shape.eps1, "eps2": shape.eps2, "generators": [str(f) for f in J.gens]}
    emit(args, data, poly_lines(J.gens))


def cmd_brim(args):
    ring = make_ring(args)
    C = buchsbaum_rim(parse_matrix(ring, args.matrix))
    cert = acyclicity_check(C)
    data = {"complex": C.to_json(), "ranks": C.ranks(), "isComplex": C.is_complex(), "acyclicity": cert}
    text = f"ranks: {C.ranks()}\nd^2 = 0: {C.is_complex()}\nacyclic: {cert['acyclic']}  grades: {cert['grades']}"
    if cert["reason"]:
        text += f"\nreason: {cert['reason']}"
    emit(args, data, text)


def cmd_sym(args):
    ring = make_ring(args)
    phi = parse_matrix(ring, args.matrix)
    gens = [ring(p) for p in split_polys(args.gens)] if args.gens else signed_maximal_minors(phi)
    L = symmetric_ideal(phi, None, gens)
    emit(args, {"ring": L.ring.describe(), "generators": [str(f) for f in L.gens]}, poly_lines(L.gens))


def _presentation(args, with_fiber):
    ring = make_ring(args)
    gens, phi = matrix_or_gens(args, ring)
    return rees_presentation(gens, phi, with_fiber=with_fiber, shortcut=args.shortcut)


def cmd_rees(args):
    rp = _presentation(args, with_fiber=False)
    basis = rp.J.gb().basis
    _, table = bigraded_min_gens(rp.J, basis)
    data = rp.to_json()
    data["bidegrees"] = [{"bidegree": list(k), "count": v} for k, v in sorted(table.items())]
    text = poly_lines(basis) + "\nbidegrees: " + ", ".join(f"{k}x{v}" for k, v in sorted(table.items()))
    emit(args, data, text)


def cmd_fiber(args):
    rp = _presentation(args, with_fiber=False)
    if len({g.multidegree() for g in rp.gens}) != 1:
        raise UsageError("the special fiber needs generators of one degree")
    fiber_and_spread(rp)
    data = {"fiber": [str(f) for f in rp.Q.gens], "spread": rp.spread, "fiberMultiplicity": rp.fiber_multiplicity}
    emit(args, data, poly_lines(rp.Q.gens) + f"\nspread: {rp.spread}\nmultiplicity: {rp.fiber_multiplicity}")


def cmd_sylvester(args):
    ring = make_ring(args)
    phi = parse_matrix(ring, args.matrix)
    gens = signed_maximal_minors(phi)
    L = symmetric_ideal(phi, None, gens)
    S = L.ring
    if len(L.gens) != 2:
        raise UsageError("sylvester expects a 3x2 matrix (two symmetric relations)")
    f, g = L.gens
    steps = []
    for pair_text in args.pair:
        pair = [S(p) for p in split_polys(pair_text)]
        if len(pair) != 2:
            raise UsageError("each --pair needs two monomials or forms")
        h, bd, _ = sylvester_form(f, g, pair)
        steps.append({"pair": [str(p) for p in pair], "form": str(h), "normalized": str(h.normalized()), "bidegree": list(bd)})
        g = h
    data = {"f": str(L.gens[0]), "g": str(L.gens[1]), "forms": steps}
    text = "\n".join(f"h{i + 1} {tuple(s['bidegree'])}: {s['normalized']}" for i, s in enumerate(steps))
    emit(args, data, text)


def cmd_lintype(args):
    ring = make_ring(args)
    gens, phi = matrix_or_gens(args, ring)
    verdict = is_linear_type(gens, phi, method=args.method)
    emit(args, {"linearType": verdict, "method": args.method}, f"linear type: {verdict}")


def cmd_reduction(args):
    ring = make_ring(args)
    J, I = two_ideals(args, ring)
    cert = is_reduction(J, I, args.r_max)
    emit(args, {"reduction": cert.holds, "r": cert.r}, f"reduction: {cert.holds}  r = {cert.r}")


def cmd_gcond(args):
    ring = make_ring(args)
    cert = g_condition(parse_matrix(ring, args.matrix), args.s)
    data = {"holds": cert["holds"], "witness": cert["witness"], "heights": {str(k): v for k, v in cert["heights"].items()}}
    emit(args, data, f"G_{args.s}: {cert['holds']}  heights: {cert['heights']}")


def cmd_cmpd(args):
    ring = make_ring(args)
    if args.rees:
        gens, phi = matrix_or_gens(args, ring)
        A = rees_presentation(gens, phi, with_fiber=False).J
    else:
        A = one_ideal(args, ring)
    c = cm_via_pd(A)
    data = {"pd": c["pd"], "height": c["height"], "cm": c["cm"], "betti": c["betti"].to_json()}
    emit(args, data, f"pd = {c['pd']}  height = {c['height']}  Cohen-Macaulay: {c['cm']}")


def cmd_points(args):
    if args.action == "gen":
        P = parse_points(args)
        emit(args, P.to_json(), "\n".join(" ".join(str(c) for c in p) for p in P.points))
        return
    P = parse_points(args)
    I = ideal_of_points(P)
    if args.action == "ideal":
        _ideal_result(args, I, {"n": len(P)})
    elif args.action == "report":
        rep = position_report(I, len(P))
        if args.uniform:
            rep.uniform = uniform_check(P)["uniform"]
        data = rep.to_json()
        emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    elif args.action == "uniform":
        res = uniform_check(P, args.m_max)
        data = dict(res)
        data["witnessPoints"] = [list(P.points[i]) for i in (res["witness"] or [])]
        emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    elif args.action == "audit":
        audit = sector2_audit(I, len(P), P, screen=args.screen)
        emit(args, audit)


def cmd_arrangement(args):
    F, JF, cert = arrangement_gradient(args.d, args.n, _seed(args), make_field(args))
    data = {"form": str(F), "gradient": [str(g) for g in JF.gens], **cert}
    emit(args, data, f"F = {F}\nlinear type: {cert['linear_type']}\nG condition: {cert['g_condition']}")


def _random_form(ring, deg, rng):
    from .ideal import monomials_of_degree

    p = ring.field.p or 20
    return ring.from_terms([(e, rng.randrange(p)) for e in monomials_of_degree(ring, deg)])


def cmd_hunt(args):
    """Sample 3x2 matrices with column degrees (d1, d2) and tabulate Rees data."""
    ring = make_ring(args, "x,y,z")
    rng = random.Random(_seed(args))
    d1, d2 = (int(v) for v in args.degrees.split(","))
    rows = []
    for k in range(args.samples):
        phi = PolyMatrix(ring, [[_random_form(ring, d1, rng), _random_form(ring, d2, rng)] for _ in range(3)])
        gens = signed_maximal_minors(phi)
        if any(not g for g in gens) or len(set(g.multidegree() for g in gens)) != 1:
            continue
        try:
            rp = rees_presentation(gens, phi, with_fiber=False, shortcut=True)
            _, table = bigraded_min_gens(rp.J, rp.J.gb().basis)
            cm = cm_via_pd(rp.J)["cm"]
        except BudgetError as e:
            rows.append({"sample": k, "error": str(e)})
            continue
        rows.append({"sample": k, "bidegrees": {f"{a},{b}": c for (a, b), c in sorted(table.items())}, "reesCM": cm})
    text = "\n".join(f"#{r['sample']}: " + (r.get("error") or f"{r['bidegrees']}  CM={r['reesCM']}") for r in rows)
    emit(args, {"degrees": [d1, d2], "samples": rows, "note": "exploratory; no assertion"}, text)


def cmd_verify(args):
    budget = _budget(args)
    if args.all:
        reports = registry.run_all(args.seed, budget, args.workers)
    elif args.id:
        reports = [registry.run_example(args.id, args.seed, budget)]
    else:
        raise UsageError("give an id or --all")
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True))
    else:
        for r in reports:
            print(r.render())
        counts = {s: sum(r.status == s for r in reports) for s in (registry.PASS, registry.FAIL, registry.ERROR)}
        print(f"summary: {counts['PASS']} PASS, {counts['FAIL']} FAIL, {counts['ERROR']} ERROR")
    return 0 if all(r.status == registry.PASS for r in reports) else 1


def cmd_list(args):
    for e in registry.REGISTRY:
        print(f"{e.id:<18} {e.title}")


# ---------------------------------------------------------------------------
# parser


def _budget(args):
    deg = getattr(args, "budget_deg", None)
    return Budget(max_degree=deg) if deg is not None else None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    common.add_argument("--field", default=argparse.SUPPRESS, help="prime p or Q (default 32003 or $HBFORGE_FIELD)")
    common.add_argument("--order", default=argparse.SUPPRESS, help="grevlex | lex | block:x,y|t1,t2")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget-deg", type=int, default=argparse.SUPPRESS, help="max S-pair degree")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--vars", default=argparse.SUPPRESS, help="comma-separated variables (default x,y,z)")

    p = argparse.ArgumentParser(prog="hbforge", parents=[common], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, ideal=False, ideals=False, matrix=False):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if ideal or ideals:
            sp.add_argument("polys", nargs="*", help="generators")
            sp.add_argument("-I", "--ideal", action="append", help="comma-separated generators")
        if matrix:
            sp.add_argument("--matrix", required=matrix == "required", help="JSON rows of strings or @file")
        sp.set_defaults(func=fn)
        return sp

    add("gb", cmd_gb, "reduced Groebner basis", ideal=True)
    sp = add("nf", cmd_nf, "normal form modulo an ideal")
    sp.add_argument("poly")
    sp.add_argument("--by", required=True, help="comma-separated divisors")
    sp = add("elim", cmd_elim, "eliminate variables", ideal=True)
    sp.add_argument("--drop", required=True, help="comma-separated variables to eliminate")
    add("intersect", cmd_intersect, "intersection of two ideals", ideals=True)
    add("quotient", cmd_quotient, "ideal quotient A : B", ideals=True)
    add("saturate", cmd_saturate, "saturation A : B^inf", ideals=True)
    add("hilbert", cmd_hilbert, "Hilbert series data of R/I", ideal=True)
    add("res", cmd_res, "minimal graded free resolution", ideal=True, matrix=True)
    add("betti", cmd_betti, "graded Betti table", ideal=True, matrix=True)
    sp = add("minors", cmd_minors, "ideal of k-minors", matrix="required")
    sp.add_argument("-k", type=int, required=True)
    sp = add("fixed-minors", cmd_fixed_minors, "maximal minors keeping the bottom block", matrix="required")
    sp.add_argument("-a", type=int, required=True, help="rows in the top block")
    sp.add_argument("--eps1", type=int)
    sp.add_argument("--eps2", type=int)
    add("brim", cmd_brim, "Buchsbaum-Rim complex and acyclicity", matrix="required")
    sp = add("sym", cmd_sym, "symmetric algebra relations", matrix="required")
    sp.add_argument("--gens", help="ideal generators (default: signed maximal minors)")
    for name, fn, h in (("rees", cmd_rees, "Rees ideal"), ("fiber", cmd_fiber, "special fiber ideal")):
        sp = add(name, fn, h, ideal=True, matrix=True)
        sp.add_argument("--shortcut", action="store_true", help="skip the Rees ideal when of linear type")
    sp = add("sylvester", cmd_sylvester, "iterated Sylvester forms of a 3x2 matrix", matrix="required")
    sp.add_argument("--pair", action="append", required=True, help="two divisors, e.g. 'x^2, y^2'; repeat to iterate")
    sp = add("lintype", cmd_lintype, "linear type test", ideal=True, matrix=True)
    sp.add_argument("--method", choices=["auto", "compare"], default="auto")
    sp = add("reduction", cmd_reduction, "is J a reduction of I (-I J -I I)", ideals=True)
    sp.add_argument("--r-max", type=int, default=6)
    sp = add("gcond", cmd_gcond, "G_s condition", matrix="required")
    sp.add_argument("-s", type=int, required=True)
    sp = add("cmpd", cmd_cmpd, "Cohen-Macaulay test by projective dimension", ideal=True, matrix=True)
    sp.add_argument("--rees", action="store_true", help="test the Rees algebra instead of R/I")

    sp = add("points", cmd_points, "ideals of points in the plane")
    sp.add_argument("action", choices=["gen", "ideal", "report", "uniform", "audit"])
    sp.add_argument("--points", help="JSON list of [x, y, z] or a point-set object, or @file")
    sp.add_argument("--n", type=int, help="number of random points")
    sp.add_argument("--m-max", type=int, help="largest subset size for the uniform check")
    sp.add_argument("--uniform", action="store_true", help="also run the uniform check in report")
    sp.add_argument("--screen", action="store_true", help="pre-filter with the line/conic screen")

    sp = add("arrangement", cmd_arrangement, "gradient ideal of a generic arrangement")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--n", type=int, required=True)

    sp = add("hunt", cmd_hunt, "sample 3x2 matrices and tabulate Rees bidegrees (exploratory)")
    sp.add_argument("--degrees", default="1,2", help="column degrees d1,d2")
    sp.add_argument("--samples", type=int, default=5)

    sp = add("verify", cmd_verify, "replay the example registry")
    sp.add_argument("id", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--workers", type=int)
    add("list", cmd_list, "list registry ids")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", None)
    token = None
    if args.command != "verify" and _budget(args) is not None:
        token = set_budget(_budget(args))
    try:
        rc = args.func(args)
        return rc or 0
    except UsageError as e:
        parser.error(str(e))
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 2
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3
    except (PolyError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    finally:
        if token is not None:
            reset_budget(token)


if __name__ == "__main__":
    sys.exit(main())
