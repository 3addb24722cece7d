"""Registry of worked examples and result instances replayed by ``verify``.

Every entry carries its inputs inline and returns a list of facts; a fact
compares an expected golden value (tagged with its provenance) against the
computed one by exact equality.
"""
from __future__ import annotations

import traceback
from dataclasses import dataclass, field
from typing import Callable

from .groebner import Budget, BudgetError, reset_budget, set_budget
from .ideal import Ideal, graded_piece, quotient, saturate
from .instances import (
    certify_rees_ideal,
    dejonq_expected_bidegrees,
    dejonq_instance,
    random_two_degree_shape,
    resofj_expected,
    primary_family_content_matrix,
    primary_family_instance,
)
from .matrix import PolyMatrix
from .points import (
    PointSet,
    arrangement_gradient,
    hilbert_burch_split,
    ideal_of_points,
    map_degree,
    plane_ring,
    position_report,
    predicted_betti,
    predicted_regularity,
    random_points,
    sector2_audit,
    uniform_check,
)
from .poly import Field, PolyRing
from .rees import bigraded_min_gens, cm_via_pd, is_linear_type, rees_presentation, symmetric_ideal, sylvester_form
from .resolutions import (
    acyclicity_check,
    br_expected_ranks,
    buchsbaum_rim,
    fixed_minors,
    minimal_resolution,
    signed_maximal_minors,
)

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"


@dataclass
class Fact:
    name: str
    expected: object
    computed: object
    tag: str
    asserted: bool = True

    @property
    def passed(self):
        return self.expected == self.computed

    def to_json(self):
        return {
            "name": self.name,
            "expected": _plain(self.expected),
            "computed": _plain(self.computed),
            "tag": self.tag,
            "asserted": self.asserted,
            "pass": self.passed if self.asserted else None,
        }


@dataclass
class Report:
    id: str
    title: str
    status: str
    facts: list = field(default_factory=list)
    error: str = None
    seed: int = None

    def to_json(self):
        return {
            "id": self.id,
            "title": self.title,
            "status": self.status,
            "seed": self.seed,
            "facts": [f.to_json() for f in self.facts],
            "error": self.error,
        }

    def render(self):
        lines = [f"[{self.id}] {self.title}" + (f" (seed {self.seed})" if self.seed is not None else "")]
        for f in self.facts:
            mark = ("PASS" if f.passed else "FAIL") if f.asserted else "INFO"
            lines.append(f"  {mark:<4}  {f.name}  [{f.tag}]")
            if not f.asserted or not f.passed or mark == "PASS":
                lines.append(f"        expected: {_short(f.expected)}")
                lines.append(f"        computed: {_short(f.computed)}")
        if self.error:
            lines.append(f"  ERROR {self.error}")
        lines.append(f"{self.id}: {self.status}")
        return "\n".join(lines)


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def _short(v, width=160):
    s = str(_plain(v))
    return s if len(s) <= width else s[: width - 3] + "..."


@dataclass
class VerifyRegistryEntry:
    id: str
    title: str
    run: Callable
    default_seed: int = None


class RegistryBug(RuntimeError):
    """A pinned input does not satisfy the entry's own preconditions."""


# ---------------------------------------------------------------------------
# entries


def _ring():
    return PolyRing("x,y,z", Field())


def _bidegree_table(table):
    return {f"{a},{b}": c for (a, b), c in sorted(table.items())}


def _deg4(seed):
    R = _ring()
    phi = PolyMatrix(R, [["x^2", "y*z"], ["y^2", "x*z"], ["0", "y^2"]])
    gens = signed_maximal_minors(phi)
    rp = rees_presentation(gens, phi, with_fiber=False)
    S = rp.ambient
    f, g = symmetric_ideal(phi, S, gens).gens
    h1, bd, _ = sylvester_form(f, g, [S("x"), S("y")])
    _, table = bigraded_min_gens(rp.J, rp.J.gb().basis)
    colon = quotient(Ideal(S, [f, g, h1]), Ideal(S, [S("x"), S("y")]))
    hb = PolyMatrix(S, [["-t3*y-t1*z", "-t2*z"], ["t2*y", "t1*x"], ["x", "-y"]])
    return [
        Fact("bigraded minimal generator bidegrees", {"1,3": 1, "2,1": 2, "2,2": 1}, _bidegree_table(table), "PAPER"),
        Fact("Sylvester form of (f, g) over (x, y), normalized", S("t1*t3*x*y + t1^2*x*z - t2^2*y*z").normalized(), h1.normalized(), "PAPER"),
        Fact("(f, g, h1) : (x, y) equals the Rees ideal", True, colon == rp.J, "PAPER"),
        Fact("(f, g, h1) is the ideal of 2-minors of its Hilbert-Burch matrix", True, Ideal(S, signed_maximal_minors(hb)) == Ideal(S, [f, g, h1]), "PAPER"),
        Fact("Rees algebra is Cohen-Macaulay", False, cm_via_pd(rp.J)["cm"], "PAPER"),
        Fact("ideal of linear type", False, is_linear_type(gens, phi), "PAPER"),
    ]


def _degree6(seed):
    R = _ring()
    phi = PolyMatrix(R, [["x^2", "x^3*z+y^4"], ["y^2", "x^4+y^3*z"], ["0", "x^4+y^4"]])
    gens = signed_maximal_minors(phi)
    rp = rees_presentation(gens, phi, with_fiber=False)
    S = rp.ambient
    f, g = symmetric_ideal(phi, S, gens).gens
    h1, _, _ = sylvester_form(f, g, [S("x^2"), S("y^2")])
    h2, _, _ = sylvester_form(f, h1, [S("x-y"), S("y^2")])
    p1 = S("-t2^2*x^2-t2*t3*x^2+t1^2*y^2+t1*t3*y^2-t1*t2*x*z+t1*t2*y*z")
    p2 = S("-t1^3*x-t2^3*x-t1^2*t3*x-t2^2*t3*x-t1^3*y-t2^3*y-t1^2*t3*y-t2^2*t3*y-t1^2*t2*z-t1*t2^2*z")
    _, table = bigraded_min_gens(rp.J, rp.J.gb().basis)
    return [
        Fact("h1 = Sylvester form of (f, g) over (x^2, y^2), normalized", p1.normalized(), h1.normalized(), "PAPER"),
        Fact("h2 = Sylvester form of (f, h1) over (x-y, y^2), normalized", p2.normalized(), h2.normalized(), "PAPER"),
        Fact("h1 lies in the Rees ideal", True, rp.J.contains(h1), "PAPER"),
        Fact("h2 lies in the Rees ideal", True, rp.J.contains(h2), "PAPER"),
        Fact("bigraded minimal generator bidegrees", {"1,3": 1, "2,1": 1, "2,2": 1, "4,1": 1}, _bidegree_table(table), "DERIVED"),
    ]


REDONE_POINTS = ((0, 0, 1), (1, 1, 1), (32002, 1, 1), (0, 510, 1), (0, 31501, 1), (0, 32002, 1), (1, 32002, 1), (32002, 32002, 1))


def _redone(seed):
    F = Field()
    R = plane_ring(F)
    M = PolyMatrix(R, [["3*y*z+3*z^2", "-y^2+z^2"], ["y^2-4*y*z", "x^2-y^2"], ["-x", "0"]])
    I2 = Ideal(R, list(M.minors(2)))
    P = PointSet(F, REDONE_POINTS)
    I = ideal_of_points(P)
    rep = position_report(I, 8)
    uni = uniform_check(P)
    _, basis3 = graded_piece(I, 3)
    xI = Ideal(R, [R("x")])
    _, betti = minimal_resolution(I)
    return [
        Fact("ideal of the 8 points equals the 2-minors", True, I == I2, "PAPER"),
        Fact("(n, s, h)", (8, 3, 2), (rep.n, rep.s, rep.h), "PAPER"),
        Fact("tight generic position", True, rep.tight, "PAPER"),
        Fact("uniform position", False, uni["uniform"], "PAPER"),
        Fact("(I_3) lies in (x)", True, all(xI.contains(b) for b in basis3), "PAPER"),
        Fact("Betti table of I", predicted_betti(3, 2).to_json(), betti.of_ideal().to_json(), "PAPER"),
    ]


# all 18 points are rational over this prime (x^4 = 1 and the septic split)
NONUNIFORM_PRIME = 16610381
NONUNIFORM_POINTS = (
    (1, 0, 1), (4812850, 0, 1), (11797531, 0, 1), (16610380, 0, 1),
    (2220394, 1931400, 1), (14389987, 1931400, 1), (1716691, 2063789, 1), (14893690, 2063789, 1),
    (5386254, 3014181, 1), (11224127, 3014181, 1), (5548112, 5352223, 1), (11062269, 5352223, 1),
    (4392672, 7180148, 1), (12217709, 7180148, 1), (6755216, 15022717, 1), (9855165, 15022717, 1),
    (6324034, 15266685, 1), (10286347, 15266685, 1),
)


def _nonuniform(seed):
    F = Field(NONUNIFORM_PRIME)
    R = plane_ring(F)
    M = PolyMatrix(R, [["x^2", "0", "z^2"], ["y^2", "x^2", "0"], ["z^2", "y^2", "x^2"], ["0", "z", "y"]])
    I3 = Ideal(R, list(M.minors(3)))
    P = PointSet(F, NONUNIFORM_POINTS)
    I = ideal_of_points(P)
    rep = position_report(I, 18)
    uni = uniform_check(P, 3)
    fs, _, _, _, _ = hilbert_burch_split(I, 5)
    J = Ideal(R, fs)
    m = Ideal(R, [R("x"), R("y"), R("z")])
    Jsat, _ = saturate(J, m)
    N = PolyMatrix(R, [["z^2", "-y^3+x^2*z"], ["-y^2", "x^2*y"], ["x^2", "z^3"]])
    yz = Ideal(R, [R("y"), R("z")])
    wit = [P.points[i] for i in uni["witness"]] if uni["witness"] else []
    return [
        Fact("ideal of the 18 points equals the 3-minors", True, I == I3, "PAPER"),
        Fact("(n, s, h)", (18, 5, 3), (rep.n, rep.s, rep.h), "PAPER"),
        Fact("tight generic position", True, rep.tight, "PAPER"),
        Fact("dim R_1 I_5", 9, rep.dim_R1Is, "PAPER"),
        Fact("collinear witness size", 4, len(wit), "PAPER"),
        Fact("witness lies on y = 0", True, bool(wit) and all(p[1] == 0 for p in wit), "PAPER"),
        Fact("J is saturated", True, Jsat == J, "PAPER"),
        Fact("J differs from I", True, J != I, "PAPER"),
        Fact("J equals the 2-minors of the inline 3x2 matrix", True, J == Ideal(R, signed_maximal_minors(N)), "PAPER"),
        Fact("J inside (y, z) while I is not", (True, False), (yz.contains_ideal(J), yz.contains_ideal(I)), "PAPER"),
    ]


def _dejonq_d3(seed):
    inst = dejonq_instance(3, seed)
    rp = rees_presentation(inst.gens, inst.phi, with_fiber=False)
    _, table = bigraded_min_gens(rp.J, rp.J.gb().basis)
    return [
        Fact("bigraded minimal generator bidegrees", _bidegree_table(dejonq_expected_bidegrees(3)), _bidegree_table(table), "PAPER"),
        Fact("Rees algebra is Cohen-Macaulay", True, cm_via_pd(rp.J)["cm"], "PAPER"),
    ]


def _primary_family_1(seed):
    m, n, eps = 2, 1, 1
    inst = primary_family_instance(m, n, eps, seed)
    R = inst.phi.ring
    rp = rees_presentation(inst.gens, inst.phi, with_fiber=False)
    S = rp.ambient
    f, g = symmetric_ideal(inst.phi, S, inst.gens).gens
    h, bd, _ = sylvester_form(f, g, [S.var("x") ** m, S.var("y") ** n])
    K = Ideal(S, [f, g, h])
    cert = certify_rees_ideal(inst.gens, [f, g, h], inst.phi, S)
    H = primary_family_content_matrix(inst, S)
    return [
        Fact("Sylvester form bidegree", (eps, 2), bd, "PAPER"),
        Fact("(f, g, h) equals the Rees ideal", True, K == rp.J, "PAPER"),
        Fact("regularity certificate for (f, g, h)", True, cert["equal"], "DERIVED"),
        Fact("(f, g, h) is the ideal of 2-minors of the content matrix", True, Ideal(S, signed_maximal_minors(H)) == K, "PAPER"),
        Fact("Rees algebra is Cohen-Macaulay", True, cm_via_pd(rp.J)["cm"], "PAPER"),
    ]


def _resofj_5_3(seed):
    n, a = 5, 3
    shape = random_two_degree_shape(n, a, 1, 1, seed, phi2_height=a)
    J = fixed_minors(shape)
    I = shape.ideal_I()
    _, betti = minimal_resolution(J)
    C = buchsbaum_rim(shape.Phi2)
    ac = acyclicity_check(C)
    R = J.ring
    m = Ideal(R, [R.var(v) for v in R.variables])
    Jsat, _ = saturate(J, m)
    return [
        Fact("Betti table of R/J", resofj_expected(n, a, 1, 1).to_json(), betti.to_json(), "PAPER"),
        Fact("Buchsbaum-Rim ranks past F_1", br_expected_ranks(n - a, n - 1), C.ranks()[2:], "PAPER"),
        Fact("Buchsbaum-Rim complex composes to zero", True, C.is_complex(), "PAPER"),
        Fact("Buchsbaum-Rim complex is acyclic", True, ac["acyclic"], "PAPER"),
        Fact("J saturates to I", True, Jsat == I, "PAPER"),
    ]


def _sector2_s5(seed):
    F = Field()
    P = random_points(18, F, seed)
    I = ideal_of_points(P)
    audit = sector2_audit(I, 18, P, screen=True)
    if audit["skipped"]:
        raise RegistryBug(f"seed {seed} is not admissible: {audit['skipped']}")
    facts = [Fact("(n, s, h)", (18, 5, 3), (audit["n"], audit["s"], audit["h"]), "PAPER")]
    conds = audit["conditions"]
    for k in ("finite_length", "minors_height_3", "saturation_is_I"):
        facts.append(Fact(f"condition {k}", "observed", conds[k], "DERIVED", asserted=False))
    holds = set(conds.values())
    facts.append(Fact("the three equivalent conditions agree", 1, len(holds), "PAPER"))
    for f in audit["formulas"]:
        facts.append(Fact(f["name"], f["expected"], f["computed"], "PAPER"))
    return facts


def _arrangement_3_4(seed):
    _, _, cert = arrangement_gradient(3, 4, seed)
    return [
        Fact("gradient ideal of linear type", True, cert["linear_type"], "PAPER"),
        Fact("(n-1)-products ideal satisfies G_3", True, cert["g_condition"], "PAPER"),
    ]


def _tight_betti_3_0(seed):
    F = Field()
    P = random_points(6, F, seed)
    I = ideal_of_points(P)
    rep = position_report(I, 6)
    if not rep.tight:
        raise RegistryBug(f"seed {seed} is not in tight position")
    _, betti = minimal_resolution(I)
    b = betti.of_ideal()
    return [
        Fact("(s, h)", (3, 0), (rep.s, rep.h), "PAPER"),
        Fact("Betti table of I", predicted_betti(3, 0).to_json(), b.to_json(), "PAPER"),
        Fact("regularity", predicted_regularity(3, 0), b.regularity, "PAPER"),
        Fact("degree of the map given by I_3", 1, map_degree(I), "PAPER"),
    ]


REGISTRY = [
    VerifyRegistryEntry("deg4", "3x2 matrix with an embedded component of I_1", _deg4),
    VerifyRegistryEntry("degree6", "iterated Sylvester forms in degree six", _degree6),
    VerifyRegistryEntry("redone", "eight tight points that are not uniform", _redone),
    VerifyRegistryEntry("non-uniform", "eighteen tight points with four on a line", _nonuniform),
    VerifyRegistryEntry("deJonq-d3", "de Jonquieres matrix with d = 3", _dejonq_d3, 1),
    VerifyRegistryEntry("zaq-1", "(x^m, y^n)-primary family, m = 2, n = 1, eps = 1", _primary_family_1, 1),
    VerifyRegistryEntry("resofj-5-3", "minors fixing a linear Phi2, n = 5, a = 3", _resofj_5_3, 1),
    VerifyRegistryEntry("sector2-s5", "second-sector audit at s = 5", _sector2_s5, 0),
    VerifyRegistryEntry("arrangement-3-4", "gradient of a generic arrangement of 4 planes", _arrangement_3_4, 1),
    VerifyRegistryEntry("tight-betti-3-0", "six points in tight position", _tight_betti_3_0, 1),
]

BY_ID = {e.id: e for e in REGISTRY}


def run_example(entry_id: str, seed: int = None, budget: Budget = None) -> Report:
    if entry_id not in BY_ID:
        raise KeyError(f"unknown registry id {entry_id!r}; known: {', '.join(BY_ID)}")
    entry = BY_ID[entry_id]
    seed = entry.default_seed if seed is None or entry.default_seed is None else seed
    token = set_budget(budget) if budget is not None else None
    try:
        facts = entry.run(seed)
        status = PASS if all(f.passed for f in facts if f.asserted) else FAIL
        return Report(entry.id, entry.title, status, facts, seed=seed)
    except BudgetError as e:
        return Report(entry.id, entry.title, ERROR, error=f"budget exceeded: {e}", seed=seed)
    except RegistryBug as e:
        return Report(entry.id, entry.title, ERROR, error=f"registry input rejected: {e}", seed=seed)
    except Exception as e:  # surfaced as ERROR, never as FAIL
        tb = traceback.format_exception_only(type(e), e)[-1].strip()
        return Report(entry.id, entry.title, ERROR, error=tb, seed=seed)
    finally:
        if token is not None:
            reset_budget(token)


def _worker(args):
    entry_id, seed, budget = args
    return run_example(entry_id, seed, budget)


def run_all(seed: int = None, budget: Budget = None, workers: int = None):
    """Run every entry in a process pool; reports come back in registry order."""
    import os
    from concurrent.futures import ProcessPoolExecutor

    jobs = [(e.id, seed, budget) for e in REGISTRY]
    workers = workers or max(1, min(len(jobs), os.cpu_count() or 1))
    if workers == 1:
        return [_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, jobs))
