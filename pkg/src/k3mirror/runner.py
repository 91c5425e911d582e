"""Case pipeline, reflexive extension search, database scan and reports."""

from __future__ import annotations

import json
import math
import os
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from . import batyrev, intmat
from .cases import (CASES, LATTICE_VARIABLES, CaseDefinition, ExtensionData, LatticeData,
                    as_fractions, get_case)
from .invertible import (ExponentMatrix, enumerate_deformations, parse_polynomial,
                         transpose, weight_system)
from .lattice import (IntegralLattice, direct_sum, find_hyperbolic_plane, is_isometric_small, mirror_orthogonality_check,
                      named, prime_det_primitivity, primitive_embedding_exists)
from .picard import picard_model
from .polytope import (LatticePolytope, SublatticeBasis, find_isomorphic_subpolytope,
                       lattice_from_case, lattice_isomorphism,
                       newton_polytope, normal_form, parse_palp, polar_dual)

DATABASE_ENV = "K3MIRROR_DATABASE"


# -- reporting primitives --------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    if isinstance(x, np.integer):
        return int(x)
    return x


@dataclass
class Check:
    key: str
    expected: Any
    computed: Any
    ok: bool
    flagged: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        out = {"key": self.key, "expected": _jsonable(self.expected),
               "computed": _jsonable(self.computed), "ok": self.ok}
        if self.flagged:
            out["flagged"] = True
            out["note"] = self.note
        return out


@dataclass
class DeformationRecord:
    label: str
    polynomial: str
    weights: tuple[int, ...]
    degree: int
    vertices: list
    reflexive: bool
    witness: tuple | None
    nonintegral: list
    correction: batyrev.CorrectionLedger | None = None
    ranks: batyrev.RankReport | None = None
    transpose_polynomial: str | None = None
    transpose_vertices: list | None = None
    transpose_reflexive: bool | None = None
    transpose_witness: tuple | None = None
    transpose_nonintegral: list = field(default_factory=list)
    transpose_inside_dual: bool | None = None
    pair_orthogonality: Any = None

    @property
    def theorem_a_ok(self) -> bool:
        """Non-reflexive, or reflexive with a nonzero correction term."""
        return (not self.reflexive) or self.correction.total > 0

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "polynomial": self.polynomial,
            "weights": list(self.weights), "degree": self.degree,
            "newton_vertices": self.vertices,
            "reflexive": self.reflexive,
        }
        if not self.reflexive:
            out["witness"] = self.witness
            out["nonintegral_dual_vertices"] = self.nonintegral
        else:
            out["correction"] = self.correction
            out["ranks"] = self.ranks
        if self.transpose_polynomial is not None:
            out["transpose"] = {
                "polynomial": self.transpose_polynomial,
                "newton_vertices": self.transpose_vertices,
                "reflexive": self.transpose_reflexive,
                "witness": self.transpose_witness,
                "nonintegral_dual_vertices": self.transpose_nonintegral,
                "inside_dual": self.transpose_inside_dual,
            }
        if self.pair_orthogonality is not None:
            out["pair_orthogonality"] = self.pair_orthogonality
        out["theorem_a_ok"] = self.theorem_a_ok
        return _jsonable(out)


@dataclass
class ExtensionRecord:
    label: str
    polytope: LatticePolytope
    reflexive: bool
    contains_newton: bool
    contains_transpose: bool
    correction: batyrev.CorrectionLedger
    ranks: batyrev.RankReport
    toric: Any
    split: Any
    orthogonality: Any
    embedding: dict
    normal_forms: dict

    @property
    def theorem_b_ok(self) -> bool:
        v = self.orthogonality
        return (self.reflexive and self.contains_newton and self.contains_transpose
                and v.det_check and v.group_check and v.form_check)

    def to_dict(self) -> dict:
        return _jsonable({
            "label": self.label,
            "vertices": [list(v) for v in self.polytope.vertices],
            "dual_vertices": [list(v) for v in self.polytope.dual.vertices],
            "reflexive": self.reflexive,
            "contains_newton": self.contains_newton,
            "contains_transpose_newton_in_dual": self.contains_transpose,
            "correction": self.correction,
            "ranks": self.ranks,
            "toric_model": self.toric,
            "split_model": self.split,
            "orthogonality": self.orthogonality,
            "embedding": self.embedding,
            "normal_forms": self.normal_forms,
            "theorem_b_ok": self.theorem_b_ok,
        })


@dataclass
class CaseReport:
    name: str
    f: str
    f_transpose: str
    deformations: list[DeformationRecord]
    transpose_side: list[DeformationRecord]
    extensions: list[ExtensionRecord]
    checks: list[Check]
    notes: list[str] = field(default_factory=list)
    searches: dict[str, "ExtensionSearch"] = field(default_factory=dict)

    @property
    def theorem_a(self) -> bool:
        return all(d.theorem_a_ok for d in self.deformations)

    @property
    def theorem_b(self) -> bool:
        return any(e.theorem_b_ok for e in self.extensions)

    @property
    def discrepancies(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def unexplained(self) -> list[Check]:
        return [c for c in self.discrepancies if not c.flagged]

    @property
    def ok(self) -> bool:
        return self.theorem_a and self.theorem_b and not self.unexplained

    def check(self, key: str) -> Check:
        for c in self.checks:
            if c.key == key:
                return c
        raise KeyError(key)

    def to_dict(self) -> dict:
        return _jsonable({
            "case": self.name,
            "f": self.f,
            "f_transpose": self.f_transpose,
            "deformations": self.deformations,
            "transpose_side_deformations": self.transpose_side,
            "theorem_a": self.theorem_a,
            "extensions": self.extensions,
            "extension_search": self.searches,
            "theorem_b": self.theorem_b,
            "checks": self.checks,
            "discrepancies": [c.key for c in self.discrepancies],
            "unexplained_discrepancies": [c.key for c in self.unexplained],
            "notes": self.notes,
            "ok": self.ok,
        })


# -- helpers ---------------------------------------------------------------

def monomial_label(row: Sequence[int], names: Sequence[str] = LATTICE_VARIABLES) -> str:
    return ExponentMatrix((tuple(row),), tuple(names)).monomial(row)


def build_lattice(data: LatticeData) -> SublatticeBasis:
    return lattice_from_case(data.weight, data.congruences, data.basis)


def _shift(row):
    return [e - 1 for e in row]


def lattice_filter(lat: SublatticeBasis):
    """Accept polynomials all of whose shifted exponents lie in ``lat``."""
    def accept(p: ExponentMatrix) -> bool:
        return all(lat.contains(_shift(r)) for r in p.reordered(LATTICE_VARIABLES))
    return accept


def newton(p: ExponentMatrix, lat: SublatticeBasis) -> LatticePolytope:
    return newton_polytope(p.reordered(LATTICE_VARIABLES), lat)


def _gram_of(model) -> list[list[int]]:
    return [list(r) for r in model.gram]


def _invariants(lat: IntegralLattice) -> tuple:
    return lat.det, lat.signature, lat.discriminant_group


def _columns(cols: Sequence[Sequence[int]]) -> list[list[int]]:
    return intmat.transpose([list(c) for c in cols])


def _deformation_record(F: ExponentMatrix, lat: SublatticeBasis,
                        lat_t: SublatticeBasis | None) -> DeformationRecord:
    ws = weight_system(F)
    label = monomial_label(F.reordered(LATTICE_VARIABLES)[-1])
    N = newton(F, lat)
    res = polar_dual(N)
    rec = DeformationRecord(label, str(F), ws.weights, ws.degree,
                            [list(v) for v in N.vertices], res.reflexive,
                            res.witness, res.nonintegral)
    if res.reflexive:
        rec.correction = batyrev.toric_correction(N)
        rec.ranks = batyrev.rank_report(N)
    if lat_t is not None:
        FT = transpose(F)
        rec.transpose_polynomial = str(FT)
        try:
            NT = newton(FT, lat_t)
        except ValueError:
            return rec
        rt = polar_dual(NT)
        rec.transpose_vertices = [list(v) for v in NT.vertices]
        rec.transpose_reflexive = rt.reflexive
        rec.transpose_witness = rt.witness
        rec.transpose_nonintegral = rt.nonintegral
        if res.reflexive:
            rec.transpose_inside_dual = N.dual.contains(NT)
            if rec.transpose_inside_dual:
                toric = picard_model(N.dual, split=False)
                split = picard_model(N, split=True)
                rec.pair_orthogonality = mirror_orthogonality_check(toric.lattice, split.lattice)
    return rec


# -- the case pipeline -----------------------------------------------------

class _Checker:
    def __init__(self, case: CaseDefinition):
        self.case = case
        self.checks: list[Check] = []

    def add(self, key, expected, computed, ok=None):
        if ok is None:
            ok = expected == computed
        flagged = (not ok) and key in self.case.flagged
        note = self.case.flagged.get(key, "") if flagged else ""
        self.checks.append(Check(key, expected, computed, bool(ok), flagged, note))
        return ok


def _model_for(delta: LatticePolytope, ext: ExtensionData, split: bool,
               convention: str = "sum"):
    if split:
        pts = ext.split_points
        if not pts:
            return picard_model(delta, split=True)
        gens = None
        if ext.split_generators:
            gens = [(pts[i - 1], c) for i, c in ext.split_generators]
        return picard_model(delta, split=True, order=pts,
                            dropped=[pts[i - 1] for i in ext.split_dropped], generators=gens)
    pts = ext.toric_points
    if not pts:
        return picard_model(delta.dual, split=False, convention=convention)
    gens = None
    if ext.toric_keep_order:
        gens = [(pts[i - 1], 0) for i in ext.toric_keep_order]
    return picard_model(delta.dual, split=False, order=pts,
                        dropped=[pts[i - 1] for i in ext.toric_dropped],
                        convention=convention, generators=gens)


def _extension_record(case: CaseDefinition, ext: ExtensionData, chk: _Checker,
                      deformations: dict[str, ExponentMatrix], lat: SublatticeBasis,
                      lat_t: SublatticeBasis, isometry_bound: int) -> ExtensionRecord:
    key = ext.label
    exp = ext.expected
    delta = LatticePolytope(ext.vertices)
    res = polar_dual(delta)
    chk.add(f"{key}:reflexive", True, res.reflexive)
    if not res.reflexive:
        raise ValueError(f"{case.name} {key}: extension polytope is not reflexive")
    if ext.dual_vertices:
        chk.add(f"{key}:dual_vertices", sorted(ext.dual_vertices), delta.dual.vertices)
    if ext.deformation not in deformations:
        raise ValueError(f"{case.name} {key}: deformation {ext.deformation} was not enumerated")
    F = deformations[ext.deformation]
    Q = newton(F, lat)
    QT = newton(transpose(F), lat_t)
    contains_q = delta.contains(Q)
    contains_qt = delta.dual.contains(QT)
    chk.add(f"{key}:contains_newton", True, contains_q)
    chk.add(f"{key}:dual_contains_transpose_newton", True, contains_qt)
    for other in ext.also_contains:
        chk.add(f"{key}:contains_newton[{other}]", True,
                delta.contains(newton(deformations[other], lat)))
    ledger = batyrev.toric_correction(delta)
    ranks = batyrev.rank_report(delta)
    chk.add(f"{key}:correction", exp["correction"], ledger.total)
    chk.add(f"{key}:rho", tuple(exp["rho"]), (ranks.rho, ranks.rho_dual))
    chk.add(f"{key}:rank_identity", True, ranks.identity_holds)

    toric = _model_for(delta, ext, split=False)
    split = _model_for(delta, ext, split=True)
    L, Lp = toric.lattice, split.lattice
    chk.add(f"{key}:toric_rank", ranks.rank_pic_tor_dual, L.rank)
    chk.add(f"{key}:split_rank", ranks.rho, Lp.rank)
    if "toric_gram" in exp:
        chk.add(f"{key}:toric_gram", [list(r) for r in exp["toric_gram"]], _gram_of(toric))
    if "split_gram" in exp:
        chk.add(f"{key}:split_gram", [list(r) for r in exp["split_gram"]], _gram_of(split))
    for name, lattice in (("L", L), ("L_prime", Lp)):
        det, sgn, grp = exp[name]
        chk.add(f"{key}:{name}:det", det, lattice.det)
        chk.add(f"{key}:{name}:signature", tuple(sgn), lattice.signature)
        if grp is not None:
            chk.add(f"{key}:{name}:group", tuple(grp), lattice.discriminant_group)
        chk.add(f"{key}:{name}:group_order", abs(lattice.det),
                math.prod(lattice.discriminant_group))

    if "L_basis_change" in exp:
        cols, target, convention = exp["L_basis_change"]
        model = _model_for(delta, ext, split=False, convention=convention)
        t = _columns(cols)
        got = intmat.matmul(intmat.matmul(intmat.transpose(t), model.gram), t)
        chk.add(f"{key}:L_basis_change[{convention}]", [list(r) for r in target], got)
        chk.add(f"{key}:L_basis_change_unimodular", 1, abs(intmat.det(t)))
    if "L_named" in exp:
        target = IntegralLattice(exp["L_named"])
        found = is_isometric_small(L, target, isometry_bound)
        chk.add(f"{key}:L_isometry_search", True, found is not None)
    if "L_prime_form" in exp:
        parts = [named(x) for x in exp["L_prime_form"]]
        ref = direct_sum(*parts)
        same = (ref.rank == Lp.rank and ref.signature == Lp.signature and ref.is_even == Lp.is_even
                and ref.discriminant_form.is_isomorphic(Lp.discriminant_form))
        chk.add(f"{key}:L_prime_form[{'+'.join(exp['L_prime_form'])}]", True, same)
    embedding: dict[str, Any] = {}
    if "L_hyperbolic" in exp:
        u1, u2 = exp["L_hyperbolic"]
        g = L.gram
        sub = [[intmat.dot(a, intmat.matvec(g, b)) for b in (u1, u2)] for a in (u1, u2)]
        chk.add(f"{key}:L_hyperbolic_plane", [[0, 1], [1, 0]], sub)
        minors = [u1[i] * u2[j] - u1[j] * u2[i] for i in range(len(u1)) for j in range(i + 1, len(u1))]
        chk.add(f"{key}:L_hyperbolic_primitive", 1, intmat.gcd_list(minors))
        plane = find_hyperbolic_plane(L)
        embedding["L_hyperbolic_plane_found"] = plane
        chk.add(f"{key}:L_contains_U", True, plane is not None)
    for name, lattice in (("L", L), ("L_prime", Lp)):
        if f"{name}_element_order" in exp:
            x, order = exp[f"{name}_element_order"]
            chk.add(f"{key}:{name}_element_order", order, lattice.dual_element_order(x))

    embedding["L_prime_prime_det"] = prime_det_primitivity(Lp)
    if "prime_det" in exp:
        chk.add(f"{key}:L_prime_prime_det", exp["prime_det"], embedding["L_prime_prime_det"])
    if prime_det_primitivity(Lp):
        chk.add(f"{key}:L_prime_group_cyclic_prime", 1, len(Lp.discriminant_group))
    embedding["L_prime_embeds_in_k3"] = primitive_embedding_exists(Lp)
    chk.add(f"{key}:L_prime_embeds_in_k3", True, embedding["L_prime_embeds_in_k3"])

    verdict = mirror_orthogonality_check(L, Lp)
    chk.add(f"{key}:orthogonality:det", True, verdict.det_check)
    chk.add(f"{key}:orthogonality:group", True, verdict.group_check)
    chk.add(f"{key}:orthogonality:form", True, verdict.form_check)
    if "claimed_groups" in exp:
        claimed = tuple(tuple(g) for g in exp["claimed_groups"])
        chk.add(f"{key}:discriminant_groups", claimed,
                (L.discriminant_group, Lp.discriminant_group))

    forms = {"polytope": normal_form(delta), "dual": normal_form(delta.dual)}
    if "isomorphic_to" in exp:
        other_case, other_label = exp["isomorphic_to"]
        other = next(e for e in CASES[other_case].extensions if e.label == other_label)
        a = lattice_isomorphism(delta, LatticePolytope(other.vertices))
        embedding["isomorphism_to_" + other_case] = a
        chk.add(f"{key}:isomorphic_to[{other_case}]", True, a is not None)
    return ExtensionRecord(key, delta, res.reflexive, contains_q, contains_qt, ledger, ranks,
                           toric.to_dict(), split.to_dict(), verdict, embedding, forms)


def run_case(name: str, isometry_bound: int = 6, search: bool = True,
             subpolytope_search: bool = False) -> CaseReport:
    """Run the whole pipeline for a registered pair; mismatches with the
    reference data are collected in the report rather than raised.

    ``search`` also runs the complete extension search for each extension's
    deformation. ``subpolytope_search`` adds the (slow) up-to-isomorphism
    containment test for transposed Newton polytopes.
    """
    case = get_case(name)
    chk = _Checker(case)
    lat = build_lattice(case.m)
    lat_t = build_lattice(case.m_dual)
    f = parse_polynomial(case.f, ("x", "y", "z"))
    f_up = ExponentMatrix(f.rows, ("X", "Y", "Z"))
    ft_up = transpose(f_up)

    defs = enumerate_deformations(f_up, accept=lattice_filter(lat))
    records = [_deformation_record(F, lat, lat_t) for F in defs]
    by_label = {r.label: F for r, F in zip(records, defs)}
    chk.add("deformations", sorted(case.expected_deformations), sorted(by_label))

    tdefs = enumerate_deformations(ft_up, accept=lattice_filter(lat_t))
    trecords = [_deformation_record(G, lat_t, None) for G in tdefs]
    if case.expected_transpose_deformations is not None:
        chk.add("transpose_side_deformations", sorted(case.expected_transpose_deformations),
                sorted(r.label for r in trecords))

    rec_by = {r.label: r for r in records}
    for label, w in case.witnesses.items():
        r = rec_by.get(label)
        chk.add(f"{label}:witness", as_fractions(w),
                r.nonintegral if r else None,
                ok=r is not None and as_fractions(w) in r.nonintegral)
    for label, w in case.transpose_witnesses.items():
        r = rec_by.get(label)
        chk.add(f"{label}:transpose_witness", as_fractions(w),
                r.transpose_nonintegral if r else None,
                ok=r is not None and as_fractions(w) in r.transpose_nonintegral)
    trec_by = {r.label: r for r in trecords}
    for label, w in case.dual_side_witnesses.items():
        r = trec_by.get(label)
        chk.add(f"dual_side:{label}:witness", as_fractions(w),
                r.nonintegral if r else None,
                ok=r is not None and as_fractions(w) in r.nonintegral)
    for label, c in case.expected_corrections.items():
        r = rec_by.get(label)
        chk.add(f"{label}:correction", c,
                r.correction.total if r and r.reflexive else None)
    for label, inside in case.expected_transpose_inside_dual.items():
        r = rec_by.get(label)
        chk.add(f"{label}:transpose_inside_dual", inside, r.transpose_inside_dual if r else None)
        if subpolytope_search and r is not None and r.reflexive:
            F = by_label[label]
            N = newton(F, lat)
            copy = find_isomorphic_subpolytope(N.dual, newton(transpose(F), lat_t))
            chk.add(f"{label}:transpose_isomorphic_subpolytope", inside, copy is not None)
    chk.add("theorem_a", True, all(r.theorem_a_ok for r in records))

    exts = [_extension_record(case, e, chk, by_label, lat, lat_t, isometry_bound)
            for e in case.extensions]
    searches = {}
    if search:
        for label in sorted({e.deformation for e in case.extensions}):
            F = by_label[label]
            found = find_extensions(newton(F, lat), newton(transpose(F), lat_t))
            searches[label] = found
            verts = {tuple(p.vertices) for p in found.results}
            for data, e in zip(case.extensions, exts):
                if data.deformation == label:
                    chk.add(f"{e.label}:found_by_search", True, tuple(e.polytope.vertices) in verts)
    labels = {e.label: e for e in exts}
    for ext in case.extensions:
        other = ext.expected.get("isometric_to")
        if other:
            a, b = labels[ext.label], labels[other]
            for which in ("toric", "split"):
                la = _model_for(a.polytope, ext, which == "split").lattice
                oext = next(x for x in case.extensions if x.label == other)
                lb = _model_for(b.polytope, oext, which == "split").lattice
                same_genus = (la.rank == lb.rank and la.signature == lb.signature
                              and la.discriminant_form.is_isomorphic(lb.discriminant_form))
                # Even, indefinite and rank >= 2 + l(A): the genus has one class.
                unique = la.signature[0] and la.signature[1] and \
                    la.rank >= 2 + la.discriminant_form.length
                chk.add(f"{ext.label}:{which}_isometric_to[{other}]", True,
                        bool(same_genus and unique))
    chk.add("theorem_b", True, any(e.theorem_b_ok for e in exts))

    notes = ["database indices depend on an externally ordered file and are not checked; "
             "extension polytopes are identified by normal form instead"]
    return CaseReport(case.name, str(f), str(transpose(f)), records, trecords, exts,
                      chk.checks, notes, searches)


# -- reflexive extensions --------------------------------------------------

def _dual_region_points(qt: LatticePolytope, bound: int | None) -> list[tuple[int, ...]]:
    """Lattice points ``x`` with ``<x, y> >= -1`` for every vertex ``y`` of ``qt``."""
    verts = qt.dual_vertices()
    n = qt.ambient_dim
    lo = [math.floor(min(v[k] for v in verts)) for k in range(n)]
    hi = [math.ceil(max(v[k] for v in verts)) for k in range(n)]
    if bound is not None:
        lo = [max(x, -bound) for x in lo]
        hi = [min(x, bound) for x in hi]
    axes = [np.arange(lo[k], hi[k] + 1, dtype=np.int64) for k in range(n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    ys = np.array(qt.vertices, dtype=np.int64)
    ok = (grid @ ys.T >= -1).all(axis=1)
    return [tuple(p) for p in grid[ok].tolist()]


@dataclass
class ExtensionSearch:
    results: list[LatticePolytope]
    region_size: int
    visited: int
    bound: int | None

    def classes(self) -> list[list[int]]:
        """Indices of results grouped by normal form, in first-seen order."""
        groups: dict[tuple, list[int]] = {}
        for i, p in enumerate(self.results):
            groups.setdefault(tuple(map(tuple, normal_form(p))), []).append(i)
        return list(groups.values())

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "region_points": self.region_size,
            "hulls_visited": self.visited,
            "results": [{"vertices": [list(v) for v in p.vertices],
                         "correction": batyrev.toric_correction(p).total,
                         "rho": [batyrev.rho(p), batyrev.rho(p.dual)]} for p in self.results],
            "normal_form_classes": self.classes(),
        }


def find_extensions(q: LatticePolytope, q_t: LatticePolytope, bound: int | None = None,
                    limit: int | None = None) -> ExtensionSearch:
    """Reflexive ``D`` with ``q ⊆ D`` and ``q_t ⊆ D°`` in the given coordinates.

    Such ``D`` lies inside the polar of ``q_t``, so it is the hull of ``q``
    and some lattice points of that region; growing hulls one point at a
    time from ``q`` reaches all of them. With ``bound`` the added points are
    further restricted to a coordinate box. Results are ordered by number
    of lattice points, then vertices.
    """
    if not q_t.origin_interior():
        raise ValueError("origin must be interior to the transposed Newton polytope")
    region = _dual_region_points(q_t, bound)
    if not all(intmat.dot(v, y) >= -1 for v in q.vertices for y in q_t.vertices):
        return ExtensionSearch([], len(region), 0, bound)
    start = frozenset(q.vertices)
    seen = {start}
    queue = deque([q])
    found = []
    while queue:
        p = queue.popleft()
        if p.is_reflexive:
            found.append(p)
            if limit is not None and len(found) >= limit:
                break
        inside = set(p.points)
        for x in region:
            if x in inside:
                continue
            cand = LatticePolytope(list(p.vertices) + [x])
            key = frozenset(cand.vertices)
            if key in seen:
                continue
            seen.add(key)
            queue.append(cand)
    found.sort(key=lambda p: (len(p.points), p.vertices))
    return ExtensionSearch(found, len(region), len(seen), bound)


# -- database scan ---------------------------------------------------------

@dataclass
class ScanSummary:
    total: int
    zero_correction: int
    self_dual_zero_correction: int
    correction_histogram: dict[int, int]
    rho_histogram: dict[int, int]
    skipped: str | None = None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "zero_correction": self.zero_correction,
            "self_dual_zero_correction": self.self_dual_zero_correction,
            "correction_histogram": {str(k): v for k, v in sorted(self.correction_histogram.items())},
            "rho_histogram": {str(k): v for k, v in sorted(self.rho_histogram.items())},
            "skipped": self.skipped,
        }


def _scan_one(vertices) -> tuple[int, int, bool]:
    p = LatticePolytope(vertices)
    corr = batyrev.toric_correction(p).total
    r = batyrev.rho(p)
    self_dual = False
    if corr == 0:
        self_dual = normal_form(p) == normal_form(p.dual)
    return corr, r, self_dual


def summarize(polytopes: Iterable[LatticePolytope], jobs: int = 1) -> ScanSummary:
    verts = [list(p.vertices) for p in polytopes]
    if jobs > 1 and len(verts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_one, verts, chunksize=16))
    else:
        rows = [_scan_one(v) for v in verts]
    corr_hist = Counter(c for c, _, _ in rows)
    rho_hist = Counter(r for _, r, _ in rows)
    zero = sum(1 for c, _, _ in rows if c == 0)
    sd = sum(1 for c, _, s in rows if c == 0 and s)
    return ScanSummary(len(rows), zero, sd, dict(corr_hist), dict(rho_hist))


def scan_database(path: str | None = None, jobs: int = 1) -> ScanSummary:
    """Correction statistics over a PALP file of reflexive 3-polytopes.

    ``path`` defaults to the ``K3MIRROR_DATABASE`` environment variable;
    when neither is available the scan is skipped with a notice.
    """
    path = path or os.environ.get(DATABASE_ENV)
    if not path:
        return ScanSummary(0, 0, 0, {}, {}, skipped=f"no database file (set {DATABASE_ENV})")
    with open(path) as fh:
        text = fh.read()
    polys = parse_palp(text)
    bad = [i for i, p in enumerate(polys) if not p.is_reflexive]
    if bad:
        raise ValueError(f"entry {bad[0]} of {path} is not reflexive")
    return summarize(polys, jobs)


# -- output ----------------------------------------------------------------

def emit_report(report, fmt: str = "json") -> str:
    """Deterministic serialisation (sorted keys, fractions as strings)."""
    data = _jsonable(report.to_dict() if hasattr(report, "to_dict") else report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        if isinstance(report, CaseReport):
            return _case_text(report)
        if isinstance(report, ScanSummary):
            return _scan_text(report)
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    raise ValueError("format must be 'json' or 'text'")


def _scan_text(s: ScanSummary) -> str:
    lines = []
    if s.skipped:
        lines.append(f"skipped: {s.skipped}")
    lines += [f"total: {s.total}", f"zero correction: {s.zero_correction}",
              f"self-dual with zero correction: {s.self_dual_zero_correction}"]
    lines.append("correction histogram: " + ", ".join(
        f"{k}:{v}" for k, v in sorted(s.correction_histogram.items())))
    lines.append("rho histogram: " + ", ".join(
        f"{k}:{v}" for k, v in sorted(s.rho_histogram.items())))
    return "\n".join(lines) + "\n"


def _fmt_point(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _case_text(r: CaseReport) -> str:
    out = [f"case {r.name}: f = {r.f}, f^T = {r.f_transpose}", "", "deformations:"]
    for d in r.deformations:
        line = f"  {d.polynomial}: "
        if d.reflexive:
            line += f"reflexive, correction {d.correction.total}, rho {d.ranks.rho}/{d.ranks.rho_dual}"
        else:
            line += f"not reflexive, witness {_fmt_point(d.witness)}"
        out.append(line)
        if d.transpose_polynomial and d.transpose_reflexive is not None:
            t = "reflexive" if d.transpose_reflexive else f"not reflexive, witness {_fmt_point(d.transpose_witness)}"
            out.append(f"    transpose {d.transpose_polynomial}: {t}")
    if r.transpose_side:
        out.append("transpose-side deformations:")
        for d in r.transpose_side:
            t = "reflexive" if d.reflexive else f"not reflexive, witness {_fmt_point(d.witness)}"
            out.append(f"  {d.polynomial}: {t}")
    out.append(f"no deformation with reflexive Newton polytope and zero correction: {r.theorem_a}")
    for e in r.extensions:
        out += ["", f"extension {e.label}: vertices " + " ".join(_fmt_point(v) for v in e.polytope.vertices)]
        out.append(f"  correction {e.correction.total}, rho {e.ranks.rho}/{e.ranks.rho_dual}")
        L, Lp = e.toric["lattice"], e.split["lattice"]
        out.append(f"  L : det {L['det']}, sgn {tuple(L['signature'])}, group {[x for x in L['smith_invariants'] if x > 1]}")
        out.append(f"  L': det {Lp['det']}, sgn {tuple(Lp['signature'])}, rank {Lp['rank']}")
        v = e.orthogonality
        out.append(f"  orthogonality: det {v.det_check}, group {v.group_check}, form {v.form_check}")
    out.append(f"extension with orthogonal lattice pair found: {r.theorem_b}")
    out.append("")
    out.append("checks: " + str(sum(c.ok for c in r.checks)) + "/" + str(len(r.checks)) + " match")
    for c in r.discrepancies:
        tag = "flagged" if c.flagged else "MISMATCH"
        out.append(f"  [{tag}] {c.key}: expected {_jsonable(c.expected)}, computed {_jsonable(c.computed)}")
        if c.note:
            out.append(f"      {c.note}")
    return "\n".join(out) + "\n"
