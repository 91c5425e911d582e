"""Acceptance criteria 1-11, one printed PASS/FAIL line each.

Every comparison is exact (integers and reduced fractions); the only
tolerance is the float cutoff used by the eigenvalue oracle, pinned below.
Run with ``pytest tests/test_acceptance.py -v`` or as a script.
"""
import contextlib
import io
import os
import random
import sys
from fractions import Fraction
from math import prod

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import CASE_POLYTOPES, apply, random_unimodular  # noqa: E402
from k3mirror import intmat  # noqa: E402
from k3mirror.batyrev import rank_report, toric_correction  # noqa: E402
from k3mirror.cases import CASES, J30_SPLIT_GRAM, J30_TORIC_GRAM  # noqa: E402
from k3mirror.cli import main as cli_main  # noqa: E402
from k3mirror.lattice import IntegralLattice, direct_sum, is_isometric_small, named  # noqa: E402
from k3mirror.polytope import LatticePolytope, normal_form  # noqa: E402
from k3mirror.runner import DATABASE_ENV, _model_for, run_case, scan_database  # noqa: E402

EIGEN_TOL = 1e-9          # signature oracle cutoff; everything else is exact
TRANSFORMS = 100

# -- expected values ---------------------------------------------------------

EXPECTED_DEFORMATIONS = {
    "Z13/J30": ({"W^9Z", "W^18"}, None),
    "X20/S17": ({"W^7X"}, None),
    "W18/W18": ({"W^7Y", "W^8X"}, None),
    "W17/S10": ({"W^10"}, {"W^10", "W^7Z"}),
    "U16/U16": ({"W^6X"}, None),
}

# (case, side, deformation) -> reference witness
EXPECTED_WITNESSES = {
    ("Z13/J30", "f", "W^9Z"): ("-1", "-1", "5/4"),
    ("X20/S17", "f", "W^7X"): ("1", "1", "11/2"),
    ("X20/S17", "transpose", "W^7X"): ("-1", "-2", "1/3"),
    ("W18/W18", "f", "W^7Y"): ("-7/2", "-5/2", "-1"),
    ("W17/S10", "f", "W^10"): ("0", "-1", "7/3"),
    ("W17/S10", "dual_side", "W^10"): ("2/3", "2/3", "1/3"),
    ("W17/S10", "dual_side", "W^7Z"): ("-2/3", "1", "5/3"),
}

# rank of L0 (the toric correction)
EXPECTED_CORRECTIONS = [
    ("Z13/J30", "newton", 2),
    ("W18/W18", "W^8X", 1),
    ("X20/S17", "extension", 6),
    ("W17/S10", "case-i", 5),
    ("W17/S10", "case-ii", 5),
    ("U16/U16", "newton", 2),
]

EXPECTED_RANKS = {
    "Z13/J30": (16, 6),
    "X20/S17": (16, 10),
    "W17/S10": (13, 12),
    "U16/U16": (18, 4),
}

# (det, signature) of L and L'
EXPECTED_INVARIANTS = {
    "Z13/J30": ((-3, (1, 3)), (-3, (1, 15)), (3,)),
    "X20/S17": ((-7, (1, 3)), (-7, (1, 15)), (7,)),
    "W18/W18": ((-7, (1, 3)), (-7, (1, 15)), (7,)),
    "W17/S10": ((20, (1, 6)), (20, (1, 12)), (20,)),
    "U16/U16": (None, (-9, (1, 17)), None),
}

EXPECTED_NAMED = {
    "Z13/J30": ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 1), (0, 0, 1, -2)),
    "X20/S17": ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -4, 1), (0, 0, 1, -2)),
    "U16/U16": ((0, 3), (3, 0)),
}

EXPECTED_FLAGGED = "U16/U16", "newton:discriminant_groups"

EXPECTED_SCAN = (4319, 1863, 53)


# -- shared state ------------------------------------------------------------

_REPORTS = {}


def reports():
    if not _REPORTS:
        for name in CASES:
            _REPORTS[name] = run_case(name)
    return _REPORTS


def deformation(name, label, side="f"):
    r = reports()[name]
    pool = r.transpose_side if side == "dual_side" else r.deformations
    return next(d for d in pool if d.label == label)


# -- criteria ----------------------------------------------------------------

def criterion_1():
    bad = []
    for name, (f_side, t_side) in EXPECTED_DEFORMATIONS.items():
        r = reports()[name]
        got = {d.label for d in r.deformations}
        if got != f_side:
            bad.append(f"{name}: {sorted(got)}")
        if t_side is not None and {d.label for d in r.transpose_side} != t_side:
            bad.append(f"{name} transpose side")
    return not bad, "; ".join(bad) or "all five deformation sets equal"


def criterion_2():
    bad = []
    for (name, side, label), ref in EXPECTED_WITNESSES.items():
        d = deformation(name, label, side)
        want = tuple(Fraction(x) for x in ref)
        if side == "transpose":
            reflexive, pool = d.transpose_reflexive, d.transpose_nonintegral
        else:
            reflexive, pool = d.reflexive, d.nonintegral
        # the reference vertex must be a non-integral dual vertex
        if reflexive or want not in [tuple(v) for v in pool]:
            bad.append(f"{name} {side} {label}")
    return not bad, "; ".join(bad) or f"{len(EXPECTED_WITNESSES)} witnesses found among the dual vertices"


def criterion_3():
    bad = []
    for name, label, want in EXPECTED_CORRECTIONS:
        r = reports()[name]
        hits = [e.correction.total for e in r.extensions if e.label == label]
        hits += [d.correction.total for d in r.deformations if d.label == label and d.reflexive]
        if hits != [want]:
            bad.append(f"{name} {label}: {hits}")
    return not bad, "; ".join(bad) or "rank L0 = 2, 1, 6, 5, 5, 2"


def criterion_4():
    bad = []
    for name, want in EXPECTED_RANKS.items():
        for e in reports()[name].extensions:
            got = (e.ranks.rho, e.ranks.rho_dual)
            if got != want:
                bad.append(f"{name} {e.label}: {got}")
    for name, r in reports().items():
        for e in r.extensions:
            if not e.ranks.identity_holds or e.ranks.rank_pic_tor + e.ranks.rho_dual != 20:
                bad.append(f"{name} {e.label}: identity")
        for d in r.deformations:
            if d.reflexive and not d.ranks.identity_holds:
                bad.append(f"{name} {d.label}: identity")
    return not bad, "; ".join(bad) or "ranks match and rank_pic_tor + rho(dual) = 20 throughout"


def criterion_5():
    ext = CASES["Z13/J30"].extensions[0]
    delta = LatticePolytope(ext.vertices)
    toric = _model_for(delta, ext, split=False).gram
    split = _model_for(delta, ext, split=True).gram
    ok_t = toric == [list(r) for r in J30_TORIC_GRAM]
    ok_s = split == [list(r) for r in J30_SPLIT_GRAM]
    return ok_t and ok_s, f"4x4 equal: {ok_t}, 16x16 equal: {ok_s}"


def _eigen_signature(g):
    ev = np.linalg.eigvalsh(np.array(g, dtype=float))
    return int((ev > EIGEN_TOL).sum()), int((ev < -EIGEN_TOL).sum())


def criterion_6():
    bad = []
    for name, (l_inv, lp_inv, group) in EXPECTED_INVARIANTS.items():
        for e in reports()[name].extensions:
            for which, want in (("toric", l_inv), ("split", lp_inv)):
                if want is None:
                    continue
                g = getattr(e, which)["gram"]
                lat = IntegralLattice(g)
                got = (lat.det, lat.signature)
                if got != want or _eigen_signature(g) != want[1]:
                    bad.append(f"{name} {e.label} {which}: {got}")
                if group is not None and lat.discriminant_group != group:
                    bad.append(f"{name} {e.label} {which} group {lat.discriminant_group}")
    return not bad, "; ".join(bad) or "det, signature and groups Z/3, Z/7, Z/20 match"


def criterion_7():
    bad = []
    for name, target in EXPECTED_NAMED.items():
        case = CASES[name]
        ext = case.extensions[0]
        delta = LatticePolytope(ext.vertices)
        exp = ext.expected
        cols, printed, convention = exp["L_basis_change"]
        model = _model_for(delta, ext, split=False, convention=convention)
        t = [list(r) for r in zip(*cols)]
        if intmat.matmul(intmat.matmul(intmat.transpose(t), model.gram), t) != [list(r) for r in printed]:
            bad.append(f"{name}: printed change of basis")
        if [list(r) for r in printed] != [list(r) for r in target]:
            bad.append(f"{name}: printed target")
        lat = IntegralLattice(_model_for(delta, ext, split=False).gram)
        found = is_isometric_small(lat, IntegralLattice(target), bound=6)
        if found is None or lat.transform(found).gram != tuple(map(tuple, target)):
            bad.append(f"{name}: search")
    return not bad, "; ".join(bad) or "U+A2, U+[[-4,1],[1,-2]], U(3) recovered; T^t G T = G' exactly"


def criterion_8():
    codes = {}
    for name in CASES:
        r = reports()[name]
        if not r.theorem_a:
            codes[name] = "theorem A false"
            continue
        for d in r.deformations:
            if d.reflexive and (d.correction.total == 0 or d.ranks.rho + d.ranks.rho_dual == 20):
                codes[name] = f"{d.label} reaches 20"
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli_main(["case", "run", name, "--no-search", "--json", os.devnull])
        if code != 0:
            codes[name] = f"exit {code}"
    return not codes, "; ".join(f"{k}: {v}" for k, v in codes.items()) or "run_case exits 0 for all five pairs"


def criterion_9():
    bad, flagged = [], []
    for name, r in reports().items():
        if not r.theorem_b:
            bad.append(f"{name}: no extension")
        for e in r.extensions:
            v = e.orthogonality
            if not (e.reflexive and e.contains_newton and e.contains_transpose and v.det_check
                    and v.group_check and v.form_check):
                bad.append(f"{name} {e.label}")
        for c in r.discrepancies:
            flagged.append(f"{name}:{c.key}")
            if not c.flagged:
                bad.append(f"{name}:{c.key} unflagged")
    name, key = EXPECTED_FLAGGED
    if f"{name}:{key}" not in flagged:
        bad.append("U16 group discrepancy missing")
    return not bad, ("; ".join(bad) or "containments and orthogonality pass") + \
        "; flagged: " + ", ".join(flagged)


def criterion_10():
    if not os.environ.get(DATABASE_ENV):
        return None, f"skipped: no database file (set {DATABASE_ENV})"
    s = scan_database(jobs=os.cpu_count() or 1)
    got = (s.total, s.zero_correction, s.self_dual_zero_correction)
    return got == EXPECTED_SCAN, f"total/zero/self-dual = {got}"


def criterion_11():
    rng = random.Random(11)
    bad = []
    for key, verts in CASE_POLYTOPES.items():
        p = LatticePolytope(verts)
        if p.dual.dual.vertices != p.vertices:
            bad.append(f"{key}: involution")
        a, b = toric_correction(p), toric_correction(p.dual)
        if sorted((t.interior, t.dual_interior) for t in a.terms) != \
                sorted((t.dual_interior, t.interior) for t in b.terms) or a.total != b.total:
            bad.append(f"{key}: correction symmetry")
        if not rank_report(p).identity_holds:
            bad.append(f"{key}: rank identity")
        nf = normal_form(p)
        for _ in range(TRANSFORMS):
            moved = apply(random_unimodular(rng), verts)
            rng.shuffle(moved)
            if normal_form(LatticePolytope(moved)) != nf:
                bad.append(f"{key}: normal form")
                break
    for _ in range(200):
        n = rng.randint(1, 5)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = rng.randint(-4, 4) * (2 if i == j else 1)
        if intmat.det(g) == 0:
            continue
        lat = IntegralLattice(g)
        if abs(lat.det) != prod(lat.smith_invariants):
            bad.append("det vs Smith")
        big = direct_sum(lat, named("U"), named("E8"))
        if big.discriminant_group != lat.discriminant_group or \
                not big.discriminant_form.is_isomorphic(lat.discriminant_form):
            bad.append("unimodular summand")
    return not bad, "; ".join(sorted(set(bad))) or \
        f"duality, correction symmetry, Smith, summands, {TRANSFORMS} transforms per polytope"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def line(n, ok, detail):
    verdict = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    return f"criterion {n}: {verdict} {detail}"


@pytest.mark.parametrize("n", range(1, 12))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + line(n, ok, detail))
    if ok is None:
        pytest.skip(detail)
    assert ok, detail


if __name__ == "__main__":
    results = [(n, *c()) for n, c in enumerate(CRITERIA, 1)]
    for n, ok, detail in results:
        print(line(n, ok, detail))
    sys.exit(0 if all(ok is not False for _, ok, _ in results) else 1)
