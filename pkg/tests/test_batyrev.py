import pytest

from k3mirror.batyrev import (hodge_numbers, rank_pic_tor, rank_report, rho,
                              toric_correction)
from k3mirror.polytope import LatticePolytope, lattice_from_case, newton_polytope
from k3mirror.runner import find_extensions

SIMPLEX3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
SIMPLEX4 = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]


def fermat_newton(weights):
    d = sum(weights)
    rows = []
    for i, w in enumerate(weights):
        row = [0] * len(weights)
        row[i] = d // w
        rows.append(row)
    return newton_polytope(rows, lattice_from_case(weights))


def test_quartic_ranks():
    small = LatticePolytope(SIMPLEX3)
    assert rank_pic_tor(small.dual) == 1 and rho(small.dual) == 1
    assert rho(small) == 19
    assert toric_correction(small).total == 0


@pytest.mark.parametrize("weights, expected", [
    ((1, 1, 1, 1, 1), (1, 101)),
    ((1, 1, 2, 2, 2), (2, 86)),
    ((1, 1, 1, 6, 9), (2, 272)),
])
def test_threefold_hodge_numbers(weights, expected):
    n = fermat_newton(weights)
    assert n.is_reflexive
    assert hodge_numbers(n) == expected
    assert hodge_numbers(n.dual) == expected[::-1]


def test_hodge_needs_four_dimensions():
    with pytest.raises(ValueError):
        hodge_numbers(LatticePolytope(SIMPLEX3))
    with pytest.raises(ValueError):
        rank_report(LatticePolytope(SIMPLEX4))


def test_correction_symmetry(case_polytope):
    p = case_polytope
    a, b = toric_correction(p), toric_correction(p.dual)
    assert a.total == b.total
    pa = sorted((t.interior, t.dual_interior) for t in a.terms)
    pb = sorted((t.dual_interior, t.interior) for t in b.terms)
    assert pa == pb


def test_rank_identity(case_polytope):
    r = rank_report(case_polytope)
    assert r.identity_holds
    assert r.rho + r.rho_dual == 20 + r.correction
    assert r.rho_dual == rank_report(case_polytope.dual).rho


def test_rank_identity_on_searched_polytopes():
    q = LatticePolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    # everything between the simplex and the quartic polytope
    found = find_extensions(q, q, limit=40).results
    assert len(found) == 40
    for p in found:
        assert rank_report(p).identity_holds
        assert toric_correction(p).total == toric_correction(p.dual).total
