import json

import pytest

from k3mirror.cases import CASES
from k3mirror.polytope import LatticePolytope, emit_palp, is_isomorphic
from k3mirror.runner import (DATABASE_ENV, emit_report, find_extensions, run_case,
                             scan_database, summarize)

FLAGGED = {
    "Z13/J30": set(),
    "X20/S17": set(),
    "W18/W18": {"W^8X:transpose_inside_dual"},
    "W17/S10": {"case-i:L_hyperbolic_plane", "case-ii:L_hyperbolic_plane"},
    "U16/U16": {"newton:discriminant_groups"},
}


@pytest.fixture(scope="module")
def reports():
    return {name: run_case(name) for name in CASES}


@pytest.mark.parametrize("name", sorted(CASES))
def test_case_passes_with_only_flagged_discrepancies(reports, name):
    r = reports[name]
    assert r.theorem_a and r.theorem_b and r.ok
    assert {c.key for c in r.discrepancies} == FLAGGED[name]
    assert all(c.flagged and c.note for c in r.discrepancies)
    assert r.unexplained == []


def test_reports_are_deterministic(reports):
    again = run_case("Z13/J30")
    assert emit_report(again) == emit_report(reports["Z13/J30"])
    data = json.loads(emit_report(again))
    assert data["ok"] and data["discrepancies"] == []


def test_text_report_mentions_verdicts(reports):
    text = emit_report(reports["U16/U16"], "text")
    assert "U16/U16" in text
    assert "newton:discriminant_groups" in text
    with pytest.raises(ValueError):
        emit_report(reports["U16/U16"], "yaml")


def test_unknown_case():
    with pytest.raises(KeyError):
        run_case("nope")


def test_search_finds_both_reference_polytopes():
    r = run_case("W17/S10")
    search = r.searches["W^10"] if "W^10" in r.searches else next(iter(r.searches.values()))
    refs = [LatticePolytope(e.vertices) for e in CASES["W17/S10"].extensions]
    for ref in refs:
        assert any(p.vertices == ref.vertices for p in search.results)
    # the classes partition the results
    flat = sorted(i for g in search.classes() for i in g)
    assert flat == list(range(len(search.results)))


def test_search_results_satisfy_the_containments():
    r = run_case("Z13/J30", search=False)
    rec = r.deformations[0]
    q = LatticePolytope(rec.vertices)
    qt = LatticePolytope(rec.transpose_vertices)
    found = find_extensions(q, qt)
    assert found.results
    assert found.results[0].vertices == q.vertices      # Newton(F) is already reflexive
    for p in found.results:
        assert p.is_reflexive
        assert all(p.contains_point(v) for v in q.vertices)
        assert all(p.dual.contains_point(v) for v in qt.vertices)
    bounded = find_extensions(q, qt, bound=1)
    assert len(bounded.results) <= len(found.results)
    with pytest.raises(ValueError):
        find_extensions(q, LatticePolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]))


def test_summarize_small_collections():
    j30 = LatticePolytope(CASES["Z13/J30"].extensions[0].vertices)
    s = summarize([j30])
    assert s.total == 1 and s.correction_histogram == {2: 1} and s.rho_histogram == {16: 1}
    quartic = LatticePolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    s = summarize([quartic, quartic.dual, j30], jobs=2)
    assert s.total == 3 and s.zero_correction == 2 and s.self_dual_zero_correction == 0
    assert s == summarize([j30, quartic.dual, quartic])


def test_scan_database_file(tmp_path, monkeypatch):
    monkeypatch.delenv(DATABASE_ENV, raising=False)
    assert scan_database().skipped
    octa = LatticePolytope([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    path = tmp_path / "db.txt"
    path.write_text(emit_palp([octa, octa.dual]))
    monkeypatch.setenv(DATABASE_ENV, str(path))
    s = scan_database()
    assert s.skipped is None and s.total == 2 and s.zero_correction == 2
    assert "total: 2" in emit_report(s, "text")
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert scan_database(str(empty)).total == 0
    bad = tmp_path / "bad.txt"
    bad.write_text(emit_palp([LatticePolytope([(2, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])]))
    with pytest.raises(ValueError):
        scan_database(str(bad))


def test_self_duality_counts_isomorphism_classes():
    # the octahedron and the cube are dual but not isomorphic
    octa = LatticePolytope([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    assert not is_isomorphic(octa, octa.dual)
    simplex = LatticePolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    assert not is_isomorphic(simplex, simplex.dual)
