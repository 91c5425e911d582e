import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3mirror.cases import CASES
from k3mirror.invertible import (ExponentMatrix, NotInvertibleError, decomposition_label,
                                 enumerate_deformations, is_invertible, parse_polynomial,
                                 satisfies_cy, transpose, weight_system)
from k3mirror.runner import build_lattice, lattice_filter, monomial_label


def upper(text):
    f = parse_polynomial(text, ("x", "y", "z"))
    return ExponentMatrix(f.rows, ("X", "Y", "Z"))


def test_parse_and_print():
    f = parse_polynomial("x^6 + x*y^3 + z^2")
    assert f.variables == ("x", "y", "z")
    assert f.rows == ((6, 0, 0), (1, 3, 0), (0, 0, 2))
    assert str(f) == "x^6+xy^3+z^2"
    assert parse_polynomial("3*x^2 + 2 y^2").rows == ((2, 0), (0, 2))
    with pytest.raises(ValueError):
        parse_polynomial("x^2 + y^2 + x*y")
    with pytest.raises(ValueError):
        parse_polynomial("x^2+y^2", variables=("x",))


@pytest.mark.parametrize("text, label", [
    ("x^6+xy^3+z^2", "Chain[y,x] + Fermat[z]"),
    ("x^6y+y^2z+z^2", "Chain[x,y,z]"),
    ("x^7+y^2z+z^2", "Fermat[x] + Chain[y,z]"),
    ("x^5y+y^2z+z^2", "Chain[x,y,z]"),
    ("x^5+y^2z+yz^2", "Fermat[x] + Loop[y,z]"),
    ("x^2y+y^2z+z^2x", "Loop[x,y,z]"),
])
def test_atomic_decomposition(text, label):
    assert decomposition_label(is_invertible(parse_polynomial(text))) == label


@pytest.mark.parametrize("text", ["x^2y^2+y^3+z^3", "x^3y+y^3+z", "x^3+y^3+x^2z"])
def test_rejects_non_invertible(text):
    with pytest.raises(NotInvertibleError):
        is_invertible(parse_polynomial(text))


def test_weights():
    w = weight_system(parse_polynomial("x^6+xy^3+z^2"))
    assert (w.weights, w.degree) == ((3, 5, 9), 18)
    assert not w.is_cy
    full = upper("x^6+xy^3+z^2").with_monomial([0, 0, 0, 18], "W")
    assert weight_system(full).weights == (3, 5, 9, 1) and satisfies_cy(full)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 7), min_size=3, max_size=3), st.integers(0, 2))
def test_transpose_involution_and_weights(exps, shape):
    a, b, c = exps
    rows = [((a, 0, 0), (0, b, 0), (0, 0, c)),          # Fermat
            ((a, 1, 0), (0, b, 1), (0, 0, c)),          # chain
            ((a, 1, 0), (0, b, 1), (1, 0, c))][shape]   # loop
    f = ExponentMatrix(rows, ("x", "y", "z"))
    is_invertible(f)
    g = transpose(f)
    is_invertible(g)
    assert transpose(g) == f
    wf, wg = weight_system(f), weight_system(g)
    assert all(q > 0 for q in wf.weights + wg.weights)


@pytest.mark.parametrize("name", sorted(CASES))
def test_deformations_match_expected_sets(name):
    case = CASES[name]
    f = upper(case.f)
    lat = build_lattice(case.m)
    got = {monomial_label(F.reordered(("W", "X", "Y", "Z"))[-1])
           for F in enumerate_deformations(f, accept=lattice_filter(lat))}
    assert got == set(case.expected_deformations)
    if case.expected_transpose_deformations is not None:
        lat_t = build_lattice(case.m_dual)
        got_t = {monomial_label(G.reordered(("W", "X", "Y", "Z"))[-1])
                 for G in enumerate_deformations(transpose(f), accept=lattice_filter(lat_t))}
        assert got_t == set(case.expected_transpose_deformations)


def test_lattice_filter_removes_candidates():
    # without the congruence the grammar allows more than the lattice keeps
    case = CASES["Z13/J30"]
    f = upper(case.f)
    everything = enumerate_deformations(f)
    kept = enumerate_deformations(f, accept=lattice_filter(build_lattice(case.m)))
    assert len(kept) < len(everything)
    assert all(satisfies_cy(F) for F in everything)
