import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from k3mirror import intmat

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def rect(r, c):
    return st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_sympy(m):
    assert intmat.det(m) == sympy.Matrix(m).det()


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(1, 4), st.integers(1, 5)).flatmap(lambda rc: rect(*rc)))
def test_rank_matches_sympy(m):
    assert intmat.rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda rc: rect(*rc)))
def test_smith_invariants_and_transforms(m):
    d, u, v = intmat.smith(m)
    r, c = len(m), len(m[0])
    assert abs(intmat.det(u)) == 1 and abs(intmat.det(v)) == 1
    diag = intmat.matmul(intmat.matmul(u, m), v)
    for i in range(r):
        for j in range(c):
            assert diag[i][j] == (d[i] if i == j else 0)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    ref = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    ref_diag = sorted(abs(ref[i, i]) for i in range(min(r, c)))
    assert sorted(d) == ref_diag


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda rc: rect(*rc)))
def test_hnf_is_invariant_under_row_operations(m):
    rng = random.Random(str(m))
    n = len(m)
    u = intmat.identity(n)
    for _ in range(6):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-1, 1, 2])
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
    h1 = intmat.hnf(m)
    h2 = intmat.hnf(intmat.matmul(u, m))
    assert h1 == h2
    assert len(h1) == sympy.Matrix(m).rank()


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(1, 3), st.integers(2, 5)).flatmap(lambda rc: rect(*rc)))
def test_integer_kernel(m):
    ker = intmat.integer_kernel(m)
    assert len(ker) == len(m[0]) - sympy.Matrix(m).rank()
    for k in ker:
        assert all(x == 0 for x in intmat.matvec(m, k))
    if ker:
        # A Z-basis of a saturated lattice: its maximal minors are coprime.
        d, _, _ = intmat.smith(ker)
        assert all(x == 1 for x in d if x)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_and_solve(m):
    if intmat.det(m) == 0:
        with pytest.raises(ValueError):
            intmat.inverse(m)
        return
    inv = intmat.inverse(m)
    assert intmat.matmul(m, inv) == intmat.identity(len(m))
    b = list(range(1, len(m) + 1))
    x = intmat.solve(m, b)
    assert intmat.matvec(m, x) == b
    assert all(isinstance(v, Fraction) for v in x)


def test_primitive_and_gcd():
    assert intmat.primitive([4, -6, 8]) == (2, -3, 4)
    assert intmat.primitive([0, 0, 5]) == (0, 0, 1)
    assert intmat.gcd_list([0, 0]) == 0
    assert intmat.gcd_list([12, -18, 30]) == 6
