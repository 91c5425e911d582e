"""Integral symmetric bilinear lattices and their discriminant forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Sequence

import numpy as np

from . import intmat


class DegenerateLatticeError(ValueError):
    pass


class OddLatticeError(ValueError):
    pass


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x.numerator // (x.denominator * m))


def signature_of(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact symmetric elimination.

    Diagonal pivots are used when available; when the remaining diagonal
    vanishes, a congruence ``e_i -> e_i + e_j`` creates a nonzero pivot from
    an off-diagonal entry (a hyperbolic 2x2 block).
    """
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = zero = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(n) for j in range(n) if a[i][j] != 0), None)
            if pair is None:
                zero += n
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(n) if k != piv]
        a = [[a[r][c] - a[r][piv] * a[piv][c] / p for c in rest] for r in rest]
    return pos, neg, zero


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic form on ``L^* / L``.

    ``invariants`` are the nontrivial invariant factors; ``generators`` are
    rational coordinate vectors (in the lattice basis) of elements of these
    orders; ``q`` holds generator norms mod 2 and ``b`` pairwise products
    mod 1.
    """
    invariants: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    q: tuple[Fraction, ...]
    b: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def length(self) -> int:
        """Minimal number of generators of the group."""
        return len(self.invariants)

    def value(self, coeffs: Sequence[int]) -> Fraction:
        total = Fraction(0)
        k = len(self.invariants)
        for i in range(k):
            total += coeffs[i] * coeffs[i] * self.q[i]
            for j in range(i + 1, k):
                total += 2 * coeffs[i] * coeffs[j] * self.b[i][j]
        return _mod(total, 2)

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        k = len(self.invariants)
        total = Fraction(0)
        for i in range(k):
            for j in range(k):
                total += x[i] * y[j] * self.b[i][j]  # b[i][i] is q[i] mod 1
        return _mod(total, 1)

    def negated(self) -> "DiscriminantForm":
        return DiscriminantForm(
            self.invariants, self.generators,
            tuple(_mod(-x, 2) for x in self.q),
            tuple(tuple(_mod(-x, 1) for x in row) for row in self.b))

    def elements(self):
        return itertools.product(*[range(d) for d in self.invariants])

    def element_order(self, x: Sequence[int]) -> int:
        o = 1
        for xi, d in zip(x, self.invariants):
            o = lcm(o, d // gcd(xi, d))
        return o

    def isomorphism_to(self, other: "DiscriminantForm") -> tuple | None:
        """Images of this form's generators under an isometry onto ``other``,
        or None when the forms are not isomorphic (exhaustive search)."""
        if self.invariants != other.invariants:
            return None
        k = len(self.invariants)
        if k == 0:
            return ()
        elems = list(other.elements())
        by_order: dict[int, list] = {}
        for x in elems:
            by_order.setdefault(other.element_order(x), []).append(x)

        def qo(x):
            return other.value(x)

        def bo(x, y):
            return other.bilinear(x, y)

        chosen: list = []

        def rec(i):
            if i == k:
                return _generates(chosen, other.invariants)
            for x in by_order.get(self.invariants[i], []):
                if qo(x) != self.q[i]:
                    continue
                if any(bo(chosen[j], x) != self.b[j][i] for j in range(i)):
                    continue
                chosen.append(x)
                if rec(i + 1):
                    return True
                chosen.pop()
            return False

        return tuple(chosen) if rec(0) else None

    def is_isomorphic(self, other: "DiscriminantForm") -> bool:
        return self.isomorphism_to(other) is not None

    def group_label(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariants)

    def to_dict(self) -> dict:
        return {
            "group": list(self.invariants),
            "q": [str(x) for x in self.q],
            "b": [[str(x) for x in row] for row in self.b],
        }


def _generates(gens, invariants) -> bool:
    order = prod(invariants)
    seen = {tuple(0 for _ in invariants)}
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % d for a, b, d in zip(x, g, invariants))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return len(seen) == order


class IntegralLattice:
    """Nondegenerate lattice given by a symmetric integer Gram matrix."""

    def __init__(self, gram: Sequence[Sequence[int]], name: str | None = None):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        self.gram = g
        self.name = name
        if self.det == 0:
            raise DegenerateLatticeError("Gram matrix is degenerate")

    def __repr__(self):
        label = self.name or "IntegralLattice"
        return f"<{label} rank={self.rank} det={self.det} sgn={self.signature}>"

    def __eq__(self, other):
        return isinstance(other, IntegralLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return intmat.det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        pos, neg, zero = signature_of(self.gram)
        if zero:
            raise DegenerateLatticeError("Gram matrix is degenerate")
        return pos, neg

    @cached_property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def _smith(self):
        return intmat.smith(self.gram)

    @property
    def smith_invariants(self) -> tuple[int, ...]:
        return tuple(self._smith[0])

    @property
    def discriminant_group(self) -> tuple[int, ...]:
        return tuple(d for d in self.smith_invariants if d > 1)

    @cached_property
    def discriminant_form(self) -> DiscriminantForm:
        if not self.is_even:
            raise OddLatticeError("discriminant quadratic form needs an even lattice")
        d, _, v = self._smith
        n = self.rank
        gens = []
        invs = []
        for k in range(n):
            if d[k] > 1:
                invs.append(d[k])
                gens.append(tuple(Fraction(v[i][k], d[k]) for i in range(n)))
        g = self.gram

        def pair(x, y):
            return sum(x[i] * g[i][j] * y[j] for i in range(n) for j in range(n))

        q = tuple(_mod(pair(x, x), 2) for x in gens)
        b = tuple(tuple(_mod(pair(x, y), 1) for y in gens) for x in gens)
        return DiscriminantForm(tuple(invs), tuple(gens), q, b)

    def dual_element_order(self, x: Sequence[int]) -> int:
        """Order in ``L^*/L`` of the class of ``x G^{-1}`` for integer ``x``."""
        inv = intmat.inverse(self.gram)
        y = intmat.matvec(intmat.transpose(inv), x)
        k = 1
        for c in y:
            k = lcm(k, Fraction(c).denominator)
        return k

    def rescale(self, n: int) -> "IntegralLattice":
        name = f"{self.name}({n})" if self.name else None
        return IntegralLattice([[n * x for x in row] for row in self.gram], name)

    def transform(self, t: Sequence[Sequence[int]]) -> "IntegralLattice":
        """Gram matrix in the new basis given by the columns of ``t``."""
        tt = intmat.transpose(t)
        return IntegralLattice(intmat.matmul(intmat.matmul(tt, self.gram), t))

    def to_dict(self) -> dict:
        out = {
            "gram": [list(r) for r in self.gram],
            "rank": self.rank,
            "det": self.det,
            "signature": list(self.signature),
            "smith_invariants": list(self.smith_invariants),
        }
        if self.is_even:
            out["discriminant_form"] = self.discriminant_form.to_dict()
        return out


def direct_sum(*lattices: IntegralLattice) -> IntegralLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                g[off + i][off + j] = L.gram[i][j]
        off += L.rank
    names = [L.name for L in lattices]
    name = " + ".join(names) if all(names) else None
    return IntegralLattice(g, name)


def _from_dynkin(n: int, edges, name: str) -> IntegralLattice:
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return IntegralLattice(g, name)


def named(kind: str, n: int | None = None) -> IntegralLattice:
    """Standard lattices; root lattices are negative definite.

    ``kind`` is one of ``U``, ``A``, ``D``, ``E`` (with ``n`` the rank) or a
    compact label such as ``"A2"``, ``"E8"``, ``"U(3)"``.
    """
    label = kind.strip()
    if label.startswith("U(") and label.endswith(")"):
        return named("U").rescale(int(label[2:-1]))
    if n is None and len(label) > 1:
        kind, n = label[0], int(label[1:])
    if kind == "U":
        if n not in (None, 1):
            return named("U").rescale(n)
        return IntegralLattice([[0, 1], [1, 0]], "U")
    if kind == "A":
        return _from_dynkin(n, [(i, i + 1) for i in range(n - 1)], f"A{n}")
    if kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return _from_dynkin(n, edges, f"D{n}")
    if kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        # Bourbaki labels 1..n: chain 1-3-4-5-...-n, with 2 attached to 4.
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
        return _from_dynkin(n, edges, f"E{n}")
    raise ValueError(f"unknown lattice {label!r}")


def k3_lattice() -> IntegralLattice:
    u = named("U")
    e8 = named("E8")
    return direct_sum(u, u, u, e8, e8)


def is_isometric_small(l1: IntegralLattice, l2: IntegralLattice,
                       bound: int = 6) -> list[list[int]] | None:
    """Search for ``T`` with ``T^t G1 T = G2`` and ``det T = +-1``.

    Columns of ``T`` range over integer vectors with entries in
    ``[-bound, bound]``. ``None`` means "not found within the bound", which
    is inconclusive rather than a proof of non-isometry.
    """
    if l1.rank != l2.rank or l1.det != l2.det or l1.signature != l2.signature:
        return None
    n = l1.rank
    g1 = np.array(l1.gram, dtype=np.int64)
    g2 = l2.gram
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    vecs = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
    vecs = vecs[np.any(vecs != 0, axis=1)]
    gv = vecs @ g1
    norms = np.einsum("ij,ij->i", gv, vecs)
    pools = {}
    for j in range(n):
        want = g2[j][j]
        if want not in pools:
            pools[want] = np.flatnonzero(norms == want)
    cols: list[int] = []

    def rec(j):
        if j == n:
            t = [[int(vecs[c][i]) for c in cols] for i in range(n)]
            return abs(intmat.det(t)) == 1
        cand = pools[g2[j][j]]
        for i, c in enumerate(cols):
            if not len(cand):
                break
            cand = cand[gv[cand] @ vecs[c] == g2[i][j]]
        for c in cand:
            cols.append(int(c))
            if rec(j + 1):
                return True
            cols.pop()
        return False

    if not rec(0):
        return None
    t = [[int(vecs[c][i]) for c in cols] for i in range(n)]
    check = intmat.matmul(intmat.matmul(intmat.transpose(t), l1.gram), t)
    assert check == [list(r) for r in g2]
    return t


def find_hyperbolic_plane(lat: IntegralLattice, bound: int = 2) -> tuple[list[int], list[int]] | None:
    """Vectors ``u, v`` with Gram ``[[0,1],[1,0]]``, coefficients in ``[-bound, bound]``.

    A unimodular sublattice is always a direct summand, so a hit proves
    that ``lat`` contains ``U`` primitively.
    """
    n = lat.rank
    g = np.array(lat.gram, dtype=np.int64)
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    vecs = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
    gv = vecs @ g
    iso = np.flatnonzero(np.einsum("ij,ij->i", gv, vecs) == 0)
    iso = iso[np.any(vecs[iso] != 0, axis=1)]
    if not len(iso):
        return None
    pair = gv[iso] @ vecs[iso].T
    hits = np.argwhere(pair == 1)
    if not len(hits):
        return None
    a, b = hits[0]
    return vecs[iso[a]].tolist(), vecs[iso[b]].tolist()


def is_prime(n: int) -> bool:
    n = abs(n)
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def prime_det_primitivity(lat: IntegralLattice) -> bool:
    """True when |det| is prime, so the lattice has no proper overlattice."""
    return is_prime(lat.det)


def primitive_embedding_exists(lat: IntegralLattice, ambient: tuple[int, int] = (3, 19)) -> bool:
    """Nikulin's sufficient criterion for a primitive embedding of an even
    lattice into the even unimodular lattice of the given signature.

    False means the criterion is not met, not that no embedding exists.
    """
    if not lat.is_even:
        raise OddLatticeError("criterion applies to even lattices")
    lp, lm = ambient
    tp, tm = lat.signature
    if (lp - lm) % 8:
        return False
    if lm - tm < 0 or lp - tp < 0:
        return False
    return lp + lm - lat.rank > lat.discriminant_form.length


@dataclass
class OrthogonalityVerdict:
    det_check: bool
    group_check: bool
    form_check: bool
    det_mirror: int
    det_complement: int
    group_mirror: tuple[int, ...]
    group_complement: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.det_check and self.group_check and self.form_check

    def to_dict(self) -> dict:
        return {
            "det_check": self.det_check,
            "group_check": self.group_check,
            "form_check": self.form_check,
            "det_mirror": self.det_mirror,
            "det_U_plus_pic": self.det_complement,
            "group_mirror": list(self.group_mirror),
            "group_U_plus_pic": list(self.group_complement),
            "passed": self.passed,
        }


def mirror_orthogonality_check(l_mirror: IntegralLattice, l_pic: IntegralLattice) -> OrthogonalityVerdict:
    """Compare ``l_mirror`` with ``U + l_pic`` as candidate orthogonal
    complements inside the K3 lattice (determinant, group, and form)."""
    complement = direct_sum(named("U"), l_pic)
    qa = l_mirror.discriminant_form
    qb = complement.discriminant_form
    return OrthogonalityVerdict(
        det_check=l_mirror.det == -complement.det,
        group_check=qa.invariants == qb.invariants,
        form_check=qa.is_isomorphic(qb.negated()),
        det_mirror=l_mirror.det,
        det_complement=complement.det,
        group_mirror=qa.invariants,
        group_complement=qb.invariants,
    )
