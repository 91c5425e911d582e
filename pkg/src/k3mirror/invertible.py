"""Invertible polynomials as exponent matrices.

A polynomial with as many monomials as variables is stored as the square
matrix of exponents (rows are monomials, columns variables, in the declared
variable order). Coefficients are ignored; they can be scaled to 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import intmat


class NotInvertibleError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]
    variables: tuple[str, ...]

    def __post_init__(self):
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise ValueError("variable names must be distinct")
        if any(len(r) != n for r in self.rows):
            raise ValueError("each monomial needs one exponent per variable")
        if any(e < 0 for r in self.rows for e in r):
            raise ValueError("exponents must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def is_square(self) -> bool:
        return len(self.rows) == self.n

    def monomial(self, row: Sequence[int]) -> str:
        parts = []
        for v, e in zip(self.variables, row):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "".join(parts) or "1"

    def __str__(self):
        return "+".join(self.monomial(r) for r in self.rows)

    def reordered(self, variables: Sequence[str]) -> list[tuple[int, ...]]:
        """Exponent rows with columns permuted into ``variables`` order."""
        idx = [self.variables.index(v) for v in variables]
        return [tuple(r[i] for i in idx) for r in self.rows]

    def with_monomial(self, row: Sequence[int], variable: str | None = None) -> "ExponentMatrix":
        """Append a monomial; if ``variable`` is new, add a column for it
        (existing rows get exponent 0)."""
        vars_ = self.variables
        rows = list(self.rows)
        if variable is not None and variable not in vars_:
            vars_ = vars_ + (variable,)
            rows = [r + (0,) for r in rows]
        return ExponentMatrix(tuple(rows) + (tuple(int(x) for x in row),), vars_)


_VAR_ORDER = "xyzwXYZW"


def _split_term(term: str) -> list[tuple[str, int]]:
    term = term.replace("*", "").replace(" ", "")
    term = term.lstrip("0123456789")  # numeric coefficient
    out = []
    pos = 0
    pat = re.compile(r"([A-Za-z])(?:_?(\d+))?(?:\^(\d+))?")
    while pos < len(term):
        m = pat.match(term, pos)
        if not m:
            raise ValueError(f"cannot parse monomial {term!r}")
        name = m.group(1) + (m.group(2) or "")
        out.append((name, int(m.group(3) or 1)))
        pos = m.end()
    return out


def _default_order(names: Iterable[str]) -> tuple[str, ...]:
    def key(v):
        return (_VAR_ORDER.index(v) if v in _VAR_ORDER else len(_VAR_ORDER), v)
    return tuple(sorted(set(names), key=key))


def parse_polynomial(text: str, variables: Sequence[str] | None = None) -> ExponentMatrix:
    """Parse ``"x^6 + x*y^3 + z^2"`` style input.

    Without ``variables`` the order is x, y, z, w (then X, Y, Z, W, then
    anything else alphabetically). The monomial count must equal the number
    of variables.
    """
    terms = [t for t in re.split(r"\s*\+\s*", text.strip()) if t]
    if not terms:
        raise ValueError("empty polynomial")
    parsed = [_split_term(t) for t in terms]
    names = [v for t in parsed for v, _ in t]
    if variables is None:
        variables = _default_order(names)
    variables = tuple(variables)
    unknown = set(names) - set(variables)
    if unknown:
        raise ValueError(f"undeclared variables: {sorted(unknown)}")
    rows = []
    for t in parsed:
        row = [0] * len(variables)
        for v, e in t:
            row[variables.index(v)] += e
        rows.append(tuple(row))
    if len(rows) != len(variables):
        raise ValueError(f"{len(rows)} monomials for {len(variables)} variables;"
                         " an invertible polynomial needs a square exponent matrix")
    return ExponentMatrix(tuple(rows), variables)


def format_polynomial(a: ExponentMatrix) -> str:
    return str(a)


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple[int, ...]
    degree: int

    @property
    def is_cy(self) -> bool:
        return sum(self.weights) == self.degree


def weight_system(a: ExponentMatrix) -> WeightSystem:
    """Primitive ``(q, d)`` with ``A q = d (1, ..., 1)`` and ``q > 0``."""
    if not a.is_square:
        raise NotInvertibleError("exponent matrix is not square")
    try:
        q = intmat.solve(a.rows, [1] * a.n)
    except ValueError:
        raise NotInvertibleError("exponent matrix is singular") from None
    if any(x <= 0 for x in q):
        raise NotInvertibleError("weights are not all positive")
    d = 1
    for x in q:
        d = lcm(d, Fraction(x).denominator)
    ints = [int(x * d) for x in q]
    g = gcd(d, *ints)
    return WeightSystem(tuple(x // g for x in ints), d // g)


def satisfies_cy(a: ExponentMatrix) -> bool:
    return weight_system(a).is_cy


@dataclass(frozen=True)
class Atom:
    """Atomic block. ``kind`` is Fermat, Chain or Loop; ``variables`` lists
    the block's variables so that monomial ``k`` is ``v_k^{a_k} v_{k+1}``
    (cyclically for loops, with the last chain monomial pure)."""
    kind: str
    variables: tuple[str, ...]
    exponents: tuple[int, ...]

    def __str__(self):
        return f"{self.kind}[{','.join(self.variables)}]"


def is_invertible(a: ExponentMatrix) -> list[Atom]:
    """Decompose into atomic blocks or raise :class:`NotInvertibleError`.

    Every monomial must be ``x_i^{a}`` or ``x_i^{a} x_j`` with ``a >= 2``,
    each variable must carry the high exponent of exactly one monomial and
    be the linear factor of at most one.
    """
    if not a.is_square:
        raise NotInvertibleError("exponent matrix is not square")
    n = a.n
    head_of: dict[int, int] = {}
    target: dict[int, int | None] = {}
    expo: dict[int, int] = {}
    for r, row in enumerate(a.rows):
        nz = [(j, e) for j, e in enumerate(row) if e]
        if len(nz) == 1 and nz[0][1] >= 2:
            h, t = nz[0][0], None
        elif len(nz) == 2:
            (j1, e1), (j2, e2) = sorted(nz, key=lambda x: -x[1])
            if e2 != 1 or e1 < 2:
                raise NotInvertibleError(f"monomial {a.monomial(row)} is not of the form x^a y")
            h, t = j1, j2
        else:
            raise NotInvertibleError(f"monomial {a.monomial(row)} is not of the form x^a or x^a y")
        if h in head_of:
            raise NotInvertibleError(f"variable {a.variables[h]} leads two monomials")
        head_of[h] = r
        target[h] = t
        expo[h] = nz[0][1] if t is None else max(e for _, e in nz)
    incoming: dict[int, int] = {}
    for h, t in target.items():
        if t is not None:
            if t in incoming:
                raise NotInvertibleError(f"variable {a.variables[t]} is the linear factor twice")
            incoming[t] = h
    atoms = []
    seen: set[int] = set()
    # Chains start at variables with no incoming arrow.
    for start in range(n):
        if start in incoming:
            continue
        path = [start]
        while target[path[-1]] is not None:
            path.append(target[path[-1]])
        seen.update(path)
        kind = "Fermat" if len(path) == 1 else "Chain"
        atoms.append(Atom(kind, tuple(a.variables[i] for i in path),
                          tuple(expo[i] for i in path)))
    for start in range(n):
        if start in seen:
            continue
        cyc = [start]
        while target[cyc[-1]] != start:
            cyc.append(target[cyc[-1]])
        seen.update(cyc)
        atoms.append(Atom("Loop", tuple(a.variables[i] for i in cyc),
                          tuple(expo[i] for i in cyc)))
    weight_system(a)
    return atoms


def transpose(a: ExponentMatrix) -> ExponentMatrix:
    """Berglund-Huebsch transpose, on the same variable names."""
    return ExponentMatrix(tuple(tuple(r) for r in intmat.transpose(a.rows)), a.variables)


def decomposition_label(atoms: Sequence[Atom]) -> str:
    return " + ".join(str(x) for x in atoms)


def enumerate_deformations(f: ExponentMatrix, variable: str = "W",
                           accept=None) -> list[ExponentMatrix]:
    """Invertible CY polynomials ``f + W^a v`` with ``a >= 1`` and ``v`` one of
    ``1`` or the variables of ``f``.

    The new monomial gets one more variable ``W``; rows of ``f`` are kept.
    ``accept`` is an optional filter on each candidate (for instance a
    lattice condition).
    """
    if variable in f.variables:
        raise ValueError(f"{variable} already occurs in f")
    base = weight_system(f)
    q = [Fraction(x, base.degree) for x in base.weights]  # degree normalised to 1
    qw = 1 - sum(q)
    if qw <= 0:
        return []
    out = []
    options = [None] + list(range(f.n))
    for v in options:
        rest = 1 - (q[v] if v is not None else 0)
        a_exp = rest / qw
        if a_exp.denominator != 1 or a_exp < 1:
            continue
        row = [0] * f.n + [int(a_exp)]
        if v is not None:
            row[v] = 1
        cand = f.with_monomial(row, variable)
        try:
            is_invertible(cand)
        except NotInvertibleError:
            continue
        if not satisfies_cy(cand):
            continue
        if accept is not None and not accept(cand):
            continue
        out.append(cand)
    return out
