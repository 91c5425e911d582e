"""Exact lattice polytopes: hulls, faces, lattice points, polar duality.

Polytopes are stored by vertices together with their facet inequalities
``u . x >= -b`` (``u`` primitive inner normal). The face lattice and the
full lattice-point inventory are computed once at construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import intmat

Point = tuple[int, ...]


class DegeneratePolytopeError(ValueError):
    """Raised when the input points do not span the ambient space."""


class NotReflexiveError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Facet:
    normal: Point
    offset: int

    def value(self, x: Sequence) -> int:
        return intmat.dot(self.normal, x) + self.offset


@dataclass(frozen=True)
class Face:
    vertex_ids: frozenset
    dim: int
    facet_ids: frozenset


def _cofactor_normal(diffs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer vector orthogonal to the n-1 rows of ``diffs`` (in Z^n)."""
    n = len(diffs) + 1
    normal = []
    for k in range(n):
        minor = [[row[j] for j in range(n) if j != k] for row in diffs]
        normal.append((-1) ** k * intmat.det(minor))
    return tuple(normal)


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return intmat.rank(diffs) if diffs else 0


def _hull_facets(points: list[Point]) -> list[Facet]:
    n = len(points[0])
    found: dict[tuple, Facet] = {}
    seen: set[tuple] = set()
    for combo in itertools.combinations(range(len(points)), n):
        p0 = points[combo[0]]
        diffs = [[a - b for a, b in zip(points[i], p0)] for i in combo[1:]]
        normal = _cofactor_normal(diffs)
        if not any(normal):
            continue
        normal = intmat.primitive(normal)
        if next(x for x in normal if x) < 0:
            normal = tuple(-x for x in normal)
        base = intmat.dot(normal, p0)
        if (normal, base) in seen:  # same hyperplane
            continue
        seen.add((normal, base))
        pos = neg = False
        for p in points:
            s = intmat.dot(normal, p) - base
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        if neg:
            normal = tuple(-x for x in normal)
            base = -base
        found[(normal, base)] = Facet(normal, -base)
    return sorted(found.values(), key=lambda f: (f.normal, f.offset))


def _points_in(vs: np.ndarray, normals: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Integer points with ``normals @ x + offsets >= 0``, inside the box of ``vs``.

    The longest box axis is solved for as an interval, the others are
    scanned, so sheared polytopes stay cheap.
    """
    n = vs.shape[1]
    lo, hi = vs.min(axis=0), vs.max(axis=0)
    k = int(np.argmax(hi - lo))
    rest = [j for j in range(n) if j != k]
    axes = [np.arange(lo[j], hi[j] + 1, dtype=np.int64) for j in rest]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 1)
    partial = grid @ normals[:, rest].T + offsets
    lower = np.full(len(grid), lo[k], dtype=np.int64)
    upper = np.full(len(grid), hi[k], dtype=np.int64)
    ok = np.ones(len(grid), dtype=bool)
    for f, u in enumerate(normals[:, k]):
        if u > 0:  # t >= -partial / u
            lower = np.maximum(lower, -(partial[:, f] // u))
        elif u < 0:  # t <= partial / -u
            upper = np.minimum(upper, partial[:, f] // -u)
        else:
            ok &= partial[:, f] >= 0
    count = np.where(ok, np.maximum(upper - lower + 1, 0), 0)
    base = np.repeat(grid, count, axis=0)
    starts = np.repeat(lower, count)
    offs = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count)
    out = np.empty((len(base), n), dtype=np.int64)
    out[:, rest] = base
    out[:, k] = starts + offs
    return out


class LatticePolytope:
    """Full-dimensional convex hull of integer points.

    Attributes set at construction: ``vertices`` (sorted), ``facets``,
    ``faces`` (every proper face plus the polytope itself, last), and the
    lattice-point inventory ``points`` with ``point_face`` giving the index
    of the smallest face containing each point.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise DegeneratePolytopeError("no points given")
        self.ambient_dim = len(pts[0])
        n = self.ambient_dim
        if _affine_rank(pts) < n:
            raise DegeneratePolytopeError(
                f"points span an affine space of dimension {_affine_rank(pts)} < {n}")
        facets = _hull_facets(pts)
        verts = []
        for p in pts:
            tight = [f.normal for f in facets if f.value(p) == 0]
            if len(tight) >= n and intmat.rank(tight) == n:
                verts.append(p)
        self.vertices: list[Point] = verts
        self.facets: list[Facet] = facets
        self._build_faces()
        self._build_points()

    # -- construction helpers -------------------------------------------

    def _build_faces(self):
        vidx = {v: i for i, v in enumerate(self.vertices)}
        facet_sets = []
        for f in self.facets:
            facet_sets.append(frozenset(vidx[v] for v in self.vertices if f.value(v) == 0))
        self._facet_vertex_sets = facet_sets
        all_sets = set(facet_sets)
        frontier = set(facet_sets)
        while frontier:
            new = set()
            for a in frontier:
                for b in facet_sets:
                    c = a & b
                    if c and c not in all_sets:
                        new.add(c)
            all_sets |= new
            frontier = new
        faces = []
        for s in all_sets:
            dim = _affine_rank([self.vertices[i] for i in sorted(s)])
            fids = frozenset(i for i, fs in enumerate(facet_sets) if s <= fs)
            faces.append(Face(s, dim, fids))
        faces.sort(key=lambda f: (f.dim, sorted(f.vertex_ids)))
        whole = Face(frozenset(range(len(self.vertices))), self.ambient_dim, frozenset())
        faces.append(whole)
        self.faces: list[Face] = faces
        self._face_index = {f.vertex_ids: i for i, f in enumerate(faces)}

    def _build_points(self):
        normals = np.array([f.normal for f in self.facets], dtype=np.int64)
        offsets = np.array([f.offset for f in self.facets], dtype=np.int64)
        grid = _points_in(np.array(self.vertices, dtype=np.int64), normals, offsets)
        vals = grid @ normals.T + offsets
        point_face = {}
        cache: dict[int, int] = {}
        tight = vals == 0
        for p, row in zip(grid.tolist(), tight):
            mask = 0
            for j in np.flatnonzero(row):
                mask |= 1 << int(j)
            if mask not in cache:
                if mask == 0:
                    cache[mask] = len(self.faces) - 1
                else:
                    s = frozenset.intersection(
                        *[self._facet_vertex_sets[j] for j in range(len(self.facets))
                          if mask >> j & 1])
                    cache[mask] = self._face_index[s]
            point_face[tuple(p)] = cache[mask]
        self.points: list[Point] = sorted(point_face)
        self.point_face: dict[Point, int] = point_face

    # -- basic queries ----------------------------------------------------

    def __repr__(self):
        return f"LatticePolytope({self.vertices})"

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(tuple(self.vertices))

    @property
    def dim(self) -> int:
        return self.ambient_dim

    def faces_of_dim(self, d: int) -> list[int]:
        return [i for i, f in enumerate(self.faces) if f.dim == d]

    @property
    def edges(self) -> list[int]:
        return self.faces_of_dim(1)

    @property
    def facet_faces(self) -> list[int]:
        return self.faces_of_dim(self.ambient_dim - 1)

    def face_of(self, vertex_points: Iterable[Sequence[int]]) -> int:
        """Index of the face whose vertex set is exactly ``vertex_points``."""
        vidx = {v: i for i, v in enumerate(self.vertices)}
        key = frozenset(vidx[tuple(p)] for p in vertex_points)
        return self._face_index[key]

    def smallest_face_containing(self, points: Iterable[Sequence[int]]) -> int:
        pts = [tuple(p) for p in points]
        fids = [i for i, f in enumerate(self.facets) if all(f.value(p) == 0 for p in pts)]
        if not fids:
            return len(self.faces) - 1
        s = frozenset.intersection(*[self._facet_vertex_sets[i] for i in fids])
        return self._face_index[s]

    def face_vertices(self, face: int) -> list[Point]:
        return [self.vertices[i] for i in sorted(self.faces[face].vertex_ids)]

    def interior_points(self, face: int) -> list[Point]:
        return [p for p in self.points if self.point_face[p] == face]

    def face_points(self, face: int) -> list[Point]:
        target = self.faces[face].vertex_ids
        return [p for p in self.points
                if self.faces[self.point_face[p]].vertex_ids <= target]

    def ell(self, face: int | None = None) -> int:
        """Number of lattice points on ``face`` (whole polytope if omitted)."""
        if face is None:
            return len(self.points)
        return len(self.face_points(face))

    def ell_star(self, face: int | None = None) -> int:
        """Number of lattice points in the relative interior of ``face``."""
        if face is None:
            face = len(self.faces) - 1
        return sum(1 for p in self.points if self.point_face[p] == face)

    def point_tag(self, p: Sequence[int]) -> str:
        d = self.faces[self.point_face[tuple(p)]].dim
        if d == self.ambient_dim:
            return "interior"
        return {0: "vertex", 1: "edge", self.ambient_dim - 1: "facet"}.get(d, f"face{d}")

    def inventory(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for p in self.points:
            tag = self.point_tag(p)
            counts[tag] = counts.get(tag, 0) + 1
        return counts

    def contains_point(self, p: Sequence) -> bool:
        return all(f.value(p) >= 0 for f in self.facets)

    def contains(self, other: "LatticePolytope | Iterable[Sequence[int]]") -> bool:
        verts = other.vertices if isinstance(other, LatticePolytope) else other
        return all(self.contains_point(v) for v in verts)

    def origin_interior(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    @property
    def is_reflexive(self) -> bool:
        return all(f.offset == 1 for f in self.facets)

    def dual_vertices(self) -> list[tuple[Fraction, ...]]:
        """Vertices of the polar dual, one per facet (same order)."""
        if not self.origin_interior():
            raise ValueError("origin is not in the interior")
        return [tuple(Fraction(u, f.offset) for u in f.normal) for f in self.facets]

    @cached_property
    def dual(self) -> "LatticePolytope":
        """The polar dual; only defined for reflexive polytopes."""
        result = polar_dual(self)
        if result.polytope is None:
            raise NotReflexiveError("polytope is not reflexive", result.witness)
        return result.polytope

    def dual_face(self, face: int) -> int:
        """Index (in ``self.dual``) of the face dual to ``face``."""
        dual = self.dual
        f = self.faces[face]
        if f.dim == self.ambient_dim:
            raise ValueError("the polytope itself has an empty dual face")
        pts = [self.facets[i].normal for i in f.facet_ids]
        return dual.face_of(pts)

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in self.facets],
            "points": {tag: [list(p) for p in self.points if self.point_tag(p) == tag]
                       for tag in sorted(self.inventory())},
            "reflexive": self.is_reflexive,
        }


@dataclass
class DualResult:
    """Result of polar duality: the dual polytope or a non-integral witness."""
    polytope: LatticePolytope | None
    witness: tuple[Fraction, ...] | None
    nonintegral: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def reflexive(self) -> bool:
        return self.polytope is not None


def hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


def polar_dual(p: LatticePolytope) -> DualResult:
    """Polar dual of ``p``; on failure report the non-integral dual vertices.

    The witness is the lexicographically smallest non-integral vertex.
    """
    verts = p.dual_vertices()
    bad = sorted(v for v in verts if any(x.denominator != 1 for x in v))
    if bad:
        return DualResult(None, bad[0], bad)
    dual = LatticePolytope([tuple(int(x) for x in v) for v in verts])
    if p.is_reflexive:
        dual.__dict__["dual"] = p
    return DualResult(dual, None, [])


def contains(p: LatticePolytope, q) -> bool:
    return p.contains(q)


# -- normal forms ----------------------------------------------------------

def pairing_matrix(p: LatticePolytope) -> list[list[int]]:
    """Facet-vertex pairing values ``u_i . v_j + b_i`` (all nonnegative)."""
    return [[f.value(v) for v in p.vertices] for f in p.facets]


def _optimal_column_orders(pm: list[list[int]]) -> list[tuple[int, ...]]:
    """All column orders realising the lexicographically maximal permuted
    pairing matrix (rows and columns both permuted)."""
    nrows = len(pm)
    ncols = len(pm[0])
    states = {(frozenset(), (tuple(range(ncols)),))}
    for _ in range(nrows):
        best = None
        nxt = set()
        for used, blocks in states:
            for r in range(nrows):
                if r in used:
                    continue
                row = pm[r]
                vec = []
                new_blocks = []
                for block in blocks:
                    ordered = sorted(block, key=lambda c: -row[c])
                    vec.extend(row[c] for c in ordered)
                    for _, grp in itertools.groupby(ordered, key=lambda c: row[c]):
                        new_blocks.append(tuple(sorted(grp)))
                vec = tuple(vec)
                if best is None or vec > best:
                    best = vec
                    nxt = set()
                if vec == best:
                    nxt.add((used | {r}, tuple(new_blocks)))
        states = nxt
    orders = set()
    for _, blocks in states:
        # blocks are singletons once every facet row has been placed
        orders.add(tuple(c for block in blocks for c in block))
    return sorted(orders)


def normal_form(p: LatticePolytope, affine: bool = False) -> tuple[tuple[int, ...], ...]:
    """Canonical vertex list of ``p`` up to GL(n, Z) and vertex order.

    Columns are ordered by the maximal facet-vertex pairing matrix; among
    all optimal orders the lexicographically smallest Hermite form of the
    vertex matrix is returned. With ``affine=True`` lattice translations are
    also factored out.
    """
    pm = pairing_matrix(p)
    best = None
    for order in _optimal_column_orders(pm):
        cols = [p.vertices[c] for c in order]
        if affine:
            base = cols[0]
            cols = [tuple(a - b for a, b in zip(v, base)) for v in cols]
        h = intmat.hnf(intmat.transpose(cols))
        key = tuple(tuple(row) for row in h)
        if best is None or key < best:
            best = key
    return tuple(zip(*best))


def is_isomorphic(p: LatticePolytope, q: LatticePolytope, affine: bool = False) -> bool:
    if (len(p.vertices), len(p.facets), len(p.points)) != (
            len(q.vertices), len(q.facets), len(q.points)):
        return False
    if sorted(map(sorted, pairing_matrix(p))) != sorted(map(sorted, pairing_matrix(q))):
        return False
    return normal_form(p, affine) == normal_form(q, affine)


def lattice_isomorphism(p: LatticePolytope, q: LatticePolytope) -> list[list[int]] | None:
    """A matrix ``A`` in GL(n, Z) with ``A p = q`` (as vertex sets), or None."""
    if not is_isomorphic(p, q):
        return None
    n = p.ambient_dim
    order_p = _optimal_column_orders(pairing_matrix(p))[0]
    mp = [p.vertices[c] for c in order_p]
    basis = None
    for cols in itertools.combinations(range(len(mp)), n):
        if intmat.det([mp[c] for c in cols]) != 0:
            basis = cols
            break
    src = intmat.transpose([mp[c] for c in basis])
    inv = intmat.inverse(src)
    target = set(q.vertices)
    for order_q in _optimal_column_orders(pairing_matrix(q)):
        mq = [q.vertices[c] for c in order_q]
        img = intmat.transpose([mq[c] for c in basis])
        a = intmat.matmul(img, inv)
        if any(x.denominator != 1 for row in a for x in row):
            continue
        a = [[int(x) for x in row] for row in a]
        if abs(intmat.det(a)) != 1:
            continue
        if {tuple(intmat.matvec(a, v)) for v in p.vertices} == target:
            return a
    return None


def find_isomorphic_subpolytope(big: LatticePolytope, small: LatticePolytope,
                                affine: bool = True) -> LatticePolytope | None:
    """Search the lattice sub-polytopes of ``big`` for a copy of ``small``.

    Candidate vertex sets are drawn from the lattice points of ``big``;
    cheap invariants filter before the normal form is compared.
    """
    k = len(small.vertices)
    target = normal_form(small, affine)
    target_points = len(small.points)
    target_vol = _normalized_volume(small)
    seen = set()
    for combo in itertools.combinations(big.points, k):
        if _affine_rank(list(combo)) < big.ambient_dim:
            continue
        try:
            cand = LatticePolytope(combo)
        except DegeneratePolytopeError:
            continue
        if len(cand.vertices) != k or len(cand.points) != target_points:
            continue
        key = tuple(cand.vertices)
        if key in seen:
            continue
        seen.add(key)
        if _normalized_volume(cand) != target_vol:
            continue
        if len(cand.facets) != len(small.facets):
            continue
        if normal_form(cand, affine) == target:
            return cand
    return None


def _normalized_volume(p: LatticePolytope) -> int:
    """n! times the Euclidean volume, via a fan triangulation from a vertex."""
    n = p.ambient_dim
    if n == 1:
        return p.vertices[-1][0] - p.vertices[0][0]
    apex = p.vertices[0]
    total = 0
    for fi in p.facet_faces:
        face = p.faces[fi]
        if 0 in face.vertex_ids:
            continue
        f = p.facets[next(iter(face.facet_ids))]
        height = f.value(apex)
        # project the facet onto a coordinate hyperplane where it is faithful
        total += height * _facet_volume(p, fi, f)
    return total


def _facet_volume(p: LatticePolytope, fi: int, facet: Facet) -> int:
    """(n-1)! times the lattice-normalised volume of facet ``fi``."""
    verts = p.face_vertices(fi)
    n = p.ambient_dim
    # Basis of the facet's affine lattice hyperplane: kernel of the normal.
    ker = intmat.integer_kernel([list(facet.normal)])
    base = verts[0]
    coords = []
    for v in verts:
        d = [a - b for a, b in zip(v, base)]
        # solve d = sum c_k ker_k using an invertible (n-1)-minor
        coords.append(_coords_in(ker, d))
    sub = LatticePolytope(coords) if n - 1 > 1 else None
    if sub is None:
        xs = [c[0] for c in coords]
        return max(xs) - min(xs)
    return _normalized_volume(sub)


def _coords_in(basis: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    k = len(basis)
    n = len(v)
    for cols in itertools.combinations(range(n), k):
        m = [[basis[j][c] for j in range(k)] for c in cols]
        if intmat.det(m) != 0:
            sol = intmat.solve(m, [v[c] for c in cols])
            out = tuple(int(x) for x in sol)
            if any(x.denominator != 1 for x in sol):
                raise ValueError("point not in lattice")
            return out
    raise ValueError("degenerate basis")


# -- PALP text format ------------------------------------------------------

def parse_palp(text: str) -> list[LatticePolytope]:
    """Parse concatenated PALP matrices into polytopes.

    Each block is a header ``rows cols`` (trailing text ignored) followed by
    ``rows`` lines of ``cols`` integers. When ``rows < cols`` the columns
    are the vertices, otherwise the rows are.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    out = []
    i = 0
    while i < len(lines):
        head = lines[i].split()
        try:
            rows, cols = int(head[0]), int(head[1])
        except (IndexError, ValueError):
            raise ValueError(f"malformed PALP header at line {i + 1}: {lines[i]!r}")
        if i + rows >= len(lines) + 1 or rows <= 0 or cols <= 0:
            raise ValueError(f"truncated or empty PALP matrix at line {i + 1}")
        block = []
        for k in range(rows):
            try:
                row = [int(x) for x in lines[i + 1 + k].split()]
            except (IndexError, ValueError):
                raise ValueError(f"malformed PALP matrix row at line {i + 2 + k}")
            if len(row) != cols:
                raise ValueError(f"expected {cols} entries at line {i + 2 + k}")
            block.append(row)
        i += rows + 1
        verts = intmat.transpose(block) if rows < cols else block
        out.append(LatticePolytope(verts))
    return out


def emit_palp(polytopes: Iterable[LatticePolytope]) -> str:
    chunks = []
    for p in polytopes:
        n, m = p.ambient_dim, len(p.vertices)
        rows = intmat.transpose(p.vertices)
        chunks.append(f"{n} {m}\n" + "\n".join(" ".join(str(x) for x in r) for r in rows))
    return "\n".join(chunks) + ("\n" if chunks else "")


# -- weight / congruence sublattices ---------------------------------------

@dataclass(frozen=True)
class SublatticeBasis:
    """Basis of ``{x in Z^N : w.x = 0, c.x = 0 mod m for each congruence}``."""
    weight: tuple[int, ...]
    congruences: tuple[tuple[tuple[int, ...], int], ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.weight)

    def contains(self, x: Sequence[int]) -> bool:
        if intmat.dot(self.weight, x) != 0:
            return False
        return all(intmat.dot(c, x) % m == 0 for c, m in self.congruences)

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        if not self.contains(x):
            raise ValueError(f"{tuple(x)} is not in the sublattice")
        return _coords_in(self.basis, x)


def _solution_lattice(weight, congruences) -> list[list[int]]:
    n = len(weight)
    k = len(congruences)
    rows = [list(weight) + [0] * k]
    for j, (c, m) in enumerate(congruences):
        rows.append(list(c) + [(-m if t == j else 0) for t in range(k)])
    ker = intmat.integer_kernel(rows)
    gens = [v[:n] for v in ker]
    return intmat.hnf(gens)


def lattice_from_case(weight: Sequence[int], congruences=(),
                      basis: Sequence[Sequence[int]] | None = None) -> SublatticeBasis:
    """Sublattice of Z^N cut out by a weight equation and congruences.

    Without ``basis`` a Hermite-reduced basis is returned. A supplied basis
    is checked to lie in the lattice and to span it.
    """
    weight = tuple(int(x) for x in weight)
    cong = tuple((tuple(int(x) for x in c), int(m)) for c, m in congruences)
    if any(m < 1 for _, m in cong):
        raise ValueError("moduli must be positive")
    canonical = _solution_lattice(weight, cong)
    if basis is None:
        return SublatticeBasis(weight, cong, tuple(tuple(r) for r in canonical))
    basis = tuple(tuple(int(x) for x in b) for b in basis)
    lat = SublatticeBasis(weight, cong, tuple(tuple(r) for r in canonical))
    for b in basis:
        if not lat.contains(b):
            raise ValueError(f"basis vector {b} violates the lattice conditions")
    if len(basis) != len(canonical):
        raise ValueError("basis has the wrong rank")
    coords = [lat.coordinates(b) for b in basis]
    index = abs(intmat.det(coords))
    if index != 1:
        raise ValueError(f"basis spans a sublattice of index {index}")
    return SublatticeBasis(weight, cong, basis)


def monomial_to_point(exponents: Sequence[int], lattice: SublatticeBasis) -> tuple[int, ...]:
    """Coordinates of ``exponents - (1, ..., 1)`` in the lattice basis."""
    shifted = [int(e) - 1 for e in exponents]
    return lattice.coordinates(shifted)


def newton_polytope(exponent_rows: Iterable[Sequence[int]], lattice: SublatticeBasis) -> LatticePolytope:
    return LatticePolytope([monomial_to_point(r, lattice) for r in exponent_rows])
