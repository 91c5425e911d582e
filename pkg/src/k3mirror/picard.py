"""Intersection matrices of toric divisors on K3 hypersurfaces.

For a reflexive 3-polytope ``P`` the divisors live at the nonzero lattice
points of ``P°`` that are not interior to a facet. A vertex ``v`` gives a
curve of genus ``l*(v*)`` with ``v* `` the dual facet of ``P``. A point in
the interior of an edge ``E`` of ``P°`` gives ``l*(E*) + 1`` disjoint
(-2)-curves; the split model keeps them as separate generators. The
unsplit model keeps one generator per point, by default the sum of its
components (the restriction of the ambient divisor). With
``convention="component"`` a single component stands in for the point
instead (square -2, meeting each neighbour once).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import intmat
from .lattice import IntegralLattice
from .polytope import LatticePolytope, Point


@dataclass(frozen=True)
class DivisorPoint:
    point: Point
    kind: str          # "vertex" or "edge"
    face: int          # index of the carrying face of P°
    multiplicity: int  # number of irreducible components
    genus: int         # l* of the dual face (facet for vertices, edge otherwise)


Generator = tuple[Point, int]


def divisor_points(p: LatticePolytope) -> list[DivisorPoint]:
    """Divisor-carrying lattice points of ``p``'s dual, vertices first."""
    host = p.dual
    if host.ambient_dim != 3:
        raise ValueError("divisor models are implemented for 3-polytopes")
    out = []
    for q in host.points:
        fid = host.point_face[q]
        d = host.faces[fid].dim
        if d == 0:
            g = p.ell_star(host.dual_face(fid))
            out.append(DivisorPoint(q, "vertex", fid, 1, g))
        elif d == 1:
            g = p.ell_star(host.dual_face(fid))
            out.append(DivisorPoint(q, "edge", fid, g + 1, g))
    out.sort(key=lambda dp: (dp.kind != "vertex", dp.point))
    return out


def _edge_neighbours(p: LatticePolytope) -> dict[frozenset, int]:
    """Pairs of consecutive lattice points along edges of ``p°`` mapped to
    ``l*`` of the dual edge plus one."""
    host = p.dual
    out = {}
    for e in host.edges:
        a, b = host.face_vertices(e)
        direction = [y - x for x, y in zip(a, b)]
        pts = sorted(host.face_points(e), key=lambda q: intmat.dot(direction, q))
        s = p.ell_star(host.dual_face(e)) + 1
        for x, y in zip(pts, pts[1:]):
            out[frozenset((x, y))] = s
    return out


CONVENTIONS = ("component", "sum")


def intersection_number(p: LatticePolytope, a: Sequence[int], b: Sequence[int],
                        convention: str = "sum") -> int:
    """Intersection of the unsplit divisors at lattice points ``a, b`` of ``p°``.

    Vertices square to ``2 l*(v*) - 2`` and two vertices joined by a
    primitive edge ``E`` meet in ``l*(E*) + 1``. Under the component
    convention an edge-interior point squares to -2 and meets its neighbours
    once; as a sum of components it squares to ``-2 (l*(E*) + 1)`` and meets
    neighbours ``l*(E*) + 1`` times.
    """
    a, b = tuple(a), tuple(b)
    info = {dp.point: dp for dp in divisor_points(p)}
    if a not in info or b not in info:
        raise ValueError("point does not carry a divisor")
    product = _product_for(convention)
    return product((a, 0), (b, 0), info, _edge_neighbours(p))


def _product_for(convention: str):
    if convention == "component":
        return _component_product
    if convention == "sum":
        return _unsplit_product
    raise ValueError(f"convention must be one of {CONVENTIONS}")


def _component_product(x: Generator, y: Generator, info, nbrs) -> int:
    (a, i), (b, j) = x, y
    da, db = info[a], info[b]
    if a == b:
        if i != j:
            return 0
        return 2 * da.genus - 2 if da.kind == "vertex" else -2
    s = nbrs.get(frozenset((a, b)))
    if s is None:
        return 0
    if da.kind == "edge" and db.kind == "edge":
        return 1 if i == j else 0
    if da.kind == "vertex" and db.kind == "vertex":
        return s
    return 1


def _unsplit_product(x: Generator, y: Generator, info, nbrs) -> int:
    (a, _), (b, _) = x, y
    if a == b:
        d = info[a]
        return 2 * d.genus - 2 if d.kind == "vertex" else -2 * d.multiplicity
    return nbrs.get(frozenset((a, b)), 0)


@dataclass
class PicardModel:
    """Generators and Gram matrix of a toric divisor model.

    ``all_generators`` lists every component (before dropping the three
    divisors eliminated by linear relations); ``generators`` is what is
    left. ``full_gram`` covers ``all_generators`` and is degenerate.
    """
    polytope: LatticePolytope
    split: bool
    convention: str
    points: list[DivisorPoint]
    dropped: tuple[Point, ...]
    all_generators: list[Generator]
    generators: list[Generator]
    full_gram: list[list[int]]
    gram: list[list[int]] = field(repr=False)

    @cached_property
    def lattice(self) -> IntegralLattice:
        return IntegralLattice(self.gram)

    def relations(self) -> list[list[int]]:
        """The three linear relations ``sum <e_k, v> D_v = 0`` as coefficient
        vectors on ``all_generators``.

        They lie in the kernel of ``full_gram`` for the split model and for
        the unsplit sum convention.
        """
        return [[g[0][k] for g in self.all_generators] for k in range(3)]

    def labels(self) -> list[str]:
        out = []
        mult = {dp.point: dp.multiplicity for dp in self.points}
        for q, i in self.generators:
            tag = str(q)
            if self.split and mult[q] > 1:
                tag += f"^({i + 1})"
            out.append(tag)
        return out

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "convention": self.convention,
            "generators": self.labels(),
            "dropped": [list(q) for q in self.dropped],
            "gram": self.gram,
            "lattice": self.lattice.to_dict(),
        }


def default_dropped(points: Sequence[DivisorPoint]) -> tuple[Point, ...]:
    """First triple (in the given order) of single-component divisors whose
    coordinate vectors form a unimodular matrix."""
    single = [dp.point for dp in points if dp.multiplicity == 1]
    for trio in itertools.combinations(single, 3):
        if abs(intmat.det(trio)) == 1:
            return trio
    for trio in itertools.combinations([dp.point for dp in points], 3):
        if abs(intmat.det(trio)) == 1:
            return trio
    raise ValueError("no unimodular triple of divisor points")


def picard_model(p: LatticePolytope, split: bool = True,
                 order: Iterable[Sequence[int]] | None = None,
                 dropped: Iterable[Sequence[int]] | None = None,
                 convention: str = "sum",
                 generators: Iterable[tuple[Sequence[int], int]] | None = None) -> PicardModel:
    """Divisor model of the K3 hypersurface attached to reflexive ``p``.

    ``order`` fixes the order of divisor points (it must list every one);
    ``dropped`` names the three points removed via the linear relations.
    For a dropped point with several components the first component goes.
    ``convention`` only matters for the unsplit model. ``generators``
    optionally reorders the kept generators, given as (point, component).
    """
    pts = divisor_points(p)
    info = {dp.point: dp for dp in pts}
    if order is not None:
        order = [tuple(q) for q in order]
        if sorted(order) != sorted(info):
            raise ValueError("order must list each divisor point exactly once")
        pts = [info[q] for q in order]
    if dropped is None:
        drop = default_dropped(pts)
    else:
        drop = tuple(tuple(q) for q in dropped)
        if len(drop) != 3 or any(q not in info for q in drop):
            raise ValueError("dropped must name three divisor points")
        if abs(intmat.det(drop)) != 1:
            raise ValueError("dropped points must form a unimodular triple")
    nbrs = _edge_neighbours(p)
    if split:
        all_gens = [(dp.point, i) for dp in pts for i in range(dp.multiplicity)]
        product = _component_product
    else:
        all_gens = [(dp.point, 0) for dp in pts]
        product = _product_for(convention)
    full = [[product(x, y, info, nbrs) for y in all_gens] for x in all_gens]
    keep = [k for k, g in enumerate(all_gens) if not (g[0] in drop and g[1] == 0)]
    if generators is not None:
        wanted = [(tuple(q), int(i)) for q, i in generators]
        pos = {all_gens[k]: k for k in keep}
        if sorted(wanted) != sorted(pos):
            raise ValueError("generators must list each kept generator exactly once")
        keep = [pos[g] for g in wanted]
    gens = [all_gens[k] for k in keep]
    gram = [[full[i][j] for j in keep] for i in keep]
    label = "split" if split else convention
    return PicardModel(p, split, label, pts, drop, all_gens, gens, full, gram)


def component_gram(delta: LatticePolytope, **kw) -> PicardModel:
    """Split model for ``delta``: divisors at the points of ``delta°``."""
    return picard_model(delta, split=True, **kw)


def toric_gram(delta: LatticePolytope, **kw) -> PicardModel:
    """Toric model of the mirror family: divisors at the points of ``delta``
    itself, with edge-interior divisors kept whole."""
    return picard_model(delta.dual, split=False, **kw)
