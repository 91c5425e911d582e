"""Lattice-point formulas for Picard ranks and Hodge numbers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .polytope import LatticePolytope


@dataclass(frozen=True)
class EdgeTerm:
    edge: tuple[tuple[int, ...], ...]       # vertices of the edge of P
    dual: tuple[tuple[int, ...], ...]       # vertices of the dual edge of P°
    interior: int
    dual_interior: int

    @property
    def product(self) -> int:
        return self.interior * self.dual_interior


@dataclass
class CorrectionLedger:
    """Edge-by-edge contributions ``l*(e) l*(e°)``; only nonzero terms kept."""
    terms: list[EdgeTerm] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(t.product for t in self.terms)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "terms": [{"edge": [list(v) for v in t.edge],
                       "dual_edge": [list(v) for v in t.dual],
                       "l_star": t.interior, "l_star_dual": t.dual_interior}
                      for t in self.terms],
        }


def toric_correction(p: LatticePolytope) -> CorrectionLedger:
    """Correction term over edges of ``p``; symmetric under duality."""
    dual = p.dual
    terms = []
    for e in p.edges:
        k = p.ell_star(e)
        if not k:
            continue
        de = p.dual_face(e)
        kd = dual.ell_star(de)
        if kd:
            terms.append(EdgeTerm(tuple(p.face_vertices(e)), tuple(dual.face_vertices(de)), k, kd))
    terms.sort(key=lambda t: t.edge)
    return CorrectionLedger(terms)


def rank_pic_tor(p: LatticePolytope) -> int:
    """Rank of the toric part of the Picard lattice of the K3 family attached
    to ``p``: points of ``p°`` minus facet-interior points, origin and the
    three linear relations."""
    dual = p.dual
    n = p.ambient_dim
    facet_interior = sum(dual.ell_star(f) for f in dual.facet_faces)
    return dual.ell() - n - 1 - facet_interior


def rho(p: LatticePolytope) -> int:
    return rank_pic_tor(p) + toric_correction(p).total


@dataclass
class RankReport:
    rank_pic_tor: int
    correction: int
    rho: int
    rank_pic_tor_dual: int
    rho_dual: int

    @property
    def identity_holds(self) -> bool:
        """``rank_pic_tor(P) + rho(P°) == 20``."""
        return self.rank_pic_tor + self.rho_dual == 20

    def to_dict(self) -> dict:
        return {
            "rank_pic_tor": self.rank_pic_tor,
            "correction": self.correction,
            "rho": self.rho,
            "rank_pic_tor_dual": self.rank_pic_tor_dual,
            "rho_dual": self.rho_dual,
            "identity_holds": self.identity_holds,
        }


def rank_report(p: LatticePolytope) -> RankReport:
    if p.ambient_dim != 3:
        raise ValueError("Picard ranks are for reflexive 3-polytopes")
    corr = toric_correction(p).total
    rt = rank_pic_tor(p)
    rtd = rank_pic_tor(p.dual)
    return RankReport(rt, corr, rt + corr, rtd, rtd + corr)


def rank_identity_check(p: LatticePolytope) -> bool:
    return rank_report(p).identity_holds


def _deformation_count(p: LatticePolytope) -> int:
    """``l(p) - n - 1 - sum l*(facets) + sum l*(G) l*(G°)`` over codim-2 faces."""
    n = p.ambient_dim
    dual = p.dual
    total = p.ell() - n - 1
    total -= sum(p.ell_star(f) for f in p.facet_faces)
    for g in p.faces_of_dim(n - 2):
        k = p.ell_star(g)
        if k:
            total += k * dual.ell_star(p.dual_face(g))
    return total


def hodge_numbers(p: LatticePolytope) -> tuple[int, int]:
    """``(h^{1,1}, h^{n-2,1})`` of the Calabi-Yau hypersurface with Newton
    polytope ``p`` (reflexive, dimension ``n >= 4``)."""
    if p.ambient_dim < 4:
        raise ValueError("Hodge formula needs dimension at least 4")
    return _deformation_count(p.dual), _deformation_count(p)
