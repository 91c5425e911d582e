"""Registry of the five bimodal pairs with their reference data.

Points and vectors use coordinates in the chosen bases of the weight
lattices; 4-vectors are ordered (W, X, Y, Z). Fractions are strings so the
table stays readable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

LATTICE_VARIABLES = ("W", "X", "Y", "Z")


@dataclass(frozen=True)
class LatticeData:
    weight: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    congruences: tuple[tuple[tuple[int, ...], int], ...] = ()


@dataclass(frozen=True)
class ExtensionData:
    """A reflexive polytope containing the Newton polytope of ``deformation``,
    together with reference values for its lattices.

    ``toric_points`` / ``toric_dropped`` index the lattice points of the
    polytope (divisors of the mirror-side toric lattice L); ``split_points``
    / ``split_dropped`` index the points of its dual (divisors of L').
    """
    label: str
    vertices: tuple[tuple[int, ...], ...]
    deformation: str
    dual_vertices: tuple[tuple[int, ...], ...] = ()
    also_contains: tuple[str, ...] = ()
    toric_points: tuple[tuple[int, ...], ...] = ()
    toric_dropped: tuple[int, ...] = ()
    toric_keep_order: tuple[int, ...] = ()
    split_points: tuple[tuple[int, ...], ...] = ()
    split_dropped: tuple[int, ...] = ()
    split_generators: tuple[tuple[int, int], ...] = ()
    expected: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class CaseDefinition:
    name: str
    f: str
    m: LatticeData
    m_dual: LatticeData
    expected_deformations: frozenset[str]
    expected_transpose_deformations: frozenset[str] | None = None
    witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)
    transpose_witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)
    dual_side_witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)
    expected_corrections: dict[str, int] = field(default_factory=dict)
    expected_transpose_inside_dual: dict[str, bool] = field(default_factory=dict)
    extensions: tuple[ExtensionData, ...] = ()
    flagged: dict[str, str] = field(default_factory=dict)


def as_fractions(v: tuple[str, ...]) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


U = ((0, 1), (1, 0))
U_PLUS_A2 = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 1), (0, 0, 1, -2))
U_PLUS_B7 = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -4, 1), (0, 0, 1, -2))

J30_TORIC_GRAM = (
    (0, 2, 3, 0),
    (2, 6, 9, 1),
    (3, 9, 12, 0),
    (0, 1, 0, -2),
)

J30_SPLIT_GRAM = (
    (0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1),
    (0, -2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0),
    (0, 1, 0, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 0, 0, 1, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, -2, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 1, 0),
    (0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 1),
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, -2, 0),
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, -2),
)

J30 = CaseDefinition(
    name="Z13/J30",
    f="x^6+xy^3+z^2",
    m=LatticeData((1, 3, 5, 9), ((-1, 5, -1, -1), (-1, 0, 2, -1), (-1, -1, -1, 1)),
                  (((0, 1, 1, 0), 2),)),
    m_dual=LatticeData((1, 2, 6, 9), ((-2, 1, 0, 0), (-6, 0, 1, 0), (-9, 0, 0, 1))),
    expected_deformations=frozenset({"W^9Z", "W^18"}),
    witnesses={"W^9Z": ("-1", "-1", "5/4")},
    expected_corrections={"W^18": 2},
    extensions=(
        ExtensionData(
            label="newton",
            vertices=((1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -6, -9)),
            deformation="W^18",
            dual_vertices=((-1, -1, 1), (-1, 2, -1), (-1, -1, -1), (8, -1, -1)),
            toric_points=((1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -6, -9),
                          (0, -2, -3), (-1, -4, -6), (-1, -3, -4)),
            toric_dropped=(5, 6, 7),
            split_points=((-1, -1, 1), (-1, 2, -1), (-1, -1, -1), (8, -1, -1),
                          (-1, -1, 0), (-1, 0, -1), (-1, 1, -1), (0, -1, -1),
                          (1, -1, -1), (2, -1, -1), (3, -1, -1), (4, -1, -1),
                          (5, -1, -1), (6, -1, -1), (7, -1, -1), (5, 0, -1),
                          (2, 1, -1)),
            split_dropped=(1, 5, 8),
            expected={
                "correction": 2, "rho": (16, 6),
                "toric_gram": J30_TORIC_GRAM, "split_gram": J30_SPLIT_GRAM,
                "L": (-3, (1, 3), (3,)), "L_prime": (-3, (1, 15), (3,)),
                "L_basis_change": (((1, 0, 0, 0), (0, -1, 1, 0), (-2, 3, -2, 1), (1, 0, 0, 1)),
                                   U_PLUS_A2, "sum"),
                "L_named": U_PLUS_A2,
                "L_prime_form": ("U", "E6", "E8"),
                "prime_det": True,
            },
        ),
    ),
)

S17 = CaseDefinition(
    name="X20/S17",
    f="x^6y+y^2z+z^2",
    m=LatticeData((1, 1, 2, 4), ((1, 1, -1, 0), (-6, 0, 1, 1), (-12, 0, 0, 3)),
                  (((-1, 1, 0, 0), 3),)),
    m_dual=LatticeData((1, 1, 3, 2), ((0, 5, -1, -1), (-1, 5, 0, -2), (0, -2, 0, 1))),
    expected_deformations=frozenset({"W^7X"}),
    witnesses={"W^7X": ("1", "1", "11/2")},
    transpose_witnesses={"W^7X": ("-1", "-2", "1/3")},
    extensions=(
        ExtensionData(
            label="extension",
            vertices=((-1, -2, 1), (0, -1, 0), (6, 5, -2), (5, 5, -2), (-1, 2, -1)),
            deformation="W^7X",
            dual_vertices=((0, 1, 3), (1, -6, -12), (1, 1, 2), (-1, 1, 0), (0, -3, -7)),
            toric_points=((-1, -2, 1), (0, -1, 0), (6, 5, -2), (5, 5, -2), (-1, 2, -1),
                          (3, 2, -1), (-1, 0, 0)),
            toric_dropped=(1, 3, 4),
            split_points=((0, 1, 3), (1, 1, 2), (-1, 1, 0), (0, -3, -7), (1, -6, -12),
                          (0, 1, 1), (0, -1, -2), (1, 0, 0), (1, -1, -2), (1, -2, -4),
                          (1, -3, -6), (1, -4, -8), (1, -5, -10)),
            split_dropped=(2, 6, 7),
            split_generators=((1, 0), (3, 0), (4, 0), (5, 0),
                              (8, 0), (9, 0), (10, 0), (11, 0), (12, 0), (13, 0),
                              (8, 1), (9, 1), (10, 1), (11, 1), (12, 1), (13, 1)),
            expected={
                "correction": 6, "rho": (16, 10),
                "L": (-7, (1, 3), (7,)), "L_prime": (-7, (1, 15), (7,)),
                # The printed change of basis treats the kept split divisor
                # as a single component.
                "L_basis_change": (((1, 0, 0, 0), (1, 1, 0, 0), (-1, -1, 1, -1), (-1, 0, 0, 1)),
                                   U_PLUS_B7, "component"),
                "L_named": U_PLUS_B7,
                "L_prime_form": ("U", "A6", "E8"),
                "prime_det": True,
            },
        ),
    ),
)

W18 = CaseDefinition(
    name="W18/W18",
    f="x^7+y^2z+z^2",
    m=LatticeData((3, 4, 7, 14), ((0, 0, 2, -1), (1, 1, 1, -1), (6, -1, 0, -1))),
    m_dual=LatticeData((1, 1, 4, 2), ((-1, -3, 1, 0), (1, 5, -1, -1), (1, -1, 0, 0))),
    expected_deformations=frozenset({"W^7Y", "W^8X"}),
    witnesses={"W^7Y": ("-7/2", "-5/2", "-1")},
    expected_corrections={"W^8X": 1},
    expected_transpose_inside_dual={"W^8X": False},
    extensions=(
        ExtensionData(
            label="extension",
            vertices=((-3, 5, -1), (2, -1, 0), (-1, 1, 1), (0, -1, 0), (0, 0, 1)),
            deformation="W^8X",
            also_contains=("W^7Y",),
            expected={
                "correction": 6, "rho": (16, 10),
                "L": (-7, (1, 3), (7,)), "L_prime": (-7, (1, 15), (7,)),
                "L_named": U_PLUS_B7,
                "L_prime_form": ("U", "A6", "E8"),
                "isomorphic_to": ("X20/S17", "extension"),
                "prime_det": True,
            },
        ),
    ),
    flagged={
        "W^8X:transpose_inside_dual":
            "the reference treats the dual of the reflexive Newton polytope as not "
            "containing the transposed Newton polytope; all four of its vertices are "
            "lattice points of the dual, and the lattice pair of this polytope passes "
            "the orthogonality test",
        "W^8X:transpose_isomorphic_subpolytope":
            "the reference finds no lattice sub-polytope of the dual isomorphic to the "
            "transposed Newton polytope; it is contained literally, so one exists",
    },
)

S10_SPLIT_I = ((-1, -1, 1), (5, 4, -1), (-1, 0, -1), (-2, -1, -1), (0, -1, -1), (2, 2, -1),
               (-1, -1, -1), (4, 3, -1), (3, 2, -1), (2, 1, -1), (1, 0, -1))
S10_SPLIT_II = ((-1, -1, 1), (5, 4, -1), (-1, 0, -1), (-1, -1, -1), (0, -1, -1), (2, 2, -1),
                (-1, -1, 0), (4, 3, -1), (3, 2, -1), (2, 1, -1), (1, 0, -1))
S10_GENERATORS = ((1, 0), (2, 0), (4, 0), (6, 0), (6, 1),
                  (8, 0), (9, 0), (10, 0), (11, 0), (8, 1), (9, 1), (10, 1), (11, 1))
# In the second polytope (-1,-1,-1) and (-1,-1,0) trade places; dropping
# points 3, 5, 7 there is not unimodular, so 3, 4, 5 go instead.
S10_GENERATORS_II = ((1, 0), (2, 0), (7, 0)) + S10_GENERATORS[3:]

S10 = CaseDefinition(
    name="W17/S10",
    f="x^5y+y^2z+z^2",
    m=LatticeData((2, 3, 5, 10), ((0, 5, -1, -1), (-1, 4, 0, -1), (-1, -1, -1, 1))),
    m_dual=LatticeData((1, 2, 4, 3), ((4, 0, -1, 0), (-6, 1, 1, 0), (-3, 0, 0, 1))),
    expected_deformations=frozenset({"W^10"}),
    expected_transpose_deformations=frozenset({"W^10", "W^7Z"}),
    witnesses={"W^10": ("0", "-1", "7/3")},
    dual_side_witnesses={"W^10": ("2/3", "2/3", "1/3"), "W^7Z": ("-2/3", "1", "5/3")},
    extensions=(
        ExtensionData(
            label="case-i",
            vertices=((0, 1, 0), (0, 0, 1), (2, -2, -1), (-2, 2, -1), (4, -6, -3)),
            deformation="W^10",
            dual_vertices=((-1, -1, 1), (-2, -1, -1), (0, -1, -1), (5, 4, -1), (-1, 0, -1)),
            toric_points=((0, 1, 0), (0, 0, 1), (2, -2, -1), (-2, 2, -1), (4, -6, -3),
                          (3, -4, -2), (2, -3, -1), (1, -1, 0), (1, -2, -2), (-1, 1, 0)),
            toric_dropped=(3, 7, 8),
            split_points=S10_SPLIT_I,
            split_dropped=(3, 5, 7),
            split_generators=S10_GENERATORS,
            expected={
                "correction": 5, "rho": (13, 12),
                "L": (20, (1, 6), (20,)), "L_prime": (20, (1, 12), (20,)),
                "L_hyperbolic": ((1, 0, 0, 0, 1, -1, 0), (0, 1, 0, 0, 0, -1, 0)),
                "L_prime_element_order": ((0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0), 20),
                "prime_det": False,
            },
        ),
        ExtensionData(
            label="case-ii",
            vertices=((1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, 2, -1), (4, -6, -3)),
            deformation="W^10",
            dual_vertices=((-1, -1, 1), (-1, -1, -1), (0, -1, -1), (5, 4, -1), (-1, 0, -1)),
            toric_points=((0, 1, 0), (0, 0, 1), (1, 0, 0), (-2, 2, -1), (4, -6, -3),
                          (3, -4, -2), (2, -2, -1), (2, -3, -1), (1, -2, -2), (-1, 1, 0)),
            toric_dropped=(4, 8, 10),
            toric_keep_order=(1, 2, 3, 7, 6, 5, 9),
            split_points=S10_SPLIT_II,
            split_dropped=(3, 4, 5),
            split_generators=S10_GENERATORS_II,
            expected={
                "correction": 5, "rho": (13, 12),
                "L": (20, (1, 6), (20,)), "L_prime": (20, (1, 12), (20,)),
                "L_hyperbolic": ((1, 0, 0, -1, 1, 0, 0), (1, 1, -2, 0, 0, 0, 0)),
                "L_element_order": ((0, 0, 0, 0, 1, 0, 0), 20),
                "L_prime_element_order": ((0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0), 20),
                "isometric_to": "case-i",
                "prime_det": False,
            },
        ),
    ),
    flagged={
        "case-i:L_hyperbolic_plane":
            "the vectors named by the reference as spanning U have Gram [[-4,0],[0,0]] "
            "in the kept generators; a bounded search does find a primitive U in L",
        "case-ii:L_hyperbolic_plane":
            "the vectors named by the reference as spanning U have Gram "
            "[[-8,-3],[-3,-18]] in the kept generators; a bounded search does find "
            "a primitive U in L",
    },
)

U16 = CaseDefinition(
    name="U16/U16",
    f="x^5+y^2z+yz^2",
    m=LatticeData((2, 3, 5, 5), ((4, -1, -1, 0), (4, -1, 0, -1), (5, 0, -1, -1))),
    m_dual=LatticeData((1, 1, 2, 2), ((0, -2, 0, 1), (0, -2, 1, 0), (1, 3, -1, -1))),
    expected_deformations=frozenset({"W^6X"}),
    expected_corrections={"W^6X": 2},
    extensions=(
        ExtensionData(
            label="newton",
            vertices=((1, 0, -1), (0, 0, 1), (-2, -2, 3), (0, 1, -1)),
            deformation="W^6X",
            dual_vertices=((-2, -2, -1), (-2, 1, -1), (4, 4, 5), (1, -2, -1)),
            toric_points=((1, 0, -1), (0, 0, 1), (-2, -2, 3), (0, 1, -1), (-1, -1, 2)),
            toric_dropped=(1, 2, 5),
            split_points=((-2, -2, -1), (-2, 1, -1), (4, 4, 5), (1, -2, -1), (-2, -1, -1),
                          (-2, 0, -1), (0, 2, 1), (2, 3, 3), (-1, -2, -1), (0, -2, -1),
                          (3, 2, 3), (2, 0, 1), (-1, -1, 0), (0, 0, 1), (1, 1, 2),
                          (2, 2, 3), (3, 3, 4), (-1, 0, -1), (0, -1, -1)),
            split_dropped=(1, 5, 9),
            expected={
                "correction": 2, "rho": (18, 4),
                "L": (-9, (1, 1), None), "L_prime": (-9, (1, 17), None),
                "L_basis_change": (((1, 0), (-1, 1)), ((0, 3), (3, 0)), "sum"),
                "L_named": ((0, 3), (3, 0)),
                "claimed_groups": ((9,), (9,)),
                "prime_det": False,
            },
        ),
    ),
    flagged={
        "newton:discriminant_groups":
            "the reference gives Z/9 for the discriminant groups of U(3) and of L'; "
            "the Smith form of [[0,3],[3,0]] is diag(3,3), so both groups are Z/3 + Z/3",
    },
)

CASES: dict[str, CaseDefinition] = {c.name: c for c in (J30, S17, W18, S10, U16)}

ALIASES = {
    "J30": "Z13/J30", "Z13": "Z13/J30",
    "S17": "X20/S17", "X20": "X20/S17",
    "W18": "W18/W18",
    "S10": "W17/S10", "W17": "W17/S10",
    "U16": "U16/U16",
}


def get_case(name: str) -> CaseDefinition:
    key = ALIASES.get(name, name)
    if key not in CASES:
        raise KeyError(f"unknown case {name!r}; choose from {sorted(CASES)}")
    return CASES[key]
