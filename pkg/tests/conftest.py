import itertools
import random

import numpy as np
import pytest

from k3mirror import intmat
from k3mirror.cases import CASES
from k3mirror.polytope import LatticePolytope


def random_unimodular(rng: random.Random, n: int = 3, steps: int = 12) -> list[list[int]]:
    """Product of random elementary matrices, signed permutations included."""
    m = intmat.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    perm = list(range(n))
    rng.shuffle(perm)
    m = [m[p] for p in perm]
    if rng.random() < 0.5:
        m[0] = [-x for x in m[0]]
    return m


def apply(m, points):
    return [tuple(intmat.matvec(m, p)) for p in points]


def brute_points(vertices) -> set:
    """Lattice points of conv(vertices) from a floating-point hull (scipy),
    scanned over the bounding box; independent of the exact hull code."""
    from scipy.spatial import ConvexHull

    pts = np.array(vertices, dtype=float)
    eq = ConvexHull(pts).equations
    lo = pts.min(axis=0).astype(int)
    hi = pts.max(axis=0).astype(int)
    grid = np.stack(np.meshgrid(*[np.arange(lo[k], hi[k] + 1) for k in range(3)],
                                indexing="ij"), axis=-1).reshape(-1, 3)
    ok = (grid @ eq[:, :3].T + eq[:, 3] <= 1e-9).all(axis=1)
    return {tuple(int(x) for x in row) for row in grid[ok]}


CASE_POLYTOPES = {
    f"{name}:{ext.label}": ext.vertices
    for name, case in CASES.items() for ext in case.extensions
}


@pytest.fixture(params=sorted(CASE_POLYTOPES))
def case_polytope(request) -> LatticePolytope:
    return LatticePolytope(CASE_POLYTOPES[request.param])
