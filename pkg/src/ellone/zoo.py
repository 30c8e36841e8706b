"""Small stock complexes: circles, spheres, tori, cones, grids.

These are the standing examples used by the test corpus and the CLI
benchmark.  Each constructor returns a plain OrientedComplex.
"""

from __future__ import annotations

from .core import OrientedComplex


def point() -> OrientedComplex:
    return OrientedComplex.from_simplices(1, [[0]])


def circle(k: int) -> OrientedComplex:
    """The k-edge triangulated circle (k >= 3)."""
    assert k >= 3
    edges = [sorted((i, (i + 1) % k)) for i in range(k)]
    return OrientedComplex.from_simplices(k, edges)


def interval(k: int) -> OrientedComplex:
    """A path with k edges on k+1 vertices."""
    assert k >= 1
    return OrientedComplex.from_simplices(k + 1, [[i, i + 1] for i in range(k)])


def sphere() -> OrientedComplex:
    """The boundary of the tetrahedron (a 2-sphere)."""
    tris = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    return OrientedComplex.from_simplices(4, tris)


def torus_cyclic7() -> OrientedComplex:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7)))
        tris.append(sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7)))
    return OrientedComplex.from_simplices(7, tris)


def _grid_quotient(m: int, n: int, glue) -> OrientedComplex:
    """Triangulated m x n grid of squares with a vertex identification map.

    ``glue(i, j)`` maps lattice points (0..m, 0..n) to representative
    lattice points; representatives are numbered in scan order.
    """
    reps = {}
    ids = {}
    for i in range(m + 1):
        for j in range(n + 1):
            r = glue(i, j)
            reps[(i, j)] = r
            if r not in ids:
                ids[r] = len(ids)
    v = lambda i, j: ids[reps[(i, j)]]
    tris = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            for t in ((a, b, c), (a, c, d)):
                if len(set(t)) != 3:
                    raise AssertionError(f"degenerate triangle at square ({i},{j})")
                tris.append(sorted(t))
    if len({tuple(t) for t in tris}) != len(tris):
        raise AssertionError("identification grid too small: repeated triangles")
    return OrientedComplex.from_simplices(len(ids), tris)


def torus_grid(m: int = 3, n: int = 3) -> OrientedComplex:
    """Torus from an m x n grid with both directions wrapped."""
    return _grid_quotient(m, n, lambda i, j: (i % m, j % n))


def klein_grid(m: int = 4, n: int = 4) -> OrientedComplex:
    """Klein-bottle-like surface: one direction wrapped, one wrapped with a flip."""
    def glue(i, j):
        if j % (2 * n) >= n or j == n:  # keep it simple: only one wrap per axis
            pass
        jj = j % n
        wraps = j // n
        ii = i % m if wraps % 2 == 0 else (m - i) % m
        return (ii, jj)
    return _grid_quotient(m, n, glue)


def moebius_grid(m: int = 4, n: int = 2) -> OrientedComplex:
    """A Moebius-strip-like band: flip identification along one axis, free boundary."""
    def glue(i, j):
        if i < m:
            return (i, j)
        return (0, n - j)
    return _grid_quotient(m, n, glue)


def cone_over(K: OrientedComplex) -> OrientedComplex:
    """The cone on K with a fresh apex vertex (id = K.n_vertices)."""
    apex = K.n_vertices
    simplices = []
    for dim_list in K.simplices:
        for s in dim_list:
            simplices.append(list(s))
            simplices.append(list(s) + [apex])
    simplices.append([apex])
    return OrientedComplex.from_simplices(K.n_vertices + 1, simplices)


def disk(k: int = 3) -> OrientedComplex:
    """A triangulated disk: the cone over the k-edge circle."""
    return cone_over(circle(k))


def two_circles(k: int = 3) -> OrientedComplex:
    """Disjoint union of two k-edge circles."""
    edges = [sorted((i, (i + 1) % k)) for i in range(k)]
    edges += [sorted((k + i, k + (i + 1) % k)) for i in range(k)]
    return OrientedComplex.from_simplices(2 * k, edges)


def disjoint_double(K: OrientedComplex) -> OrientedComplex:
    """Two disjoint copies of K (vertex ids of the second copy shifted)."""
    nv = K.n_vertices
    simplices = []
    for dim_list in K.simplices:
        for s in dim_list:
            simplices.append(list(s))
            simplices.append([v + nv for v in s])
    return OrientedComplex.from_simplices(2 * nv, simplices)


def triangle_grid(m: int) -> OrientedComplex:
    """A flat m x m square grid cut into 2*m*m triangles (disk-like)."""
    return _grid_quotient(m, m, lambda i, j: (i, j))


def corpus() -> dict[str, OrientedComplex]:
    """The standing test corpus, keyed by name."""
    return {
        "point": point(),
        "circle3": circle(3),
        "circle4": circle(4),
        "circle5": circle(5),
        "circle6": circle(6),
        "torus7": torus_cyclic7(),
        "sphere": sphere(),
        "klein": klein_grid(),
        "disk3": disk(3),
        "cone_circle4": cone_over(circle(4)),
    }
