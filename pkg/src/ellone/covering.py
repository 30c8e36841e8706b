"""Combinatorial regular coverings with deck-group averaging.

Finite regular coverings carry: cochain lifts along the projection, the
Bruhat partition of unity on the total space, the two averaging/extension
formulas (for module maps and for bar cochains), primitive averaging in
degree one, and the transfer/restriction pair for an ambient symmetry
group.  The integer line over a k-edge circle is provided as a built-in
family with an exact cone operator, which is where the cone-averaging
(theta) construction is non-trivial.
"""

from __future__ import annotations

from fractions import Fraction

from .core import (
    CapError,
    Chain,
    Cochain,
    DegreeError,
    OrientedComplex,
    ParseError,
    PreconditionError,
    boundary,
    coboundary,
    rat,
    rat_str,
    simplex_boundary,
    solve_sparse_linear,
)
from .groupcoh import BarCochain, FiniteGroup
from .seminorm import LE, EQ, LPProblem, lp_solve
from .simplicial import Cone, _permutation_sign

DECK_CAP = 512


# ---------------------------------------------------------------------------
# vertex maps acting on simplices and cochains

def map_simplex(K_src: OrientedComplex, K_dst: OrientedComplex, vmap, d: int, i: int):
    """Image of a simplex under a vertex map, as (sign, target index).

    Returns None when the image is degenerate.  The sign is the parity of
    the permutation sorting the image tuple ascending.
    """
    s = K_src.simplex(d, i)
    imgs = [vmap[v] for v in s]
    if len(set(imgs)) != len(imgs):
        return None
    sign = _permutation_sign(imgs)
    target = tuple(sorted(imgs))
    return sign, K_dst.index_of(d, target)


def push_chain(K_src, K_dst, vmap, c: Chain) -> Chain:
    out: dict[int, Fraction] = {}
    for i, q in c.coeffs.items():
        hit = map_simplex(K_src, K_dst, vmap, c.degree, i)
        if hit is None:
            continue
        sign, j = hit
        q2 = out.get(j, Fraction(0)) + sign * q
        if q2 == 0:
            out.pop(j, None)
        else:
            out[j] = q2
    return Chain(c.degree, out)


def pull_cochain(K_src, K_dst, vmap, f: Cochain, degree: int) -> Cochain:
    """(vmap^* f)(s) = f(vmap(s)), with orientation signs."""
    coeffs = {}
    for i in range(K_src.n_simplices(degree)):
        hit = map_simplex(K_src, K_dst, vmap, degree, i)
        if hit is None:
            continue
        sign, j = hit
        v = sign * f.get(j)
        if v != 0:
            coeffs[i] = v
    return Cochain(degree, coeffs)


# ---------------------------------------------------------------------------
# finite regular coverings

class CoveringDatum:
    """A regular covering of finite complexes with its deck group.

    Checked on construction: the deck permutations are simplicial, commute
    with the projection, act freely on vertices; the projection is
    simplicial, injective on every simplex, and surjective; every vertex
    orbit meets the fundamental vertex domain exactly once.
    """

    def __init__(self, base: OrientedComplex, total: OrientedComplex,
                 projection, deck_generators, fundamental_domain,
                 cap: int = DECK_CAP):
        self.base = base
        self.total = total
        self.projection = tuple(int(v) for v in projection)
        if len(self.projection) != total.n_vertices:
            raise ParseError("projection must list one base vertex per total vertex")
        self.domain = tuple(sorted(int(v) for v in fundamental_domain))
        self.deck = self._close([tuple(int(x) for x in g) for g in deck_generators], cap)
        self.deck_index = {g: i for i, g in enumerate(self.deck)}
        self._validate()
        self._finite_group = None

    def _close(self, gens, cap):
        n = self.total.n_vertices
        ident = tuple(range(n))
        for g in gens:
            if sorted(g) != list(range(n)):
                raise ParseError(f"deck generator is not a vertex permutation: {g}")
        out = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = tuple(a[g[i]] for i in range(n))
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
                        nxt.append(c)
                        if len(out) > cap:
                            raise CapError(f"deck group exceeds cap {cap}")
            frontier = nxt
        return tuple(out)

    def _validate(self):
        t, b = self.total, self.base
        for g in self.deck:
            for d in range(t.dim + 1):
                for i in range(t.n_simplices(d)):
                    if map_simplex(t, t, g, d, i) is None:
                        raise PreconditionError("deck element degenerates a simplex")
            if g != self.deck[0]:
                if any(g[v] == v for v in range(t.n_vertices)):
                    raise PreconditionError("deck action is not free on vertices")
            for v in range(t.n_vertices):
                if self.projection[g[v]] != self.projection[v]:
                    raise PreconditionError("projection does not commute with the deck")
        covered = [set() for _ in range(b.dim + 1)]
        for d in range(t.dim + 1):
            for i in range(t.n_simplices(d)):
                hit = map_simplex(t, b, self.projection, d, i)
                if hit is None:
                    raise PreconditionError("projection is not injective on a simplex")
                covered[d].add(hit[1])
        for d in range(b.dim + 1):
            if covered[d] != set(range(b.n_simplices(d))):
                raise PreconditionError("projection is not onto the base complex")
        dom = set(self.domain)
        seen = set()
        for v in range(t.n_vertices):
            orbit = {g[v] for g in self.deck}
            hits = orbit & dom
            if len(hits) != 1:
                raise PreconditionError(
                    f"orbit of vertex {v} meets the fundamental domain {len(hits)} times")
            seen.update(orbit)
        assert seen == set(range(t.n_vertices))

    # -- deck algebra --------------------------------------------------------

    def compose(self, a: int, b: int) -> int:
        ga, gb = self.deck[a], self.deck[b]
        return self.deck_index[tuple(ga[gb[i]] for i in range(len(ga)))]

    def inv(self, a: int) -> int:
        g = self.deck[a]
        inv = [0] * len(g)
        for i, gi in enumerate(g):
            inv[gi] = i
        return self.deck_index[tuple(inv)]

    def deck_finite_group(self) -> FiniteGroup:
        if self._finite_group is None:
            table = [[self.compose(a, b) for b in range(len(self.deck))]
                     for a in range(len(self.deck))]
            self._finite_group = FiniteGroup(table, name=f"deck{len(self.deck)}")
        return self._finite_group

    # -- actions and lifts ---------------------------------------------------

    def act_cochain(self, a: int, f: Cochain) -> Cochain:
        """(g.f)(s) = f(g^-1 s)."""
        return pull_cochain(self.total, self.total, self.deck[self.inv(a)], f, f.degree)

    def is_invariant_cochain(self, f: Cochain) -> bool:
        return all(self.act_cochain(a, f) == f for a in range(len(self.deck)))

    def lift_cochain(self, f: Cochain) -> Cochain:
        """p^*(f): deck-invariant, same sup norm, commutes with coboundary."""
        return pull_cochain(self.total, self.base, self.projection, f, f.degree)

    def domain_element(self, x: int) -> int:
        """The unique deck index g with g^-1(x) in the fundamental domain."""
        dom = set(self.domain)
        for a in range(len(self.deck)):
            if self.deck[self.inv(a)][x] in dom:
                return a
        raise AssertionError("validated covering must have a domain representative")

    def parameterization(self, d: int, i: int):
        """The canonical deck-equivariant vertex order of a total simplex:
        sort by projected base vertex.  Returns (sign, ordered vertices),
        the sign being the parity against the ascending order.

        Because the projection commutes with the deck action and is
        injective on simplices, this ordering satisfies order(g.s) =
        g(order(s)) and restricts to faces, which is what the averaging
        formulas need from the basepoint data of a parameterized simplex.
        """
        s = self.total.simplex(d, i)
        order = sorted(s, key=lambda v: self.projection[v])
        positions = [s.index(w) for w in order]
        return _permutation_sign(positions), tuple(order)

    def anchor_vertex(self, d: int, i: int) -> int:
        """The first vertex in the canonical parameterization."""
        return self.parameterization(d, i)[1][0]

    @classmethod
    def from_dict(cls, data: dict) -> "CoveringDatum":
        try:
            from .core import complex_from_dict
            base, _ = complex_from_dict(data["base"])
            total, _ = complex_from_dict(data["total"])
            return cls(base, total, data["projection"], data["deck_generators"],
                       data["fundamental_domain"])
        except KeyError as exc:
            raise ParseError(f"covering file is missing {exc}") from exc


class BruhatFunction:
    """A rational partition of unity over the deck orbits of vertices."""

    def __init__(self, covering: CoveringDatum, values: dict):
        self.covering = covering
        self.values = {int(v): rat(q) for v, q in values.items() if rat(q) != 0}
        for q in self.values.values():
            if not 0 <= q <= 1:
                raise PreconditionError("Bruhat values must lie in [0, 1]")
        self.check_partition()

    def __call__(self, x: int) -> Fraction:
        return self.values.get(x, Fraction(0))

    def check_partition(self):
        for x in range(self.covering.total.n_vertices):
            total = sum((self(g[x]) for g in self.covering.deck), Fraction(0))
            if total != 1:
                raise PreconditionError(f"partition of unity fails at vertex {x}: {total}")

    @classmethod
    def indicator(cls, covering: CoveringDatum) -> "BruhatFunction":
        return cls(covering, {v: Fraction(1) for v in covering.domain})


def bruhat_function(covering: CoveringDatum) -> BruhatFunction:
    """The indicator of the fundamental vertex domain (the default choice;
    recorded in run metadata)."""
    return BruhatFunction.indicator(covering)


# ---------------------------------------------------------------------------
# the module extension formula

class EquivariantExtension:
    """Extend a deck-equivariant map alpha: A -> C^n(total) along an
    injection iota: A -> B with a declared (not necessarily equivariant)
    left inverse sigma of norm at most one.

    A and B are finite-dimensional deck modules given by action matrices;
    alpha is given by the images of A's basis vectors.  `extend` computes

        beta(b)(s) = sum_g h(g^-1(s(e0))) . alpha(g . sigma(g^-1 . b))(s)

    which is again equivariant, restricts to alpha along iota, and does
    not increase operator norms when sigma does not.
    """

    def __init__(self, covering: CoveringDatum, degree: int, action_A, action_B,
                 iota, sigma, alpha, bruhat: BruhatFunction | None = None):
        self.covering = covering
        self.degree = int(degree)
        self.action_A = [_matrix(m) for m in action_A]
        self.action_B = [_matrix(m) for m in action_B]
        self.iota = _matrix(iota)
        self.sigma = _matrix(sigma)
        self.alpha = list(alpha)
        self.h = bruhat or BruhatFunction.indicator(covering)
        self.dim_A = len(self.iota[0]) if self.iota else 0
        self.dim_B = len(self.iota)
        n_deck = len(covering.deck)
        assert len(self.action_A) == len(self.action_B) == n_deck
        assert len(self.alpha) == self.dim_A
        ident = _mat_mul(self.sigma, self.iota)
        if ident != _identity(self.dim_A):
            raise PreconditionError("sigma is not a left inverse of iota")
        for a in range(n_deck):
            for k in range(self.dim_A):
                lhs = self._alpha_vec(_mat_vec(self.action_A[a], _unit(self.dim_A, k)))
                rhs = covering.act_cochain(a, self.alpha[k])
                if lhs != rhs:
                    raise PreconditionError("alpha is not deck-equivariant")

    def _alpha_vec(self, avec) -> Cochain:
        out = Cochain(self.degree)
        for k, q in enumerate(avec):
            if q != 0:
                out = out + self.alpha[k].scale(q)
        return Cochain(self.degree, out.coeffs)

    def extend(self, b_vec) -> Cochain:
        """The value of the extension on an element of B."""
        b_vec = [rat(q) for q in b_vec]
        assert len(b_vec) == self.dim_B
        C = self.covering
        coeffs = {}
        for i in range(C.total.n_simplices(self.degree)):
            first = C.anchor_vertex(self.degree, i)
            acc = Fraction(0)
            for a in range(len(C.deck)):
                w = self.h(C.deck[C.inv(a)][first])
                if w == 0:
                    continue
                avec = _mat_vec(self.action_A[a],
                                _mat_vec(self.sigma,
                                         _mat_vec(self.action_B[C.inv(a)], b_vec)))
                acc += w * self._alpha_vec(avec).get(i)
            if acc != 0:
                coeffs[i] = acc
        return Cochain(self.degree, coeffs)

    def extension_matrix(self):
        """Images of B's basis vectors (the extension as a linear map)."""
        return [self.extend(_unit(self.dim_B, j)) for j in range(self.dim_B)]

    def operator_norms(self):
        """(norm of alpha, norm of the extension), both as maps from the
        sup-normed coordinate space to sup-normed cochains."""
        na = _cochain_operator_norm(self.alpha, self.covering.total, self.degree)
        nb = _cochain_operator_norm(self.extension_matrix(), self.covering.total,
                                    self.degree)
        return na, nb


def _matrix(rows):
    return [[rat(q) for q in row] for row in rows]


def _identity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def _unit(n, k):
    return [Fraction(1) if i == k else Fraction(0) for i in range(n)]


def _mat_vec(m, v):
    return [sum((q * x for q, x in zip(row, v)), Fraction(0)) for row in m]


def _mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def _cochain_operator_norm(images, K, degree) -> Fraction:
    """sup-to-sup operator norm: max over simplices of the coefficient row sum."""
    best = Fraction(0)
    for i in range(K.n_simplices(degree)):
        row = sum((abs(f.get(i)) for f in images), Fraction(0))
        best = max(best, row)
    return best


# ---------------------------------------------------------------------------
# bar cochains to simplicial cochains

def bar_to_simplicial(covering: CoveringDatum, f: BarCochain,
                      bruhat: BruhatFunction | None = None) -> Cochain:
    """beta(f)(s) = sum over deck tuples of prod_i h(g_i^-1(s(e_i))) . f(g_0..g_n).

    A deck-equivariant chain map from the bar resolution of the deck group
    into cochains on the total space; sup-norm nonincreasing.  The vertices
    s(e_i) are taken in the canonical parameterization order, and the value
    is transported to the ascending-orientation basis by its sign.
    """
    G = covering.deck_finite_group()
    if f.group.order != G.order or f.group.table != G.table:
        raise PreconditionError("bar cochain is not over this covering's deck group")
    h = bruhat or BruhatFunction.indicator(covering)
    n = f.degree
    candidates = {}
    for v in range(covering.total.n_vertices):
        cand = []
        for a in range(len(covering.deck)):
            w = h(covering.deck[covering.inv(a)][v])
            if w != 0:
                cand.append((a, w))
        candidates[v] = cand
    coeffs = {}
    for i in range(covering.total.n_simplices(n)):
        sign, order = covering.parameterization(n, i)
        acc = Fraction(0)
        stack = [((), Fraction(1))]
        for v in order:
            nxt = []
            for prefix, weight in stack:
                for a, w in candidates[v]:
                    nxt.append((prefix + (a,), weight * w))
            stack = nxt
        for tup, weight in stack:
            acc += weight * f.value(tup)
        if acc != 0:
            coeffs[i] = sign * acc
    return Cochain(n, coeffs)


# ---------------------------------------------------------------------------
# cone averaging (theta)

def deck_cone_chain(cone: Cone, elements: tuple) -> Chain:
    """The cone-filling chain over a tuple of deck elements for a trivial
    deck group on a cone complex: iterated cone homotopy from the apex."""
    for g in elements:
        assert g == 0, "only the trivial deck group acts on a finite cone"
    x0 = cone.K.index_of(0, (cone.apex,))
    c = Chain(0, {x0: 1})
    for _ in range(len(elements) - 1):
        c = cone.homotopy(c)
    return c


def cone_average_trivial(cone: Cone, f: Cochain) -> Cochain:
    """Theta over the one-element deck group: in degree 0 the constant
    value at the apex, in higher degrees zero (the iterated cone of the
    apex collapses)."""
    K = cone.K
    n = f.degree
    sbar = deck_cone_chain(cone, tuple([0] * (n + 1)))
    val = f.evaluate(sbar) if sbar.degree == n else Fraction(0)
    if sbar.degree != n:
        val = Fraction(0)
    return Cochain(n, {i: val for i in range(K.n_simplices(n)) if val != 0})


class LineCovering:
    """The triangulated integer line over the k-edge circle.

    Vertices of the line are the integers; the edge [m, m+1] projects to
    the base edge through m mod k (with a sign on the wrap edge).  The
    deck group is translation by multiples of k.  The Bruhat function is
    the triangular hat h(j) = j/k on [0, k], (2k - j)/k on [k, 2k]: an
    exact partition of unity whose averaging spreads holonomy uniformly,
    which is what makes the cone average sup-norm nonincreasing.
    """

    def __init__(self, k: int):
        from .zoo import circle
        assert k >= 3
        self.k = k
        self.base = circle(k)
        self._edge_index = {}
        for r in range(k):
            pair = tuple(sorted((r, (r + 1) % k)))
            self._edge_index[r] = self.base.index_of(1, pair)

    # -- geometry of the line -------------------------------------------------

    def base_edge(self, m: int):
        """(sign, base edge index) for the line edge [m, m+1]."""
        r = m % self.k
        sign = 1 if r < self.k - 1 else -1
        return sign, self._edge_index[r]

    def lift_value(self, f: Cochain, m: int) -> Fraction:
        sign, idx = self.base_edge(m)
        return sign * f.get(idx)

    def path_sum(self, f: Cochain, u: int, v: int) -> Fraction:
        """Lifted f summed along the edge path from vertex u to vertex v."""
        if v >= u:
            return sum((self.lift_value(f, m) for m in range(u, v)), Fraction(0))
        return -self.path_sum(f, v, u)

    def bruhat(self, m: int) -> Fraction:
        k = self.k
        if 0 <= m <= k:
            return Fraction(m, k)
        if k <= m <= 2 * k:
            return Fraction(2 * k - m, k)
        return Fraction(0)

    def bruhat_metadata(self) -> dict:
        return {"bruhat": "triangular-hat", "support": [0, 2 * self.k]}

    def check_partition(self, window: int = 3):
        for m in range(-window * self.k, window * self.k):
            total = sum(self.bruhat(m + a * self.k) for a in range(-3 * window, 3 * window))
            assert total == 1, f"partition fails at {m}"

    def _weights(self, m: int):
        """Deck translations a with h(m - a k) nonzero, with their weights."""
        lo = -(-(m - 2 * self.k) // self.k)  # ceil((m - 2k) / k)
        out = []
        for a in range(lo, m // self.k + 1):
            w = self.bruhat(m - a * self.k)
            if w != 0:
                out.append((a, w))
        return out

    def deck_cone_chain(self, elements: tuple) -> dict:
        """The filling chain over deck translations, as a path description.

        In degree one this is the edge path between the translated
        basepoints; higher cone fillings vanish on the line.
        """
        if len(elements) == 1:
            return {"kind": "vertex", "at": elements[0] * self.k}
        if len(elements) == 2:
            return {"kind": "path", "from": elements[0] * self.k,
                    "to": elements[1] * self.k}
        return {"kind": "zero"}

    # -- the averaging map ----------------------------------------------------

    def cone_average(self, f: Cochain) -> Cochain:
        """Theta: average f over deck translates of cone fillings.

        Degree 0: the constant with value f at the projected basepoint.
        Degree 1: theta(f) on a base edge sums path holonomies of the lift
        weighted by the hat function; the result is exactly the cocycle
        with the total holonomy spread uniformly over the cycle, so it is
        cohomologous to f and sup-norm nonincreasing.  Deck invariance of
        the formula is asserted by evaluating at two lifts.
        """
        n = f.degree
        if n == 0:
            v0 = self.base.index_of(0, (0,))
            val = f.get(v0)
            return Cochain(0, {i: val for i in range(self.k) if val != 0})
        if n != 1:
            raise DegreeError("the line family averages cochains of degree 0 and 1")
        coeffs = {}
        for r in range(self.k):
            vals = []
            for m in (r, r + self.k):
                acc = Fraction(0)
                for a0, w0 in self._weights(m):
                    for a1, w1 in self._weights(m + 1):
                        if a0 == a1:
                            continue
                        acc += w0 * w1 * self.path_sum(f, a0 * self.k, a1 * self.k)
                vals.append(acc)
            assert vals[0] == vals[1], "cone average must be deck invariant"
            sign, idx = self.base_edge(r)
            if vals[0] != 0:
                coeffs[idx] = coeffs.get(idx, Fraction(0)) + sign * vals[0]
        return Cochain(1, coeffs)


def cohomologous_witness(K: OrientedComplex, f: Cochain, g: Cochain) -> Cochain:
    """A primitive eta with delta(eta) = f - g, found by exact linear solve.

    Raises PreconditionError when none exists (the classes differ).
    """
    if f.degree != g.degree:
        raise DegreeError("cochains must share a degree")
    n = f.degree
    if n == 0:
        raise DegreeError("degree-0 cochains have no primitives")
    rows = []
    rhs = []
    diff = f - g
    for s in range(K.n_simplices(n)):
        rows.append(dict(simplex_boundary(K, n, s).coeffs))
        rhs.append(diff.get(s))
    sol = solve_sparse_linear(rows, rhs, K.n_simplices(n - 1))
    if sol is None:
        raise PreconditionError("cochains are not cohomologous (no primitive exists)")
    eta = Cochain(n - 1, {u: q for u, q in enumerate(sol) if q != 0})
    assert coboundary(K, eta) == Cochain(n, diff.coeffs), "solver must verify"
    return eta


# ---------------------------------------------------------------------------
# degree-one constructions

def path_primitive(K: OrientedComplex, f: Cochain, base_vertex: int = 0) -> Cochain:
    """A primitive F of a 1-cochain along spanning-tree paths: F(q) is f
    summed over the tree path from the base vertex; exactness delta F = f
    holds iff f vanishes on the fundamental cycle basis (checked).
    """
    if f.degree != 1:
        raise DegreeError("expected a 1-cochain")
    nv = K.n_vertices
    adjacency = {v: [] for v in range(nv)}
    for i in range(K.n_simplices(1)):
        a, b = K.simplex(1, i)
        adjacency[a].append((b, i, 1))
        adjacency[b].append((a, i, -1))
    values = {base_vertex: Fraction(0)}
    tree_edges = set()
    queue = [base_vertex]
    while queue:
        v = queue.pop(0)
        for w, i, sign in adjacency[v]:
            if w not in values:
                values[w] = values[v] + sign * f.get(i)
                tree_edges.add(i)
                queue.append(w)
    if len(values) != nv:
        raise PreconditionError("complex is not connected")
    bad = []
    for i in range(K.n_simplices(1)):
        if i in tree_edges:
            continue
        a, b = K.simplex(1, i)
        residual = f.get(i) - (values[b] - values[a])
        if residual != 0:
            bad.append((list(K.simplex(1, i)), rat_str(residual)))
    if bad:
        raise PreconditionError(
            f"1-cochain pairs nontrivially with fundamental cycles: {bad}")
    F = Cochain(0, {K.vertex_index(v): q for v, q in values.items()})
    assert coboundary(K, F) == Cochain(1, f.coeffs)
    return F


def averaged_primitive(C: CoveringDatum, F: Cochain, base_vertex: int | None = None,
                       bruhat: BruhatFunction | None = None):
    """Split a primitive of an invariant 1-coboundary into an averaged part
    and a deck-invariant correction.

    Given F with delta(F) deck invariant (equivalently: F(g x) - F(x) does
    not depend on x; checked), returns (F_c, k) where
    F_c(x) = sum_g h(g^-1 x) F(g x0) and k = F - F_c descends to the base.
    """
    if F.degree != 0:
        raise DegreeError("expected a 0-cochain on the total space")
    t = C.total
    h = bruhat or BruhatFunction.indicator(C)
    x0 = min(C.domain) if base_vertex is None else base_vertex
    value = lambda f, x: f.get(t.vertex_index(x))
    for a in range(len(C.deck)):
        g = C.deck[a]
        diffs = {value(F, g[x]) - value(F, x) for x in range(t.n_vertices)}
        if len(diffs) != 1:
            raise PreconditionError(
                "F(g x) - F(x) depends on x: the coboundary is not deck invariant")
    fc = {}
    for x in range(t.n_vertices):
        acc = Fraction(0)
        for a in range(len(C.deck)):
            w = h(C.deck[C.inv(a)][x])
            if w != 0:
                acc += w * value(F, C.deck[a][x0])
        if acc != 0:
            fc[t.vertex_index(x)] = acc
    F_c = Cochain(0, fc)
    k_total = F - F_c
    for a in range(len(C.deck)):
        if C.act_cochain(a, Cochain(0, k_total.coeffs)) != Cochain(0, k_total.coeffs):
            raise AssertionError("correction term must be deck invariant")
    k_base = {}
    for x in range(t.n_vertices):
        v = value(k_total, x)
        b = C.projection[x]
        if b in k_base:
            assert k_base[b] == v, "invariant cochain must descend"
        else:
            k_base[b] = v
    k = Cochain(0, {C.base.vertex_index(b): q for b, q in k_base.items() if q != 0})
    f_tilde = coboundary(t, Cochain(0, F.coeffs))
    recomposed = C.lift_cochain(coboundary(C.base, k)) + coboundary(t, F_c)
    assert Cochain(1, recomposed.coeffs) == f_tilde
    return F_c, k


def line_averaged_primitive(line: LineCovering, f: Cochain, window: int = 3):
    """The averaging construction on the line family, where the primitive
    genuinely fails to be invariant (its winding grows along the line).

    f is a 1-cochain on the base circle; F integrates its lift from vertex
    0.  Returns (F_c values on the window, k as a base cochain); exactness
    and deck invariance of k are asserted over the window.
    """
    if f.degree != 1:
        raise DegreeError("expected a base 1-cochain")
    k = line.k

    def F(m):
        return line.path_sum(f, 0, m)

    def F_c(m):
        return sum((w * F(a * k) for a, w in line._weights(m)), Fraction(0))

    corr = {}
    for m in range(-window * k, window * k + 1):
        val = F(m) - F_c(m)
        r = m % k
        if r in corr:
            assert corr[r] == val, "correction must be deck invariant"
        else:
            corr[r] = val
    # delta(F_c) recovers the lift of f minus the descended correction
    for m in range(-window * k, window * k):
        lhs = F_c(m + 1) - F_c(m)
        rhs = line.lift_value(f, m) - (corr[(m + 1) % k] - corr[m % k])
        assert lhs == rhs
    base_vertex_index = {r: line.base.index_of(0, (r,)) for r in range(k)}
    k_cochain = Cochain(0, {base_vertex_index[r]: q for r, q in corr.items() if q != 0})
    fc_values = {m: F_c(m) for m in range(-window * k, window * k + 1)}
    return fc_values, k_cochain


# ---------------------------------------------------------------------------
# transfer and restriction

class IsometryGroupDatum:
    """A finite symmetry group G of the total complex with a freely acting
    subgroup Gamma and a fundamental region of coset representatives,
    uniformly weighted with total mass one."""

    def __init__(self, total: OrientedComplex, group_generators, gamma_generators,
                 cap: int = DECK_CAP):
        self.total = total
        self.group = _close_perms(total, group_generators, cap)
        self.index = {g: i for i, g in enumerate(self.group)}
        gamma = _close_perms(total, gamma_generators, cap)
        for g in gamma:
            if g not in self.index:
                raise PreconditionError("gamma is not a subgroup of the symmetry group")
        self.gamma = tuple(self.index[g] for g in gamma)
        ident = tuple(range(total.n_vertices))
        for gi in self.gamma:
            g = self.group[gi]
            if g != ident and any(g[v] == v for v in range(total.n_vertices)):
                raise PreconditionError("gamma does not act freely on vertices")
        for g in self.group:
            for d in range(total.dim + 1):
                for i in range(total.n_simplices(d)):
                    if map_simplex(total, total, g, d, i) is None:
                        raise PreconditionError("symmetry degenerates a simplex")
        # fundamental region: first representative of each right coset Gamma g
        self.region = []
        seen = set()
        for i, g in enumerate(self.group):
            coset = frozenset(self._compose(t, i) for t in self.gamma)
            if coset not in seen:
                seen.add(coset)
                self.region.append(i)
        self.weight = Fraction(1, len(self.region))

    def _compose(self, a: int, b: int) -> int:
        ga, gb = self.group[a], self.group[b]
        return self.index[tuple(ga[gb[i]] for i in range(len(ga)))]

    def act_cochain(self, i: int, f: Cochain) -> Cochain:
        g = self.group[i]
        inv = [0] * len(g)
        for v, gv in enumerate(g):
            inv[gv] = v
        return pull_cochain(self.total, self.total, inv, f, f.degree)

    def is_invariant(self, f: Cochain, subgroup=None) -> bool:
        members = range(len(self.group)) if subgroup is None else subgroup
        return all(self.act_cochain(i, f) == f for i in members)


def _close_perms(total, generators, cap):
    n = total.n_vertices
    ident = tuple(range(n))
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(n)):
            raise ParseError(f"not a vertex permutation: {g}")
        gens.append(g)
    out = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[i]] for i in range(n))
                if c not in seen:
                    seen.add(c)
                    out.append(c)
                    nxt.append(c)
                    if len(out) > cap:
                        raise CapError(f"group exceeds cap {cap}")
        frontier = nxt
    return tuple(out)


def transfer(D: IsometryGroupDatum, f: Cochain) -> Cochain:
    """Average a Gamma-invariant cochain over the fundamental region:

        tr(f)(s) = (1/|F|) sum_{g in F} f(g . s).

    The result is G-invariant, equals f when f already is, and the sup
    norm does not increase; tr commutes with the coboundary.
    """
    if not D.is_invariant(f, D.gamma):
        raise PreconditionError("cochain is not invariant under the subgroup")
    n = f.degree
    coeffs = {}
    for i in range(D.total.n_simplices(n)):
        acc = Fraction(0)
        for gi in D.region:
            sign, j = map_simplex(D.total, D.total, D.group[gi], n, i)
            acc += sign * f.get(j)
        v = D.weight * acc
        if v != 0:
            coeffs[i] = v
    out = Cochain(n, coeffs)
    assert D.is_invariant(out), "transfer must land in G-invariant cochains"
    return out


def group_average_cochain(D: IsometryGroupDatum, f: Cochain, subgroup=None) -> Cochain:
    """The projection (1/|H|) sum_h h.f onto H-invariant cochains."""
    members = list(range(len(D.group))) if subgroup is None else list(subgroup)
    acc = Cochain(f.degree)
    for i in members:
        acc = acc + D.act_cochain(i, f)
    return Cochain(f.degree, acc.scale(Fraction(1, len(members))).coeffs)


def invariant_cochain_basis(K: OrientedComplex, perms, degree: int):
    """A basis of the cochains invariant under a set of simplicial vertex
    permutations: signed orbit indicators (orbits whose sign relation is
    inconsistent carry only the zero cochain and are dropped)."""
    n = K.n_simplices(degree)
    rel_sign = {}
    orbit_of = {}
    orbits = []
    dead = set()
    for seed in range(n):
        if seed in orbit_of:
            continue
        oid = len(orbits)
        orbits.append([seed])
        orbit_of[seed] = oid
        rel_sign[seed] = 1
        queue = [seed]
        while queue:
            i = queue.pop()
            for g in perms:
                sign, j = map_simplex(K, K, g, degree, i)
                want = rel_sign[i] * sign
                if j in orbit_of:
                    if rel_sign[j] != want:
                        dead.add(oid)
                else:
                    orbit_of[j] = oid
                    rel_sign[j] = want
                    orbits[oid].append(j)
                    queue.append(j)
    basis = []
    for oid, members in enumerate(orbits):
        if oid in dead:
            continue
        basis.append(Cochain(degree, {i: rel_sign[i] for i in members}))
    return basis


def seminorm_over_subspace(K: OrientedComplex, f: Cochain, eta_basis) -> tuple:
    """min ||f + delta(eta)||_inf with eta restricted to a given span."""
    n = f.degree
    deltas = [coboundary(K, e) for e in eta_basis]
    q = len(deltas)
    rows = []
    for s in range(K.n_simplices(n)):
        a = [d.get(s) for d in deltas] + [Fraction(-1)]
        rows.append((a, LE, -f.get(s)))
        rows.append(([-x for x in a[:q]] + [Fraction(-1)], LE, f.get(s)))
    objective = [Fraction(0)] * q + [Fraction(1)]
    nonneg = [False] * q + [True]
    cert = lp_solve(LPProblem("min", objective, rows, nonneg))
    assert cert.status == "optimal"
    return cert.value, cert


def restriction_isometry_report(D: IsometryGroupDatum, f: Cochain) -> dict:
    """Seminorm of a G-invariant cocycle class inside the G-invariant
    complex and inside the Gamma-invariant complex; the two exact LP
    optima are asserted equal (restriction is isometric: inclusion gives
    one inequality, the norm-nonincreasing transfer the other)."""
    K = D.total
    n = f.degree
    if not D.is_invariant(f):
        raise PreconditionError("cochain is not G-invariant")
    if n < K.dim and not coboundary(K, f).is_zero():
        raise PreconditionError("cochain is not a cocycle")
    if n == 0:
        g_basis, gamma_basis = [], []
    else:
        g_basis = invariant_cochain_basis(K, [D.group[i] for i in range(len(D.group))],
                                          n - 1)
        gamma_basis = invariant_cochain_basis(K, [D.group[i] for i in D.gamma], n - 1)
    val_g, cert_g = seminorm_over_subspace(K, f, g_basis)
    val_gamma, cert_gamma = seminorm_over_subspace(K, f, gamma_basis)
    assert val_g == val_gamma, "restriction must be isometric on invariant classes"
    return {
        "degree": n,
        "seminorm_G_invariant": val_g,
        "seminorm_subgroup_invariant": val_gamma,
        "certificates": (cert_g, cert_gamma),
    }
