"""Group cohomology of finite groups over the bar resolution.

Cochains in degree n are dense rational arrays on G^{n+1} with the left
translation action; the differential is the alternating-sum coboundary.
For a finite group every cochain is bounded, so the bounded and unbounded
theories coincide; the two pipelines here compute ranks and canonical
seminorms along genuinely different routes (orbit coordinates vs dense
arrays) and their agreement is asserted by the tests.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .core import CapError, ParseError, PreconditionError, rat, rat_str, rank_sparse
from .seminorm import LE, EQ, LPProblem, lp_solve

DEGREE_CAP = 3
ENTRY_CAP = 20736  # |G|^(n+1) entries per dense cochain
ORDER_CAP = 64


class FiniteGroup:
    """A finite group as a verified multiplication table."""

    def __init__(self, table, name: str = ""):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name or f"group{self.order}"
        n = self.order
        if any(len(row) != n for row in self.table):
            raise ParseError("multiplication table is not square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise ParseError("table entries out of range")
        identity = None
        for e in range(n):
            if all(self.table[e][a] == a == self.table[a][e] for a in range(n)):
                identity = e
                break
        if identity is None:
            raise ParseError("no identity element")
        self.identity = identity
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == identity and self.table[b][a] == identity:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ParseError(f"element {a} has no inverse")
        self.inverse = tuple(inv)
        for a in range(n):
            for b in range(n):
                tab_ab = self.table[a][b]
                for c in range(n):
                    if self.table[tab_ab][c] != self.table[a][self.table[b][c]]:
                        raise ParseError("multiplication is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def elements(self):
        return range(self.order)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- constructors --------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, name=f"Z{n}")

    @classmethod
    def from_permutations(cls, degree: int, generators, cap: int = ORDER_CAP,
                          name: str = "") -> "FiniteGroup":
        """Close permutation generators under composition (order capped)."""
        ident = tuple(range(degree))
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(degree)):
                raise ParseError(f"not a permutation of 0..{degree - 1}: {g}")
            gens.append(g)
        elements = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = tuple(a[g[i]] for i in range(degree))
                    if c not in seen:
                        seen.add(c)
                        elements.append(c)
                        nxt.append(c)
                        if len(elements) > cap:
                            raise CapError(f"group closure exceeds cap {cap}")
            frontier = nxt
        index = {p: i for i, p in enumerate(elements)}
        table = [[index[tuple(a[b[i]] for i in range(degree))] for b in elements]
                 for a in elements]
        G = cls(table, name=name or f"perm{len(elements)}")
        G.permutations = tuple(elements)
        return G

    @classmethod
    def symmetric3(cls) -> "FiniteGroup":
        return cls.from_permutations(3, [(1, 0, 2), (1, 2, 0)], name="S3")

    @classmethod
    def from_dict(cls, data: dict, cap: int = ORDER_CAP) -> "FiniteGroup":
        """Load a multiplication table or permutation generators."""
        if not isinstance(data, dict):
            raise ParseError("group file must be a JSON object")
        if "table" in data:
            try:
                order = int(data.get("order", len(data["table"])))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad order field: {exc}") from exc
            table = data["table"]
            if len(table) != order:
                raise ParseError("order does not match table size")
            if order > cap:
                raise CapError(f"group order {order} exceeds cap {cap}")
            return cls(table)
        if "generators" in data:
            try:
                degree = int(data["degree"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError("permutation groups need a 'degree'") from exc
            return cls.from_permutations(degree, data["generators"], cap=cap)
        raise ParseError("group file needs 'table' or 'generators'")


# ---------------------------------------------------------------------------
# bar cochains

class BarCochain:
    """A dense rational function on G^{degree+1}."""

    def __init__(self, group: FiniteGroup, degree: int, values):
        self.group = group
        self.degree = int(degree)
        size = group.order ** (self.degree + 1)
        if size > ENTRY_CAP:
            raise CapError(f"{size} entries exceed the dense cochain cap {ENTRY_CAP}")
        self.values = tuple(rat(v) for v in values)
        assert len(self.values) == size

    @classmethod
    def zero(cls, group, degree):
        return cls(group, degree, [Fraction(0)] * (group.order ** (degree + 1)))

    @classmethod
    def constant(cls, group, t, degree: int = 0):
        return cls(group, degree, [rat(t)] * (group.order ** (degree + 1)))

    @classmethod
    def from_function(cls, group, degree, fn):
        vals = [fn(t) for t in product(group.elements(), repeat=degree + 1)]
        return cls(group, degree, vals)

    def pack(self, t) -> int:
        idx = 0
        for g in t:
            idx = idx * self.group.order + g
        return idx

    def value(self, t) -> Fraction:
        return self.values[self.pack(t)]

    def sup_norm(self) -> Fraction:
        return max((abs(v) for v in self.values), default=Fraction(0))

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        return (isinstance(other, BarCochain) and self.group is other.group
                and self.degree == other.degree and self.values == other.values)

    def __add__(self, other):
        assert self.degree == other.degree and self.group is other.group
        return BarCochain(self.group, self.degree,
                          [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        q = rat(q)
        return BarCochain(self.group, self.degree, [q * v for v in self.values])

    def act(self, g: int) -> "BarCochain":
        """(g.f)(g0, ..., gn) = f(g^-1 g0, ..., g^-1 gn)."""
        G = self.group
        ginv = G.inv(g)
        vals = [self.value(tuple(G.mul(ginv, x) for x in t))
                for t in product(G.elements(), repeat=self.degree + 1)]
        return BarCochain(G, self.degree, vals)

    def is_invariant(self) -> bool:
        return all(self.act(g) == self for g in self.group.elements())


def bar_differential(f: BarCochain) -> BarCochain:
    """The alternating sum over argument deletions; squares to zero and
    commutes with the group action."""
    G = f.group
    n = f.degree

    def fn(t):
        acc = Fraction(0)
        sign = 1
        for i in range(n + 2):
            acc += sign * f.value(t[:i] + t[i + 1:])
            sign = -sign
        return acc

    return BarCochain.from_function(G, n + 1, fn)


def bar_contracting_homotopy(f: BarCochain):
    """k(f)(g0, ..., g_{n-1}) = f(e, g0, ..., g_{n-1}); in degree 0 this is
    evaluation at the identity (a scalar).  Norm-nonincreasing, and
    delta.k + k.delta = Id in every degree of the augmented complex.
    """
    G = f.group
    if f.degree == 0:
        return f.value((G.identity,))
    return BarCochain.from_function(G, f.degree - 1,
                                    lambda t: f.value((G.identity,) + t))


# ---------------------------------------------------------------------------
# invariants in orbit coordinates (the "unbounded" route)

def _tuples(G, n):
    return list(product(G.elements(), repeat=n))


def invariant_from_coordinates(G: FiniteGroup, n: int, v: dict | list) -> BarCochain:
    """The invariant cochain with f(g0, ..., gn) = v(g0^-1 g1, ..., g0^-1 gn)."""
    reps = _tuples(G, n)
    rep_index = {t: i for i, t in enumerate(reps)}
    if isinstance(v, dict):
        vec = [rat(v.get(i, 0)) for i in range(len(reps))]
    else:
        vec = [rat(q) for q in v]

    def fn(t):
        g0inv = G.inv(t[0])
        key = tuple(G.mul(g0inv, x) for x in t[1:])
        return vec[rep_index[key]]

    return BarCochain.from_function(G, n, fn)


def invariant_delta_matrix(G: FiniteGroup, n: int):
    """The differential on invariants in orbit coordinates, as sparse
    columns: image of the j-th degree-n coordinate vector in degree n+1."""
    reps_in = _tuples(G, n)
    idx_in = {t: j for j, t in enumerate(reps_in)}
    reps_out = _tuples(G, n + 1)
    cols = [dict() for _ in reps_in]
    for i_out, t in enumerate(reps_out):
        full = (G.identity,) + t
        sign = 1
        for i in range(n + 2):
            sub = full[:i] + full[i + 1:]
            g0inv = G.inv(sub[0])
            key = tuple(G.mul(g0inv, x) for x in sub[1:])
            j = idx_in[key]
            cols[j][i_out] = cols[j].get(i_out, Fraction(0)) + sign
            if cols[j][i_out] == 0:
                del cols[j][i_out]
            sign = -sign
    return cols


def _nullspace(columns, n_rows, n_cols):
    """Null space basis of the matrix with the given sparse columns."""
    # build dense rows for a small system; dims here are at most a few hundred
    rows = [[Fraction(0)] * n_cols for _ in range(n_rows)]
    for j, col in enumerate(columns):
        for i, q in col.items():
            rows[i][j] = q
    pivots = []
    r = 0
    for c in range(n_cols):
        sel = None
        for i in range(r, n_rows):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][c]
        rows[r] = [q / piv for q in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [q - f * p for q, p in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for c in free:
        vec = [Fraction(0)] * n_cols
        vec[c] = Fraction(1)
        for rr, pc in enumerate(pivots):
            vec[pc] = -rows[rr][c]
        basis.append(vec)
    return basis


def _quotient_representatives(kernel_basis, image_columns, n_dim):
    """Kernel vectors that are independent modulo the image."""
    pivots: dict[int, list] = {}

    def reduce(vec):
        vec = list(vec)
        for j in sorted(pivots):
            if vec[j] != 0:
                f = vec[j] / pivots[j][j]
                vec = [q - f * p for q, p in zip(vec, pivots[j])]
        return vec

    def insert(vec):
        vec = reduce(vec)
        for j in range(n_dim):
            if vec[j] != 0:
                pivots[j] = vec
                return True
        return False

    for col in image_columns:
        dense = [Fraction(0)] * n_dim
        for i, q in col.items():
            dense[i] = q
        insert(dense)
    out = []
    for vec in kernel_basis:
        if insert(list(vec)):
            out.append(vec)
    return out


class GroupCohomology:
    """Rank and canonical seminorm data for one degree."""

    def __init__(self, group, degree, rank, seminorms, metadata):
        self.group = group
        self.degree = degree
        self.rank = rank
        self.seminorms = seminorms  # list of (coordinates, Fraction) per basis class
        self.metadata = metadata

    def to_dict(self):
        return {
            "group": self.group.name,
            "degree": self.degree,
            "rank": self.rank,
            "seminorms": [rat_str(s) for _, s in self.seminorms],
            "metadata": self.metadata,
        }


def _check_caps(G, n, degree_cap):
    if n > degree_cap:
        raise CapError(f"degree {n} exceeds the configured cap {degree_cap}")
    if G.order ** (n + 2) > ENTRY_CAP * G.order:
        raise CapError(f"|G|^{n + 2} too large for dense bar cochains")


def group_cohomology(G: FiniteGroup, n: int, degree_cap: int = DEGREE_CAP) -> GroupCohomology:
    """Rank of H^n of the invariant bar complex, plus the canonical
    seminorm of each basis class, in orbit coordinates."""
    if n < 0:
        raise PreconditionError("negative degree")
    _check_caps(G, n, degree_cap)
    metadata = {
        "route": "orbit-coordinates",
        "contracting_homotopy": "identity-insertion",
    }
    dim_n = G.order ** n
    cols_n = invariant_delta_matrix(G, n)
    kernel = _nullspace(cols_n, G.order ** (n + 1), dim_n)
    if n == 0:
        classes = kernel
        rank = len(kernel)
    else:
        cols_prev = invariant_delta_matrix(G, n - 1)
        rank = len(kernel) - rank_sparse(cols_prev)
        classes = _quotient_representatives(kernel, cols_prev, dim_n)
        assert len(classes) == rank
    seminorms = []
    for vec in classes:
        seminorms.append((vec, _canonical_seminorm_orbit(G, n, vec)))
    return GroupCohomology(G, n, rank, seminorms, metadata)


def _canonical_seminorm_orbit(G, n, vec) -> Fraction:
    """min ||f + delta(eta)||_inf with everything in orbit coordinates.

    Constraints range over degree-n orbit representatives; the sup norm of
    an invariant cochain is attained on representatives.
    """
    reps = _tuples(G, n)
    if n == 0:
        # no coboundaries below degree 0 in the invariant complex
        return max((abs(q) for q in vec), default=Fraction(0))
    cols = invariant_delta_matrix(G, n - 1)  # (dim reps) x (|G|^{n-1})
    q_dim = G.order ** (n - 1)
    n_vars = q_dim + 1
    rows = []
    for i in range(len(reps)):
        a = [Fraction(0)] * n_vars
        for j, col in enumerate(cols):
            if i in col:
                a[j] = col[i]
        a[q_dim] = Fraction(-1)
        rows.append((a, LE, -vec[i]))
        rows.append(([-x if k < q_dim else x for k, x in enumerate(a)], LE, vec[i]))
    objective = [Fraction(0)] * q_dim + [Fraction(1)]
    nonneg = [False] * q_dim + [True]
    cert = lp_solve(LPProblem("min", objective, rows, nonneg))
    assert cert.status == "optimal"
    return cert.value


def bounded_group_cohomology(G: FiniteGroup, n: int,
                             degree_cap: int = DEGREE_CAP) -> GroupCohomology:
    """The same invariants computed on dense sup-normed arrays: explicit
    orbit-indicator basis, dense differentials, norm constraints over all
    of G^{n+1}.  For a finite group this agrees with `group_cohomology`
    rank-for-rank and seminorm-for-seminorm."""
    if n < 0:
        raise PreconditionError("negative degree")
    _check_caps(G, n, degree_cap)
    metadata = {
        "route": "dense-arrays",
        "contracting_homotopy": "identity-insertion",
    }
    reps_n = _tuples(G, n)
    basis = [invariant_from_coordinates(G, n, {j: 1}) for j in range(len(reps_n))]
    for f in basis:
        assert f.sup_norm() < Fraction(10 ** 9), "dense cochain is bounded"
        assert f.is_invariant()
    # differential in the indicator basis: coefficients are values at reps
    reps_up = _tuples(G, n + 1)
    cols_n = []
    for f in basis:
        df = bar_differential(f)
        col = {}
        for i, t in enumerate(reps_up):
            v = df.value((G.identity,) + t)
            if v != 0:
                col[i] = v
        cols_n.append(col)
    kernel = _nullspace(cols_n, len(reps_up), len(basis))
    if n == 0:
        classes = kernel
        rank = len(kernel)
    else:
        reps_prev = _tuples(G, n - 1)
        basis_prev = [invariant_from_coordinates(G, n - 1, {j: 1})
                      for j in range(len(reps_prev))]
        cols_prev = []
        for f in basis_prev:
            df = bar_differential(f)
            col = {}
            for i, t in enumerate(reps_n):
                v = df.value((G.identity,) + t)
                if v != 0:
                    col[i] = v
            cols_prev.append(col)
        rank = len(kernel) - rank_sparse(cols_prev)
        classes = _quotient_representatives(kernel, cols_prev, len(basis))
        assert len(classes) == rank
    seminorms = []
    for vec in classes:
        f = invariant_from_coordinates(G, n, {j: q for j, q in enumerate(vec)})
        seminorms.append((vec, _canonical_seminorm_dense(G, f)))
    return GroupCohomology(G, n, rank, seminorms, metadata)


def _canonical_seminorm_dense(G, f: BarCochain) -> Fraction:
    n = f.degree
    if n == 0:
        return f.sup_norm()
    q_dim = G.order ** (n - 1)
    basis_prev = [invariant_from_coordinates(G, n - 1, {j: 1}) for j in range(q_dim)]
    deltas = [bar_differential(h) for h in basis_prev]
    n_vars = q_dim + 1
    rows = []
    for idx, t in enumerate(product(G.elements(), repeat=n + 1)):
        a = [d.value(t) for d in deltas] + [Fraction(-1)]
        rows.append((a, LE, -f.value(t)))
        rows.append(([-x for x in a[:-1]] + [Fraction(-1)], LE, f.value(t)))
    objective = [Fraction(0)] * q_dim + [Fraction(1)]
    nonneg = [False] * q_dim + [True]
    cert = lp_solve(LPProblem("min", objective, rows, nonneg))
    assert cert.status == "optimal"
    return cert.value


# ---------------------------------------------------------------------------
# extension of the identity to a chain map into the bar resolution

class BarResolution:
    """The standard resolution packaged for the extension recursion:
    degree -1 holds scalars, degree n holds dense cochains on G^{n+1}."""

    def __init__(self, group: FiniteGroup):
        self.group = group

    def act(self, g, v, degree):
        if degree == -1:
            return rat(v)
        return v.act(g)

    def differential(self, v, degree):
        if degree == -1:
            return BarCochain.constant(self.group, v, degree=0)
        return bar_differential(v)

    def homotopy(self, v, degree):
        assert degree >= 0
        return bar_contracting_homotopy(v)

    def norm(self, v, degree):
        if degree == -1:
            return abs(rat(v))
        return v.sup_norm()

    def key(self, v, degree):
        if degree == -1:
            return ("scalar", rat(v))
        return ("cochain", v.values)


def resolution_to_bar_map(E, v, n: int, _memo=None) -> BarCochain | Fraction:
    """Extend the identity on scalars to a chain map into the bar
    resolution, one degree at a time:

        out(v)(g0, ..., gn) = out(g0 . k(g0^-1 . v))(g1, ..., gn)

    where k is the declared contracting homotopy of E.  The result is a
    chain map and is norm-nonincreasing whenever k is.
    """
    G = E.group
    if _memo is None:
        _memo = {}
    if n == -1:
        return rat(v)
    key = (n, E.key(v, n))
    if key in _memo:
        return _memo[key]
    subs = []
    for g0 in G.elements():
        w = E.act(g0, E.homotopy(E.act(G.inv(g0), v, n), n), n - 1)
        subs.append(resolution_to_bar_map(E, w, n - 1, _memo))
    if n == 0:
        out = BarCochain(G, 0, [rat(s) for s in subs])
    else:
        size = G.order ** n
        vals = []
        for g0 in G.elements():
            vals.extend(subs[g0].values)
        out = BarCochain(G, n, vals)
    _memo[key] = out
    return out
