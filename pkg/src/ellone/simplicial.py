"""Barycentric subdivision calculus with exact chain homotopies.

The subdivision of a simplex mixes barycenters with original vertices, so
its pieces are not simplices of the underlying complex.  We therefore run
the operators on *affine tuple chains*: formal sums of tuples of exact
barycentric points whose joint support (the carrier) is a simplex of the
complex.  In this model the subdivision operator, its prism homotopy, the
cover-relative operators and the cone homotopies are all closed and their
identities hold exactly.

A separate, model-changing construction (`subdivide_complex`) produces the
barycentric subdivision as a new OrientedComplex together with the chain
map into it; that is what counting, rank work and the benchmark use.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import (
    CapError,
    Chain,
    ChainOperator,
    Cochain,
    DegreeError,
    OrientedComplex,
    ParseError,
    PreconditionError,
    rat,
    rat_str,
)


class CoverError(PreconditionError):
    """The family of sets is not an open cover of the complex."""


# ---------------------------------------------------------------------------
# affine points and tuple chains

class Point:
    """An exact rational point of the realized complex, in barycentric
    coordinates over the original vertices (positive entries summing to 1)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        items = tuple(sorted((int(v), rat(q)) for v, q in dict(coords).items() if rat(q) != 0))
        assert items, "a point needs at least one positive coordinate"
        assert all(q > 0 for _, q in items), "barycentric coordinates must be positive"
        assert sum(q for _, q in items) == 1, "barycentric coordinates must sum to 1"
        object.__setattr__(self, "coords", items)

    def __setattr__(self, *a):
        raise AttributeError("Point is immutable")

    @classmethod
    def vertex(cls, v: int) -> "Point":
        return cls({v: Fraction(1)})

    @property
    def support(self) -> tuple:
        return tuple(v for v, _ in self.coords)

    def is_vertex(self):
        return len(self.coords) == 1

    def uniform_face(self):
        """The face this point is the barycenter of, or None."""
        q0 = self.coords[0][1]
        if all(q == q0 for _, q in self.coords):
            return self.support
        return None

    def __eq__(self, other):
        return isinstance(other, Point) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "Pt(" + ", ".join(f"{v}:{rat_str(q)}" for v, q in self.coords) + ")"


def barycenter(points) -> Point:
    """The average of a tuple of points."""
    points = tuple(points)
    n = len(points)
    acc: dict[int, Fraction] = {}
    for p in points:
        for v, q in p.coords:
            acc[v] = acc.get(v, Fraction(0)) + q
    return Point({v: q / n for v, q in acc.items()})


def carrier(simplex) -> frozenset:
    """Union of the supports of the points of an affine tuple."""
    out = set()
    for p in simplex:
        out.update(p.support)
    return frozenset(out)


class TupleChain:
    """A finite formal sum of affine tuples in one degree."""

    def __init__(self, degree: int, coeffs=None):
        self.degree = int(degree)
        out = {}
        for s, q in (coeffs or {}).items():
            q = rat(q)
            if q == 0:
                continue
            s = tuple(s)
            assert len(s) == self.degree + 1
            out[s] = q
        self.coeffs = out

    @classmethod
    def single(cls, simplex, coeff=1):
        simplex = tuple(simplex)
        return cls(len(simplex) - 1, {simplex: coeff})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, TupleChain) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        assert self.degree == other.degree
        out = dict(self.coeffs)
        for s, q in other.coeffs.items():
            q2 = out.get(s, Fraction(0)) + q
            if q2 == 0:
                out.pop(s, None)
            else:
                out[s] = q2
        return TupleChain(self.degree, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, q):
        q = rat(q)
        if q == 0:
            return TupleChain(self.degree)
        return TupleChain(self.degree, {s: q * v for s, v in self.coeffs.items()})

    def simplices(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"TupleChain(deg={self.degree}, {len(self.coeffs)} terms)"


def tuple_boundary(c: TupleChain) -> TupleChain:
    """Alternating face-deletion boundary on tuple chains."""
    out: dict = {}
    for s, q in c.coeffs.items():
        sign = 1
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            q2 = out.get(face, Fraction(0)) + sign * q
            if q2 == 0:
                out.pop(face, None)
            else:
                out[face] = q2
            sign = -sign
    return TupleChain(c.degree - 1, out)


def chain_to_tuples(K: OrientedComplex, c: Chain) -> TupleChain:
    """View an indexed chain of K as an affine tuple chain."""
    out = {}
    for i, q in c.coeffs.items():
        s = K.simplex(c.degree, i)
        out[tuple(Point.vertex(v) for v in s)] = q
    return TupleChain(c.degree, out)


def _as_tuple_chain(K, c):
    if isinstance(c, TupleChain):
        return c
    if isinstance(c, Chain):
        return chain_to_tuples(K, c)
    raise DegreeError(f"expected a chain, got {type(c).__name__}")


def validate_tuple_chain(K: OrientedComplex, c: TupleChain):
    """Check that every tuple's carrier is a simplex of K."""
    for s in c.coeffs:
        car = tuple(sorted(carrier(s)))
        if not K.has_simplex(car):
            raise PreconditionError(f"carrier {car} is not a simplex of the complex")


def _cone(apex: Point, c: TupleChain) -> TupleChain:
    return TupleChain(c.degree + 1, {(apex,) + s: q for s, q in c.coeffs.items()})


@lru_cache(maxsize=None)
def _sd_tuple(s: tuple) -> TupleChain:
    if len(s) == 1:
        return TupleChain.single(s)
    b = barycenter(s)
    return _cone(b, _sd_chain(tuple_boundary(TupleChain.single(s))))


def _sd_chain(c: TupleChain) -> TupleChain:
    out = TupleChain(c.degree)
    for s, q in c.coeffs.items():
        out = out + _sd_tuple(s).scale(q)
    return out


@lru_cache(maxsize=None)
def _prism_tuple(s: tuple) -> TupleChain:
    # D with d.D + D.d = sd - Id; on degree 0 it vanishes
    if len(s) == 1:
        return TupleChain(1)
    b = barycenter(s)
    inner = TupleChain.single(s) + _prism_chain(tuple_boundary(TupleChain.single(s)))
    return _cone(b, inner).scale(-1)


def _prism_chain(c: TupleChain) -> TupleChain:
    out = TupleChain(c.degree + 1)
    for s, q in c.coeffs.items():
        out = out + _prism_tuple(s).scale(q)
    return out


def subdivide_chain(K: OrientedComplex, c) -> TupleChain:
    """Barycentric subdivision of a chain, as an affine tuple chain.

    Commutes with the boundary exactly.
    """
    return _sd_chain(_as_tuple_chain(K, c))


def prism(K: OrientedComplex, c) -> TupleChain:
    """The prism homotopy D with d.D + D.d = subdivision - identity, exactly."""
    return _prism_chain(_as_tuple_chain(K, c))


def iterate_subdivision(K: OrientedComplex, c, rounds: int) -> TupleChain:
    out = _as_tuple_chain(K, c)
    for _ in range(rounds):
        out = _sd_chain(out)
    return out


# ---------------------------------------------------------------------------
# open covers and the subdivide-until-small machinery

class OpenCover:
    """A combinatorial open cover: named, upward-closed sets of simplices.

    A set of simplices that is closed under passing to cofaces is the
    exact trace of an open union of open simplices (e.g. an open vertex
    star, or the complement of a subcomplex).  A closed affine tuple lies
    inside such a set iff the support of each of its points does.
    """

    def __init__(self, K: OrientedComplex, sets: dict):
        self.K = K
        self.sets = {}
        for name, members in sets.items():
            closed = self._up_closure(members)
            if not closed:
                raise CoverError(f"cover set {name!r} is empty")
            self.sets[str(name)] = closed
        if not self.sets:
            raise CoverError("a cover needs at least one set")

    def _up_closure(self, members) -> frozenset:
        base = set()
        for m in members:
            d, i = m
            base.add(self.K.simplex(d, i))
        out = set()
        for d in range(self.K.dim + 1):
            for s in self.K.simplices[d]:
                sset = set(s)
                if any(sset >= set(b) for b in base):
                    out.add((d, self.K.index_of(d, s)))
        return frozenset(out)

    def covers_complex(self) -> bool:
        union = set()
        for members in self.sets.values():
            union.update(members)
        total = sum(len(dim_list) for dim_list in self.K.simplices)
        return len(union) == total

    def require_covering(self):
        if not self.covers_complex():
            raise CoverError("the sets do not cover the complex")

    def _face_key(self, vertices) -> tuple:
        s = tuple(sorted(vertices))
        d = len(s) - 1
        return d, self.K.index_of(d, s)

    def set_contains_tuple(self, name: str, simplex) -> bool:
        members = self.sets[name]
        return all(self._face_key(p.support) in members for p in simplex)

    def is_small_tuple(self, simplex) -> bool:
        return any(self.set_contains_tuple(name, simplex) for name in self.sets)

    def is_small_chain(self, c) -> bool:
        """True when every tuple of the chain lies in one cover set."""
        if isinstance(c, TupleChain):
            return all(self.is_small_tuple(s) for s in c.coeffs)
        if isinstance(c, Chain):
            return self.is_small_chain(chain_to_tuples(self.K, c))
        return self.is_small_tuple(c)

    @classmethod
    def from_dict(cls, K: OrientedComplex, data: dict) -> "OpenCover":
        """Load `{"sets": {"U0": [global-simplex-ids], ...}}`.

        Entries are dimension-major global simplex ids; each set is closed
        upward on load, so listing a vertex yields its open star.
        """
        if not isinstance(data, dict) or "sets" not in data:
            raise ParseError("cover file needs a 'sets' object")
        sets = {}
        for name, ids in data["sets"].items():
            if not isinstance(ids, list):
                raise ParseError(f"cover set {name!r} must be a list of simplex ids")
            sets[name] = [K.resolve_global(int(g)) for g in ids]
        return cls(K, sets)

    @classmethod
    def whole(cls, K: OrientedComplex) -> "OpenCover":
        members = [(d, i) for d in range(K.dim + 1) for i in range(K.n_simplices(d))]
        return cls(K, {"all": members})

    @classmethod
    def star_cover(cls, K: OrientedComplex) -> "OpenCover":
        """Open stars of all vertices; the canonical finest cover."""
        return cls(K, {f"star{v}": [(0, K.index_of(0, (v,)))] for v in range(K.n_vertices)})

    @classmethod
    def punctured_pair(cls, K: OrientedComplex, v: int, w: int) -> "OpenCover":
        """Complements of two distinct vertices (open, and covering)."""
        assert v != w
        sets = {}
        for name, missing in ((f"no{v}", (v,)), (f"no{w}", (w,))):
            members = []
            for d in range(K.dim + 1):
                for i, s in enumerate(K.simplices[d]):
                    if s != missing:
                        members.append((d, i))
            sets[name] = members
        return cls(K, sets)


DEFAULT_SUBDIV_CAP = 20


def smallness_depth(K: OrientedComplex, cover: OpenCover, s, cap: int = DEFAULT_SUBDIV_CAP) -> int:
    """Minimal number of barycentric subdivisions after which every piece
    of the simplex lies in a single cover set.

    Raises CoverError when the sets do not cover the complex, CapError when
    the cap is exceeded (the minimum exists but no a-priori bound is known).
    """
    cover.require_covering()
    if isinstance(s, Chain):
        s = chain_to_tuples(K, s)
    if isinstance(s, TupleChain):
        return max((smallness_depth(K, cover, t, cap) for t in s.coeffs), default=0)
    c = TupleChain.single(tuple(s))
    for rounds in range(cap + 1):
        if cover.is_small_chain(c):
            return rounds
        c = _sd_chain(c)
    raise CapError(f"no smallness after {cap} subdivision rounds")


def refinement_homotopy(K: OrientedComplex, cover: OpenCover, c,
                        cap: int = DEFAULT_SUBDIV_CAP) -> TupleChain:
    """The homotopy Omega(s) = sum_{j < depth(s)} D(sd^j(s)), extended linearly."""
    cover.require_covering()
    c = _as_tuple_chain(K, c)
    out = TupleChain(c.degree + 1)
    for s, q in c.coeffs.items():
        xi = smallness_depth(K, cover, s, cap)
        piece = TupleChain.single(s)
        for _ in range(xi):
            out = out + _prism_chain(piece).scale(q)
            piece = _sd_chain(piece)
    return out


def refine_until_small(K: OrientedComplex, cover: OpenCover, c,
                       cap: int = DEFAULT_SUBDIV_CAP) -> TupleChain:
    """The chain map tau: subdivide each simplex until small, with prism
    corrections along the faces so that tau remains a chain map.

    tau(s) = sd^depth(s)(s) - sum_i (-1)^i sum_{j=depth(s_i)}^{depth(s)-1} D(sd^j(s_i)),
    and the identity tau(c) - c = d Omega(c) + Omega(d c) holds exactly.
    Simplices that are already small are fixed.
    """
    cover.require_covering()
    c = _as_tuple_chain(K, c)
    out = TupleChain(c.degree)
    for s, q in c.coeffs.items():
        xi = smallness_depth(K, cover, s, cap)
        piece = iterate_subdivision(K, TupleChain.single(s), xi)
        acc = piece
        sign = 1
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face:
                xi_face = smallness_depth(K, cover, face, cap)
                assert xi_face <= xi, "face depth exceeds simplex depth"
                fc = iterate_subdivision(K, TupleChain.single(face), xi_face)
                for _ in range(xi_face, xi):
                    acc = acc - _prism_chain(fc).scale(sign)
                    fc = _sd_chain(fc)
            sign = -sign
        out = out + acc.scale(q)
    return out


# ---------------------------------------------------------------------------
# functional cochains on the affine model, and the locally-zero operator

class RuleCochain:
    """A total functional on affine tuples of one degree, given by a rule.

    This is the right home for cochains that must be evaluated on
    subdivided chains; an indexed Cochain only knows the simplices of K.
    """

    def __init__(self, degree: int, fn, name: str = ""):
        self.degree = int(degree)
        self.fn = fn
        self.name = name

    def value(self, simplex) -> Fraction:
        simplex = tuple(simplex)
        assert len(simplex) == self.degree + 1
        return rat(self.fn(simplex))

    def evaluate(self, c: TupleChain) -> Fraction:
        if c.degree != self.degree:
            raise DegreeError(f"degree {c.degree} chain against degree {self.degree} rule")
        return sum((q * self.value(s) for s, q in c.coeffs.items()), Fraction(0))

    def coboundary(self) -> "RuleCochain":
        deg = self.degree
        return RuleCochain(
            deg + 1,
            lambda s: self.evaluate(tuple_boundary(TupleChain.single(s))),
            name=f"d({self.name})" if self.name else "",
        )

    def restrict(self, K: OrientedComplex) -> Cochain:
        """Materialize on the indexed simplices of K."""
        coeffs = {}
        for i, s in enumerate(K.simplices[self.degree]):
            v = self.value(tuple(Point.vertex(x) for x in s))
            if v != 0:
                coeffs[i] = v
        return Cochain(self.degree, coeffs)


def is_locally_zero(K: OrientedComplex, cover: OpenCover, f: RuleCochain,
                    extra_tuples=()) -> bool:
    """Check vanishing on every small simplex of K, plus any supplied tuples."""
    for i, s in enumerate(K.simplices[f.degree]):
        t = tuple(Point.vertex(x) for x in s)
        if cover.is_small_tuple(t) and f.value(t) != 0:
            return False
    for t in extra_tuples:
        if cover.is_small_tuple(t) and f.value(t) != 0:
            return False
    return True


def dual_refinement_homotopy(K: OrientedComplex, cover: OpenCover, f: RuleCochain,
                             cap: int = DEFAULT_SUBDIV_CAP) -> RuleCochain:
    """The transpose of the refinement homotopy, on locally zero cochains.

    Sends a degree-n rule f to the degree-(n-1) rule s -> f(Omega(s)).
    The output vanishes on small chains (Omega of a small simplex is 0),
    and for a locally zero cocycle f the coboundary of the output is -f.

    The local-zeroness of f is checked exhaustively on the simplices of K
    and rechecked on every small tuple the evaluation actually touches.
    """
    cover.require_covering()
    if not is_locally_zero(K, cover, f):
        raise PreconditionError("cochain does not vanish on all small simplices")

    def checked_value(s):
        v = f.value(s)
        if v != 0 and cover.is_small_tuple(s):
            raise PreconditionError("cochain is not locally zero: nonzero on a small tuple")
        return v

    checked = RuleCochain(f.degree, checked_value, name=f.name)

    def rule(s):
        return checked.evaluate(refinement_homotopy(K, cover, TupleChain.single(s), cap))

    return RuleCochain(f.degree - 1, rule, name=f"omega({f.name})" if f.name else "")


# ---------------------------------------------------------------------------
# cones

class Cone:
    """A complex that is a cone over a declared apex, with its exact
    contracting homotopy T (degree +1)."""

    def __init__(self, K: OrientedComplex, apex: int):
        self.K = K
        self.apex = int(apex)
        if not K.has_simplex((self.apex,)):
            raise PreconditionError(f"apex {apex} is not a vertex")
        for d in range(K.dim + 1):
            for s in K.simplices[d]:
                if self.apex not in s:
                    up = tuple(sorted(s + (self.apex,)))
                    if not K.has_simplex(up):
                        raise PreconditionError(
                            f"not a cone over {apex}: {up} missing for {s}")

    def homotopy(self, c: Chain) -> Chain:
        """T(c): cone each simplex to the apex (zero when it already
        contains the apex).  With the augmented boundary,
        d(T(c)) + T(d(c)) = c holds exactly in every degree."""
        out: dict[int, Fraction] = {}
        n = c.degree
        if n == -1:
            t = c.coeffs.get(0, Fraction(0))
            if t == 0:
                return Chain(0)
            return Chain(0, {self.K.index_of(0, (self.apex,)): t})
        for i, q in c.coeffs.items():
            s = self.K.simplex(n, i)
            if self.apex in s:
                continue
            up = tuple(sorted(s + (self.apex,)))
            pos = up.index(self.apex)
            j = self.K.index_of(n + 1, up)
            sign = -1 if pos % 2 else 1
            q2 = out.get(j, Fraction(0)) + sign * q
            if q2 == 0:
                out.pop(j, None)
            else:
                out[j] = q2
        return Chain(n + 1, out)

    def operator(self, n: int) -> ChainOperator:
        cols = {}
        for i in range(self.K.n_simplices(n)):
            cols[i] = self.homotopy(Chain(n, {i: 1}))
        return ChainOperator(n, n + 1, cols, name=f"cone{n}")


def cone_homotopy(cone: Cone, c: Chain) -> Chain:
    """Functional spelling of Cone.homotopy."""
    return cone.homotopy(c)


# ---------------------------------------------------------------------------
# the subdivision as a new complex (model-changing)

class SubdividedComplex:
    """The barycentric subdivision of K as a complex of its own.

    Vertices of the subdivision are the faces of K (dimension-major ids, so
    original vertices keep their ids); simplices are flags of proper
    inclusions.  `sd` is the induced chain map C_n(K) -> C_n(K'), `carrier`
    maps each flag to its top face in K.
    """

    def __init__(self, K: OrientedComplex):
        self.original = K
        self._face_id = {}
        provenance = []
        for d in range(K.dim + 1):
            for s in K.simplices[d]:
                self._face_id[s] = len(provenance)
                provenance.append(s)
        self.vertex_faces = tuple(provenance)

        flags_of: dict[tuple, list] = {}
        all_flags = []
        for d in range(K.dim + 1):
            for s in K.simplices[d]:
                own: list[tuple] = [(s,)]
                for k in range(1, d + 1):
                    for face in combinations(s, k):
                        for flag in flags_of[face]:
                            own.append(flag + (s,))
                flags_of[s] = own
                all_flags.extend(own)
        simplices = [tuple(self._face_id[f] for f in flag) for flag in all_flags]
        self.complex = OrientedComplex.from_simplices(len(provenance), simplices)
        self._carrier = {}
        for flag in all_flags:
            ids = tuple(self._face_id[f] for f in flag)
            self._carrier[ids] = flag[-1]

    def vertex_for_face(self, face: tuple) -> int:
        return self._face_id[tuple(face)]

    def carrier_of(self, d: int, i: int) -> tuple:
        """The smallest face of the original complex containing a flag simplex."""
        return self._carrier[self.complex.simplex(d, i)]

    def flatten_tuple_chain(self, c: TupleChain) -> Chain:
        """Identify a tuple chain of uniform barycenters with a chain of the
        subdivision (ascending reorder with its permutation sign)."""
        out: dict[int, Fraction] = {}
        for s, q in c.coeffs.items():
            ids = []
            for p in s:
                face = p.uniform_face()
                if face is None:
                    raise PreconditionError("tuple point is not a face barycenter")
                ids.append(self._face_id[face])
            if len(set(ids)) != len(ids):
                raise PreconditionError("degenerate tuple cannot land in the subdivision")
            order = sorted(range(len(ids)), key=lambda t: ids[t])
            sign = _permutation_sign(order)
            key = tuple(sorted(ids))
            j = self.complex.index_of(c.degree, key)
            q2 = out.get(j, Fraction(0)) + sign * q
            if q2 == 0:
                out.pop(j, None)
            else:
                out[j] = q2
        return Chain(c.degree, out)

    def sd(self, c: Chain) -> Chain:
        """The subdivision chain map C_n(K) -> C_n(subdivision)."""
        return self.flatten_tuple_chain(subdivide_chain(self.original, c))

    def sd_operator(self, n: int) -> ChainOperator:
        cols = {i: self.sd(Chain(n, {i: 1})) for i in range(self.original.n_simplices(n))}
        return ChainOperator(n, n, cols, name=f"sd{n}")

    def report(self) -> dict:
        """Vertex-id provenance and counts, for reproducible output."""
        return {
            "original_counts": self.original.counts(),
            "subdivision_counts": self.complex.counts(),
            "vertex_provenance": [list(f) for f in self.vertex_faces],
        }


def _permutation_sign(order) -> int:
    sign = 1
    order = list(order)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return sign


def subdivide_complex(K: OrientedComplex) -> SubdividedComplex:
    return SubdividedComplex(K)
