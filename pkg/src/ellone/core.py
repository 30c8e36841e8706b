"""Exact rational chain complexes on finite ordered simplicial complexes.

Everything is computed over Q with `fractions.Fraction`, so the chain
complex laws (d.d = 0, <delta f, c> = <f, d c>) are exact identities, not
floating point approximations.  All values are immutable after
construction and every operation is a pure function, so concurrent use on
shared complexes is safe.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations


class ElloneError(Exception):
    """Base error for this package."""


class ParseError(ElloneError):
    """Malformed input file or dictionary."""


class DegreeError(ElloneError):
    """Degree out of range for the complex at hand."""


class PreconditionError(ElloneError):
    """An operation's mathematical precondition does not hold."""


class CapError(ElloneError):
    """A configured resource cap was exceeded."""


# ---------------------------------------------------------------------------
# rationals

def rat(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    raise ParseError(f"cannot interpret {type(x).__name__} as a rational")


def rat_str(q: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" for integers)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# complexes

# index of the unique (-1)-simplex used by augmented complexes
EMPTY_INDEX = 0


class OrientedComplex:
    """A finite ordered simplicial complex.

    Simplices are strictly ascending tuples of vertex ids, stored per
    dimension with a fixed index assignment.  Orientation signs are the
    ones induced by the vertex order.  With ``augmented=True`` the complex
    carries a single (-1)-simplex and the degree-0 boundary becomes the
    augmentation.
    """

    def __init__(self, n_vertices: int, simplices_by_dim, augmented: bool = False):
        self.n_vertices = int(n_vertices)
        self.augmented = bool(augmented)
        self.simplices = tuple(tuple(map(tuple, dim_list)) for dim_list in simplices_by_dim)
        self.index = tuple({s: i for i, s in enumerate(dim_list)} for dim_list in self.simplices)
        self._validate()
        self._global_offsets = []
        off = 0
        for dim_list in self.simplices:
            self._global_offsets.append(off)
            off += len(dim_list)
        self.n_simplices_total = off
        self._boundary_cache = [dict() for _ in self.simplices]

    def _validate(self):
        assert self.n_vertices >= 0
        seen_vertices = set()
        for d, dim_list in enumerate(self.simplices):
            if len(set(dim_list)) != len(dim_list):
                raise ParseError(f"duplicate {d}-simplices")
            for s in dim_list:
                if len(s) != d + 1:
                    raise ParseError(f"simplex {s} listed in dimension {d}")
                if list(s) != sorted(set(s)):
                    raise ParseError(f"simplex {s} is not strictly ascending")
                if s[0] < 0 or s[-1] >= self.n_vertices:
                    raise ParseError(f"simplex {s} has vertex ids out of range")
                seen_vertices.update(s)
                if d > 0:
                    for face in combinations(s, d):
                        if face not in self.index[d - 1]:
                            raise ParseError(f"face {face} of {s} is missing")

    # -- basic queries ------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def n_simplices(self, d: int) -> int:
        if d < 0 or d > self.dim:
            return 0
        return len(self.simplices[d])

    def simplex(self, d: int, i: int) -> tuple:
        return self.simplices[d][i]

    def index_of(self, d: int, s: tuple) -> int:
        try:
            return self.index[d][tuple(s)]
        except KeyError:
            raise DegreeError(f"{tuple(s)} is not a {d}-simplex of this complex")

    def has_simplex(self, s) -> bool:
        s = tuple(s)
        d = len(s) - 1
        return 0 <= d <= self.dim and s in self.index[d]

    def vertex_index(self, v: int) -> int:
        """Index of the 0-simplex (v,); ids and indices differ when the
        input listed vertices out of order."""
        return self.index_of(0, (v,))

    def counts(self) -> list:
        return [len(dim_list) for dim_list in self.simplices]

    # -- global ids (used by cover files and reports) -----------------------

    def global_id(self, d: int, i: int) -> int:
        return self._global_offsets[d] + i

    def resolve_global(self, gid: int) -> tuple:
        """Return (dim, index) for a dimension-major global simplex id."""
        if not 0 <= gid < self.n_simplices_total:
            raise ParseError(f"global simplex id {gid} out of range")
        for d in range(self.dim, -1, -1):
            if gid >= self._global_offsets[d]:
                return d, gid - self._global_offsets[d]
        raise AssertionError

    # -- construction --------------------------------------------------------

    @classmethod
    def from_simplices(cls, n_vertices: int, simplices, augmented: bool = False):
        """Build a complex from an arbitrary simplex list, completing faces.

        Listed simplices keep their file order within each dimension (first
        occurrence wins); auto-completed faces are appended afterwards in
        lexicographic order, so the index assignment is reproducible.
        """
        by_dim: dict[int, list] = {}
        present: dict[int, set] = {}
        max_dim = 0
        for raw in simplices:
            s = tuple(raw)
            if len(s) == 0:
                raise ParseError("empty simplex in input")
            if list(s) != sorted(set(s)):
                raise ParseError(f"simplex {list(raw)} is not strictly ascending")
            d = len(s) - 1
            max_dim = max(max_dim, d)
            if s not in present.setdefault(d, set()):
                present[d].add(s)
                by_dim.setdefault(d, []).append(s)
        # complete faces, top down
        for d in range(max_dim, 0, -1):
            missing = set()
            for s in by_dim.get(d, []):
                for face in combinations(s, d):
                    if face not in present.setdefault(d - 1, set()):
                        missing.add(face)
            for face in sorted(missing):
                present[d - 1].add(face)
                by_dim.setdefault(d - 1, []).append(face)
        dims = [by_dim.get(d, []) for d in range(max_dim + 1)]
        return cls(n_vertices, dims, augmented=augmented)

    def with_augmentation(self) -> "OrientedComplex":
        return OrientedComplex(self.n_vertices, self.simplices, augmented=True)

    def assignment_report(self) -> dict:
        """The index assignment emitted alongside every load."""
        return {
            "vertices": self.n_vertices,
            "counts": self.counts(),
            "simplices": {
                str(d): [list(s) for s in dim_list]
                for d, dim_list in enumerate(self.simplices)
            },
            "global_offsets": list(self._global_offsets),
        }


# ---------------------------------------------------------------------------
# chains and cochains

def _clean_coeffs(coeffs) -> dict:
    out = {}
    for k, v in coeffs.items():
        q = rat(v)
        if q != 0:
            out[int(k)] = q
    return out


class Chain:
    """A sparse chain in a fixed degree: finitely many simplex indices with
    nonzero rational coefficients."""

    def __init__(self, degree: int, coeffs=None):
        self.degree = int(degree)
        self.coeffs = _clean_coeffs(coeffs or {})

    def __eq__(self, other):
        return (isinstance(other, type(self)) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((type(self).__name__, self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = ", ".join(f"{i}: {rat_str(q)}" for i, q in sorted(self.coeffs.items()))
        return f"{type(self).__name__}(deg={self.degree}, {{{terms}}})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        assert self.degree == other.degree
        out = dict(self.coeffs)
        for i, q in other.coeffs.items():
            q2 = out.get(i, Fraction(0)) + q
            if q2 == 0:
                out.pop(i, None)
            else:
                out[i] = q2
        return type(self)(self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.degree, {i: -q for i, q in self.coeffs.items()})

    def scale(self, q) -> "Chain":
        q = rat(q)
        if q == 0:
            return type(self)(self.degree)
        return type(self)(self.degree, {i: q * v for i, v in self.coeffs.items()})

    def get(self, i: int) -> Fraction:
        return self.coeffs.get(i, Fraction(0))

    def support(self):
        return sorted(self.coeffs)

    def l1_norm(self) -> Fraction:
        return sum((abs(q) for q in self.coeffs.values()), Fraction(0))


class Cochain(Chain):
    """A linear functional on chains of a fixed degree; stored sparsely,
    interpreted as a total functional (zero off the stored support)."""

    def evaluate(self, c: Chain) -> Fraction:
        if self.degree != c.degree:
            raise DegreeError(f"cochain degree {self.degree} vs chain degree {c.degree}")
        return sum((self.coeffs.get(i, Fraction(0)) * q for i, q in c.coeffs.items()),
                   Fraction(0))

    def sup_norm(self) -> Fraction:
        return max((abs(q) for q in self.coeffs.values()), default=Fraction(0))


def l1_norm(c: Chain) -> Fraction:
    """Sum of absolute values of the coefficients."""
    return c.l1_norm()


def linf_norm(f: Cochain) -> Fraction:
    """Maximum absolute value over the (finite) support."""
    return f.sup_norm()


def kronecker(f: Cochain, c: Chain) -> Fraction:
    """Evaluation pairing <f, c>; requires equal degrees."""
    if f.degree != c.degree:
        raise DegreeError(f"degree mismatch: {f.degree} vs {c.degree}")
    return f.evaluate(c) if isinstance(f, Cochain) else Cochain(f.degree, f.coeffs).evaluate(c)


# ---------------------------------------------------------------------------
# differentials

def simplex_boundary(K: OrientedComplex, d: int, i: int) -> Chain:
    """Boundary of the i-th d-simplex as a (d-1)-chain (alternating faces)."""
    cache = K._boundary_cache[d]
    if i in cache:
        return cache[i]
    s = K.simplex(d, i)
    if d == 0:
        out = Chain(-1, {EMPTY_INDEX: 1}) if K.augmented else Chain(-1)
    else:
        coeffs = {}
        sign = 1
        for j in range(d + 1):
            face = s[:j] + s[j + 1:]
            coeffs[K.index_of(d - 1, face)] = Fraction(sign)
            sign = -sign
        out = Chain(d - 1, coeffs)
    cache[i] = out
    return out


def boundary(K: OrientedComplex, c: Chain) -> Chain:
    """The simplicial boundary d(c), extended linearly.  d.d = 0 exactly."""
    n = c.degree
    if c.is_zero() and n >= 1:
        return Chain(n - 1)
    if n < 0 or n > K.dim:
        raise DegreeError(f"no chain group in degree {n}")
    if n == 0 and not K.augmented:
        raise DegreeError("boundary of a 0-chain needs an augmented complex")
    out = Chain(n - 1)
    for i, q in c.coeffs.items():
        if not 0 <= i < K.n_simplices(n):
            raise DegreeError(f"index {i} invalid for degree {n}")
        out = out + simplex_boundary(K, n, i).scale(q)
    return out


def coboundary(K: OrientedComplex, f: Cochain) -> Cochain:
    """The adjoint differential: <coboundary(f), c> = <f, boundary(c)>."""
    n = f.degree
    if n == -1:
        if not K.augmented:
            raise DegreeError("degree -1 cochains need an augmented complex")
        t = f.coeffs.get(EMPTY_INDEX, Fraction(0))
        return Cochain(0, {i: t for i in range(K.n_simplices(0))})
    if n < 0 or n >= K.dim and n != K.dim:
        raise DegreeError(f"no cochain group in degree {n}")
    if n == K.dim:
        raise DegreeError(f"coboundary out of the top degree {n}")
    coeffs = {}
    for j in range(K.n_simplices(n + 1)):
        v = f.evaluate(simplex_boundary(K, n + 1, j))
        if v != 0:
            coeffs[j] = v
    return Cochain(n + 1, coeffs)


# ---------------------------------------------------------------------------
# linear algebra over Q (sparse rows)

def rank_sparse(rows) -> int:
    """Rank of a matrix given as an iterable of {column: Fraction} rows.

    Plain Gaussian elimination with first-support pivoting; exact.
    """
    pivots: dict[int, dict] = {}
    rank = 0
    for row in rows:
        row = {j: q for j, q in row.items() if q != 0}
        while row:
            j = min(row)
            if j in pivots:
                piv = pivots[j]
                factor = row[j] / piv[j]
                for k, q in piv.items():
                    q2 = row.get(k, Fraction(0)) - factor * q
                    if q2 == 0:
                        row.pop(k, None)
                    else:
                        row[k] = q2
            else:
                pivots[j] = row
                rank += 1
                break
    return rank


def solve_sparse_linear(rows, rhs, n_cols: int):
    """Solve A x = b exactly.  ``rows`` are {col: Fraction} dicts.

    Returns one solution as a list of Fractions (free variables set to 0),
    or None if the system is inconsistent.
    """
    work = []
    for row, b in zip(rows, rhs):
        work.append(({j: rat(q) for j, q in row.items() if rat(q) != 0}, rat(b)))
    pivots: dict[int, tuple] = {}
    for row, b in work:
        while True:
            if not row:
                if b != 0:
                    return None
                break
            j = min(row)
            if j in pivots:
                prow, pb = pivots[j]
                factor = row[j] / prow[j]
                for k, q in prow.items():
                    q2 = row.get(k, Fraction(0)) - factor * q
                    if q2 == 0:
                        row.pop(k, None)
                    else:
                        row[k] = q2
                b -= factor * pb
            else:
                pivots[j] = (row, b)
                break
    x = [Fraction(0)] * n_cols
    # back substitute in decreasing pivot order
    for j in sorted(pivots, reverse=True):
        prow, pb = pivots[j]
        acc = pb
        for k, q in prow.items():
            if k != j:
                acc -= q * x[k]
        x[j] = acc / prow[j]
    return x


def boundary_matrix_columns(K: OrientedComplex, n: int):
    """Boundary d_n, one {row: coeff} dict per n-simplex."""
    return [dict(simplex_boundary(K, n, i).coeffs) for i in range(K.n_simplices(n))]


def homology_rank(K: OrientedComplex, n: int) -> int:
    """dim H_n(K; Q) = dim ker d_n - rank d_{n+1}, by exact elimination.

    Uses the plain (non-augmented) complex regardless of the augmentation
    flag, so the one-point complex has rank 1 in degree 0.  Degrees above
    the dimension have zero chain groups and rank 0.
    """
    if n < 0:
        raise DegreeError("negative degree")
    if n > K.dim:
        return 0
    c_n = K.n_simplices(n)
    rank_dn = 0 if n == 0 else rank_sparse(boundary_matrix_columns(K, n))
    rank_dn1 = 0 if n == K.dim else rank_sparse(boundary_matrix_columns(K, n + 1))
    return (c_n - rank_dn) - rank_dn1


# ---------------------------------------------------------------------------
# degree-homogeneous linear maps

class ChainOperator:
    """A linear, degree-homogeneous map between chain groups.

    Stored column-wise: ``columns[i]`` is the image of basis simplex i.
    Missing columns map to zero.  An optional companion homotopy operator
    may be attached (e.g. the prism operator accompanying subdivision).
    """

    def __init__(self, src_degree: int, dst_degree: int, columns: dict,
                 name: str = "", homotopy: "ChainOperator | None" = None):
        self.src_degree = int(src_degree)
        self.dst_degree = int(dst_degree)
        self.columns = {int(i): c for i, c in columns.items() if not c.is_zero()}
        for c in self.columns.values():
            assert c.degree == self.dst_degree
        self.name = name
        self.homotopy = homotopy

    def __call__(self, c: Chain) -> Chain:
        if c.degree != self.src_degree:
            raise DegreeError(f"{self.name or 'operator'} expects degree {self.src_degree}")
        out = Chain(self.dst_degree)
        for i, q in c.coeffs.items():
            col = self.columns.get(i)
            if col is not None:
                out = out + col.scale(q)
        return out

    def then(self, other: "ChainOperator") -> "ChainOperator":
        """Composition self followed by other."""
        assert self.dst_degree == other.src_degree
        cols = {i: other(c) for i, c in self.columns.items()}
        return ChainOperator(self.src_degree, other.dst_degree, cols,
                             name=f"{other.name}.{self.name}")

    @classmethod
    def identity(cls, K: OrientedComplex, n: int) -> "ChainOperator":
        cols = {i: Chain(n, {i: 1}) for i in range(K.n_simplices(n))}
        return cls(n, n, cols, name="id")


# ---------------------------------------------------------------------------
# JSON interchange

def complex_from_dict(data: dict, augmented: bool = False):
    """Load `{"vertices": N, "simplices": [...]}`; returns (complex, report)."""
    if not isinstance(data, dict):
        raise ParseError("complex file must be a JSON object")
    try:
        n_vertices = int(data["vertices"])
        simplices = data["simplices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"complex file needs 'vertices' and 'simplices': {exc}") from exc
    if not isinstance(simplices, list):
        raise ParseError("'simplices' must be a list of vertex lists")
    for s in simplices:
        if not isinstance(s, list) or not all(isinstance(v, int) for v in s):
            raise ParseError(f"bad simplex entry {s!r}")
    K = OrientedComplex.from_simplices(n_vertices, simplices, augmented=augmented)
    return K, K.assignment_report()


def complex_to_dict(K: OrientedComplex) -> dict:
    return {
        "vertices": K.n_vertices,
        "simplices": [list(s) for dim_list in K.simplices for s in dim_list],
    }


def load_complex(path: str, augmented: bool = False):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read complex file {path}: {exc}") from exc
    return complex_from_dict(data, augmented=augmented)


def chain_from_dict(data: dict, cls=Chain):
    """Load `{"degree": n, "coeffs": {"<index>": "p/q"}}`."""
    if not isinstance(data, dict):
        raise ParseError("chain file must be a JSON object")
    try:
        degree = int(data["degree"])
        raw = data["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"chain file needs 'degree' and 'coeffs': {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("'coeffs' must be an object")
    coeffs = {}
    for k, v in raw.items():
        try:
            idx = int(k)
        except ValueError as exc:
            raise ParseError(f"bad simplex index {k!r}") from exc
        coeffs[idx] = rat(v)
    return cls(degree, coeffs)


def chain_to_dict(c: Chain) -> dict:
    return {
        "degree": c.degree,
        "coeffs": {str(i): rat_str(q) for i, q in sorted(c.coeffs.items())},
    }


def load_chain(path: str, cls=Chain):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read chain file {path}: {exc}") from exc
    return chain_from_dict(data, cls=cls)
