"""Exact rational linear programming and seminorms of (co)homology classes.

The solver is a two-phase primal simplex over `fractions.Fraction` with
Bland's pivot rule (deterministic, no cycling).  Every optimal answer
carries a primal/dual certificate pair that is re-verified exactly:
feasibility on both sides, complementary slackness detailed per row and
per variable, and equality of the objective values.

On top of it: the l1 seminorm of a homology class, the linf seminorm of a
cohomology class, the duality between the two as exact LP strong duality,
and fundamental classes of oriented pseudomanifolds.
"""

from __future__ import annotations

from fractions import Fraction

from .core import (
    CapError,
    Chain,
    Cochain,
    OrientedComplex,
    PreconditionError,
    boundary,
    coboundary,
    kronecker,
    rat,
    rat_str,
    simplex_boundary,
)

LE, EQ, GE = "<=", "==", ">="
_RELS = (LE, EQ, GE)

PIVOT_RULES = ("bland", "dantzig")
MAX_PIVOTS = 200_000


class NotPseudomanifoldError(PreconditionError):
    pass


class NonOrientableError(PreconditionError):
    pass


class LPProblem:
    """min or max of c.x subject to rows (a, rel, b); selected variables
    are constrained nonnegative, the rest are free."""

    def __init__(self, direction: str, objective, rows, nonneg=None):
        assert direction in ("min", "max")
        self.direction = direction
        self.objective = [rat(q) for q in objective]
        self.n = len(self.objective)
        self.rows = []
        for a, rel, b in rows:
            a = [rat(q) for q in a]
            assert len(a) == self.n, "row length mismatch"
            assert rel in _RELS, f"bad relation {rel!r}"
            self.rows.append((a, rel, rat(b)))
        if nonneg is None:
            nonneg = [True] * self.n
        self.nonneg = [bool(t) for t in nonneg]
        assert len(self.nonneg) == self.n

    @property
    def m(self):
        return len(self.rows)


class LPCertificate:
    """Outcome of an exact solve: a status plus whatever witnesses it.

    status 'optimal': value, primal x, dual y (both in the original
    variable/row spaces).  status 'unbounded': a feasible x and an
    improving ray.  status 'infeasible': a Farkas multiplier vector for the
    standardized system.
    """

    def __init__(self, status, value=None, x=None, y=None, ray=None, farkas=None,
                 pivot="bland", iterations=0):
        self.status = status
        self.value = value
        self.x = x
        self.y = y
        self.ray = ray
        self.farkas = farkas
        self.pivot = pivot
        self.iterations = iterations

    def to_dict(self) -> dict:
        out = {"status": self.status, "pivot": self.pivot, "iterations": self.iterations}
        if self.value is not None:
            out["value"] = rat_str(self.value)
        for key in ("x", "y", "ray", "farkas"):
            v = getattr(self, key)
            if v is not None:
                out[key] = [rat_str(q) for q in v]
        return out


# ---------------------------------------------------------------------------
# standard form

class _Standard:
    """min c.u, A u = b, u >= 0, with maps back to the user problem."""

    def __init__(self, p: LPProblem):
        self.user = p
        sign = 1 if p.direction == "min" else -1
        self.var_cols = []     # per user var: (plus_col, minus_col or None)
        cols_c = []
        col_of = 0
        for j in range(p.n):
            if p.nonneg[j]:
                self.var_cols.append((col_of, None))
                cols_c.append(sign * p.objective[j])
                col_of += 1
            else:
                self.var_cols.append((col_of, col_of + 1))
                cols_c.append(sign * p.objective[j])
                cols_c.append(-sign * p.objective[j])
                col_of += 2
        self.slack_col = {}
        rows = []
        for i, (a, rel, b) in enumerate(p.rows):
            row = [Fraction(0)] * col_of
            for j, q in enumerate(a):
                pc, mc = self.var_cols[j]
                row[pc] += q
                if mc is not None:
                    row[mc] -= q
            rows.append((row, rel, b, i))
        for i, (row, rel, b, orig) in enumerate(rows):
            if rel != EQ:
                self.slack_col[orig] = col_of
                cols_c.append(Fraction(0))
                col_of += 1
        self.n_cols = col_of
        self.c = cols_c + [Fraction(0)] * (self.n_cols - len(cols_c))
        self.A = []
        self.b = []
        self.row_sign = []
        self.orig_row = []
        for row, rel, b, orig in rows:
            full = row + [Fraction(0)] * (self.n_cols - len(row))
            if rel == LE:
                full[self.slack_col[orig]] = Fraction(1)
            elif rel == GE:
                full[self.slack_col[orig]] = Fraction(-1)
            s = 1
            if b < 0:
                full = [-q for q in full]
                b = -b
                s = -1
            self.A.append(full)
            self.b.append(b)
            self.row_sign.append(s)
            self.orig_row.append(orig)

    def user_x(self, u) -> list:
        out = []
        for pc, mc in self.var_cols:
            v = u[pc]
            if mc is not None:
                v -= u[mc]
            out.append(v)
        return out

    def user_y(self, w, kept_rows) -> list:
        """Map standard-row multipliers back to user rows (dropped redundant
        rows get multiplier 0)."""
        sign = 1 if self.user.direction == "min" else -1
        out = [Fraction(0)] * self.user.m
        for k, i in enumerate(kept_rows):
            out[self.orig_row[i]] = sign * self.row_sign[i] * w[k]
        return out


class _Tableau:
    def __init__(self, std: _Standard):
        self.std = std
        self.m = len(std.A)
        self.n = std.n_cols
        self.art = list(range(self.n, self.n + self.m))
        self.rows = [list(std.A[i]) + [Fraction(1) if k == i else Fraction(0)
                                       for k in range(self.m)] + [std.b[i]]
                     for i in range(self.m)]
        self.basis = list(self.art)
        self.kept = list(range(self.m))
        self.iterations = 0

    def _pivot(self, r, j):
        piv = self.rows[r][j]
        self.rows[r] = [q / piv for q in self.rows[r]]
        for i in range(len(self.rows)):
            if i != r and self.rows[i][j] != 0:
                f = self.rows[i][j]
                self.rows[i] = [q - f * p for q, p in zip(self.rows[i], self.rows[r])]
        self.basis[r] = j

    def _reduced(self, c):
        width = self.n + self.m + 1
        obj = list(c) + [Fraction(0)] * (width - len(c))
        for r, jb in enumerate(self.basis):
            cb = obj[jb] if jb < len(obj) else Fraction(0)
            if cb != 0:
                obj = [q - cb * p for q, p in zip(obj, self.rows[r])]
        return obj

    def run(self, c, pivot, allow=None):
        """Minimize c over the current feasible basis.  Returns
        ('optimal', reduced-objective-row) or ('unbounded', entering col)."""
        if allow is None:
            allow = lambda j: True
        obj = self._reduced(c)
        while True:
            entering = None
            if pivot == "bland":
                for j in range(self.n + self.m):
                    if allow(j) and obj[j] < 0:
                        entering = j
                        break
            else:
                best = Fraction(0)
                for j in range(self.n + self.m):
                    if allow(j) and obj[j] < best:
                        best = obj[j]
                        entering = j
            if entering is None:
                return "optimal", obj
            ratio = None
            leave = None
            for r in range(len(self.rows)):
                a = self.rows[r][entering]
                if a > 0:
                    t = self.rows[r][-1] / a
                    if ratio is None or t < ratio or (t == ratio and self.basis[r] < self.basis[leave]):
                        ratio = t
                        leave = r
            if leave is None:
                return "unbounded", entering
            self._pivot(leave, entering)
            self.iterations += 1
            if self.iterations > MAX_PIVOTS:
                raise CapError("pivot cap exceeded")
            obj = self._reduced(c)

    def solution(self):
        u = [Fraction(0)] * (self.n + self.m)
        for r, jb in enumerate(self.basis):
            u[jb] = self.rows[r][-1]
        return u

    def duals(self, c):
        """w = c_B . B^{-1}, read from the artificial identity block."""
        w = []
        for k in self.kept:
            col = self.n + k
            acc = Fraction(0)
            for r, jb in enumerate(self.basis):
                cb = c[jb] if jb < len(c) else Fraction(0)
                if cb != 0:
                    acc += cb * self.rows[r][col]
            w.append(acc)
        return w

    def drop_redundant_artificials(self):
        """After phase 1 at value 0: pivot artificials out of the basis, or
        drop the (redundant) rows that cannot be pivoted."""
        r = 0
        while r < len(self.rows):
            jb = self.basis[r]
            if jb >= self.n:
                target = None
                for j in range(self.n):
                    if self.rows[r][j] != 0:
                        target = j
                        break
                if target is None:
                    del self.rows[r]
                    del self.basis[r]
                    del self.kept[r]
                    continue
                self._pivot(r, target)
            r += 1


def lp_solve(problem: LPProblem, pivot: str = "bland") -> LPCertificate:
    """Exact solve with certificate; statuses are returned, never raised."""
    assert pivot in PIVOT_RULES, f"unknown pivot rule {pivot!r}"
    std = _Standard(problem)
    tab = _Tableau(std)

    phase1_c = [Fraction(0)] * std.n_cols + [Fraction(1)] * tab.m
    status, _ = tab.run(phase1_c, pivot)
    assert status == "optimal", "phase 1 is always bounded"
    infeas = sum(tab.rows[r][-1] for r, jb in enumerate(tab.basis) if jb >= tab.n)
    if infeas > 0:
        w1 = tab.duals(phase1_c)
        farkas = [Fraction(0)] * tab.m
        for k, i in enumerate(tab.kept):
            farkas[i] = w1[k]
        cert = LPCertificate("infeasible", farkas=farkas, pivot=pivot,
                             iterations=tab.iterations)
        ok, why = verify_certificate(problem, cert)
        assert ok, f"internal: bad infeasibility certificate: {why}"
        return cert

    tab.drop_redundant_artificials()
    art_block = tab.n
    status, detail = tab.run(std.c, pivot, allow=lambda j: j < art_block)
    if status == "unbounded":
        entering = detail
        u = tab.solution()[: std.n_cols]
        ray = [Fraction(0)] * std.n_cols
        ray[entering] = Fraction(1)
        for r, jb in enumerate(tab.basis):
            if jb < std.n_cols:
                ray[jb] = -tab.rows[r][entering]
        cert = LPCertificate("unbounded", x=std.user_x(u), ray=std.user_x(ray),
                             pivot=pivot, iterations=tab.iterations)
        ok, why = verify_certificate(problem, cert)
        assert ok, f"internal: bad unboundedness certificate: {why}"
        return cert

    u = tab.solution()[: std.n_cols]
    x = std.user_x(u)
    w = tab.duals(std.c)
    y = std.user_y(w, tab.kept)
    value = sum((q * v for q, v in zip(problem.objective, x)), Fraction(0))
    cert = LPCertificate("optimal", value=value, x=x, y=y, pivot=pivot,
                         iterations=tab.iterations)
    ok, why = verify_certificate(problem, cert)
    assert ok, f"internal: certificate failed verification: {why}"
    return cert


def verify_certificate(problem: LPProblem, cert: LPCertificate):
    """Re-verify a certificate exactly.  Returns (ok, list of violations).

    For 'optimal': primal and dual feasibility, complementary slackness and
    equality of objective values.  For 'unbounded': feasible point plus an
    improving recession ray.  For 'infeasible': a Farkas certificate of the
    standardized equality system.
    """
    bad = []
    direction = problem.direction

    def row_value(a, x):
        return sum((q * v for q, v in zip(a, x)), Fraction(0))

    if cert.status == "optimal":
        x, y = cert.x, cert.y
        if x is None or y is None or len(x) != problem.n or len(y) != problem.m:
            return False, ["missing or misshapen solution vectors"]
        for j, v in enumerate(x):
            if problem.nonneg[j] and v < 0:
                bad.append(f"x[{j}] negative")
        for i, (a, rel, b) in enumerate(problem.rows):
            lhs = row_value(a, x)
            if rel == LE and lhs > b:
                bad.append(f"row {i} violated")
            if rel == GE and lhs < b:
                bad.append(f"row {i} violated")
            if rel == EQ and lhs != b:
                bad.append(f"row {i} violated")
            # dual sign per relation
            yi = y[i]
            if direction == "min":
                if rel == LE and yi > 0:
                    bad.append(f"y[{i}] sign")
                if rel == GE and yi < 0:
                    bad.append(f"y[{i}] sign")
            else:
                if rel == LE and yi < 0:
                    bad.append(f"y[{i}] sign")
                if rel == GE and yi > 0:
                    bad.append(f"y[{i}] sign")
            if yi != 0 and lhs != b:
                bad.append(f"complementary slackness fails on row {i}")
        for j in range(problem.n):
            s = problem.objective[j] - sum(y[i] * problem.rows[i][0][j]
                                           for i in range(problem.m))
            if problem.nonneg[j]:
                if direction == "min" and s < 0:
                    bad.append(f"reduced cost {j} negative")
                if direction == "max" and s > 0:
                    bad.append(f"reduced cost {j} positive")
                if s != 0 and x[j] != 0:
                    bad.append(f"complementary slackness fails on variable {j}")
            else:
                if s != 0:
                    bad.append(f"dual constraint {j} not tight for free variable")
        cx = sum((problem.objective[j] * x[j] for j in range(problem.n)), Fraction(0))
        by = sum((problem.rows[i][2] * y[i] for i in range(problem.m)), Fraction(0))
        if cx != by:
            bad.append("strong duality fails")
        if cert.value is not None and cert.value != cx:
            bad.append("stated value differs from c.x")
        return (not bad), bad

    if cert.status == "unbounded":
        x, ray = cert.x, cert.ray
        if x is None or ray is None:
            return False, ["missing point or ray"]
        for j in range(problem.n):
            if problem.nonneg[j] and (x[j] < 0 or ray[j] < 0):
                bad.append(f"sign of x/ray at {j}")
        for i, (a, rel, b) in enumerate(problem.rows):
            lhs = row_value(a, x)
            d = row_value(a, ray)
            if rel == LE and (lhs > b or d > 0):
                bad.append(f"row {i}")
            if rel == GE and (lhs < b or d < 0):
                bad.append(f"row {i}")
            if rel == EQ and (lhs != b or d != 0):
                bad.append(f"row {i}")
        drift = row_value(problem.objective, ray)
        improving = drift < 0 if direction == "min" else drift > 0
        if not improving:
            bad.append("ray does not improve the objective")
        return (not bad), bad

    if cert.status == "infeasible":
        far = cert.farkas
        std = _Standard(problem)
        if far is None or len(far) != len(std.A):
            return False, ["missing Farkas vector"]
        for j in range(std.n_cols):
            if sum(far[i] * std.A[i][j] for i in range(len(std.A))) > 0:
                bad.append(f"Farkas column {j}")
        if sum((far[i] * std.b[i] for i in range(len(std.A))), Fraction(0)) <= 0:
            bad.append("Farkas value not positive")
        return (not bad), bad

    return False, [f"unknown status {cert.status!r}"]


# ---------------------------------------------------------------------------
# seminorms

def is_cycle(K: OrientedComplex, z: Chain) -> bool:
    if z.degree == 0:
        return True
    return boundary(K, z).is_zero()


def is_cocycle(K: OrientedComplex, f: Cochain) -> bool:
    if f.degree == K.dim:
        return True
    return coboundary(K, f).is_zero()


def l1_seminorm(K: OrientedComplex, z: Chain, pivot: str = "bland"):
    """min ||z + d(gamma)||_1 over (degree+1)-chains gamma, exactly.

    Returns (value, optimal representative chain, certificate).
    """
    n = z.degree
    if not (0 <= n <= K.dim):
        raise PreconditionError(f"degree {n} out of range")
    if not is_cycle(K, z):
        raise PreconditionError("not a cycle: boundary residual "
                                f"{boundary(K, z).coeffs}")
    m = K.n_simplices(n)
    p = K.n_simplices(n + 1) if n < K.dim else 0
    # variables: beta_plus[m], beta_minus[m], gamma[p] (free)
    n_vars = 2 * m + p
    objective = [Fraction(1)] * (2 * m) + [Fraction(0)] * p
    nonneg = [True] * (2 * m) + [False] * p
    rows = []
    dcols = [dict(simplex_boundary(K, n + 1, t).coeffs) for t in range(p)]
    for s in range(m):
        a = [Fraction(0)] * n_vars
        a[s] = Fraction(1)
        a[m + s] = Fraction(-1)
        for t in range(p):
            q = dcols[t].get(s)
            if q:
                a[2 * m + t] = -q
        rows.append((a, EQ, z.get(s)))
    cert = lp_solve(LPProblem("min", objective, rows, nonneg), pivot=pivot)
    assert cert.status == "optimal", "seminorm program is always feasible and bounded"
    rep = Chain(n, {s: cert.x[s] - cert.x[m + s] for s in range(m)})
    return cert.value, rep, cert


def linf_seminorm(K: OrientedComplex, f: Cochain, pivot: str = "bland"):
    """min ||f + delta(eta)||_inf over (degree-1)-cochains eta, exactly.

    Returns (value, optimal representative cochain, certificate).
    """
    n = f.degree
    if not (0 <= n <= K.dim):
        raise PreconditionError(f"degree {n} out of range")
    if not is_cocycle(K, f):
        raise PreconditionError("not a cocycle: coboundary residual "
                                f"{coboundary(K, f).coeffs}")
    m = K.n_simplices(n)
    q = K.n_simplices(n - 1) if n >= 1 else 0
    # variables: eta[q] (free), t (nonneg)
    n_vars = q + 1
    objective = [Fraction(0)] * q + [Fraction(1)]
    nonneg = [False] * q + [True]
    # coefficient of eta_u in (delta eta)(s) is the u-coefficient of d(s)
    rows = []
    for s in range(m):
        drow = dict(simplex_boundary(K, n, s).coeffs) if n >= 1 else {}
        up = [Fraction(0)] * n_vars
        for u, c in drow.items():
            up[u] = c
        pos = list(up)
        pos[q] = Fraction(-1)
        rows.append((pos, LE, -f.get(s)))
        neg = [-c for c in up]
        neg[q] = Fraction(-1)
        rows.append((neg, LE, f.get(s)))
    cert = lp_solve(LPProblem("min", objective, rows, nonneg), pivot=pivot)
    assert cert.status == "optimal"
    rep_coeffs = {}
    for s in range(m):
        drow = dict(simplex_boundary(K, n, s).coeffs) if n >= 1 else {}
        v = f.get(s) + sum((cert.x[u] * c for u, c in drow.items()), Fraction(0))
        if v != 0:
            rep_coeffs[s] = v
    return cert.value, Cochain(n, rep_coeffs), cert


class DualityReport:
    """Both sides of the pairing between the l1 and linf programs."""

    def __init__(self, status, l1_value=None, cocycle=None, l1_certificate=None,
                 cocycle_certificate=None, representative=None):
        self.status = status
        self.l1_value = l1_value
        self.cocycle = cocycle
        self.l1_certificate = l1_certificate
        self.cocycle_certificate = cocycle_certificate
        self.representative = representative


def duality_check(K: OrientedComplex, z: Chain, pivot: str = "bland") -> DualityReport:
    """The duality principle at this scale: for a cycle z that is nonzero
    in homology, the l1 seminorm of [z] equals 1 over the minimal sup norm
    of a cocycle pairing to 1 with z.  Both optima are computed as exact
    LPs and the equality is asserted on the certificates.

    A nullhomologous z degenerates (its l1 seminorm is 0 and no cocycle
    can pair to 1); this is reported as status 'degenerate'.
    """
    v1, rep, cert1 = l1_seminorm(K, z, pivot=pivot)
    if v1 == 0:
        return DualityReport("degenerate", l1_value=Fraction(0), l1_certificate=cert1,
                             representative=rep)
    n = z.degree
    m = K.n_simplices(n)
    p = K.n_simplices(n + 1) if n < K.dim else 0
    # variables: f[m] (free), t (nonneg); minimize t = ||f||_inf
    n_vars = m + 1
    objective = [Fraction(0)] * m + [Fraction(1)]
    nonneg = [False] * m + [True]
    rows = []
    for s in range(m):
        a = [Fraction(0)] * n_vars
        a[s] = Fraction(1)
        a[m] = Fraction(-1)
        rows.append((a, LE, Fraction(0)))
        a2 = [Fraction(0)] * n_vars
        a2[s] = Fraction(-1)
        a2[m] = Fraction(-1)
        rows.append((a2, LE, Fraction(0)))
    for t in range(p):
        a = [Fraction(0)] * n_vars
        for s, c in simplex_boundary(K, n + 1, t).coeffs.items():
            a[s] = c
        rows.append((a, EQ, Fraction(0)))
    pairing = [z.get(s) for s in range(m)] + [Fraction(0)]
    rows.append((pairing, EQ, Fraction(1)))
    cert2 = lp_solve(LPProblem("min", objective, rows, nonneg), pivot=pivot)
    assert cert2.status == "optimal", "a nontrivial class always has a pairing cocycle"
    assert cert2.value * v1 == 1, "duality principle violated (this is a bug)"
    cocycle = Cochain(n, {s: cert2.x[s] for s in range(m) if cert2.x[s] != 0})
    return DualityReport("paired", l1_value=v1, cocycle=cocycle, l1_certificate=cert1,
                         cocycle_certificate=cert2, representative=rep)


# ---------------------------------------------------------------------------
# fundamental classes

class FundamentalClass:
    """A coherent +-1 top cycle with the orientation signs that witness it."""

    def __init__(self, chain: Chain, signs: dict):
        self.chain = chain
        self.signs = dict(signs)


def fundamental_class(K: OrientedComplex, require_connected: bool = False) -> FundamentalClass:
    """Orient a closed pseudomanifold: assign +-1 to each top simplex so
    adjacent simplices induce opposite orientations on shared faces.

    Raises NotPseudomanifoldError when some codimension-1 simplex is not in
    exactly two top simplices (or the complex is not pure), and
    NonOrientableError when sign propagation reaches a contradiction.
    """
    n = K.dim
    if n == 0:
        raise NotPseudomanifoldError("a 0-dimensional complex has no facets to glue")
    top = K.n_simplices(n)
    if top == 0:
        raise NotPseudomanifoldError("no top-dimensional simplices")
    # purity: every simplex below the top dimension must have a coface
    cofaces: dict[int, list] = {u: [] for u in range(K.n_simplices(n - 1))}
    for i in range(top):
        for u, c in simplex_boundary(K, n, i).coeffs.items():
            cofaces[u].append((i, c))
    for u, inc in cofaces.items():
        if len(inc) != 2:
            raise NotPseudomanifoldError(
                f"facet {K.simplex(n - 1, u)} lies in {len(inc)} top simplices")
    if n >= 2:
        covered = set()
        for d in range(n):
            for i in range(K.n_simplices(d)):
                covered.add((d, i))
        reach = set()
        for i in range(top):
            s = set(K.simplex(n, i))
            for d in range(n):
                for j in range(K.n_simplices(d)):
                    if set(K.simplex(d, j)) <= s:
                        reach.add((d, j))
        if reach != covered:
            raise NotPseudomanifoldError("complex is not pure top-dimensional")

    signs: dict[int, int] = {}
    components = 0
    for seed in range(top):
        if seed in signs:
            continue
        components += 1
        signs[seed] = 1
        stack = [seed]
        while stack:
            i = stack.pop()
            for u, ci in simplex_boundary(K, n, i).coeffs.items():
                (a, ca), (b, cb) = cofaces[u]
                j, cj = (b, cb) if a == i else (a, ca)
                want = -signs[i] * int(ci) * int(cj)
                if j in signs:
                    if signs[j] != want:
                        raise NonOrientableError(
                            "orientation propagation reached a contradiction")
                else:
                    signs[j] = want
                    stack.append(j)
    if require_connected and components > 1:
        raise NotPseudomanifoldError(f"{components} components, expected 1")
    z = Chain(n, {i: Fraction(s) for i, s in signs.items()})
    assert boundary(K, z).is_zero(), "oriented top chain must be a cycle"
    return FundamentalClass(z, signs)
