from fractions import Fraction

import pytest

from ellone import zoo
from ellone.core import (
    Chain,
    Cochain,
    DegreeError,
    PreconditionError,
    boundary,
    coboundary,
)
from ellone.covering import (
    BruhatFunction,
    CoveringDatum,
    EquivariantExtension,
    IsometryGroupDatum,
    LineCovering,
    _mat_vec,
    averaged_primitive,
    bar_to_simplicial,
    bruhat_function,
    cohomologous_witness,
    cone_average_trivial,
    deck_cone_chain,
    group_average_cochain,
    invariant_cochain_basis,
    line_averaged_primitive,
    map_simplex,
    path_primitive,
    push_chain,
    restriction_isometry_report,
    transfer,
)
from ellone.groupcoh import BarCochain, bar_differential
from ellone.simplicial import Cone
from conftest import random_chain, random_cochain


def double_circle_covering(k):
    """The connected double cover of the k-edge circle."""
    base = zoo.circle(k)
    total = zoo.circle(2 * k)
    projection = [v % k for v in range(2 * k)]
    gen = [(v + k) % (2 * k) for v in range(2 * k)]
    return CoveringDatum(base, total, projection, [gen], list(range(k)))


def trivial_covering(K):
    return CoveringDatum(K, K, list(range(K.n_vertices)), [],
                         list(range(K.n_vertices)))


def swap_covering(K):
    """Two disjoint copies of K over K, with the swap action."""
    total = zoo.disjoint_double(K)
    nv = K.n_vertices
    projection = [v % nv for v in range(2 * nv)]
    swap = [(v + nv) % (2 * nv) for v in range(2 * nv)]
    return CoveringDatum(K, total, projection, [swap], list(range(nv)))


def covering_corpus():
    return {
        "trivial_circle3": trivial_covering(zoo.circle(3)),
        "double_circle3": double_circle_covering(3),
        "double_circle4": double_circle_covering(4),
        "double_circle5": double_circle_covering(5),
        "swap_torus": swap_covering(zoo.torus_cyclic7()),
        "swap_sphere": swap_covering(zoo.sphere()),
    }


def random_invariant_cochain(C, degree, rng):
    """Average a random cochain over the deck group."""
    f = random_cochain(C.total, degree, rng)
    acc = Cochain(degree)
    for a in range(len(C.deck)):
        acc = acc + C.act_cochain(a, f)
    return Cochain(degree, acc.scale(Fraction(1, len(C.deck))).coeffs)


# ---------------------------------------------------------------------------
# covering data validation

def test_validation_rejects_nonfree_action():
    K = zoo.circle(4)
    reflect = [0, 3, 2, 1]  # fixes vertices 0 and 2
    with pytest.raises(PreconditionError):
        CoveringDatum(K, K, list(range(4)), [reflect], [0, 1])


def test_validation_rejects_bad_projection():
    base = zoo.circle(3)
    total = zoo.circle(6)
    bad = [0, 1, 2, 0, 2, 1]  # not simplicial onto the base
    with pytest.raises(PreconditionError):
        CoveringDatum(base, total, bad, [[(v + 3) % 6 for v in range(6)]], [0, 1, 2])


def test_validation_rejects_bad_domain():
    base = zoo.circle(3)
    total = zoo.circle(6)
    proj = [v % 3 for v in range(6)]
    gen = [(v + 3) % 6 for v in range(6)]
    with pytest.raises(PreconditionError):
        CoveringDatum(base, total, proj, [gen], [0, 3, 1, 2])


def test_push_chain_is_a_chain_map(rng):
    C = double_circle_covering(4)
    for _ in range(5):
        c = random_chain(C.total, 1, rng)
        lhs = boundary(C.base, push_chain(C.total, C.base, C.projection, c))
        rhs = push_chain(C.total, C.base, C.projection, boundary(C.total, c))
        assert lhs == rhs


# ---------------------------------------------------------------------------
# lifts

def test_lift_constant():
    C = double_circle_covering(3)
    ones = Cochain(0, {i: 1 for i in range(3)})
    assert C.lift_cochain(ones) == Cochain(0, {i: 1 for i in range(6)})


def test_lift_edge_indicator_is_fiber_indicator():
    C = double_circle_covering(3)
    f = Cochain(1, {0: 1})  # base edge (0, 1)
    lf = C.lift_cochain(f)
    fiber = {i for i in range(C.total.n_simplices(1))
             if map_simplex(C.total, C.base, C.projection, 1, i)[1] == 0}
    assert set(lf.coeffs) == fiber and len(fiber) == 2


def test_lift_is_invariant_isometric_and_chain_map(corpus, rng):
    for name, C in covering_corpus().items():
        for n in range(C.base.dim + 1):
            f = random_cochain(C.base, n, rng)
            lf = C.lift_cochain(f)
            assert C.is_invariant_cochain(lf), name
            assert lf.sup_norm() == f.sup_norm()
            if n < C.base.dim:
                assert C.lift_cochain(coboundary(C.base, f)) == \
                    Cochain(n + 1, coboundary(C.total, lf).coeffs)


# ---------------------------------------------------------------------------
# Bruhat functions

def test_bruhat_trivial_covering_is_one():
    C = trivial_covering(zoo.circle(3))
    h = bruhat_function(C)
    assert all(h(v) == 1 for v in range(3))


def test_bruhat_partition_on_corpus():
    for name, C in covering_corpus().items():
        h = bruhat_function(C)
        for x in range(C.total.n_vertices):
            assert sum(h(g[x]) for g in C.deck) == 1, name


def test_bruhat_rejects_bad_values():
    C = double_circle_covering(3)
    with pytest.raises(PreconditionError):
        BruhatFunction(C, {0: Fraction(2)})
    with pytest.raises(PreconditionError):
        BruhatFunction(C, {v: Fraction(1) for v in range(6)})


# ---------------------------------------------------------------------------
# equivariant extension

def regular_module_extension(C, phi_star):
    """A = scalars, B = functions on the deck group, sigma = evaluate at e."""
    n_deck = len(C.deck)
    act_A = [[[Fraction(1)]] for _ in range(n_deck)]
    act_B = []
    for a in range(n_deck):
        m = [[Fraction(0)] * n_deck for _ in range(n_deck)]
        for x in range(n_deck):
            m[C.compose(a, x)][x] = Fraction(1)
        act_B.append(m)
    iota = [[Fraction(1)] for _ in range(n_deck)]
    sigma = [[Fraction(1) if j == 0 else Fraction(0) for j in range(n_deck)]]
    return EquivariantExtension(C, phi_star.degree, act_A, act_B, iota, sigma,
                                [phi_star])


def test_extension_restricts_to_alpha(rng):
    for name, C in covering_corpus().items():
        n = min(1, C.base.dim)
        phi = random_invariant_cochain(C, n, rng)
        ext = regular_module_extension(C, phi)
        ones = [Fraction(1)] * ext.dim_B  # iota(1)
        assert ext.extend(ones) == phi, name


def test_extension_is_equivariant(rng):
    C = double_circle_covering(3)
    phi = random_invariant_cochain(C, 1, rng)
    ext = regular_module_extension(C, phi)
    for _ in range(10):
        b = [Fraction(rng.randint(-4, 4)) for _ in range(ext.dim_B)]
        for a in range(len(C.deck)):
            gb = _mat_vec(ext.action_B[a], b)
            assert ext.extend(gb) == C.act_cochain(a, ext.extend(b))


def test_extension_trivial_deck_is_alpha_sigma(rng):
    C = trivial_covering(zoo.circle(4))
    phi = random_cochain(C.base, 1, rng)
    ext = regular_module_extension(C, phi)
    for _ in range(5):
        b = [Fraction(rng.randint(-3, 3))]
        sigma_b = b[0]  # sigma is evaluation at the only element
        assert ext.extend(b) == Cochain(1, phi.scale(sigma_b).coeffs)


def test_extension_norm_bound(rng):
    for name, C in covering_corpus().items():
        n = min(1, C.base.dim)
        phi = random_invariant_cochain(C, n, rng)
        ext = regular_module_extension(C, phi)
        na, nb = ext.operator_norms()
        assert nb <= na, name


def test_extension_rejects_bad_sigma():
    C = double_circle_covering(3)
    phi = Cochain(1, C.lift_cochain(Cochain(1, {0: 1})).coeffs)
    n_deck = len(C.deck)
    act_A = [[[Fraction(1)]] for _ in range(n_deck)]
    act_B = [[[Fraction(1) if i == j else Fraction(0) for j in range(n_deck)]
              for i in range(n_deck)] for _ in range(n_deck)]
    iota = [[Fraction(1)] for _ in range(n_deck)]
    sigma = [[Fraction(0) for _ in range(n_deck)]]
    with pytest.raises(PreconditionError):
        EquivariantExtension(C, 1, act_A, act_B, iota, sigma, [phi])


def test_extension_rejects_nonequivariant_alpha(rng):
    C = double_circle_covering(3)
    phi = random_cochain(C.total, 1, rng)
    if C.is_invariant_cochain(phi):
        phi = phi + Cochain(1, {0: 1})
    with pytest.raises(PreconditionError):
        regular_module_extension(C, phi)


# ---------------------------------------------------------------------------
# bar cochains into simplicial cochains

def test_bar_to_simplicial_single_term_with_indicator(rng):
    C = double_circle_covering(3)
    G = C.deck_finite_group()
    # the indicator Bruhat function leaves exactly one deck tuple per simplex:
    # evaluating the indicator bar cochain of that tuple gives +-1
    for i in range(C.total.n_simplices(1)):
        sign, order = C.parameterization(1, i)
        expected = tuple(C.domain_element(v) for v in order)
        probe = BarCochain.from_function(
            G, 1, lambda t, e=expected: Fraction(1) if t == e else Fraction(0))
        out = bar_to_simplicial(C, probe)
        assert out.get(i) == sign
        # and no other deck tuple contributes to this simplex
        others = BarCochain.from_function(
            G, 1, lambda t, e=expected: Fraction(0) if t == e else Fraction(1))
        assert bar_to_simplicial(C, others).get(i) == 0


def test_bar_to_simplicial_chain_map(rng):
    for C in (double_circle_covering(3), swap_covering(zoo.torus_cyclic7())):
        G = C.deck_finite_group()
        top = C.total.dim
        for n in range(top):
            for _ in range(4):
                f = BarCochain.from_function(
                    G, n, lambda t: Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                lhs = coboundary(C.total, bar_to_simplicial(C, f))
                rhs = bar_to_simplicial(C, bar_differential(f))
                assert Cochain(n + 1, lhs.coeffs) == rhs


def test_bar_to_simplicial_norm_bound(rng):
    C = double_circle_covering(4)
    G = C.deck_finite_group()
    for _ in range(20):
        f = BarCochain.from_function(
            G, 1, lambda t: Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        assert bar_to_simplicial(C, f).sup_norm() <= f.sup_norm()


# ---------------------------------------------------------------------------
# cone averaging

def test_deck_cone_chain_trivial_group():
    K = zoo.disk(3)
    cone = Cone(K, 3)
    c0 = deck_cone_chain(cone, (0,))
    assert c0 == Chain(0, {K.index_of(0, (3,)): 1})
    # the degenerate cone over the apex collapses
    assert deck_cone_chain(cone, (0, 0)).is_zero()


def test_cone_average_trivial_deck():
    K = zoo.disk(3)
    cone = Cone(K, 3)
    f0 = Cochain(0, {K.index_of(0, (3,)): Fraction(5)})
    th0 = cone_average_trivial(cone, f0)
    assert set(th0.coeffs.values()) == {Fraction(5)}
    assert len(th0.coeffs) == K.n_simplices(0)
    # degree >= 1: zero, and cohomologous to any cocycle (cones are acyclic)
    f1 = coboundary(K, Cochain(0, {0: 1, 2: Fraction(1, 2)}))
    th1 = cone_average_trivial(cone, Cochain(1, f1.coeffs))
    assert th1.is_zero()
    eta = cohomologous_witness(K, Cochain(1, f1.coeffs), th1)
    assert coboundary(K, eta) == Cochain(1, f1.coeffs)


def test_line_bruhat_partition():
    for k in (3, 4, 5):
        LineCovering(k).check_partition()


def test_line_theta_uniformizes():
    line = LineCovering(3)
    th = line.cone_average(Cochain(1, {0: 1}))
    assert th == Cochain(1, {0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(-1, 3)})


def test_line_theta_degree0():
    line = LineCovering(4)
    f0 = Cochain(0, {line.base.index_of(0, (0,)): Fraction(3, 2)})
    th = line.cone_average(f0)
    assert len(th.coeffs) == 4 and set(th.coeffs.values()) == {Fraction(3, 2)}


def test_line_theta_chain_map(rng):
    line = LineCovering(4)
    for _ in range(10):
        f0 = random_cochain(line.base, 0, rng)
        lhs = coboundary(line.base, line.cone_average(f0))
        rhs = line.cone_average(Cochain(1, coboundary(line.base, f0).coeffs))
        assert Cochain(1, lhs.coeffs) == rhs  # both vanish: theta0 is constant


def test_line_theta_norm_and_class(rng):
    for k in (3, 4, 5):
        line = LineCovering(k)
        for _ in range(15):
            f = random_cochain(line.base, 1, rng, density=0.9)
            th = line.cone_average(f)
            assert th.sup_norm() <= f.sup_norm()
            eta = cohomologous_witness(line.base, f, th)
            assert coboundary(line.base, eta) == Cochain(1, (f - th).coeffs)


def test_line_theta_rejects_degree2():
    line = LineCovering(3)
    with pytest.raises(DegreeError):
        line.cone_average(Cochain(2, {}))


def test_cohomologous_witness_failure():
    K = zoo.circle(3)
    f = Cochain(1, {0: 1})
    with pytest.raises(PreconditionError):
        cohomologous_witness(K, f, Cochain(1))


# ---------------------------------------------------------------------------
# degree-one constructions

def test_path_primitive_of_coboundary(rng):
    for K in (zoo.torus_cyclic7(), zoo.sphere(), zoo.disk(4)):
        for _ in range(5):
            eta = random_cochain(K, 0, rng)
            f = coboundary(K, eta)
            F = path_primitive(K, Cochain(1, f.coeffs))
            assert coboundary(K, F) == Cochain(1, f.coeffs)
            # differs from eta by a constant
            diffs = {F.get(i) - eta.get(i) for i in range(K.n_simplices(0))}
            assert len(diffs) == 1


def test_path_primitive_zero():
    K = zoo.sphere()
    F = path_primitive(K, Cochain(1))
    assert F.is_zero()


def test_path_primitive_obstruction():
    K = zoo.circle(4)
    with pytest.raises(PreconditionError):
        path_primitive(K, Cochain(1, {0: 1}))


def test_path_primitive_needs_connected():
    K = zoo.two_circles(3)
    with pytest.raises(PreconditionError):
        path_primitive(K, Cochain(1))


def test_averaged_primitive_trivial_deck(rng):
    C = trivial_covering(zoo.circle(4))
    F = random_cochain(C.total, 0, rng)
    F_c, k = averaged_primitive(C, F, base_vertex=0)
    at_base = F.get(C.total.vertex_index(0))
    assert set(F_c.coeffs.values()) <= {at_base}  # constant at F(x0)
    expected_k = F - Cochain(0, {i: at_base for i in range(4)})
    assert k == Cochain(0, expected_k.coeffs)


def test_averaged_primitive_double_cover(rng):
    C = double_circle_covering(4)
    for _ in range(5):
        F0 = random_cochain(C.base, 0, rng)
        F = Cochain(0, C.lift_cochain(F0).coeffs)
        F_c, k = averaged_primitive(C, F)
        for a in range(len(C.deck)):
            assert C.act_cochain(a, Cochain(0, (F - F_c).coeffs)) == \
                Cochain(0, (F - F_c).coeffs)


def test_averaged_primitive_rejects_noninvariant(rng):
    C = double_circle_covering(3)
    F = Cochain(0, {0: 1})  # delta F is not deck invariant
    with pytest.raises(PreconditionError):
        averaged_primitive(C, F)


def test_line_averaged_primitive(rng):
    for k in (3, 4):
        line = LineCovering(k)
        for _ in range(5):
            f = random_cochain(line.base, 1, rng, density=0.9)
            fc_vals, k_cochain = line_averaged_primitive(line, f)
            assert isinstance(k_cochain, Cochain)


# ---------------------------------------------------------------------------
# transfer and restriction

def isometry_corpus():
    out = {}
    total4 = zoo.circle(4)
    out["rot2_on_circle4"] = IsometryGroupDatum(total4, [[(v + 2) % 4 for v in range(4)]], [])
    total8 = zoo.circle(8)
    out["rot2_gamma_rot4_circle8"] = IsometryGroupDatum(
        total8, [[(v + 2) % 8 for v in range(8)]], [[(v + 4) % 8 for v in range(8)]])
    T = zoo.disjoint_double(zoo.torus_cyclic7())
    swap = [(v + 7) % 14 for v in range(14)]
    out["swap_double_torus"] = IsometryGroupDatum(T, [swap], [])
    total6 = zoo.circle(6)
    out["rot_and_flip_circle6"] = IsometryGroupDatum(
        total6, [[(v + 2) % 6 for v in range(6)], [(6 - v) % 6 for v in range(6)]],
        [[(v + 2) % 6 for v in range(6)]])
    return out


def test_transfer_of_invariant_is_identity(rng):
    for name, D in isometry_corpus().items():
        n = D.total.dim
        f = group_average_cochain(D, random_cochain(D.total, n, rng))
        assert transfer(D, f) == f, name


def test_transfer_halves_on_two_edge_orbit():
    D = isometry_corpus()["rot2_on_circle4"]
    tf = transfer(D, Cochain(1, {0: 1}))
    assert tf == Cochain(1, {0: Fraction(1, 2), 2: Fraction(1, 2)})


def test_transfer_makes_invariants(rng):
    for name, D in isometry_corpus().items():
        n = D.total.dim
        f = group_average_cochain(D, random_cochain(D.total, n, rng), subgroup=D.gamma)
        tf = transfer(D, f)
        assert D.is_invariant(tf), name
        assert tf.sup_norm() <= f.sup_norm(), name


def test_transfer_commutes_with_coboundary(rng):
    D = isometry_corpus()["swap_double_torus"]
    for n in (0, 1):
        f = group_average_cochain(D, random_cochain(D.total, n, rng), subgroup=D.gamma)
        lhs = coboundary(D.total, transfer(D, f))
        rhs = transfer(D, Cochain(n + 1, coboundary(D.total, f).coeffs))
        assert Cochain(n + 1, lhs.coeffs) == rhs


def test_transfer_requires_subgroup_invariance():
    D = isometry_corpus()["rot2_gamma_rot4_circle8"]
    with pytest.raises(PreconditionError):
        transfer(D, Cochain(1, {0: 1}))


def test_restriction_isometry_on_corpus(rng):
    for name, D in isometry_corpus().items():
        n = D.total.dim
        for _ in range(3):
            f = group_average_cochain(D, random_cochain(D.total, n, rng))
            report = restriction_isometry_report(D, f)
            assert report["seminorm_G_invariant"] == \
                report["seminorm_subgroup_invariant"], name


def test_restriction_isometry_zero_class():
    D = isometry_corpus()["rot2_on_circle4"]
    report = restriction_isometry_report(D, Cochain(1))
    assert report["seminorm_G_invariant"] == 0


def test_invariant_basis_spans_invariants(rng):
    D = isometry_corpus()["rot2_on_circle4"]
    basis = invariant_cochain_basis(D.total, list(D.group), 1)
    for b in basis:
        assert D.is_invariant(b)
    f = group_average_cochain(D, random_cochain(D.total, 1, rng))
    # the averaged cochain lies in the span (solve by orbit values)
    span_support = set()
    for b in basis:
        span_support |= set(b.coeffs)
    assert set(f.coeffs) <= span_support
