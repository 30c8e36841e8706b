import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ellone import zoo
from ellone.core import (
    Chain,
    ChainOperator,
    Cochain,
    DegreeError,
    OrientedComplex,
    ParseError,
    boundary,
    chain_from_dict,
    chain_to_dict,
    coboundary,
    complex_from_dict,
    complex_to_dict,
    homology_rank,
    kronecker,
    l1_norm,
    linf_norm,
    rank_sparse,
    rat,
    rat_str,
    solve_sparse_linear,
)
from conftest import random_chain, random_cochain
from oracles import dense_homology_rank

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=60)


# ---------------------------------------------------------------------------
# rationals

def test_rat_parsing():
    assert rat("3/4") == Fraction(3, 4)
    assert rat("-7") == Fraction(-7)
    assert rat(Fraction(1, 2)) == Fraction(1, 2)
    assert rat_str(Fraction(-3, 9)) == "-1/3"
    assert rat_str(Fraction(4, 2)) == "2"
    with pytest.raises(ParseError):
        rat("1/0")
    with pytest.raises(ParseError):
        rat("x")


# ---------------------------------------------------------------------------
# complexes

def test_face_completion_and_index_order():
    K = OrientedComplex.from_simplices(3, [[0, 1, 2]])
    assert K.counts() == [3, 3, 1]
    # completed faces come in lexicographic order
    assert K.simplices[1] == ((0, 1), (0, 2), (1, 2))
    assert K.simplices[0] == ((0,), (1,), (2,))


def test_listed_simplices_keep_file_order():
    K = OrientedComplex.from_simplices(4, [[2, 3], [0, 1], [1, 2]])
    assert K.simplices[1] == ((2, 3), (0, 1), (1, 2))
    # vertices were auto-completed, hence lexicographic
    assert K.simplices[0] == ((0,), (1,), (2,), (3,))


def test_invalid_simplices_rejected():
    with pytest.raises(ParseError):
        OrientedComplex.from_simplices(2, [[1, 0]])
    with pytest.raises(ParseError):
        OrientedComplex.from_simplices(2, [[0, 0]])
    with pytest.raises(ParseError):
        OrientedComplex.from_simplices(1, [[0, 1]])


def test_global_ids_roundtrip(corpus):
    for K in corpus.values():
        for d in range(K.dim + 1):
            for i in range(K.n_simplices(d)):
                assert K.resolve_global(K.global_id(d, i)) == (d, i)


# ---------------------------------------------------------------------------
# boundary / coboundary

def test_boundary_edge_defining_case():
    K = zoo.circle(3)
    d = boundary(K, Chain(1, {0: 1}))  # edge (0, 1)
    assert d == Chain(0, {1: 1, 0: -1})


def test_boundary_zero_chain_needs_augmentation():
    K = zoo.circle(3)
    with pytest.raises(DegreeError):
        boundary(K, Chain(0, {0: 1}))
    aug = K.with_augmentation()
    assert boundary(aug, Chain(0, {0: 1, 1: -1})) == Chain(-1)
    assert boundary(aug, Chain(0, {0: 1})) == Chain(-1, {0: 1})


def test_boundary_squared_triangle():
    K = zoo.sphere()
    c = Chain(2, {0: 1})
    assert boundary(K, boundary(K, c)) == Chain(0)


def test_boundary_squared_random(corpus, rng):
    for K in corpus.values():
        aug = K.with_augmentation()
        for n in range(1, K.dim + 1):
            for _ in range(10):
                c = random_chain(K, n, rng)
                assert boundary(aug, boundary(aug, c)).is_zero()


def test_coboundary_of_constants_vanishes(corpus):
    for name, K in corpus.items():
        if name in ("two_circles",):
            continue
        ones = Cochain(0, {i: 1 for i in range(K.n_simplices(0))})
        if K.dim == 0:
            continue
        df = coboundary(K, ones)
        assert df.is_zero()


def test_coboundary_top_degree_errors():
    K = zoo.circle(3)
    with pytest.raises(DegreeError):
        coboundary(K, Cochain(1, {0: 1, 1: 0, 2: 0}))


def test_adjointness_random(corpus, rng):
    for K in corpus.values():
        for n in range(1, K.dim + 1):
            for _ in range(10):
                f = random_cochain(K, n - 1, rng)
                c = random_chain(K, n, rng)
                assert kronecker(coboundary(K, f), c) == kronecker(f, boundary(K, c))


def test_augmented_adjointness(rng):
    K = zoo.circle(4).with_augmentation()
    f = Cochain(-1, {0: Fraction(2, 3)})
    c = random_chain(K, 0, rng)
    assert kronecker(coboundary(K, f), c) == kronecker(f, boundary(K, c))


# ---------------------------------------------------------------------------
# homology

def test_point_dimension_axiom():
    K = zoo.point()
    assert homology_rank(K, 0) == 1
    for n in (1, 2, 3):
        assert homology_rank(K, n) == 0


def test_frozen_ranks():
    assert [homology_rank(zoo.circle(3), n) for n in (0, 1)] == [1, 1]
    assert [homology_rank(zoo.torus_cyclic7(), n) for n in (0, 1, 2)] == [1, 2, 1]
    assert [homology_rank(zoo.sphere(), n) for n in (0, 1, 2)] == [1, 0, 1]
    assert [homology_rank(zoo.klein_grid(), n) for n in (0, 1, 2)] == [1, 1, 0]
    assert homology_rank(zoo.two_circles(3), 0) == 2
    assert homology_rank(zoo.two_circles(3), 1) == 2


def test_rank_against_dense_oracle(corpus):
    extra = {"two_circles": zoo.two_circles(4), "interval": zoo.interval(5),
             "torus_grid": zoo.torus_grid()}
    for K in list(corpus.values()) + list(extra.values()):
        assert sum(K.counts()) <= 200
        for n in range(K.dim + 1):
            assert homology_rank(K, n) == dense_homology_rank(K, n)


# ---------------------------------------------------------------------------
# pairing and norms

def test_kronecker_examples():
    f = Cochain(1, {2: 1})
    assert kronecker(f, Chain(1, {2: 1})) == 1
    assert kronecker(f, Chain(1)) == 0
    with pytest.raises(DegreeError):
        kronecker(Cochain(0, {0: 1}), Chain(1, {0: 1}))


def test_kronecker_holder_bound(corpus, rng):
    for K in corpus.values():
        for n in range(K.dim + 1):
            for _ in range(5):
                f = random_cochain(K, n, rng)
                c = random_chain(K, n, rng)
                assert abs(kronecker(f, c)) <= linf_norm(f) * l1_norm(c)


def test_norm_values():
    assert l1_norm(Chain(1, {0: Fraction(1, 2), 1: Fraction(-1, 3)})) == Fraction(5, 6)
    assert l1_norm(Chain(2)) == 0
    z = Chain(1, {0: 1, 1: 1, 2: -1})
    assert l1_norm(z) == 3
    assert linf_norm(Cochain(1, {0: Fraction(-2, 5)})) == Fraction(2, 5)


@given(st.dictionaries(st.integers(0, 8), rationals, max_size=6),
       st.dictionaries(st.integers(0, 8), rationals, max_size=6),
       rationals)
def test_norm_axioms(c1, c2, scalar):
    a, b = Chain(1, c1), Chain(1, c2)
    assert l1_norm(a + b) <= l1_norm(a) + l1_norm(b)
    assert l1_norm(a.scale(scalar)) == abs(scalar) * l1_norm(a)
    fa, fb = Cochain(1, c1), Cochain(1, c2)
    assert linf_norm(fa + fb) <= linf_norm(fa) + linf_norm(fb)
    assert linf_norm(fa.scale(scalar)) == abs(scalar) * linf_norm(fa)


# ---------------------------------------------------------------------------
# operators and linear algebra

def test_chain_operator_compose():
    K = zoo.circle(3)
    ident = ChainOperator.identity(K, 1)
    bnd = ChainOperator(1, 0, {i: boundary(K, Chain(1, {i: 1})) for i in range(3)},
                        name="d")
    z = Chain(1, {0: 2, 1: Fraction(1, 2)})
    assert ident(z) == z
    assert bnd(z) == boundary(K, z)
    assert ident.then(bnd)(z) == boundary(K, z)
    with pytest.raises(DegreeError):
        bnd(Chain(0, {0: 1}))


def test_rank_sparse_simple():
    rows = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)},
            {2: Fraction(1)}]
    assert rank_sparse(rows) == 2


def test_solve_sparse_linear():
    rows = [{0: Fraction(1), 1: Fraction(1)}, {0: Fraction(1), 1: Fraction(-1)}]
    x = solve_sparse_linear(rows, [Fraction(3), Fraction(1)], 2)
    assert x == [Fraction(2), Fraction(1)]
    assert solve_sparse_linear([{0: Fraction(1)}, {0: Fraction(1)}],
                               [Fraction(1), Fraction(2)], 1) is None
    # underdetermined systems get a valid solution
    x = solve_sparse_linear([{0: Fraction(1), 1: Fraction(1)}], [Fraction(5)], 2)
    assert x[0] + x[1] == 5


# ---------------------------------------------------------------------------
# JSON interchange

def test_complex_json_roundtrip(corpus):
    for K in corpus.values():
        K2, report = complex_from_dict(complex_to_dict(K))
        assert K2.simplices == K.simplices
        assert report["counts"] == K.counts()


def test_index_assignment_is_emitted():
    data = {"vertices": 3, "simplices": [[0, 1, 2]]}
    K, report = complex_from_dict(data)
    assert report["simplices"]["1"] == [[0, 1], [0, 2], [1, 2]]
    assert report["global_offsets"] == [0, 3, 6]


def test_chain_json_roundtrip():
    c = Chain(1, {0: Fraction(1, 3), 5: -2})
    d = chain_to_dict(c)
    assert d == {"degree": 1, "coeffs": {"0": "1/3", "5": "-2"}}
    assert chain_from_dict(d) == c
    f = chain_from_dict(json.loads(json.dumps(d)), cls=Cochain)
    assert isinstance(f, Cochain)


def test_parse_errors():
    with pytest.raises(ParseError):
        complex_from_dict({"simplices": []})
    with pytest.raises(ParseError):
        complex_from_dict({"vertices": 2, "simplices": [["a"]]})
    with pytest.raises(ParseError):
        chain_from_dict({"degree": 1, "coeffs": {"x": "1"}})
    with pytest.raises(ParseError):
        chain_from_dict({"degree": 1, "coeffs": {"0": "1/0"}})
