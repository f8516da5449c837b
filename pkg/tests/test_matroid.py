"""Rank-oracle contract: derived operations and exact matroid axioms."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from rankgrowth import (
    ContractError,
    InputError,
    LinearBackend,
    TrivialBackend,
    check_rank_axioms,
    extend_basis,
)
from rankgrowth.backends import GraphicBackend, IdealCountBackend

from oracles import matrix_rank


def test_rank_is_cardinality_on_trivial():
    backend = TrivialBackend(1)
    assert backend.rank([(7,), (9,), (7,)]) == 2
    assert backend.rank([]) == 0


def test_rank_linear_row_reduction():
    lb = LinearBackend()
    S = [lb.vector([(0, 1)]), lb.vector([(1, 1)]), lb.vector([(0, 1), (1, 1)])]
    assert lb.rank(S) == 2


def test_rank_graphic_triangle():
    gb = GraphicBackend()
    assert gb.rank([("a", "b"), ("b", "c"), ("a", "c")]) == 2


def test_rank_rejects_bad_element():
    backend = TrivialBackend(2)
    with pytest.raises(InputError):
        backend.validate((1,))
    with pytest.raises(InputError):
        IdealCountBackend(2).validate((1, -1))


def test_relative_rank_examples():
    backend = TrivialBackend(1)
    assert backend.relative_rank([(1,), (2,)], [(2,), (3,)]) == 1
    lb = LinearBackend()
    assert lb.relative_rank(
        [lb.vector([(0, 1), (1, 1)])], [lb.monomial(0), lb.monomial(1)]
    ) == 0
    assert backend.relative_rank([], [(9,)]) == 0


def test_localize_identity_and_membership():
    backend = TrivialBackend(1)
    local0 = backend.localize([])
    for S in ([], [(1,)], [(1,), (2,), (1,)]):
        assert local0.rank(S) == backend.rank(S)
    local5 = backend.localize([(5,)])
    assert local5.rank([(5,), (6,)]) == 1


def test_localize_spanning_tree_kills_component_edges():
    gb = GraphicBackend()
    tree = [("a", "b"), ("b", "c")]
    local = gb.localize(tree)
    assert local.rank([("a", "c")]) == 0
    assert local.rank([("x", "y")]) == 1


def test_localize_composition():
    backend = TrivialBackend(1)
    rng = random.Random(7)
    for _ in range(30):
        C1 = [(rng.randint(0, 6),) for _ in range(rng.randint(0, 3))]
        C2 = [(rng.randint(0, 6),) for _ in range(rng.randint(0, 3))]
        S = [(rng.randint(0, 6),) for _ in range(rng.randint(0, 4))]
        both = backend.localize(C1).localize(C2)
        merged = backend.localize(C1 + C2)
        assert both.rank(S) == merged.rank(S)


def test_extend_basis_row_reduction_order():
    lb = LinearBackend()
    e1, e2 = lb.monomial(0), lb.monomial(1)
    scaled = lb.vector([(0, 2)])
    assert extend_basis(lb, [], [e1, scaled, e2]) == [e1, e2]
    assert extend_basis(lb, [e1], []) == [e1]


def test_extend_basis_trivial_dedups():
    backend = TrivialBackend(1)
    got = extend_basis(backend, [(1,)], [(2,), (1,), (2,)])
    assert got == [(1,), (2,)]


def test_extend_basis_rejects_dependent_basis():
    lb = LinearBackend()
    dep = [lb.monomial(0), lb.vector([(0, 3)])]
    with pytest.raises(ContractError):
        extend_basis(lb, dep, [])


def test_relative_rank_matches_extend_basis_count():
    lb = LinearBackend()
    rng = random.Random(3)
    for _ in range(25):
        A = [
            lb.vector([(k, rng.randint(-2, 2)) for k in range(3)])
            for _ in range(rng.randint(0, 4))
        ]
        B = [
            lb.vector([(k, rng.randint(-2, 2)) for k in range(3)])
            for _ in range(rng.randint(0, 4))
        ]
        base = extend_basis(lb, [], B)
        grown = extend_basis(lb, base, A)
        assert lb.relative_rank(A, B) == len(grown) - len(base)


def _random_sets(pool, rng, count, size):
    return [
        [pool[rng.randrange(len(pool))] for _ in range(rng.randint(0, size))]
        for _ in range(count)
    ]


BACKEND_POOLS = {}


def _linear_pool():
    lb = LinearBackend()
    rng = random.Random(11)
    pool = [
        lb.vector([(k, rng.randint(-2, 2)) for k in rng.sample(range(4), 2)])
        for _ in range(20)
    ]
    return lb, [v for v in pool]


def _pools():
    rng = random.Random(5)
    trivial = TrivialBackend(2)
    yield trivial, [(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(20)]
    ideal = IdealCountBackend(2, [(3, 0), (0, 3)])
    yield ideal, [(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(20)]
    yield _linear_pool()
    graphic = GraphicBackend()
    verts = "abcdef"
    yield graphic, [
        (verts[rng.randrange(6)], verts[rng.randrange(6)]) for _ in range(20)
    ]


@pytest.mark.parametrize("backend,pool", list(_pools()))
def test_axiom_sampling_per_backend(backend, pool):
    rng = random.Random(13)
    sets = _random_sets(pool, rng, 60, 5)
    assert check_rank_axioms(backend, sets, rng) == []


@given(
    vs=st.lists(
        st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=0, max_size=6
    )
)
@settings(max_examples=60, deadline=None)
def test_linear_rank_agrees_with_dense_elimination(vs):
    lb = LinearBackend()
    elems = [lb.vector(list(enumerate(row))) for row in vs]
    expect = matrix_rank([row for row in vs if any(row)]) if vs else 0
    assert lb.rank(elems) == expect


@given(
    S=st.lists(st.integers(0, 8), max_size=6),
    T=st.lists(st.integers(0, 8), max_size=6),
    x=st.integers(0, 8),
)
@settings(max_examples=100, deadline=None)
def test_trivial_axioms_exhaustive(S, T, x):
    backend = TrivialBackend(1)
    S = [(v,) for v in S]
    T = [(v,) for v in T]
    rS = backend.rank(S)
    assert backend.rank(S + [(x,)]) - rS in (0, 1)
    union = S + T
    inter = [e for e in S if e in set(T)]
    assert backend.rank(union) + backend.rank(inter) <= rS + backend.rank(T)


def test_exchange_pattern():
    # once an element is in the closure, adding anything keeps it there:
    # rank(B+a) = rank(B) forces rank(B+a+b) = rank(B+b)
    lb = LinearBackend()
    rng = random.Random(17)
    for _ in range(60):
        B = [
            lb.vector([(k, rng.randint(-2, 2)) for k in range(3)])
            for _ in range(rng.randint(0, 3))
        ]
        a = lb.vector([(k, rng.randint(-2, 2)) for k in range(3)])
        b = lb.vector([(k, rng.randint(-2, 2)) for k in range(3)])
        if lb.rank(B + [a]) == lb.rank(B):
            assert lb.rank(B + [a, b]) == lb.rank(B + [b])
