"""Pipeline mathematics: marginals, staircases, numerators, interpolation."""

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankgrowth import (
    BOX_TRUNCATED,
    ContractError,
    DecreasingTable,
    GrowthPolynomial,
    HypothesisError,
    OperatorSystem,
    Partition,
    StabilizationConfig,
    analyze_cumulative,
    analyze_graded,
    context_dimension_polynomial,
    cumulative_polynomial,
    detect_stabilization,
    dimension_polynomial,
    dominant_terms,
    eval_f,
    interpolate,
    numerator_from_table,
    phi_closure_member,
    phi_rank,
    realize_monomial_module,
    tabulate_f,
    verify_fit,
)
from rankgrowth.engine import GeneratingNumerator
from rankgrowth.backends import (
    TrivialBackend,
    make_counterexample_graph,
    make_ideal_system,
    make_polynomial_ring_system,
    make_sumset_system,
    translation,
)
from rankgrowth.operators import graded_orbit


# ---------------------------------------------------------------------------
# marginal ranks
# ---------------------------------------------------------------------------

def test_eval_f_single_variable_has_empty_lex_base():
    sys = make_sumset_system([1])
    for u in range(5):
        assert eval_f(sys, [(0,)], [], (u,)) == 1


def test_eval_f_fresh_monomial():
    sys, seeds = make_polynomial_ring_system(2)
    assert eval_f(sys, seeds, [], (0, 1)) == 1


def test_eval_f_agrees_with_tabulation():
    sys = make_sumset_system([0, 2, 3])
    A, B = [(0,)], [(1,)]
    table = tabulate_f(sys, A, B, box=(3, 3, 3))
    rng = random.Random(0)
    words = rng.sample(sorted(table.values), 25)
    for u in words:
        assert eval_f(sys, A, B, u) == table.values[u]


def test_graded_sum_identity():
    # summing marginals over a slice telescopes to the orbit's relative rank
    sys = make_sumset_system([0, 1, 5], [2])
    A, B = [(0,), (3,)], [(1,)]
    table = tabulate_f(sys, A, B, box=(3, 3, 3, 3))
    backend = sys.backend
    for s in itertools.product(range(4), repeat=2):
        direct = backend.relative_rank(
            graded_orbit(sys, A, s), graded_orbit(sys, B, s)
        )
        assert table.graded_sum(s) == direct


def test_tabulate_sumset_is_decreasing_all_ones():
    sys = make_sumset_system([0, 1])
    table = tabulate_f(sys, [(0,)], [], box=(5, 5))
    assert table.is_decreasing
    assert set(table.values.values()) == {1}


def test_tabulate_empty_seed_is_zero():
    sys = make_sumset_system([0, 1])
    table = tabulate_f(sys, [], [], box=(4, 4))
    assert set(table.values.values()) == {0}


def test_tabulate_counterexample_declared_triangular_has_violations():
    sys, seed = make_counterexample_graph()
    forced = sys.with_flags(["triangular"])
    table = tabulate_f(forced, seed, [], box=(8,))
    assert table.violations
    u, up = table.violations[0]
    assert table.values[u] < table.values[up]


def test_tabulate_values_bounded_by_seed_size():
    sys = make_sumset_system([0, 1, 2])
    A = [(0,), (1,)]
    table = tabulate_f(sys, A, [], box=(3, 3, 3))
    assert all(0 <= v <= len(A) for v in table.values.values())


def test_tabulate_threads_deterministic():
    sys = make_sumset_system([0, 1, 4])
    one = tabulate_f(sys, [(0,)], [], box=(4, 4, 4), cfg=StabilizationConfig())
    four = tabulate_f(
        sys, [(0,)], [], box=(4, 4, 4), cfg=StabilizationConfig(threads=4)
    )
    assert one.values == four.values


# ---------------------------------------------------------------------------
# stabilization detection
# ---------------------------------------------------------------------------

def test_detect_constant_function():
    table = DecreasingTable.from_function(lambda u: 4, (6, 6), Partition([2]))
    cert = detect_stabilization(table)
    assert cert.m_bar == (0, 0)
    assert cert.window_certified


def test_detect_univariate_staircase():
    table = DecreasingTable.from_function(
        lambda u: 2 if u[0] == 0 else (1 if u[0] == 1 else 0), (6,), Partition([1])
    )
    cert = detect_stabilization(table)
    assert cert.levels[0] == ((2,),)
    assert cert.levels[1] == ((1,),)
    assert cert.levels[2] == ((0,),)
    assert cert.m_bar == (2,)
    assert cert.window_certified


def test_detect_drop_at_box_edge_is_truncated():
    table = DecreasingTable.from_function(
        lambda u: 1 if u[0] < 6 else 0, (6,), Partition([1])
    )
    cert = detect_stabilization(table)
    assert cert.status == BOX_TRUNCATED


def test_detect_requires_decreasing():
    table = DecreasingTable.from_function(lambda u: u[0], (4,), Partition([1]))
    with pytest.raises(ContractError):
        detect_stabilization(table)


def test_joint_staircase_bound_beyond_slices_degrades_gracefully():
    # two incomparable drops whose join exceeds the tabulated part degrees:
    # the pipeline must return a box-truncated result, not crash
    sys, A = make_ideal_system([(5, 0), (0, 5)], [2])
    cfg = StabilizationConfig(box=(4, 4))
    table = tabulate_f(sys, A, [], cfg=cfg)
    cert = detect_stabilization(table, cfg)
    assert cert.m_bar == (5, 5)  # joint bound, part degree 10 > slice cap 8
    res = analyze_graded(sys, A, [], cfg)
    assert res.status == BOX_TRUNCATED
    # an adequate box certifies the same system
    ok = analyze_graded(sys, A, [], StabilizationConfig(box=(8, 8)))
    assert ok.status == "certified"


# ---------------------------------------------------------------------------
# numerator and interpolation
# ---------------------------------------------------------------------------

def test_numerator_examples():
    p1 = Partition([1])
    const = DecreasingTable.from_function(lambda u: 3, (6,), p1)
    num = numerator_from_table(const, (0,), p1)
    assert num.coeffs == {(0,): 3}

    stair = DecreasingTable.from_function(lambda u: max(0, 2 - u[0]), (6,), p1)
    num2 = numerator_from_table(stair, (2,), p1)
    assert num2.coeffs == {(0,): 2, (1,): -1, (2,): -1}

    p11 = Partition([1, 1])
    point = DecreasingTable.from_function(
        lambda u: 1 if u == (0, 0) else 0, (4, 4), p11
    )
    num3 = numerator_from_table(point, (1, 1), p11)
    assert num3.coeffs == {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}


def test_numerator_substitution_collapses_parts():
    # indicator of the origin in two merged variables: (1 - Y)^2
    p = Partition([2])
    point = DecreasingTable.from_function(
        lambda u: 1 if u == (0, 0) else 0, (4, 4), p
    )
    num = numerator_from_table(point, (1, 1), p)
    assert num.coeffs == {(0,): 1, (1,): -2, (2,): 1}


def test_interpolate_examples():
    P = interpolate(GeneratingNumerator({(0,): 1}, (0,), (2,)), (2,))
    assert P.coeffs == {(1,): Fraction(1), (0,): Fraction(1)}
    P2 = interpolate(GeneratingNumerator({(0,): 3, (1,): -2}, (1,), (1,)), (1,))
    assert P2.coeffs == {(0,): Fraction(1)}
    P3 = interpolate(GeneratingNumerator({(0, 0): 1}, (0, 0), (1, 1)), (1, 1))
    assert P3.coeffs == {(0, 0): Fraction(1)}


def test_interpolate_leading_coefficient_identity():
    num = GeneratingNumerator({(0,): 2, (1,): 1, (2,): -1}, (2,), (3,))
    P = interpolate(num, (3,))
    assert P.leading_coefficient() * math.factorial(2) == num.at_ones()


# ---------------------------------------------------------------------------
# round trip: staircase -> numerator -> polynomial -> graded sums
# ---------------------------------------------------------------------------

def _random_decreasing(rng, m, max_val=5, coord_bound=4):
    """Sum of ideal indicators: ideals given by complement antichains."""
    levels = rng.randint(0, max_val)
    antichains = []
    for _ in range(levels):
        pts = [
            tuple(rng.randint(0, coord_bound) for _ in range(m))
            for _ in range(rng.randint(0, 3))
        ]
        minimal = [
            p
            for p in pts
            if not any(
                q != p and all(a <= b for a, b in zip(q, p)) for q in pts
            )
        ]
        antichains.append(sorted(set(minimal)))

    def f(u):
        total = 0
        for ac in antichains:
            if not any(all(a <= b for a, b in zip(p, u)) for p in ac):
                total += 1
        return total

    return f


def _round_trip_once(rng, m, k):
    sizes = []
    remaining = m
    for i in range(k - 1):
        take = rng.randint(1, remaining - (k - 1 - i))
        sizes.append(take)
        remaining -= take
    sizes.append(remaining)
    p = Partition(sizes)
    f = _random_decreasing(rng, m)
    box = (6,) * m
    table = DecreasingTable.from_function(f, box, p)
    assert table.is_decreasing
    cert = detect_stabilization(table, StabilizationConfig(window=2))
    num = numerator_from_table(table, cert.m_bar, p)
    P = interpolate(num, sizes)
    # graded sums reproduced exactly at and above the threshold
    cap = table.slice_cap
    for s in itertools.product(*(range(t, c + 1) for t, c in zip(P.threshold, cap))):
        expect = table.graded_sum(s)
        assert P.evaluate(s) == expect
    # numerator at ones equals the top coefficient times the factorials
    factor = math.prod(math.factorial(d - 1) for d in sizes)
    assert P.leading_coefficient() * factor == num.at_ones()
    # degree bounds
    for i in range(k):
        assert P.degree_in(i) <= sizes[i] - 1


def test_round_trip_small_batch():
    rng = random.Random(99)
    for _ in range(40):
        m = rng.randint(1, 3)
        k = rng.randint(1, min(2, m))
        _round_trip_once(rng, m, k)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_round_trip_property(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    k = rng.randint(1, min(2, m))
    _round_trip_once(rng, m, k)


# ---------------------------------------------------------------------------
# full pipelines
# ---------------------------------------------------------------------------

def test_dimension_polynomial_khovanskii():
    sys = make_sumset_system([0, 1])
    P = dimension_polynomial(sys, [(0,)])
    assert [P.evaluate((t,)) for t in range(5)] == [1, 2, 3, 4, 5]
    assert P.certification == "certified"


def test_dimension_polynomial_hilbert():
    sys, seeds = make_polynomial_ring_system(3)
    P = dimension_polynomial(sys, seeds)
    for t in range(8):
        assert P.evaluate((t,)) == (t + 1) * (t + 2) // 2


def test_dimension_polynomial_seed_in_base():
    sys = make_sumset_system([0, 1])
    assert dimension_polynomial(sys, [(0,)], [(0,)]).is_zero


def test_dimension_refuses_undeclared():
    sys, seed = make_counterexample_graph()
    with pytest.raises(HypothesisError):
        dimension_polynomial(sys, seed)


def test_dimension_refuses_on_violation_witness():
    sys, seed = make_counterexample_graph()
    with pytest.raises(HypothesisError) as err:
        dimension_polynomial(sys.with_flags(["triangular"]), seed)
    assert err.value.witness is not None


def test_cumulative_polynomial_shift():
    sys = make_sumset_system([1])
    Q = cumulative_polynomial(sys, [(0,)])
    assert [Q.evaluate((t,)) for t in range(5)] == [1, 2, 3, 4, 5]


def test_cumulative_polynomial_counterexample():
    sys, seed = make_counterexample_graph()
    res = analyze_cumulative(sys, seed)
    assert res.status == "certified"
    for t in range(10):
        assert res.polynomial.evaluate((t,)) == 2 * t + 2


def test_cumulative_degree_bound():
    sys = make_sumset_system([0, 1], [2, 5])
    Q = cumulative_polynomial(sys, [(0,)])
    for i, d in enumerate(sys.partition.part_sizes):
        assert Q.degree_in(i) <= d


def test_cumulative_box_expansion_accepts_original_length():
    sys = make_sumset_system([1, 2])
    cfg = StabilizationConfig(box=(4, 4))
    Q = cumulative_polynomial(sys, [(0,)], cfg=cfg)
    assert Q.evaluate((3,)) == 7  # |{0..2*3}| cumulative of shifts {1,2} from 0


def test_context_polynomial_matches_plain_when_equal():
    sys = make_sumset_system([0, 1])
    assert context_dimension_polynomial(sys, sys, [(0,)]) == dimension_polynomial(
        sys, [(0,)]
    )


def test_context_polynomial_difference_sets():
    sys = make_sumset_system([0, 1])
    assert context_dimension_polynomial(sys, sys, [(0,)], [(0,)]).is_zero


def test_context_requires_subtuple():
    a = make_sumset_system([0, 1])
    b = make_sumset_system([0, 1])  # distinct map objects
    with pytest.raises(Exception):
        context_dimension_polynomial(a, b, [(0,)])


def test_context_with_strictly_larger_context():
    backend = TrivialBackend(1)
    f0, f1, f2 = translation((0,)), translation((1,)), translation((2,))
    phi = OperatorSystem([f0, f1], Partition([2]), backend)
    psi = OperatorSystem([f0, f1, f2], Partition([3]), backend)
    P = context_dimension_polynomial(phi, psi, [(0,)], [(0,)])
    # seed orbit {0..t} sits inside base orbit {0..2t}
    assert P.is_zero


# ---------------------------------------------------------------------------
# closure rank and membership
# ---------------------------------------------------------------------------

def test_phi_rank_partition_dependence():
    backend = TrivialBackend(1)
    maps = [translation((1,)), translation((1,))]
    assert phi_rank(OperatorSystem(maps, Partition([2]), backend), [(0,)]) == 0
    assert phi_rank(OperatorSystem(maps, Partition([1, 1]), backend), [(0,)]) == 1


def test_phi_rank_equals_numerator_at_ones():
    sys = make_sumset_system([0, 1, 3])
    res = analyze_graded(sys, [(0,)], [])
    val = phi_rank(sys, [(0,)])
    assert val == res.numerator.at_ones()
    factor = math.factorial(sys.partition.part_sizes[0] - 1)
    assert res.polynomial.leading_coefficient() * factor == val


def test_phi_closure_trichotomy():
    sys = make_sumset_system([0, 1])
    assert phi_closure_member(sys, (0,), [(0,)]).decision == "member"
    assert phi_closure_member(sys, (0,), []).decision == "non-member"
    tiny = StabilizationConfig(box=(0, 0))
    assert phi_closure_member(sys, (0,), [], tiny).decision == "inconclusive"


def test_phi_closure_dependency_beyond_box_is_inconclusive():
    # duplicated shifts have a genuine witness at degree one, invisible in
    # a zero box: the honest answer is inconclusive, never a false negative
    backend = TrivialBackend(1)
    dup = OperatorSystem(
        [translation((1,)), translation((1,))], Partition([2]), backend
    )
    dec = phi_closure_member(dup, (0,), [], StabilizationConfig(box=(0, 0)))
    assert dec.decision == "inconclusive"


def test_phi_closure_member_witness_degree():
    sys = make_sumset_system([1, 1])  # dedups to a single +1 map
    backend = TrivialBackend(1)
    dup = OperatorSystem(
        [translation((1,)), translation((1,))], Partition([2]), backend
    )
    dec = phi_closure_member(dup, (0,), [])
    assert dec.decision == "member"
    assert dec.witness == (1,)


def test_phi_closure_quasi_only_is_inconclusive():
    sys, seed = make_counterexample_graph()
    dec = phi_closure_member(sys, ("a", 0), [])
    assert dec.decision == "inconclusive"


# ---------------------------------------------------------------------------
# dominant terms, module realization, verification
# ---------------------------------------------------------------------------

def test_dominant_terms_examples():
    P = GrowthPolynomial(
        {(2, 1): Fraction(1), (1, 2): Fraction(1), (1, 1): Fraction(1)},
        (2, 2),
        (0, 0),
    )
    assert {e for e, _ in dominant_terms(P)} == {(2, 1), (1, 2)}
    Q = GrowthPolynomial({(2,): Fraction(3), (1,): Fraction(1)}, (2,), (0,))
    assert dominant_terms(Q) == {((2,), Fraction(3))}
    Z = GrowthPolynomial({}, (1,), (0,))
    assert dominant_terms(Z) == set()


def test_dominant_terms_invariance_same_closure():
    # seeds generating the same orbit closure share dominant terms
    sys, _ = make_polynomial_ring_system(2, [1, 1])
    backend = sys.backend
    A = [backend.monomial((0, 0))]
    A2 = [backend.monomial((0, 0)), backend.monomial((1, 0))]
    QA = cumulative_polynomial(sys, A)
    QA2 = cumulative_polynomial(sys, A2)
    assert dominant_terms(QA) == dominant_terms(QA2)
    assert QA != QA2  # the polynomials themselves differ


def test_realize_monomial_module_examples():
    p = Partition([1])
    flat = DecreasingTable.from_function(lambda u: 1, (6, 6), Partition([2]))
    real = realize_monomial_module(flat)
    assert len(real.ideals) == 1 and real.counts_ok

    stair = DecreasingTable.from_function(lambda u: max(0, 2 - u[0]), (6,), p)
    real2 = realize_monomial_module(stair)
    assert real2.ideals[0].frontier == ((1,),)
    assert real2.ideals[1].frontier == ((0,),)
    sums = [stair.graded_sum((t,)) for t in range(4)]
    assert sums == [2, 1, 0, 0]

    zero = DecreasingTable.from_function(lambda u: 0, (5,), p)
    assert realize_monomial_module(zero).ideals == []


def test_realize_rejects_non_decreasing():
    bad = DecreasingTable.from_function(lambda u: u[0], (4,), Partition([1]))
    with pytest.raises(ContractError):
        realize_monomial_module(bad)


def test_verify_fit_perturbed_constant():
    sys = make_sumset_system([0, 1])
    res = analyze_graded(sys, [(0,)], [])
    P = res.polynomial
    bumped = GrowthPolynomial(
        {e: c for e, c in P.coeffs.items()} | {(0,): P.coeffs.get((0,), 0) + 1},
        P.degree_bound,
        P.threshold,
    )
    rep = verify_fit(bumped, sys, [(0,)], [], ((0,), (4,)))
    assert len(rep.mismatches) == len(rep.points)


def test_verify_fit_window_below_threshold():
    P = GrowthPolynomial({(0,): Fraction(1)}, (1,), (3,))
    sys = make_sumset_system([0, 1])
    with pytest.raises(ContractError):
        verify_fit(P, sys, [(0,)], [], ((0,), (4,)))


def test_polynomial_pretty_formats():
    P = GrowthPolynomial(
        {(2,): Fraction(1, 2), (1,): Fraction(3, 2), (0,): Fraction(1)}, (2,), (0,)
    )
    assert P.pretty() == "1/2*Y^2 + 3/2*Y + 1"
    Q = GrowthPolynomial(
        {(0,): Fraction(2), (1,): Fraction(-1), (2,): Fraction(-1)}, (2,), (0,)
    )
    assert Q.pretty() == "-Y^2 - Y + 2"
    Z = GrowthPolynomial({}, (1,), (0,))
    assert Z.pretty() == "0"
    M = GrowthPolynomial({(1, 2): Fraction(5)}, (1, 2), (0, 0))
    assert M.pretty() == "5*Y1*Y2^2"


def test_ideal_pipeline_against_counts():
    sys, A = make_ideal_system([(2, 1)], [2])
    P = dimension_polynomial(sys, A)
    # points (r1, r2) with r1+r2=t outside the shadow of (2,1)
    def count(t):
        return sum(
            1
            for r1 in range(t + 1)
            if not (r1 >= 2 and (t - r1) >= 1)
        )
    for t in range(3, 9):
        assert P.evaluate((t,)) == count(t)
