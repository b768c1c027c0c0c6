import itertools
from collections import Counter
from fractions import Fraction

import pytest

from zkipcp import ConstraintSet, Field, InconsistentConstraint, MultiPoly, SubsetSpec, lde, random_poly
from zkipcp.aqc import check_independence
from zkipcp.rng import RngStream, TapeRng
from zkipcp.stats import exhaustive_distribution

from conftest import rng


def test_unconstrained_point_query_uniform(f17):
    # chi-square at N = 10 * |F|^2 per the contract
    n = 10 * 17 * 17
    c = Counter()
    for i in range(n):
        cs = ConstraintSet(f17, (2,), [(0, 1)])
        c[cs.conditional_answer((5,), RngStream(("u", i)))] += 1
    exp = n / 17
    chi2 = sum((c[v] - exp) ** 2 / exp for v in range(17))
    assert chi2 < 39.3  # 16 dof, p ~ 0.001


def test_fully_determined_queries_forced(f17):
    H = SubsetSpec.explicit(f17, [0, 1, 2])
    table = {(a, b): (a * b + 3) % 17 for a in H.elements for b in H.elements}
    p = lde(table, H, f17)
    cs = ConstraintSet(f17, (2, 2), [(0, 1), (0, 1)])
    for pt in itertools.product(H.elements, repeat=2):
        cs.add_constraint(pt, table[pt])
    r = RngStream("forced")
    for _ in range(20):
        q = r.point(f17, 2)
        kind, val = cs.classify(q)
        assert kind == "forced"
        assert cs.conditional_answer(q, r) == p.eval(q)


def test_conditioned_distribution_matches_enumeration(f3):
    # m=1, d=1, H={0,1}: condition on R(0)+R(1) = 2, look at R(0)
    want = Counter()
    for c0, c1 in itertools.product(range(3), repeat=2):
        p = MultiPoly(f3, (1,), [c0, c1])
        if f3.add(p.eval((0,)), p.eval((1,))) == 2:
            want[p.eval((0,))] += 1
    total = sum(want.values())

    def run(tape_rng):
        cs = ConstraintSet(f3, (1,), [(0, 1)])
        cs.add_constraint((), 2)
        return cs.conditional_answer((0,), tape_rng)

    dist = exhaustive_distribution(run)
    for v in range(3):
        assert dist.get(v, Fraction(0)) == Fraction(want[v], total)


def test_sample_no_constraints_matches_random_poly(f3):
    c1, c2 = Counter(), Counter()
    for i in range(4500):
        cs = ConstraintSet(f3, (1,), [(0, 1)])
        c1[tuple(cs.sample_poly(RngStream(("a", i))).coeff_list())] += 1
        c2[tuple(random_poly(f3, (1,), RngStream(("b", i))).coeff_list())] += 1
    for k in set(c1) | set(c2):
        assert abs(c1[k] - c2[k]) < 150  # both uniform over 9 cells (mean 500)


def test_sample_fully_constrained_unique(f17):
    H = SubsetSpec.explicit(f17, [0, 1, 4])
    table = {(h,): (3 * h + 1) % 17 for h in H.elements}
    p = lde(table, H, f17)
    cs = ConstraintSet(f17, (2,), [(0, 1)])
    for pt, v in table.items():
        cs.add_constraint(pt, v)
    for i in range(5):
        assert cs.sample_poly(RngStream(("u", i))) == p


def test_sample_constrained_uniform_over_solutions(f3):
    # F_3, m=1, d=2, constraint sum over {0,1} = 0: 9 solutions
    solutions = set()
    for coeffs in itertools.product(range(3), repeat=3):
        p = MultiPoly(f3, (2,), list(coeffs))
        if f3.add(p.eval((0,)), p.eval((1,))) == 0:
            solutions.add(coeffs)
    assert len(solutions) == 9
    c = Counter()
    for i in range(9000):
        cs = ConstraintSet(f3, (2,), [(0, 1)])
        cs.add_constraint((), 0)
        c[tuple(cs.sample_poly(RngStream(("s", i))).coeff_list())] += 1
    assert set(c) == solutions
    exp = 9000 / 9
    chi2 = sum((c[k] - exp) ** 2 / exp for k in solutions)
    assert chi2 < 26.1  # 8 dof


@pytest.mark.parametrize("p,m,d", [(2, 1, 1), (2, 2, 1), (3, 1, 2), (3, 2, 1)])
def test_interchangeability_exhaustive(p, m, d):
    """Lazily answering queries then completing the polynomial has the same
    joint distribution as sampling the polynomial first and reading it."""
    f = Field.prime(p)
    H = (0, 1)
    queries = [(), (0,) * m, (1,), ((p - 1,) + (0,) * (m - 1))]
    queries = [q[:m] if len(q) > m else q for q in queries]

    def lazy(tape_rng):
        cs = ConstraintSet(f, (d,) * m, [H] * m)
        answers = tuple(cs.conditional_answer(q, tape_rng) for q in queries)
        poly = cs.sample_poly(tape_rng)
        return answers + tuple(poly.coeff_list())

    def eager(tape_rng):
        poly = random_poly(f, (d,) * m, tape_rng)
        answers = tuple(poly.partial_sum(q, [H] * (m - len(q))) for q in queries)
        return answers + tuple(poly.coeff_list())

    dist_lazy = exhaustive_distribution(lazy)
    dist_eager = exhaustive_distribution(eager)
    assert dist_lazy == dist_eager


def test_forced_free_agrees_with_rank_criterion(f3):
    """The sampler's forced/free classification of a point query given other
    point queries matches linear (in)dependence of the functionals, which by
    the rank fact is statistical (in)dependence."""
    d, dp, G = 1, 2, (0, 1)
    pts = list(itertools.product(range(3), repeat=2))
    r = rng("rank")
    for trial in range(40):
        S = [pts[r.randrange(len(pts))] for _ in range(3)]
        q = pts[r.randrange(len(pts))]
        cs = ConstraintSet(f3, (d, dp), [(0, 1), G])
        for s in S:
            cs.conditional_answer(s, r.child("ans", trial, str(s)))
        kind, _ = cs.classify(q)
        # forced <=> the q functional is spanned by the S functionals
        # <=> answers at S determine the answer at q (statistical dependence
        # with the joint block unless already spanned)
        vec, rhs, piv = cs._reduce(cs.functional(q), 0)
        assert (kind == "forced") == (piv is None)
        if q in S:
            assert kind == "forced"


def test_rank_criterion_on_partial_sums(f3):
    # the sum-query answer at a fresh X-point is free given < |G|^k point
    # queries when d' >= 2(|G|-1), matching the independence criterion
    G = (0, 1)
    cs = ConstraintSet(f3, (1, 2), [(0, 1), G])
    r = RngStream("ps")
    cs.conditional_answer((0, 2), r)  # one point query (< |G|^1 = 2)
    kind, _ = cs.classify((2,))       # partial-sum query at X = 2
    assert kind == "free"
    assert check_independence(f3, 1, 1, 1, 2, G, [(0, 2)])


def test_inconsistency_detected_eagerly(f17):
    cs = ConstraintSet(f17, (1,), [(0, 1)])
    cs.add_constraint((0,), 1)
    cs.add_constraint((1,), 2)
    with pytest.raises(InconsistentConstraint):
        cs.add_constraint((), 5)  # sum is forced to 3


def test_dimension_cap():
    f = Field.prime(3)
    with pytest.raises(Exception):
        ConstraintSet(f, (9,) * 8, [(0, 1)] * 8)  # 10^8 coefficients


def test_fixture_replay(f17):
    cs = ConstraintSet(f17, (2, 2), [(0, 1), (0, 1)])
    r = RngStream("replay")
    for q in [(), (1,), (2, 3)]:
        cs.conditional_answer(q, r)
    clone = ConstraintSet.from_json(cs.to_json())
    for q, v in cs.entries:
        kind, val = clone.classify(q)
        assert kind == "forced" and val == v
