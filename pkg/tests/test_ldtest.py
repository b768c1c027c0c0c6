import itertools

import pytest

from zkipcp import Field, MultiPoly, random_poly
from zkipcp.ldtest import (
    LdtParams,
    acceptance_rate,
    axis_catch_fraction,
    ldt_round,
    make_honest_strategy,
    make_mixture_strategy,
    sample_challenge,
    sample_plane,
)
from zkipcp.rng import RngStream
from zkipcp.stats import exhaustive_distribution

from conftest import rng


def test_honest_acceptance(f17):
    params = LdtParams(f17, 2, 2)
    q = random_poly(f17, (2, 2), rng("h"))
    s = make_honest_strategy(q)
    assert acceptance_rate((s, s), params, 1000, RngStream("ha")) == 1.0


def test_honest_acceptance_exhaustive_f5():
    """Every (plane, point, branch, axis, role) challenge for F_5, m=2, d=1
    accepts.  In F^2 the unique plane is the whole space, so the challenge
    space enumerates exactly."""
    from zkipcp.ldtest import LdtChallenge
    from zkipcp.poly import PlaneOrLine
    f5 = Field.prime(5)
    params = LdtParams(f5, 2, 1)
    q = random_poly(f5, (1, 1), rng("exh"))
    s = make_honest_strategy(q)
    plane = PlaneOrLine(f5, "plane", [0, 0], [[1, 0], [0, 1]])
    count = 0
    for alpha in itertools.product(range(5), repeat=2):
        for swapped in (False, True):
            ch = LdtChallenge("total", plane, alpha, None, swapped)
            assert ldt_round((s, s), params, RngStream("na"), challenge=ch)
            count += 1
            for axis in range(2):
                base = list(alpha)
                base[axis] = 0
                unit = [0, 0]
                unit[axis] = 1
                line = PlaneOrLine(f5, "axis_parallel_line", base, [unit])
                ch = LdtChallenge("axis", plane, alpha, line, swapped)
                assert ldt_round((s, s), params, RngStream("na"), challenge=ch)
                count += 1
    assert count == 25 * 2 * 3


def test_bad_individual_degree_caught(f17):
    """deg_X1 = d+1 with total degree still <= md: only the axis branch can
    see it; the measured reject rate matches the enumerated catching-line
    fraction within Monte Carlo error."""
    params = LdtParams(f17, 2, 2)
    r = rng("bad")
    bad = None
    while bad is None or bad.individual_degrees()[0] != 3 or bad.total_degree() > 4:
        bad = random_poly(f17, (3, 1), r.child("p", str(bad)))
    s = make_honest_strategy(bad)
    n = 4000
    rate = acceptance_rate((s, s), params, n, RngStream("badmc"))
    catch = axis_catch_fraction(bad, params)
    assert catch > 0
    # reject happens iff the axis branch (prob 1/2) drew a catching line
    expect_reject = 0.5 * catch
    sigma = (expect_reject * (1 - expect_reject) / n) ** 0.5
    assert abs((1 - rate) - expect_reject) <= 5 * sigma


def test_two_different_polynomials_consistency(f17):
    params = LdtParams(f17, 2, 2)
    r = rng("two")
    q1 = random_poly(f17, (2, 2), r.child("a"))
    q2 = random_poly(f17, (2, 2), r.child("b"))
    agree = sum(1 for pt in itertools.product(range(17), repeat=2)
                if q1.eval(pt) == q2.eval(pt)) / 17 ** 2
    n = 4000
    rate = acceptance_rate((make_honest_strategy(q1), make_honest_strategy(q2)),
                           params, n, RngStream("twomc"))
    # both branches compare the two polynomials at a uniform point
    sigma = (agree * (1 - agree) / n) ** 0.5 + 0.01
    assert rate <= agree + 5 * sigma


def test_singleton_mixture_equals_honest(f17):
    params = LdtParams(f17, 2, 2)
    q = random_poly(f17, (2, 2), rng("sm"))
    hs = make_honest_strategy(q)
    m1, m2 = make_mixture_strategy([(1.0, q)])
    va = [ldt_round((m1, m2), params, RngStream(("seed", i))) for i in range(60)]
    vb = [ldt_round((hs, hs), params, RngStream(("seed", i))) for i in range(60)]
    assert va == vb


def test_mixture_acceptance_is_weighted_average(f17):
    params = LdtParams(f17, 2, 2)
    r = rng("mix")
    good = random_poly(f17, (2, 2), r.child("g"))
    bad = None
    while bad is None or bad.individual_degrees()[0] != 3 or bad.total_degree() > 4:
        bad = random_poly(f17, (3, 1), r.child("b", str(bad)))
    per_good = 1.0
    n = 6000
    per_bad = acceptance_rate((make_honest_strategy(bad),) * 2, params, n,
                              RngStream("mb"))
    pair = make_mixture_strategy([(0.5, good), (0.5, bad)])
    mixed = acceptance_rate(pair, params, n, RngStream("mm"))
    expect = 0.5 * per_good + 0.5 * per_bad
    sigma = (expect * (1 - expect) / n) ** 0.5 + 0.01
    assert abs(mixed - expect) <= 5 * sigma


def test_high_degree_mixture_rejected(f17):
    params = LdtParams(f17, 2, 2)
    r = rng("hd")
    bads = [random_poly(f17, (4, 4), r.child("p", i)) for i in range(2)]
    pair = make_mixture_strategy([(0.5, bads[0]), (0.5, bads[1])])
    rate = acceptance_rate(pair, params, 1500, RngStream("hdmc"))
    assert rate < 0.35  # total-degree check catches most rounds


def test_symmetry_under_strategy_swap(f17):
    params = LdtParams(f17, 2, 2)
    r = rng("sym")
    q1 = random_poly(f17, (2, 2), r.child("a"))
    q2 = random_poly(f17, (2, 2), r.child("b"))
    s1, s2 = make_honest_strategy(q1), make_honest_strategy(q2)
    va = [ldt_round((s1, s2), params, RngStream(("swap", i))) for i in range(400)]
    vb = [ldt_round((s2, s1), params, RngStream(("swap", i))) for i in range(400)]
    # swapping the pair flips which prover answers planes, but the challenge
    # also resamples the role coin from the same seed: verdict sequences match
    assert va == vb


def test_branch_and_role_coins_balanced(f17):
    params = LdtParams(f17, 3, 1)
    branches = {"total": 0, "axis": 0}
    swaps = 0
    n = 4000
    for i in range(n):
        ch = sample_challenge(params, RngStream(("coins", i)))
        branches[ch.branch] += 1
        swaps += ch.roles_swapped
    for count in (*branches.values(), swaps):
        assert abs(count / n - 0.5) < 5 * (0.25 / n) ** 0.5


def test_sampled_planes_contain_alpha(f17):
    for i in range(50):
        ch = sample_challenge(LdtParams(f17, 3, 1), RngStream(("pl", i)))
        u, v = ch.plane.locate(ch.alpha)
        assert ch.plane.point(u, v) == ch.alpha
        if ch.line is not None:
            (t,) = ch.line.locate(ch.alpha)
            assert ch.line.point(t) == ch.alpha


def test_malformed_plane_answer_rejected(f17):
    params = LdtParams(f17, 2, 2)

    class Malformed:
        def respond(self, question, shared):
            kind, obj = question
            if kind == "plane":
                return "garbage"
            return 0

    assert ldt_round((Malformed(), Malformed()), params, RngStream("mf")) is False


def test_field_too_small_raises():
    f5 = Field.prime(5)
    params = LdtParams(f5, 3, 2)  # md = 6 > |F| = 5
    q = random_poly(f5, (2, 2, 2), rng("小"))
    with pytest.raises(ValueError):
        ldt_round((make_honest_strategy(q),) * 2, params, RngStream("x"))
