import itertools

import numpy as np
import pytest

from zkipcp import Curve, Field, MultiPoly, PlaneOrLine, SubsetSpec, bundle, lde, random_poly, restrict
from zkipcp.poly import (
    PolyError,
    interpolate_univariate,
    poly_from_json,
    poly_to_json,
    substitute_prefix,
    sum_out_tail,
)

from conftest import brute_eval, brute_sum, rng


def test_lde_constant(f17):
    H = SubsetSpec.explicit(f17, [0, 1])
    table = {pt: 5 for pt in itertools.product([0, 1], repeat=2)}
    p = lde(table, H, f17)
    assert all(p.eval(pt) == 5 for pt in [(3, 9), (0, 0), (16, 2)])


def test_lde_identity(f17):
    H = SubsetSpec.explicit(f17, [0, 1])
    p = lde({(0,): 0, (1,): 1}, H, f17)
    assert p.coeff_list() == [0, 1]  # X


def test_lde_and_gate(f17):
    H = SubsetSpec.explicit(f17, [0, 1])
    table = {(a, b): a & b for a in (0, 1) for b in (0, 1)}
    p = lde(table, H, f17)
    assert p.eval((2, 3)) == 6
    assert p.coeff((1, 1)) == 1 and p.coeff((1, 0)) == 0


def test_lde_agrees_on_grid_and_unique(f17):
    H = SubsetSpec.explicit(f17, [0, 1, 5])
    r = rng("lde")
    for trial in range(10):
        table = {pt: r.element(f17) for pt in itertools.product(H.elements, repeat=2)}
        p = lde(table, H, f17)
        for pt, v in table.items():
            assert p.eval(pt) == v
        # uniqueness: any degree-(|H|-1) polynomial agreeing on the grid equals it
        q = lde({pt: p.eval(pt) for pt in table}, H, f17)
        assert q == p


def test_lde_rejects_repeated_nodes(f17):
    with pytest.raises(Exception):
        lde({(0,): 1, (1,): 2}, SubsetSpec.explicit(f17, [0, 0]), f17)


def test_eval_zero_poly(f17):
    p = MultiPoly.zero(f17, (2, 2))
    assert p.eval((5, 9)) == 0


def test_eval_matches_brute_force(f97):
    r = rng("eval")
    for _ in range(10):
        p = random_poly(f97, (3, 2, 2), r.child("p"))
        pt = r.point(f97, 3)
        assert p.eval(pt) == brute_eval(p, pt)


def test_eval_batch_matches_eval(f97, gf256):
    r = rng("evalbatch")
    for f in (f97, gf256):
        p = random_poly(f, (2, 3, 1), r.child("p", str(f)))
        pts = np.array([r.point(f, 3) for _ in range(40)], dtype=np.int64)
        vals = p.eval_batch(pts)
        for i in range(40):
            assert int(vals[i]) == p.eval(tuple(pts[i]))


def test_eval_dimension_mismatch(f17):
    p = MultiPoly.zero(f17, (1, 1))
    with pytest.raises(PolyError):
        p.eval((1,))


def test_restrict_axis_line(f17):
    p = MultiPoly(f17, (1, 1), [0, 1, 1, 0])  # X1 + X2
    ln = PlaneOrLine(f17, "axis_parallel_line", [0, 5], [[1, 0]])
    r = restrict(p, ln)
    assert r.coeff_list() == [5, 1]


def test_restrict_point_degenerate_curve(f17):
    p = random_poly(f17, (2, 2), rng("curve0"))
    c = Curve(f17, [[3], [7]])  # constant curve, q = 0
    r = restrict(p, c)
    assert r.individual_degrees()[0] <= 0
    assert r.eval((11,)) == p.eval((3, 7))


def test_restrict_plane_pointwise(f97):
    r = rng("plane")
    p = random_poly(f97, (2, 2, 2), r.child("p"))
    pl = PlaneOrLine(f97, "plane", [1, 2, 3], [[1, 0, 4], [0, 1, 2]])
    rp = restrict(p, pl)
    for _ in range(20):
        u, v = r.element(f97), r.element(f97)
        assert rp.eval((u, v)) == p.eval(pl.point(u, v))
    assert rp.total_degree() <= sum(p.deg_bounds)


def test_restrict_eval_commutation_line_and_curve(f97):
    r = rng("commute")
    p = random_poly(f97, (2, 2), r.child("p"))
    ln = PlaneOrLine(f97, "line", [4, 9], [[2, 5]])
    rl = restrict(p, ln)
    c = Curve(f97, [[1, 2, 3], [0, 5, 1]])  # degree-2 curve
    rc = restrict(p, c)
    for t in range(12):
        assert rl.eval((t,)) == p.eval(ln.point(t))
        assert rc.eval((t,)) == p.eval(c.point(t))
    assert max(rc.individual_degrees()) <= c.degree * sum(p.deg_bounds)


def test_partial_sum_full_prefix_is_eval(f17):
    p = random_poly(f17, (2, 2), rng("ps"))
    pt = (3, 9)
    assert p.partial_sum(pt, []) == p.eval(pt)


def test_partial_sum_x1x2(f17):
    p = MultiPoly(f17, (1, 1), [0, 0, 0, 1])  # X1*X2
    assert p.partial_sum((1,), [(0, 1)]) == 1
    assert p.partial_sum((), [(0, 1), (0, 1)]) == 1


def test_partial_sum_brute_force(f17):
    H = (0, 1, 2)
    r = rng("ps2")
    for _ in range(5):
        p = random_poly(f17, (2, 2), r.child("p"))
        assert p.partial_sum((), [H, H]) == brute_sum(p, H)


def test_partial_sum_telescoping(f17):
    H = (0, 1, 5)
    p = random_poly(f17, (2, 2, 2), rng("tel"))
    total = p.partial_sum((), [H] * 3)
    acc = 0
    for h in H:
        acc = f17.add(acc, p.partial_sum((h,), [H] * 2)) if False else \
            p.field.add(acc, p.partial_sum((h,), [H, H]))
    assert acc == total


def test_prefix_too_long(f17):
    p = MultiPoly.zero(f17, (1,))
    with pytest.raises(PolyError):
        p.partial_sum((1, 2), [])


def test_bundle_single(f17):
    a = random_poly(f17, (2,), rng("b1"))
    b = bundle([a], [0])
    assert b.deg_bounds == (0, 2)
    for t in range(5):
        assert b.eval((0, t)) == a.eval((t,))


def test_bundle_pair_matches_switch_form(f17):
    # bundling [A, Z] over {0, 1} gives W*Z + (1-W)*A
    r = rng("b2")
    from zkipcp.poly import embed
    z = random_poly(f17, (2, 2), r.child("z"))
    a1 = random_poly(f17, (0, 2), r.child("a"))
    o = bundle([a1, z], [0, 1])
    for _ in range(10):
        w, x, y = (r.element(f17) for _ in range(3))
        lhs = o.eval((w, x, y))
        rhs = f17.add(f17.mul(w, z.eval((x, y))),
                      f17.mul(f17.sub(1, w), a1.eval((x, y))))
        assert lhs == rhs
    assert o.eval((1, 3, 4)) == z.eval((3, 4))
    assert o.eval((0, 3, 4)) == a1.eval((3, 4))


def test_bundle_three_random(f17):
    from zkipcp.poly import lagrange_basis_coeffs
    r = rng("b3")
    polys = [random_poly(f17, (2, 1), r.child("p", i)) for i in range(3)]
    S = [0, 1, 2]
    o = bundle(polys, S)
    for i, s in enumerate(S):
        for _ in range(4):
            pt = r.point(f17, 2)
            assert o.eval((s,) + pt) == polys[i].eval(pt)
    basis = lagrange_basis_coeffs(f17, S)
    for _ in range(10):
        w = r.element(f17)
        pt = r.point(f17, 2)
        expect = 0
        for i in range(3):
            li = 0
            for c in reversed(basis[i]):
                li = f17.add(f17.mul(li, w), c)
            expect = f17.add(expect, f17.mul(li, polys[i].eval(pt)))
        assert o.eval((w,) + pt) == expect


def test_bundle_length_mismatch(f17):
    with pytest.raises(PolyError):
        bundle([MultiPoly.zero(f17, (1,))], [0, 1])


def test_random_poly_constant_uniform(f3):
    from collections import Counter
    c = Counter()
    for i in range(3000):
        p = random_poly(f3, (0,), rng("rc", i))
        c[p.coeff_list()[0]] += 1
    exp = 3000 / 3
    chi2 = sum((c[v] - exp) ** 2 / exp for v in range(3))
    assert chi2 < 13.8  # 2 dof, p ~ 0.001


def test_random_poly_uniform_over_nine(f3):
    from collections import Counter
    c = Counter()
    for i in range(9000):
        p = random_poly(f3, (1,), rng("r9", i))
        c[tuple(p.coeff_list())] += 1
    exp = 9000 / 9
    chi2 = sum((c[k] - exp) ** 2 / exp for k in itertools.product(range(3), repeat=2))
    assert chi2 < 26.1  # 8 dof, p ~ 0.001


def test_random_poly_seed_determinism(f97):
    a = random_poly(f97, (2, 2), rng("det"))
    b = random_poly(f97, (2, 2), rng("det"))
    assert a == b


def test_schwartz_zippel_band(f97):
    r = rng("sz")
    p = random_poly(f97, (2, 2), r.child("p"))
    assert not p.is_zero()
    d_total = p.total_degree()
    zeros = 0
    n = 200
    for i in range(n):
        if p.eval(r.point(f97, 2)) == 0:
            zeros += 1
    bound = d_total / f97.order
    sigma = (bound * (1 - bound) / n) ** 0.5
    assert zeros / n <= bound + 5 * sigma


def test_poly_serialization_round_trip(gf16):
    p = random_poly(gf16, (2, 3), rng("ser"))
    assert poly_from_json(poly_to_json(p)) == p


def test_plane_canonicalization(f17):
    a = PlaneOrLine(f17, "plane", [1, 2, 3], [[1, 0, 4], [0, 1, 2]])
    # same plane: base shifted within the span, directions recombined
    b = PlaneOrLine(f17, "plane", [2, 3, 9], [[2, 0, 8], [1, 1, 6]])
    assert a == b
    u, v = a.locate((1, 2, 3))
    assert a.point(u, v) == (1, 2, 3)


def test_dependent_directions_rejected(f17):
    with pytest.raises(PolyError):
        PlaneOrLine(f17, "plane", [0, 0], [[1, 2], [2, 4]])


def test_substitute_and_sum_out(f97):
    r = rng("subst")
    p = random_poly(f97, (2, 2, 2), r.child("p"))
    sub = substitute_prefix(p, (5,))
    for _ in range(5):
        pt = r.point(f97, 2)
        assert sub.eval(pt) == p.eval((5,) + pt)
    H = (0, 1)
    so = sum_out_tail(p, 1, [H, H])
    for t in range(5):
        assert so.eval((t,)) == p.partial_sum((t,), [H, H])


def test_curve_through(f97):
    pts = [(1, 2), (3, 4), (5, 6)]
    params = [0, 1, 2]
    c = Curve.through(f97, params, pts)
    assert c.degree <= 2
    for t, pt in zip(params, pts):
        assert c.point(t) == pt
