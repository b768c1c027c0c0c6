"""Algebraic commitments to polynomials.

Commit to Q in F[X] (degree d_Q per variable) by drawing Z in
F[X^(d_Q), Y^(d)] uniformly subject to sum_{beta in G^k} Z(alpha, beta) =
Q(alpha) for alpha in K^m, where K is the canonically-first d_Q+1 field
elements; by degrees the recovered polynomial sum_{G^k} Z(X, beta) then
equals Q identically (binding).  Hiding needs d >= 2(|G|-1): below that
threshold a single query can leak (the multilinear d=1 case admits a
one-query attack at (1/2, ..., 1/2), kept here behind an explicit flag as a
regression witness).

Decommitment of Q(alpha) runs the weak-ZK sumcheck over the slice
Z(alpha, .) with a fresh mask polynomial per session.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field
from .oracle import PolyOracle
from .poly import MultiPoly, PolyError, power_sums, random_poly
from .sampler import ConstraintSet
from .sumcheck import GreedyCheatProver, HonestProver, PointClaim, Reject
from .zksumcheck import MixedSummand, SliceSummand, WeakHonestVerifier, WeakZkInstance, weak_zk_run

import itertools

import numpy as np


class CommitError(ValueError):
    pass


@dataclass
class Commitment:
    field: Field
    m: int
    k: int
    d_q: int
    d: int
    G: tuple
    K: tuple
    z_poly: MultiPoly
    masks: list
    sessions_used: int = 0

    def oracle(self, query_bound=None) -> PolyOracle:
        return PolyOracle(self.z_poly, label="Z", query_bound=query_bound)

    def recovered(self) -> MultiPoly:
        """sum_{beta in G^k} Z(X, beta) as an explicit polynomial."""
        return recover_by_summation(self.z_poly, self.m, self.G)


def recover_by_summation(z_poly: MultiPoly, m: int, G) -> MultiPoly:
    f = z_poly.field
    k = z_poly.m - m
    nd = z_poly.nd()
    for axis in range(m + k - 1, m - 1, -1):
        width = z_poly.deg_bounds[axis] + 1
        ps = power_sums(f, G, width)
        moved = np.moveaxis(nd, axis, -1)
        acc = np.zeros(moved.shape[:-1], dtype=np.int64)
        for j in range(width):
            if ps[j]:
                acc = f.add_arr(acc, f.scale_arr(ps[j], moved[..., j]))
        nd = acc
    return MultiPoly(f, z_poly.deg_bounds[:m], nd.reshape(-1))


def commit(Q: MultiPoly, k: int, G, d: int, rng, *, sessions: int = 3,
           allow_insecure: bool = False) -> Commitment:
    """Commit to Q with security parameter |G|^k.  `d` is the per-variable
    degree of the randomizer's summed block; d >= 2(|G|-1) is required for
    hiding unless allow_insecure is set (negative tests only)."""
    f = Q.field
    G = tuple(int(g) for g in G)
    if len(set(G)) != len(G) or not G:
        raise CommitError("G must be a nonempty set of distinct elements")
    if d < 2 * (len(G) - 1) and not allow_insecure:
        raise CommitError(
            f"d={d} is below the hiding threshold 2(|G|-1)={2 * (len(G) - 1)}")
    m = Q.m
    d_q = max(Q.deg_bounds) if Q.m else 0
    K = tuple(f.first_elements(d_q + 1))
    z_bounds = (d_q,) * m + (d,) * k
    cs = ConstraintSet(f, z_bounds, [K] * m + [G] * k)
    for alpha in itertools.product(K, repeat=m):
        cs.add_constraint(alpha, Q.eval(alpha))
    z_poly = cs.sample_poly(rng.child("Z"))
    masks = [random_poly(f, (d,) * k, rng.child("mask", i)) for i in range(sessions)]
    c = Commitment(f, m, k, d_q, d, G, K, z_poly, masks)
    rec = c.recovered()
    from .poly import align
    qa, ra = align(Q if Q.m else MultiPoly(f, (0,) * m, Q.coeffs), rec)
    if not np.array_equal(qa.coeffs, ra.coeffs):
        raise CommitError("recovered polynomial does not match Q")
    return c


def decommit(c: Commitment, alpha, rng, *, claimed: int | None = None,
             malicious: bool = False, channel=None):
    """Open Q(alpha): the prover sends the value and proves
    sum_{G^k} Z(alpha, .) = value via the weak-ZK sumcheck; the verifier then
    checks the reduced point claim against the Z oracle.

    Returns (accepted, value, view).
    """
    f = c.field
    alpha = tuple(int(x) for x in alpha)
    if c.sessions_used >= len(c.masks):
        raise CommitError("no fresh decommit masks left; recommit with more sessions")
    mask = c.masks[c.sessions_used]
    c.sessions_used += 1
    true_val = c.recovered().eval(alpha)
    value = true_val if claimed is None else int(claimed)
    inst = WeakZkInstance(f, c.k, (c.d,) * c.k, c.G, value)
    z_src = MixedSummand(c.z_poly, [c.K] * c.m + [c.G] * c.k)
    summand = SliceSummand(z_src, alpha, (c.d,) * c.k)
    prover_cls = GreedyCheatProver if malicious else HonestProver
    out, view = weak_zk_run(summand, inst, WeakHonestVerifier(), rng, mask=mask,
                            channel=channel, prover_cls=prover_cls)
    if isinstance(out, Reject):
        return False, None, view
    assert isinstance(out, PointClaim)
    z_at = c.z_poly.eval(alpha + out.point)
    if z_at != out.value:
        return False, None, view
    return True, value, view


def counterexample_multilinear(field: Field, a: int, k: int):
    """The one-query attack point against multilinear (d=1, G={0,1})
    commitments in odd characteristic: the committed element is readable at
    (1/2, ..., 1/2)."""
    if field.char == 2:
        raise CommitError("the attack needs odd characteristic")
    inv2 = field.inv(2)
    point = (inv2,) * k
    value = field.mul(int(a), field.pow(inv2, k))
    return point, value
