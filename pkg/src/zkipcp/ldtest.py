"""Plane-vs-point low individual degree test: a two-prover one-round engine.

The verifier symmetrizes the provers' roles with a coin, then runs one of
two branches chosen uniformly:

* total-degree branch: a random plane s and a random point alpha on it; the
  plane prover answers with the restriction to s (checked to have total
  degree <= m*d), the lookup prover with the value at alpha; accept iff they
  agree at alpha.
* axis-parallel branch: additionally a random axis-parallel line through
  alpha; the lookup prover answers with the line restriction (checked to
  have degree <= d); accept iff plane and line answers agree at alpha.

Strategies are deterministic given (question, shared randomness); honest
strategies answer according to one fixed polynomial, mixtures select a
polynomial per round from shared randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .poly import MultiPoly, PlaneOrLine, restrict
from . import transcript as tr


@dataclass
class LdtParams:
    field: Field
    m: int
    d: int

    @property
    def total_degree_bound(self) -> int:
        return self.m * self.d


@dataclass
class LdtChallenge:
    branch: str                   # 'total' or 'axis'
    plane: PlaneOrLine
    alpha: tuple
    line: PlaneOrLine | None      # axis branch only
    roles_swapped: bool


class ProverStrategy:
    """respond(question, shared) -> answer; question is
    ('plane', s), ('line', l), or ('point', alpha)."""

    def respond(self, question, shared):
        raise NotImplementedError


class HonestStrategy(ProverStrategy):
    def __init__(self, poly: MultiPoly):
        self.poly = poly

    def respond(self, question, shared):
        kind, obj = question
        if kind == "point":
            return self.poly.eval(obj)
        return restrict(self.poly, obj)


class MixtureStrategy(ProverStrategy):
    """Shared randomness selects one polynomial per round; both provers built
    from the same mixture answer according to the same selection."""

    uses_shared = True

    def __init__(self, dist):
        total = sum(w for w, _ in dist)
        if total <= 0 or not dist:
            raise ValueError("mixture needs positive total weight")
        self.dist = [(w / total, p) for w, p in dist]

    def select(self, shared) -> MultiPoly:
        u = shared  # a float in [0, 1)
        acc = 0.0
        for w, p in self.dist:
            acc += w
            if u < acc:
                return p
        return self.dist[-1][1]

    def respond(self, question, shared):
        poly = self.select(shared)
        kind, obj = question
        if kind == "point":
            return poly.eval(obj)
        return restrict(poly, obj)


def make_honest_strategy(Q: MultiPoly) -> ProverStrategy:
    return HonestStrategy(Q)


def make_mixture_strategy(dist) -> tuple:
    s = MixtureStrategy(dist)
    return s, s


def sample_plane(field: Field, m: int, rng) -> PlaneOrLine:
    """Uniform over planes: uniform base and independent directions, then
    canonicalized (every plane has equally many such representations)."""
    f = field
    while True:
        base = [rng.element(f) for _ in range(m)]
        d1 = [rng.element(f) for _ in range(m)]
        d2 = [rng.element(f) for _ in range(m)]
        try:
            return PlaneOrLine(f, "plane", base, [d1, d2])
        except Exception:
            continue


def sample_challenge(params: LdtParams, rng) -> LdtChallenge:
    f = params.field
    plane = sample_plane(f, params.m, rng)
    u, v = rng.element(f), rng.element(f)
    alpha = plane.point(u, v)
    branch = "total" if rng.coin() == 0 else "axis"
    line = None
    if branch == "axis":
        axis = rng.randrange(params.m)
        base = list(alpha)
        base[axis] = 0
        unit = [0] * params.m
        unit[axis] = 1
        line = PlaneOrLine(f, "axis_parallel_line", base, [unit])
    swapped = rng.coin() == 1
    return LdtChallenge(branch, plane, alpha, line, swapped)


def _check_total_degree(g: MultiPoly, bound: int) -> bool:
    return isinstance(g, MultiPoly) and g.m == 2 and g.total_degree() <= bound


def ldt_round(strategies, params: LdtParams, rng, *, channel=None,
              challenge: LdtChallenge | None = None) -> bool:
    """One round of the test; returns accept/reject.  `strategies` is the
    pair of prover strategies; shared randomness is drawn here and handed to
    both (the provers have no other channel)."""
    f = params.field
    if f.order <= params.total_degree_bound:
        raise ValueError("field too small for the total-degree check")
    ch = challenge or sample_challenge(params, rng)
    p1, p2 = strategies
    shared = 0.0
    if any(getattr(s, "uses_shared", False) for s in strategies):
        shared = rng.randrange(1 << 30) / (1 << 30)
    if ch.roles_swapped:
        plane_prover, lookup_prover = p2, p1
    else:
        plane_prover, lookup_prover = p1, p2

    g = plane_prover.respond(("plane", ch.plane), shared)
    if channel is not None:
        channel.prover_says(tr.POLY, getattr(g, "coeff_list", lambda: g)())
    if not _check_total_degree(g, params.total_degree_bound):
        _verdict(channel, False, "plane answer fails the total-degree check")
        return False
    uv = ch.plane.locate(ch.alpha)
    g_alpha = g.eval(uv)

    if ch.branch == "total":
        z = lookup_prover.respond(("point", ch.alpha), shared)
        if channel is not None:
            channel.prover_says(tr.SCALAR, int(z))
        ok = g_alpha == int(z)
        _verdict(channel, ok, "point consistency")
        return ok

    h = lookup_prover.respond(("line", ch.line), shared)
    if channel is not None:
        channel.prover_says(tr.POLY, getattr(h, "coeff_list", lambda: h)())
    if not isinstance(h, MultiPoly) or h.m != 1 or \
            max(h.individual_degrees()) > params.d:
        _verdict(channel, False, "line answer fails the degree check")
        return False
    (t,) = ch.line.locate(ch.alpha)
    ok = h.eval((t,)) == g_alpha
    _verdict(channel, ok, "line consistency")
    return ok


def _verdict(channel, ok: bool, reason: str):
    if channel is not None:
        channel.verifier_says(tr.VERDICT, {"accept": ok, "check": reason})


def acceptance_rate(strategies, params: LdtParams, trials: int, rng) -> float:
    accepts = 0
    for i in range(trials):
        if ldt_round(strategies, params, rng.child("trial", i)):
            accepts += 1
    return accepts / trials


def axis_catch_fraction(poly: MultiPoly, params: LdtParams) -> float:
    """Exact fraction of (axis, line) pairs on which the polynomial's
    axis-parallel restriction exceeds degree d (enumeration; small fields)."""
    f = params.field
    m = params.m
    import itertools
    bad = 0
    total = 0
    for axis in range(m):
        others = [range(f.order)] * (m - 1)
        for rest in itertools.product(*others):
            base = list(rest[:axis]) + [0] + list(rest[axis:])
            unit = [0] * m
            unit[axis] = 1
            line = PlaneOrLine(f, "axis_parallel_line", base, [unit])
            r = restrict(poly, line)
            total += 1
            if max(r.individual_degrees()) > params.d:
                bad += 1
    return bad / total
