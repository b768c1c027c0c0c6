"""The standard sumcheck protocol as a claim-reduction state machine.

Reduces "sum of F over H^m equals a" to a point claim "F(c) = b".  The
verifier never touches F: each round it degree-checks the prover's
univariate message, checks its H-sum against the running target, and draws
a challenge from the challenge domain (all of F by default; protocols that
restrict challenges to a subset I pass it explicitly).  The final point
claim is handed to the caller, who owns whatever oracle can check it.

Prover behavior is pluggable.  `HonestProver` answers with true partial
sums; `GreedyCheatProver` is the standard optimal-style cheat used by the
soundness Monte Carlo: whenever the running claim is false it sends the
degree-d message that satisfies the verifier's sum check and agrees with
the honest message on d points.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field, SubsetSpec
from .poly import MultiPoly, interpolate_univariate
from . import transcript as tr


@dataclass(frozen=True)
class SumClaim:
    H: tuple
    m: int
    deg_bounds: tuple
    target: int

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(int(h) for h in self.H))
        object.__setattr__(self, "deg_bounds", tuple(int(d) for d in self.deg_bounds))
        if len(self.H) < 1:
            raise ValueError("H must be nonempty")
        if len(self.deg_bounds) != self.m:
            raise ValueError("need one degree bound per variable")


@dataclass(frozen=True)
class PointClaim:
    point: tuple
    value: int

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(int(c) for c in self.point))


@dataclass
class Reject:
    reason: str


@dataclass
class AbortedByProver:
    reason: str


@dataclass
class RoundState:
    index: int                  # next round, 1-based
    assignment: tuple
    target: int
    challenge_domain: tuple
    claim: SumClaim


# -- summand access -----------------------------------------------------------

class Summand:
    """Prover-side access to the polynomial being summed: prefix sums over
    H-tails (a full-length prefix is a point evaluation), and per-round
    univariate messages.

    The default round_poly samples the next variable at the canonically-first
    d+1 field elements and interpolates; explicit summands override it with
    direct coefficient extraction (same values, one array pass per round)."""

    field: Field
    m: int
    deg_bounds: tuple

    def prefix_sum(self, prefix) -> int:
        raise NotImplementedError

    def round_poly(self, prefix) -> list[int]:
        f = self.field
        d = self.deg_bounds[len(prefix)]
        samples = f.first_elements(d + 1)
        vals = [self.prefix_sum(tuple(prefix) + (t,)) for t in samples]
        return interpolate_univariate(f, samples, vals)


class ExplicitSummand(Summand):
    def __init__(self, poly: MultiPoly, H):
        self.poly = poly
        self.field = poly.field
        self.m = poly.m
        self.deg_bounds = poly.deg_bounds
        self.H = tuple(int(h) for h in H)
        self._domains = [self.H] * self.m
        self._rp_cache = None

    def prefix_sum(self, prefix) -> int:
        tails = self._domains[len(prefix):]
        return self.poly.partial_sum(prefix, tails)

    def round_poly(self, prefix) -> list[int]:
        return _direct_round_poly(self, prefix)


def _direct_round_poly(summand, prefix) -> list[int]:
    """Coefficients of the round polynomial by substituting the prefix into
    the explicit summand and summing out the tail; incremental across rounds
    (the previous round's substituted polynomial is cached)."""
    from .poly import substitute_prefix, sum_out_tail
    prefix = tuple(int(c) for c in prefix)
    base, start = summand.poly, 0
    cached = summand._rp_cache
    if cached is not None and len(cached[0]) <= len(prefix) \
            and prefix[:len(cached[0])] == cached[0]:
        base, start = cached[1], len(cached[0])
    sub = substitute_prefix(base, prefix[start:])
    summand._rp_cache = (prefix, sub)
    j = len(prefix)
    uni = sum_out_tail(sub, 1, summand._domains[j + 1:])
    return uni.coeff_list()


class LazySummand(Summand):
    """Backed by a conditional sampler; the underlying polynomial is uniform
    over the sampler's solution set and materializes only where queried."""

    def __init__(self, constraint_set, rng):
        self.cs = constraint_set
        self.rng = rng
        self.field = constraint_set.field
        self.m = constraint_set.m
        self.deg_bounds = constraint_set.deg_bounds

    def prefix_sum(self, prefix) -> int:
        return self.cs.conditional_answer(prefix, self.rng)


class ComboSummand(Summand):
    """Fixed linear combination of summands over the same space."""

    def __init__(self, terms):
        self.terms = [(int(c), s) for c, s in terms]
        s0 = self.terms[0][1]
        self.field = s0.field
        self.m = s0.m
        self.deg_bounds = tuple(max(s.deg_bounds[i] for _, s in self.terms)
                                for i in range(self.m))

    def prefix_sum(self, prefix) -> int:
        f = self.field
        acc = 0
        for c, s in self.terms:
            acc = f.add(acc, f.mul(c, s.prefix_sum(prefix)))
        return acc

    def round_poly(self, prefix) -> list[int]:
        f = self.field
        width = self.deg_bounds[len(prefix)] + 1
        out = [0] * width
        for c, s in self.terms:
            part = s.round_poly(prefix)
            for j, v in enumerate(part):
                out[j] = f.add(out[j], f.mul(c, v))
        return out


class BatchFnSummand(Summand):
    """Virtual summand: evaluates a point function over the tail grid.  Used
    by provers whose polynomial is a composition too large to expand."""

    def __init__(self, field: Field, deg_bounds, H, batch_fn):
        self.field = field
        self.deg_bounds = tuple(deg_bounds)
        self.m = len(self.deg_bounds)
        self.H = tuple(int(h) for h in H)
        self.batch_fn = batch_fn  # list of points -> list of values

    def prefix_sum(self, prefix) -> int:
        import itertools
        f = self.field
        tail = self.m - len(prefix)
        pts = [tuple(prefix) + t for t in itertools.product(self.H, repeat=tail)]
        vals = self.batch_fn(pts)
        acc = 0
        for v in vals:
            acc = f.add(acc, int(v))
        return acc

    def round_poly(self, prefix) -> list[int]:
        """Sample values batched over (sample point, tail grid) at once."""
        import itertools
        f = self.field
        d = self.deg_bounds[len(prefix)]
        samples = f.first_elements(d + 1)
        tail = self.m - len(prefix) - 1
        tails = list(itertools.product(self.H, repeat=tail))
        pts = [tuple(prefix) + (t,) + tl for t in samples for tl in tails]
        vals = self.batch_fn(pts)
        sums = []
        for si in range(len(samples)):
            acc = 0
            for v in vals[si * len(tails):(si + 1) * len(tails)]:
                acc = f.add(acc, int(v))
            sums.append(acc)
        return interpolate_univariate(f, samples, sums)


# -- prover strategies ---------------------------------------------------------

class HonestProver:
    def __init__(self, summand: Summand):
        self.summand = summand

    def round_message(self, state: RoundState) -> list[int]:
        return list(self.summand.round_poly(state.assignment))


class GreedyCheatProver:
    """Sends honest messages while the running claim is true; once false,
    sends the degree-d message with the verifier's expected H-sum that agrees
    with the honest message on d points, and recovers if a challenge lands on
    one of those points."""

    def __init__(self, summand: Summand):
        self.summand = summand
        self.lucky = False

    def round_message(self, state: RoundState) -> list[int]:
        f = self.summand.field
        d = state.claim.deg_bounds[state.index - 1]
        honest = list(self.summand.round_poly(state.assignment))
        honest += [0] * (d + 1 - len(honest))
        true_sum = _h_sum(f, honest, state.claim.H)
        if true_sum == state.target:
            self.lucky = True
            return honest
        # honest + delta * u, with u having d roots and a nonzero H-sum
        u = _root_window_poly(f, d, state.claim.H)
        u += [0] * (d + 1 - len(u))
        delta = f.div(f.sub(state.target, true_sum), _h_sum(f, u, state.claim.H))
        return [f.add(a, f.mul(delta, b)) for a, b in zip(honest, u)]


def _h_sum(f: Field, coeffs: list, H) -> int:
    acc = 0
    for h in H:
        v = 0
        for c in reversed(coeffs):
            v = f.add(f.mul(v, h), c)
        acc = f.add(acc, v)
    return acc


def _root_window_poly(f: Field, d: int, H) -> list[int]:
    """A degree-d polynomial with d roots whose H-sum is nonzero."""
    if d == 0:
        return [1]
    for start in range(f.order - d + 1):
        coeffs = [1]
        for r in range(start, start + d):
            lower = [f.mul(c, f.neg(r)) for c in coeffs]
            coeffs = [0] + coeffs
            coeffs = [f.add(a, b) for a, b in zip(coeffs, lower + [0])]
        if _h_sum(f, coeffs, H) != 0:
            return coeffs
    raise ValueError("no usable cheat polynomial; field too small")


# -- the protocol ---------------------------------------------------------------

def sc_verifier_round(f: Field, g_coeffs, state: RoundState, challenge):
    """Degree and H-sum checks, then absorb the challenge.  Returns the next
    RoundState or Reject."""
    d = state.claim.deg_bounds[state.index - 1]
    if not isinstance(g_coeffs, (list, tuple)) or len(g_coeffs) > d + 1 or not g_coeffs:
        return Reject(f"round {state.index}: malformed message (degree bound {d})")
    g_coeffs = [int(c) for c in g_coeffs]
    if any(not 0 <= c < f.order for c in g_coeffs):
        return Reject(f"round {state.index}: coefficients outside the field")
    if _h_sum(f, list(g_coeffs), state.claim.H) != state.target:
        return Reject(f"round {state.index}: H-sum mismatch")
    c = int(challenge)
    new_target = 0
    for coef in reversed(g_coeffs):
        new_target = f.add(f.mul(new_target, c), coef)
    return RoundState(state.index + 1, state.assignment + (c,), new_target,
                      state.challenge_domain, state.claim)


def sc_run(field: Field, claim: SumClaim, prover, channel, rng, *,
           challenge_domain=None, prover_abort_outside_domain: bool = False,
           challenge_source=None):
    """Run the full m-round protocol.  Returns PointClaim, Reject, or
    AbortedByProver.

    `prover` exposes round_message(state).  Challenges come from
    `challenge_source(state, g_coeffs)` when given (adversarial-verifier
    tests), else uniformly from the challenge domain.  When
    `prover_abort_outside_domain` is set, the prover aborts on any challenge
    outside the domain instead of continuing.
    """
    domain = tuple(int(c) for c in (challenge_domain or range(field.order)))
    state = RoundState(1, (), int(claim.target), domain, claim)
    if claim.m == 0:
        channel.verifier_says(tr.OUTPUT_CLAIM, {"point": [], "value": state.target})
        return PointClaim((), state.target)
    for i in range(1, claim.m + 1):
        channel.set_round(i)
        g = prover.round_message(state)
        channel.prover_says(tr.POLY, list(g))
        if challenge_source is not None:
            c = int(challenge_source(state, g))
        else:
            c = rng.choice(domain)
        next_state = sc_verifier_round(field, g, state, c)
        if isinstance(next_state, Reject):
            channel.verifier_says(tr.VERDICT, {"accept": False, "reason": next_state.reason})
            return next_state
        channel.verifier_says(tr.CHALLENGE, c)
        if prover_abort_outside_domain and c not in domain:
            channel.prover_says(tr.ABORT, {"round": i, "challenge": c})
            return AbortedByProver(f"challenge {c} outside the agreed domain")
        state = next_state
    out = PointClaim(state.assignment, state.target)
    channel.verifier_says(tr.OUTPUT_CLAIM, {"point": list(out.point), "value": out.value})
    return out


def run_standard_sumcheck(poly: MultiPoly, H, target: int | None = None, *,
                          rng, malicious: bool = False, challenge_domain=None):
    """Convenience driver: sumcheck an explicit polynomial over H^m.

    Returns (result, transcript, claim_is_true) where claim_is_true checks the
    output point claim directly against the polynomial.
    """
    f = poly.field
    H = tuple(int(h) for h in H)
    true_sum = poly.partial_sum((), [H] * poly.m)
    a = true_sum if target is None else int(target)
    claim = SumClaim(H, poly.m, poly.deg_bounds, a)
    summand = ExplicitSummand(poly, H)
    prover = GreedyCheatProver(summand) if malicious else HonestProver(summand)
    t = tr.Transcript("sumcheck", {"m": poly.m, "deg_bounds": list(poly.deg_bounds),
                                   "H": list(H), "target": a})
    result = sc_run(f, claim, prover, tr.Channel(t), rng,
                    challenge_domain=challenge_domain)
    ok = None
    if isinstance(result, PointClaim):
        ok = poly.eval(result.point) == result.value
    return result, t, ok
