"""Zero-knowledge sumcheck protocols.

Two protocols over a summand polynomial F in F[X_1..X_m] with per-variable
degree bounds:

* weak ZK: the prover sends a random masking polynomial R as an oracle,
  claims z = sum of R, and runs standard sumcheck on rho*F + R; the verifier
  un-masks the final value with one oracle query.  Any verifier that makes q
  oracle queries learns at most q evaluations of F, and the simulator makes
  at most one F-query per mask query.

* strong ZK: the mask is hidden behind an algebraic commitment.  The prover
  sends the pair oracle O(W,X,Y) = W*Z(X,Y) + (1-W)*A(Y) where Z commits to
  the mask R(X) = sum_{beta in G^k} Z(X,beta); runs the I-restricted
  sumcheck on rho1*F + R (aborting if a challenge leaves I); reveals
  w = R(c); and decommits w via the weak protocol applied to Z(c,.) with
  mask A.  Any verifier making fewer than lam^k oracle queries learns one
  evaluation of F at a point of I^m, and the simulator makes exactly one
  F-query.

Provers can run off explicit polynomial draws (fast, numpy-backed) or fully
lazily through the conditional sampler (so exhaustive enumeration of the
protocol's randomness stays tractable); the two are distributionally
identical.  The interaction cores are exposed separately from the runners
so larger protocols can embed these as subprotocols inside their own
oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .oracle import Oracle, PolyOracle, SamplerOracle
from .poly import MultiPoly, bundle, embed, random_poly
from .sampler import ConstraintSet
from .sumcheck import (
    AbortedByProver,
    ComboSummand,
    ExplicitSummand,
    GreedyCheatProver,
    HonestProver,
    LazySummand,
    PointClaim,
    Reject,
    SumClaim,
    Summand,
    sc_run,
)
from .views import RecordingChannel, View, ViewedOracle
from . import transcript as tr


# -- instances ---------------------------------------------------------------

@dataclass
class WeakZkInstance:
    field: Field
    m: int
    deg_bounds: tuple
    H: tuple
    target: int

    def __post_init__(self):
        self.deg_bounds = tuple(int(d) for d in self.deg_bounds)
        self.H = tuple(int(h) for h in self.H)
        self.target = int(self.target)
        if len(self.deg_bounds) != self.m:
            raise ValueError("need one degree bound per variable")

    def soundness_bound(self) -> float:
        md = self.m * max(self.deg_bounds)
        q = self.field.order
        return (md + 1) / (q - 1) + md / q


@dataclass
class StrongZkInstance:
    field: Field
    H: tuple
    deg_bounds: tuple       # F's per-variable bounds (the X block)
    k: int
    lam: int
    G: tuple
    I: tuple
    target: int

    def __post_init__(self):
        self.H = tuple(int(h) for h in self.H)
        self.deg_bounds = tuple(int(d) for d in self.deg_bounds)
        self.G = tuple(int(g) for g in self.G)
        self.I = tuple(int(c) for c in self.I)
        self.target = int(self.target)
        if len(self.G) != self.lam:
            raise ValueError("|G| must equal lam")
        if len(set(self.G)) != self.lam:
            raise ValueError("G must have distinct elements")
        if 2 * self.lam > max(self.deg_bounds):
            raise ValueError("need 2*lam <= d (the mask commitment is not hiding)")
        if not self.I:
            raise ValueError("challenge set I is empty")

    @property
    def m(self) -> int:
        return len(self.deg_bounds)

    @property
    def y_bounds(self) -> tuple:
        return (2 * self.lam,) * self.k

    @property
    def z_bounds(self) -> tuple:
        return self.deg_bounds + self.y_bounds

    @property
    def query_bound(self) -> int:
        return self.lam ** self.k

    def oracle_deg_bounds(self) -> tuple:
        return (1,) + tuple(max(d, 2 * self.lam) for d in self.deg_bounds) + self.y_bounds

    def soundness_bound(self) -> float:
        d = max(max(self.deg_bounds), 2 * self.lam)
        q = self.field.order
        return self.m * d / len(self.I) + (self.k * d + 2) / (q - 1)


class SliceSummand(Summand):
    """A summand obtained by fixing a prefix of another summand's variables."""

    def __init__(self, base: Summand, fixed_prefix, deg_bounds):
        self.base = base
        self.fixed = tuple(int(c) for c in fixed_prefix)
        self.field = base.field
        self.deg_bounds = tuple(deg_bounds)
        self.m = len(self.deg_bounds)

    def prefix_sum(self, prefix) -> int:
        return self.base.prefix_sum(self.fixed + tuple(prefix))

    def round_poly(self, prefix) -> list[int]:
        return self.base.round_poly(self.fixed + tuple(prefix))


class MixedSummand(Summand):
    """Explicit summand with per-variable summation domains."""

    def __init__(self, poly: MultiPoly, domains):
        self.poly = poly
        self.field = poly.field
        self.m = poly.m
        self.deg_bounds = poly.deg_bounds
        self._domains = [tuple(int(h) for h in d) for d in domains]
        self._rp_cache = None

    @property
    def domains(self):
        return self._domains

    def prefix_sum(self, prefix) -> int:
        return self.poly.partial_sum(prefix, self._domains[len(prefix):])

    def round_poly(self, prefix) -> list[int]:
        from .sumcheck import _direct_round_poly
        return _direct_round_poly(self, prefix)


class PairBundleOracle(Oracle):
    """O(W, X, Y) = W * Z(X, Y) + (1 - W) * A(Y); the two components are
    recovered at W = 1 and W = 0.  Component evaluations with zero Lagrange
    weight are skipped, so pure component queries touch only that component."""

    def __init__(self, field: Field, m: int, k: int, z_eval, a_eval, **kw):
        super().__init__(field, 1 + m + k, **kw)
        self.mx = m
        self.ky = k
        self.z_eval = z_eval
        self.a_eval = a_eval

    def _answer_point(self, point):
        return pair_bundle_value(self.field, self.mx, point, self.z_eval, self.a_eval)


def pair_bundle_value(f: Field, m: int, point, z_eval, a_eval) -> int:
    w = point[0]
    xy = tuple(point[1:])
    y = tuple(point[1 + m:])
    acc = 0
    if w != 0:
        acc = f.add(acc, f.mul(w, z_eval(xy)))
    if w != 1:
        acc = f.add(acc, f.mul(f.sub(1, w), a_eval(y)))
    return acc


# -- honest verifier strategies ------------------------------------------------

class WeakHonestVerifier:
    """Uniform rho in F*, uniform challenges, one final un-mask query."""

    def __init__(self, challenge_domain=None):
        self.challenge_domain = challenge_domain
        self.outcome = None

    def setup(self, oracle, view, inst, rng):
        self.oracle = oracle
        self.view = view
        self.inst = inst
        self.rng = rng
        if self.challenge_domain is None:
            self.challenge_domain = tuple(range(inst.field.order))

    def choose_rho(self, z):
        rho = self.rng.nonzero(self.inst.field)
        self.view.coin(rho)
        return rho

    def choose_challenge(self, state, g):
        c = self.rng.choice(self.challenge_domain)
        self.view.coin(c)
        return c

    def final(self, data):
        if data["result"] != "point-claim":
            self.outcome = data["result"]
            return self.outcome
        f = self.inst.field
        mask_val = self.oracle.query(data["point"])
        value = f.div(f.sub(data["value"], mask_val), data["rho"])
        self.outcome = PointClaim(data["point"], value)
        self.view.note("claim", {"point": list(data["point"]), "value": value})
        return self.outcome


class StrongHonestVerifier:
    """Uniform rho's in F*, X-challenges from I, weak challenges from F, and
    the two final oracle checks (un-mask A, check the decommitted point)."""

    def __init__(self):
        self.outcome = None

    def setup(self, oracle, view, inst, rng):
        self.oracle = oracle
        self.view = view
        self.inst = inst
        self.rng = rng

    def choose_rho1(self, z):
        rho = self.rng.nonzero(self.inst.field)
        self.view.coin(rho)
        return rho

    def choose_x_challenge(self, state, g):
        c = self.rng.choice(self.inst.I)
        self.view.coin(c)
        return c

    def choose_weak_rho(self, z2):
        rho = self.rng.nonzero(self.inst.field)
        self.view.coin(rho)
        return rho

    def choose_weak_challenge(self, state, g):
        c = self.rng.element(self.inst.field)
        self.view.coin(c)
        return c

    def final(self, data):
        if data["result"] != "point-claim":
            self.outcome = data["result"]
            return self.outcome
        f = self.inst.field
        m = self.inst.m
        c, w, rho1, gm_cm = data["c"], data["w"], data["rho1"], data["gm_cm"]
        c2, b2, rho2 = data["c2"], data["b2"], data["rho2"]
        a_val = self.oracle.query((0,) + (0,) * m + tuple(c2))
        claimed_zc = f.div(f.sub(b2, a_val), rho2)
        z_val = self.oracle.query((1,) + tuple(c) + tuple(c2))
        if z_val != claimed_zc:
            self.outcome = Reject("decommitted point disagrees with the oracle")
            self.view.note("verdict", {"accept": False})
            return self.outcome
        self.outcome = PointClaim(c, f.div(f.sub(gm_cm, w), rho1))
        self.view.note("claim", {"point": list(c), "value": self.outcome.value})
        return self.outcome


# -- weak ZK: interaction core and runner -----------------------------------------

def weak_interact(f: Field, target: int, H, deg_bounds, F_summand: Summand,
                  mask_summand: Summand, hooks, rec, rng, *, msg_prefix: str = "",
                  prover_cls=HonestProver):
    """The weak protocol's message flow: z, rho, masked sumcheck.  Returns
    ('reject', Reject) or ('ok', dict(rho, point, value, z)).  Rounds: the
    z/rho exchange is round 1, the sumcheck rounds follow."""
    rec.set_round(1)
    z = mask_summand.prefix_sum(())
    rec.prover_says(msg_prefix + "z", z)
    rho = int(hooks.choose_rho(z))
    claim = SumClaim(H, len(deg_bounds), deg_bounds, f.add(f.mul(rho, target), z))
    combo = ComboSummand([(rho, F_summand), (1, mask_summand)])
    inner_rec = rec.offset(1, rec.prefix + msg_prefix)
    result = sc_run(f, claim, prover_cls(combo), inner_rec, rng,
                    challenge_source=hooks.choose_challenge)
    if not isinstance(result, PointClaim):
        return "reject", result
    return "ok", {"rho": rho, "point": result.point, "value": result.value, "z": z}


def weak_zk_run(F_summand: Summand, inst: WeakZkInstance, vstar, rng, *,
                mask: MultiPoly | None = None, prover_mode: str = "explicit",
                channel=None, prover_cls=HonestProver, mask_query_bound=None):
    """Run the weak-ZK sumcheck with a real prover.  Returns (outcome, view)
    where outcome is the verifier strategy's final result (for the honest
    verifier: a PointClaim about F, or Reject)."""
    f = inst.field
    view = View()
    rec = RecordingChannel(view, channel)
    domains = [inst.H] * inst.m
    if mask is not None:
        r_poly = mask
    elif prover_mode == "explicit":
        r_poly = random_poly(f, inst.deg_bounds, rng.child("mask"))
    else:
        r_poly = None
    if r_poly is not None:
        r_summand: Summand = MixedSummand(r_poly, domains)
        mask_oracle = PolyOracle(r_poly, sum_domains=domains, label="mask",
                                 query_bound=mask_query_bound)
    else:
        cs = ConstraintSet(f, inst.deg_bounds, domains)
        prng = rng.child("mask")
        r_summand = LazySummand(cs, prng)
        mask_oracle = SamplerOracle(cs, prng, label="mask", query_bound=mask_query_bound)
    voracle = ViewedOracle(mask_oracle, view, "mask")
    vstar.setup(voracle, view, inst, rng.child("verifier"))

    status, res = weak_interact(f, inst.target, inst.H, inst.deg_bounds,
                                F_summand, r_summand, vstar, rec, rng.child("sc"),
                                prover_cls=prover_cls)
    if status == "reject":
        data = {"result": res}
    else:
        data = {"result": "point-claim", "point": res["point"],
                "value": res["value"], "rho": res["rho"]}
    outcome = vstar.final(data)
    return (outcome if outcome is not None else data.get("result")), view


# -- weak ZK: simulator core and runner ----------------------------------------------

class WeakSimCore:
    """Straightline simulator state for the weak protocol.

    Phase 1 (before rho is known): mask answers come from a uniform mask.
    Phase 2: Q = rho*F + R is drawn conditioned on the sum constraint and the
    transferred phase-1 answers; mask answers become Q(q) - rho*F(q), one
    F-query per answer, and the protocol messages are partial sums of Q.

    mode='explicit' (default) materializes the mask and Q as dense
    polynomials: fast, and distributionally identical to mode='lazy', which
    draws only the answered functionals through the conditional sampler (the
    lazy mode keeps the randomness surface small enough for exhaustive
    enumeration)."""

    def __init__(self, field: Field, deg_bounds, H, f_query, rng,
                 mode: str = "lazy"):
        self.f = field
        self.deg_bounds = tuple(deg_bounds)
        self.H = tuple(int(h) for h in H)
        self.f_query = f_query      # callable(prefix) -> int; may be set later
        self.rng = rng
        self.mode = mode
        self._domains = [self.H] * len(self.deg_bounds)
        if mode == "lazy":
            self.cs_mask = ConstraintSet(field, self.deg_bounds, self._domains)
            self.r_poly = None
        else:
            self.r_poly = random_poly(field, self.deg_bounds, rng.child("mask"))
            self.entries: list = []
        self.cs_q = None
        self.q_poly = None
        self.rho = None
        self.target = None
        self.f_query_count = 0
        self.mask_query_count = 0

    def _f(self, prefix) -> int:
        if len(prefix) == 0:
            return self.target  # the empty prefix sum is the claim itself
        self.f_query_count += 1
        return int(self.f_query(prefix))

    def _phase1_answer(self, q) -> int:
        if self.mode == "lazy":
            return self.cs_mask.conditional_answer(q, self.rng)
        v = self.r_poly.partial_sum(q, self._domains[len(q):])
        self.entries.append((q, v))
        return v

    def _phase1_entries(self):
        return self.cs_mask.entries if self.mode == "lazy" else self.entries

    def mask_answer(self, q) -> int:
        self.mask_query_count += 1
        q = tuple(int(c) for c in q)
        if self.cs_q is None:
            return self._phase1_answer(q)
        if self.q_poly is not None:
            qv = self.q_poly.partial_sum(q, self._domains[len(q):])
        else:
            qv = self.cs_q.conditional_answer(q, self.rng)
        return self.f.sub(qv, self.f.mul(self.rho, self._f(q)))

    def z_message(self) -> int:
        return self._phase1_answer(())

    def begin_phase2(self, rho: int, target: int):
        self.rho = int(rho)
        self.target = int(target)
        cs_q = ConstraintSet(self.f, self.deg_bounds, self._domains)
        for q, ans in self._phase1_entries():
            cs_q.add_constraint(q, self.f.add(ans, self.f.mul(self.rho, self._f(q))))
        self.cs_q = cs_q
        if self.mode != "lazy":
            self.q_poly = cs_q.sample_poly(self.rng.child("q"))

    def q_summand(self) -> Summand:
        if self.q_poly is not None:
            return MixedSummand(self.q_poly, self._domains)
        return LazySummand(self.cs_q, self.rng)


def weak_sim_interact(sim: WeakSimCore, f: Field, target: int, H, deg_bounds,
                      hooks, rec, rng, *, msg_prefix: str = ""):
    """Simulated counterpart of weak_interact, sharing message order."""
    rec.set_round(1)
    z = sim.z_message()
    rec.prover_says(msg_prefix + "z", z)
    rho = int(hooks.choose_rho(z))
    sim.begin_phase2(rho, target)
    claim = SumClaim(H, len(deg_bounds), deg_bounds, f.add(f.mul(rho, target), z))
    inner_rec = rec.offset(1, rec.prefix + msg_prefix)
    result = sc_run(f, claim, HonestProver(sim.q_summand()), inner_rec, rng,
                    challenge_source=hooks.choose_challenge)
    if not isinstance(result, PointClaim):
        return "reject", result
    return "ok", {"rho": rho, "point": result.point, "value": result.value, "z": z}


class _FnBackedOracle(Oracle):
    def __init__(self, field, m, sum_domains, answer_fn, query_bound, label):
        super().__init__(field, m, sum_domains=sum_domains, query_bound=query_bound,
                         label=label)
        self.answer_fn = answer_fn

    def _answer_point(self, point):
        return self.answer_fn(point)

    def _answer_prefix(self, prefix):
        return self.answer_fn(prefix)


def weak_zk_simulate(f_query, inst: WeakZkInstance, vstar, rng, *, channel=None,
                     mask_query_bound=None, mode: str = "lazy"):
    """Simulate the weak protocol's verifier view using only per-query access
    to F.  Returns (outcome, view, sim) with sim exposing query counters."""
    f = inst.field
    view = View()
    rec = RecordingChannel(view, channel)
    sim = WeakSimCore(f, inst.deg_bounds, inst.H, f_query, rng.child("sim"),
                      mode=mode)
    mask_oracle = _FnBackedOracle(f, inst.m, [inst.H] * inst.m, sim.mask_answer,
                                  mask_query_bound, "mask")
    voracle = ViewedOracle(mask_oracle, view, "mask")
    vstar.setup(voracle, view, inst, rng.child("verifier"))

    status, res = weak_sim_interact(sim, f, inst.target, inst.H, inst.deg_bounds,
                                    vstar, rec, rng.child("sc"))
    if status == "reject":
        data = {"result": res}
    else:
        data = {"result": "point-claim", "point": res["point"],
                "value": res["value"], "rho": res["rho"]}
    outcome = vstar.final(data)
    assert sim.f_query_count <= sim.mask_query_count, \
        "simulator exceeded one F-query per mask query"
    return (outcome if outcome is not None else data.get("result")), view, sim


# -- strong ZK: prover state, interaction core, runner ------------------------------

@dataclass
class StrongProverState:
    z_src: Summand
    a_src: Summand
    z_eval: object
    a_eval: object
    z_poly: MultiPoly | None = None
    a_poly: MultiPoly | None = None


def strong_prover_setup(inst: StrongZkInstance, rng, prover_mode: str = "explicit",
                        check_oracle_degrees: bool = False) -> StrongProverState:
    f = inst.field
    m, k = inst.m, inst.k
    domains = [inst.H] * m + [inst.G] * k
    if prover_mode == "explicit":
        z_poly = random_poly(f, inst.z_bounds, rng.child("Z"))
        a_poly = random_poly(f, inst.y_bounds, rng.child("A"))
        st = StrongProverState(MixedSummand(z_poly, domains),
                               MixedSummand(a_poly, [inst.G] * k),
                               z_poly.eval, a_poly.eval, z_poly, a_poly)
        if check_oracle_degrees:
            o_poly = bundle([embed(a_poly, inst.z_bounds,
                                   var_map=list(range(m, m + k))), z_poly], [0, 1])
            decl = inst.oracle_deg_bounds()
            actual = o_poly.individual_degrees()
            assert all(a <= d for a, d in zip(actual, decl)), \
                f"honest oracle degrees {actual} exceed declared {decl}"
        return st
    cs_z = ConstraintSet(f, inst.z_bounds, domains)
    cs_a = ConstraintSet(f, inst.y_bounds, [inst.G] * k)
    z_rng = rng.child("Z")
    a_rng = rng.child("A")
    return StrongProverState(
        LazySummand(cs_z, z_rng), LazySummand(cs_a, a_rng),
        lambda pt: cs_z.conditional_answer(pt, z_rng),
        lambda pt: cs_a.conditional_answer(pt, a_rng))


def strong_interact(F_summand: Summand, inst: StrongZkInstance, st: StrongProverState,
                    hooks, rec, rng, *, x_prover_cls=HonestProver):
    """Message flow of the strong protocol (everything except oracle setup and
    the verifier's final oracle checks).  Returns ('reject'|'abort', result)
    or ('ok', data) with the fields the verifier needs for its checks."""
    f = inst.field
    rec.set_round(1)
    z = st.z_src.prefix_sum(())
    rec.prover_says("z", z)
    rho1 = int(hooks.choose_rho1(z))
    claim = SumClaim(inst.H, inst.m, inst.deg_bounds,
                     f.add(f.mul(rho1, inst.target), z))
    rz = SliceSummand(st.z_src, (), inst.deg_bounds)
    combo = ComboSummand([(rho1, F_summand), (1, rz)])
    result = sc_run(f, claim, x_prover_cls(combo), rec.offset(1), rng.child("sc"),
                    challenge_domain=inst.I, prover_abort_outside_domain=True,
                    challenge_source=hooks.choose_x_challenge)
    if not isinstance(result, PointClaim):
        return ("abort" if isinstance(result, AbortedByProver) else "reject"), result
    c, gm_cm = result.point, result.value
    rec.set_round(inst.m + 2)
    w = st.z_src.prefix_sum(c)
    rec.prover_says("w", w)

    status, res2 = weak_interact(
        f, w, inst.G, inst.y_bounds,
        SliceSummand(st.z_src, c, inst.y_bounds), st.a_src,
        _WeakHookAdapter(hooks), rec.offset(inst.m + 2), rng.child("wsc"),
        msg_prefix="weak.")
    if status == "reject":
        return "reject", res2
    return "ok", {"result": "point-claim", "c": c, "w": w, "rho1": rho1,
                  "gm_cm": gm_cm, "c2": res2["point"], "b2": res2["value"],
                  "rho2": res2["rho"]}


class _WeakHookAdapter:
    def __init__(self, strong_hooks):
        self.h = strong_hooks

    def choose_rho(self, z):
        return self.h.choose_weak_rho(z)

    def choose_challenge(self, state, g):
        return self.h.choose_weak_challenge(state, g)


def strong_zk_run(F_summand: Summand, inst: StrongZkInstance, vstar, rng, *,
                  prover_mode: str = "explicit", channel=None,
                  x_prover_cls=HonestProver, query_bound=None,
                  check_oracle_degrees: bool = False, prover_state=None):
    """Run the strong-ZK sumcheck with a real prover.  Returns (outcome, view).

    The honest-verifier outcome is the output claim "F(c) = value" as a
    PointClaim (its truth is the caller's to check), Reject, or
    AbortedByProver when a challenge leaves I.
    """
    f = inst.field
    view = View()
    rec = RecordingChannel(view, channel)
    st = prover_state or strong_prover_setup(inst, rng, prover_mode,
                                             check_oracle_degrees)
    oracle = PairBundleOracle(f, inst.m, inst.k, st.z_eval, st.a_eval, label="O",
                              query_bound=query_bound)
    voracle = ViewedOracle(oracle, view, "O")
    vstar.setup(voracle, view, inst, rng.child("verifier"))

    status, data = strong_interact(F_summand, inst, st, vstar, rec, rng,
                                   x_prover_cls=x_prover_cls)
    if status != "ok":
        data = {"result": data}
    outcome = vstar.final(data)
    return (outcome if outcome is not None else data.get("result")), view


# -- strong ZK: simulator core and runner ----------------------------------------------

class StrongSimCore:
    """Straightline simulator for the strong protocol: uniform Z, a weak
    sub-simulator for the mask A, a conditioned Q for the I-restricted
    sumcheck, one F-query, and a Z redraw consistent with everything already
    answered.

    mode='explicit' (default) materializes Z, Q, and the redrawn Z as dense
    polynomials; mode='lazy' draws only answered functionals (exhaustive
    enumeration)."""

    def __init__(self, inst: StrongZkInstance, f_query, rng, mode: str = "lazy"):
        self.inst = inst
        self.f = inst.field
        self.f_query = f_query
        self.rng = rng
        self.mode = mode
        domains = [inst.H] * inst.m + [inst.G] * inst.k
        self._domains = domains
        if mode == "lazy":
            self.cs_z = ConstraintSet(self.f, inst.z_bounds, domains)
            self.z_poly = None
        else:
            self.cs_z = None
            self.z_poly = random_poly(self.f, inst.z_bounds, rng.child("Z"))
        self.resampled = False
        self.z_log: list[tuple] = []
        self.weak_sim = WeakSimCore(self.f, inst.y_bounds, inst.G, None, rng,
                                    mode=mode)
        self.info = {"f_queries": 0, "f_point": None}

    def _z_value(self, prefix) -> int:
        if self.z_poly is not None:
            return self.z_poly.partial_sum(prefix, self._domains[len(prefix):])
        return self.cs_z.conditional_answer(prefix, self.rng)

    def z_answer(self, pt) -> int:
        v = self._z_value(tuple(int(c) for c in pt))
        if not self.resampled:
            self.z_log.append((tuple(int(c) for c in pt), v))
        return v

    def a_answer(self, y) -> int:
        return self.weak_sim.mask_answer(y)

    def o_answer(self, point) -> int:
        return pair_bundle_value(self.f, self.inst.m, point, self.z_answer,
                                 self.a_answer)

    def interact(self, hooks, rec, rng):
        inst, f = self.inst, self.f
        rec.set_round(1)
        z = self._z_value(())
        rec.prover_says("z", z)
        rho1 = int(hooks.choose_rho1(z))
        cs_q = ConstraintSet(f, inst.deg_bounds, [inst.H] * inst.m)
        cs_q.add_constraint((), f.add(f.mul(rho1, inst.target), z))
        if self.mode == "lazy":
            q_summand: Summand = LazySummand(cs_q, self.rng)
        else:
            q_summand = MixedSummand(cs_q.sample_poly(self.rng.child("q")),
                                     [inst.H] * inst.m)
        claim = SumClaim(inst.H, inst.m, inst.deg_bounds,
                         f.add(f.mul(rho1, inst.target), z))
        result = sc_run(f, claim, HonestProver(q_summand),
                        rec.offset(1), rng.child("sc"), challenge_domain=inst.I,
                        prover_abort_outside_domain=True,
                        challenge_source=hooks.choose_x_challenge)
        if not isinstance(result, PointClaim):
            return ("abort" if isinstance(result, AbortedByProver) else "reject"), result
        c, gm_cm = result.point, result.value
        assert all(ci in inst.I for ci in c), "simulator F-query point must lie in I^m"
        fc = int(self.f_query(c))
        self.info["f_queries"] += 1
        self.info["f_point"] = c
        w = f.sub(gm_cm, f.mul(rho1, fc))
        rec.set_round(inst.m + 2)
        rec.prover_says("w", w)

        # redraw Z conditioned on the logged answers plus the revealed sum
        cs_z2 = ConstraintSet(f, inst.z_bounds, self._domains)
        for pt, v in self.z_log:
            cs_z2.add_constraint(pt, v)
        cs_z2.add_constraint(c, w)
        self.resampled = True
        if self.mode == "lazy":
            self.cs_z = cs_z2
        else:
            self.z_poly = cs_z2.sample_poly(self.rng.child("Z2"))

        self.weak_sim.f_query = lambda prefix: self._z_value(
            tuple(c) + tuple(prefix))
        status, res2 = weak_sim_interact(self.weak_sim, f, w, inst.G, inst.y_bounds,
                                         _WeakHookAdapter(hooks), rec.offset(inst.m + 2),
                                         rng.child("wsc"), msg_prefix="weak.")
        if status == "reject":
            return "reject", res2
        return "ok", {"result": "point-claim", "c": c, "w": w, "rho1": rho1,
                      "gm_cm": gm_cm, "c2": res2["point"], "b2": res2["value"],
                      "rho2": res2["rho"]}


def strong_zk_simulate(f_query, inst: StrongZkInstance, vstar, rng, *, channel=None,
                       query_bound: int | None = None, mode: str = "lazy"):
    """Simulate the strong protocol's verifier view with a single F-query.

    `f_query(point)` evaluates F at one point of I^m.  Raises if the verifier
    exceeds the oracle-query bound (default lam^k; a contract violation,
    never a wrong answer).  Returns (outcome, view, info) where info reports
    the F-query count and the query point.
    """
    f = inst.field
    view = View()
    rec = RecordingChannel(view, channel)
    core = StrongSimCore(inst, f_query, rng.child("sim"), mode=mode)
    oracle = PairBundleOracle(f, inst.m, inst.k, core.z_answer, core.a_answer,
                              label="O",
                              query_bound=inst.query_bound if query_bound is None
                              else query_bound)
    voracle = ViewedOracle(oracle, view, "O")
    vstar.setup(voracle, view, inst, rng.child("verifier"))

    status, data = core.interact(vstar, rec, rng)
    if status != "ok":
        data = {"result": data}
    outcome = vstar.final(data)
    if status == "ok":
        assert core.info["f_queries"] == 1
    return (outcome if outcome is not None else data.get("result")), view, core.info
