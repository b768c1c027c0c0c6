"""Query reduction to one uniform query, and the two-prover lifting.

Query reduction: after the interactive phase of a low-degree proof system
whose verifier wants the oracle at a set A of q points, the verifier draws
a uniform point r and a parameter t outside the canonically-first q field
elements S, interpolates the degree-q curve gamma through {(S_i, A_i)} and
(t, r), and sends gamma; the prover replies with the restriction of the
oracle to gamma.  The verifier queries the oracle only at r = gamma(t),
rejects unless the restriction matches there, and otherwise decides from
the restriction's values on S.  The single query is uniform and independent
of prover messages.

Lifting: two provers sharing randomness but no channel.  They flip a coin
for primary/secondary roles; the verifier then either runs one plane-vs-
point low individual degree test round on the oracle, or emulates the
query-reduced proof system with the primary prover while asking the
secondary for the oracle value at the verifier's single query point,
accepting iff the emulation's required value matches the lookup.

The lifted simulator wraps the inner protocol's simulator: lookup point
queries cost one oracle query, axis-parallel lines d+1, planes a full
interpolation grid, and the curve restriction its degree plus one; every
prover message of the lifted protocol is reconstructed from those queries,
and the assembled view is compared item-for-item with real runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Field
from .poly import (
    Curve,
    MultiPoly,
    PlaneOrLine,
    _axis_matmul,
    _inverse_vandermonde,
    interpolate_univariate,
    random_poly,
    restrict,
)
from .sumcheck import Reject
from .views import RecordingChannel, View
from .zksumcheck import MixedSummand, WeakSimCore, WeakZkInstance, weak_interact, weak_sim_interact
from .ldtest import LdtParams, ldt_round, make_honest_strategy, sample_challenge
from . import transcript as tr


class LiftError(ValueError):
    pass


# -- inner protocol: the weak-ZK sumcheck as a runnable IPCP -------------------------

class WeakZkIpcp:
    """Sumcheck of a public polynomial as a low-degree IPCP.

    The language is "sum of F over H^m equals a"; the oracle is the weak-ZK
    mask, and the verifier finishes by evaluating F itself at the reduced
    point.  This is the smallest complete member of the protocol family and
    the default inner protocol for lifting tests.
    """

    def __init__(self, F_poly: MultiPoly, H, target: int):
        self.F = F_poly
        self.field = F_poly.field
        self.H = tuple(int(h) for h in H)
        self.target = int(target)
        self.m = F_poly.m
        self.deg_bounds = F_poly.deg_bounds
        self.honest_queries = 1
        # interaction rounds: z/rho plus one sumcheck round per variable
        self.rounds = 1 + F_poly.m

    def new_session(self, rng) -> "WeakZkIpcpSession":
        mask = random_poly(self.field, self.deg_bounds, rng.child("mask"))
        return WeakZkIpcpSession(self, mask)

    def zk_instance(self) -> WeakZkInstance:
        return WeakZkInstance(self.field, self.m, self.deg_bounds, self.H, self.target)

    def sim_f_query(self, prefix):
        tails = [self.H] * (self.m - len(prefix))
        return self.F.partial_sum(prefix, tails)

    def decide(self, point, value, rho, mask_at_point) -> bool:
        f = self.field
        v = f.div(f.sub(value, mask_at_point), rho)
        return self.F.eval(point) == v


class WeakZkIpcpSession:
    def __init__(self, ipcp: WeakZkIpcp, mask: MultiPoly):
        self.ipcp = ipcp
        self.mask = mask

    def oracle_eval(self, point) -> int:
        return self.mask.eval(point)

    def oracle_poly(self) -> MultiPoly:
        return self.mask

    def interact(self, rec, rng, hooks=None):
        """Returns ('reject', r) or ('ok', data, plan, finalize) where plan
        is the verifier's oracle query set and finalize(answers) decides."""
        p = self.ipcp
        hooks = hooks or LiftHonestHooks(p.field, rng.child("verifier-coins"), None)
        status, res = weak_interact(
            p.field, p.target, p.H, p.deg_bounds,
            MixedSummand(p.F, [p.H] * p.m), MixedSummand(self.mask, [p.H] * p.m),
            hooks, rec, rng.child("sc"))
        if status != "ok":
            return "reject", res, None, None
        plan = [tuple(res["point"])]

        def finalize(answers):
            ok = p.decide(res["point"], res["value"], res["rho"], answers[0])
            return {"accept": ok}

        return "ok", res, plan, finalize


class LiftHonestHooks:
    """Coin supplier for an inner interaction driven by the lifted verifier."""

    def __init__(self, field, rng, view: View | None, challenge_domain=None):
        self.field = field
        self.rng = rng
        self.view = view
        self.domain = challenge_domain or tuple(range(field.order))

    def _coin(self, v):
        if self.view is not None:
            self.view.coin(v)
        return v

    def choose_rho(self, z):
        return self._coin(self.rng.nonzero(self.field))

    def choose_challenge(self, state, g):
        return self._coin(self.rng.choice(self.domain))


# -- query reduction ------------------------------------------------------------------

def reduced_degree(deg_bounds, q: int) -> int:
    return q * sum(deg_bounds)


def _eval_unicoeffs(f: Field, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, int(x)), c)
    return acc


def curve_round(field: Field, deg_bounds, plan, beta, oracle_eval, vrng,
                view: View | None, rec, *, curve_cheat: bool = False,
                oracle_eval_batch=None):
    """The added round of the query reduction: build the curve through the
    query set and (t, beta), get the prover's restriction, and return the
    values standing in for the oracle answers plus the consistency value
    rho(t).  The t-coin and the restriction message are recorded."""
    f = field
    q = len(plan)
    if f.order <= q:
        raise LiftError("field too small for the parameter set S")
    S = f.first_elements(q)
    t = S[0]
    while t in S:
        t = vrng.element(f)
    if view is not None:
        view.coin(t)
    gamma = Curve.through(f, list(S) + [t], list(plan) + [tuple(beta)])
    deg = reduced_degree(deg_bounds, q)
    if deg + 1 > f.order:
        raise LiftError("field too small for the curve restriction degree")
    nodes = f.first_elements(deg + 1)
    if oracle_eval_batch is not None:
        pts = np.array([gamma.point(u) for u in nodes], dtype=np.int64)
        vals = oracle_eval_batch(pts).tolist()
    else:
        vals = [oracle_eval(gamma.point(u)) for u in nodes]
    rho = interpolate_univariate(f, nodes, vals)
    if curve_cheat:
        extra = [1]
        for node in f.first_elements(deg):
            lower = [f.mul(c, f.neg(node)) for c in extra]
            extra = [0] + extra
            extra = [f.add(a, b) for a, b in zip(extra, lower + [0])]
        rho = [f.add(a, b) for a, b in zip(rho, extra + [0] * (len(rho) - len(extra)))]
    if rec is not None:
        rec.prover_says("rho", list(rho))
    if len(rho) > deg + 1:
        return None
    return {"gamma": gamma, "rho": rho, "t": t,
            "answers": [_eval_unicoeffs(f, rho, s) for s in S],
            "required": _eval_unicoeffs(f, rho, t)}


def run_query_reduced(inner, rng, *, channel=None,
                      curve_cheat: bool = False, beta=None, session=None):
    """Standalone run of the query-reduced protocol: inner interaction, the
    curve round, one uniform oracle query, and the inner decision.  Returns
    a dict with accept/beta/rho, or Reject."""
    f = inner.field
    view = View()
    rec = RecordingChannel(view, channel)
    session = session or inner.new_session(rng.child("prover"))
    vrng = rng.child("verifier")
    hooks = LiftHonestHooks(f, vrng.child("hooks"), view)
    status, res, plan, finalize = session.interact(rec, rng.child("inner"), hooks)
    if status != "ok":
        return Reject("inner protocol rejected")
    if beta is None:
        brng = vrng.child("beta")
        beta = tuple(brng.element(f) for _ in range(inner.m))
    if view is not None:
        for c in beta:
            view.coin(c)
    cr = curve_round(f, inner.deg_bounds, plan, beta,
                     session.oracle_eval, vrng.child("curve"), view, rec,
                     curve_cheat=curve_cheat)
    if cr is None:
        return Reject("curve restriction exceeds the degree bound")
    oracle_at = session.oracle_eval(beta)
    if view is not None:
        view.oracle("R", "point", beta, oracle_at)
    if cr["required"] != oracle_at:
        return Reject("curve restriction disagrees with the oracle")
    verdict = finalize(cr["answers"])
    return {"accept": bool(verdict["accept"]), "beta": tuple(beta), "t": cr["t"],
            "rho": cr["rho"], "view": view}


# -- the lifted two-prover protocol ------------------------------------------------------

@dataclass
class LiftedProtocol:
    inner: object
    mode: str = "zk"        # 'zk': provers flip the role coin; 'fast': verifier does

    def declared_rounds(self) -> int:
        return max(self.inner.rounds, 1) + 2


class NexpIpcp:
    """The zero-knowledge oracle-3-SAT proof system as a liftable inner
    protocol: the oracle is the bundled proof, the interaction is the whole
    protocol, and the query plan is the verifier's eight bundle points."""

    def __init__(self, arith, witness, params):
        from .nexp import NexpParams, StrongZkInstance, bundle_deg_bounds
        self.arith = arith
        self.witness = witness
        self.params = params
        self.field = arith.field
        lam_sc, k_sc = params.resolve_inner(arith)
        I = tuple(x for x in range(self.field.order)
                  if x not in set(arith.H.elements))
        from .zksumcheck import StrongZkInstance as SZI
        sinst = SZI(self.field, tuple(arith.H.elements), arith.f_deg_bounds(),
                    k_sc, lam_sc, tuple(self.field.first_elements(lam_sc)), I, 0)
        self._sinst_template = sinst
        self.k = params.resolve_k(arith.H)
        self.deg_bounds = bundle_deg_bounds(arith, sinst, self.k)
        self.m = len(self.deg_bounds)
        # xy round + strong subprotocol rounds + h + three decommit phases
        self.rounds = 1 + (arith.m_w + 2 + k_sc + 1) + 1 + 3 * (self.k + 1)

    def new_session(self, rng):
        from .nexp import build_bundle, nexp_prover_setup
        st = nexp_prover_setup(self.arith, self.witness, self.params,
                               rng.child("prover"))
        bundle = build_bundle(self.arith, st)
        return NexpIpcpSession(self, st, bundle)


class NexpIpcpSession:
    def __init__(self, ipcp: NexpIpcp, st, bundle):
        self.ipcp = ipcp
        self.st = st
        self.bundle = bundle

    def oracle_eval(self, point) -> int:
        return self.bundle._answer_point(tuple(int(c) for c in point))

    def oracle_eval_batch(self, points) -> np.ndarray:
        return self.bundle.answer_batch(points)

    def interact(self, rec, rng, hooks=None):
        from .nexp import NexpHonestVerifier, nexp_finalize, nexp_query_plan, nexp_run

        class _Deferred(NexpHonestVerifier):
            def final(self, data):
                return None

        out, view, st = nexp_run(self.ipcp.arith, self.ipcp.witness,
                                 self.ipcp.params, _Deferred(), rng,
                                 prover_state=self.st, bundle=self.bundle,
                                 view=rec.view)
        if not isinstance(out, dict) or out.get("result") != "point-claim":
            return "reject", out, None, None
        plan = nexp_query_plan(self.bundle, self.st.sinst, self.ipcp.arith, out)

        def finalize(answers):
            res = nexp_finalize(self.ipcp.arith, self.st.sinst, out, answers)
            if isinstance(res, dict):
                return res
            return {"accept": False}

        return "ok", out, plan, finalize


def _ldt_challenge_note(view: View, ch):
    view.note("ldt-challenge", {
        "plane": [list(ch.plane.base)] + [list(d) for d in ch.plane.dirs],
        "alpha": list(ch.alpha), "branch": ch.branch,
        "swapped": ch.roles_swapped,
        "line": None if ch.line is None else
        [list(ch.line.base), ch.line.axis_index],
    })


def lift_run(lp: LiftedProtocol, rng, *, channel=None, lookup_poly=None,
             force_branch=None, assign_secondary_main: bool = False):
    """One run of the lifted protocol with honest provers (optionally a
    lookup prover answering per a different polynomial).  Returns
    (accept | 'abort', view)."""
    inner = lp.inner
    f = inner.field
    view = View()
    rec = RecordingChannel(view, channel)
    rec.set_round(1)
    session = inner.new_session(rng.child("prover"))
    if lp.mode == "zk":
        sym = rng.child("provers").coin()
        rec.prover_says(tr.SCALAR, {"primary": sym})
    else:
        sym = rng.child("verifier", "roles").coin()
        view.coin(sym)
    vrng = rng.child("verifier")
    if assign_secondary_main:
        rec.prover_says(tr.ABORT, {"reason": "secondary prover asked to act as main"})
        return "abort", view
    branch = force_branch if force_branch is not None else \
        ("ldt" if vrng.coin() == 0 else "emulate")
    view.coin(0 if branch == "ldt" else 1)

    if branch == "ldt":
        rec.set_round(2)
        params = LdtParams(f, inner.m, max(inner.deg_bounds))
        if hasattr(session, "oracle_poly"):
            strat = make_honest_strategy(session.oracle_poly())
        else:
            strat = _ReconstructedStrategy(f, inner.deg_bounds, session.oracle_eval,
                                           getattr(session, "oracle_eval_batch", None))
        lookup_strat = strat if lookup_poly is None else make_honest_strategy(lookup_poly)
        ch = sample_challenge(params, vrng.child("ldt"))
        _ldt_challenge_note(view, ch)
        ok = ldt_round((strat, lookup_strat), params, vrng.child("ldtr"),
                       channel=rec, challenge=ch)
        view.note("verdict", {"accept": bool(ok)})
        return bool(ok), view

    # emulation: the verifier's single uniform query point comes from
    # verifier-only randomness and is asked of the lookup prover up front
    brng = vrng.child("beta")
    beta = tuple(brng.element(f) for _ in range(inner.m))
    for c in beta:
        view.coin(c)
    rec.set_round(2)
    lookup_at = (session.oracle_eval(beta) if lookup_poly is None
                 else lookup_poly.eval(beta))
    rec.prover_says(tr.SCALAR, {"lookup": lookup_at})
    hooks = LiftHonestHooks(f, vrng.child("hooks"), view)
    status, res, plan, finalize = session.interact(rec.offset(1),
                                                   rng.child("inner"), hooks)
    if status != "ok":
        view.note("verdict", {"accept": False})
        return False, view
    rec.set_round(lp.declared_rounds())
    cr = curve_round(f, inner.deg_bounds, plan, beta,
                     session.oracle_eval, vrng.child("curve"), view, rec,
                     oracle_eval_batch=getattr(session, "oracle_eval_batch", None))
    ok = (cr is not None and cr["required"] == lookup_at
          and bool(finalize(cr["answers"])["accept"]))
    view.note("verdict", {"accept": bool(ok)})
    return bool(ok), view


# -- zero-knowledge: the wrapper over the inner simulator ---------------------------------

def lift_simulate(lp: LiftedProtocol, rng, *, planted_bias: bool = False,
                  assign_secondary_main: bool = False):
    """Simulate the lifted verifier's view via the inner protocol's simulator
    and the oracle-query wrapper.  Returns (outcome, view, wrapper_queries).

    planted_bias corrupts one lookup answer with probability 0.1 (negative
    control for distribution testing).  assign_secondary_main mirrors a
    deviating verifier: simulated as the prover abort, without touching the
    inner simulator."""
    inner = lp.inner
    f = inner.field
    inst = inner.zk_instance()
    view = View()
    sim = WeakSimCore(f, inst.deg_bounds, inst.H, inner.sim_f_query,
                      rng.child("sim"), mode="explicit")
    queries = [0]

    def q(pt):
        queries[0] += 1
        return sim.mask_answer(tuple(int(c) for c in pt))

    sym = rng.child("provers").coin()
    view.msg(tr.SCALAR, {"primary": sym})
    if assign_secondary_main:
        view.msg(tr.ABORT, {"reason": "secondary prover asked to act as main"})
        return "abort", view, 0
    vrng = rng.child("verifier")
    branch = "ldt" if vrng.coin() == 0 else "emulate"
    view.coin(0 if branch == "ldt" else 1)

    d_tot = sum(inner.deg_bounds)
    budget = 2 * (d_tot + 1) ** 2

    if branch == "ldt":
        params = LdtParams(f, inner.m, max(inner.deg_bounds))
        ch = sample_challenge(params, vrng.child("ldt"))
        _ldt_challenge_note(view, ch)
        strat = _ReconstructedStrategy(f, inner.deg_bounds, q)
        rec = RecordingChannel(view)
        ok = ldt_round((strat, strat), params, vrng.child("ldtr"),
                       channel=rec, challenge=ch)
        view.note("verdict", {"accept": bool(ok)})
        assert queries[0] <= budget, f"{queries[0]} wrapper queries > {budget}"
        return bool(ok), view, queries[0]

    brng = vrng.child("beta")
    beta = tuple(brng.element(f) for _ in range(inner.m))
    for c in beta:
        view.coin(c)
    lookup_at = q(beta)
    if planted_bias and rng.child("defect").np_rng.random() < 0.1:
        lookup_at = f.add(lookup_at, 1)
    view.msg(tr.SCALAR, {"lookup": lookup_at})
    rec = RecordingChannel(view)
    hooks = LiftHonestHooks(f, vrng.child("hooks"), view)
    status, res = weak_sim_interact(sim, f, inst.target, inst.H, inst.deg_bounds,
                                    hooks, rec, rng.child("inner").child("sc"))
    if status != "ok":
        view.note("verdict", {"accept": False})
        return False, view, queries[0]
    cr = curve_round(f, inner.deg_bounds, [tuple(res["point"])], beta, q,
                     vrng.child("curve"), view, rec)
    ok = (cr is not None and cr["required"] == lookup_at
          and inner.decide(res["point"], res["value"], res["rho"], cr["answers"][0]))
    view.note("verdict", {"accept": bool(ok)})
    assert queries[0] <= budget, f"{queries[0]} wrapper queries > {budget}"
    assert sim.f_query_count <= sim.mask_query_count
    return bool(ok), view, queries[0]


class _ReconstructedStrategy:
    """Prover strategy realized through oracle queries: the plane answer is
    interpolated from a full grid, lines from deg+1 points, points from one
    query.  Produces exactly the honest answers (the oracle is a polynomial
    in the declared space)."""

    def __init__(self, field: Field, deg_bounds, query_fn, batch_fn=None):
        self.field = field
        self.deg_bounds = tuple(deg_bounds)
        self.q = query_fn
        self.q_batch = batch_fn

    def _values(self, points):
        if self.q_batch is not None:
            return self.q_batch(np.array(points, dtype=np.int64)).tolist()
        return [self.q(p) for p in points]

    def respond(self, question, shared):
        f = self.field
        kind, obj = question
        if kind == "point":
            return self.q(obj)
        if kind == "line":
            d = (self.deg_bounds[obj.axis_index]
                 if obj.kind == "axis_parallel_line" else sum(self.deg_bounds))
            nodes = f.first_elements(d + 1)
            vals = self._values([obj.point(t) for t in nodes])
            return MultiPoly(f, (d,), interpolate_univariate(f, nodes, vals))
        d_tot = sum(self.deg_bounds)
        nodes = f.first_elements(d_tot + 1)
        grid = np.array(self._values([obj.point(u, v) for u in nodes for v in nodes]),
                        dtype=np.int64).reshape(d_tot + 1, d_tot + 1)
        M = _inverse_vandermonde(f, nodes)
        nd = _axis_matmul(f, grid, 0, M)
        nd = _axis_matmul(f, nd, 1, M)
        return MultiPoly(f, (d_tot, d_tot), nd.reshape(-1))
