from collections import Counter

import pytest

from zkipcp import Curve, Field, MultiPoly, random_poly, subfield_of_order
from zkipcp.lift import (
    LiftedProtocol,
    LiftHonestHooks,
    NexpIpcp,
    WeakZkIpcp,
    curve_round,
    lift_run,
    lift_simulate,
    run_query_reduced,
)
from zkipcp.nexp import NexpParams, O3SatInstance, O3SatWitness, arithmetize
from zkipcp.rng import RngStream
from zkipcp.stats import soundness_mc, two_sample_chi2
from zkipcp.sumcheck import Reject
from zkipcp.transcript import Channel, Transcript
from zkipcp.views import RecordingChannel, View

from conftest import rng, trivial_instance


F97 = Field.prime(97)


def _weak_inner(field=F97, bounds=(2, 2), seed="inner"):
    F = random_poly(field, bounds, RngStream(seed))
    H = (0, 1)
    return WeakZkIpcp(F, H, F.partial_sum((), [H] * len(bounds)))


def test_query_reduced_completeness():
    inner = _weak_inner()
    for i in range(300):
        res = run_query_reduced(inner, RngStream(("qr", i)))
        assert not isinstance(res, Reject) and res["accept"]


def test_reduced_decision_matches_inner_on_same_randomness():
    """The reduced protocol's inner decision comes from the curve values; for
    an honest prover those equal the oracle at the plan points, so the
    decision agrees with direct queries."""
    inner = _weak_inner()
    for i in range(50):
        r = RngStream(("qm", i))
        session = inner.new_session(r.child("prover"))
        res = run_query_reduced(inner, r, session=session)
        assert res["accept"]
        # rho agrees with the oracle everywhere on the curve parameters
        f = inner.field
        acc = 0
        for c in res["rho"]:
            pass
        assert session.oracle_eval(res["beta"]) == _eval(f, res["rho"], res["t"])


def _eval(f, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def test_curve_cheat_soundness_q3():
    """A three-query plan over a univariate degree-2 oracle: the consistency
    check passes for a dishonest restriction with probability at most
    dq / (|F| - q)."""
    f = F97
    d, q = 2, 3

    def trial(r):
        mask = random_poly(f, (d,), r.child("mask"))
        plan = [(int(r.element(f)),) for _ in range(q)]
        beta = (r.child("beta").element(f),)
        view = View()
        cr = curve_round(f, (d,), plan, beta, lambda pt: mask.eval(pt),
                         r.child("curve"), view, RecordingChannel(view),
                         curve_cheat=True)
        if cr is None:
            return False
        return cr["required"] == mask.eval(beta)

    rep = soundness_mc(trial, 10_000, d * q / (f.order - q), seed="curve-cheat")
    assert rep.passed, rep


def test_single_query_uniform():
    f5 = Field.prime(97)
    inner = _weak_inner(f5, (1, 1), seed="uq")
    cnt = Counter()
    n = 10_000
    for i in range(n):
        res = run_query_reduced(inner, RngStream(("uu", i)))
        cnt[res["beta"][0]] += 1  # first coordinate marginal
    exp = n / 97
    chi2 = sum((cnt[v] - exp) ** 2 / exp for v in range(97))
    assert chi2 < 160  # 96 dof, p ~ 0.001


def test_lifted_completeness_and_rounds():
    inner = _weak_inner()
    lp = LiftedProtocol(inner)
    for i in range(400):
        ok, view = lift_run(lp, RngStream(("lc", i)))
        assert ok is True
    t = Transcript("lift", {})
    ok, view = lift_run(lp, RngStream("rounds"), channel=Channel(t),
                        force_branch="emulate")
    assert ok is True
    assert t.rounds() == lp.declared_rounds() == max(inner.rounds, 1) + 2


def test_lifted_soundness_inherits_inner():
    """A false inner claim propagates: the lifted acceptance stays within the
    inner protocol's bound plus the branch structure."""
    f = F97
    F = random_poly(f, (2, 2), RngStream("ls"))
    H = (0, 1)
    bad = WeakZkIpcp(F, H, f.add(F.partial_sum((), [H, H]), 1))
    lp = LiftedProtocol(bad)
    accepted = 0
    n = 2000
    for i in range(n):
        ok, view = lift_run(lp, RngStream(("lsr", i)), force_branch="emulate")
        accepted += (ok is True)
    # the emulation branch accepts a false claim only on inner luck
    bound = bad.zk_instance().soundness_bound() + 6 / (97 - 1)
    sigma = (bound * (1 - bound) / n) ** 0.5
    assert accepted / n <= bound + 5 * sigma


def test_lookup_disagreement_caught():
    inner = _weak_inner()
    lp = LiftedProtocol(inner)
    other = random_poly(F97, (2, 2), RngStream("other"))
    session_probe = inner.new_session(RngStream(("ld", 0)).child("prover"))
    disagree = sum(
        1 for x in range(97) for y in range(97)
        if session_probe.oracle_eval((x, y)) != other.eval((x, y))) / 97 ** 2
    caught = 0
    n = 1500
    for i in range(n):
        ok, view = lift_run(lp, RngStream(("ld", i)), lookup_poly=other,
                            force_branch="emulate")
        caught += (ok is False)
    # each emulation round compares the two polynomials at a uniform point
    sigma = (disagree * (1 - disagree) / n) ** 0.5 + 0.02
    assert caught / n >= disagree - 5 * sigma


def test_structural_isolation():
    """Prover strategies receive only their question and shared randomness:
    the strategy interface has no channel to the other prover."""
    import inspect
    from zkipcp.ldtest import ProverStrategy
    sig = inspect.signature(ProverStrategy.respond)
    assert list(sig.parameters) == ["self", "question", "shared"]


def test_prover_oblivious_query():
    """Perturbing prover randomness leaves the verifier's single query point
    unchanged (it is a function of verifier-only randomness)."""
    inner = _weak_inner()
    lp = LiftedProtocol(inner)

    class SplitRng:
        def __init__(self, prover_seed, verifier_seed, path=""):
            self.ps, self.vs, self.path = prover_seed, verifier_seed, path

        def child(self, *labels):
            sub = self.path + "/" + ".".join(str(l) for l in labels)
            if sub.startswith("/prover") or sub.startswith("/provers") or \
                    sub.startswith("/inner"):
                return RngStream((self.ps, sub))
            if sub.startswith("/verifier"):
                return RngStream((self.vs, sub))
            return SplitRng(self.ps, self.vs, sub)

        def coin(self):
            return RngStream((self.vs, self.path, "c")).coin()

        def element(self, f):
            return RngStream((self.vs, self.path, "e")).element(f)

    def beta_of(view):
        coins = [it[1] for it in view.items if it[0] == "coin"]
        return tuple(coins[1:3])  # branch coin, then the two beta coordinates

    _, v1 = lift_run(lp, SplitRng("p1", "v"), force_branch="emulate")
    _, v2 = lift_run(lp, SplitRng("p2", "v"), force_branch="emulate")
    assert beta_of(v1) == beta_of(v2)


def test_abort_on_secondary_main_matches_simulation():
    inner = _weak_inner()
    lp = LiftedProtocol(inner)
    okr, vr = lift_run(lp, RngStream("ab"), assign_secondary_main=True)
    oks, vs, nq = lift_simulate(lp, RngStream("ab"), assign_secondary_main=True)
    assert okr == oks == "abort"
    assert vr.items == vs.items
    assert nq == 0


def test_wrapper_query_budget():
    inner = _weak_inner()
    lp = LiftedProtocol(inner)
    d_tot = sum(inner.deg_bounds)
    for i in range(60):
        out, view, nq = lift_simulate(lp, RngStream(("wq", i)))
        assert nq <= 2 * (d_tot + 1) ** 2


def lift_view_projection(view):
    """Canonical coarse projection of a lifted view for chi-square binning.
    Full views are near-unique at these parameters, so the comparison runs on
    (branch, verdict, low bits of the first message scalars, a hash bucket of
    the rest): projections of equal distributions are equal, and a rejected
    projection refutes equality."""
    import hashlib
    branch = verdict = None
    scalars = []
    coins = 0
    for it in view.items:
        if it[0] == "coin":
            if branch is None:
                branch = it[1]
            coins += 1
        elif it[0] == "msg" and it[1] == "scalar" and len(scalars) < 2:
            val = it[2]
            if isinstance(val, dict):
                val = sum(int(v) for v in val.values())
            scalars.append(int(val) & 3)
        elif it[0] == "note" and it[1] == "verdict":
            verdict = bool(it[2]["accept"])
    bucket = int(hashlib.sha256(view.key().encode()).hexdigest()[:4], 16) % 8
    return (branch, verdict, tuple(scalars), coins & 7, bucket)


def _lift_chi2(lp, n, sim_kwargs, seed_real, seed_sim):
    ca, cb = {}, {}
    for i in range(n):
        ok, view = lift_run(lp, RngStream((seed_real, i)))
        kk = lift_view_projection(view)
        ca[kk] = ca.get(kk, 0) + 1
        out, view2, nq = lift_simulate(lp, RngStream((seed_sim, i)), **sim_kwargs)
        kk = lift_view_projection(view2)
        cb[kk] = cb.get(kk, 0) + 1
    return two_sample_chi2(ca, cb)


def test_lift_simulate_matches_real_chi2():
    lp = LiftedProtocol(_weak_inner())
    stat, p, bins = _lift_chi2(lp, 4000, {}, "real", "sim")
    assert p >= 1e-3, (p, bins)
    assert bins > 20  # the projection genuinely separates views


def test_lift_simulate_planted_defect_fails_chi2():
    lp = LiftedProtocol(_weak_inner())
    stat, p, bins = _lift_chi2(lp, 4000, {"planted_bias": True}, "real", "simb")
    assert p < 1e-3, (p, bins)


def test_fast_mode_verifier_chooses_roles():
    inner = _weak_inner()
    lp = LiftedProtocol(inner, mode="fast")
    for i in range(100):
        ok, view = lift_run(lp, RngStream(("fm", i)))
        assert ok is True
    # role coin appears as a verifier coin, not a prover message
    ok, view = lift_run(lp, RngStream("fm-c"))
    kinds = [it[0] for it in view.items]
    assert kinds[0] == "coin"


# -- lifting the oracle-3-SAT protocol ---------------------------------------------

@pytest.fixture(scope="module")
def nexp_lift():
    inst, w = trivial_instance()
    f = Field.gf2(10)  # the curve restriction degree needs |F| > q * sum(d)
    arith = arithmetize(inst, f, subfield_of_order(f, 4))
    inner = NexpIpcp(arith, w, NexpParams(b=1, lam_sc=3, k_sc=1))
    return LiftedProtocol(inner)


def test_lift_over_nexp_emulation(nexp_lift):
    for i in range(3):
        ok, view = lift_run(nexp_lift, RngStream(("lne", i)),
                            force_branch="emulate")
        assert ok is True


def test_lift_over_nexp_ldt(nexp_lift):
    for i in range(2):
        ok, view = lift_run(nexp_lift, RngStream(("lnl", i)), force_branch="ldt")
        assert ok is True


def test_lift_over_nexp_round_count(nexp_lift):
    t = Transcript("lift-nexp", {})
    ok, view = lift_run(nexp_lift, RngStream("lnr"), channel=Channel(t),
                        force_branch="emulate")
    assert ok is True
    assert t.rounds() == nexp_lift.declared_rounds()
