import json
import subprocess
import sys

import pytest

from zkipcp import Field, MultiPoly, random_poly
from zkipcp.config import Thresholds
from zkipcp.oracle import PolyOracle, QueryBudgetExceeded
from zkipcp.rng import RngStream, TapeExhausted, TapeRng
from zkipcp.stats import (
    exhaustive_distribution,
    soundness_mc,
    two_sample_chi2,
    wilson_interval,
    zk_test_chi2,
    zk_test_exhaustive,
)
from zkipcp.transcript import Channel, Transcript, TranscriptError

from conftest import rng


# -- rng ---------------------------------------------------------------------------

def test_rng_label_determinism():
    a = RngStream("root").child("prover", 3)
    b = RngStream("root").child("prover", 3)
    assert [a.element(Field.prime(97)) for _ in range(5)] == \
        [b.element(Field.prime(97)) for _ in range(5)]


def test_rng_label_independence():
    f = Field.prime(97)
    a = RngStream("root").child("x")
    b = RngStream("root").child("y")
    assert [a.element(f) for _ in range(8)] != [b.element(f) for _ in range(8)]


def test_tape_rng_replay_and_exhaustion():
    t = TapeRng([2, 0, 1])
    f3 = Field.prime(3)
    assert t.element(f3) == 2
    assert t.coin() == 0
    assert t.element(f3) == 1
    with pytest.raises(TapeExhausted):
        t.element(f3)


def test_exhaustive_distribution_weights():
    from fractions import Fraction

    def run(t):
        a = t.coin()
        if a == 0:
            return "zero"
        return ("one", t.randrange(3))

    d = exhaustive_distribution(run)
    assert d["zero"] == Fraction(1, 2)
    assert d[("one", 0)] == Fraction(1, 6)
    assert sum(d.values()) == 1


# -- transcripts ----------------------------------------------------------------------

def _proto_run(seed):
    f = Field.prime(97)
    t = Transcript("demo", {"m": 2}, seed=str(seed))
    ch = Channel(t)
    r = RngStream(seed)
    for i in range(1, 4):
        ch.set_round(i)
        ch.prover_says("polynomial", [r.element(f) for _ in range(3)])
        ch.verifier_says("challenge", r.element(f))
    ch.verifier_says("verdict", {"accept": True})
    return t


def test_transcript_round_trip_random():
    for i in range(100):
        t = _proto_run(("rt", i))
        back = Transcript.from_bytes(t.to_bytes())
        assert back == t
        assert back.verdict == {"accept": True}


def test_transcript_truncation_reports_index():
    t = _proto_run("trunc")
    data = t.to_bytes()
    lines = data.decode().splitlines()
    with pytest.raises(TranscriptError, match="truncated"):
        Transcript.from_bytes("\n".join(lines[:-2]).encode())
    corrupt = lines[:3] + ["{bad json"] + lines[4:]
    with pytest.raises(TranscriptError, match="event 2"):
        Transcript.from_bytes("\n".join(corrupt).encode())


def test_transcript_replay_byte_identical():
    a = _proto_run("replay")
    b = _proto_run("replay")
    assert a.to_bytes() == b.to_bytes()
    assert a.digest() == b.digest()


def test_protocol_transcript_determinism_end_to_end():
    # a real protocol reproduces its transcript byte-for-byte from the seed
    from zkipcp.sumcheck import ExplicitSummand, HonestProver, SumClaim, sc_run
    f = Field.prime(97)

    def run(seed):
        p = random_poly(f, (2, 2), RngStream(seed).child("poly"))
        t = Transcript("sumcheck", {"deg": [2, 2]}, seed=str(seed))
        claim = SumClaim((0, 1), 2, (2, 2), p.partial_sum((), [(0, 1)] * 2))
        sc_run(f, claim, HonestProver(ExplicitSummand(p, (0, 1))), Channel(t),
               RngStream(seed).child("verifier"))
        return t.to_bytes()

    assert run("d1") == run("d1")
    assert run("d1") != run("d2")


# -- oracles and budgets -----------------------------------------------------------------

def test_query_budget_raises_before_answering(f97):
    p = random_poly(f97, (2, 2), rng("qb"))
    o = PolyOracle(p, query_bound=3, label="bounded")
    o.query((0, 0))
    o.query((0, 1))
    assert o.query((0, 1)) == p.eval((0, 1))  # repeat: cached, not counted
    with pytest.raises(QueryBudgetExceeded):
        o.query((1, 1))
    assert o.distinct_queries == 2


def test_point_only_oracle_rejects_prefix(f97):
    from zkipcp.oracle import PrefixQueriesUnsupported
    p = random_poly(f97, (2, 2), rng("po"))
    o = PolyOracle(p, label="points-only")
    with pytest.raises(PrefixQueriesUnsupported):
        o.prefix_query((1,))
    o2 = PolyOracle(p, sum_domains=[(0, 1), (0, 1)], label="prefix-capable")
    assert o2.prefix_query((1,)) == p.partial_sum((1,), [(0, 1)])


def test_oracle_determinism_and_replay(f97):
    p = random_poly(f97, (2, 2), rng("od"))
    o = PolyOracle(p, sum_domains=[(0, 1), (0, 1)])
    a1 = o.query((3, 4))
    a2 = o.prefix_query((5,))
    assert o.query((3, 4)) == a1 and o.prefix_query((5,)) == a2
    assert o.replay_check()


# -- statistics ---------------------------------------------------------------------------

def test_wilson_interval_basics():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi


def test_soundness_mc_pass_fail():
    good = soundness_mc(lambda r: r.coin() == 0 and r.coin() == 0, 4000, 0.25,
                        seed="mc1")
    assert good.passed
    bad = soundness_mc(lambda r: r.coin() == 0, 4000, 0.25, seed="mc2")
    assert not bad.passed


def test_chi2_calibration():
    """Two independent streams of the same sampler pass at the p-floor in at
    least 99 of 100 meta-trials."""
    f = Field.prime(17)

    def sampler(r):
        return (r.element(f), r.coin())

    passes = 0
    for meta in range(100):
        rep = zk_test_chi2(sampler, sampler, n=400, p_floor=1e-3,
                           seed=("cal", meta))
        passes += rep.passed
    assert passes >= 99


def test_chi2_detects_planted_bias():
    f = Field.prime(17)

    def real(r):
        return r.element(f)

    def biased(r):
        v = r.element(f)
        if r.np_rng.random() < 0.1:
            v = 0
        return v

    rep = zk_test_chi2(real, biased, n=20_000, p_floor=1e-3, seed="bias")
    assert not rep.passed


def test_zk_exhaustive_detects_mismatch():
    a = lambda t: t.coin()
    b = lambda t: t.coin() & t.coin()  # 0 with probability 3/4

    rep = zk_test_exhaustive(a, b)
    assert not rep.passed
    assert rep.detail["mismatched_bins"] == 2


def test_thresholds_config(tmp_path):
    t = Thresholds.load()
    assert t.chi2_samples == 100_000 and t.p_floor == 1e-3 and t.slack_sigmas == 5.0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"chi2_samples": 1234, "p_floor": 0.01}))
    t2 = Thresholds.load(str(cfg))
    assert t2.chi2_samples == 1234 and t2.p_floor == 0.01
    assert t2.slack_sigmas == 5.0


# -- CLI ------------------------------------------------------------------------------------

def _cli(*args):
    return subprocess.run([sys.executable, "-m", "zkipcp.cli", *args],
                          capture_output=True, text=True, timeout=300)


def test_cli_field_and_sumcheck():
    r = _cli("field", "--field", '{"kind":"gf2","e":4}', "--subgroups", "5")
    assert r.returncode == 0 and '"mod": 19' in r.stdout
    r = _cli("sumcheck", "--trials", "20")
    assert r.returncode == 0 and "true-output-claims=20" in r.stdout


def test_cli_nexp_prove_and_transcript(tmp_path):
    inst_file = tmp_path / "inst.json"
    inst_file.write_text(json.dumps({
        "r": 2, "s": 2,
        "formula": "(not (and (var 8) (not (var 8))))",
    }))
    wit_file = tmp_path / "wit.txt"
    wit_file.write_text("0000\n")
    out_file = tmp_path / "proof.transcript"
    r = _cli("nexp", "prove", "--instance", str(inst_file), "--witness",
             str(wit_file), "--b", "1", "--seed", "s1", "--out", str(out_file))
    assert r.returncode == 0 and "accept" in r.stdout, r.stdout + r.stderr
    r2 = _cli("nexp", "verify-transcript", "--instance", str(inst_file),
              "--witness", str(wit_file), "--transcript", str(out_file),
              "--seed", "s1")
    assert r2.returncode == 0 and "matches" in r2.stdout, r2.stdout + r2.stderr


def test_cli_zk_test_exhaustive():
    r = _cli("zk-test", "--protocol", "weak", "--mode", "exhaustive")
    assert r.returncode == 0 and "PASS" in r.stdout
