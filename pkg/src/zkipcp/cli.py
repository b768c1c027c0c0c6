"""Command-line entry points.

Every subcommand takes --seed and reports deterministic results; --out
writes the protocol transcript.  Exit code 0 means all run assertions
passed.

    zkipcp field        --field '{"kind":"prime","p":17}' [--subgroups]
    zkipcp sumcheck     --field ... --m 3 --d 2 [--malicious] --trials N
    zkipcp zksumcheck   --variant weak|strong ...
    zkipcp commit       --p 17 --k 2 [--insecure-multilinear]
    zkipcp ldt          --field ... --m 2 --d 2 --trials N --strategy honest|mixture|bad-degree
    zkipcp nexp         prove|verify-transcript|simulate --instance FILE --witness FILE
    zkipcp lift         run --inner weak-zk|nexp --mode zk|fast --trials N
    zkipcp aqc          verify --suite lower-bound|independence|closed-forms
    zkipcp zk-test      --protocol weak|strong --mode exhaustive|chi2
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import Thresholds
from .field import Field, SubsetSpec, enum_subfields, field_from_json, field_to_json, subfield_of_order, subgroup_of_order
from .poly import MultiPoly, random_poly
from .rng import RngStream
from . import transcript as tr


def _field_arg(text: str) -> Field:
    return field_from_json(text)


def _write_transcript(t, path):
    if path:
        with open(path, "wb") as fh:
            fh.write(t.to_bytes())
        print(f"transcript written to {path} ({t.digest()[:16]})")


def cmd_field(args):
    f = _field_arg(args.field)
    print(f"{f}: order {f.order}, characteristic {f.char}")
    print("descriptor:", field_to_json(f))
    if args.subgroups:
        if f.kind == "gf2":
            for sf in enum_subfields(f):
                print(f"  subfield of order {len(sf)}: {list(sf.elements)[:8]}"
                      + (" ..." if len(sf) > 8 else ""))
        n = args.subgroups
        g = subgroup_of_order(f, n, "multiplicative_subgroup")
        print(f"  multiplicative subgroup of order {n}: {list(g.elements)}")
    return 0


def cmd_sumcheck(args):
    from .sumcheck import PointClaim, run_standard_sumcheck
    f = _field_arg(args.field)
    rng = RngStream(args.seed)
    H = tuple(range(args.h_size))
    accepted = true_claims = 0
    t = None
    for i in range(args.trials):
        r = rng.child("trial", i)
        poly = random_poly(f, (args.d,) * args.m, r.child("poly"))
        target = None if not args.malicious else \
            f.add(poly.partial_sum((), [H] * args.m), 1)
        res, t, ok = run_standard_sumcheck(poly, H, target=target,
                                           rng=r.child("run"),
                                           malicious=args.malicious)
        if isinstance(res, PointClaim):
            accepted += 1
            true_claims += bool(ok)
    print(f"trials={args.trials} reduced={accepted} true-output-claims={true_claims}")
    if args.malicious:
        bound = args.m * args.d / f.order
        print(f"cheat success rate {true_claims / args.trials:.4f} "
              f"(bound md/|F| = {bound:.4f})")
    _write_transcript(t, args.out)
    return 0


def cmd_zksumcheck(args):
    from .sumcheck import ExplicitSummand, PointClaim
    from .zksumcheck import (StrongHonestVerifier, StrongZkInstance,
                             WeakHonestVerifier, WeakZkInstance,
                             strong_zk_run, weak_zk_run)
    f = _field_arg(args.field)
    rng = RngStream(args.seed)
    H = tuple(range(args.h_size))
    ok_count = 0
    t = tr.Transcript(f"zksumcheck-{args.variant}", {"m": args.m, "d": args.d})
    for i in range(args.trials):
        r = rng.child("trial", i)
        poly = random_poly(f, (args.d,) * args.m, r.child("poly"))
        a = poly.partial_sum((), [H] * args.m)
        ch = tr.Channel(t) if i == args.trials - 1 else None
        if args.variant == "weak":
            inst = WeakZkInstance(f, args.m, poly.deg_bounds, H, a)
            out, view = weak_zk_run(ExplicitSummand(poly, H), inst,
                                    WeakHonestVerifier(), r, channel=ch)
        else:
            I = tuple(x for x in range(f.order) if x not in set(H))
            G = tuple(f.first_elements(args.lam))
            inst = StrongZkInstance(f, H, poly.deg_bounds, args.k, args.lam, G, I, a)
            out, view = strong_zk_run(ExplicitSummand(poly, H), inst,
                                      StrongHonestVerifier(), r, channel=ch)
        if isinstance(out, PointClaim) and poly.eval(out.point) == out.value:
            ok_count += 1
    print(f"trials={args.trials} true-output-claims={ok_count}")
    _write_transcript(t, args.out)
    return 0 if ok_count == args.trials else 1


def cmd_commit(args):
    from .commit import commit, counterexample_multilinear, decommit
    f = Field.prime(args.p)
    rng = RngStream(args.seed)
    Q = random_poly(f, (args.dq,) * args.m, rng.child("Q"))
    G = tuple(f.first_elements(args.g_size))
    c = commit(Q, args.k, G, args.d, rng.child("commit"))
    alpha = tuple(rng.child("alpha").element(f) for _ in range(args.m))
    ok, val, view = decommit(c, alpha, rng.child("open"))
    print(f"decommit at {alpha}: accepted={ok} value={val} Q(alpha)={Q.eval(alpha)}")
    if args.insecure_multilinear:
        pt, predicted = counterexample_multilinear(f, 5, args.k)
        print(f"multilinear attack point {pt}: predicted committed value factor {predicted}")
    return 0 if ok else 1


def cmd_ldt(args):
    from .ldtest import LdtParams, acceptance_rate, make_honest_strategy, make_mixture_strategy
    f = _field_arg(args.field)
    rng = RngStream(args.seed)
    params = LdtParams(f, args.m, args.d)
    if args.strategy == "honest":
        q = random_poly(f, (args.d,) * args.m, rng.child("Q"))
        s = make_honest_strategy(q)
        pair = (s, s)
    elif args.strategy == "bad-degree":
        q = random_poly(f, (args.d + 1,) + (args.d,) * (args.m - 1), rng.child("Q"))
        s = make_honest_strategy(q)
        pair = (s, s)
    else:
        q1 = random_poly(f, (args.d,) * args.m, rng.child("Q1"))
        q2 = random_poly(f, (args.d,) * args.m, rng.child("Q2"))
        pair = make_mixture_strategy([(0.5, q1), (0.5, q2)])
    rate = acceptance_rate(pair, params, args.trials, rng.child("rounds"))
    print(json.dumps({"strategy": args.strategy, "trials": args.trials,
                      "acceptance": rate}))
    return 0


def _load_nexp(args):
    from .nexp import O3SatInstance, O3SatWitness, arithmetize, parse_circuit
    with open(args.instance) as fh:
        inst_data = json.load(fh)
    inst = O3SatInstance(inst_data["r"], inst_data["s"],
                         parse_circuit(inst_data["formula"]))
    witness = None
    if args.witness:
        with open(args.witness) as fh:
            bits = [int(ch) for ch in fh.read().split()[0]]
        witness = O3SatWitness.from_bits(inst.s, bits)
    f = Field.gf2(args.e)
    H = subfield_of_order(f, args.h_size)
    return inst, witness, arithmetize(inst, f, H)


def cmd_nexp(args):
    from .nexp import NexpHonestVerifier, NexpParams, nexp_run, nexp_simulate
    inst, witness, arith = _load_nexp(args)
    params = NexpParams(b=args.b)
    rng = RngStream(args.seed)
    t = tr.Transcript("nexp", {"r": inst.r, "s": inst.s, "b": args.b},
                      seed=str(args.seed))
    if args.action == "prove":
        if witness is None:
            print("prove needs --witness", file=sys.stderr)
            return 2
        out, view, st = nexp_run(arith, witness, params, NexpHonestVerifier(),
                                 rng, channel=tr.Channel(t))
        accept = isinstance(out, dict) and out.get("accept")
        print(f"verdict: {'accept' if accept else 'reject'}")
        _write_transcript(t, args.out)
        return 0 if accept else 1
    if args.action == "simulate":
        out, view, info = nexp_simulate(arith, params, NexpHonestVerifier(), rng,
                                        channel=tr.Channel(t))
        accept = isinstance(out, dict) and out.get("accept")
        print(f"simulated verdict: {'accept' if accept else 'reject'}; "
              f"Z-queries {info['z_queries']}")
        _write_transcript(t, args.out)
        return 0 if accept else 1
    # verify-transcript: replay determinism
    with open(args.transcript, "rb") as fh:
        loaded = tr.Transcript.from_bytes(fh.read())
    t2 = tr.Transcript("nexp", loaded.params, seed=loaded.seed)
    if witness is None:
        print("verify-transcript needs --witness", file=sys.stderr)
        return 2
    nexp_run(arith, witness, NexpParams(b=loaded.params["b"]),
             NexpHonestVerifier(), RngStream(loaded.seed), channel=tr.Channel(t2))
    same = t2.to_bytes() == loaded.to_bytes()
    print(f"replay {'matches' if same else 'DIFFERS'}")
    return 0 if same else 1


def cmd_lift(args):
    from .lift import LiftedProtocol, WeakZkIpcp, lift_run
    f = _field_arg(args.field)
    rng = RngStream(args.seed)
    if args.inner == "weak-zk":
        F = random_poly(f, (2, 2), rng.child("F"))
        H = (0, 1)
        inner = WeakZkIpcp(F, H, F.partial_sum((), [H, H]))
    else:
        print("lift --inner nexp: use the test suite driver (heavy setup)",
              file=sys.stderr)
        return 2
    lp = LiftedProtocol(inner, mode=args.mode)
    accepts = 0
    for i in range(args.trials):
        ok, view = lift_run(lp, rng.child("trial", i))
        accepts += (ok is True)
    print(json.dumps({"inner": args.inner, "mode": args.mode,
                      "trials": args.trials, "acceptance": accepts / args.trials,
                      "declared_rounds": lp.declared_rounds()}))
    return 0


def cmd_aqc(args):
    from .aqc import (RankInstance, brute_force_sum, check_independence,
                      check_lower_bound, closed_form_sum, search_single_query)
    f = Field.prime(17)
    f3 = Field.prime(3)
    rng = RngStream(args.seed)
    failures = 0
    if args.suite in ("closed-forms", "all"):
        n = 0
        for i in range(50):
            p = random_poly(f, (1,) * 3, rng.child("ml", i))
            r = closed_form_sum(p, SubsetSpec.explicit(f, [2, 5, 11]))
            n += r["equal"]
        print(f"closed-forms: multilinear {n}/50 exact")
        failures += (n != 50)
    if args.suite in ("independence", "all"):
        ok = check_independence(f3, 1, 1, 1, 2, (0, 1), [(0, 2)])
        bad = check_independence(f3, 1, 1, 1, 1, (0, 1), [(0, 2)])
        print(f"independence: d'=2 independent={ok}; d'=1 attack dependent={not bad}")
        failures += (not ok) or bad
    if args.suite in ("lower-bound", "all"):
        res = search_single_query(f3, 1, 1, 1, 2, (0, 1), {(0,): 1, (1,): 0})
        print(f"lower-bound: single-query search found={res}")
        failures += res is not None
    print("PASS" if failures == 0 else "FAIL")
    return 0 if failures == 0 else 1


def cmd_zk_test(args):
    from .stats import zk_test_chi2, zk_test_exhaustive
    from .sumcheck import ExplicitSummand
    from .zksumcheck import (StrongHonestVerifier, StrongZkInstance,
                             WeakHonestVerifier, WeakZkInstance,
                             strong_zk_run, strong_zk_simulate,
                             weak_zk_run, weak_zk_simulate)
    th = Thresholds.load(args.config)
    f3 = Field.prime(3)
    H = (0, 1)
    F = MultiPoly(f3, (2,), [1, 2, 1])
    a = F.partial_sum((), [H])
    if args.protocol == "weak":
        inst = WeakZkInstance(f3, 1, (2,), H, a)
        real = lambda rng: weak_zk_run(ExplicitSummand(F, H), inst,
                                       WeakHonestVerifier(), rng,
                                       prover_mode="lazy")[1].key()
        sim = lambda rng: weak_zk_simulate(lambda pt: F.eval(pt), inst,
                                           WeakHonestVerifier(), rng)[1].key()
    else:
        inst = StrongZkInstance(f3, H, (2,), 1, 1, (0,), (2,), a)
        real = lambda rng: strong_zk_run(ExplicitSummand(F, H), inst,
                                         StrongHonestVerifier(), rng,
                                         prover_mode="lazy")[1].key()
        sim = lambda rng: strong_zk_simulate(lambda pt: F.eval(pt), inst,
                                             StrongHonestVerifier(), rng,
                                             query_bound=16)[1].key()
    if args.mode == "exhaustive":
        rep = zk_test_exhaustive(real, sim)
    else:
        rep = zk_test_chi2(real, sim, n=min(th.chi2_samples, args.n or th.chi2_samples),
                           p_floor=th.p_floor, seed=args.seed)
    print(rep)
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="zkipcp",
                                 description="finite-field interactive proof toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", default="0")
        p.add_argument("--out", default=None, help="transcript output path")
        p.add_argument("--field", default='{"kind":"prime","p":97}')

    p = sub.add_parser("field")
    common(p)
    p.add_argument("--subgroups", type=int, default=0)
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("sumcheck")
    common(p)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--h-size", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--malicious", action="store_true")
    p.set_defaults(fn=cmd_sumcheck)

    p = sub.add_parser("zksumcheck")
    common(p)
    p.add_argument("--variant", choices=["weak", "strong"], default="weak")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--h-size", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--lam", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=cmd_zksumcheck)

    p = sub.add_parser("commit")
    common(p)
    p.add_argument("--p", type=int, default=17)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--dq", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--g-size", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--insecure-multilinear", action="store_true")
    p.set_defaults(fn=cmd_commit)

    p = sub.add_parser("ldt")
    common(p)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--strategy", choices=["honest", "mixture", "bad-degree"],
                   default="honest")
    p.set_defaults(fn=cmd_ldt)

    p = sub.add_parser("nexp")
    common(p)
    p.add_argument("action", choices=["prove", "verify-transcript", "simulate"])
    p.add_argument("--instance", required=True)
    p.add_argument("--witness", default=None)
    p.add_argument("--transcript", default=None)
    p.add_argument("--e", type=int, default=8, help="field = GF(2^e)")
    p.add_argument("--h-size", type=int, default=4)
    p.add_argument("--b", type=int, default=4)
    p.set_defaults(fn=cmd_nexp)

    p = sub.add_parser("lift")
    common(p)
    p.add_argument("action", choices=["run"], nargs="?", default="run")
    p.add_argument("--inner", choices=["weak-zk", "nexp"], default="weak-zk")
    p.add_argument("--mode", choices=["zk", "fast"], default="zk")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("aqc")
    common(p)
    p.add_argument("action", choices=["verify"], nargs="?", default="verify")
    p.add_argument("--suite", choices=["lower-bound", "independence",
                                       "closed-forms", "all"], default="all")
    p.set_defaults(fn=cmd_aqc)

    p = sub.add_parser("zk-test")
    common(p)
    p.add_argument("--protocol", choices=["weak", "strong"], default="weak")
    p.add_argument("--mode", choices=["exhaustive", "chi2"], default="exhaustive")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(fn=cmd_zk_test)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
