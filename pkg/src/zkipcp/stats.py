"""Statistical and exact testers for protocol properties.

* exhaustive_distribution: drives a run function over every assignment of
  its randomness (via TapeRng) and returns the exact distribution of its
  output key, with Fraction weights.
* zk_test: compares a real and a simulated view sampler, either exhaustively
  (exact, bin-for-bin) or by a two-sample chi-square test at sample size N.
* soundness_mc: Monte Carlo acceptance rate with a Wilson interval checked
  against a theoretical bound plus slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from scipy.stats import chi2 as _chi2_dist

from .rng import RngStream, TapeExhausted, TapeRng


def exhaustive_distribution(run_fn, *, max_leaves: int = 2_000_000) -> dict:
    """Exact output distribution of run_fn(rng) over all of its randomness.

    run_fn must draw randomness only through the given rng and return a
    hashable key.  Leaves are weighted by the product of 1/|domain| over the
    draws made, so non-uniform tree shapes are handled exactly.
    """
    dist: dict = {}
    stack: list[list[int]] = [[]]
    leaves = 0
    while stack:
        tape = stack.pop()
        rng = TapeRng(tape)
        try:
            key = run_fn(rng)
        except TapeExhausted as ex:
            stack.extend(tape + [v] for v in range(ex.domain))
            continue
        if rng.pos != len(tape):
            raise RuntimeError("run consumed less randomness than the tape provides")
        w = Fraction(1)
        for n in rng.domains:
            w /= n
        dist[key] = dist.get(key, Fraction(0)) + w
        leaves += 1
        if leaves > max_leaves:
            raise RuntimeError(f"exhaustive enumeration exceeded {max_leaves} leaves")
    total = sum(dist.values(), Fraction(0))
    if total != 1:
        raise RuntimeError(f"leaf weights sum to {total}, not 1")
    return dist


@dataclass
class ZkReport:
    mode: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)

    def __str__(self):
        return f"zk_test[{self.mode}] {'PASS' if self.passed else 'FAIL'} {self.detail}"


def zk_test_exhaustive(real_fn, sim_fn, *, max_leaves: int = 2_000_000) -> ZkReport:
    """Exact distribution equality of two run functions."""
    real = exhaustive_distribution(real_fn, max_leaves=max_leaves)
    sim = exhaustive_distribution(sim_fn, max_leaves=max_leaves)
    keys = set(real) | set(sim)
    bad = []
    for kk in keys:
        if real.get(kk, Fraction(0)) != sim.get(kk, Fraction(0)):
            bad.append(kk)
    return ZkReport("exhaustive", not bad, {
        "real_bins": len(real), "sim_bins": len(sim), "mismatched_bins": len(bad),
    })


def two_sample_chi2(counts_a: dict, counts_b: dict, *, min_expected: float = 5.0):
    """Two-sample chi-square statistic and p-value over the union of bins;
    rare bins are pooled until every pooled bin has enough mass."""
    keys = sorted(set(counts_a) | set(counts_b))
    na = sum(counts_a.values())
    nb = sum(counts_b.values())
    if na == 0 or nb == 0:
        raise ValueError("empty sample")
    pairs = sorted(((counts_a.get(kk, 0), counts_b.get(kk, 0)) for kk in keys),
                   key=lambda ab: -(ab[0] + ab[1]))
    pooled = []
    acc_a = acc_b = 0
    for a, b in pairs:
        acc_a += a
        acc_b += b
        if acc_a + acc_b >= max(min_expected * 2, 10):
            pooled.append((acc_a, acc_b))
            acc_a = acc_b = 0
    if acc_a + acc_b > 0:
        if pooled:
            pa, pb = pooled[-1]
            pooled[-1] = (pa + acc_a, pb + acc_b)
        else:
            pooled.append((acc_a, acc_b))
    if len(pooled) < 2:
        return 0.0, 1.0, len(pooled)  # everything in one bin: indistinguishable
    ka = math.sqrt(nb / na)
    kb = math.sqrt(na / nb)
    stat = 0.0
    for a, b in pooled:
        if a + b == 0:
            continue
        stat += (ka * a - kb * b) ** 2 / (a + b)
    dof = len(pooled) - 1
    p = float(_chi2_dist.sf(stat, dof))
    return stat, p, len(pooled)


def zk_test_chi2(real_sampler, sim_sampler, *, n: int, p_floor: float,
                 seed=0, workers: int | None = None) -> ZkReport:
    """Two-sample chi-square comparison of view keys.

    Samplers take an RngStream and return a hashable key.  Trials use
    independent child streams, optionally across processes.
    """
    counts_a = _collect(real_sampler, n, ("real", seed), workers)
    counts_b = _collect(sim_sampler, n, ("sim", seed), workers)
    stat, p, bins = two_sample_chi2(counts_a, counts_b)
    return ZkReport("chi2", p >= p_floor,
                    {"n": n, "bins": bins, "stat": round(stat, 3), "p": p,
                     "p_floor": p_floor})


def _collect(sampler, n: int, label, workers) -> dict:
    if workers and workers > 1:
        return _collect_parallel(sampler, n, label, workers)
    counts: dict = {}
    for i in range(n):
        kk = sampler(RngStream((label, i)))
        counts[kk] = counts.get(kk, 0) + 1
    return counts


def _collect_parallel(sampler, n: int, label, workers: int) -> dict:
    from concurrent.futures import ProcessPoolExecutor
    chunk = (n + workers - 1) // workers
    ranges = [(i * chunk, min((i + 1) * chunk, n)) for i in range(workers)]
    counts: dict = {}
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_collect_range, [(sampler, label, lo, hi) for lo, hi in ranges]):
            for kk, c in part.items():
                counts[kk] = counts.get(kk, 0) + c
    return counts


def _collect_range(args):
    sampler, label, lo, hi = args
    counts: dict = {}
    for i in range(lo, hi):
        kk = sampler(RngStream((label, i)))
        counts[kk] = counts.get(kk, 0) + 1
    return counts


# -- soundness Monte Carlo ------------------------------------------------------

def wilson_interval(successes: int, trials: int, z: float = 1.96):
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SoundnessReport:
    successes: int
    trials: int
    rate: float
    ci_low: float
    ci_high: float
    bound: float
    slack: float
    passed: bool

    def __str__(self):
        return (f"soundness {self.successes}/{self.trials} rate={self.rate:.4f} "
                f"CI=[{self.ci_low:.4f},{self.ci_high:.4f}] bound={self.bound:.4f}"
                f"+slack={self.slack:.4f} {'PASS' if self.passed else 'FAIL'}")


def soundness_mc(trial_fn, trials: int, bound: float, *, seed=0,
                 slack_sigmas: float = 5.0, wilson_z: float = 1.96) -> SoundnessReport:
    """trial_fn(rng) -> bool (malicious success).  Pass iff the Wilson upper
    bound is within the theoretical bound plus slack_sigmas standard errors
    of the bound at this sample size."""
    wins = 0
    for i in range(trials):
        if trial_fn(RngStream(("mc", seed, i))):
            wins += 1
    lo, hi = wilson_interval(wins, trials, wilson_z)
    sigma = math.sqrt(max(bound * (1 - bound), 1e-12) / trials)
    slack = slack_sigmas * sigma
    return SoundnessReport(wins, trials, wins / trials, lo, hi, bound, slack,
                           hi <= bound + slack)
