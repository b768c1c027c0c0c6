"""Queryable evaluation oracles over F^m.

An oracle answers point queries and, when configured with per-variable
summation domains, prefix queries (the unspecified tail variables are
summed over their domains).  Answers are deterministic: a repeated query
hits the cache and does not count again.  The query log holds distinct
query events only and enforces an optional budget: an algorithm with
budget b may make strictly fewer than b distinct queries, and the b-th
raises before being answered.
"""

from __future__ import annotations

import numpy as np

from .field import Field
from .poly import MultiPoly, PolyError


class QueryBudgetExceeded(RuntimeError):
    pass


class PrefixQueriesUnsupported(RuntimeError):
    pass


class Oracle:
    """Base oracle: caching, logging, budget enforcement."""

    def __init__(self, field: Field, m: int, *, query_bound: int | None = None,
                 sum_domains=None, label: str = ""):
        self.field = field
        self.m = m
        self.query_bound = query_bound
        self.sum_domains = None if sum_domains is None else [
            tuple(int(h) for h in d) for d in sum_domains]
        if self.sum_domains is not None and len(self.sum_domains) != m:
            raise PolyError("need one summation domain per variable")
        self.label = label
        self.query_log: list[tuple] = []
        self._cache: dict[tuple, int] = {}

    # subclasses implement the raw answers
    def _answer_point(self, point: tuple) -> int:
        raise NotImplementedError

    def _answer_prefix(self, prefix: tuple) -> int:
        raise PrefixQueriesUnsupported(f"oracle {self.label!r} answers point queries only")

    def query(self, point) -> int:
        point = tuple(int(c) for c in point)
        if len(point) != self.m:
            raise PolyError(f"point has {len(point)} coordinates, oracle has {self.m}")
        return self._serve(("point", point), lambda: self._answer_point(point))

    def prefix_query(self, prefix) -> int:
        prefix = tuple(int(c) for c in prefix)
        if len(prefix) > self.m:
            raise PolyError("prefix longer than the variable count")
        if len(prefix) == self.m:
            return self.query(prefix)
        if self.sum_domains is None:
            raise PrefixQueriesUnsupported(f"oracle {self.label!r} answers point queries only")
        return self._serve(("prefix", prefix), lambda: self._answer_prefix(prefix))

    def _serve(self, key: tuple, compute) -> int:
        if key in self._cache:
            return self._cache[key]
        if self.query_bound is not None and len(self.query_log) + 1 >= self.query_bound:
            raise QueryBudgetExceeded(
                f"oracle {self.label!r}: query bound {self.query_bound} reached")
        ans = int(compute())
        self._cache[key] = ans
        self.query_log.append((key[0], key[1], ans))
        return ans

    @property
    def distinct_queries(self) -> int:
        return len(self.query_log)

    def replay_check(self) -> bool:
        """Re-ask every logged query; True iff all answers are unchanged."""
        for kind, args, ans in list(self.query_log):
            got = self._answer_point(args) if kind == "point" else self._answer_prefix(args)
            if int(got) != ans:
                return False
        return True


class PolyOracle(Oracle):
    """Backed by an explicit polynomial."""

    def __init__(self, poly: MultiPoly, **kw):
        super().__init__(poly.field, poly.m, **kw)
        self.poly = poly

    def _answer_point(self, point):
        return self.poly.eval(point)

    def _answer_prefix(self, prefix):
        tails = self.sum_domains[len(prefix):]
        return self.poly.partial_sum(prefix, tails)


class TableOracle(Oracle):
    """Backed by an evaluation table over a product domain."""

    def __init__(self, field: Field, axes, table, **kw):
        axes = [tuple(int(x) for x in a) for a in axes]
        super().__init__(field, len(axes), **kw)
        self.axes = axes
        self._pos = [{v: i for i, v in enumerate(a)} for a in axes]
        self.table = np.asarray(table, dtype=np.int64).reshape(
            tuple(len(a) for a in axes))

    def _answer_point(self, point):
        try:
            idx = tuple(self._pos[i][c] for i, c in enumerate(point))
        except KeyError:
            raise PolyError(f"point {point} outside the table domain")
        return int(self.table[idx])

    def _answer_prefix(self, prefix):
        idx = tuple(self._pos[i][c] for i, c in enumerate(prefix))
        sub = self.table[idx]
        f = self.field
        acc = 0
        for tail_idx in np.ndindex(sub.shape):
            pt_tail = tuple(self.axes[len(prefix) + i][j] for i, j in enumerate(tail_idx))
            if all(c in self.sum_domains[len(prefix) + i] for i, c in enumerate(pt_tail)):
                acc = f.add(acc, int(sub[tail_idx]))
        return acc


class FnOracle(Oracle):
    """Backed by a callable (virtual composition: bundles, masked sums, ...)."""

    def __init__(self, field: Field, m: int, fn, prefix_fn=None, **kw):
        super().__init__(field, m, **kw)
        self.fn = fn
        self.prefix_fn = prefix_fn

    def _answer_point(self, point):
        return self.fn(point)

    def _answer_prefix(self, prefix):
        if self.prefix_fn is None:
            raise PrefixQueriesUnsupported(f"oracle {self.label!r} has no prefix rule")
        return self.prefix_fn(prefix)


class SamplerOracle(Oracle):
    """Backed by a lazy conditional sampler (see `sampler`); consistent with a
    uniformly random polynomial drawn from the sampler's space."""

    def __init__(self, constraint_set, rng, **kw):
        cs = constraint_set
        super().__init__(cs.field, cs.m, sum_domains=cs.sum_domains, **kw)
        self.cs = cs
        self.rng = rng

    def _answer_point(self, point):
        return self.cs.conditional_answer(point, self.rng)

    def _answer_prefix(self, prefix):
        return self.cs.conditional_answer(prefix, self.rng)

    def replay_check(self) -> bool:
        for kind, args, ans in list(self.query_log):
            if self.cs.conditional_answer(args, self.rng) != ans:
                return False
        return True
