"""Exact conditional sampling of uniformly random degree-bounded polynomials.

A query is a prefix of the variables: the specified coordinates are fixed
and every remaining variable is summed over its per-variable domain (a
full-length prefix is a point evaluation).  Each query is a linear
functional on the coefficient vector, so the conditional distribution of
an answer given earlier answers is either forced (functional in the row
span: return the unique consistent value) or free (uniform over F).

The constraint set keeps an incremental row-echelon form.  Row vectors are
dense over the coefficient space, so the space dimension is capped; plain
lists are used for tiny spaces (exhaustive tests) and numpy arrays above
that.
"""

from __future__ import annotations

import json

import numpy as np

from .field import Field, field_from_json, field_to_json
from .poly import MultiPoly, PolyError, power_sums

DIM_CAP = 10 ** 6
_SMALL_DIM = 128


class InconsistentConstraint(ValueError):
    pass


class ConstraintSet:
    """Affine constraints on the coefficient vector of a random polynomial in
    the space F[X] with per-variable degree bounds and summation domains.

    Rows satisfy vec . c = rhs; each row is zero before its pivot and has a
    unit pivot, and rows are kept sorted by pivot (incremental echelon form).
    """

    def __init__(self, field: Field, deg_bounds, sum_domains):
        self.field = field
        self.deg_bounds = tuple(int(d) for d in deg_bounds)
        self.sum_domains = [tuple(int(h) for h in d) for d in sum_domains]
        if len(self.sum_domains) != len(self.deg_bounds):
            raise PolyError("need one summation domain per variable")
        self.dim = 1
        for d in self.deg_bounds:
            self.dim *= d + 1
        if self.dim > DIM_CAP:
            raise PolyError(f"coefficient dimension {self.dim} exceeds cap {DIM_CAP}")
        self._small = self.dim <= _SMALL_DIM
        self._psums = [power_sums(field, dom, d + 1)
                       for dom, d in zip(self.sum_domains, self.deg_bounds)]
        self._fn_cache: dict = {}
        self.rows: list = []
        self.entries: list[tuple[tuple, int]] = []  # (query, value) history

    @property
    def m(self) -> int:
        return len(self.deg_bounds)

    # -- functional construction ------------------------------------------

    def functional(self, query):
        """Tensor-product row vector of the prefix query (cached; callers
        must not mutate the result)."""
        query = tuple(int(c) for c in query)
        cached = self._fn_cache.get(query)
        if cached is not None:
            return cached
        if len(query) > self.m:
            raise PolyError("prefix longer than the variable count")
        f = self.field
        factors = []
        for i, d in enumerate(self.deg_bounds):
            if i < len(query):
                factors.append([f.pow(query[i], j) for j in range(d + 1)])
            else:
                factors.append(self._psums[i])
        if self._small:
            vec = [1]
            for fac in factors:
                vec = [f.mul(a, b) for a in vec for b in fac]
        else:
            vec = np.ones(1, dtype=np.int64)
            for fac in factors:
                fac = np.asarray(fac, dtype=np.int64)
                vec = f.mul_arr(vec[:, None], fac[None, :]).reshape(-1)
        if len(self._fn_cache) < 4096:
            self._fn_cache[query] = vec
        return vec

    # -- row echelon ---------------------------------------------------------

    def _reduce(self, vec, rhs: int):
        """Forward-eliminate (vec, rhs) against the stored rows.  Returns
        (vec', rhs', pivot); pivot is None when vec lies in the row span, in
        which case `vec . c = rhs` holds for all solutions iff rhs' == 0."""
        f = self.field
        if self._small:
            vec = list(vec)
            for rvec, rrhs, rpiv in self.rows:
                c = vec[rpiv]
                if c:
                    vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, rvec)]
                    rhs = f.sub(rhs, f.mul(c, rrhs))
            piv = next((i for i, a in enumerate(vec) if a), None)
            return vec, rhs, piv
        vec = np.array(vec, dtype=np.int64)
        for rvec, rrhs, rpiv in self.rows:
            c = int(vec[rpiv])
            if c:
                vec = f.sub_arr(vec, f.scale_arr(c, rvec))
                rhs = f.sub(rhs, f.mul(c, rrhs))
        nz = np.nonzero(vec)[0]
        piv = int(nz[0]) if nz.size else None
        return vec, rhs, piv

    def _insert(self, vec, rhs: int, piv: int):
        f = self.field
        lead = vec[piv] if self._small else int(vec[piv])
        if lead != 1:
            inv = f.inv(lead)
            if self._small:
                vec = [f.mul(inv, a) for a in vec]
            else:
                vec = f.scale_arr(inv, vec)
            rhs = f.mul(inv, rhs)
        self.rows.append((vec, rhs, piv))
        self.rows.sort(key=lambda r: r[2])

    def rank(self) -> int:
        return len(self.rows)

    # -- public API -----------------------------------------------------------

    def classify(self, query):
        """('forced', value) or ('free', None); does not mutate the set."""
        vec, rhs, piv = self._reduce(self.functional(query), 0)
        if piv is None:
            return "forced", self.field.neg(rhs)
        return "free", None

    def add_constraint(self, query, value: int):
        """Insert `answer(query) == value`; raises on inconsistency."""
        query = tuple(int(c) for c in query)
        value = int(value)
        vec, rhs, piv = self._reduce(self.functional(query), value)
        if piv is None:
            if rhs != 0:
                raise InconsistentConstraint(
                    f"query {query} is forced to {self.field.sub(value, rhs)}, got {value}")
        else:
            self._insert(vec, rhs, piv)
        self.entries.append((query, value))

    def conditional_answer(self, query, rng) -> int:
        """Sample the answer to the query from its exact conditional
        distribution given all previous entries, then record it."""
        query = tuple(int(c) for c in query)
        vec, rhs, piv = self._reduce(self.functional(query), 0)
        if piv is None:
            value = self.field.neg(rhs)  # forced
        else:
            value = rng.element(self.field)
            self._insert(vec, self.field.add(rhs, value), piv)
        self.entries.append((query, value))
        return value

    def sample_poly(self, rng) -> MultiPoly:
        """Explicit polynomial uniform over the affine solution set: free
        coordinates drawn uniformly, pivots fixed by back-substitution."""
        f = self.field
        if self._small:
            pivots = {piv for _, _, piv in self.rows}
            coeffs = [0 if i in pivots else rng.element(f) for i in range(self.dim)]
            for vec, rhs, piv in sorted(self.rows, key=lambda r: -r[2]):
                acc = rhs
                for j in range(piv + 1, self.dim):
                    if vec[j]:
                        acc = f.sub(acc, f.mul(vec[j], coeffs[j]))
                coeffs[piv] = acc
            return MultiPoly(f, self.deg_bounds, coeffs)
        coeffs = rng.field_array(f, self.dim)
        for vec, rhs, piv in sorted(self.rows, key=lambda r: -r[2]):
            tail = f.dot_arr(vec[piv + 1:], coeffs[piv + 1:]) if piv + 1 < self.dim else 0
            coeffs[piv] = f.sub(rhs, tail)
        return MultiPoly(f, self.deg_bounds, coeffs)

    # -- fixture replay ---------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "field": json.loads(field_to_json(self.field)),
            "deg_bounds": list(self.deg_bounds),
            "sum_domains": [list(d) for d in self.sum_domains],
            "entries": [[list(q), v] for q, v in self.entries],
        })

    @staticmethod
    def from_json(text: str | dict) -> "ConstraintSet":
        d = json.loads(text) if isinstance(text, str) else text
        cs = ConstraintSet(field_from_json(d["field"]), d["deg_bounds"], d["sum_domains"])
        for q, v in d["entries"]:
            cs.add_constraint(tuple(q), v)
        return cs


def conditional_answer(cs: ConstraintSet, query, rng) -> int:
    return cs.conditional_answer(query, rng)


def sample_constrained_poly(cs: ConstraintSet, rng) -> MultiPoly:
    return cs.sample_poly(rng)


def sample_with_constraints(field: Field, deg_bounds, sum_domains, constraints, rng) -> MultiPoly:
    """Uniform draw from the polynomials satisfying the (query, value)
    constraints; convenience wrapper over ConstraintSet."""
    cs = ConstraintSet(field, deg_bounds, sum_domains)
    for q, v in constraints:
        cs.add_constraint(q, v)
    return cs.sample_poly(rng)
