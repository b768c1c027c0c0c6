"""Executable checks of the algebraic query-complexity facts.

* The rank lower bound: any query set S that determines l independent linear
  combinations of the partial sums sum_{y in G^k} Z(., y) over the space
  F[X^(m,d), Y^(k,d')] must satisfy
  |S| >= rank(BC) * min(d' - |G| + 2, |G|)^k.
* The independence criterion: with fewer than |G|^k point queries and
  d' >= 2(|G|-1), the query answers are statistically independent of the
  entire partial-sum ensemble; linear independence of the functional blocks
  is equivalent to statistical independence, checkable by ranks.
* Closed-form summation identities: multilinear polynomials over arbitrary
  subsets, and degree-below-|H| polynomials over multiplicative/additive
  subgroups, each checked against brute-force summation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .field import Field, SubsetSpec
from .poly import MultiPoly, lagrange_basis_coeffs, power_sums
from .sampler import ConstraintSet


class AqcError(ValueError):
    pass


class HypothesisUnmet(AqcError):
    """The requested closed form's hypotheses do not hold for this input."""


# -- functional machinery -------------------------------------------------------

def _space(field, m, k, d, dp, G):
    """ConstraintSet used only for its functional builder over
    F[X^(m,d), Y^(k,d')], with Y summed over G."""
    full = tuple(range(min(field.order, 2)))  # X sum domains are never used
    return ConstraintSet(field, (d,) * m + (dp,) * k, [full] * m + [tuple(G)] * k)


def sum_functional(field, m, k, d, dp, G, alpha):
    """Row vector of Z -> sum_{y in G^k} Z(alpha, y)."""
    sp = _space(field, m, k, d, dp, G)
    return np.asarray(sp.functional(tuple(alpha)), dtype=np.int64)


def point_functional(field, m, k, d, dp, G, q):
    sp = _space(field, m, k, d, dp, G)
    q = tuple(q)
    if len(q) != m + k:
        raise AqcError("query point has wrong arity")
    return np.asarray(sp.functional(q), dtype=np.int64)


def matrix_rank(field: Field, rows) -> int:
    """Rank over F by plain Gaussian elimination."""
    f = field
    work = [list(int(x) for x in r) for r in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    pivots = []
    for row in work:
        for pvec, pcol in pivots:
            c = row[pcol]
            if c:
                for j in range(ncols):
                    if pvec[j]:
                        row[j] = f.sub(row[j], f.mul(c, pvec[j]))
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            continue
        inv = f.inv(row[col])
        row = [f.mul(inv, x) for x in row]
        pivots.append((row, col))
        rank += 1
    return rank


# -- the rank lower bound ---------------------------------------------------------

@dataclass
class RankInstance:
    field: Field
    m: int
    k: int
    d: int
    dp: int
    G: tuple
    K: tuple
    L: tuple
    S: list            # query points in F^(m+k)
    C: list            # |L|^m x l combination matrix (row per alpha in L^m, lex order)
    D: list            # |S| x l matrix

    def __post_init__(self):
        self.G = tuple(int(g) for g in self.G)
        self.K = tuple(int(x) for x in self.K)
        self.L = tuple(int(x) for x in self.L)
        self.S = [tuple(int(c) for c in q) for q in self.S]
        if not set(self.K) <= set(self.L):
            raise AqcError("K must be contained in L")
        if len(self.K) != self.d + 1:
            raise AqcError("|K| must equal d+1")
        if self.dp < len(self.G) - 2:
            raise AqcError("need d' >= |G| - 2")


def l_points(L, m):
    return list(itertools.product(L, repeat=m))


def check_lower_bound(inst: RankInstance) -> dict:
    """Verify the (C, D) identity on the whole space (as an equality of
    functionals), compute rank(BC), and check |S| against the floor."""
    f = inst.field
    alphas = l_points(inst.L, inst.m)
    ell = len(inst.C[0]) if inst.C else 0
    if len(inst.C) != len(alphas) or len(inst.D) != len(inst.S):
        raise AqcError("C/D shapes do not match L^m / S")
    sum_rows = [sum_functional(f, inst.m, inst.k, inst.d, inst.dp, inst.G, a)
                for a in alphas]
    pt_rows = [point_functional(f, inst.m, inst.k, inst.d, inst.dp, inst.G, q)
               for q in inst.S]
    for i in range(ell):
        lhs = np.zeros(sum_rows[0].size, dtype=np.int64)
        for a_idx in range(len(alphas)):
            c = int(inst.C[a_idx][i])
            if c:
                lhs = f.add_arr(lhs, f.scale_arr(c, sum_rows[a_idx]))
        rhs = np.zeros_like(lhs)
        for q_idx in range(len(inst.S)):
            dcoef = int(inst.D[q_idx][i])
            if dcoef:
                rhs = f.add_arr(rhs, f.scale_arr(dcoef, pt_rows[q_idx]))
        if not np.array_equal(lhs, rhs):
            raise AqcError(f"(C, D) do not satisfy the summation identity (column {i})")
    # B: column alpha expresses Z(alpha, .) in the basis (Z(beta, .))_{beta in K^m}
    basis = lagrange_basis_coeffs(f, inst.K)

    def lag_at(i_node, x):
        acc = 0
        for coef in reversed(basis[i_node]):
            acc = f.add(f.mul(acc, x), coef)
        return acc

    betas = l_points(inst.K, inst.m)
    bc = []
    for beta_idx, beta in enumerate(betas):
        row = []
        for i in range(ell):
            acc = 0
            for a_idx, alpha in enumerate(alphas):
                c = int(inst.C[a_idx][i])
                if c:
                    bval = 1
                    for bcoord, acoord in zip(beta, alpha):
                        bval = f.mul(bval, lag_at(inst.K.index(bcoord), acoord))
                    acc = f.add(acc, f.mul(bval, c))
            row.append(acc)
        bc.append(row)
    rank_bc = matrix_rank(f, bc) if bc and any(any(r) for r in bc) else 0
    base = min(inst.dp - len(inst.G) + 2, len(inst.G))
    floor = rank_bc * (base ** inst.k) if base > 0 else 0
    return {"rank_bc": rank_bc, "floor": floor, "queries": len(inst.S),
            "holds": len(inst.S) >= floor}


def search_single_query(field, m, k, d, dp, G, combination) -> tuple | None:
    """Exhaustive search for a single query point q and scalar dq with
    sum_alpha C_alpha sum_y Z(alpha, y) = dq * Z(q) for all Z.  Returns
    (q, dq) or None.  `combination` maps alpha in K^m (K = first d+1
    elements) to its coefficient."""
    f = field
    K = tuple(f.first_elements(d + 1))
    lhs = np.zeros(point_functional(f, m, k, d, dp, G,
                                    (0,) * (m + k)).size, dtype=np.int64)
    for alpha, coef in combination.items():
        if coef:
            lhs = f.add_arr(lhs, f.scale_arr(int(coef),
                                             sum_functional(f, m, k, d, dp, G, alpha)))
    for q in itertools.product(range(f.order), repeat=m + k):
        row = point_functional(f, m, k, d, dp, G, q)
        nz = np.nonzero(row)[0]
        lz = np.nonzero(lhs)[0]
        if lz.size == 0:
            return q, 0
        if nz.size == 0:
            continue
        scale = f.div(int(lhs[lz[0]]), int(row[lz[0]])) if row[lz[0]] else None
        if scale is None:
            continue
        if np.array_equal(f.scale_arr(scale, row), lhs):
            return tuple(q), scale
    return None


# -- the independence criterion ------------------------------------------------------

def check_independence(field: Field, m: int, k: int, d: int, dp: int, G, Q) -> bool:
    """rank(B_{S,S'}) == rank(B_S) + rank(B_{S'}) for S = the query points Q
    and S' = the partial-sum ensemble (spanned by alpha in K'^m with
    |K'| = d+1)."""
    f = field
    G = tuple(int(g) for g in G)
    Q = [tuple(int(c) for c in q) for q in Q]
    if not Q:
        return True
    kp = tuple(f.first_elements(d + 1))
    pt_rows = [point_functional(f, m, k, d, dp, G, q) for q in Q]
    sum_rows = [sum_functional(f, m, k, d, dp, G, a)
                for a in itertools.product(kp, repeat=m)]
    # ranks are of the transposed basis blocks; row rank == column rank
    r_s = matrix_rank(f, pt_rows)
    r_sp = matrix_rank(f, sum_rows)
    r_joint = matrix_rank(f, pt_rows + sum_rows)
    return r_joint == r_s + r_sp


def independence_chi2(field: Field, m: int, k: int, d: int, dp: int, G, Q, *,
                      n: int, rng) -> float:
    """Empirical cross-check: p-value of a chi-square independence test
    between the Q-answers and the partial-sum ensemble over sampled Z."""
    from scipy.stats import chi2_contingency
    f = field
    G = tuple(int(g) for g in G)
    kp = tuple(f.first_elements(d + 1))
    alphas = list(itertools.product(kp, repeat=m))
    counts: dict = {}
    full = tuple(range(f.order))
    for i in range(n):
        cs = ConstraintSet(f, (d,) * m + (dp,) * k, [full] * m + [G] * k)
        z = cs.sample_poly(rng.child("z", i))
        left = tuple(z.eval(q) for q in Q)
        right = tuple(z.partial_sum(a, [G] * k) for a in alphas)
        counts[(left, right)] = counts.get((left, right), 0) + 1
    lefts = sorted({lr[0] for lr in counts})
    rights = sorted({lr[1] for lr in counts})
    if len(lefts) < 2 or len(rights) < 2:
        return 1.0
    table = np.zeros((len(lefts), len(rights)), dtype=np.int64)
    for (l, r), cnum in counts.items():
        table[lefts.index(l), rights.index(r)] = cnum
    stat, p, dof, _ = chi2_contingency(table)
    return float(p)


# -- closed-form summation identities ---------------------------------------------------

def brute_force_sum(P: MultiPoly, H, shift=None) -> int:
    f = P.field
    H = tuple(int(h) for h in H)
    shift = tuple(int(v) for v in (shift or (0,) * P.m))
    acc = 0
    for pt in itertools.product(H, repeat=P.m):
        moved = tuple(f.add(a, v) for a, v in zip(pt, shift))
        acc = f.add(acc, P.eval(moved))
    return acc


def closed_form_sum(P: MultiPoly, H: SubsetSpec, shift=None, branch: str | None = None) -> dict:
    """Sum of P over H^m (optionally shifted) by both brute force and the
    applicable closed form; raises HypothesisUnmet when no branch applies.

    Branches: 'multilinear' (any subset H), 'multiplicative' (H a
    multiplicative subgroup, degree < |H|, no shift), 'additive' (H an
    additive subgroup, degree < |H|, any shift).
    """
    f = P.field
    m = P.m
    h_elems = tuple(H.elements)
    n_h = len(h_elems)
    shift = tuple(int(v) for v in (shift or (0,) * m))
    degs = P.individual_degrees()
    max_deg = max(degs) if degs else -1

    if branch is None:
        if max_deg <= 1 and not any(shift):
            branch = "multilinear"
        elif H.kind == "multiplicative_subgroup" and max_deg < n_h and not any(shift):
            branch = "multiplicative"
        elif H.kind == "additive_subgroup" and max_deg < n_h:
            branch = "additive"
        else:
            raise HypothesisUnmet(
                f"no closed form applies: degrees {degs}, H kind {H.kind}, shift {shift}")

    if branch == "multilinear":
        if max_deg > 1:
            raise HypothesisUnmet("polynomial is not multilinear")
        if any(shift):
            raise HypothesisUnmet("the multilinear identity has no shift")
        gamma = 0
        for h in h_elems:
            gamma = f.add(gamma, h)
        n_elt = n_h % f.char  # the integer |H| as a field element
        if n_elt != 0:
            center = f.div(gamma, n_elt)
            formula = f.mul(P.eval((center,) * m), f.pow(n_elt, m))
        else:
            kappa = P.coeff((1,) * m)
            formula = f.mul(kappa, f.pow(gamma, m))
    elif branch == "multiplicative":
        if H.kind != "multiplicative_subgroup":
            raise HypothesisUnmet("H is not a multiplicative subgroup")
        if max_deg >= n_h:
            raise HypothesisUnmet(f"degree {max_deg} not below |H| = {n_h}")
        if any(shift):
            raise HypothesisUnmet("the multiplicative identity has no shift")
        formula = f.mul(P.eval((0,) * m), f.pow(n_h % f.char, m))
    elif branch == "additive":
        if H.kind != "additive_subgroup":
            raise HypothesisUnmet("H is not an additive subgroup")
        if max_deg >= n_h:
            raise HypothesisUnmet(f"degree {max_deg} not below |H| = {n_h}")
        kappa = P.coeff((n_h - 1,) * m)
        a0 = _subspace_poly_linear_term(f, h_elems)
        formula = f.mul(kappa, f.pow(a0, m))
    else:
        raise AqcError(f"unknown branch {branch!r}")

    brute = brute_force_sum(P, h_elems, shift)
    return {"branch": branch, "formula": formula, "brute": brute,
            "equal": formula == brute}


def _subspace_poly_linear_term(f: Field, H) -> int:
    """Linear coefficient of prod_{h in H} (X - h)."""
    coeffs = [1]
    for h in H:
        lower = [f.mul(c, f.neg(h)) for c in coeffs]
        coeffs = [0] + coeffs
        coeffs = [f.add(a, b) for a, b in zip(coeffs, lower + [0])]
    return coeffs[1]
