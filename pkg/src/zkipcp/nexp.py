"""Perfect zero-knowledge proof system for oracle 3-SAT, at desk scale.

An instance is (r, s, B) with B a boolean AND/NOT formula over r+3s+3
inputs; a witness is a table A: {0,1}^s -> {0,1} such that
B(z, b1, b2, b3, A(b1), A(b2), A(b3)) holds for all z and b_i.

The proof system arithmetizes the negation of B over a binary extension
field F with subfield H, encodes bit strings as points of H^m via the
lexicographic index map, commits to a randomized degree-(|H|+2) extension
of the witness by a polynomial Z whose H^k-partial sums recover it, bundles
Z with the oracles of the subprotocols into a single low-degree oracle, and
then reduces everything to sumchecks:

1. a strong-ZK sumcheck on "F(x, y) = 0" with challenges restricted to
   I = F \\ H, for verifier-random x, y;
2. the prover supplies the three witness-extension values the verifier
   needs to finish checking the reduced claim;
3. three weak-ZK sumchecks decommitting those values against Z.

The simulator needs no witness: it draws Z uniformly, runs the strong and
weak subprotocol simulators, and replaces the three revealed values by
uniform field elements (equal values for colliding points).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .field import Field, SubsetSpec, subfield_of_order
from .oracle import Oracle
from .poly import MultiPoly, interpolate_univariate, random_poly
from .sampler import ConstraintSet, DIM_CAP
from .sumcheck import (
    AbortedByProver,
    BatchFnSummand,
    GreedyCheatProver,
    HonestProver,
    PointClaim,
    Reject,
)
from .views import RecordingChannel, View, ViewedOracle
from .zksumcheck import (
    MixedSummand,
    SliceSummand,
    StrongSimCore,
    StrongZkInstance,
    WeakSimCore,
    pair_bundle_value,
    strong_interact,
    strong_prover_setup,
    weak_interact,
    weak_sim_interact,
)
from .commit import recover_by_summation


class NexpError(ValueError):
    pass


# -- boolean circuits (AND/NOT/var) ------------------------------------------------

def parse_circuit(text: str):
    """Prefix-notation circuits: (and C C), (not C), (var i)."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def walk():
        nonlocal pos
        if tokens[pos] != "(":
            raise NexpError(f"expected '(' at token {pos}")
        pos += 1
        op = tokens[pos]
        pos += 1
        if op == "var":
            idx = int(tokens[pos])
            pos += 1
            node = ("var", idx)
        elif op == "not":
            node = ("not", walk())
        elif op == "and":
            a = walk()
            b = walk()
            node = ("and", a, b)
        else:
            raise NexpError(f"unknown op {op!r}")
        if tokens[pos] != ")":
            raise NexpError(f"expected ')' at token {pos}")
        pos += 1
        return node

    node = walk()
    if pos != len(tokens):
        raise NexpError("trailing tokens after circuit")
    return node


def circuit_to_text(node) -> str:
    op = node[0]
    if op == "var":
        return f"(var {node[1]})"
    if op == "not":
        return f"(not {circuit_to_text(node[1])})"
    return f"(and {circuit_to_text(node[1])} {circuit_to_text(node[2])})"


def circuit_vars(node) -> set:
    if node[0] == "var":
        return {node[1]}
    if node[0] == "not":
        return circuit_vars(node[1])
    return circuit_vars(node[1]) | circuit_vars(node[2])


def circuit_eval_bool(node, bits) -> int:
    if node[0] == "var":
        return int(bits[node[1]]) & 1
    if node[0] == "not":
        return 1 - circuit_eval_bool(node[1], bits)
    return circuit_eval_bool(node[1], bits) & circuit_eval_bool(node[2], bits)


def circuit_eval_field(node, f: Field, values):
    """Arithmetized evaluation (AND -> product, NOT -> 1 - x); values may be
    ints or numpy arrays of canonical field elements."""
    if node[0] == "var":
        return values[node[1]]
    if node[0] == "not":
        v = circuit_eval_field(node[1], f, values)
        if isinstance(v, np.ndarray):
            return f.sub_arr(np.ones_like(v), v)
        return f.sub(1, v)
    a = circuit_eval_field(node[1], f, values)
    b = circuit_eval_field(node[2], f, values)
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return f.mul_arr(np.asarray(a), np.asarray(b))
    return f.mul(a, b)


def circuit_degree_vec(node, input_degs):
    """Per-W-variable degree bound of the arithmetized circuit; input_degs
    maps input index -> tuple of per-variable degrees."""
    if node[0] == "var":
        return tuple(input_degs[node[1]])
    if node[0] == "not":
        return circuit_degree_vec(node[1], input_degs)
    a = circuit_degree_vec(node[1], input_degs)
    b = circuit_degree_vec(node[2], input_degs)
    return tuple(x + y for x, y in zip(a, b))


# -- instances and witnesses ---------------------------------------------------------

@dataclass
class O3SatInstance:
    r: int
    s: int
    circuit: tuple

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise NexpError("need r, s >= 1")
        n_in = self.r + 3 * self.s + 3
        bad = [v for v in circuit_vars(self.circuit) if not 0 <= v < n_in]
        if bad:
            raise NexpError(f"circuit reads inputs {bad} outside [0, {n_in})")

    def check(self, witness) -> bool:
        """Full enumeration of the O3SAT condition (desk scale)."""
        r, s = self.r, self.s
        for z in itertools.product((0, 1), repeat=r):
            for b1 in itertools.product((0, 1), repeat=s):
                for b2 in itertools.product((0, 1), repeat=s):
                    for b3 in itertools.product((0, 1), repeat=s):
                        bits = z + b1 + b2 + b3 + (witness[b1], witness[b2], witness[b3])
                        if not circuit_eval_bool(self.circuit, bits):
                            return False
        return True

    def violations(self, witness) -> int:
        count = 0
        for z in itertools.product((0, 1), repeat=self.r):
            for bs in itertools.product((0, 1), repeat=3 * self.s):
                b1, b2, b3 = bs[:self.s], bs[self.s:2 * self.s], bs[2 * self.s:]
                bits = z + b1 + b2 + b3 + (witness[b1], witness[b2], witness[b3])
                if not circuit_eval_bool(self.circuit, bits):
                    count += 1
        return count


class O3SatWitness(dict):
    """Table {0,1}^s -> {0,1}, keyed by bit tuples."""

    @staticmethod
    def from_bits(s: int, bits) -> "O3SatWitness":
        w = O3SatWitness()
        pts = list(itertools.product((0, 1), repeat=s))
        if len(bits) != len(pts):
            raise NexpError(f"witness table must have 2^{s} bits")
        for pt, b in zip(pts, bits):
            w[pt] = int(b) & 1
        return w

    @staticmethod
    def constant(s: int, bit: int) -> "O3SatWitness":
        return O3SatWitness.from_bits(s, [bit] * (1 << s))


def best_witness(inst: O3SatInstance) -> O3SatWitness:
    """Exhaustive search for the witness with fewest violated constraints
    (the natural 'best effort' of an honest-structure prover on a bad
    instance); desk scale only."""
    n = 1 << inst.s
    best, best_v = None, None
    for bits in itertools.product((0, 1), repeat=n):
        w = O3SatWitness.from_bits(inst.s, bits)
        v = inst.violations(w)
        if best_v is None or v < best_v:
            best, best_v = w, v
            if v == 0:
                break
    return best


# -- arithmetization ------------------------------------------------------------------

@dataclass
class ArithInstance:
    inst: O3SatInstance
    field: Field
    H: SubsetSpec
    m1: int
    m2: int
    logh: int
    neg_circuit: tuple
    bit_polys: list        # logh univariate coefficient lists over one H-variable

    @property
    def m_w(self) -> int:
        return self.m1 + 3 * self.m2

    @property
    def d_a(self) -> int:
        return len(self.H) + 2

    def blocks(self):
        """W-variable index ranges for (z, b1, b2, b3)."""
        m1, m2 = self.m1, self.m2
        return [range(0, m1),
                range(m1, m1 + m2),
                range(m1 + m2, m1 + 2 * m2),
                range(m1 + 2 * m2, m1 + 3 * m2)]

    def gamma_index(self, alpha) -> tuple:
        """Bits of the lexicographic index of an H^j point (exact, H-points
        only)."""
        pos = {e: i for i, e in enumerate(self.H.elements)}
        bits = []
        for a in alpha:
            idx = pos[int(a)]
            bits.extend((idx >> (self.logh - 1 - t)) & 1 for t in range(self.logh))
        return tuple(bits)

    def coord_eval_batch(self, w_col: np.ndarray) -> list[np.ndarray]:
        """Evaluate the logh bit polynomials at a column of W-values."""
        f = self.field
        out = []
        for coeffs in self.bit_polys:
            acc = np.zeros_like(w_col)
            for c in reversed(coeffs):
                acc = f.add_arr(f.mul_arr(acc, w_col), np.int64(c))
            out.append(acc)
        return out

    def coords_batch(self, w_pts: np.ndarray) -> list[np.ndarray]:
        """All r+3s bit-coordinate values of gamma-hat at the given W points
        (shape (n, m_w)); coordinate j depends on exactly one W variable."""
        out = []
        for block in self.blocks():
            for v in block:
                out.extend(self.coord_eval_batch(w_pts[:, v]))
        return out

    def f_batch(self, x, y, w_pts: np.ndarray, a_vals) -> np.ndarray:
        """Evaluate the bundled summand at W points; a_vals = (a1, a2, a3)
        arrays of witness-extension values for the three b-blocks."""
        f = self.field
        n = w_pts.shape[0]
        coords = self.coords_batch(w_pts)
        a1, a2, a3 = (np.asarray(a, dtype=np.int64) * np.ones(n, dtype=np.int64)
                      for a in a_vals)
        inputs = coords + [a1, a2, a3]
        g1 = circuit_eval_field(self.neg_circuit, f, inputs)
        if not isinstance(g1, np.ndarray):
            g1 = np.full(n, int(g1), dtype=np.int64)
        g2 = f.mul_arr(a1, f.sub_arr(np.ones(n, dtype=np.int64), a1))
        prod_x = np.ones(n, dtype=np.int64)
        prod_y = np.ones(n, dtype=np.int64)
        one = np.ones(n, dtype=np.int64)
        for j, coord in enumerate(coords):
            xm = f.add_arr(one, f.mul_arr(np.int64(f.sub(int(x[j]), 1)), coord))
            ym = f.add_arr(one, f.mul_arr(np.int64(f.sub(int(y[j]), 1)), coord))
            prod_x = f.mul_arr(prod_x, xm)
            prod_y = f.mul_arr(prod_y, ym)
        return f.add_arr(f.mul_arr(g1, prod_x), f.mul_arr(g2, prod_y))

    def f_deg_bounds(self) -> tuple:
        """Declared per-W-variable individual degree bounds of the summand."""
        mw = self.m_w
        dh = len(self.H) - 1
        da = self.d_a
        input_degs = []
        for block in self.blocks():
            for v in block:
                for _ in range(self.logh):
                    vec = [0] * mw
                    vec[v] = dh
                    input_degs.append(tuple(vec))
        for bi in range(3):
            block = self.blocks()[1 + bi]
            vec = [0] * mw
            for v in block:
                vec[v] = da
            input_degs.append(tuple(vec))
        d_g1 = circuit_degree_vec(self.neg_circuit, input_degs)
        d_g2 = [0] * mw
        for v in self.blocks()[1]:
            d_g2[v] = 2 * da
        d_prod = self.logh * dh
        return tuple(max(a, b) + d_prod for a, b in zip(d_g1, d_g2))


def arithmetize(inst: O3SatInstance, field: Field, H: SubsetSpec) -> ArithInstance:
    if field.kind != "gf2":
        raise NexpError("the arithmetization needs a binary extension field")
    if H.kind != "subfield":
        raise NexpError("H must be a subfield of the field")
    logh = int(math.log2(len(H)))
    if 1 << logh != len(H):
        raise NexpError("|H| must be a power of two")
    if inst.r % logh or inst.s % logh:
        raise NexpError(f"log|H| = {logh} must divide r = {inst.r} and s = {inst.s}")
    m1 = inst.r // logh
    m2 = inst.s // logh
    bit_polys = []
    for t in range(logh):
        vals = [(idx >> (logh - 1 - t)) & 1 for idx in range(len(H))]
        bit_polys.append(interpolate_univariate(field, list(H.elements), vals))
    neg = ("not", inst.circuit)
    return ArithInstance(inst, field, H, m1, m2, logh, neg, bit_polys)


# -- protocol parameters ----------------------------------------------------------------

@dataclass
class NexpParams:
    b: int = 4                  # verifier query bound the ZK guarantee targets
    lam_sc: int | None = None   # inner strong-sumcheck commitment arity
    k_sc: int = 1

    def resolve_k(self, H) -> int:
        return math.ceil(math.log2(100 * self.b) / math.log2(len(H)))

    def resolve_inner(self, arith: ArithInstance) -> tuple:
        """(lam_sc, k_sc) for the strong subprotocol's own commitment; the
        largest arity that respects 2*lam <= deg bound and the sampler cap."""
        if self.lam_sc is not None:
            return self.lam_sc, self.k_sc
        d_f = arith.f_deg_bounds()
        x_dim = 1
        for d in d_f:
            x_dim *= d + 1
        lam = max(1, max(d_f) // 2)
        while lam > 1 and x_dim * (2 * lam + 1) ** self.k_sc > DIM_CAP:
            lam -= 1
        return lam, self.k_sc


@dataclass
class NexpProverState:
    z_poly: MultiPoly
    a_hat: MultiPoly           # recovered witness extension, degree |H|+2
    pis: list                  # weak-ZK masks pi_1..pi_3
    strong_state: object       # StrongProverState for pi_0
    sinst: StrongZkInstance
    k: int


class NexpBundleOracle(Oracle):
    """The proof oracle: the bundling of Z, pi_0 (the strong subprotocol's
    pair oracle), and pi_1..pi_3 over the index set S = first 5 elements.
    Components read the first n_i of the shared variables; zero-weight
    components are skipped, so on-index queries touch one component."""

    S = (0, 1, 2, 3, 4)

    def __init__(self, field: Field, comps, **kw):
        # comps: list of (label, nvars, eval_fn) or (label, nvars, eval_fn, batch_fn)
        self.comps = [c if len(c) == 4 else (*c, None) for c in comps]
        nv = 1 + max(c[1] for c in self.comps)
        super().__init__(field, nv, **kw)
        from .poly import lagrange_basis_coeffs
        self._basis = lagrange_basis_coeffs(field, self.S)

    def component_weights(self, w: int) -> list[int]:
        f = self.field
        out = []
        for i in range(len(self.comps)):
            acc = 0
            for c in reversed(self._basis[i]):
                acc = f.add(f.mul(acc, w), c)
            out.append(acc)
        return out

    def _answer_point(self, point):
        f = self.field
        w = point[0]
        rest = tuple(point[1:])
        acc = 0
        for weight, (_, nv, fn, _) in zip(self.component_weights(w), self.comps):
            if weight:
                acc = f.add(acc, f.mul(weight, fn(rest[:nv])))
        return acc

    def answer_batch(self, points: np.ndarray) -> np.ndarray:
        """Unlogged batched evaluation (prover-side reconstruction only)."""
        f = self.field
        pts = np.asarray(points, dtype=np.int64)
        n = pts.shape[0]
        w = pts[:, 0]
        acc = np.zeros(n, dtype=np.int64)
        for i, (_, nv, fn, batch_fn) in enumerate(self.comps):
            weights = np.zeros(n, dtype=np.int64)
            for c in reversed(self._basis[i]):
                weights = f.add_arr(f.mul_arr(weights, w), np.int64(c))
            if not weights.any():
                continue
            if batch_fn is not None:
                vals = np.asarray(batch_fn(pts[:, 1:1 + nv]), dtype=np.int64)
            else:
                vals = np.array([fn(tuple(p)) for p in pts[:, 1:1 + nv]],
                                dtype=np.int64)
            acc = f.add_arr(acc, f.mul_arr(weights, vals))
        return acc

    def component_point(self, index: int, p) -> tuple:
        pad = self.m - 1 - len(p)
        return (self.S[index],) + tuple(int(c) for c in p) + (0,) * pad


class ComponentView:
    """Adapter exposing one bundle component as its own oracle."""

    def __init__(self, oracle, bundle: NexpBundleOracle, index: int):
        self.oracle = oracle   # possibly a ViewedOracle over the bundle
        self.bundle = bundle
        self.index = index

    def query(self, p) -> int:
        return self.oracle.query(self.bundle.component_point(self.index, p))


def bundle_deg_bounds(arith: ArithInstance, sinst: StrongZkInstance, k: int) -> tuple:
    """Declared per-variable degree bounds of the bundled oracle."""
    comps = [
        (arith.d_a,) * arith.m2 + (2 * len(arith.H),) * k,            # Z
        sinst.oracle_deg_bounds(),                                     # pi_0
    ] + [(2 * len(arith.H),) * k] * 3                                  # pi_1..3
    nv = max(len(c) for c in comps)
    out = [len(NexpBundleOracle.S) - 1]
    for i in range(nv):
        out.append(max(c[i] if i < len(c) else 0 for c in comps))
    return tuple(out)


# -- prover setup ---------------------------------------------------------------------

_COMMIT_CS_CACHE: dict = {}


def nexp_prover_setup(arith: ArithInstance, witness, params: NexpParams, rng, *,
                      tampered_values=None) -> NexpProverState:
    """Draw the witness commitment Z (uniform subject to its H^k partial sums
    hitting the witness bits), the subprotocol masks, and the strong
    subprotocol's oracles.  `tampered_values` overrides committed values at
    chosen H-points (negative tests)."""
    f = arith.field
    H = tuple(arith.H.elements)
    k = params.resolve_k(arith.H)
    assert len(H) ** k >= 100 * params.b, "commitment arity below the query budget"
    m2 = arith.m2
    z_bounds = (arith.d_a,) * m2 + (2 * len(H),) * k
    targets = []
    for alpha in itertools.product(H, repeat=m2):
        val = witness[arith.gamma_index(alpha)]
        if tampered_values and alpha in tampered_values:
            val = tampered_values[alpha]
        targets.append((alpha, int(val)))
    # the constraint system is a pure function of the instance and witness;
    # reuse its echelon form across runs (sample_poly does not mutate it)
    key = (f, z_bounds, H, tuple(targets))
    cs = _COMMIT_CS_CACHE.get(key)
    if cs is None:
        cs = ConstraintSet(f, z_bounds, [H] * m2 + [H] * k)
        for alpha, val in targets:
            cs.add_constraint(alpha, val)
        if len(_COMMIT_CS_CACHE) < 32:
            _COMMIT_CS_CACHE[key] = cs
    z_poly = cs.sample_poly(rng.child("Z"))
    a_hat = recover_by_summation(z_poly, m2, H)
    pis = [random_poly(f, (2 * len(H),) * k, rng.child("pi", i)) for i in range(3)]
    lam_sc, k_sc = params.resolve_inner(arith)
    I = tuple(x for x in range(f.order) if x not in set(H))
    sinst = StrongZkInstance(f, H, arith.f_deg_bounds(), k_sc, lam_sc,
                             tuple(f.first_elements(lam_sc)), I, 0)
    strong_state = strong_prover_setup(sinst, rng.child("pi0"), "explicit")
    return NexpProverState(z_poly, a_hat, pis, strong_state, sinst, k)


def build_bundle(arith: ArithInstance, st: NexpProverState, *, query_bound=None,
                 check_degrees: bool = False) -> NexpBundleOracle:
    f = arith.field
    m2, k = arith.m2, st.k
    sst = st.strong_state
    pi0_nv = 1 + st.sinst.m + st.sinst.k

    def pi0_eval(p):
        return pair_bundle_value(f, st.sinst.m, p, sst.z_eval, sst.a_eval)

    def pi0_batch(pts):
        w = pts[:, 0]
        zs = sst.z_poly.eval_batch(pts[:, 1:]) if sst.z_poly is not None else \
            np.array([sst.z_eval(tuple(p)) for p in pts[:, 1:]], dtype=np.int64)
        ys = pts[:, 1 + st.sinst.m:]
        as_ = sst.a_poly.eval_batch(ys) if sst.a_poly is not None else \
            np.array([sst.a_eval(tuple(p)) for p in ys], dtype=np.int64)
        one = np.ones_like(w)
        return f.add_arr(f.mul_arr(w, zs), f.mul_arr(f.sub_arr(one, w), as_))

    comps = [
        ("Z", m2 + k, st.z_poly.eval, st.z_poly.eval_batch),
        ("pi0", pi0_nv, pi0_eval, pi0_batch),
        ("pi1", k, st.pis[0].eval, st.pis[0].eval_batch),
        ("pi2", k, st.pis[1].eval, st.pis[1].eval_batch),
        ("pi3", k, st.pis[2].eval, st.pis[2].eval_batch),
    ]
    oracle = NexpBundleOracle(f, comps, label="proof", query_bound=query_bound)
    if check_degrees:
        decl = bundle_deg_bounds(arith, st.sinst, k)
        comp_bounds = [(arith.d_a,) * m2 + (2 * len(arith.H),) * k,
                       st.sinst.oracle_deg_bounds()] + \
                      [(2 * len(arith.H),) * k] * 3
        actual = [st.z_poly.individual_degrees(), None,
                  st.pis[0].individual_degrees(), st.pis[1].individual_degrees(),
                  st.pis[2].individual_degrees()]
        for got, declared in zip(actual, comp_bounds):
            if got is None:
                continue
            assert all(g <= d for g, d in zip(got, declared)), \
                f"component degrees {got} exceed declared {declared}"
        if sst.z_poly is not None:
            zdeg = sst.z_poly.individual_degrees()
            zdecl = st.sinst.z_bounds
            assert all(g <= d for g, d in zip(zdeg, zdecl))
        assert max(decl) >= 1
    return oracle


# -- the verifier strategy --------------------------------------------------------------

class NexpHonestVerifier:
    """Honest public-coin verifier: uniform x, y; the strong subprotocol's
    coins; three weak decommit coin sets; all oracle queries after the
    interaction; accepts iff every check passes."""

    def __init__(self):
        self.outcome = None

    def setup(self, oracle, view, ctx, rng):
        self.oracle = oracle
        self.view = view
        self.ctx = ctx            # dict with arith, sinst, k, bundle
        self.rng = rng
        self.arith = ctx["arith"]
        self.sinst = ctx["sinst"]

    def choose_xy(self):
        f = self.arith.field
        n = self.arith.inst.r + 3 * self.arith.inst.s
        x = tuple(self.rng.element(f) for _ in range(n))
        y = tuple(self.rng.element(f) for _ in range(n))
        for c in x + y:
            self.view.coin(c)
        return x, y

    # strong subprotocol hooks
    def choose_rho1(self, z):
        rho = self.rng.nonzero(self.arith.field)
        self.view.coin(rho)
        return rho

    def choose_x_challenge(self, state, g):
        c = self.rng.choice(self.sinst.I)
        self.view.coin(c)
        return c

    def choose_weak_rho(self, z2):
        rho = self.rng.nonzero(self.arith.field)
        self.view.coin(rho)
        return rho

    def choose_weak_challenge(self, state, g):
        c = self.rng.element(self.arith.field)
        self.view.coin(c)
        return c

    def decommit_hooks(self, i: int):
        return _NexpWeakHooks(self)

    def final(self, data):
        if data["result"] != "point-claim":
            self.outcome = data["result"]
            self.view.note("verdict", {"accept": False})
            return self.outcome
        plan = nexp_query_plan(self.ctx["bundle"], self.sinst, self.arith, data)
        answers = [self.oracle.query(p) for p in plan]
        self.outcome = nexp_finalize(self.arith, self.sinst, data, answers)
        accept = isinstance(self.outcome, dict) and self.outcome.get("accept")
        self.view.note("verdict", {"accept": bool(accept)})
        return self.outcome


def nexp_query_plan(bundle: NexpBundleOracle, sinst: StrongZkInstance,
                    arith: ArithInstance, data) -> list[tuple]:
    """The verifier's non-adaptive oracle queries, as bundle points: the
    strong subprotocol's un-mask and decommit checks against pi_0, then the
    per-value mask un-masks and Z checks for the three decommitments."""
    sd = data["strong"]
    c = sd["c"]
    blocks = arith.blocks()
    plan = [
        bundle.component_point(1, (0,) + (0,) * sinst.m + tuple(sd["c2"])),
        bundle.component_point(1, (1,) + tuple(sd["c"]) + tuple(sd["c2"])),
    ]
    for i in range(3):
        wd = data["weak"][i]
        c_block = tuple(c[v] for v in blocks[1 + i])
        plan.append(bundle.component_point(2 + i, wd["point"]))
        plan.append(bundle.component_point(0, c_block + tuple(wd["point"])))
    return plan


def nexp_finalize(arith: ArithInstance, sinst: StrongZkInstance, data, answers):
    """Decision predicate over the planned query answers."""
    f = arith.field
    sd = data["strong"]
    c = sd["c"]
    h_vals = data["h"]
    a_val, z_val = answers[0], answers[1]
    claimed_zc = f.div(f.sub(sd["b2"], a_val), sd["rho2"])
    if z_val != claimed_zc:
        return Reject("strong decommitment mismatch")
    v_f = f.div(f.sub(sd["gm_cm"], sd["w"]), sd["rho1"])
    w_arr = np.array([c], dtype=np.int64)
    got = int(arith.f_batch(data["x"], data["y"], w_arr, h_vals)[0])
    if got != v_f:
        return Reject("substituted witness values fail the reduced claim")
    blocks = arith.blocks()
    for i in range(3):
        wd = data["weak"][i]
        mask_val = answers[2 + 2 * i]
        z_at = answers[3 + 2 * i]
        claimed = f.div(f.sub(wd["value"], mask_val), wd["rho"])
        if z_at != claimed:
            return Reject(f"witness decommitment {i} mismatch")
    return {"accept": True, "claim_point": tuple(c), "claim_value": v_f,
            "h": [int(h) for h in h_vals]}


class _NexpWeakHooks:
    def __init__(self, v):
        self.v = v

    def choose_rho(self, z):
        rho = self.v.rng.nonzero(self.v.arith.field)
        self.v.view.coin(rho)
        return rho

    def choose_challenge(self, state, g):
        c = self.v.rng.element(self.v.arith.field)
        self.v.view.coin(c)
        return c


# -- the protocol -----------------------------------------------------------------------

def nexp_run(arith: ArithInstance, witness, params: NexpParams, vstar, rng, *,
             channel=None, malicious: str | None = None, tampered_values=None,
             query_bound=None, check_degrees: bool = False, prover_state=None,
             bundle=None, view=None):
    """One full protocol run with a real prover.  Returns (outcome, view, st).

    malicious: None (honest), 'cheat-sumcheck' (greedy cheat inside the
    strong sumcheck), or pass tampered_values to corrupt committed bits.
    """
    f = arith.field
    st = prover_state or nexp_prover_setup(arith, witness, params,
                                           rng.child("prover"),
                                           tampered_values=tampered_values)
    if bundle is None:
        bundle = build_bundle(arith, st, query_bound=query_bound,
                              check_degrees=check_degrees)
    view = view if view is not None else View()
    rec = RecordingChannel(view, channel)
    voracle = ViewedOracle(bundle, view, "proof")
    ctx = {"arith": arith, "sinst": st.sinst, "k": st.k, "bundle": bundle}
    vstar.setup(voracle, view, ctx, rng.child("verifier"))

    x, y = vstar.choose_xy()
    blocks = arith.blocks()

    def f_batch(pts):
        w_arr = np.array(pts, dtype=np.int64).reshape(len(pts), arith.m_w)
        a_vals = [st.a_hat.eval_batch(w_arr[:, list(blocks[1 + i])]) for i in range(3)]
        return arith.f_batch(x, y, w_arr, a_vals).tolist()

    F_sc = BatchFnSummand(f, arith.f_deg_bounds(), arith.H.elements, f_batch)
    x_prover = GreedyCheatProver if malicious == "cheat-sumcheck" else HonestProver
    status, sd = strong_interact(F_sc, st.sinst, st.strong_state, vstar, rec,
                                 rng.child("strong"), x_prover_cls=x_prover)
    if status != "ok":
        outcome = vstar.final({"result": sd})
        return (outcome if outcome is not None else sd), view, st

    c = sd["c"]
    h_vals = []
    for i in range(3):
        c_block = tuple(c[v] for v in blocks[1 + i])
        h_vals.append(st.a_hat.eval(c_block))
    rec.prover_says("h", list(h_vals))

    weak_results = []
    for i in range(3):
        c_block = tuple(c[v] for v in blocks[1 + i])
        summand = SliceSummand(
            MixedSummand(st.z_poly, [arith.H.elements] * arith.m2
                         + [arith.H.elements] * st.k),
            c_block, (2 * len(arith.H),) * st.k)
        mask_summand = MixedSummand(st.pis[i], [arith.H.elements] * st.k)
        status, wd = weak_interact(f, h_vals[i], arith.H.elements,
                                   (2 * len(arith.H),) * st.k, summand, mask_summand,
                                   vstar.decommit_hooks(i), rec,
                                   rng.child("decommit", i),
                                   msg_prefix=f"h{i}.")
        if status != "ok":
            outcome = vstar.final({"result": wd})
            return (outcome if outcome is not None else wd), view, st
        weak_results.append(wd)

    data = {"result": "point-claim", "x": x, "y": y, "strong": sd, "h": h_vals,
            "weak": weak_results}
    outcome = vstar.final(data)
    return (outcome if outcome is not None else data), view, st


# -- the simulator ------------------------------------------------------------------------

def nexp_simulate(arith: ArithInstance, params: NexpParams, vstar, rng, *,
                  channel=None, query_bound=None, defect: str | None = None):
    """Simulate the verifier's view without any witness.  Returns
    (outcome, view, info).

    `defect` plants a deliberate simulation flaw for negative controls:
    'bias-h' draws the first revealed value non-uniformly, 'no-collision'
    skips the equal-values rule for colliding points.
    """
    f = arith.field
    H = tuple(arith.H.elements)
    k = params.resolve_k(arith.H)
    m2 = arith.m2
    lam_sc, k_sc = params.resolve_inner(arith)
    I = tuple(x for x in range(f.order) if x not in set(H))
    sinst = StrongZkInstance(f, H, arith.f_deg_bounds(), k_sc, lam_sc,
                             tuple(f.first_elements(lam_sc)), I, 0)
    sim_rng = rng.child("sim")
    z_tilde = random_poly(f, (arith.d_a,) * m2 + (2 * len(H),) * k,
                          sim_rng.child("Z"))
    pi_sims = [WeakSimCore(f, (2 * len(H),) * k, H, None, sim_rng.child("pi", i),
                           mode="explicit")
               for i in range(3)]
    z_query_count = [0]

    def z_component(pt):
        z_query_count[0] += 1
        return z_tilde.eval(pt)

    view = View()
    rec = RecordingChannel(view, channel)
    state = {"x": None, "y": None, "h": None, "c": None}

    def f_query(c):
        # the strong subsimulator's single summand query: substitute uniform
        # values for the witness extension (equal for colliding points)
        blocks = arith.blocks()
        c_blocks = [tuple(c[v] for v in blocks[1 + i]) for i in range(3)]
        h_vals: list = []
        for i in range(3):
            prev = next((h_vals[j] for j in range(i) if c_blocks[j] == c_blocks[i]),
                        None)
            if prev is not None and defect != "no-collision":
                h_vals.append(prev)
            else:
                h = sim_rng.child("h", i).element(f)
                if defect == "bias-h" and i == 0:
                    h &= ~1  # only even representations: not uniform
                h_vals.append(h)
        state["h"] = h_vals
        state["c"] = tuple(c)
        w_arr = np.array([c], dtype=np.int64)
        return int(arith.f_batch(state["x"], state["y"], w_arr, h_vals)[0])

    strong_core = StrongSimCore(sinst, f_query, sim_rng.child("pi0"),
                                mode="explicit")
    pi0_nv = 1 + sinst.m + sinst.k
    comps = [
        ("Z", m2 + k, z_component),
        ("pi0", pi0_nv, strong_core.o_answer),
        ("pi1", k, pi_sims[0].mask_answer),
        ("pi2", k, pi_sims[1].mask_answer),
        ("pi3", k, pi_sims[2].mask_answer),
    ]
    bundle = NexpBundleOracle(f, comps, label="proof",
                              query_bound=100 * params.b if query_bound is None
                              else query_bound)
    voracle = ViewedOracle(bundle, view, "proof")
    ctx = {"arith": arith, "sinst": sinst, "k": k, "bundle": bundle}
    vstar.setup(voracle, view, ctx, rng.child("verifier"))

    x, y = vstar.choose_xy()
    state["x"], state["y"] = x, y

    status, sd = strong_core.interact(vstar, rec, rng.child("strong"))
    if status != "ok":
        outcome = vstar.final({"result": sd})
        return (outcome if outcome is not None else sd), view, {"z_queries": z_query_count[0]}

    c = sd["c"]
    h_vals = state["h"]
    rec.prover_says("h", list(h_vals))

    blocks = arith.blocks()
    weak_results = []
    for i in range(3):
        c_block = tuple(c[v] for v in blocks[1 + i])
        sim = pi_sims[i]

        def z_slice_query(prefix, c_block=c_block):
            z_query_count[0] += 1
            tails = [H] * (k - len(prefix))
            return z_tilde.partial_sum(c_block + tuple(prefix), tails)

        sim.f_query = z_slice_query
        status, wd = weak_sim_interact(sim, f, h_vals[i], H, (2 * len(H),) * k,
                                       vstar.decommit_hooks(i), rec,
                                       rng.child("decommit", i),
                                       msg_prefix=f"h{i}.")
        if status != "ok":
            outcome = vstar.final({"result": wd})
            return (outcome if outcome is not None else wd), view, \
                {"z_queries": z_query_count[0]}
        weak_results.append(wd)

    data = {"result": "point-claim", "x": x, "y": y, "strong": sd, "h": h_vals,
            "weak": weak_results}
    outcome = vstar.final(data)
    info = {"z_queries": z_query_count[0], "f_point": strong_core.info["f_point"]}
    assert len(H) ** k >= 100 * params.b
    return (outcome if outcome is not None else data), view, info
