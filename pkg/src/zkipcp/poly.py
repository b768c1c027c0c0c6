"""Dense multivariate polynomials with per-variable individual-degree bounds.

Coefficients live in a flat numpy int64 array in lexicographic exponent
order (first variable most significant), which is exactly C-order of the
shape (d_1+1, ..., d_m+1).  Polynomials are immutable after construction.

Also here: interpolation (low-degree extension over a product grid),
restriction to lines/planes/curves, prefix partial sums over product
domains, bundling a list of polynomials into one via an index variable,
and uniform random sampling of the coefficient space.
"""

from __future__ import annotations

import json

import numpy as np

from .field import Field, SubsetSpec, field_from_json, field_to_json

_SMALL = 512  # below this many coefficients, plain-int paths beat numpy


class PolyError(ValueError):
    pass


class MultiPoly:
    __slots__ = ("field", "deg_bounds", "coeffs", "_list")

    def __init__(self, field: Field, deg_bounds, coeffs):
        self.field = field
        self.deg_bounds = tuple(int(d) for d in deg_bounds)
        if any(d < 0 for d in self.deg_bounds):
            raise PolyError("negative degree bound")
        n = 1
        for d in self.deg_bounds:
            n *= d + 1
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        if arr.size != n:
            raise PolyError(f"need {n} coefficients, got {arr.size}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.coeffs = arr
        self._list = None

    # -- basic geometry ----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.deg_bounds)

    @property
    def shape(self) -> tuple:
        return tuple(d + 1 for d in self.deg_bounds)

    def nd(self) -> np.ndarray:
        return self.coeffs.reshape(self.shape)

    def coeff_list(self) -> list:
        if self._list is None:
            self._list = self.coeffs.tolist()
        return self._list

    def coeff(self, exponents) -> int:
        idx = 0
        for e, d in zip(exponents, self.deg_bounds):
            if not 0 <= e <= d:
                return 0
            idx = idx * (d + 1) + e
        return int(self.coeffs[idx])

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def individual_degrees(self) -> tuple:
        """Actual per-variable degrees (-1 for the zero polynomial)."""
        nz = np.nonzero(self.nd())
        if len(nz[0]) == 0:
            return tuple(-1 for _ in self.deg_bounds)
        return tuple(int(ax.max()) for ax in nz)

    def total_degree(self) -> int:
        nz = np.nonzero(self.nd())
        if len(nz[0]) == 0:
            return -1
        return int(np.stack(nz).sum(axis=0).max())

    # -- evaluation ----------------------------------------------------------

    def eval(self, point) -> int:
        point = tuple(point)
        if len(point) != self.m:
            raise PolyError(f"point has {len(point)} coordinates, poly has {self.m}")
        f = self.field
        if self.coeffs.size < _SMALL:
            vals = self.coeff_list()
            for i in range(self.m - 1, -1, -1):
                w = self.deg_bounds[i] + 1
                x = point[i]
                out = []
                for b in range(0, len(vals), w):
                    acc = 0
                    for j in range(w - 1, -1, -1):
                        acc = f.add(f.mul(acc, x), vals[b + j])
                    out.append(acc)
                vals = out
            return vals[0]
        cur = self.coeffs
        for i in range(self.m - 1, -1, -1):
            w = self.deg_bounds[i] + 1
            x = point[i]
            nd = cur.reshape(-1, w)
            acc = np.zeros(nd.shape[0], dtype=np.int64)
            for j in range(w - 1, -1, -1):
                acc = f.add_arr(f.scale_arr(x, acc), nd[:, j])
            cur = acc
        return int(cur[0])

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at many points; points has shape (n, m).  Large
        coefficient-array/point-count products are chunked to bound the
        intermediate memory."""
        f = self.field
        pts = np.asarray(points, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != self.m:
            raise PolyError("points must have shape (n, m)")
        n = pts.shape[0]
        if n > 1 and self.coeffs.size * n > 4_000_000:
            chunk = max(1, 4_000_000 // self.coeffs.size)
            return np.concatenate([self.eval_batch(pts[i:i + chunk])
                                   for i in range(0, n, chunk)])
        cur = None  # shape (*dims[:i], n) after contracting axis i
        for i in range(self.m - 1, -1, -1):
            w = self.deg_bounds[i] + 1
            x = pts[:, i]
            if cur is None:
                nd = self.coeffs.reshape(-1, w)
                acc = np.zeros((nd.shape[0], n), dtype=np.int64)
                for j in range(w - 1, -1, -1):
                    acc = f.add_arr(f.mul_arr(acc, x[None, :]), nd[:, j][:, None])
            else:
                nd = cur.reshape(-1, w, n)
                acc = np.zeros((nd.shape[0], n), dtype=np.int64)
                for j in range(w - 1, -1, -1):
                    acc = f.add_arr(f.mul_arr(acc, x[None, :]), nd[:, j, :])
            cur = acc
        return cur.reshape(n)

    def partial_sum(self, prefix, tail_domains) -> int:
        """Sum over the tail variables: prefix fixes the first j coordinates,
        variable j+i ranges over tail_domains[i]."""
        prefix = tuple(prefix)
        j = len(prefix)
        if j > self.m:
            raise PolyError("prefix longer than the variable count")
        if len(tail_domains) != self.m - j:
            raise PolyError("need one summation domain per tail variable")
        f = self.field
        # contract tail axes (last to first) with power-sum vectors, then
        # the prefix axes with power vectors
        cur = self.coeffs
        widths = [d + 1 for d in self.deg_bounds]
        for i in range(self.m - 1, j - 1, -1):
            vec = power_sums(f, tail_domains[i - j], widths[i])
            cur = _fold_last(f, cur, widths[i], vec)
        for i in range(j - 1, -1, -1):
            vec = [f.pow(prefix[i], t) for t in range(widths[i])]
            cur = _fold_last(f, cur, widths[i], vec)
        return int(cur[0]) if isinstance(cur, np.ndarray) else cur[0]

    # -- algebra -------------------------------------------------------------

    def add(self, other: "MultiPoly") -> "MultiPoly":
        a, b = align(self, other)
        return MultiPoly(self.field, a.deg_bounds, self.field.add_arr(a.coeffs, b.coeffs))

    def scale(self, c: int) -> "MultiPoly":
        return MultiPoly(self.field, self.deg_bounds, self.field.scale_arr(c, self.coeffs))

    def sub(self, other: "MultiPoly") -> "MultiPoly":
        a, b = align(self, other)
        return MultiPoly(self.field, a.deg_bounds, self.field.sub_arr(a.coeffs, b.coeffs))

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.field == other.field
                and self.deg_bounds == other.deg_bounds
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.deg_bounds, self.coeffs.tobytes()))

    def __repr__(self):
        return f"MultiPoly(m={self.m}, deg_bounds={self.deg_bounds})"

    @staticmethod
    def zero(field: Field, deg_bounds) -> "MultiPoly":
        n = 1
        for d in deg_bounds:
            n *= d + 1
        return MultiPoly(field, deg_bounds, np.zeros(n, dtype=np.int64))

    @staticmethod
    def constant(field: Field, value: int, m: int = 0) -> "MultiPoly":
        p = MultiPoly.zero(field, (0,) * m)
        arr = p.coeffs.copy()
        arr[0] = value
        return MultiPoly(field, (0,) * m, arr)


def _fold_last(f: Field, flat, width: int, vec) -> np.ndarray | list:
    """Contract the last axis of a flat C-order array with a weight vector."""
    if isinstance(flat, np.ndarray) and flat.size >= _SMALL:
        nd = flat.reshape(-1, width)
        acc = np.zeros(nd.shape[0], dtype=np.int64)
        for j in range(width):
            v = int(vec[j])
            if v:
                acc = f.add_arr(acc, f.scale_arr(v, nd[:, j]))
        return acc
    vals = flat.tolist() if isinstance(flat, np.ndarray) else flat
    out = []
    for b in range(0, len(vals), width):
        acc = 0
        for j in range(width):
            v = int(vec[j])
            if v:
                acc = f.add(acc, f.mul(v, vals[b + j]))
        out.append(acc)
    return out


_PSUM_CACHE: dict = {}


def power_sums(f: Field, domain, width: int) -> list:
    """[sum_{h in domain} h^j for j in 0..width-1]; cached, do not mutate."""
    key = (f, tuple(int(h) for h in domain), width)
    cached = _PSUM_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    for j in range(width):
        acc = 0
        for h in key[1]:
            acc = f.add(acc, f.pow(h, j))
        out.append(acc)
    if len(_PSUM_CACHE) < 4096:
        _PSUM_CACHE[key] = out
    return out


def _fold_front(f: Field, flat, width: int, vec) -> np.ndarray | list:
    """Contract the FIRST axis of a flat C-order array with a weight vector."""
    if isinstance(flat, np.ndarray) and flat.size >= _SMALL:
        nd = flat.reshape(width, -1)
        acc = np.zeros(nd.shape[1], dtype=np.int64)
        for j in range(width):
            v = int(vec[j])
            if v:
                acc = f.add_arr(acc, f.scale_arr(v, nd[j]))
        return acc
    vals = flat.tolist() if isinstance(flat, np.ndarray) else list(flat)
    block = len(vals) // width
    out = [0] * block
    for j in range(width):
        v = int(vec[j])
        if v:
            for t in range(block):
                out[t] = f.add(out[t], f.mul(v, vals[j * block + t]))
    return out


def substitute_prefix(p: MultiPoly, prefix) -> MultiPoly:
    """Fix the first len(prefix) variables; returns the polynomial in the
    remaining variables."""
    prefix = tuple(int(c) for c in prefix)
    f = p.field
    cur = p.coeffs
    for i, x in enumerate(prefix):
        width = p.deg_bounds[i] + 1
        vec = [f.pow(x, j) for j in range(width)]
        cur = _fold_front(f, cur, width, vec)
    return MultiPoly(f, p.deg_bounds[len(prefix):], cur)


def sum_out_tail(p: MultiPoly, m_head: int, tail_domains) -> MultiPoly:
    """Sum the last m - m_head variables over the given per-variable domains;
    returns the polynomial in the first m_head variables."""
    f = p.field
    if len(tail_domains) != p.m - m_head:
        raise PolyError("need one domain per summed-out variable")
    cur = p.coeffs
    for i in range(p.m - 1, m_head - 1, -1):
        width = p.deg_bounds[i] + 1
        cur = _fold_last(f, cur, width, power_sums(f, tail_domains[i - m_head], width))
    return MultiPoly(f, p.deg_bounds[:m_head], cur)


def align(a: MultiPoly, b: MultiPoly):
    """Embed two polynomials into the common bound space (max per variable)."""
    if a.field != b.field:
        raise PolyError("mixed fields")
    if a.m != b.m:
        raise PolyError("different variable counts")
    if a.deg_bounds == b.deg_bounds:
        return a, b
    bounds = tuple(max(x, y) for x, y in zip(a.deg_bounds, b.deg_bounds))
    return embed(a, bounds), embed(b, bounds)


def embed(p: MultiPoly, deg_bounds, var_map=None) -> MultiPoly:
    """Embed into a larger bound space; var_map[i] gives the target axis of
    p's variable i (identity by default; unmapped target axes are constant)."""
    deg_bounds = tuple(deg_bounds)
    m_out = len(deg_bounds)
    if var_map is None:
        if p.m > m_out:
            raise PolyError("cannot embed into fewer variables")
        var_map = list(range(p.m))
    if len(set(var_map)) != len(var_map):
        raise PolyError("var_map must be injective")
    for i, t in enumerate(var_map):
        if p.deg_bounds[i] > deg_bounds[t]:
            raise PolyError("target bounds too small")
    out = np.zeros(tuple(d + 1 for d in deg_bounds), dtype=np.int64)
    src = p.nd()
    index = [0] * m_out
    slices = [slice(0, 1)] * m_out
    for i, t in enumerate(var_map):
        slices[t] = slice(0, p.deg_bounds[i] + 1)
    # move source axes into target order
    order = sorted(range(p.m), key=lambda i: var_map[i])
    src = np.transpose(src, axes=order)
    view_shape = [1] * m_out
    for i in order:
        view_shape[var_map[i]] = p.deg_bounds[i] + 1
    out[tuple(slices)] = src.reshape(view_shape)
    return MultiPoly(p.field, deg_bounds, out.reshape(-1))


# -- interpolation ----------------------------------------------------------

_BASIS_CACHE: dict = {}


def lagrange_basis_coeffs(f: Field, nodes) -> list[list[int]]:
    """Coefficient lists of the univariate Lagrange basis for the nodes:
    basis[i] is the coefficient list of the polynomial that is 1 at nodes[i]
    and 0 at the other nodes.  O(n^2): one master product, then synthetic
    division per node.  Small bases are cached; callers must not mutate."""
    nodes = [int(x) for x in nodes]
    key = (f, tuple(nodes))
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    if len(set(nodes)) != len(nodes):
        raise PolyError("interpolation nodes must be distinct")
    n = len(nodes)
    master = [1]  # product of (X - x_i), coefficients low-to-high
    for x in nodes:
        master = _poly_mul_linear(f, master, f.neg(x))
    basis = []
    for xi in nodes:
        # master = (X - xi) * q; q has degree n-1
        q = [0] * n
        carry = master[n]
        for j in range(n - 1, -1, -1):
            q[j] = carry
            carry = f.add(master[j], f.mul(xi, carry))
        denom = 0  # q(xi) = prod_{k != i} (xi - x_k)
        for c in reversed(q):
            denom = f.add(f.mul(denom, xi), c)
        dinv = f.inv(denom)
        basis.append([f.mul(c, dinv) for c in q])
    if len(nodes) <= 64 and len(_BASIS_CACHE) < 1024:
        _BASIS_CACHE[key] = basis
    return basis


def _poly_mul_linear(f: Field, coeffs: list, c: int) -> list:
    """coeffs(X) * (X + c)."""
    out = [0] * (len(coeffs) + 1)
    for i, a in enumerate(coeffs):
        out[i] = f.add(out[i], f.mul(a, c))
        out[i + 1] = f.add(out[i + 1], a)
    return out


def interpolate_univariate(f: Field, nodes, values) -> list[int]:
    basis = lagrange_basis_coeffs(f, nodes)
    n = len(nodes)
    out = [0] * n
    for v, b in zip(values, basis):
        v = int(v)
        if v:
            for j in range(n):
                out[j] = f.add(out[j], f.mul(v, b[j]))
    return out


def _inverse_vandermonde(f: Field, nodes) -> list[list[int]]:
    """M with coeffs = M @ values for interpolation on the nodes."""
    basis = lagrange_basis_coeffs(f, nodes)
    n = len(nodes)
    return [[basis[i][j] for i in range(n)] for j in range(n)]


def _axis_matmul(f: Field, nd: np.ndarray, axis: int, M: list[list[int]]) -> np.ndarray:
    w_out, w_in = len(M), len(M[0])
    moved = np.moveaxis(nd, axis, 0).reshape(w_in, -1)
    rows = []
    for j in range(w_out):
        acc = np.zeros(moved.shape[1], dtype=np.int64)
        for i in range(w_in):
            c = M[j][i]
            if c:
                acc = f.add_arr(acc, f.scale_arr(c, moved[i]))
        rows.append(acc)
    out = np.stack(rows).reshape((w_out,) + tuple(np.moveaxis(nd, axis, 0).shape[1:]))
    return np.moveaxis(out, 0, axis)


def lde(values, H: SubsetSpec, field: Field, m: int | None = None) -> MultiPoly:
    """The unique polynomial of individual degree |H|-1 per variable agreeing
    with the given table on H^m.

    `values` is an array of shape (|H|,)*m, axis i indexed by H's canonical
    order, or a dict mapping points in H^m to values.
    """
    h = len(H)
    if isinstance(values, dict):
        if m is None:
            m = len(next(iter(values)))
        nd = np.zeros((h,) * m, dtype=np.int64)
        pos = {e: i for i, e in enumerate(H.elements)}
        if len(values) != h ** m:
            raise PolyError(f"table must cover H^{m} exactly")
        for pt, v in values.items():
            nd[tuple(pos[int(c)] for c in pt)] = int(v)
    else:
        nd = np.asarray(values, dtype=np.int64)
        if m is None:
            m = nd.ndim
        nd = nd.reshape((h,) * m)
    M = _inverse_vandermonde(field, H.elements)
    for axis in range(m):
        nd = _axis_matmul(field, nd, axis, M)
    return MultiPoly(field, (h - 1,) * m, nd.reshape(-1))


def lagrange_kernel_factor(f: Field, nodes, x: int, beta: int) -> int:
    """Value at (x, beta) of the univariate Lagrange kernel over the nodes."""
    acc = 0
    for w in nodes:
        term = 1
        for g in nodes:
            if g == w:
                continue
            num = f.mul(f.sub(x, g), f.sub(int(beta), g))
            den = f.mul(f.sub(w, g), f.sub(w, g))
            term = f.mul(term, f.div(num, den))
        acc = f.add(acc, term)
    return acc


# -- geometric objects -------------------------------------------------------

class PlaneOrLine:
    """Affine line or plane in F^m, kept in a canonical form: direction rows
    in reduced echelon form, base point reduced modulo the span."""

    __slots__ = ("field", "kind", "base", "dirs", "axis_index")

    def __init__(self, field: Field, kind: str, base, dirs, axis_index=None):
        if kind not in ("plane", "line", "axis_parallel_line"):
            raise PolyError(f"bad kind {kind!r}")
        self.field = field
        self.kind = kind
        base = [int(c) for c in base]
        dirs = [[int(c) for c in d] for d in dirs]
        m = len(base)
        want = 2 if kind == "plane" else 1
        if len(dirs) != want or any(len(d) != m for d in dirs):
            raise PolyError("bad direction count or dimension")
        R = _rref(field, dirs)
        if len(R) != want:
            raise PolyError("directions are linearly dependent")
        for row in R:
            piv = next(i for i, c in enumerate(row) if c)
            c = base[piv]
            if c:
                base = [field.sub(b, field.mul(c, r)) for b, r in zip(base, row)]
        if kind == "axis_parallel_line":
            piv = next(i for i, c in enumerate(R[0]) if c)
            unit = [0] * m
            unit[piv] = 1
            if R[0] != unit:
                raise PolyError("axis-parallel line must have a unit direction")
            if axis_index is not None and axis_index != piv:
                raise PolyError("axis_index does not match the direction")
            self.axis_index = piv
        else:
            self.axis_index = None
        self.base = tuple(base)
        self.dirs = tuple(tuple(d) for d in R)

    @property
    def m(self):
        return len(self.base)

    def point(self, *params) -> tuple:
        f = self.field
        if len(params) != len(self.dirs):
            raise PolyError("wrong parameter count")
        out = list(self.base)
        for t, d in zip(params, self.dirs):
            for i in range(len(out)):
                out[i] = f.add(out[i], f.mul(int(t), d[i]))
        return tuple(out)

    def locate(self, point) -> tuple:
        """Parameters (u[, v]) with self.point(*params) == point."""
        f = self.field
        diff = [f.sub(int(p), b) for p, b in zip(point, self.base)]
        params = []
        for d in self.dirs:
            piv = next(i for i, c in enumerate(d) if c)
            t = f.div(diff[piv], d[piv])
            params.append(t)
            for i in range(len(diff)):
                diff[i] = f.sub(diff[i], f.mul(t, d[i]))
        if any(diff):
            raise PolyError("point not on the object")
        return tuple(params)

    def key(self):
        return (self.kind, self.base, self.dirs)

    def __eq__(self, other):
        return isinstance(other, PlaneOrLine) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash((self.field, self.key()))

    def __repr__(self):
        return f"{self.kind}(base={self.base}, dirs={self.dirs})"


def _rref(f: Field, rows) -> list[list[int]]:
    rows = [list(r) for r in rows if any(r)]
    out = []
    for row in rows:
        for prev in out:
            piv = next(i for i, c in enumerate(prev) if c)
            if row[piv]:
                c = row[piv]
                row = [f.sub(a, f.mul(c, b)) for a, b in zip(row, prev)]
        if any(row):
            piv = next(i for i, c in enumerate(row) if c)
            inv = f.inv(row[piv])
            row = [f.mul(inv, a) for a in row]
            out.append(row)
    out.sort(key=lambda r: next(i for i, c in enumerate(r) if c))
    # back-eliminate to make it fully reduced
    for i, row in enumerate(out):
        piv = next(j for j, c in enumerate(row) if c)
        for k in range(len(out)):
            if k != i and out[k][piv]:
                c = out[k][piv]
                out[k] = [f.sub(a, f.mul(c, b)) for a, b in zip(out[k], row)]
    return out


class Curve:
    """Map F -> F^m with each coordinate a univariate polynomial of degree <= q."""

    __slots__ = ("field", "degree", "components")

    def __init__(self, field: Field, components):
        self.field = field
        comps = [tuple(int(c) for c in comp) for comp in components]
        if not comps:
            raise PolyError("curve needs at least one coordinate")
        q = max(len(c) for c in comps) - 1
        self.components = tuple(c + (0,) * (q + 1 - len(c)) for c in comps)
        self.degree = q

    @property
    def m(self):
        return len(self.components)

    def point(self, t: int) -> tuple:
        f = self.field
        out = []
        for comp in self.components:
            acc = 0
            for c in reversed(comp):
                acc = f.add(f.mul(acc, int(t)), c)
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.field == other.field
                and self.components == other.components)

    def __hash__(self):
        return hash((self.field, self.components))

    @staticmethod
    def through(field: Field, params, points) -> "Curve":
        """Degree-(len(params)-1) curve with curve(params[i]) == points[i]."""
        pts = [tuple(int(c) for c in p) for p in points]
        m = len(pts[0])
        comps = []
        for j in range(m):
            comps.append(interpolate_univariate(field, params, [p[j] for p in pts]))
        return Curve(field, comps)


# -- restriction -------------------------------------------------------------

def restrict(p: MultiPoly, obj) -> MultiPoly:
    """Restrict to a line, plane, or curve; exact, via evaluation on a grid
    followed by interpolation."""
    f = p.field
    if isinstance(obj, Curve):
        if obj.m != p.m:
            raise PolyError("dimension mismatch")
        deg = obj.degree * sum(p.deg_bounds)
        return _restrict_1d(p, lambda t: obj.point(t), deg)
    if not isinstance(obj, PlaneOrLine):
        raise PolyError(f"cannot restrict to {type(obj).__name__}")
    if obj.m != p.m:
        raise PolyError("dimension mismatch")
    if obj.kind == "axis_parallel_line":
        deg = p.deg_bounds[obj.axis_index]
        return _restrict_1d(p, lambda t: obj.point(t), deg)
    if obj.kind == "line":
        deg = sum(p.deg_bounds)
        return _restrict_1d(p, lambda t: obj.point(t), deg)
    # plane
    deg = sum(p.deg_bounds)
    if deg + 1 > f.order:
        raise PolyError("field too small to interpolate the restriction")
    nodes = f.first_elements(deg + 1)
    grid = np.array([[u, v] for u in nodes for v in nodes], dtype=np.int64)
    pts = _object_points(f, obj, grid)
    vals = p.eval_batch(pts).reshape(deg + 1, deg + 1)
    M = _inverse_vandermonde(f, nodes)
    nd = _axis_matmul(f, vals, 0, M)
    nd = _axis_matmul(f, nd, 1, M)
    return MultiPoly(f, (deg, deg), nd.reshape(-1))


def _restrict_1d(p: MultiPoly, param_to_point, deg: int) -> MultiPoly:
    f = p.field
    if deg + 1 > f.order:
        raise PolyError("field too small to interpolate the restriction")
    nodes = f.first_elements(deg + 1)
    pts = np.array([param_to_point(t) for t in nodes], dtype=np.int64)
    vals = p.eval_batch(pts)
    coeffs = interpolate_univariate(f, nodes, vals.tolist())
    return MultiPoly(f, (deg,), coeffs)


def _object_points(f: Field, obj: PlaneOrLine, params: np.ndarray) -> np.ndarray:
    out = np.tile(np.array(obj.base, dtype=np.int64), (params.shape[0], 1))
    for k, d in enumerate(obj.dirs):
        step = f.mul_arr(params[:, k][:, None], np.array(d, dtype=np.int64)[None, :])
        out = f.add_arr(out, step)
    return out


# -- bundling and sampling ----------------------------------------------------

def bundle(polys: list[MultiPoly], S) -> MultiPoly:
    """Encode several polynomials over the same variables as one polynomial
    with a leading index variable W: the result restricted to W = S[i] is
    polys[i]."""
    if not polys:
        raise PolyError("nothing to bundle")
    nodes = [int(s) for s in (S.elements if isinstance(S, SubsetSpec) else S)]
    if len(nodes) != len(polys):
        raise PolyError("index set size must match the polynomial count")
    f = polys[0].field
    m = polys[0].m
    if any(p.m != m or p.field != f for p in polys):
        raise PolyError("bundle inputs must share field and variable space")
    bounds = tuple(max(p.deg_bounds[i] for p in polys) for i in range(m))
    polys = [embed(p, bounds) for p in polys]
    basis = lagrange_basis_coeffs(f, nodes)
    w = len(nodes)
    inner = polys[0].coeffs.size
    out = np.zeros((w, inner), dtype=np.int64)
    for i, p in enumerate(polys):
        for j in range(w):
            c = basis[i][j]
            if c:
                out[j] = f.add_arr(out[j], f.scale_arr(c, p.coeffs))
    return MultiPoly(f, (w - 1,) + bounds, out.reshape(-1))


def random_poly(field: Field, deg_bounds, rng) -> MultiPoly:
    n = 1
    for d in deg_bounds:
        n *= d + 1
    return MultiPoly(field, deg_bounds, rng.field_array(field, n))


# -- serialization ------------------------------------------------------------

def poly_to_json(p: MultiPoly) -> str:
    return json.dumps({
        "field": json.loads(field_to_json(p.field)),
        "deg_bounds": list(p.deg_bounds),
        "coeffs": p.coeff_list(),
    })


def poly_from_json(text: str | dict) -> MultiPoly:
    d = json.loads(text) if isinstance(text, str) else text
    return MultiPoly(field_from_json(d["field"]), d["deg_bounds"], d["coeffs"])
