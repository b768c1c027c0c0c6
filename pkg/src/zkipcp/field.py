"""Finite field arithmetic: prime fields F_p and binary extension fields GF(2^e).

Elements are canonical integers in [0, order).  A `Field` object provides
scalar arithmetic on those integers plus vectorized arithmetic on numpy
int64 arrays (used by the dense polynomial and linear-algebra layers).
`FieldElement` is a thin operator wrapper for ergonomic code and tests.

GF(2^e) uses a fixed modulus per degree: the least integer encoding an
irreducible degree-e polynomial with nonzero constant term, so serialized
elements are reproducible across runs.  Multiplication uses log/antilog
tables (built once per field, e <= 16) with a carry-less fallback.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[x]) product of bit-encoded polynomials."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _poly2_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _poly2_is_irreducible(bits: int) -> bool:
    """Irreducibility over GF(2) by trial division (fine for degree <= 24)."""
    deg = bits.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if bits & 1 == 0:  # divisible by x
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if d.bit_length() - 1 < 1:
            continue
        # long division of bits by d
        if _poly2_divides(d, bits):
            return False
    return True


def _poly2_divides(d: int, a: int) -> bool:
    dd = d.bit_length() - 1
    while a.bit_length() - 1 >= dd and a:
        a ^= d << (a.bit_length() - 1 - dd)
    return a == 0


@lru_cache(maxsize=None)
def least_irreducible_poly(e: int) -> int:
    """Least bit-encoding of an irreducible degree-e polynomial over GF(2)
    with nonzero constant term."""
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    for bits in range((1 << e) + 1, 1 << (e + 1), 2):
        if _poly2_is_irreducible(bits):
            return bits
    raise FieldError(f"no irreducible polynomial of degree {e} found")


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Field:
    """GF(p) or GF(2^e); immutable, safe to share."""

    __slots__ = (
        "kind", "order", "char", "p", "e", "modulus",
        "_log", "_exp", "_nplog", "_npexp", "_generator",
    )

    def __init__(self, kind: str, *, p: int | None = None, e: int | None = None,
                 modulus: int | None = None):
        if kind == "prime":
            if p is None or not is_prime(p):
                raise FieldError(f"{p} is not prime")
            self.kind = "prime"
            self.p = p
            self.e = 1
            self.order = p
            self.char = p
            self.modulus = None
        elif kind == "gf2":
            if e is None or e < 1:
                raise FieldError("need extension degree e >= 1")
            if modulus is None:
                modulus = least_irreducible_poly(e)
            if modulus.bit_length() - 1 != e or not _poly2_is_irreducible(modulus):
                raise FieldError(f"modulus {modulus} is not irreducible of degree {e}")
            self.kind = "gf2"
            self.p = 2
            self.e = e
            self.order = 1 << e
            self.char = 2
            self.modulus = modulus
        else:
            raise FieldError(f"unknown field kind {kind!r}")
        self._log = None
        self._exp = None
        self._nplog = None
        self._npexp = None
        self._generator = None
        if self.kind == "gf2" and self.e <= 16:
            self._build_tables()

    # -- construction helpers --------------------------------------------

    @staticmethod
    def prime(p: int) -> "Field":
        return Field("prime", p=p)

    @staticmethod
    def gf2(e: int, modulus: int | None = None) -> "Field":
        return Field("gf2", e=e, modulus=modulus)

    def _build_tables(self):
        n = self.order
        g = self._find_generator_raw()
        exp = [1] * (n - 1)
        for i in range(1, n - 1):
            exp[i] = self._mul_raw(exp[i - 1], g)
        log = [0] * n
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        self._generator = g
        self._npexp = np.array(exp + exp, dtype=np.int64)  # doubled: skip the mod
        self._nplog = np.array(log, dtype=np.int64)

    def _mul_raw(self, a: int, b: int) -> int:
        return _poly2_mod(_clmul(a, b), self.modulus)

    def _find_generator_raw(self) -> int:
        n = self.order - 1
        factors = list(_factorize(n))
        for cand in range(2, self.order):
            ok = True
            for q in factors:
                if self._pow_raw(cand, n // q) == 1:
                    ok = False
                    break
            if ok:
                return cand
        raise FieldError("no multiplicative generator found")

    def _pow_raw(self, a: int, k: int) -> int:
        acc = 1
        while k:
            if k & 1:
                acc = self._mul_raw(acc, a)
            a = self._mul_raw(a, a)
            k >>= 1
        return acc

    # -- scalar arithmetic on canonical ints -----------------------------

    def add(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.kind == "prime":
            return (-a) % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if self.kind == "prime":
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._pow_raw(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.kind == "prime":
            return pow(a, k, self.p)
        if a == 0:
            return 0 if k else 1
        if self._log is not None:
            return self._exp[(self._log[a] * k) % (self.order - 1)]
        return self._pow_raw(a, k)

    def generator(self) -> int:
        """A fixed multiplicative generator of F*."""
        if self._generator is not None:
            return self._generator
        n = self.order - 1
        factors = list(_factorize(n))
        for cand in range(1, self.order):
            if all(self.pow(cand, n // q) != 1 for q in factors):
                self._generator = cand
                return cand
        raise FieldError("no generator")

    def elements(self):
        return range(self.order)

    def first_elements(self, n: int) -> list[int]:
        """Canonically-first n field elements (ascending representation)."""
        if n > self.order:
            raise FieldError(f"field has only {self.order} elements, wanted {n}")
        return list(range(n))

    def __call__(self, v: int) -> "FieldElement":
        return FieldElement(self, v % self.order if self.kind == "prime" else v & (self.order - 1))

    def __eq__(self, other):
        return (isinstance(other, Field) and self.kind == other.kind
                and self.order == other.order and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.kind, self.order, self.modulus))

    def __repr__(self):
        if self.kind == "prime":
            return f"F_{self.p}"
        return f"GF(2^{self.e})"

    # -- vectorized arithmetic (numpy int64, canonical values) ------------

    def arr(self, values) -> np.ndarray:
        a = np.asarray(values, dtype=np.int64)
        return a

    def add_arr(self, a, b) -> np.ndarray:
        if self.kind == "prime":
            return (a + b) % self.p
        return np.bitwise_xor(a, b)

    def sub_arr(self, a, b) -> np.ndarray:
        if self.kind == "prime":
            return (a - b) % self.p
        return np.bitwise_xor(a, b)

    def neg_arr(self, a) -> np.ndarray:
        if self.kind == "prime":
            return (-a) % self.p
        return np.asarray(a)

    def mul_arr(self, a, b) -> np.ndarray:
        if self.kind == "prime":
            return (a * b) % self.p
        if self._npexp is None:
            raise FieldError("vectorized GF(2^e) arithmetic needs e <= 16")
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._npexp[self._nplog[a] + self._nplog[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale_arr(self, c: int, a) -> np.ndarray:
        if c == 0:
            return np.zeros_like(np.asarray(a, dtype=np.int64))
        if c == 1:
            return np.asarray(a, dtype=np.int64)
        if self.kind == "prime":
            return (np.asarray(a, dtype=np.int64) * c) % self.p
        a = np.asarray(a, dtype=np.int64)
        out = self._npexp[self._nplog[a] + self._log[c]]
        return np.where(a == 0, 0, out)

    def sum_arr(self, a, axis=None) -> np.ndarray | int:
        # prime: safe while p^2 * count < 2^63 (desk-scale orders <= 2^20)
        if self.kind == "prime":
            s = np.sum(np.asarray(a, dtype=np.int64) % self.p, axis=axis) % self.p
            return int(s) if np.isscalar(s) or s.ndim == 0 else s
        s = np.bitwise_xor.reduce(np.asarray(a, dtype=np.int64),
                                  axis=axis if axis is not None else None)
        return int(s) if np.isscalar(s) or np.ndim(s) == 0 else s

    def dot_arr(self, a, b) -> int:
        return self.sum_arr(self.mul_arr(a, b))

    def powers_arr(self, x: int, n: int) -> np.ndarray:
        """[1, x, x^2, ..., x^(n-1)] as an int64 array."""
        out = np.empty(n, dtype=np.int64)
        acc = 1
        for i in range(n):
            out[i] = acc
            acc = self.mul(acc, x)
        return out


class FieldElement:
    """Operator wrapper around a canonical integer in [0, order)."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        if not 0 <= value < field.order:
            raise FieldError(f"value {value} out of range for {field}")
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed-field arithmetic")
            return other.value
        return int(other) % self.field.order

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@{self.field}"


class SubsetSpec:
    """An ordered subset of a field: subfield, multiplicative or additive
    subgroup, or an explicit list.  Elements are canonical ints, ascending."""

    __slots__ = ("field", "kind", "elements")

    KINDS = ("subfield", "multiplicative_subgroup", "additive_subgroup", "explicit_list")

    def __init__(self, field: Field, kind: str, elements):
        if kind not in self.KINDS:
            raise FieldError(f"unknown subset kind {kind!r}")
        elems = sorted(int(e) for e in elements)
        if len(set(elems)) != len(elems):
            raise FieldError("subset has repeated elements")
        for e in elems:
            if not 0 <= e < field.order:
                raise FieldError(f"element {e} not in {field}")
        self.field = field
        self.kind = kind
        self.elements = tuple(elems)
        self._check_closure()

    def _check_closure(self):
        f, es = self.field, set(self.elements)
        if self.kind == "subfield":
            if 0 not in es or 1 not in es:
                raise FieldError("subfield must contain 0 and 1")
            for a in es:
                for b in es:
                    if f.add(a, b) not in es or f.mul(a, b) not in es:
                        raise FieldError("subfield not closed")
        elif self.kind == "multiplicative_subgroup":
            if 1 not in es or 0 in es:
                raise FieldError("multiplicative subgroup must contain 1, exclude 0")
            for a in es:
                for b in es:
                    if f.mul(a, b) not in es:
                        raise FieldError("multiplicative subgroup not closed")
        elif self.kind == "additive_subgroup":
            if 0 not in es:
                raise FieldError("additive subgroup must contain 0")
            for a in es:
                for b in es:
                    if f.add(a, b) not in es:
                        raise FieldError("additive subgroup not closed")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v):
        return int(v) in set(self.elements)

    def __eq__(self, other):
        return (isinstance(other, SubsetSpec) and self.field == other.field
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.field, self.elements))

    def __repr__(self):
        return f"SubsetSpec({self.kind}, {list(self.elements)})"

    @staticmethod
    def explicit(field: Field, elements) -> "SubsetSpec":
        return SubsetSpec(field, "explicit_list", elements)


def field_make(kind: str, **params) -> Field:
    """Build a field from a descriptor: prime(p=...) or gf2(e=..., modulus=?)."""
    return Field(kind, **params)


def enum_subfields(field: Field) -> list[SubsetSpec]:
    """All subfields.  GF(2^e) has one per divisor d of e; a prime field has
    only itself."""
    if field.kind == "prime":
        return [SubsetSpec(field, "subfield", list(field.elements()))]
    if field.order > (1 << 20):
        raise FieldError("subfield enumeration capped at order 2^20")
    out = []
    for d in range(1, field.e + 1):
        if field.e % d:
            continue
        q = 1 << d
        members = [a for a in field.elements() if field.pow(a, q) == a]
        assert len(members) == q
        out.append(SubsetSpec(field, "subfield", members))
    return out


def subgroup_of_order(field: Field, n: int, kind: str) -> SubsetSpec:
    """The subgroup of exactly n elements.

    Multiplicative subgroups of F* are unique per order (n must divide
    order-1).  Additive subgroups are not unique; the canonical one is grown
    greedily from the smallest representations (n must be a power of char
    dividing the order).
    """
    if kind == "multiplicative_subgroup":
        if n < 1 or (field.order - 1) % n != 0:
            raise FieldError(f"no multiplicative subgroup of order {n} in {field}")
        g = field.generator()
        h = field.pow(g, (field.order - 1) // n)
        members, acc = [], 1
        for _ in range(n):
            members.append(acc)
            acc = field.mul(acc, h)
        assert acc == 1
        return SubsetSpec(field, "multiplicative_subgroup", members)
    if kind == "additive_subgroup":
        # valid orders: char^j dividing the field order
        m, ok = n, n >= 1
        while ok and m > 1:
            if m % field.char:
                ok = False
            m //= field.char
        if not ok or field.order % n != 0:
            raise FieldError(f"no additive subgroup of order {n} in {field}")
        span = {0}
        for cand in field.elements():
            if len(span) >= n:
                break
            if cand in span:
                continue
            grown = set(span)
            for s in span:
                acc = s
                for _ in range(field.char - 1):
                    acc = field.add(acc, cand)
                    grown.add(acc)
            # close under addition (char > 2 needs the full coset sweep)
            frontier = True
            while frontier:
                frontier = False
                for a in list(grown):
                    for b in list(grown):
                        c = field.add(a, b)
                        if c not in grown:
                            grown.add(c)
                            frontier = True
            if len(grown) <= n:
                span = grown
        if len(span) != n:
            raise FieldError(f"could not build additive subgroup of order {n}")
        return SubsetSpec(field, "additive_subgroup", span)
    raise FieldError(f"subgroup kind must be multiplicative/additive, got {kind!r}")


def subfield_of_order(field: Field, q: int) -> SubsetSpec:
    for sf in enum_subfields(field):
        if len(sf) == q:
            return sf
    raise FieldError(f"{field} has no subfield of order {q}")


# -- serialization ---------------------------------------------------------

def field_to_json(field: Field) -> str:
    if field.kind == "prime":
        return json.dumps({"kind": "prime", "p": field.p})
    return json.dumps({"kind": "gf2", "e": field.e, "mod": field.modulus})


def field_from_json(text: str | dict) -> Field:
    d = json.loads(text) if isinstance(text, str) else text
    if d["kind"] == "prime":
        return Field.prime(d["p"])
    if d["kind"] == "gf2":
        return Field.gf2(d["e"], d.get("mod"))
    raise FieldError(f"bad field descriptor {d!r}")
