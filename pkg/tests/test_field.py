import itertools

import numpy as np
import pytest

from zkipcp import (
    Field,
    FieldElement,
    FieldError,
    SubsetSpec,
    enum_subfields,
    field_make,
    subgroup_of_order,
)
from zkipcp.field import field_from_json, field_to_json, least_irreducible_poly

from conftest import rng


def test_field_make_prime():
    f = field_make("prime", p=17)
    assert f.order == 17 and f.char == 17
    assert len(list(f.elements())) == 17


def test_field_make_gf4():
    f = field_make("gf2", e=2)
    assert f.order == 4
    assert f.modulus == 0b111  # x^2 + x + 1


def test_composite_p_rejected():
    with pytest.raises(FieldError):
        field_make("prime", p=15)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        field_make("gf2", e=4, modulus=0b10001)  # x^4 + 1 = (x+1)^4


def test_fixed_moduli_reproducible():
    assert least_irreducible_poly(4) == 19
    assert Field.gf2(4).modulus == Field.gf2(4).modulus == 19


@pytest.mark.parametrize("field", [Field.prime(17), Field.gf2(4)])
def test_field_laws_exhaustive_pairs(field):
    f = field
    els = list(f.elements())
    for a in els:
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.add(a, f.neg(a)) == 0
            if a != 0:
                assert f.mul(a, f.inv(a)) == 1


@pytest.mark.parametrize("field", [Field.prime(17), Field.gf2(4)])
def test_field_laws_exhaustive_triples(field):
    f = field
    els = list(f.elements())
    for a, b, c in itertools.product(els, repeat=3):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_gf256_laws_sampled(gf256):
    f = gf256
    r = rng("gf256")
    for _ in range(3000):
        a, b, c = (r.element(f) for _ in range(3))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        if a:
            assert f.mul(a, f.inv(a)) == 1


def test_frobenius_gf16(gf16):
    f = gf16
    for a in f.elements():
        for b in f.elements():
            lhs = f.pow(f.add(a, b), 2)
            rhs = f.add(f.pow(a, 2), f.pow(b, 2))
            assert lhs == rhs


def test_div_by_zero_is_hard_error(f17, gf16):
    with pytest.raises(ZeroDivisionError):
        f17.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf16.div(3, 0)


def test_field_element_wrapper(f17):
    a = f17(5)
    b = f17(13)
    assert int(a + b) == 1
    assert int(a * b) == (5 * 13) % 17
    assert (a / b) * b == a
    assert -a + a == f17(0)
    assert a ** 16 == f17(1)
    assert FieldElement(f17, 5) == a


def test_subfields_gf16():
    sizes = sorted(len(s) for s in enum_subfields(Field.gf2(4)))
    assert sizes == [2, 4, 16]


def test_subfields_gf256():
    sizes = sorted(len(s) for s in enum_subfields(Field.gf2(8)))
    assert sizes == [2, 4, 16, 256]


def test_subfields_gf8():
    sizes = sorted(len(s) for s in enum_subfields(Field.gf2(3)))
    assert sizes == [2, 8]


def test_prime_field_trivial_subfield(f17):
    subs = enum_subfields(f17)
    assert len(subs) == 1 and len(subs[0]) == 17


def test_multiplicative_subgroup_f17(f17):
    g = subgroup_of_order(f17, 4, "multiplicative_subgroup")
    assert g.elements == (1, 4, 13, 16)
    assert subgroup_of_order(f17, 1, "multiplicative_subgroup").elements == (1,)


def test_additive_subgroup_gf4():
    g4 = Field.gf2(2)
    g = subgroup_of_order(g4, 2, "additive_subgroup")
    assert g.elements == (0, 1)


def test_no_such_subgroup(f17):
    with pytest.raises(FieldError):
        subgroup_of_order(f17, 5, "multiplicative_subgroup")  # 5 does not divide 16
    with pytest.raises(FieldError):
        subgroup_of_order(f17, 3, "additive_subgroup")


@pytest.mark.parametrize("field,n,kind", [
    (Field.prime(17), 8, "multiplicative_subgroup"),
    (Field.gf2(4), 5, "multiplicative_subgroup"),
    (Field.gf2(4), 4, "additive_subgroup"),
    (Field.gf2(8), 16, "additive_subgroup"),
])
def test_subgroup_closure_exhaustive(field, n, kind):
    g = subgroup_of_order(field, n, kind)
    es = set(g.elements)
    assert len(es) == n
    op = field.mul if kind == "multiplicative_subgroup" else field.add
    for a in es:
        for b in es:
            assert op(a, b) in es


def test_subset_closure_validation(f17):
    with pytest.raises(FieldError):
        SubsetSpec(f17, "multiplicative_subgroup", [1, 4, 13])  # not closed
    with pytest.raises(FieldError):
        SubsetSpec(f17, "explicit_list", [1, 1, 2])  # repeats


def test_serialization_round_trip():
    for f in (Field.prime(17), Field.gf2(4), Field.gf2(8)):
        assert field_from_json(field_to_json(f)) == f
    assert field_to_json(Field.gf2(4)) == '{"kind": "gf2", "e": 4, "mod": 19}'
    assert field_to_json(Field.prime(17)) == '{"kind": "prime", "p": 17}'


@pytest.mark.parametrize("field", [Field.prime(97), Field.gf2(8)])
def test_vectorized_ops_match_scalar(field):
    f = field
    r = rng("vec", str(field))
    a = r.field_array(f, 500)
    b = r.field_array(f, 500)
    mul = f.mul_arr(a, b)
    add = f.add_arr(a, b)
    sub = f.sub_arr(a, b)
    for i in range(0, 500, 37):
        assert int(mul[i]) == f.mul(int(a[i]), int(b[i]))
        assert int(add[i]) == f.add(int(a[i]), int(b[i]))
        assert int(sub[i]) == f.sub(int(a[i]), int(b[i]))
    assert f.sum_arr(a) == _fold(f, a)
    c = int(b[0])
    if c:
        sc = f.scale_arr(c, a)
        assert int(sc[3]) == f.mul(c, int(a[3]))


def _fold(f, arr):
    acc = 0
    for v in arr.tolist():
        acc = f.add(acc, v)
    return acc


def test_immutability_contract(f17):
    # FieldElement and Field expose no mutating API; spot-check hashability
    a = f17(3)
    assert hash(a) == hash(f17(3))
    s = SubsetSpec.explicit(f17, [3, 1, 2])
    assert s.elements == (1, 2, 3)  # canonical ascending order
    assert hash(s) == hash(SubsetSpec.explicit(f17, [1, 2, 3]))
