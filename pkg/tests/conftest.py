"""Shared test fixtures and tiny reference instances."""

import pytest

from zkipcp import Field, MultiPoly, SubsetSpec, subfield_of_order
from zkipcp.nexp import O3SatInstance, O3SatWitness, arithmetize
from zkipcp.rng import RngStream


@pytest.fixture(scope="session")
def f17():
    return Field.prime(17)


@pytest.fixture(scope="session")
def f97():
    return Field.prime(97)


@pytest.fixture(scope="session")
def f3():
    return Field.prime(3)


@pytest.fixture(scope="session")
def gf16():
    return Field.gf2(4)


@pytest.fixture(scope="session")
def gf256():
    return Field.gf2(8)


def rng(*label):
    return RngStream(("tests",) + label)


# -- reference oracles used across test modules --------------------------------

def brute_eval(poly: MultiPoly, point):
    """Term-by-term monomial summation; the independent evaluation oracle."""
    import itertools
    f = poly.field
    acc = 0
    ranges = [range(d + 1) for d in poly.deg_bounds]
    for exps in itertools.product(*ranges):
        c = poly.coeff(exps)
        if not c:
            continue
        term = c
        for x, e in zip(point, exps):
            term = f.mul(term, f.pow(int(x), e))
        acc = f.add(acc, term)
    return acc


def brute_sum(poly: MultiPoly, H, prefix=()):
    """Full enumeration partial sum; the independent summation oracle."""
    import itertools
    f = poly.field
    acc = 0
    tail = poly.m - len(prefix)
    for t in itertools.product(H, repeat=tail):
        acc = f.add(acc, brute_eval(poly, tuple(prefix) + t))
    return acc


# -- canonical oracle-3-SAT instances -------------------------------------------

def sat_instance():
    """B = (z1 AND A(b1)) OR (NOT z1): satisfied by A == 1, not by A == 0."""
    z1 = ("var", 0)
    a1 = ("var", 8)
    B = ("not", ("and", ("not", ("and", z1, a1)), ("not", ("not", z1))))
    return O3SatInstance(2, 2, B), O3SatWitness.constant(2, 1)


def trivial_instance():
    """B identically true (but reading a1, so the booleanity machinery still
    carries weight); any witness satisfies it."""
    a1 = ("var", 8)
    B = ("not", ("and", a1, ("not", a1)))
    return O3SatInstance(2, 2, B), O3SatWitness.constant(2, 0)


def unsat_instance():
    """B = A(b1) AND NOT A(b2): no witness can satisfy all constraints."""
    B = ("and", ("var", 8), ("not", ("var", 9)))
    return O3SatInstance(2, 2, B)


def desk_arith(field=None, h_order=4):
    inst, w = sat_instance()
    f = field or Field.gf2(8)
    return arithmetize(inst, f, subfield_of_order(f, h_order)), w
