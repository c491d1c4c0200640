import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from directfinite import (FiniteGroup, FreeAbelianGroup, FreeGroup, MemorySet, cyclic, dihedral,
                          quaternion, symmetric)
from directfinite.errors import ContextMismatch, GroupAxiomError, Undecidable, UnknownName
from directfinite.groups import common_memory, product_set, quotient_map, symmetrize

FINITE = [cyclic(1), cyclic(4), symmetric(3), symmetric(4), dihedral(4), quaternion()]


@pytest.mark.parametrize("G", FINITE, ids=lambda G: G.name)
def test_finite_group_axioms(G):
    elems = G.elements()
    e = G.identity()
    for a in elems:
        assert a * e == a == e * a
        assert a * a.inverse() == e
    for a, b, c in itertools.product(elems[:6], repeat=3):
        assert (a * b) * c == a * (b * c)


def test_orders_and_abelian():
    assert [G.order for G in FINITE] == [1, 4, 6, 24, 8, 8]
    assert cyclic(4).is_abelian() and not symmetric(3).is_abelian() and not quaternion().is_abelian()


def test_quaternion_relations():
    Q = quaternion()
    i, j, k, m1 = Q("i"), Q("j"), Q("k"), Q("-1")
    assert i * j == k and j * i == Q("-k")
    assert i * i == j * j == k * k == i * j * k == m1
    assert m1 * m1 == Q("1")


def test_symmetric_names_and_products():
    S3 = symmetric(3)
    a, b = S3("(12)"), S3("(123)")
    assert str(a * a) == "e"
    assert (b ** 3).is_identity()
    assert a * b != b * a


@pytest.mark.parametrize("table", [
    [[0, 1], [1, 1]],            # no inverse for 1
    [[0, 1, 2], [1, 2, 0], [2, 1, 0]],  # not associative / no identity
    [[0, 1], [1]],
    [],
])
def test_bad_cayley_tables_are_rejected(table):
    with pytest.raises(GroupAxiomError):
        FiniteGroup(table)


def test_free_abelian_group():
    Z2 = FreeAbelianGroup(2)
    a = Z2("(1,2)")
    assert a * Z2((3, -2)) == Z2((4, 0))
    assert str(a.inverse()) == "(-1,-2)"
    assert len(Z2.ball(1)) == 9
    with pytest.raises(UnknownName):
        Z2("1")


def test_free_group_reduction_and_format():
    F = FreeGroup(["g", "h"])
    g, h = F.gens()
    w = g * h * h.inverse() * g
    assert str(w) == "g^2"
    assert str(g * h.inverse()) == "g*h^-1"
    assert str(F.identity()) == "1"
    assert F("g^2*h^-3") == g * g * h.inverse() ** 3
    assert len(F.ball(2)) == 1 + 4 + 12
    with pytest.raises(UnknownName):
        F("k")


words = st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), max_size=8)


@given(words, words, words)
def test_free_group_is_a_group(a, b, c):
    F = FreeGroup(2)
    x, y, z = F(a), F(b), F(c)
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == F.identity()
    assert F(F.format(x.payload)) == x


def test_memory_sets():
    Z = FreeAbelianGroup(1)
    M = MemorySet(Z, [1, 0, 1])
    assert [g.payload[0] for g in M] == [0, 1]
    P = product_set(M, M)
    assert [g.payload[0] for g in P] == [0, 1, 2]
    S = symmetrize(M)
    assert [g.payload[0] for g in S] == [-1, 0, 1]
    assert [g.payload[0] for g in common_memory(MemorySet(Z, [2]), MemorySet(Z, [-1]))] == [-2, -1, 0, 1, 2]
    with pytest.raises(ContextMismatch):
        M | MemorySet(cyclic(2), [0])


def test_quotient_map():
    Z = FreeAbelianGroup(1)
    target, q = quotient_map(Z, 5)
    assert target.order == 5
    assert q(Z(7)) * q(Z(-2)) == target.identity()
    with pytest.raises(Undecidable):
        quotient_map(FreeAbelianGroup(2), 3)


def test_elements_from_other_groups_do_not_mix():
    with pytest.raises(ContextMismatch):
        cyclic(2).identity() * cyclic(3).identity()
