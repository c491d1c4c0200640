from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from directfinite import GF, QQ
from directfinite.errors import ContextMismatch, TermBlowup
from directfinite.poly import Poly

VARS = ["a", "b", "c"]
SYMS = {v: sympy.Symbol(v) for v in VARS}


@st.composite
def polys(draw, field=QQ):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = draw(st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), max_size=2, unique_by=lambda t: t[0]))
        terms[tuple(sorted(exps))] = field.coerce(Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3))))
    return Poly(field, terms)


def to_sympy(p):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[SYMS[v] ** e for v, e in m])
                            for m, c in p.terms.items()))


@given(polys(), polys())
def test_ring_operations_match_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - p) == 0


@given(polys(), polys(), polys())
def test_substitution_matches_sympy(p, q, r):
    out = p.substitute({"a": q, "b": r})
    want = sympy.expand(to_sympy(p).xreplace({SYMS["a"]: to_sympy(q), SYMS["b"]: to_sympy(r)}))
    assert to_sympy(out) == want


def test_power_and_degree():
    x = Poly.var(QQ, "a")
    one = Poly.const(QQ, Fraction(1))
    p = (x + one) ** 5
    assert p.degree() == 5 and len(p) == 6
    assert p.terms[(("a", 2),)] == 10


def test_zero_coefficients_are_dropped():
    F = GF(3)
    x = Poly.var(F, "a")
    assert x.scale(F.coerce(3)).is_zero()
    assert (x + x + x).is_zero()
    assert ((x + Poly.const(F, 1)) ** 3) == x ** 3 + Poly.const(F, 1)


def test_reduce_exponents_is_function_equality():
    F = GF(4)
    x = Poly.var(F, "a")
    assert (x ** 4).reduce_exponents(4) == x
    assert (x ** 2).reduce_exponents(4) != x
    assert (x ** 7).reduce_exponents(4) == x
    assert Poly.const(F, 1).reduce_exponents(4) == Poly.const(F, 1)


def test_term_budget():
    x, y = Poly.var(QQ, "a"), Poly.var(QQ, "b")
    with pytest.raises(TermBlowup):
        (x + y + Poly.const(QQ, Fraction(1))).pow(30, budget=50)


def test_rename_merges_variables():
    p = Poly.var(QQ, "a") * Poly.var(QQ, "b")
    assert p.rename(lambda v: "c") == Poly.var(QQ, "c", 2)


def test_fields_do_not_mix():
    with pytest.raises(ContextMismatch):
        Poly.var(GF(2), "a") + Poly.var(GF(3), "a")


def test_evaluate():
    F = GF(5)
    p = Poly.var(F, "a", 2) + Poly.const(F, 3)
    assert p.evaluate({"a": 2}) == 2
