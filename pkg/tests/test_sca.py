import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from directfinite import (GF, QQ, AffineAlphabet, CellularAutomaton, FiniteAlphabet, FreeAbelianGroup,
                          GroupRingElem, GroupRingMatrix, NearRingElem, Pattern, apply_pattern, compose,
                          cyclic, psi_from_matrix, psi_from_nearring, restrict, rule_equal, star,
                          symmetric, window_map)
from directfinite.errors import AlphabetMismatch, CoefficientFieldTooLarge, EnumerationBudgetExceeded
from directfinite.groups import MemorySet
from directfinite.poly import Poly
from directfinite.sca import (coefficient_level, erosion, identity_ca, is_identity_rule, on_ladder,
                              quotient_ca, shift_ca)
from directfinite.surjunctivity import elementary_rule

Z = FreeAbelianGroup(1)
F2 = GF(2)


def var(F, g, i=0, e=1):
    return Poly.var(F, (Z(g), i), e)


def xor_ca():
    return CellularAutomaton.from_polys(Z, AffineAlphabet(F2), [Z(0), Z(1)], [var(F2, 0) + var(F2, 1)])


def test_apply_on_word():
    out = apply_pattern(xor_ca(), Pattern.from_word(Z, [(0,), (1,), (1,), (0,)]))
    assert [v[0] for v in out.word()] == [1, 0, 1]
    assert [g.payload[0] for g in out.window] == [0, 1, 2]


def test_composition_of_xor():
    rho = compose(xor_ca(), xor_ca())
    assert rho.rule.polys[0] == var(F2, 0) + var(F2, 2)
    assert [g.payload[0] for g in rho.memory] == [0, 1, 2]


def test_table_and_poly_rules_agree():
    tau = xor_ca()
    tab = tau.tabulate()
    word = [(random.Random(k).randrange(2),) for k in range(12)]
    p = Pattern.from_word(Z, word)
    assert apply_pattern(tau, p).word() == apply_pattern(tab, p).word()


@given(st.lists(st.integers(0, 1), min_size=6, max_size=14), st.integers(0, 255), st.integers(0, 255))
def test_compose_matches_sequential_application(word, n1, n2):
    s, t = elementary_rule(n1), elementary_rule(n2)
    p = Pattern.from_word(Z, word)
    once = apply_pattern(s, apply_pattern(t, p))
    both = apply_pattern(compose(s, t), p)
    assert once == both


def test_erosion():
    E = MemorySet(Z, range(0, 5))
    M = MemorySet(Z, [-1, 0, 1])
    assert [g.payload[0] for g in erosion(E, M)] == [1, 2, 3]


def test_automaton_on_s3_commutes_with_translation():
    G = symmetric(3)
    alpha = AffineAlphabet(GF(3))
    a, b = G("(12)"), G("(123)")
    tau = CellularAutomaton.from_polys(G, alpha, [a, b], [Poly.var(GF(3), (a, 0)) * Poly.var(GF(3), (b, 0))])
    rng = random.Random(0)
    c = {g: (rng.randrange(3),) for g in G.elements()}
    p = Pattern(G, c)
    for h in G.elements():
        assert apply_pattern(tau, p.translate(h)) == apply_pattern(tau, p).translate(h)


def test_psi_matrix_functoriality_example():
    F3 = GF(3)
    one, zero = GroupRingElem.one(Z, F3), GroupRingElem.zero(Z, F3)
    t = GroupRingElem.basis(Z(1), F3)
    A = GroupRingMatrix([[one, t], [zero, one + t]])
    B = GroupRingMatrix([[t, zero], [one, -one]])
    lhs, rhs = compose(psi_from_matrix(A), psi_from_matrix(B)), psi_from_matrix(A * B)
    eq = rule_equal(lhs, rhs)
    assert eq.as_polynomials and eq.as_functions


def test_psi_nearring_functoriality_example():
    F5 = GF(5)
    a = NearRingElem.X(Z(1), F5) ** 2 + 1
    b = NearRingElem.X(Z(-1), F5) * NearRingElem.X(Z(0), F5)
    assert rule_equal(compose(psi_from_nearring(a), psi_from_nearring(b)),
                      psi_from_nearring(star(a, b)), budget=1).as_polynomials


def test_polynomial_versus_function_equality():
    for q, want in ((2, (False, True)), (4, (False, False))):
        F = GF(q)
        sq = CellularAutomaton.from_polys(Z, AffineAlphabet(F), [Z(0)], [var(F, 0, e=2)])
        eq = is_identity_rule(sq)
        assert (eq.as_polynomials, eq.as_functions) == want
    sq = CellularAutomaton.from_polys(Z, AffineAlphabet(F2, ladder=True), [Z(0)], [var(F2, 0, e=2)])
    assert is_identity_rule(sq).as_functions is None


def test_restriction_ladder_levels():
    F4 = GF(4)
    w = F4.generator.value
    tau = CellularAutomaton.from_polys(Z, AffineAlphabet(F4, ladder=True), [Z(0)], [var(F4, 0).scale(w)])
    assert coefficient_level(tau) == 2
    r4 = restrict(tau, 4)
    assert r4.alphabet.field == GF(16)
    assert len(r4.rule_table()) == 16
    with pytest.raises(CoefficientFieldTooLarge):
        restrict(tau, 3)


def test_restrict_xor_to_level_two():
    tau = on_ladder(xor_ca())
    assert len(restrict(tau, 2).rule_table()) == 16


def test_window_map():
    tau = xor_ca()
    wm = window_map(tau, tau.memory)
    assert [g.payload[0] for g in wm.memory] == [-1, 0, 1]
    assert len(wm.domain) == 5
    assert wm.linear_rank() == 3 and wm.is_surjective()
    const = CellularAutomaton.from_polys(Z, AffineAlphabet(F2), [Z(0)], [Poly.const(F2, 1)])
    assert not window_map(const, const.memory).is_surjective()


def test_window_map_enumeration_matches_rank():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randrange(256)
        tau = elementary_rule(n)
        wm = window_map(tau, tau.memory)
        img = {wm(c) for c in itertools.product((0, 1), repeat=len(wm.domain))}
        assert wm.is_surjective() == (len(img) == 8)


def test_quotient_ca_is_periodic_restriction():
    tau = elementary_rule(110)
    q = quotient_ca(tau, 5)
    G = q.group
    rng = random.Random(1)
    c = [rng.randrange(2) for _ in range(5)]
    out = apply_pattern(q, Pattern(G, {G(k): c[k] for k in range(5)}))
    word = c * 3
    full = apply_pattern(tau, Pattern.from_word(Z, word, start=-5))
    assert [out[G(k)] for k in range(5)] == [full[Z(k)] for k in range(5)]


def test_shift_and_identity():
    alpha = AffineAlphabet(F2, ladder=True)
    s, t = shift_ca(Z, alpha, Z(-1)), shift_ca(Z, alpha, Z(1))
    assert is_identity_rule(compose(s, t)).as_polynomials
    assert is_identity_rule(identity_ca(Z, alpha)).as_polynomials


def test_alphabet_errors():
    with pytest.raises(AlphabetMismatch):
        compose(xor_ca(), elementary_rule(1))
    with pytest.raises(EnumerationBudgetExceeded):
        xor_ca().rule_table(budget=2)
    with pytest.raises(ValueError):
        FiniteAlphabet((0, 0))
    with pytest.raises(AlphabetMismatch):
        CellularAutomaton.from_polys(Z, AffineAlphabet(QQ), [Z(0)], [var(F2, 0)])


def test_finite_group_alphabet_points():
    G = cyclic(3)
    tau = CellularAutomaton.from_function(G, FiniteAlphabet(("a", "b")), [G("a")], lambda v: v[0])
    assert len(tau.rule_table()) == 2
