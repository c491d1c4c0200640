import random

import pytest

import oracles
from directfinite import (GF, AffineAlphabet, CellularAutomaton, FreeAbelianGroup, cyclic,
                          is_injective, is_injective_Z, is_surjective, is_surjective_Z, quaternion)
from directfinite.errors import Undecidable
from directfinite.poly import Poly
from directfinite.sca import FiniteAlphabet, restrict
from directfinite.surjunctivity import (balance_counts, check_gottschalk, elementary_rule,
                                        gottschalk_sweep, interval_rule, laurent_det, laurent_matrix,
                                        verify_collision)
from directfinite.sca import affine_form

Z = FreeAbelianGroup(1)


def test_known_elementary_verdicts():
    assert is_injective_Z(elementary_rule(204)).verdict       # identity
    assert is_injective_Z(elementary_rule(170)).verdict       # shift
    assert not is_injective_Z(elementary_rule(90)).verdict
    assert is_surjective_Z(elementary_rule(90)).verdict
    assert not is_surjective_Z(elementary_rule(110)).verdict
    assert not is_surjective_Z(elementary_rule(0)).verdict


def test_elementary_sweep_counts():
    rep = gottschalk_sweep(2, 3, numbers=range(256))
    assert (rep.rules, rep.injective, rep.surjective, rep.violations) == (256, 6, 30, [])


def test_two_neighbour_sweep():
    rep = gottschalk_sweep(2, 2)
    assert (rep.rules, rep.injective, rep.surjective, rep.violations) == (16, 4, 6, [])


@pytest.mark.slow
def test_three_symbol_sweep():
    rep = gottschalk_sweep(3, 2)
    assert (rep.rules, rep.injective, rep.surjective, rep.violations) == (19683, 48, 420, [])


def test_non_injectivity_witnesses_are_collisions():
    for n in range(256):
        tau = elementary_rule(n)
        rep = is_injective_Z(tau)
        if not rep.verdict:
            assert verify_collision(tau, rep.witness, 2 * 3 + 6), n


def test_orphans_are_orphans():
    for n in range(256):
        rep = is_surjective_Z(elementary_rule(n))
        if not rep.verdict:
            w = tuple(rep.witness["orphan_raw"])
            imgs = oracles.images_of_words(oracles.table_local(2, 3, n), 2, 3, len(w))
            assert w not in imgs


def test_three_symbol_oracle_sample():
    rng = random.Random(33)
    for n in rng.sample(range(3 ** 9), 150):
        tau = interval_rule(Z, 3, 2, n)
        local = oracles.table_local(3, 2, n)
        sur, inj = is_surjective_Z(tau).verdict, is_injective_Z(tau).verdict
        orphan = oracles.brute_orphan(local, 3, 2, 5)
        if orphan is not None:
            assert not sur
        if oracles.periodic_collision(local, 3, 2, 6) is not None:
            assert not inj


def test_balance_of_surjective_rules():
    for n in range(256):
        tau = elementary_rule(n)
        sur = is_surjective_Z(tau).verdict
        for ell in range(1, 6):
            counts = set(balance_counts(tau, ell).values())
            if sur:
                assert counts == {4}
        if not sur:
            assert any(len(set(balance_counts(tau, ell).values())) > 1 for ell in range(1, 10))


def test_undecidable_over_z2():
    Z2 = FreeAbelianGroup(2)
    tau = CellularAutomaton.from_function(Z2, FiniteAlphabet((0, 1)), [Z2((0, 0)), Z2((1, 0))], lambda v: v[0] ^ v[1])
    with pytest.raises(Undecidable):
        is_injective(tau)
    with pytest.raises(Undecidable):
        is_surjective(tau)


def test_finite_group_decisions_exhaustive():
    G = cyclic(4)
    alpha = FiniteAlphabet((0, 1))
    xor = CellularAutomaton.from_function(G, alpha, [G("e"), G("a")], lambda v: v[0] ^ v[1])
    inj, sur = is_injective(xor), is_surjective(xor)
    assert not inj.verdict and not sur.verdict and inj.method == "exhaustive"
    Q = quaternion()
    perm = CellularAutomaton.from_function(Q, alpha, [Q("i")], lambda v: 1 - v[0])
    assert is_injective(perm).verdict and is_surjective(perm).verdict


def test_linear_fallback_over_large_fields():
    F = GF(2, 8)
    alpha = AffineAlphabet(F)
    x = lambda g: Poly.var(F, (Z(g), 0))  # noqa: E731
    tau = CellularAutomaton.from_polys(Z, alpha, [Z(0), Z(1)], [x(0) + x(1)])
    assert is_surjective_Z(tau).verdict
    assert not is_injective_Z(tau).verdict
    sh = CellularAutomaton.from_polys(Z, alpha, [Z(1)], [x(1)])
    assert is_injective_Z(sh).verdict and is_surjective_Z(sh).verdict
    form = affine_form(tau)
    det = laurent_det(F, laurent_matrix(tau, form))
    assert len(det) == 2


def test_frobenius_is_bijective_at_each_level():
    F2 = GF(2)
    frob = CellularAutomaton.from_polys(Z, AffineAlphabet(F2, ladder=True), [Z(0)], [Poly.var(F2, (Z(0), 0), 2)])
    for r in (1, 2, 3):
        t = restrict(frob, r)
        assert is_injective(t).verdict and is_surjective(t).verdict


def test_gottschalk_report():
    rep = check_gottschalk(elementary_rule(15))
    assert not rep.violation and rep.as_dict()["status"] == "consistent"


def test_periodic_injectivity_matches_oracle_for_two_symbols():
    for n in range(16):
        tau = interval_rule(Z, 2, 2, n)
        local = oracles.table_local(2, 2, n)
        assert (oracles.periodic_collision(local, 2, 2, 8) is None) == is_injective_Z(tau).verdict
