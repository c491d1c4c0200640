"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import itertools
import json
import random
import string
from fractions import Fraction
from io import StringIO

import jsonschema
import pytest

import oracles
from directfinite import (GF, QQ, AffineAlphabet, CellularAutomaton, FieldElem, FreeAbelianGroup, FreeGroup,
                          GroupRingElem, GroupRingMatrix, NearRingElem, PipelineConfig,
                          check_direct_finiteness, compose, conclude_two_sided, cyclic, embed_phi,
                          evaluate, find_right_inverse, format_value, is_injective_Z,
                          is_surjective_Z, psi_from_matrix, psi_from_nearring, quaternion,
                          regular_representation, rule_equal, run_restriction_ladder, star,
                          symmetric, verify_section, verify_theorem_A)
from directfinite.cli import CLI_SCHEMA, run_command
from directfinite.errors import DirectFiniteError
from directfinite.parsing import RuleExpr, Session
from directfinite.pipeline import validate_report
from directfinite.poly import Poly
from directfinite.sca import identity_ca, on_ladder, shift_ca
from directfinite.surjunctivity import elementary_rule, interval_rule

Z = FreeAbelianGroup(1)


def report(capsys, n, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\nACCEPTANCE {n} {status} {detail}".rstrip())
    assert not failures, failures[:5]


# -- random generators -------------------------------------------------------

def rand_coeff(rng, fld):
    if fld is QQ:
        return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
    return rng.randrange(1, fld.order)


def rand_nr(rng, group, fld, pool, terms=2, deg=3):
    out = []
    for _ in range(rng.randint(1, terms)):
        mono = {}
        for _ in range(rng.randint(0, deg)):
            g = rng.choice(pool)
            mono[g] = mono.get(g, 0) + 1
        out.append((rand_coeff(rng, fld), mono))
    return NearRingElem.from_terms(group, fld, out)


def rand_gr(rng, group, fld, pool, terms=3):
    coeffs = {}
    for _ in range(rng.randint(0, terms)):
        coeffs[rng.choice(pool)] = rand_coeff(rng, fld)
    return GroupRingElem(group, fld, coeffs)


def backends():
    S3 = symmetric(3)
    F2 = FreeGroup(2)
    pools = {
        "Z": (Z, [Z(i) for i in range(-2, 3)]),
        "S3": (S3, S3.elements()),
        "F2": (F2, F2.ball(1)),
    }
    for gname, (group, pool) in pools.items():
        for fld in (GF(5), QQ):
            yield gname, group, pool, fld


# -- 1 -------------------------------------------------------------------------

def test_criterion_1_example_reproduction(capsys):
    G = FreeGroup(["g", "h", "s", "t"])
    g, h, s, t = G.gens()
    X = lambda e: NearRingElem.X(e, QQ)  # noqa: E731
    alpha = X(g) * X(h) ** 2 + 1
    beta = X(s) ** 2 - X(t) ** 3
    want_ab = (X(g * s) ** 2 - X(g * t) ** 3) * (X(h * s) ** 2 - X(h * t) ** 3) ** 2 + 1
    want_ba = (X(s * g) * X(s * h) ** 2 + 1) ** 2 - (X(t * g) * X(t * h) ** 2 + 1) ** 3
    ab, ba = star(alpha, beta), star(beta, alpha)
    failures = []
    if ab != want_ab:
        failures.append("alpha*beta")
    if ba != want_ba:
        failures.append("beta*alpha")
    table = oracles.SymbolTable()
    if oracles.sympy_star(alpha, beta, table) != oracles.to_sympy(ab, table):
        failures.append("sympy alpha*beta")
    if oracles.sympy_star(beta, alpha, table) != oracles.to_sympy(ba, table):
        failures.append("sympy beta*alpha")
    report(capsys, 1, failures, f"({len(ab.poly.terms)} and {len(ba.poly.terms)} monomials)")


# -- 2 -------------------------------------------------------------------------

def test_criterion_2_near_ring_axioms(capsys):
    rng = random.Random(2)
    failures, count = [], 0
    for gname, group, pool, fld in backends():
        one = NearRingElem.identity(group, fld)
        for _ in range(170):
            a, b, c = (rand_nr(rng, group, fld, pool) for _ in range(3))
            count += 1
            if star(star(a, b), c) != star(a, star(b, c)):
                failures.append(("assoc", gname, fld, a, b, c))
            if star(one, a) != a or star(a, one) != a:
                failures.append(("identity", gname, fld, a))
            if star(a + b, c) != star(a, c) + star(b, c):
                failures.append(("left distributive", gname, fld, a, b, c))
    for fld in (GF(5), QQ):
        xg = NearRingElem.X(Z(1), fld)
        one = NearRingElem.identity(Z, fld)
        lhs = star(xg ** 2, one + one)
        if lhs != 4 * xg ** 2 or lhs == star(xg ** 2, one) + star(xg ** 2, one):
            failures.append(("right distributivity counterexample", fld))
    assert count >= 1000
    report(capsys, 2, failures, f"({count} triples)")


# -- 3 -------------------------------------------------------------------------

def test_criterion_3_phi_embedding(capsys):
    rng = random.Random(3)
    failures, count = [], 0
    for gname, group, pool, fld in backends():
        for _ in range(90):
            a, b = rand_gr(rng, group, fld, pool), rand_gr(rng, group, fld, pool)
            count += 1
            if embed_phi(a * b) != star(embed_phi(a), embed_phi(b)):
                failures.append(("hom", gname, fld, a, b))
            if (a == b) != (embed_phi(a) == embed_phi(b)):
                failures.append(("injective", gname, fld, a, b))
    assert count >= 500
    report(capsys, 3, failures, f"({count} pairs)")


# -- 4 -------------------------------------------------------------------------

FINITE_GROUPS = {"C2": cyclic(2), "C3": cyclic(3), "C4": cyclic(4), "S3": symmetric(3), "Q8": quaternion()}
FINITE_FIELDS = {"F2": GF(2), "F3": GF(3), "F5": GF(5), "Q": QQ}
EXHAUSTIVE_LIMIT = 1 << 10
SAMPLES = 40


def _unit_like(rng, G, fld, n):
    """A product of elementary and monomial matrices: invertible by construction."""
    elems = G.elements()
    M = GroupRingMatrix.identity(n, G, fld)
    for _ in range(3):
        if n > 1 and rng.random() < 0.5:
            i, j = rng.sample(range(n), 2)
            rows = [[GroupRingElem.one(G, fld) if r == c else GroupRingElem.zero(G, fld)
                     for c in range(n)] for r in range(n)]
            rows[i][j] = rand_gr(rng, G, fld, elems)
        else:
            rows = [[GroupRingElem.zero(G, fld)] * n for _ in range(n)]
            for r in range(n):
                rows[r][r] = GroupRingElem.basis(rng.choice(elems), fld, rand_coeff(rng, fld))
        M = M * GroupRingMatrix(rows)
    return M


def _all_matrices(G, fld, n):
    elems = G.elements()
    vals = list(range(fld.order))
    for flat in itertools.product(vals, repeat=n * n * len(elems)):
        entries = []
        for k in range(n * n):
            chunk = flat[k * len(elems):(k + 1) * len(elems)]
            entries.append(GroupRingElem(G, fld, dict(zip(elems, chunk))))
        yield GroupRingMatrix([entries[i * n:(i + 1) * n] for i in range(n)])


def _candidates(rng, G, fld, n):
    if fld is not QQ and fld.order ** (n * n * G.order) <= EXHAUSTIVE_LIMIT:
        return list(_all_matrices(G, fld, n)), "exhaustive"
    elems = G.elements()
    out = []
    for k in range(SAMPLES):
        if k % 2:
            out.append(_unit_like(rng, G, fld, n))
        else:
            out.append(GroupRingMatrix([[rand_gr(rng, G, fld, elems) for _ in range(n)] for _ in range(n)]))
    return out, "sampled"


def _oracle_invertible(G, fld, A):
    entries = [[{h: (Fraction(c) if fld is QQ else c) for h, c in A.entries[i][j].coeffs.items()}
                for j in range(A.n)] for i in range(A.n)]
    mat = oracles.left_mult_matrix(G, None if fld is QQ else fld.p, None, A.n, entries)
    rank = oracles.rank_rational(mat) if fld is QQ else oracles.rank_mod_p(mat, fld.p)
    return mat, rank == len(mat)


def test_criterion_4_finite_group_sweep(capsys):
    rng = random.Random(4)
    failures = []
    pairs = checked = 0
    for (gname, G), (fname, fld), n in itertools.product(FINITE_GROUPS.items(), FINITE_FIELDS.items(), (1, 2)):
        cands, _ = _candidates(rng, G, fld, n)
        for A in cands:
            checked += 1
            B = find_right_inverse(A)
            oracle_mat, oracle_inv = _oracle_invertible(G, fld, A)
            if [list(r) for r in regular_representation(A)] != oracle_mat:
                failures.append(("regular representation", gname, fname, n, A))
            if (B is not None) != oracle_inv:
                failures.append(("right inverse vs rank", gname, fname, n, A))
            if B is None:
                continue
            pairs += 1
            rep = check_direct_finiteness(A, B)
            if not rep.ab_is_one or not rep.ba_is_one:
                failures.append(("violation", gname, fname, n, A, B))
    report(capsys, 4, failures, f"({checked} matrices, {pairs} pairs with ab = 1)")


# -- 5 -------------------------------------------------------------------------

def test_criterion_5_functoriality(capsys):
    rng = random.Random(5)
    failures = []
    F3, F5 = GF(3), GF(5)
    pool = [Z(i) for i in range(-1, 2)]
    for _ in range(200):
        A, B = (GroupRingMatrix([[rand_gr(rng, Z, F3, pool, 2) for _ in range(2)] for _ in range(2)])
                for _ in range(2))
        lhs = compose(psi_from_matrix(A), psi_from_matrix(B))
        rhs = psi_from_matrix(A * B)
        if not rule_equal(lhs, rhs, budget=1).as_polynomials:
            failures.append(("psi", A, B))
    for _ in range(200):
        a, b = (rand_nr(rng, Z, F5, pool, 2, 2) for _ in range(2))
        lhs = compose(psi_from_nearring(a), psi_from_nearring(b))
        rhs = psi_from_nearring(star(a, b))
        if not rule_equal(lhs, rhs, budget=1).as_polynomials:
            failures.append(("Psi", a, b))
    report(capsys, 5, failures, "(200 + 200 pairs)")


# -- 6 -------------------------------------------------------------------------

def _sweep(k, m, numbers, make):
    failures = []
    inj_count = sur_count = 0
    for number in numbers:
        tau = make(number)
        inj, sur = is_injective_Z(tau).verdict, is_surjective_Z(tau).verdict
        inj_count += inj
        sur_count += sur
        if inj and not sur:
            failures.append(("gottschalk", number))
        local = oracles.table_local(k, m, number)
        if (oracles.brute_orphan(local, k, m, 8) is None) != sur:
            failures.append(("orphan oracle", number))
        if (oracles.periodic_collision(local, k, m, 10) is None) != inj:
            failures.append(("periodic oracle", number))
    return failures, inj_count, sur_count


def test_criterion_6_gottschalk_sweep(capsys):
    f1, i1, s1 = _sweep(2, 3, range(256), elementary_rule)
    f2, i2, s2 = _sweep(2, 2, range(16), lambda n: interval_rule(Z, 2, 2, n))
    failures = f1 + f2
    # six reversible and thirty surjective elementary rules
    if (i1, s1) != (6, 30):
        failures.append(("elementary counts", i1, s1))
    report(capsys, 6, failures, f"(elementary {i1} injective / {s1} surjective; "
                                f"two-neighbour {i2} / {s2})")


# Frozen from brute force: these non-surjective elementary rules have no orphan
# of length <= 8, so a length-8 orphan oracle cannot agree with any correct
# surjectivity decision on them.
ORPHAN_LENGTH_9 = {37: (1, 0, 0, 1, 0, 1, 0, 0, 1), 91: (0, 1, 0, 0, 1, 0, 0, 1, 0),
                   164: (1, 0, 0, 1, 0, 1, 0, 0, 1), 218: (0, 1, 0, 0, 1, 0, 0, 1, 0)}


def test_elementary_rules_with_length_9_orphans():
    for number, word in ORPHAN_LENGTH_9.items():
        local = oracles.table_local(2, 3, number)
        assert oracles.brute_orphan(local, 2, 3, 8) is None
        assert oracles.brute_orphan(local, 2, 3, 9) == word
        rep = is_surjective_Z(elementary_rule(number))
        assert rep.verdict is False and tuple(rep.witness["orphan_raw"]) == word


def test_elementary_sweep_agrees_with_length_9_orphan_oracle():
    for number in range(256):
        local = oracles.table_local(2, 3, number)
        assert (oracles.brute_orphan(local, 2, 3, 9) is None) == is_surjective_Z(elementary_rule(number)).verdict


# -- 7 -------------------------------------------------------------------------

def _pipeline_corpus():
    F2 = GF(2)
    lad = AffineAlphabet(F2, 1, ladder=True)
    X = lambda i: NearRingElem.X(Z(i), F2)  # noqa: E731
    t = GroupRingElem.basis(Z(1), F2)
    one, zero = GroupRingElem.one(Z, F2), GroupRingElem.zero(Z, F2)
    A = GroupRingMatrix([[one, t], [zero, one]])
    B = GroupRingMatrix([[one, -t], [zero, one]])
    frob = CellularAutomaton.from_polys(Z, lad, [Z(0)], [Poly.var(F2, (Z(0), 0), 2)])
    return [
        ("shift pair", shift_ca(Z, lad, Z(-1)), shift_ca(Z, lad, Z(1)),
         lambda: verify_theorem_A(X(-1), X(1))),
        ("affine pair", on_ladder(psi_from_nearring(X(-1) - 1)), on_ladder(psi_from_nearring(X(1) + 1)),
         lambda: verify_theorem_A(X(-1) - 1, X(1) + 1)),
        ("elementary-matrix pair", on_ladder(psi_from_matrix(B)), on_ladder(psi_from_matrix(A)),
         lambda: check_direct_finiteness(B, A)),
        ("Frobenius ladder", None, frob, None),
    ]


def _both(rep):
    d = rep.as_dict()
    return all(d.values())


@pytest.mark.slow
def test_criterion_7_pipeline(capsys):
    cfg = PipelineConfig(depth=4, quotients=tuple(range(2, 9)))
    failures = []
    for name, sigma, tau, direct in _pipeline_corpus():
        if sigma is not None and not verify_section(sigma, tau):
            failures.append((name, "section"))
            continue
        rep = run_restriction_ladder(sigma, tau, cfg)
        validate_report(rep.as_dict())
        for rec in rep.levels:
            if not (rec.injective and rec.surjective and rec.window_surjective):
                failures.append((name, rec.r, rec.as_dict()))
        if not rep.all_levels_pass:
            failures.append((name, "levels"))
            continue
        if sigma is None:
            continue
        two_sided = conclude_two_sided(sigma, tau, rep, cfg)
        if not two_sided:
            failures.append((name, "conclude_two_sided"))
        if two_sided != _both(direct()):
            failures.append((name, "disagrees with the direct verdict"))
    report(capsys, 7, failures, "(4 corpus entries, depth 4, Z/2..Z/8)")


# -- 8 -------------------------------------------------------------------------

def test_criterion_8_polynomial_vs_function(capsys):
    failures = []
    for q, want in ((2, {"as_polynomials": False, "as_functions": True}),
                    (4, {"as_polynomials": False, "as_functions": False})):
        F = GF(q)
        alpha = AffineAlphabet(F)
        sq = CellularAutomaton.from_polys(Z, alpha, [Z(0)], [Poly.var(F, (Z(0), 0), 2)])
        got = rule_equal(sq, identity_ca(Z, alpha)).as_dict()
        if got != want:
            failures.append((q, got))
    report(capsys, 8, failures)


# -- 9 -------------------------------------------------------------------------

ROUND_TRIP_CONTEXTS = [
    (Z, QQ), (Z, GF(5)), (Z, GF(4)), (symmetric(3), GF(3)), (FreeGroup(["g", "h"]), QQ),
    (quaternion(), GF(2)),
]


def _pool(G):
    return G.elements() if G.is_finite() else G.ball(1)


def _random_value(rng, G, fld):
    pool = _pool(G)
    kind = rng.randrange(5)
    if kind == 0:
        if fld is not QQ and rng.random() < 0.5:
            return FieldElem(fld, rng.randrange(fld.order))
        return FieldElem(fld, fld.coerce(rand_coeff(rng, fld)))
    if kind == 1:
        return rand_gr(rng, G, fld, pool)
    if kind == 2:
        return rand_nr(rng, G, fld, pool)
    if kind == 3:
        n = rng.randint(1, 2)
        return GroupRingMatrix([[rand_gr(rng, G, fld, pool, 2) for _ in range(n)] for _ in range(n)])
    terms = {}
    for _ in range(rng.randint(0, 3)):
        mono = {}
        for _ in range(rng.randint(0, 2)):
            var = (rng.choice(pool), rng.randint(0, 1))
            mono[var] = mono.get(var, 0) + 1
        key = tuple(sorted(mono.items()))
        terms[key] = fld.coerce(rand_coeff(rng, fld))
    return RuleExpr(G, Poly(fld, terms))


def _as_constant(v, c):
    if isinstance(v, NearRingElem):
        return v == NearRingElem.const(v.group, v.field, c)
    if isinstance(v, GroupRingElem):
        return v == GroupRingElem.one(v.group, v.field).scale(c.value)
    if isinstance(v, RuleExpr):
        return v == RuleExpr(v.group, Poly.const(c.field, c.value))
    return False


FUZZ_ALPHABET = string.ascii_letters[:8] + string.digits + "[](),+-*/^ .;:=XxwG_'\"\\{}"


def _fuzz(rng):
    base = rng.choice(["X[a]**X[b]", "[[1,[a]],[0,1]]", "x[0,1]^2+w", "2*[a]-[b^-1]", "(X[1]+1)^3", ""])
    chars = list(base)
    for _ in range(rng.randint(1, 6)):
        op = rng.randrange(3)
        pos = rng.randint(0, len(chars))
        if op == 0:
            chars.insert(pos, rng.choice(FUZZ_ALPHABET))
        elif op == 1 and chars:
            del chars[min(pos, len(chars) - 1)]
        elif chars:
            chars[min(pos, len(chars) - 1)] = rng.choice(FUZZ_ALPHABET)
    return "".join(chars)


def test_criterion_9_cli_robustness(capsys):
    rng = random.Random(9)
    failures = []
    for k in range(500):
        G, fld = ROUND_TRIP_CONTEXTS[k % len(ROUND_TRIP_CONTEXTS)]
        v = _random_value(rng, G, fld)
        text = format_value(v)
        try:
            back = evaluate(text, G, fld)
        except DirectFiniteError as exc:
            failures.append(("round trip raised", text, exc))
            continue
        # constants print as scalar literals, which promote to any type
        if type(back) is not type(v):
            if not (isinstance(back, FieldElem) and _as_constant(v, back)):
                failures.append(("type", text, type(back)))
            continue
        if format_value(back) != text:
            failures.append(("round trip", text, format_value(back)))
    # fuzzed expressions: only library errors, never a crash
    G = FreeGroup(["a", "b"])
    for _ in range(1500):
        src = _fuzz(rng)
        try:
            evaluate(src, G, GF(4))
        except DirectFiniteError:
            pass
        except Exception as exc:  # noqa: BLE001
            failures.append(("crash", src, repr(exc)))
    # fuzzed command lines: exit 2 with a schema-valid error report, no traceback
    commands = ["star", "grmul", "check-df", "ca-apply", "ca-injective", "window-map", "pipeline", "nope"]
    for _ in range(150):
        argv = [rng.choice(commands), _fuzz(rng), _fuzz(rng), "--format", "json"]
        try:
            code, env = run_command(argv, out=StringIO())
            jsonschema.validate(env, CLI_SCHEMA)
        except jsonschema.ValidationError as exc:
            failures.append(("schema", argv, exc.message))
        except Exception as exc:  # noqa: BLE001
            failures.append(("crash", argv, repr(exc)))
    # well-formed reports validate
    good = [
        ["star", "X[g]*X[h]^2+1", "X[s]^2-X[t]^3", "--group", "free gens=g,h,s,t"],
        ["check-df", "1+[a]", "1-[a]+[a^2]", "--group", "C3", "--field", "GF(2)"],
        ["find-rinv", "[[1,[1]],[0,1]]", "--radius", "1", "--field", "GF(2)"],
        ["ca-injective", "elementary 110"],
        ["ca-surjective", "elementary 30"],
        ["gottschalk-sweep", "--alphabet", "2", "--radius", "1/2"],
        ["window-map", "x[0]+x[1]", "--field", "GF(2)"],
        ["pipeline", "--left", "Psi X[-1]-1", "--right", "Psi X[1]+1", "--field", "GF(2)",
         "--depth", "2", "--quotients", "2..4"],
    ]
    for argv in good:
        out = StringIO()
        code, env = run_command(argv + ["--format", "json"], out=out)
        try:
            jsonschema.validate(json.loads(out.getvalue()), CLI_SCHEMA)
        except jsonschema.ValidationError as exc:
            failures.append(("schema", argv, exc.message))
        if code == 2:
            failures.append(("error", argv, env["error"]))
    report(capsys, 9, failures, "(500 round trips, 1650 fuzzed inputs)")


def test_session_declarations_round_trip():
    s = Session()
    s.declare_group("G", "S3")
    s.declare_field("F", "GF(3)")
    v = s.let("a", "[(12)] + 2*[(123)]")
    assert evaluate(format_value(v), s.group, s.field) == v
