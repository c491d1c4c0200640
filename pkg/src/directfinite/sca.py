"""Symbolic cellular automata over groups.

A cellular automaton is a group, an alphabet, a finite memory set ``M`` and a
local rule ``mu: A^M -> A``; it acts on configurations by
``tau(c)(g) = mu(m -> c(g m))``.  Configurations are only ever represented on
finite windows (:class:`Pattern`).

Two kinds of local rules exist:

* :class:`TableRule` -- an explicit map from ``M``-tuples to labels over a
  :class:`FiniteAlphabet`;
* :class:`PolyRule` -- ``n`` polynomials in the variables ``(m, i)``
  (``m`` in ``M``, ``0 <= i < n``) over an :class:`AffineAlphabet`
  ``K^n``.  With ``ladder=True`` the alphabet stands for the algebraic
  closure of ``F_p`` seen through its finite levels; :func:`restrict` cuts it
  down to ``GF(p^r)^n``.

Alphabet values of an affine alphabet are tuples of raw field values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import linalg
from .errors import (AlphabetMismatch, CoefficientFieldTooLarge, ContextMismatch,
                     EnumerationBudgetExceeded, WrongCharacteristic)
from .fields import GF, FiniteField, transfer_raw
from .groups import MemorySet, product_set, quotient_map, symmetrize
from .poly import DEFAULT_TERM_BUDGET, Poly

ENUMERATION_BUDGET = 1 << 20


# ---------------------------------------------------------------------------
# alphabets


@dataclass(frozen=True)
class FiniteAlphabet:
    labels: tuple

    def __post_init__(self):
        if not self.labels:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("alphabet labels must be distinct")

    is_finite = True

    @property
    def size(self):
        return len(self.labels)

    def points(self):
        return list(self.labels)

    def coerce(self, v):
        if v not in self.labels:
            raise AlphabetMismatch(f"{v!r} is not a symbol of the alphabet")
        return v

    def format(self, v):
        return str(v)

    def __repr__(self):
        return "{" + ",".join(map(str, self.labels)) + "}"


@dataclass(frozen=True)
class AffineAlphabet:
    """``K^n``; with ``ladder=True`` the union of ``GF(p^r)^n`` over all ``r``."""

    field: object
    dim: int = 1
    ladder: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.ladder and not isinstance(self.field, FiniteField):
            raise WrongCharacteristic("a ladder alphabet needs a finite coefficient field")

    @property
    def is_finite(self):
        return self.field.is_finite() and not self.ladder

    @property
    def size(self):
        if not self.is_finite:
            return None
        return self.field.order ** self.dim

    def points(self):
        if not self.is_finite:
            raise EnumerationBudgetExceeded(f"alphabet {self} is infinite")
        return list(itertools.product(self.field.elements_raw(), repeat=self.dim))

    def coerce(self, v):
        if not isinstance(v, tuple):
            v = (v,)
        if len(v) != self.dim:
            raise AlphabetMismatch(f"expected {self.dim} coordinates, got {v!r}")
        return tuple(self.field.coerce(x) for x in v)

    def format(self, v):
        parts = [self.field.format(x) for x in v]
        return parts[0] if self.dim == 1 else "(" + ",".join(parts) + ")"

    def __repr__(self):
        base = f"closure({self.field})" if self.ladder else str(self.field)
        return base if self.dim == 1 else f"{base}^{self.dim}"


# ---------------------------------------------------------------------------
# local rules


@dataclass(eq=False)
class TableRule:
    memory: MemorySet
    table: dict

    def __call__(self, values):
        return self.table[values]


@dataclass(eq=False)
class PolyRule:
    memory: MemorySet
    field: object
    polys: tuple

    @property
    def dim(self):
        return len(self.polys)

    def __call__(self, values):
        assign = {}
        for m, v in zip(self.memory, values):
            for i, x in enumerate(v):
                assign[(m, i)] = x
        return tuple(p.evaluate(assign) for p in self.polys)

    def coefficients(self):
        return [c for p in self.polys for c in p.terms.values()]

    def degree(self):
        return max((p.degree() for p in self.polys), default=0)


def x(g, i=0):
    """Key of the rule variable ``x[g, i]``."""
    return (g, i)


class CellularAutomaton:
    def __init__(self, group, alphabet, memory, rule):
        if not isinstance(memory, MemorySet):
            memory = MemorySet(group, memory)
        if memory.group != group:
            raise ContextMismatch("memory set is not in the automaton's group")
        if len(memory) == 0:
            raise ValueError("memory set must be non-empty")
        if rule.memory != memory:
            raise ValueError("rule memory must equal the automaton memory")
        if isinstance(rule, TableRule):
            if not alphabet.is_finite:
                raise AlphabetMismatch("table rules need a finite alphabet")
            pts = alphabet.points()
            if len(rule.table) != len(pts) ** len(memory):
                raise ValueError("table must cover exactly A^M")
        else:
            if not isinstance(alphabet, AffineAlphabet):
                raise AlphabetMismatch("polynomial rules need an affine alphabet")
            if alphabet.field != rule.field or alphabet.dim != rule.dim:
                raise AlphabetMismatch("rule field/dimension differ from the alphabet")
            if any(p.field != rule.field for p in rule.polys):
                raise AlphabetMismatch("rule polynomials are over a different field")
            allowed = {(m, i) for m in memory for i in range(alphabet.dim)}
            for p in rule.polys:
                for v in p.variables():
                    if v not in allowed:
                        raise ValueError(f"rule variable {v} is outside the memory set")
        self.group = group
        self.alphabet = alphabet
        self.memory = memory
        self.rule = rule

    # -- construction helpers --------------------------------------------
    @classmethod
    def from_polys(cls, group, alphabet, memory, polys):
        memory = memory if isinstance(memory, MemorySet) else MemorySet(group, memory)
        polys = tuple(polys) if isinstance(polys, (list, tuple)) else (polys,)
        return cls(group, alphabet, memory, PolyRule(memory, alphabet.field, polys))

    @classmethod
    def from_function(cls, group, alphabet, memory, fn):
        memory = memory if isinstance(memory, MemorySet) else MemorySet(group, memory)
        pts = alphabet.points()
        table = {vals: fn(vals) for vals in itertools.product(pts, repeat=len(memory))}
        return cls(group, alphabet, memory, TableRule(memory, table))

    @property
    def is_poly(self):
        return isinstance(self.rule, PolyRule)

    def local(self, values):
        return self.rule(values)

    def __repr__(self):
        from .parsing import format_ca
        return f"CellularAutomaton({format_ca(self)})"

    # -- tabulation ------------------------------------------------------
    def rule_table(self, budget=ENUMERATION_BUDGET):
        if isinstance(self.rule, TableRule):
            return self.rule.table
        if not self.alphabet.is_finite:
            raise EnumerationBudgetExceeded(f"alphabet {self.alphabet} is infinite")
        pts = self.alphabet.points()
        if len(pts) ** len(self.memory) > budget:
            raise EnumerationBudgetExceeded(
                f"table would have {len(pts)}^{len(self.memory)} rows (budget {budget})")
        return {vals: self.rule(vals) for vals in itertools.product(pts, repeat=len(self.memory))}

    def tabulate(self, budget=ENUMERATION_BUDGET):
        """Same automaton with a table rule over the finite set of alphabet points."""
        table = self.rule_table(budget)
        return CellularAutomaton(self.group, FiniteAlphabet(tuple(self.alphabet.points())),
                                 self.memory, TableRule(self.memory, dict(table)))

    def function_polys(self):
        """Rule polynomials as functions: exponents reduced mod ``x^q - x`` on finite fields."""
        if not self.is_poly:
            return None
        if self.alphabet.is_finite:
            q = self.alphabet.field.order
            return tuple(p.reduce_exponents(q) for p in self.rule.polys)
        return self.rule.polys


def identity_ca(group, alphabet):
    one = group.identity()
    memory = MemorySet(group, [one])
    if isinstance(alphabet, AffineAlphabet):
        polys = [Poly.var(alphabet.field, (one, i)) for i in range(alphabet.dim)]
        return CellularAutomaton.from_polys(group, alphabet, memory, polys)
    return CellularAutomaton.from_function(group, alphabet, memory, lambda v: v[0])


def shift_ca(group, alphabet, g):
    """``tau(c)(h) = c(h g)``: memory ``{g}``, projection rule."""
    memory = MemorySet(group, [g])
    g = memory.elements[0]
    if isinstance(alphabet, AffineAlphabet):
        polys = [Poly.var(alphabet.field, (g, i)) for i in range(alphabet.dim)]
        return CellularAutomaton.from_polys(group, alphabet, memory, polys)
    return CellularAutomaton.from_function(group, alphabet, memory, lambda v: v[0])


# ---------------------------------------------------------------------------
# patterns


class Pattern:
    """Assignment of alphabet values to a finite window of the group."""

    __slots__ = ("group", "values")

    def __init__(self, group, values):
        self.group = group
        self.values = {group(g): v for g, v in values.items()}

    @property
    def window(self):
        return MemorySet(self.group, self.values)

    @classmethod
    def from_word(cls, group, word, start=0):
        """Pattern on ``{start, ..., start + len(word) - 1}`` in ``Z``."""
        return cls(group, {group((start + k,)): v for k, v in enumerate(word)})

    def word(self):
        return [self.values[g] for g in sorted(self.values)]

    def translate(self, g):
        """``(g p)(h) = p(g^-1 h)`` on the window ``g E``."""
        return Pattern(self.group, {g * h: v for h, v in self.values.items()})

    def restrict(self, window):
        return Pattern(self.group, {g: self.values[g] for g in window})

    def __getitem__(self, g):
        return self.values[g]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.values == other.values

    def __repr__(self):
        return "Pattern({" + ", ".join(f"{g}: {self.values[g]}" for g in sorted(self.values)) + "})"


def erosion(window, memory):
    """``{g in E : g M subset of E}``."""
    w = set(window)
    return MemorySet(window.group, [g for g in window if all(g * m in w for m in memory)])


def apply_pattern(tau, p):
    """Evaluate ``tau`` on a finite pattern; output lives on the eroded window."""
    if p.group != tau.group:
        raise ContextMismatch("pattern and automaton live on different groups")
    out_window = erosion(p.window, tau.memory)
    vals = p.values
    out = {}
    for g in out_window:
        out[g] = tau.local(tuple(vals[g * m] for m in tau.memory))
    return Pattern(tau.group, out)


# ---------------------------------------------------------------------------
# composition


def _translate_poly(poly, g):
    return poly.rename(lambda v: (g * v[0], v[1]))


def _same_space(sigma, tau):
    if sigma.group != tau.group:
        raise ContextMismatch("automata over different groups")
    if sigma.alphabet != tau.alphabet:
        raise AlphabetMismatch(f"alphabets {sigma.alphabet} and {tau.alphabet} differ")


def compose(sigma, tau, budget=DEFAULT_TERM_BUDGET, enum_budget=ENUMERATION_BUDGET):
    """``sigma o tau`` (apply ``tau`` first) with memory ``M_sigma M_tau``."""
    _same_space(sigma, tau)
    memory = product_set(sigma.memory, tau.memory)
    if sigma.is_poly and tau.is_poly:
        images = {}
        for m in sigma.memory:
            for j, pj in enumerate(tau.rule.polys):
                images[(m, j)] = _translate_poly(pj, m)
        polys = [p.substitute(images, budget) for p in sigma.rule.polys]
        return CellularAutomaton.from_polys(sigma.group, sigma.alphabet, memory, polys)
    if not sigma.alphabet.is_finite:
        raise AlphabetMismatch("mixed table/polynomial composition needs a finite alphabet")
    pts = sigma.alphabet.points()
    if len(pts) ** len(memory) > enum_budget:
        raise EnumerationBudgetExceeded(
            f"composed table would have {len(pts)}^{len(memory)} rows (budget {enum_budget})")
    pos = {g: k for k, g in enumerate(memory)}
    inner = [[pos[m * h] for h in tau.memory] for m in sigma.memory]
    tl, sl = tau.local, sigma.local
    table = {}
    for vals in itertools.product(pts, repeat=len(memory)):
        mid = tuple(tl(tuple(vals[k] for k in idx)) for idx in inner)
        table[vals] = sl(mid)
    return CellularAutomaton(sigma.group, sigma.alphabet, memory, TableRule(memory, table))


def pad_memory(tau, memory):
    """The same automaton presented with a larger memory set."""
    if not tau.memory <= memory:
        raise ValueError("new memory must contain the old one")
    if tau.is_poly:
        return CellularAutomaton.from_polys(tau.group, tau.alphabet, memory, tau.rule.polys)
    idx = [memory.index(m) for m in tau.memory]
    return CellularAutomaton.from_function(
        tau.group, tau.alphabet, memory, lambda v: tau.local(tuple(v[k] for k in idx)))


# ---------------------------------------------------------------------------
# linear structure


def affine_form(tau):
    """``(matrix, constant)`` if the rule is affine as a function, else ``None``.

    ``matrix[i]`` maps ``(m, j)`` to the raw coefficient of ``x[m, j]`` in
    output ``i``; ``constant[i]`` is the raw constant term.
    """
    polys = tau.function_polys()
    if polys is None:
        return None
    lin, const = [], []
    for p in polys:
        row = {}
        c0 = p.field.zero
        for m, c in p.terms.items():
            if not m:
                c0 = c
            elif len(m) == 1 and m[0][1] == 1:
                row[m[0][0]] = c
            else:
                return None
        lin.append(row)
        const.append(c0)
    return lin, const


# ---------------------------------------------------------------------------
# window maps


class WindowMap:
    """``tau^+_M : A^{M^2} -> A^M``, ``c -> (g -> mu(m -> c(g m)))``."""

    def __init__(self, tau, memory):
        memory = symmetrize(memory)
        if not tau.memory <= memory:
            raise ValueError("window memory must contain the automaton's memory set")
        self.tau = tau
        self.memory = memory
        self.domain = product_set(memory, memory)
        self._pos = {g: k for k, g in enumerate(self.domain)}
        self._idx = [[self._pos[g * m] for m in tau.memory] for g in memory]

    def __call__(self, c):
        """``c``: tuple of values ordered by :attr:`domain` (or a dict)."""
        if isinstance(c, dict):
            c = tuple(c[g] for g in self.domain)
        tl = self.tau.local
        return tuple(tl(tuple(c[k] for k in idx)) for idx in self._idx)

    def polys(self):
        """Output polynomials ``[(g, i) -> poly in x[h, j], h in M^2]``."""
        if not self.tau.is_poly:
            return None
        return {(g, i): _translate_poly(p, g) for g in self.memory for i, p in enumerate(self.tau.rule.polys)}

    def table(self, budget=ENUMERATION_BUDGET):
        pts = self.tau.alphabet.points()
        if len(pts) ** len(self.domain) > budget:
            raise EnumerationBudgetExceeded(
                f"window map has {len(pts)}^{len(self.domain)} rows (budget {budget})")
        return {c: self(c) for c in itertools.product(pts, repeat=len(self.domain))}

    def image(self, budget=ENUMERATION_BUDGET):
        return set(self.table(budget).values())

    def linear_rank(self):
        """Rank of the linear part, or ``None`` when the rule is not affine."""
        form = affine_form(self.tau)
        if form is None:
            return None
        lin, _ = form
        fld = self.tau.alphabet.field
        n = self.tau.alphabet.dim
        rows = []
        for g in self.memory:
            for i in range(n):
                row = [fld.zero] * (n * len(self.domain))
                for (m, j), c in lin[i].items():
                    col = self._pos[g * m] * n + j
                    row[col] = fld.add(row[col], c)
                rows.append(row)
        return linalg.rank(fld, rows)

    def is_surjective(self, budget=ENUMERATION_BUDGET):
        """``Gamma_M == A^M``: rank test for affine rules, enumeration otherwise."""
        rank = self.linear_rank()
        if rank is not None:
            return rank == self.tau.alphabet.dim * len(self.memory)
        if not self.tau.alphabet.is_finite:
            raise EnumerationBudgetExceeded("non-affine rule over an infinite alphabet")
        return len(self.image(budget)) == self.tau.alphabet.size ** len(self.memory)


def window_map(tau, memory):
    return WindowMap(tau, memory)


# ---------------------------------------------------------------------------
# the maps psi and Psi


def psi_from_matrix(a, ladder=False):
    """Linear automaton of a matrix over ``k[G]``: output ``i`` is ``sum_j sum_h A_ij(h) x[h, j]``."""
    from .group_ring import as_matrix
    A = as_matrix(a)
    fld = A.field
    supp = A.support() or [A.group.identity()]
    memory = MemorySet(A.group, supp)
    polys = []
    for i in range(A.n):
        terms = {}
        for j in range(A.n):
            for h, c in A.entries[i][j].coeffs.items():
                terms[(((h, j), 1),)] = c
        polys.append(Poly(fld, terms))
    alphabet = AffineAlphabet(fld, A.n, ladder)
    return CellularAutomaton.from_polys(A.group, alphabet, memory, polys)


def psi_from_nearring(alpha, ladder=False):
    """Polynomial automaton of a near-ring element: ``X_g -> x[g]``."""
    memory = MemorySet(alpha.group, list(alpha.support()) + [alpha.group.identity()])
    poly = alpha.poly.rename(lambda g: (g, 0))
    return CellularAutomaton.from_polys(alpha.group, AffineAlphabet(alpha.field, 1, ladder), memory, [poly])


# ---------------------------------------------------------------------------
# restriction to finite levels


def coefficient_level(tau):
    """lcm of the subfield degrees of all rule coefficients."""
    fld = tau.alphabet.field
    if not isinstance(fld, FiniteField):
        raise WrongCharacteristic("rational coefficients have no finite level")
    r0 = 1
    for c in tau.rule.coefficients():
        d = fld.subfield_degree_raw(c)
        r0 = r0 * d // math.gcd(r0, d)
    return r0


def restrict(tau, r):
    """Restriction of a ladder automaton to the finite alphabet ``GF(p^r)^n``."""
    if not (tau.is_poly and isinstance(tau.alphabet.field, FiniteField)):
        raise WrongCharacteristic("restriction needs a polynomial rule over a finite field")
    src = tau.alphabet.field
    r0 = coefficient_level(tau)
    if r % r0:
        raise CoefficientFieldTooLarge(
            f"coefficients generate GF({src.p}^{r0}), which is not inside GF({src.p}^{r})")
    dst = GF(src.p, r)
    polys = [p.map_coefficients(lambda c: transfer_raw(c, src, dst), dst) for p in tau.rule.polys]
    alphabet = AffineAlphabet(dst, tau.alphabet.dim, ladder=False)
    return CellularAutomaton.from_polys(tau.group, alphabet, tau.memory, polys)


def on_ladder(tau):
    """View a polynomial automaton over ``GF(q)`` as one over the closure of ``F_p``."""
    a = tau.alphabet
    return CellularAutomaton.from_polys(tau.group, AffineAlphabet(a.field, a.dim, ladder=True),
                                        tau.memory, tau.rule.polys)


# ---------------------------------------------------------------------------
# rule comparison


@dataclass(frozen=True)
class RuleEquality:
    as_polynomials: bool | None
    as_functions: bool | None

    def as_dict(self):
        return {"as_polynomials": self.as_polynomials, "as_functions": self.as_functions}


def rule_equal(tau, sigma, budget=ENUMERATION_BUDGET):
    """Compare local rules after padding both memories to their union.

    Function equality is decided by exhaustive evaluation on finite alphabets
    (or, past the budget, by exponent reduction modulo ``x^q - x``, which is
    exact on ``GF(q)``); on infinite alphabets it is reported as ``None``.
    """
    _same_space(sigma, tau)
    union = tau.memory | sigma.memory
    as_poly = None
    if tau.is_poly and sigma.is_poly:
        as_poly = tau.rule.polys == sigma.rule.polys
    if not tau.alphabet.is_finite:
        return RuleEquality(as_poly, None)
    pts = tau.alphabet.points()
    if len(pts) ** len(union) <= budget:
        ti = [union.index(m) for m in tau.memory]
        si = [union.index(m) for m in sigma.memory]
        same = all(tau.local(tuple(v[k] for k in ti)) == sigma.local(tuple(v[k] for k in si))
                   for v in itertools.product(pts, repeat=len(union)))
        return RuleEquality(as_poly, same)
    if tau.is_poly and sigma.is_poly:
        return RuleEquality(as_poly, tau.function_polys() == sigma.function_polys())
    raise EnumerationBudgetExceeded(f"{len(pts)}^{len(union)} evaluations exceed budget {budget}")


def is_identity_rule(tau, budget=ENUMERATION_BUDGET):
    return rule_equal(tau, identity_ca(tau.group, tau.alphabet), budget)


# ---------------------------------------------------------------------------
# finite quotients of Z


def quotient_ca(tau, modulus, budget=ENUMERATION_BUDGET):
    """The induced automaton on ``Z/n`` (periodic configurations of period ``n``)."""
    target, q = quotient_map(tau.group, modulus)
    memory = MemorySet(target, [q(m) for m in tau.memory])
    if tau.is_poly:
        polys = [p.rename(lambda v: (q(v[0]), v[1])) for p in tau.rule.polys]
        return CellularAutomaton.from_polys(target, tau.alphabet, memory, polys)
    idx = [memory.index(q(m)) for m in tau.memory]
    pts = tau.alphabet.points()
    if len(pts) ** len(memory) > budget:
        raise EnumerationBudgetExceeded("quotient table exceeds budget")
    return CellularAutomaton.from_function(target, tau.alphabet, memory,
                                           lambda v: tau.local(tuple(v[k] for k in idx)))
