"""Expression language, canonical printer and interactive session.

Grammar, loosest binding first::

    star    := sum ('**' sum)*                    near-ring product, left-assoc
    sum     := ['+'|'-'] product (('+'|'-') product)*
    product := power (('*'|'/') power)*           '*' is the ordinary product
    power   := atom ['^' ['-'] INT]
    atom    := INT | 'w' | NAME | '(' star ')'
             | '[' g ']'                          basis element of k[G]
             | 'X' '[' g ']'                      near-ring variable X_g
             | 'x' '[' g [',' INT] ']'            rule variable x[g, i], i defaults to 0
             | '[' '[' row ']' (',' '[' row ']')* ']'   matrix over k[G]

Group-element text inside brackets is handed to the group's own parser, so
``[g*h^-1]``, ``[(1,-2)]`` and ``[(12)]`` all work for the matching groups.
``w`` is the generator of ``GF(p^r)`` when ``r > 1``.

``**`` binds loosest, so ``X[g] ** X[s]^2 - X[t]`` means
``X[g] ** (X[s]^2 - X[t])``.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .errors import (DirectFiniteError, ExprError, ExprSyntaxError, NameAlreadyBound, TypeMismatch,
                     UnknownName)
from .fields import QQ, FieldElem, FiniteField, parse_field
from .group_ring import GroupRingElem, GroupRingMatrix
from .groups import (FiniteGroup, FreeAbelianGroup, FreeGroup, GroupElement, cyclic, dihedral,
                     quaternion, symmetric)
from .near_ring import NearRingElem, star
from .poly import DEFAULT_TERM_BUDGET, Poly

MAX_DEPTH = 60
MAX_EXPONENT = 256


# ---------------------------------------------------------------------------
# values


class RuleExpr:
    """Polynomial in the rule variables ``x[g, i]``."""

    __slots__ = ("group", "poly")

    def __init__(self, group, poly):
        self.group = group
        self.poly = poly

    @property
    def field(self):
        return self.poly.field

    def dim(self):
        return 1 + max((i for _, i in self.poly.variables()), default=0)

    def __eq__(self, other):
        return isinstance(other, RuleExpr) and self.group == other.group and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"RuleExpr({format_value(self)})"


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Node:
    kind: str
    pos: int
    value: object = None
    children: tuple = ()


class Parser:
    def __init__(self, source):
        self.src = source
        self.i = 0
        self.depth = 0

    # -- scanning --------------------------------------------------------
    def _skip(self):
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1

    def _peek(self, text):
        self._skip()
        return self.src.startswith(text, self.i)

    def _accept(self, text):
        if self._peek(text):
            self.i += len(text)
            return True
        return False

    def _expect(self, text):
        if not self._accept(text):
            self._fail(f"expected {text!r}")

    def _fail(self, message, pos=None):
        pos = self.i if pos is None else pos
        found = self.src[pos:pos + 1] or "end of input"
        raise ExprSyntaxError(f"{message}, found {found!r}", pos, self.src)

    def _int(self):
        self._skip()
        m = re.compile(r"\d+").match(self.src, self.i)
        if not m:
            self._fail("expected an integer")
        self.i = m.end()
        return int(m.group())

    def _bracket_text(self):
        """Raw text up to the ``]`` matching an already consumed ``[``."""
        start = self.i
        depth = 0
        while self.i < len(self.src):
            ch = self.src[self.i]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                if depth == 0:
                    if ch == ")":
                        self._fail("unbalanced ')' in group element")
                    text = self.src[start:self.i]
                    self.i += 1
                    if not text.strip():
                        self._fail("empty group element", start)
                    return text, start
                depth -= 1
            self.i += 1
        raise ExprSyntaxError("unterminated '['", start - 1, self.src)

    # -- grammar ---------------------------------------------------------
    def parse(self):
        node = self.star()
        self._skip()
        if self.i != len(self.src):
            self._fail("unexpected trailing input")
        return node

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.i, self.src)

    def star(self):
        self._enter()
        self._skip()
        pos = self.i
        items = [self.sum()]
        while self._accept("**"):
            items.append(self.sum())
        self.depth -= 1
        return items[0] if len(items) == 1 else Node("star", pos, None, tuple(items))

    def sum(self):
        self._skip()
        pos = self.i
        terms = []
        sign = 1
        if self._accept("-"):
            sign = -1
        else:
            self._accept("+")
        terms.append((sign, self.product()))
        while True:
            if self._peek("**"):
                break
            if self._accept("+"):
                terms.append((1, self.product()))
            elif self._accept("-"):
                terms.append((-1, self.product()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Node("sum", pos, tuple(s for s, _ in terms), tuple(n for _, n in terms))

    def product(self):
        self._skip()
        pos = self.i
        ops, items = [], [self.power()]
        while True:
            if self._peek("**"):
                break
            if self._accept("*"):
                ops.append("*")
            elif self._accept("/"):
                ops.append("/")
            else:
                break
            items.append(self.power())
        if len(items) == 1:
            return items[0]
        return Node("product", pos, tuple(ops), tuple(items))

    def power(self):
        base = self.atom()
        self._skip()
        pos = self.i
        if self._accept("^"):
            neg = self._accept("-")
            e = self._int()
            if e > MAX_EXPONENT:
                self._fail(f"exponent larger than {MAX_EXPONENT}", pos)
            if self._peek("^"):
                self._fail("chained '^' is ambiguous; use parentheses")
            return Node("pow", pos, -e if neg else e, (base,))
        return base

    def atom(self):
        self._skip()
        pos = self.i
        if self.i >= len(self.src):
            self._fail("unexpected end of input")
        ch = self.src[self.i]
        if ch.isdigit():
            return Node("num", pos, self._int())
        if ch == "(":
            self.i += 1
            node = self.star()
            self._expect(")")
            return node
        if ch == "[":
            self.i += 1
            if self._peek("["):
                return self._matrix(pos)
            text, tpos = self._bracket_text()
            return Node("gr", tpos, text)
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_]*").match(self.src, self.i)
        if not m:
            self._fail("expected a value")
        name = m.group()
        self.i = m.end()
        if name in ("X", "x"):
            if not self._accept("["):
                self._fail(f"expected '[' after {name}")
            text, tpos = self._bracket_text()
            if name == "X":
                return Node("X", tpos, text)
            idx = 0
            head, sep, tail = _split_top_comma(text)
            if sep:
                if not tail.strip().isdigit():
                    self._fail("coordinate index must be a non-negative integer", tpos + len(head) + 1)
                text, idx = head, int(tail)
            return Node("x", tpos, (text, idx))
        if name == "w":
            return Node("w", pos)
        return Node("name", pos, name)

    def _matrix(self, pos):
        rows = []
        while True:
            self._expect("[")
            row = [self.star()]
            while self._accept(","):
                row.append(self.star())
            self._expect("]")
            rows.append(tuple(row))
            if not self._accept(","):
                break
        self._expect("]")
        return Node("matrix", pos, len(rows), tuple(rows))


def _split_top_comma(text):
    depth = 0
    cut = -1
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            cut = k
    if cut < 0:
        return text, "", ""
    return text[:cut], ",", text[cut + 1:]


def parse(source):
    """Parse expression text into an AST (no evaluation)."""
    if not isinstance(source, str):
        raise TypeError("source must be a string")
    return Parser(source).parse()


# ---------------------------------------------------------------------------
# evaluation


class Evaluator:
    def __init__(self, group, fld, names=None, source=None, budget=DEFAULT_TERM_BUDGET):
        self.group = group
        self.field = fld
        self.names = names or {}
        self.source = source
        self.budget = budget

    def err(self, cls, message, node):
        return cls(message, node.pos, self.source)

    def scalar(self, v):
        return FieldElem(self.field, self.field.coerce(v))

    def element(self, text, node):
        if self.group is None:
            raise self.err(UnknownName, "no group declared", node)
        try:
            return self.group(text.strip())
        except (DirectFiniteError, ValueError, KeyError) as exc:
            msg = exc.message if isinstance(exc, ExprError) else str(exc)
            raise self.err(UnknownName, msg, node) from None

    def run(self, node):
        return getattr(self, "_" + node.kind)(node)

    def _num(self, node):
        return self.scalar(node.value)

    def _w(self, node):
        if not (isinstance(self.field, FiniteField) and self.field.degree > 1):
            raise self.err(UnknownName, f"'w' is not defined over {self.field}", node)
        return self.field.generator

    def _name(self, node):
        if node.value not in self.names:
            raise self.err(UnknownName, f"unknown name {node.value!r}", node)
        return self.names[node.value]

    def _gr(self, node):
        g = self.element(node.value, node)
        return GroupRingElem.basis(g, self.field)

    def _X(self, node):
        return NearRingElem.X(self.element(node.value, node), self.field)

    def _x(self, node):
        text, idx = node.value
        g = self.element(text, node)
        return RuleExpr(g.group, Poly.var(self.field, (g, idx)))

    def _matrix(self, node):
        rows = []
        for row in node.children:
            if len(row) != len(node.children):
                raise self.err(TypeMismatch, "matrices must be square", node)
            out = []
            for child in row:
                v = self.run(child)
                if isinstance(v, FieldElem):
                    v = self._promote(v, GroupRingElem, child)
                if not isinstance(v, GroupRingElem):
                    raise self.err(TypeMismatch, "matrix entries must be group ring elements", child)
                out.append(v)
            rows.append(out)
        return GroupRingMatrix(rows)

    # -- arithmetic ------------------------------------------------------
    def _promote(self, v, kind, node, n=None):
        """Lift a scalar (or a group ring element, for matrices) to ``kind``."""
        if isinstance(v, kind):
            return v
        if isinstance(v, FieldElem):
            v = self.scalar(v)
            if kind is GroupRingElem:
                return GroupRingElem.one(self._need_group(node), self.field).scale(v.value)
            if kind is NearRingElem:
                return NearRingElem.const(self._need_group(node), self.field, v)
            if kind is RuleExpr:
                return RuleExpr(self._need_group(node), Poly.const(self.field, v.value))
        if kind is GroupRingMatrix and isinstance(v, (FieldElem, GroupRingElem)):
            a = self._promote(v, GroupRingElem, node)
            zero = GroupRingElem.zero(a.group, a.field)
            return GroupRingMatrix([[a if i == j else zero for j in range(n)] for i in range(n)])
        raise self.err(TypeMismatch, f"cannot combine {_kind(v)} with {kind.__name__}", node)

    def _need_group(self, node):
        if self.group is None:
            raise self.err(UnknownName, "no group declared", node)
        return self.group

    def _unify(self, a, b, node):
        if type(a) is type(b):
            return a, b
        for target in (GroupRingMatrix, GroupRingElem, NearRingElem, RuleExpr):
            if isinstance(a, target) or isinstance(b, target):
                n = (a if isinstance(a, GroupRingMatrix) else b).n if target is GroupRingMatrix else None
                return self._promote(a, target, node, n), self._promote(b, target, node, n)
        raise self.err(TypeMismatch, f"cannot combine {_kind(a)} and {_kind(b)}", node)

    def _binary(self, op, a, b, node):
        a, b = self._unify(a, b, node)
        try:
            if isinstance(a, RuleExpr):
                if op == "+":
                    return RuleExpr(a.group, a.poly + b.poly)
                return RuleExpr(a.group, a.poly.mul(b.poly, self.budget))
            if isinstance(a, NearRingElem) and op == "*":
                return NearRingElem(a.group, a.poly.mul(b.poly, self.budget))
            return a + b if op == "+" else a * b
        except ExprError:
            raise
        except DirectFiniteError as exc:
            raise self.err(TypeMismatch, str(exc), node) from None

    def _sum(self, node):
        acc = None
        for sign, child in zip(node.value, node.children):
            v = self.run(child)
            if sign < 0:
                v = self._negate(v)
            acc = v if acc is None else self._binary("+", acc, v, child)
        return acc

    def _negate(self, v):
        if isinstance(v, RuleExpr):
            return RuleExpr(v.group, -v.poly)
        return -v

    def _product(self, node):
        acc = self.run(node.children[0])
        for op, child in zip(node.value, node.children[1:]):
            v = self.run(child)
            if op == "/":
                if not isinstance(v, FieldElem):
                    raise self.err(TypeMismatch, "can only divide by a scalar", child)
                if v.is_zero():
                    raise self.err(TypeMismatch, "division by zero", child)
                v = self.scalar(v).inverse()
            acc = self._binary("*", acc, v, child)
        return acc

    def _pow(self, node):
        base = self.run(node.children[0])
        e = node.value
        if isinstance(base, FieldElem):
            if e < 0 and base.is_zero():
                raise self.err(TypeMismatch, "division by zero", node)
            return base ** e
        if e < 0:
            raise self.err(TypeMismatch, f"negative power of a {_kind(base)}", node)
        try:
            if isinstance(base, RuleExpr):
                return RuleExpr(base.group, base.poly.pow(e, self.budget))
            if isinstance(base, NearRingElem):
                return NearRingElem(base.group, base.poly.pow(e, self.budget))
            if isinstance(base, GroupRingMatrix):
                acc = self._promote(self.scalar(1), GroupRingMatrix, node, base.n)
                for _ in range(e):
                    acc = acc * base
                return acc
            return base ** e
        except DirectFiniteError as exc:
            raise self.err(TypeMismatch, str(exc), node) from None

    def _star(self, node):
        acc = self._promote(self.run(node.children[0]), NearRingElem, node.children[0])
        for child in node.children[1:]:
            v = self._promote(self.run(child), NearRingElem, child)
            try:
                acc = star(acc, v, self.budget)
            except DirectFiniteError as exc:
                raise self.err(TypeMismatch, str(exc), child) from None
        return acc


def _kind(v):
    return {FieldElem: "scalar", GroupRingElem: "group ring element", NearRingElem: "near-ring element",
            RuleExpr: "rule polynomial", GroupRingMatrix: "matrix"}.get(type(v), type(v).__name__)


def evaluate(source, group, fld, names=None, budget=DEFAULT_TERM_BUDGET):
    """Parse and evaluate ``source`` over ``group`` and ``fld``."""
    return Evaluator(group, fld, names, source, budget).run(parse(source))


# ---------------------------------------------------------------------------
# printing


def _coeff_parts(fld, c):
    """``(negative, text)`` for a raw coefficient."""
    if fld is QQ or not isinstance(fld, FiniteField):
        c = Fraction(c)
        return (c < 0, str(abs(c)))
    return (False, fld.format(c))


def _join_terms(fld, items):
    """``items``: list of ``(raw coeff, monomial text or '')`` in print order."""
    if not items:
        return "0"
    out = []
    for k, (c, mon) in enumerate(items):
        neg, text = _coeff_parts(fld, c)
        compound = "+" in text or ("-" in text and not text.startswith("-"))
        if mon:
            if text == "1":
                term = mon
            elif compound:
                term = f"({text})*{mon}"
            else:
                term = f"{text}*{mon}"
        else:
            term = f"({text})" if compound and len(items) > 1 else text
        if k == 0:
            out.append(f"-{term}" if neg else term)
        else:
            out.append(f" - {term}" if neg else f" + {term}")
    return "".join(out)


def _format_poly(poly, var_text):
    items = []
    for m, c in poly.sorted_terms():
        mon = "*".join(var_text(v) + (f"^{e}" if e > 1 else "") for v, e in m)
        items.append((c, mon))
    return _join_terms(poly.field, items)


def _rule_var(v):
    g, i = v
    return f"x[{g}]" if i == 0 else f"x[{g},{i}]"


def format_value(v):
    """Canonical text; ``evaluate(format_value(v))`` reproduces ``v``."""
    if isinstance(v, FieldElem):
        return _join_terms(v.field, [(v.value, "")])
    if isinstance(v, NearRingElem):
        return _format_poly(v.poly, lambda g: f"X[{g}]")
    if isinstance(v, RuleExpr):
        return _format_poly(v.poly, _rule_var)
    if isinstance(v, GroupRingElem):
        ident = v.group.identity()
        items = [(v.coeffs[g], f"[{g}]") for g in v.support() if g != ident]
        if ident in v.coeffs:
            items.append((v.coeffs[ident], ""))
        return _join_terms(v.field, items)
    if isinstance(v, GroupRingMatrix):
        return "[" + ", ".join("[" + ", ".join(format_value(x) for x in row) + "]" for row in v.entries) + "]"
    if isinstance(v, GroupElement):
        return str(v)
    from .sca import CellularAutomaton
    if isinstance(v, CellularAutomaton):
        return format_ca(v)
    return str(v)


def format_ca(tau):
    if tau.is_poly:
        body = "; ".join(format_value(RuleExpr(tau.group, p)) for p in tau.rule.polys)
        return f"{body} over {tau.alphabet!r}"
    mem = ",".join(str(g) for g in tau.memory)
    return f"table rule on {tau.alphabet!r} with memory {{{mem}}}"


# ---------------------------------------------------------------------------
# group, field, alphabet and automaton specifications


def _kv(parts):
    out = {}
    for p in parts:
        if "=" not in p:
            raise ValueError(f"expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_cayley_csv(path):
    """Cayley table of element names; the first row is the identity's row."""
    with open(path, newline="") as fh:
        rows = [[c.strip() for c in r] for r in csv.reader(fh) if any(c.strip() for c in r)]
    names = rows[0]
    index = {n: i for i, n in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate element names in the first row")
    try:
        table = [[index[c] for c in r] for r in rows]
    except KeyError as exc:
        raise ValueError(f"unknown element {exc.args[0]!r} in the table") from None
    return FiniteGroup(table, names, name=Path(path).stem)


def parse_group_spec(text, base_dir=None):
    """``Z``, ``Z^2``, ``zd d=2``, ``free rank=2``, ``free gens=g,h``, ``cyclic n=4``,
    ``C4``, ``S3``, ``symmetric n=3``, ``dihedral n=4``, ``Q8``, ``finite table=f.csv``."""
    s = text.strip()
    try:
        parts = s.split()
        head, rest = (parts[0], parts[1:]) if parts else ("", [])
        kv = _kv(rest)
        if head == "Z" and not rest:
            return FreeAbelianGroup(1)
        m = re.fullmatch(r"Z\^(\d+)", head)
        if m and not rest:
            return FreeAbelianGroup(int(m.group(1)))
        if head == "zd":
            return FreeAbelianGroup(int(kv["d"]))
        if head == "free":
            if "gens" in kv:
                return FreeGroup([g.strip() for g in kv["gens"].split(",")])
            return FreeGroup(int(kv.get("rank", 2)))
        if head == "cyclic":
            return cyclic(int(kv["n"]))
        m = re.fullmatch(r"C(\d+)", head)
        if m and not rest:
            return cyclic(int(m.group(1)))
        if head == "symmetric":
            return symmetric(int(kv["n"]))
        m = re.fullmatch(r"S(\d)", head)
        if m and not rest:
            return symmetric(int(m.group(1)))
        if head == "dihedral":
            return dihedral(int(kv["n"]))
        m = re.fullmatch(r"D(\d+)", head)
        if m and not rest:
            return dihedral(int(m.group(1)))
        if head == "Q8" and not rest:
            return quaternion()
        if head == "finite":
            path = Path(kv["table"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return load_cayley_csv(path)
    except (KeyError, ValueError, OSError, DirectFiniteError) as exc:
        raise UnknownName(f"bad group specification {s!r}: {exc}", 0, text) from None
    raise UnknownName(f"unknown group specification {s!r}", 0, text)


def parse_field_spec(text):
    try:
        return parse_field(text)
    except (DirectFiniteError, ValueError) as exc:
        raise UnknownName(f"unknown field {text.strip()!r}: {exc}", 0, text) from None


def parse_alphabet(text, fld):
    """``GF(4)``, ``GF(2)^2``, ``closure(GF(2))^3``; the field must match ``fld``."""
    from .sca import AffineAlphabet
    s = text.replace(" ", "")
    m = re.fullmatch(r"(closure\((.+)\)|([^\^]+))(?:\^(\d+))?", s)
    if not m:
        raise ExprSyntaxError(f"bad alphabet {text!r}", 0, text)
    ladder = m.group(2) is not None
    f = parse_field_spec(m.group(2) or m.group(3))
    if f != fld:
        raise TypeMismatch(f"alphabet field {f} differs from the session field {fld}", 0, text)
    try:
        return AffineAlphabet(f, int(m.group(4) or 1), ladder)
    except (DirectFiniteError, ValueError) as exc:
        raise TypeMismatch(str(exc), 0, text) from None


# ---------------------------------------------------------------------------
# session


@dataclass
class Session:
    """Declared groups, fields and named values of an interactive or batch run."""

    group: object = None
    field: object = QQ
    groups: dict = dc_field(default_factory=dict)
    fields: dict = dc_field(default_factory=dict)
    values: dict = dc_field(default_factory=dict)
    automata: dict = dc_field(default_factory=dict)
    history: list = dc_field(default_factory=list)
    budget: int = DEFAULT_TERM_BUDGET
    base_dir: object = None

    def _bind(self, table, name, value, kind):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("X", "x", "w"):
            raise ExprSyntaxError(f"invalid {kind} name {name!r}", 0, name)
        if name in table:
            raise NameAlreadyBound(f"{kind} {name!r} is already declared", 0, name)
        table[name] = value

    def declare_group(self, name, spec):
        g = parse_group_spec(spec, self.base_dir)
        self._bind(self.groups, name, g, "group")
        self.group = g
        return g

    def declare_field(self, name, spec):
        f = parse_field_spec(spec)
        self._bind(self.fields, name, f, "field")
        self.field = f
        return f

    def use(self, name):
        if name in self.groups:
            self.group = self.groups[name]
            return self.group
        if name in self.fields:
            self.field = self.fields[name]
            return self.field
        raise UnknownName(f"no group or field named {name!r}", 0, name)

    def evaluate(self, source):
        return evaluate(source, self.group, self.field, self.values, self.budget)

    def let(self, name, source):
        v = self.evaluate(source)
        self._bind(self.values, name, v, "value")
        return v

    def define_ca(self, name, spec):
        tau = self.automaton(spec)
        self._bind(self.automata, name, tau, "automaton")
        return tau

    def automaton(self, spec):
        return parse_ca(spec, self)

    def execute(self, line):
        """Run one declaration line; returns ``(kind, value)`` or ``None`` for other lines."""
        s = line.strip()
        if not s or s.startswith("#"):
            return ("noop", None)
        self.history.append(s)
        m = re.fullmatch(r"(group|field|let|ca)\s+([A-Za-z_][A-Za-z0-9_]*)\s*(?:=\s*|\s+)(.+)", s)
        if m:
            kind, name, rest = m.groups()
            action = {"group": self.declare_group, "field": self.declare_field,
                      "let": self.let, "ca": self.define_ca}[kind]
            return (kind, action(name, rest))
        m = re.fullmatch(r"use\s+([A-Za-z_][A-Za-z0-9_]*)", s)
        if m:
            return ("use", self.use(m.group(1)))
        m = re.fullmatch(r"print\s+(.+)", s)
        if m:
            return ("print", self.evaluate(m.group(1)))
        return None


def parse_ca(spec, session):
    """Automaton from text.

    Forms: a declared automaton name; ``identity``; ``shift g``;
    ``elementary N``; ``rule k=K m=M n=N``; ``psi EXPR`` (matrix or group
    ring element); ``Psi EXPR`` (near-ring element); or rule polynomials
    ``EXPR; EXPR; ...`` optionally followed by ``over ALPHABET``.
    """
    from .groups import MemorySet
    from .sca import (AffineAlphabet, CellularAutomaton, identity_ca, psi_from_matrix,
                      psi_from_nearring, shift_ca)
    from .surjunctivity import elementary_rule, interval_rule

    s = spec.strip()
    if s in session.automata:
        return session.automata[s]
    group = session.group
    if group is None:
        raise UnknownName("no group declared", 0, spec)
    words = s.split(None, 1)
    head = words[0] if words else ""
    rest = words[1] if len(words) > 1 else ""
    try:
        if head == "identity" and not rest:
            return identity_ca(group, AffineAlphabet(session.field))
        if head == "shift":
            g = group(rest.strip())
            return shift_ca(group, AffineAlphabet(session.field), g)
        if head == "elementary":
            return elementary_rule(int(rest), group)
        if head == "rule":
            kv = _kv(rest.split())
            return interval_rule(group, int(kv["k"]), int(kv["m"]), int(kv["n"]))
    except (KeyError, ValueError, DirectFiniteError) as exc:
        if isinstance(exc, ExprError):
            raise
        raise ExprSyntaxError(f"bad automaton specification {s!r}: {exc}", 0, spec) from None
    if head in ("psi", "Psi"):
        offset = spec.index(head) + len(head)
        ev = Evaluator(group, session.field, session.values, rest, session.budget)
        try:
            v = ev.run(parse(rest))
        except ExprError as exc:
            raise type(exc)(exc.message, (exc.pos or 0) + offset + 1, spec) from None
        if head == "psi":
            if not isinstance(v, (GroupRingElem, GroupRingMatrix)):
                raise TypeMismatch("psi needs a group ring element or matrix", offset, spec)
            return psi_from_matrix(v)
        if isinstance(v, FieldElem):
            v = NearRingElem.const(group, session.field, v)
        if not isinstance(v, NearRingElem):
            raise TypeMismatch("Psi needs a near-ring element", offset, spec)
        return psi_from_nearring(v)
    body, alphabet = s, None
    m = re.search(r"\bover\b", s)
    if m:
        body, alpha_text = s[:m.start()], s[m.end():]
    exprs = []
    pos = 0
    for chunk in body.split(";"):
        ev = Evaluator(group, session.field, session.values, chunk, session.budget)
        try:
            v = ev.run(parse(chunk))
        except ExprError as exc:
            raise type(exc)(exc.message, (exc.pos or 0) + pos, spec) from None
        if isinstance(v, FieldElem):
            v = RuleExpr(group, Poly.const(session.field, session.field.coerce(v)))
        if not isinstance(v, RuleExpr):
            raise TypeMismatch(f"rule components must be polynomials in x[g,i], got {_kind(v)}", pos, spec)
        exprs.append(v)
        pos += len(chunk) + 1
    dim = len(exprs)
    if any(e.dim() > dim for e in exprs if e.poly.variables()):
        raise TypeMismatch(f"coordinate index out of range for a {dim}-dimensional alphabet", 0, spec)
    alphabet = parse_alphabet(alpha_text, session.field) if m else AffineAlphabet(session.field, dim)
    if alphabet.dim != dim:
        raise TypeMismatch(f"alphabet has dimension {alphabet.dim} but {dim} rule components", 0, spec)
    variables = sorted({g for e in exprs for g, _ in e.poly.variables()})
    memory = MemorySet(group, variables or [group.identity()])
    return CellularAutomaton.from_polys(group, alphabet, memory, [e.poly for e in exprs])
