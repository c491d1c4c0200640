"""Sparse commutative multivariate polynomials with raw field coefficients.

Variables are any hashable, totally ordered keys (group elements for the near
ring, ``(group element, coordinate)`` pairs for cellular-automaton rules).  A
monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable; the
empty tuple is the constant monomial.
"""
from __future__ import annotations

from .errors import ContextMismatch, TermBlowup

DEFAULT_TERM_BUDGET = 1_000_000


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m):
    return sum(e for _, e in m)


class Poly:
    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        zero = field.zero
        self.terms = {m: c for m, c in (terms or {}).items() if c != zero}

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, field, c):
        return cls(field, {(): c})

    @classmethod
    def var(cls, field, v, exp=1):
        return cls(field, {((v, exp),): field.one})

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    # -- queries ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        return max((mono_degree(m) for m in self.terms), default=-1)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def constant_term(self):
        return self.terms.get((), self.field.zero)

    def is_constant(self):
        return all(not m for m in self.terms)

    def coefficients(self):
        return list(self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        if self.field != other.field:
            raise ContextMismatch(f"polynomials over {self.field} and {other.field}")

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        self._check(other)
        fld = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = fld.add(out.get(m, fld.zero), c)
            if s == fld.zero:
                out.pop(m, None)
            else:
                out[m] = s
        return Poly._raw(fld, out)

    def __neg__(self):
        fld = self.field
        return Poly._raw(fld, {m: fld.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        fld = self.field
        if c == fld.zero:
            return Poly._raw(fld, {})
        return Poly._raw(fld, {m: fld.mul(c, x) for m, x in self.terms.items()})

    def mul(self, other, budget=DEFAULT_TERM_BUDGET):
        self._check(other)
        fld = self.field
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(a) * len(b) > 50 * budget:
            raise TermBlowup(f"product of {len(a)} and {len(b)} terms exceeds budget {budget}")
        if len(b) == 1:
            (mb, cb), = b.items()
            out = {}
            for ma, ca in a.items():
                c = fld.mul(ca, cb)
                if c != fld.zero:
                    out[mono_mul(ma, mb)] = c
            return Poly._raw(fld, out)
        out = {}
        zero = fld.zero
        add, fmul = fld.add, fld.mul
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                out[m] = add(out.get(m, zero), fmul(ca, cb))
        out = {m: c for m, c in out.items() if c != zero}
        if len(out) > budget:
            raise TermBlowup(f"expansion has {len(out)} terms, budget {budget}")
        return Poly._raw(fld, out)

    __mul__ = mul

    def pow(self, e, budget=DEFAULT_TERM_BUDGET):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, budget)
            e >>= 1
            if e:
                base = base.mul(base, budget)
        return result

    def __pow__(self, e):
        return self.pow(e)

    # -- structural maps -------------------------------------------------
    def substitute(self, mapping, budget=DEFAULT_TERM_BUDGET):
        """Replace each variable ``v`` by ``mapping(v)`` (a Poly) and expand.

        ``mapping`` may be a dict or callable; dict lookups that miss leave
        the variable in place.
        """
        fld = self.field
        get = mapping if callable(mapping) else (
            lambda v: mapping[v] if v in mapping else Poly.var(fld, v))
        images = {}
        powers = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                if v not in images:
                    img = get(v)
                    img._check(self)
                    images[v] = img
                if e == 1:
                    powers[key] = images[v]
                else:
                    powers[key] = power(v, e - 1).mul(images[v], budget)
            return powers[key]

        out = {}
        zero = fld.zero
        for m, c in self.terms.items():
            prod = Poly.const(fld, c)
            for v, e in m:
                prod = prod.mul(power(v, e), budget)
                if not prod.terms:
                    break
            for pm, pc in prod.terms.items():
                out[pm] = fld.add(out.get(pm, zero), pc)
            if len(out) > budget:
                raise TermBlowup(f"substitution exceeded {budget} terms")
        return Poly._raw(fld, {m: c for m, c in out.items() if c != zero})

    def rename(self, fn):
        """Apply a variable-to-variable map (merging variables that collide)."""
        fld = self.field
        out = {}
        for m, c in self.terms.items():
            d = {}
            for v, e in m:
                w = fn(v)
                d[w] = d.get(w, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = fld.add(out.get(key, fld.zero), c)
        return Poly._raw(fld, {m: c for m, c in out.items() if c != fld.zero})

    def map_coefficients(self, fn, field):
        out = {}
        for m, c in self.terms.items():
            x = fn(c)
            if x != field.zero:
                out[m] = x
        return Poly._raw(field, out)

    def evaluate(self, assign):
        """Evaluate with ``assign[v]`` raw values; returns a raw value."""
        fld = self.field
        acc = fld.zero
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = fld.mul(t, fld.pow(assign[v], e) if e > 1 else assign[v])
                if t == fld.zero:
                    break
            acc = fld.add(acc, t)
        return acc

    def reduce_exponents(self, q):
        """Normal form modulo ``x^q - x``: the polynomial as a function on ``GF(q)``."""
        def red(e):
            return (e - 1) % (q - 1) + 1

        fld = self.field
        out = {}
        for m, c in self.terms.items():
            key = tuple((v, red(e)) for v, e in m)
            out[key] = fld.add(out.get(key, fld.zero), c)
        return Poly._raw(fld, {m: c for m, c in out.items() if c != fld.zero})

    def sorted_terms(self, var_key=None):
        """Terms in print order: descending total degree, then variable order."""
        def key(item):
            m = item[0]
            vk = tuple((var_key(v) if var_key else v, -e) for v, e in m)
            return (-mono_degree(m), vk)

        return sorted(self.terms.items(), key=key)

    def __repr__(self):
        parts = []
        for m, c in self.sorted_terms():
            mon = "*".join(f"{v}^{e}" if e > 1 else f"{v}" for v, e in m)
            parts.append(f"{self.field.format(c)}*{mon}" if mon else self.field.format(c))
        return "Poly(" + (" + ".join(parts) or "0") + ")"
