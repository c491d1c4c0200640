"""Exact coefficient fields: the rationals and finite fields ``GF(p^r)``.

Field contexts do arithmetic on *raw* values: :class:`fractions.Fraction` for
``Q`` and integers ``0 <= v < p^r`` for ``GF(p^r)``, where the base-``p`` digits
of ``v`` are the coefficients of the residue polynomial in the generator ``w``
(lowest degree first).  Polynomials and matrices elsewhere in the package store
raw values and call back into the context; :class:`FieldElem` is the
user-facing wrapper.

Finite fields are built from Conway polynomials whenever the search for one is
affordable, so ``GF(p^r)`` embeds into ``GF(p^s)`` (``r | s``) by
``w_r -> w_s^((p^s-1)/(p^r-1))`` and all embeddings in a tower commute.
Otherwise the lexicographically least irreducible is used and embeddings are
found by root search.
"""
from __future__ import annotations

import itertools
import math
import re
import threading
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

from .errors import ContextMismatch, DivisionByZero, FieldError, WrongCharacteristic

MAX_PRIME = 97
MAX_DEGREE = 12
TABLE_LIMIT = 1 << 16
CONWAY_SEARCH_BUDGET = 50_000


def is_prime(n):
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists, lowest degree first


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(poly, p):
    """Rabin's test for a monic ``poly`` (coefficients lowest first) over ``F_p``."""
    poly = _trim([c % p for c in poly])
    r = len(poly) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p ** r, poly, p) != _pmod(x, poly, p):
        return False
    for ell in factorint(r):
        h = _psub(_ppowmod(x, p ** (r // ell), poly, p), x, p)
        if len(_pgcd(poly, h, p)) != 1:
            return False
    return True


def _is_primitive(poly, p, r):
    q1 = p ** r - 1
    x = [0, 1]
    if _ppowmod(x, q1, poly, p) != [1]:
        return False
    return all(_ppowmod(x, q1 // ell, poly, p) != [1] for ell in factorint(q1))


def _peval_at(poly_small, elem, big_mod, p):
    """Evaluate ``poly_small`` at the residue ``elem`` of ``F_p[x]/big_mod``."""
    acc = []
    for c in reversed(poly_small):
        acc = _pmod(_pmul(acc, elem, p), big_mod, p)
        if c % p:
            acc = _trim(_psub(acc, [(-c) % p], p))
    return acc


@lru_cache(maxsize=None)
def conway_polynomial(p, r):
    """Conway polynomial ``C_{p,r}`` (lowest coefficient first), or ``None``.

    Candidates ``x^r - a_{r-1} x^{r-1} + a_{r-2} x^{r-2} - ...`` are scanned in
    lexicographic order of ``(a_{r-1}, ..., a_0)``; the first primitive one
    whose root has norm-compatible powers with every ``C_{p,m}`` (``m | r``)
    wins.  Returns ``None`` when the scan exceeds the search budget.
    """
    lower = {}
    for m in divisors(r)[:-1]:
        c = conway_polynomial(p, m)
        if c is None:
            return None
        lower[m] = c
    q1 = p ** r - 1
    for count, digits in enumerate(itertools.product(range(p), repeat=r)):
        if count >= CONWAY_SEARCH_BUDGET:
            return None
        # digits = (a_{r-1}, ..., a_0)
        coeffs = [0] * (r + 1)
        coeffs[r] = 1
        for k, a in enumerate(digits):
            i = r - 1 - k
            coeffs[i] = (a if (r - i) % 2 == 0 else -a) % p
        if coeffs[0] == 0:
            continue
        if not _is_primitive(coeffs, p, r):
            continue
        ok = True
        for m, cm in lower.items():
            norm = _ppowmod([0, 1], q1 // (p ** m - 1), coeffs, p)
            if _peval_at(cm, norm, coeffs, p):
                ok = False
                break
        if ok:
            return tuple(coeffs)
    return None


@lru_cache(maxsize=None)
def least_irreducible(p, r):
    for digits in itertools.product(range(p), repeat=r):
        coeffs = list(reversed(digits)) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------
# field contexts


class FieldCtx:
    """Shared interface; concrete classes are :class:`RationalField`, :class:`FiniteField`."""

    characteristic = 0
    degree = None
    order = None

    def elem(self, value):
        return FieldElem(self, self.coerce(value))

    def __call__(self, value):
        if isinstance(value, FieldElem):
            return self.elem(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.elem(value)

    def zero_elem(self):
        return FieldElem(self, self.zero)

    def one_elem(self):
        return FieldElem(self, self.one)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def is_finite(self):
        return self.order is not None


class RationalField(FieldCtx):
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise ContextMismatch(f"{value} is not rational")
            return value.value
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise DivisionByZero("division by zero in Q")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero in Q")
        return a / b

    def pow(self, a, e):
        if e < 0 and not a:
            raise DivisionByZero("division by zero in Q")
        return a ** e

    def format(self, a):
        return str(a)

    def parse(self, text):
        s = text.strip()
        try:
            return FieldElem(self, Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise FieldError(f"not a rational literal: {s!r}") from None

    def random(self, rng, height=3):
        num = rng.randint(-height, height)
        den = rng.randint(1, height)
        return Fraction(num, den)


QQ = RationalField()


class FiniteField(FieldCtx):
    """``GF(p^r) = F_p[w]/(modulus)`` with integer-encoded residues."""

    def __init__(self, p, r=1, modulus=None, check_bounds=True):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if r < 1:
            raise FieldError("extension degree must be >= 1")
        if check_bounds and (p > MAX_PRIME or r > MAX_DEGREE):
            raise FieldError(f"GF({p}^{r}) exceeds the supported bounds p <= {MAX_PRIME}, r <= {MAX_DEGREE}")
        self.conway = False
        if modulus is None:
            modulus = conway_polynomial(p, r)
            self.conway = modulus is not None
            if modulus is None:
                modulus = least_irreducible(p, r)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != r + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree r")
            if not is_irreducible(list(modulus), p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
            self.conway = modulus == conway_polynomial(p, r)
        self.p = p
        self.degree = r
        self.characteristic = p
        self.modulus = tuple(modulus)
        self.order = p ** r
        self.zero = 0
        self.one = 1
        self.name = f"GF({p})" if r == 1 else f"GF({p}^{r})"
        self._tables = None
        self._lock = threading.Lock()
        self._gen = self._encode(_pmod([0, 1], list(self.modulus), p))

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return self.name

    # -- encoding --------------------------------------------------------
    def _decode(self, v):
        p = self.p
        out = []
        while v:
            v, c = divmod(v, p)
            out.append(c)
        return out

    def _encode(self, coeffs):
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c
        return v

    @property
    def generator(self):
        """The residue class of ``w`` (a root of the modulus)."""
        return FieldElem(self, self._gen)

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.field == self:
                return value.value
            return embed(value, self).value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"{value} has no image in {self}")
            return value.numerator * pow(value.denominator, self.p - 2, self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def elements_raw(self):
        return range(self.order)

    def elements(self):
        return [FieldElem(self, v) for v in range(self.order)]

    # -- arithmetic ------------------------------------------------------
    def _build_tables(self):
        with self._lock:
            if self._tables is not None:
                return self._tables
            q = self.order
            exp = [0] * (2 * q)
            log = [0] * q
            g = self._primitive_raw()
            v = 1
            for k in range(q - 1):
                exp[k] = v
                log[v] = k
                v = self._mul_poly(v, g)
            for k in range(q - 1, 2 * q):
                exp[k] = exp[k - (q - 1)]
            zech = [0] * (q - 1)
            for k in range(q - 1):
                s = self._add_digits(exp[k], 1)
                zech[k] = log[s] if s else -1
            self._tables = (exp, log, zech)
            return self._tables

    def _primitive_raw(self):
        q1 = self.order - 1
        primes = list(factorint(q1)) if q1 > 1 else []
        for g in range(1, self.order):
            if all(self._pow_poly(g, q1 // ell) != 1 for ell in primes):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def _add_digits(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        out = 0
        place = 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * place
            place *= p
        return out

    def _mul_poly(self, a, b):
        return self._encode(_pmod(_pmul(self._decode(a), self._decode(b), self.p), self.modulus, self.p))

    def _pow_poly(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def _use_tables(self):
        return self.degree > 1 and self.order <= TABLE_LIMIT

    def add(self, a, b):
        if self.degree == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._use_tables():
            if not a:
                return b
            if not b:
                return a
            exp, log, zech = self._tables or self._build_tables()
            la, lb = log[a], log[b]
            z = zech[(lb - la) % (self.order - 1)]
            if z < 0:
                return 0
            return exp[la + z]
        return self._add_digits(a, b)

    def neg(self, a):
        if self.degree == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        out = 0
        place = 1
        while a:
            a, x = divmod(a, p)
            out += (-x % p) * place
            place *= p
        return out

    def sub(self, a, b):
        if self.degree == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.degree == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._use_tables():
            exp, log, _ = self._tables or self._build_tables()
            return exp[log[a] + log[b]]
        return self._mul_poly(a, b)

    def inv(self, a):
        if not a:
            raise DivisionByZero(f"division by zero in {self}")
        if self.degree == 1:
            return pow(a, self.p - 2, self.p)
        if self._use_tables():
            exp, log, _ = self._tables or self._build_tables()
            return exp[(-log[a]) % (self.order - 1)]
        return self._pow_poly(a, self.order - 2)

    def pow(self, a, e):
        if self.degree == 1:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        if not a:
            if e < 0:
                raise DivisionByZero(f"division by zero in {self}")
            return 1 if e == 0 else 0
        if self._use_tables():
            exp, log, _ = self._tables or self._build_tables()
            return exp[(log[a] * e) % (self.order - 1)]
        if e < 0:
            a, e = self.inv(a), -e
        return self._pow_poly(a, e)

    def frobenius_raw(self, a, times=1):
        return self.pow(a, self.p ** (times % self.degree))

    def subfield_degree_raw(self, a):
        for d in divisors(self.degree):
            if self.pow(a, self.p ** d) == a:
                return d
        raise AssertionError("unreachable")  # pragma: no cover

    # -- text ------------------------------------------------------------
    def format(self, a):
        if self.degree == 1:
            return str(a)
        coeffs = self._decode(a)
        if not coeffs:
            return "0"
        terms = []
        for i in range(len(coeffs) - 1, -1, -1):
            c = coeffs[i]
            if not c:
                continue
            mon = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            else:
                terms.append(f"{c}*{mon}")
        return "+".join(terms)

    def parse(self, text):
        """Parse ``3``, ``w``, ``w^2+2*w+1`` style literals."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("empty field literal")
        acc = 0
        for term in re.split(r"(?=[+-])", s):
            if not term:
                continue
            m = re.fullmatch(r"([+-]?)(?:(\d+)\*?)?(w(?:\^(\d+))?)?", term)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise FieldError(f"bad literal {text!r} for {self}")
            c = int(m.group(2)) if m.group(2) else 1
            if m.group(1) == "-":
                c = -c
            e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
            acc = self.add(acc, self.mul(c % self.p, self.pow(self._gen, e)))
        return FieldElem(self, acc)

    def random(self, rng):
        return rng.randrange(self.order)


_field_cache = {}
_field_lock = threading.Lock()


def GF(q, r=None):
    """Cached constructor: ``GF(4)``, ``GF(2, 2)`` and ``GF(3**2)`` all work."""
    if r is None:
        f = factorint(q)
        if len(f) != 1:
            raise FieldError(f"{q} is not a prime power")
        (p, r), = f.items()
    else:
        p = q
    key = (p, r)
    with _field_lock:
        fld = _field_cache.get(key)
    if fld is None:
        fld = FiniteField(p, r)
        with _field_lock:
            fld = _field_cache.setdefault(key, fld)
    return fld


def parse_field(text):
    """``Q``, ``GF(4)``, ``GF(3^2)``, ``GF(5)``."""
    s = text.replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:GF|F)\((\d+)(?:\^(\d+))?\)", s)
    if not m:
        raise FieldError(f"unknown field {text!r}")
    p = int(m.group(1))
    if m.group(2):
        return GF(p, int(m.group(2)))
    return GF(p)


# ---------------------------------------------------------------------------
# embeddings between levels of a tower


@lru_cache(maxsize=None)
def _embedding_image(src, dst):
    """Raw image of ``src``'s generator in ``dst``."""
    if src.p != dst.p or dst.degree % src.degree:
        raise ContextMismatch(f"{src} does not embed in {dst}")
    if src.conway and dst.conway:
        return dst.pow(dst._gen, (dst.order - 1) // (src.order - 1))
    if dst.order > (1 << 20):
        raise FieldError(f"root search in {dst} is too large")
    mod = src.modulus
    for v in range(dst.order):
        acc = 0
        for c in reversed(mod):
            acc = dst.add(dst.mul(acc, v), c)
        if acc == 0 and (src.degree == 1 or dst.subfield_degree_raw(v) == src.degree):
            return v
    raise FieldError(f"no root of {src} modulus in {dst}")  # pragma: no cover


def embedding_raw(src, dst):
    """Return a function mapping raw ``src`` values to raw ``dst`` values."""
    if src == dst:
        return lambda v: v
    img = _embedding_image(src, dst)
    if src.degree == 1:
        return lambda v: v
    powers = [dst.pow(img, i) for i in range(src.degree)]

    def f(v):
        acc = 0
        for c, pw in zip(src._decode(v), powers):
            if c:
                acc = dst.add(acc, dst.mul(c, pw))
        return acc

    return f


@lru_cache(maxsize=None)
def _preimage_table(sub, big):
    f = embedding_raw(sub, big)
    return {f(v): v for v in range(sub.order)}


def descend_raw(v, big, sub):
    """Raw value in ``sub`` of ``v`` in ``big``; ``None`` if ``v`` is not in the subfield."""
    if big == sub:
        return v
    if big.degree % sub.degree:
        raise ContextMismatch(f"{sub} is not a subfield of {big}")
    if sub.degree == 1:
        return v if v < big.p else None
    return _preimage_table(sub, big).get(v)


def transfer_raw(v, src, dst):
    """Move ``v`` from ``src`` to ``dst`` through their common subfield.

    Returns ``None`` when ``v`` does not lie in ``GF(p^gcd(r, s))``.
    """
    if src == dst:
        return v
    if isinstance(src, RationalField) or isinstance(dst, RationalField) or src.p != dst.p:
        raise ContextMismatch(f"no common subfield of {src} and {dst}")
    if dst.degree % src.degree == 0:
        return embedding_raw(src, dst)(v)
    common = GF(src.p, math.gcd(src.degree, dst.degree))
    w = descend_raw(v, src, common)
    if w is None:
        return None
    return embedding_raw(common, dst)(w)


def embed(a, dst):
    """Embed the element ``a`` into the larger field ``dst``."""
    src = a.field
    if src == dst:
        return a
    if isinstance(src, RationalField) or isinstance(dst, RationalField):
        raise ContextMismatch(f"cannot embed {src} into {dst}")
    return FieldElem(dst, embedding_raw(src, dst)(a.value))


def common_field(f1, f2):
    if f1 == f2:
        return f1
    if isinstance(f1, FiniteField) and isinstance(f2, FiniteField) and f1.p == f2.p:
        if f2.degree % f1.degree == 0:
            return f2
        if f1.degree % f2.degree == 0:
            return f1
    raise ContextMismatch(f"{f1} and {f2} are not in one tower")


# ---------------------------------------------------------------------------
# user-facing elements


class FieldElem:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _lift(self, other):
        if isinstance(other, FieldElem):
            fld = common_field(self.field, other.field)
            return embed(self, fld), embed(other, fld)
        if isinstance(other, (int, Fraction)):
            return self, self.field.elem(other)
        raise TypeError

    def _binop(self, other, op, reflected=False):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        if reflected:
            a, b = b, a
        return FieldElem(a.field, getattr(a.field, op)(a.value, b.value))

    def __add__(self, other):
        return self._binop(other, "add")

    def __radd__(self, other):
        return self._binop(other, "add", True)

    def __sub__(self, other):
        return self._binop(other, "sub")

    def __rsub__(self, other):
        return self._binop(other, "sub", True)

    def __mul__(self, other):
        return self._binop(other, "mul")

    def __rmul__(self, other):
        return self._binop(other, "mul", True)

    def __truediv__(self, other):
        return self._binop(other, "div")

    def __rtruediv__(self, other):
        return self._binop(other, "div", True)

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.value == self.field.zero

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            if self.field == other.field:
                return self.value == other.value
            try:
                a, b = self._lift(other)
            except ContextMismatch:
                return False
            return a.value == b.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field.coerce(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"{self.field}({self})"

    def frobenius(self):
        return frobenius(self)

    def subfield_degree(self):
        return subfield_degree(self)


def _require_finite(a):
    if not isinstance(a.field, FiniteField):
        raise WrongCharacteristic(f"{a.field} has characteristic 0")


def frobenius(a):
    """``a -> a^p``."""
    _require_finite(a)
    return FieldElem(a.field, a.field.pow(a.value, a.field.p))


def subfield_degree(a):
    """Least ``r`` with ``a`` in ``GF(p^r)``, i.e. ``a^(p^r) == a``."""
    _require_finite(a)
    return a.field.subfield_degree_raw(a.value)


def enumerate_points(p, d, n):
    """All points of ``GF(p^d)^n`` grouped by the least level containing them.

    Returns ``{r: [tuple of FieldElem, ...]}`` for every ``r | d``; the level
    of a tuple is the lcm of the subfield degrees of its coordinates.
    """
    if d < 1 or n < 1:
        raise ValueError("depth and dimension must be >= 1")
    fld = GF(p, d)
    deg = [fld.subfield_degree_raw(v) for v in range(fld.order)]
    levels = {r: [] for r in divisors(d)}
    for pt in itertools.product(range(fld.order), repeat=n):
        r = 1
        for v in pt:
            r = r * deg[v] // math.gcd(r, deg[v])
        levels[r].append(tuple(FieldElem(fld, v) for v in pt))
    return levels
