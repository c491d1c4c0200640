"""The near ring ``R(k, G)``.

As an additive group this is the polynomial ring ``k[X_g : g in G]``; the
variables commute.  ``G`` acts by translating variable indices,
``g . X_h = X_{gh}``, and the near-ring product substitutes translates of the
right operand into the left one::

    alpha * beta = sum_u alpha(u) prod_g (g . beta)^u(g)

The product is associative with identity ``X_1`` and distributes over
addition from the left only.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContextMismatch
from .fields import FieldElem
from .poly import DEFAULT_TERM_BUDGET, Poly, mono_degree


class NearRingElem:
    __slots__ = ("group", "poly")

    def __init__(self, group, poly):
        self.group = group
        self.poly = poly

    @property
    def field(self):
        return self.poly.field

    # -- constructors ----------------------------------------------------
    @classmethod
    def X(cls, g, field, exp=1):
        return cls(g.group, Poly.var(field, g, exp))

    @classmethod
    def const(cls, group, field, c):
        return cls(group, Poly.const(field, field.coerce(c)))

    @classmethod
    def identity(cls, group, field):
        """``X_1``, the two-sided identity for the near-ring product."""
        return cls.X(group.identity(), field)

    @classmethod
    def from_terms(cls, group, field, terms):
        """``terms``: iterable of ``(coefficient, {group element: exponent})``."""
        acc = Poly(field)
        for c, mono in terms:
            m = tuple(sorted((group(g), e) for g, e in dict(mono).items() if e))
            acc = acc + Poly(field, {m: field.coerce(c)})
        return cls(group, acc)

    # -- queries ---------------------------------------------------------
    def monomials(self):
        """``{monomial: FieldElem}`` with monomials as ``((g, exp), ...)``."""
        return {m: FieldElem(self.field, c) for m, c in self.poly.terms.items()}

    def degree(self):
        return self.poly.degree()

    def is_zero(self):
        return self.poly.is_zero()

    def is_homogeneous(self, d):
        return all(mono_degree(m) == d for m in self.poly.terms)

    def support(self):
        """Group elements whose variable occurs."""
        return self.poly.variables()

    def _check(self, other):
        if self.group != other.group or self.field != other.field:
            raise ContextMismatch("near-ring elements over different contexts")

    def _lift(self, other):
        if isinstance(other, NearRingElem):
            self._check(other)
            return other
        try:
            return NearRingElem.const(self.group, self.field, other)
        except TypeError:
            return None

    # -- additive group and polynomial product ---------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return NearRingElem(self.group, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return NearRingElem(self.group, -self.poly)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return NearRingElem(self.group, self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Ordinary polynomial product (not the near-ring product)."""
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return NearRingElem(self.group, self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, e):
        return NearRingElem(self.group, self.poly.pow(e))

    def star(self, other, budget=DEFAULT_TERM_BUDGET):
        return star(self, other, budget)

    __matmul__ = star

    def __eq__(self, other):
        if isinstance(other, NearRingElem):
            return self.group == other.group and self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        from .parsing import format_value
        return f"NearRingElem({format_value(self)})"


def act(g, gamma):
    """``g . gamma``: translate every variable index by left multiplication."""
    if g.group != gamma.group:
        raise ContextMismatch(f"{g!r} does not act on R(k, {gamma.group})")
    return NearRingElem(gamma.group, gamma.poly.rename(lambda h: g * h))


def add(alpha, beta):
    return alpha + beta


def neg(alpha):
    return -alpha


def star(alpha, beta, budget=DEFAULT_TERM_BUDGET):
    """Near-ring product: substitute ``X_g -> g . beta`` into ``alpha``.

    The constant monomial contributes its bare coefficient (empty product).
    Raises :class:`TermBlowup` when an intermediate expansion exceeds
    ``budget`` monomials.
    """
    alpha._check(beta)
    translates = {}

    def image(g):
        if g not in translates:
            translates[g] = act(g, beta).poly
        return translates[g]

    return NearRingElem(alpha.group, alpha.poly.substitute(image, budget))


def embed_phi(a):
    """``sum a(g) g -> sum a(g) X_g``, the embedding ``k[G] -> R(k, G)``."""
    terms = {((g, 1),): c for g, c in a.coeffs.items()}
    return NearRingElem(a.group, Poly(a.field, terms))


@dataclass(frozen=True)
class TheoremAReport:
    is_left_inverse: bool   # alpha * beta == X_1
    is_right_inverse: bool  # beta * alpha == X_1

    @property
    def consistent(self):
        return not self.is_left_inverse or self.is_right_inverse

    def as_dict(self):
        return {"is_left_inverse": self.is_left_inverse, "is_right_inverse": self.is_right_inverse}


def verify_theorem_A(alpha, beta, budget=DEFAULT_TERM_BUDGET):
    """Expand both near-ring products and compare them with ``X_1``."""
    one = NearRingElem.identity(alpha.group, alpha.field)
    return TheoremAReport(star(alpha, beta, budget) == one, star(beta, alpha, budget) == one)
