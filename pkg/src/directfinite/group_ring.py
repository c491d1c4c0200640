"""Group rings ``k[G]`` and matrix rings ``Mat_n(k[G])``.

Elements are sparse maps from group elements to raw field coefficients.  For
finite groups, invertibility questions reduce to exact linear algebra on the
regular representation, so they are decided outright; for infinite groups the
right-inverse search solves a linear system on a bounded support window and
reports an inconclusive result as :class:`SearchBudgetExceeded`.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import ContextMismatch, InfiniteGroup, SearchBudgetExceeded
from .fields import FieldElem


class GroupRingElem:
    __slots__ = ("group", "field", "coeffs")

    def __init__(self, group, field, coeffs=None):
        self.group = group
        self.field = field
        zero = field.zero
        self.coeffs = {}
        for g, c in (coeffs or {}).items():
            g = group(g)
            c = field.coerce(c)
            if c != zero:
                self.coeffs[g] = c

    @classmethod
    def _raw(cls, group, field, coeffs):
        obj = cls.__new__(cls)
        obj.group, obj.field, obj.coeffs = group, field, coeffs
        return obj

    @classmethod
    def one(cls, group, field):
        return cls._raw(group, field, {group.identity(): field.one})

    @classmethod
    def zero(cls, group, field):
        return cls._raw(group, field, {})

    @classmethod
    def basis(cls, g, field, coeff=None):
        c = field.one if coeff is None else field.coerce(coeff)
        return cls._raw(g.group, field, {g: c} if c != field.zero else {})

    def support(self):
        return sorted(self.coeffs)

    def coefficient(self, g):
        return FieldElem(self.field, self.coeffs.get(self.group(g), self.field.zero))

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        ident = self.group.identity()
        return len(self.coeffs) == 1 and self.coeffs.get(ident) == self.field.one

    def _check(self, other):
        if self.group != other.group or self.field != other.field:
            raise ContextMismatch("group ring elements over different contexts")

    def _coerce_other(self, other):
        if isinstance(other, GroupRingElem):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElem)) or hasattr(other, "denominator"):
            return GroupRingElem.one(self.group, self.field).scale(self.field.coerce(other))
        return None

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        fld = self.field
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            s = fld.add(out.get(g, fld.zero), c)
            if s == fld.zero:
                out.pop(g, None)
            else:
                out[g] = s
        return GroupRingElem._raw(self.group, fld, out)

    __radd__ = __add__

    def __neg__(self):
        fld = self.field
        return GroupRingElem._raw(self.group, fld, {g: fld.neg(c) for g, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        fld = self.field
        if c == fld.zero:
            return GroupRingElem.zero(self.group, fld)
        return GroupRingElem._raw(self.group, fld, {g: fld.mul(c, x) for g, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupRingElem):
            return gr_mul(self, other)
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return gr_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return gr_mul(other, self)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers are not defined in a group ring")
        result = GroupRingElem.one(self.group, self.field)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, GroupRingElem):
            return self.group == other.group and self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == GroupRingElem.one(self.group, self.field).scale(self.field.coerce(other))
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        terms = " + ".join(f"{self.field.format(self.coeffs[g])}*[{g}]" for g in self.support())
        return f"GroupRingElem({terms or '0'})"


def gr_mul(a, b):
    """Convolution ``(ab)(m) = sum_{hk=m} a(h) b(k)``."""
    a._check(b)
    fld = a.field
    out = {}
    zero = fld.zero
    for h, x in a.coeffs.items():
        for k, y in b.coeffs.items():
            m = h * k
            out[m] = fld.add(out.get(m, zero), fld.mul(x, y))
    return GroupRingElem._raw(a.group, fld, {g: c for g, c in out.items() if c != zero})


class GroupRingMatrix:
    """Square matrix with entries in ``k[G]``; ``n = 1`` is ``k[G]`` itself."""

    __slots__ = ("group", "field", "entries")

    def __init__(self, entries):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("a group ring matrix must be square with n >= 1")
        first = rows[0][0]
        for r in rows:
            for x in r:
                first._check(x)
        self.group, self.field = first.group, first.field
        self.entries = tuple(tuple(r) for r in rows)

    @property
    def n(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def identity(cls, n, group, field):
        one, zero = GroupRingElem.one(group, field), GroupRingElem.zero(group, field)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, a):
        return cls([[a]])

    def is_identity(self):
        return all((self.entries[i][j].is_one() if i == j else self.entries[i][j].is_zero())
                   for i in range(self.n) for j in range(self.n))

    def _check(self, other):
        if self.n != other.n or self.group != other.group or self.field != other.field:
            raise ContextMismatch("matrices of different size or context")

    def __mul__(self, other):
        return mat_mul(self, other)

    def __add__(self, other):
        self._check(other)
        return GroupRingMatrix([[self.entries[i][j] + other.entries[i][j] for j in range(self.n)]
                                for i in range(self.n)])

    def __neg__(self):
        return GroupRingMatrix([[-x for x in row] for row in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def support(self):
        return sorted({g for row in self.entries for x in row for g in x.coeffs})

    def __repr__(self):
        return f"GroupRingMatrix({[list(r) for r in self.entries]})"


def as_matrix(a):
    return a if isinstance(a, GroupRingMatrix) else GroupRingMatrix.scalar(a)


def mat_mul(a, b):
    a._check(b)
    n = a.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = GroupRingElem.zero(a.group, a.field)
            for k in range(n):
                if a.entries[i][k].coeffs and b.entries[k][j].coeffs:
                    acc = acc + gr_mul(a.entries[i][k], b.entries[k][j])
            row.append(acc)
        out.append(row)
    return GroupRingMatrix(out)


def regular_representation(a):
    """Matrix over ``k`` of left multiplication by ``a`` on ``k[G]^n``.

    Basis order is ``(coordinate j, group element g)`` with ``g`` in canonical
    order; column ``(j, g)`` holds the coordinates of ``a . (g e_j)``.
    Returns a list of rows of raw field values, size ``n|G|``.
    """
    a = as_matrix(a)
    G = a.group
    if not G.is_finite():
        raise InfiniteGroup(f"{G} is infinite; no regular representation")
    elems = G.elements()
    pos = {g: k for k, g in enumerate(elems)}
    n, size = a.n, len(elems)
    fld = a.field
    rows = [[fld.zero] * (n * size) for _ in range(n * size)]
    for j in range(n):
        for gi, g in enumerate(elems):
            col = j * size + gi
            for i in range(n):
                for h, c in a.entries[i][j].coeffs.items():
                    rows[i * size + pos[h * g]][col] = fld.add(rows[i * size + pos[h * g]][col], c)
    return rows


def _from_vector(vec, G, field, n):
    elems = G.elements()
    size = len(elems)
    cols = []
    for j in range(n):
        cols.append(GroupRingElem._raw(G, field, {
            g: vec[j * size + k] for k, g in enumerate(elems) if vec[j * size + k] != field.zero}))
    return cols


def find_right_inverse(a, support_radius=None):
    """Find ``b`` with ``ab = 1``.

    Finite ``G``: exact, returns ``None`` when no right inverse exists.
    Infinite ``G``: solves for ``b`` supported on the ball of the given
    radius; raises :class:`SearchBudgetExceeded` when none is found there.
    The returned value has the same shape (element or matrix) as ``a``.
    """
    scalar = not isinstance(a, GroupRingMatrix)
    A = as_matrix(a)
    G, fld, n = A.group, A.field, A.n
    if G.is_finite():
        rep = regular_representation(A)
        size = G.order
        e_pos = G.elements().index(G.identity())
        cols = [[] for _ in range(n)]
        for j in range(n):
            target = [fld.zero] * (n * size)
            target[j * size + e_pos] = fld.one
            x = linalg.solve(fld, rep, target)
            if x is None:
                return None
            for i, elem in enumerate(_from_vector(x, G, fld, n)):
                cols[j].append(elem)
        B = GroupRingMatrix([[cols[j][i] for j in range(n)] for i in range(n)])
        return B.entries[0][0] if scalar else B
    if support_radius is None:
        raise SearchBudgetExceeded(f"{G} is infinite; a support radius is required")
    window = G.ball(support_radius)
    a_supp = A.support()
    targets = sorted({h * w for h in a_supp for w in window} | {G.identity()})
    tpos = {g: k for k, g in enumerate(targets)}
    cols = [[None] * n for _ in range(n)]
    for j in range(n):
        # unknowns: b[k][j](w) for k < n, w in window
        nunk = n * len(window)
        neq = n * len(targets)
        mat = [[fld.zero] * nunk for _ in range(neq)]
        for i in range(n):
            for k in range(n):
                for h, c in A.entries[i][k].coeffs.items():
                    for wi, w in enumerate(window):
                        r = i * len(targets) + tpos[h * w]
                        col = k * len(window) + wi
                        mat[r][col] = fld.add(mat[r][col], c)
        rhs = [fld.zero] * neq
        rhs[j * len(targets) + tpos[G.identity()]] = fld.one
        x = linalg.solve(fld, mat, rhs)
        if x is None:
            raise SearchBudgetExceeded(
                f"no right inverse supported in the radius-{support_radius} ball (inconclusive)")
        for k in range(n):
            cols[k][j] = GroupRingElem._raw(G, fld, {
                w: x[k * len(window) + wi] for wi, w in enumerate(window)
                if x[k * len(window) + wi] != fld.zero})
    B = GroupRingMatrix(cols)
    return B.entries[0][0] if scalar else B


@dataclass(frozen=True)
class DirectFinitenessReport:
    ab_is_one: bool
    ba_is_one: bool

    @property
    def consistent(self):
        """False only for a one-sided inverse that is not two-sided."""
        return self.ab_is_one == self.ba_is_one or not self.ab_is_one

    def as_dict(self):
        return {"ab_is_one": self.ab_is_one, "ba_is_one": self.ba_is_one}


def check_direct_finiteness(a, b):
    A, B = as_matrix(a), as_matrix(b)
    A._check(B)
    return DirectFinitenessReport((A * B).is_identity(), (B * A).is_identity())
