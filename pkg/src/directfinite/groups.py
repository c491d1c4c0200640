"""Group backends with an exact word problem.

Three backends are supported:

* :class:`FiniteGroup` -- a validated Cayley table over element ids ``0..n-1``;
* :class:`FreeAbelianGroup` -- ``Z^d`` with integer vectors as payloads;
* :class:`FreeGroup` -- reduced words over ``r`` generators.

Elements of any backend are :class:`GroupElement` instances.  Payloads are
always in normal form, so equality and hashing are payload comparisons.  Each
backend defines a canonical total order (ids, lexicographic vectors, shortlex
words) used for deterministic printing and iteration.
"""
from __future__ import annotations

import itertools
import re
from functools import reduce

from .errors import ContextMismatch, GroupAxiomError, UnknownName, Undecidable


class GroupElement:
    __slots__ = ("group", "payload", "_key")

    def __init__(self, group, payload):
        self.group = group
        self.payload = payload
        self._key = group._sort_key(payload)

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group is not self.group and other.group != self.group:
            raise ContextMismatch(f"cannot multiply elements of {self.group} and {other.group}")
        return GroupElement(self.group, self.group._mul(self.payload, other.payload))

    def inverse(self):
        return GroupElement(self.group, self.group._inv(self.payload))

    __invert__ = inverse

    def __pow__(self, n):
        result = self.group.identity()
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def is_identity(self):
        return self.payload == self.group._identity

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.payload == other.payload and (
            self.group is other.group or self.group == other.group)

    def __hash__(self):
        return hash(self.payload)

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __str__(self):
        return self.group.format(self.payload)

    def __repr__(self):
        return f"<{self.group.name}: {self}>"


class GroupCtx:
    """Common interface of the group backends."""

    kind = "abstract"
    name = "G"
    order = None  # None for infinite groups

    def identity(self):
        return GroupElement(self, self._identity)

    def __call__(self, spec):
        """Coerce ``spec`` (text, payload or element) into an element."""
        if isinstance(spec, GroupElement):
            if spec.group != self:
                raise ContextMismatch(f"{spec!r} is not in {self}")
            return spec
        if isinstance(spec, str):
            return self.parse(spec)
        return GroupElement(self, self._normalize(spec))

    def is_finite(self):
        return self.order is not None

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, GroupCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return self.name


class FiniteGroup(GroupCtx):
    """A finite group given by its Cayley table.

    ``table[i][j]`` is the id of the product of elements ``i`` and ``j``.  The
    constructor checks every group axiom instead of trusting the input.
    """

    kind = "finite"

    def __init__(self, table, names=None, name="G"):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupAxiomError("Cayley table must be a non-empty square matrix")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupAxiomError("Cayley table entries must be element ids 0..n-1")
        identity = None
        for e in range(n):
            if table[e] == tuple(range(n)) and all(table[i][e] == i for i in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupAxiomError("Cayley table has no two-sided identity")
        inverses = []
        for i in range(n):
            try:
                j = table[i].index(identity)
            except ValueError:
                raise GroupAxiomError(f"element {i} has no inverse") from None
            if table[j][i] != identity:
                raise GroupAxiomError(f"element {i} has no two-sided inverse")
            inverses.append(j)
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupAxiomError(f"associativity fails at ({a}, {b}, {c})")
        if names is None:
            names = [f"g{i}" for i in range(n)]
        names = [str(s) for s in names]
        if len(names) != n or len(set(names)) != n:
            raise GroupAxiomError("element names must be distinct, one per element")
        for s in names:
            if not s or any(ch in s for ch in "[],{}") or s != s.strip():
                raise GroupAxiomError(f"invalid element name {s!r}")
        self.table = table
        self.names = tuple(names)
        self.order = n
        self.name = name
        self._identity = identity
        self._inverses = tuple(inverses)
        self._lookup = {s: i for i, s in enumerate(names)}

    def _key(self):
        return ("finite", self.table, self.names)

    def _mul(self, a, b):
        return self.table[a][b]

    def _inv(self, a):
        return self._inverses[a]

    def _sort_key(self, a):
        return a

    def _normalize(self, a):
        a = int(a)
        if not 0 <= a < self.order:
            raise ValueError(f"element id {a} out of range for {self}")
        return a

    def elements(self):
        return [GroupElement(self, i) for i in range(self.order)]

    def format(self, a):
        return self.names[a]

    def parse(self, text):
        s = text.strip()
        if s in self._lookup:
            return GroupElement(self, self._lookup[s])
        if s in ("e", "1"):
            return self.identity()
        m = re.fullmatch(r"g(\d+)", s)
        if m and int(m.group(1)) < self.order:
            return GroupElement(self, int(m.group(1)))
        raise UnknownName(f"unknown element {s!r} of {self.name}")

    def is_abelian(self):
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))


class FreeAbelianGroup(GroupCtx):
    """``Z^d`` written additively; payloads are integer tuples."""

    kind = "free_abelian"

    def __init__(self, rank=1, name=None):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self.name = name or ("Z" if rank == 1 else f"Z^{rank}")
        self._identity = (0,) * rank

    def _key(self):
        return ("free_abelian", self.rank)

    def _mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _inv(self, a):
        return tuple(-x for x in a)

    def _sort_key(self, a):
        return a

    def _normalize(self, a):
        if isinstance(a, int):
            a = (a,)
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise ValueError(f"expected a vector of length {self.rank}")
        return a

    def format(self, a):
        if self.rank == 1:
            return str(a[0])
        return "(" + ",".join(str(x) for x in a) + ")"

    def parse(self, text):
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        parts = [p.strip() for p in s.split(",")]
        try:
            vals = tuple(int(p) for p in parts)
        except ValueError:
            raise UnknownName(f"not an element of {self.name}: {text.strip()!r}") from None
        if len(vals) != self.rank:
            raise UnknownName(f"{self.name} elements have {self.rank} coordinates: {text.strip()!r}")
        return GroupElement(self, vals)

    def ball(self, radius):
        """All elements with sup-norm at most ``radius``, in canonical order."""
        rng = range(-radius, radius + 1)
        return [GroupElement(self, v) for v in itertools.product(rng, repeat=self.rank)]


def _default_generators(rank):
    if rank <= 26:
        return [chr(ord("a") + i) for i in range(rank)]
    return [f"x{i}" for i in range(rank)]


class FreeGroup(GroupCtx):
    """Free group on named generators; payloads are reduced words.

    A word is a tuple of ``(generator index, +1 | -1)`` letters with no
    adjacent cancelling pair.
    """

    kind = "free"

    def __init__(self, generators=2, name=None):
        if isinstance(generators, int):
            generators = _default_generators(generators)
        generators = [str(g) for g in generators]
        if not generators or len(set(generators)) != len(generators):
            raise ValueError("generators must be distinct and non-empty")
        for g in generators:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", g) or g in ("e", "X", "x", "w"):
                raise ValueError(f"invalid generator name {g!r}")
        self.generators = tuple(generators)
        self.rank = len(generators)
        self.name = name or f"F{self.rank}"
        self._identity = ()
        self._index = {g: i for i, g in enumerate(generators)}

    def _key(self):
        return ("free", self.generators)

    @staticmethod
    def _reduce_into(word, letters):
        word = list(word)
        for g, e in letters:
            if word and word[-1][0] == g and word[-1][1] == -e:
                word.pop()
            else:
                word.append((g, e))
        return tuple(word)

    def _mul(self, a, b):
        return self._reduce_into(a, b)

    def _inv(self, a):
        return tuple((g, -e) for g, e in reversed(a))

    def _sort_key(self, a):
        return (len(a), tuple(2 * g + (e < 0) for g, e in a))

    def _normalize(self, a):
        return self._reduce_into((), ((int(g), 1 if e > 0 else -1) for g, e in a))

    def gens(self):
        return [GroupElement(self, ((i, 1),)) for i in range(self.rank)]

    def format(self, a):
        if not a:
            return "1"
        parts = []
        for (g, e), run in itertools.groupby(a):
            k = len(list(run)) * e
            name = self.generators[g]
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def parse(self, text):
        s = text.strip()
        if s in ("1", "e", ""):
            if s == "":
                raise UnknownName("empty group element")
            return self.identity()
        letters = []
        for factor in s.split("*"):
            m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*", factor)
            if not m or m.group(1) not in self._index:
                raise UnknownName(f"not a word in {self.name}: {s!r}")
            k = int(m.group(2)) if m.group(2) else 1
            if abs(k) > 10_000:
                raise UnknownName(f"exponent too large in {s!r}")
            g = self._index[m.group(1)]
            letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
        return GroupElement(self, self._reduce_into((), letters))

    def ball(self, radius):
        """All reduced words of length at most ``radius``, shortlex ordered."""
        out = [()]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for g in range(self.rank):
                    for e in (1, -1):
                        if w and w[-1] == (g, -e):
                            continue
                        nxt.append(w + ((g, e),))
            out.extend(nxt)
            frontier = nxt
        return sorted((GroupElement(self, w) for w in out))


# ---------------------------------------------------------------------------
# finite presets


def cyclic(n, name=None):
    """``C_n = <a>`` with element names ``e, a, a^2, ...``."""
    names = ["e"] + ["a"] + [f"a^{k}" for k in range(2, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, names[:n], name=name or f"C{n}")


def _from_permutations(perms, names, name):
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(len(q)))] for q in perms] for p in perms]
    return FiniteGroup(table, names, name=name)


def symmetric(n=3, name=None):
    """Symmetric group on ``n`` points, composition ``(pq)(k) = p(q(k))``."""
    perms = sorted(itertools.permutations(range(n)))
    names = []
    for p in perms:
        cycles = []
        seen = set()
        for k in range(n):
            if k in seen or p[k] == k:
                continue
            cyc = [k]
            seen.add(k)
            j = p[k]
            while j != k:
                cyc.append(j)
                seen.add(j)
                j = p[j]
            cycles.append("(" + "".join(str(c + 1) for c in cyc) + ")")
        names.append("".join(cycles) or "e")
    return _from_permutations(perms, names, name or f"S{n}")


def dihedral(n, name=None):
    """Dihedral group of order ``2n``: ``r^k`` and ``s r^k``."""
    elems = [(f, k) for f in (0, 1) for k in range(n)]

    def mul(x, y):
        f1, k1 = x
        f2, k2 = y
        return ((f1 + f2) % 2, ((-k1 if f2 else k1) + k2) % n)

    index = {x: i for i, x in enumerate(elems)}
    table = [[index[mul(x, y)] for y in elems] for x in elems]
    names = ["e" if (f, k) == (0, 0) else ("s" if f else "") + (f"r^{k}" if k > 1 else "r" if k else "")
             for f, k in elems]
    return FiniteGroup(table, names, name=name or f"D{n}")


def quaternion(name="Q8"):
    """Quaternion group ``{+-1, +-i, +-j, +-k}``."""
    units = ["1", "i", "j", "k"]
    prod = {("1", u): (1, u) for u in units}
    prod.update({(u, "1"): (1, u) for u in units})
    prod.update({(u, u): (-1, "1") for u in "ijk"})
    prod.update({("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {x: i for i, x in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = prod[(u1, u2)]
            row.append(index[(s * s1 * s2, u)])
        table.append(row)
    names = [("" if s > 0 else "-") + u for s, u in elems]
    return FiniteGroup(table, names, name=name)


def integers():
    return FreeAbelianGroup(1)


def quotient_map(group, modulus):
    """The reduction ``Z -> C_n``; returns ``(C_n, map)``."""
    if not isinstance(group, FreeAbelianGroup) or group.rank != 1:
        raise Undecidable("finite quotients are provided for Z only")
    target = cyclic(modulus, name=f"Z/{modulus}")
    return target, lambda g: GroupElement(target, g.payload[0] % modulus)


# ---------------------------------------------------------------------------
# memory sets


class MemorySet:
    """A finite set of group elements kept in canonical order."""

    __slots__ = ("group", "elements")

    def __init__(self, group, elements=()):
        elems = []
        for g in elements:
            g = group(g)
            elems.append(g)
        self.group = group
        self.elements = tuple(sorted(set(elems)))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, MemorySet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __le__(self, other):
        return set(self.elements) <= set(other.elements)

    def __or__(self, other):
        _check_same(self, other)
        return MemorySet(self.group, self.elements + other.elements)

    def __mul__(self, other):
        return product_set(self, other)

    def index(self, g):
        return self.elements.index(g)

    def inverse(self):
        return MemorySet(self.group, [g.inverse() for g in self.elements])

    def translate(self, g):
        return MemorySet(self.group, [g * h for h in self.elements])

    def __repr__(self):
        return "{" + ", ".join(str(g) for g in self.elements) + "}"


def _check_same(m1, m2):
    if m1.group != m2.group:
        raise ContextMismatch(f"memory sets over {m1.group} and {m2.group}")


def product_set(m1, m2):
    """``{ab : a in m1, b in m2}``, deduplicated and canonically ordered."""
    _check_same(m1, m2)
    return MemorySet(m1.group, [a * b for a in m1 for b in m2])


def symmetrize(m):
    """``M u M^-1 u {1}``."""
    ident = m.group.identity()
    return MemorySet(m.group, list(m) + [g.inverse() for g in m] + [ident])


def common_memory(*sets):
    """Smallest symmetric set containing every given memory set and ``1``."""
    return symmetrize(reduce(lambda a, b: a | b, sets))
