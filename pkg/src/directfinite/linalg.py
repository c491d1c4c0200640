"""Exact Gaussian elimination over a field context (raw values)."""
from __future__ import annotations


def rref(field, rows):
    """Reduced row echelon form. Returns ``(matrix, pivot_columns)``; input untouched."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    zero, one = field.zero, field.one
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != zero), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        if inv != one:
            m[r] = [field.mul(inv, x) for x in m[r]]
        piv_row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != zero:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], piv_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(field, rows):
    return len(rref(field, rows)[1])


def solve(field, a, b):
    """One solution ``x`` of ``a x = b`` or ``None``; ``b`` is a vector."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(field, aug)
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, c in zip(m, pivots):
        x[c] = row[n]
    return x


def nullspace(field, a):
    """Basis of ``{x : a x = 0}``."""
    n = len(a[0]) if a else 0
    m, pivots = rref(field, a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for row, c in zip(m, pivots):
            x[c] = field.neg(row[f])
        basis.append(x)
    return basis


def inverse(field, a):
    """Inverse of a square matrix, or ``None`` when singular."""
    n = len(a)
    ident = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    aug = [list(row) + ir for row, ir in zip(a, ident)]
    m, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in m]


def det(field, a):
    m = [list(r) for r in a]
    n = len(m)
    result = field.one
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != field.zero), None)
        if pr is None:
            return field.zero
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            result = field.neg(result)
        result = field.mul(result, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c] != field.zero:
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return result


def matmul(field, a, b):
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = field.zero
            for x, y in zip(row, col):
                if x != field.zero and y != field.zero:
                    acc = field.add(acc, field.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(field, a, v):
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            if x != field.zero and y != field.zero:
                acc = field.add(acc, field.mul(x, y))
        out.append(acc)
    return out


def complement_vector(field, a):
    """A vector outside the column space of ``a``, or ``None`` if it spans everything."""
    nrows = len(a)
    cols = [list(c) for c in zip(*a)] if a and a[0] else []
    r = rank(field, cols) if cols else 0
    if r == nrows:
        return None
    for i in range(nrows):
        e = [field.zero] * nrows
        e[i] = field.one
        if rank(field, cols + [e]) > r:
            return e
    return None  # pragma: no cover
