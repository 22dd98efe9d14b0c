"""Small exact linear algebra over any scalars with field operator overloads
(Fraction, FFElt, Cyc).  Matrices are tuples of tuples; vectors are tuples.

Every routine takes `zero`/`one` from a sample scalar via `- x + x` tricks
being unreliable, so callers pass the ambient field adapter `fld` exposing
zero(), one(), element coercion is left to the scalars themselves.
"""

from __future__ import annotations


def mat(rows):
    return tuple(tuple(r) for r in rows)


def identity(fld, n):
    z, o = fld.zero(), fld.one()
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def zeros(fld, n, m):
    z = fld.zero()
    return tuple(tuple(z for _ in range(m)) for _ in range(n))


def mat_mul(a, b):
    bt = tuple(zip(*b))
    out = []
    for row in a:
        out.append(tuple(_dot(row, col) for col in bt))
    return tuple(out)


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def mat_vec(a, v):
    return tuple(_dot(row, v) for row in a)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_neg(a):
    return tuple(tuple(-x for x in r) for r in a)


def mat_scal(c, a):
    return tuple(tuple(c * x for x in r) for r in a)


def transpose(a):
    return tuple(zip(*a))


def _is_zero(x):
    z = x - x
    return x == z


def rref(a):
    """Reduced row echelon form; returns (rref rows as lists, pivot cols)."""
    rows = [list(r) for r in a]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not _is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inv() if hasattr(rows[r][c], "inv") else 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a):
    return len(rref(a)[1])


def nullspace(a, fld):
    """Basis (tuple of vectors) of the right kernel of a."""
    if not a:
        return ()
    rows, pivots = rref(a)
    ncols = len(a[0])
    free = [c for c in range(ncols) if c not in pivots]
    z, o = fld.zero(), fld.one()
    basis = []
    for fc in free:
        v = [z] * ncols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def solve(a, rhs, fld):
    """One solution x of a x = rhs, or None.  rhs is a vector."""
    aug = [list(r) + [rhs[i]] for i, r in enumerate(a)]
    rows, pivots = rref(aug)
    ncols = len(a[0]) if a else 0
    for r in rows:
        if all(_is_zero(v) for v in r[:-1]) and not _is_zero(r[-1]):
            return None
    z = fld.zero()
    x = [z] * ncols
    r = 0
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = rows[r][-1]
    return tuple(x)


def det(a):
    n = len(a)
    rows = [list(r) for r in a]
    sign_flip = False
    acc = None
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not _is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            return rows[0][0] - rows[0][0]
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign_flip = not sign_flip
        pv = rows[c][c]
        acc = pv if acc is None else acc * pv
        inv = pv.inv() if hasattr(pv, "inv") else 1 / pv
        for i in range(c + 1, n):
            if not _is_zero(rows[i][c]):
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return -acc if sign_flip else acc


def mat_inv(a, fld):
    n = len(a)
    aug = [list(r) + list(identity(fld, n)[i]) for i, r in enumerate(a)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix not invertible")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def kron(a, b):
    out = []
    for ra in a:
        for rb in b:
            out.append(tuple(x * y for x in ra for y in rb))
    return tuple(out)


def trace(a):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def column_space_basis(vectors):
    """Subset of the given vectors forming a basis of their span (as rows)."""
    chosen = []
    cur = []
    for v in vectors:
        cur.append(list(v))
        if rank(tuple(tuple(r) for r in cur)) == len(cur):
            chosen.append(tuple(v))
        else:
            cur.pop()
    return chosen


def extend_basis(partial, candidates):
    """Extend an independent family to a larger one using candidate vectors."""
    out = list(partial)
    for v in candidates:
        trial = out + [v]
        if rank(mat(trial)) == len(trial):
            out.append(tuple(v))
    return out


def in_span(vectors, v):
    if not vectors:
        return all(_is_zero(x) for x in v)
    return rank(mat(list(vectors) + [v])) == rank(mat(vectors))
