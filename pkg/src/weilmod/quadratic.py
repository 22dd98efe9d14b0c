"""Quadratic forms over the base field: radicals, diagonalization, square
classes, Hilbert symbols and Hasse invariants.

A form is Q(x) = x^T G x for a symmetric Gram matrix G; the associated
bilinear form is B(x, y) = Q(x+y) - Q(x) - Q(y) = 2 x^T G y.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .basefield import QpField


class SquareClass:
    """Canonical square class: finite {1, nu}; Q_p {1, u0, p, u0*p}."""

    __slots__ = ("field", "tag", "rep")

    def __init__(self, field, tag, rep):
        self.field = field
        self.tag = tag
        self.rep = rep

    def __eq__(self, other):
        return (isinstance(other, SquareClass) and self.field is other.field
                and self.tag == other.tag)

    def __hash__(self):
        return hash((id(self.field), self.tag))

    def __repr__(self):
        return self.tag

    def __mul__(self, other):
        return square_class(self.field, self.rep * other.rep)


def square_class(field, a):
    """Canonical representative of a mod squares."""
    if field.flavor == "finite":
        a = field.element(a)
        if a.i == 0:
            raise ZeroDivisionError("square class of zero")
        if field.is_square(a):
            return SquareClass(field, "1", field.one())
        return SquareClass(field, "nu", field.nonresidue())
    a = Fraction(a)
    if a == 0:
        raise ZeroDivisionError("square class of zero")
    v = field.val(a) % 2
    res = field.legendre(field.unit_residue(a))
    u0 = field.nonresidue()
    if v == 0 and res == 1:
        return SquareClass(field, "1", Fraction(1))
    if v == 0:
        return SquareClass(field, "u0", Fraction(u0))
    if res == 1:
        return SquareClass(field, "p", Fraction(field.p))
    return SquareClass(field, "u0p", Fraction(u0 * field.p))


def hilbert(field, a, b):
    """The quadratic Hilbert symbol (a,b)_F in {+1, -1}."""
    if field.flavor == "finite":
        if field.element(a).i == 0 or field.element(b).i == 0:
            raise ZeroDivisionError("Hilbert symbol needs nonzero arguments")
        return 1
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroDivisionError("Hilbert symbol needs nonzero arguments")
    al, be = field.val(a), field.val(b)
    u, v = field.unit_residue(a), field.unit_residue(b)
    s = 1
    if be % 2:
        s *= field.legendre(u)
    if al % 2:
        s *= field.legendre(v)
    if (al % 2) and (be % 2):
        s *= field.legendre(-1)
    return s


def hilbert_oracle(field, a, b):
    """Ground-truth symbol: does z^2 = a x^2 + b y^2 have a nontrivial
    Q_p-solution?  Decided by valuation descent on the diagonal ternary form
    (a, b, -1); quadratic-residue facts come from enumerated square sets."""
    if not isinstance(field, QpField):
        return 1
    return 1 if _ternary_isotropic(field, [Fraction(a), Fraction(b),
                                           Fraction(-1)]) else -1


def _squares_mod_p(p):
    return {(k * k) % p for k in range(1, p)}


def _ternary_isotropic(field, coeffs):
    p = field.p
    # strip square factors so every valuation is 0 or 1
    cs = []
    for c in coeffs:
        v = field.val(c)
        cs.append(field.unit_part(c) * (p if v % 2 else 1))
    sq = _squares_mod_p(p)
    units = [i for i, c in enumerate(cs) if field.val(c) == 0]
    prms = [i for i, c in enumerate(cs) if field.val(c) == 1]
    if len(units) == 0:
        # divide everything by p: all become units
        return _ternary_isotropic(field, [c / p for c in cs])
    if len(units) == 3:
        # a nondegenerate ternary form over F_p is isotropic, and some
        # nonsingular zero exists since p is odd
        return True
    if len(units) == 2:
        i, j = units
        r = (-field.unit_residue(cs[i]) * field.unit_residue(cs[j])) % p
        if r in sq:
            return True
        # otherwise x_i = x_j = 0 mod p forces the remaining variable to
        # vanish too: no primitive solution
        return False
    # one unit, two entries of valuation 1: the unit variable is 0 mod p;
    # substitute and divide by p, swapping the roles
    k = units[0]
    i, j = prms
    return _ternary_isotropic(field, [cs[i] / p, cs[j] / p, cs[k] * p])


class QuadraticForm:
    """Symmetric Gram matrix over F with cached invariants."""

    def __init__(self, field, gram):
        self.field = field
        g = linalg.mat([[field.element(x) for x in row] for row in gram])
        n = len(g)
        for row in g:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = g
        self.m = n
        self._radical = None
        self._diag = None

    def __repr__(self):
        return "QuadraticForm(%r, dim %d)" % (self.field, self.m)

    def _scalars(self):
        return _FieldScalars(self.field)

    def evaluate(self, x):
        x = tuple(self.field.element(v) for v in x)
        return linalg._dot(x, linalg.mat_vec(self.gram, x))

    def bilinear(self, x, y):
        """B(x,y) = Q(x+y) - Q(x) - Q(y) = 2 x^T G y."""
        x = tuple(self.field.element(v) for v in x)
        y = tuple(self.field.element(v) for v in y)
        return 2 * linalg._dot(x, linalg.mat_vec(self.gram, y))

    def radical(self):
        """Basis of rad(Q) = ker(G)."""
        if self._radical is None:
            self._radical = linalg.nullspace(self.gram, self._scalars())
        return self._radical

    def is_nondegenerate(self):
        return len(self.radical()) == 0

    def nondegenerate_part(self):
        """(complement basis C, induced Gram C^T G C) on X/rad(Q)."""
        fld = self._scalars()
        rad = self.radical()
        std = list(linalg.identity(fld, self.m))
        comp = []
        cur = [list(v) for v in rad]
        for e in std:
            cur.append(list(e))
            if linalg.rank(linalg.mat(cur)) == len(cur):
                comp.append(e)
            else:
                cur.pop()
        c = linalg.transpose(linalg.mat(comp))  # columns are the basis
        gc = linalg.mat_mul(linalg.mat_mul(linalg.transpose(c), self.gram), c)
        return linalg.mat(comp), gc

    def diagonalize(self, order=None):
        """(basis vectors b_1..b_r, entries a_i = Q(b_i)) of the
        nondegenerate part.  `order="reverse"` flips the pivot preference,
        giving an independent diagonalization for invariance tests."""
        if order is None and self._diag is not None:
            return self._diag
        comp, gc = self.nondegenerate_part()
        fld = self._scalars()
        r = len(gc)
        basis = list(linalg.identity(fld, r))
        out_vecs, out_vals = [], []
        remaining = basis
        while remaining:
            n = len(remaining)

            def qval(v):
                return linalg._dot(v, linalg.mat_vec(gc, v))

            def bval(u, v):
                return linalg._dot(u, linalg.mat_vec(gc, v))

            idxs = list(range(n))
            if order == "reverse":
                idxs = idxs[::-1]
            piv = None
            for i in idxs:
                if not _zero(qval(remaining[i])):
                    piv = remaining[i]
                    break
            if piv is None:
                # all Q(v_i) = 0: some cross term is nonzero (char != 2)
                found = False
                for i in range(n):
                    for j in range(i + 1, n):
                        if not _zero(bval(remaining[i], remaining[j])):
                            piv = tuple(x + y for x, y in
                                        zip(remaining[i], remaining[j]))
                            found = True
                            break
                    if found:
                        break
                if piv is None:
                    raise RuntimeError("degenerate block in diagonalization")
            a = qval(piv)
            out_vecs.append(piv)
            out_vals.append(a)
            inv_a = a.inv() if hasattr(a, "inv") else 1 / a
            new_rem = []
            for v in remaining:
                c = bval(piv, v) * inv_a
                w = tuple(x - c * y for x, y in zip(v, piv))
                new_rem.append(w)
            # keep an independent subset
            new_rem = [w for w in new_rem if not all(_zero(x) for x in w)]
            indep = []
            acc = []
            for w in new_rem:
                acc.append(list(w))
                if linalg.rank(linalg.mat(acc)) == len(acc):
                    indep.append(w)
                else:
                    acc.pop()
            remaining = indep
        # pull the quotient vectors back to the ambient space
        amb = []
        for v in out_vecs:
            w = [self.field.element(0)] * self.m
            for c, row in zip(v, comp):
                for t in range(self.m):
                    w[t] = w[t] + c * row[t]
            amb.append(tuple(w))
        result = (tuple(amb), tuple(out_vals))
        if order is None:
            self._diag = result
        return result

    def det_square_class(self):
        _, vals = self.diagonalize()
        prod = self.field.element(1)
        for a in vals:
            prod = prod * a
        return square_class(self.field, prod)

    def hasse(self, order=None):
        _, vals = self.diagonalize(order)
        s = 1
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                s *= hilbert(self.field, vals[i], vals[j])
        return s


def _zero(x):
    return x == x - x


class _FieldScalars:
    """zero()/one() adapter for linalg over a base field."""

    def __init__(self, field):
        self.field = field

    def zero(self):
        return self.field.element(0)

    def one(self):
        return self.field.element(1)


def radical(q):
    return q.radical()


def diagonalize(q):
    return q.diagonalize()


def hasse(q):
    return q.hasse()
