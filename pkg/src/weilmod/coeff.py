"""Exact coefficient arithmetic: cyclotomic integers Z[zeta_{p^k}] with their
fraction field, finite fields F_{l^d} carrying p-power roots of unity, and the
reduction map between them.

Cyclotomic elements are stored as an integer coefficient vector of length
phi(p^k) = p^{k-1}(p-1) over the power basis 1, zeta, ..., zeta^{phi-1},
together with a positive common denominator.  All arithmetic is exact.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd


class RingMismatchError(TypeError):
    """Operands live in different coefficient rings."""


class NotInvertibleError(ZeroDivisionError):
    """Element is not a unit in its ring."""


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Cyclotomic rings
# ---------------------------------------------------------------------------

_CYC_CACHE = {}


class CyclotomicRing:
    """Z[zeta_{p^k}] and its fraction field, p an odd prime, k >= 1."""

    def __new__(cls, p, k=1):
        key = (p, k)
        ring = _CYC_CACHE.get(key)
        if ring is not None:
            return ring
        if not _is_prime(p) or p == 2:
            raise ValueError("p must be an odd prime, got %r" % (p,))
        if k < 1:
            raise ValueError("level k must be >= 1")
        ring = object.__new__(cls)
        ring.p = p
        ring.k = k
        ring.n = p ** k
        ring.phi = p ** (k - 1) * (p - 1)
        _CYC_CACHE[key] = ring
        return ring

    def __repr__(self):
        if self.k == 1:
            return "Z[zeta_%d]" % self.p
        return "Z[zeta_%d^%d]" % (self.p, self.k)

    @property
    def descriptor(self):
        return "cyclo:%d:%d" % (self.p, self.k)

    def _reduce(self, coeffs):
        # fold powers >= phi with zeta^phi = -(1 + zeta^m + ... + zeta^{(p-2)m}),
        # m = p^{k-1}
        phi = self.phi
        m = self.p ** (self.k - 1)
        c = list(coeffs)
        for idx in range(len(c) - 1, phi - 1, -1):
            v = c[idx]
            if v:
                base = idx - phi
                for i in range(self.p - 1):
                    c[base + i * m] -= v
            c[idx] = 0
        del c[phi:]
        while len(c) < phi:
            c.append(0)
        return c

    def element(self, coeffs, den=1):
        c = self._reduce(coeffs)
        return Cyc(self, c, den)

    def zero(self):
        return Cyc(self, [0] * self.phi, 1)

    def one(self):
        return self.from_int(1)

    def from_int(self, v):
        c = [0] * self.phi
        c[0] = v
        return Cyc(self, c, 1)

    def from_fraction(self, q):
        q = Fraction(q)
        c = [0] * self.phi
        c[0] = q.numerator
        return Cyc(self, c, q.denominator)

    def zeta(self):
        return self.zeta_pow(1)

    def zeta_pow(self, e):
        e %= self.n
        c = [0] * (e + 1)
        c[e] = 1
        return self.element(c)

    def root_of_unity(self, order):
        """Element of multiplicative order exactly `order` (a power of p)."""
        if order == 1:
            return self.one()
        j = 0
        o = order
        while o % self.p == 0:
            o //= self.p
            j += 1
        if o != 1 or j > self.k:
            raise NotInvertibleError(
                "no root of order %d in %r" % (order, self))
        return self.zeta_pow(self.p ** (self.k - j))

    def lift_to(self, other):
        """Embedding into Z[zeta_{p^k'}] for k' >= k: zeta -> zeta^(p^(k'-k))."""
        if other.p != self.p or other.k < self.k:
            raise RingMismatchError("cannot lift %r into %r" % (self, other))
        return other

    def coerce(self, x):
        if isinstance(x, Cyc):
            if x.ring is self:
                return x
            if x.ring.p != self.p:
                raise RingMismatchError(
                    "mixed cyclotomic rings %r and %r" % (x.ring, self))
            if x.ring.k > self.k:
                raise RingMismatchError(
                    "cannot coerce level %d into level %d" % (x.ring.k, self.k))
            step = self.p ** (self.k - x.ring.k)
            c = [0] * self.phi
            for i, v in enumerate(x.coeffs):
                if v:
                    c[i * step] += v
            return Cyc(self, self._reduce(c), x.den)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise RingMismatchError("cannot coerce %r into %r" % (x, self))


def common_ring(a, b):
    """The smaller of two cyclotomic rings lifts into the larger."""
    if a is b:
        return a
    if a.p != b.p:
        raise RingMismatchError("mixed primes %d and %d" % (a.p, b.p))
    return a if a.k >= b.k else b


class Cyc:
    """Element of Z[zeta_{p^k}] (den = 1) or its fraction field."""

    __slots__ = ("ring", "coeffs", "den", "_hash", "_inv")

    def __init__(self, ring, coeffs, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coeffs = [-v for v in coeffs]
            den = -den
        g = den
        for v in coeffs:
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            coeffs = [v // g for v in coeffs]
            den //= g
        self.ring = ring
        self.coeffs = tuple(coeffs)
        self.den = den
        self._hash = None
        self._inv = None

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return all(v == 0 for v in self.coeffs)

    def is_integral(self):
        return self.den == 1

    def is_rational(self):
        return all(v == 0 for v in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("%r is not rational" % (self,))
        return Fraction(self.coeffs[0], self.den)

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Cyc):
            if other.ring is self.ring:
                return self, other
            ring = common_ring(self.ring, other.ring)
            return ring.coerce(self), ring.coerce(other)
        if isinstance(other, (int, Fraction)):
            return self, self.ring.coerce(other)
        return self, None

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        da, db = a.den, b.den
        g = gcd(da, db)
        la, lb = db // g, da // g
        c = [x * la + y * lb for x, y in zip(a.coeffs, b.coeffs)]
        return Cyc(a.ring, c, da // g * db)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.ring, [-v for v in self.coeffs], self.den)

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        ca, cb = a.coeffs, b.coeffs
        out = [0] * (2 * len(ca) - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    if y:
                        out[i + j] += x * y
        return Cyc(a.ring, a.ring._reduce(out), a.den * b.den)

    __rmul__ = __mul__

    def inv(self):
        """Exact inverse in the fraction field (linear solve over Q)."""
        if self._inv is not None:
            return self._inv
        if self.is_zero():
            raise NotInvertibleError("zero is not invertible")
        if self.is_rational():
            q = self.as_fraction()
            r = self.ring.from_fraction(1 / q)
            self._inv = r
            return r
        ring = self.ring
        phi = ring.phi
        # columns of M are self * zeta^j in the power basis
        cols = []
        cur = Cyc(ring, list(self.coeffs), 1)
        z = ring.zeta()
        for _ in range(phi):
            cols.append(cur.coeffs)
            cur = cur * z
        m = [[Fraction(cols[j][i]) for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(0)] * phi
        rhs[0] = Fraction(1)
        sol = _solve_fraction(m, rhs)
        if sol is None:
            raise NotInvertibleError("%r is not invertible" % (self,))
        den = 1
        for q in sol:
            den = den * q.denominator // gcd(den, q.denominator)
        coeffs = [int(q * den) for q in sol]
        r = Cyc(ring, coeffs, den) * self.den
        self._inv = r
        return r

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        acc = self.ring.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def galois(self, t):
        """Apply zeta -> zeta^t, gcd(t, p) = 1."""
        ring = self.ring
        if gcd(t, ring.p) != 1:
            raise ValueError("galois exponent must be prime to p")
        c = [0] * (ring.n)
        for i, v in enumerate(self.coeffs):
            if v:
                c[(i * t) % ring.n] += v
        # fold zeta^n = 1 first (indices were taken mod n already), then reduce
        return Cyc(ring, ring._reduce(c), self.den)

    def conj(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        return self.galois(self.ring.n - 1)

    # -- comparisons / misc ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.coerce(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        try:
            a, b = self._pair(other)
        except RingMismatchError:
            return False
        return a.coeffs == b.coeffs and a.den == b.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.coeffs[0], self.den))
            else:
                self._hash = hash((self.ring.p, self.ring.k, self.coeffs,
                                   self.den))
        return self._hash

    def __repr__(self):
        terms = []
        for i, v in enumerate(self.coeffs):
            if v == 0:
                continue
            if i == 0:
                terms.append(str(v))
            elif i == 1:
                terms.append("%d*z" % v)
            else:
                terms.append("%d*z^%d" % (v, i))
        body = " + ".join(terms) if terms else "0"
        if self.den != 1:
            return "(%s)/%d" % (body, self.den)
        return body

    def approx(self):
        """Non-authoritative complex embedding zeta -> exp(2 pi i / p^k)."""
        z = cmath.exp(2j * cmath.pi / self.ring.n)
        acc = 0j
        for i, v in enumerate(self.coeffs):
            if v:
                acc += v * z ** i
        return acc / self.den

    def compress(self):
        """Smallest-level representative of the same value (levels embed by
        zeta_{p^k} = zeta_{p^k'}^{p^{k'-k}}, index-multiples of p^{k'-k})."""
        ring = self.ring
        k = ring.k
        if k == 1:
            return self
        best = self
        for j in range(1, k):
            step = ring.p ** (k - j)
            if all(v == 0 for i, v in enumerate(self.coeffs) if i % step):
                sub = CyclotomicRing(ring.p, j)
                coeffs = [self.coeffs[i * step] for i in range(sub.phi)]
                best = Cyc(sub, coeffs, self.den)
                break
        return best


def _solve_fraction(m, rhs):
    """Gaussian elimination over Fraction; returns None if singular."""
    n = len(m)
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Finite fields F_{l^d}
# ---------------------------------------------------------------------------

# Conway polynomials (coefficients low -> high, monic) for the sizes this
# package actually meets; anything else falls back to the lexicographically
# smallest monic irreducible, which keeps runs reproducible.
_CONWAY = {
    (2, 1): (1, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1), (3, 2): (2, 2, 1), (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1), (5, 2): (2, 4, 1),
    (7, 1): (4, 1), (7, 2): (3, 6, 1),
    (11, 1): (9, 1), (13, 1): (11, 1),
}

_FF_CACHE = {}
_TABLE_CAP = 512


class FiniteField:
    """F_{l^d} with elements encoded as base-l digit integers 0..l^d-1."""

    def __new__(cls, ell, d=1, irred=None):
        key = (cls, ell, d, tuple(irred) if irred else None)
        fld = _FF_CACHE.get(key)
        if fld is not None:
            return fld
        if not _is_prime(ell):
            raise ValueError("characteristic must be prime, got %r" % (ell,))
        fld = object.__new__(cls)
        fld.p = ell
        fld.f = d
        fld.q = ell ** d
        if irred is not None:
            fld.irred = tuple(irred)
            if not fld._poly_is_irreducible(fld.irred):
                raise ValueError("supplied polynomial is not irreducible")
        elif (ell, d) in _CONWAY:
            fld.irred = _CONWAY[(ell, d)]
        else:
            fld.irred = fld._smallest_irreducible()
        fld._mul_table = None
        fld._inv_table = None
        fld._root_cache = {}
        fld._trace_cache = None
        if fld.q <= _TABLE_CAP:
            fld._build_tables()
        _FF_CACHE[key] = fld
        return fld

    # -- construction helpers -------------------------------------------------

    def _digits(self, i):
        out = []
        for _ in range(self.f):
            i, r = divmod(i, self.p)
            out.append(r)
        return out

    def _undigits(self, ds):
        acc = 0
        for v in reversed(ds):
            acc = acc * self.p + (v % self.p)
        return acc

    def _poly_mul_mod(self, a, b):
        p, f = self.p, self.f
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = (out[i + j] + x * y) % p
        # reduce modulo the monic irreducible
        for idx in range(len(out) - 1, f - 1, -1):
            v = out[idx]
            if v:
                for j in range(f):
                    out[idx - f + j] = (out[idx - f + j] - v * self.irred[j]) % p
            out[idx] = 0
        return out[:f]

    def _poly_is_irreducible(self, poly):
        # x^(l^d) == x mod poly and gcd-degree checks via x^(l^(d/r)) != x
        f = self.f
        save = getattr(self, "irred", None)
        self.irred = tuple(poly)
        try:
            def frob(e_times):
                # x^(l^e) mod poly
                cur = [0, 1] + [0] * max(0, f - 2)
                cur = cur[:f] if f > 1 else [0]
                if f == 1:
                    return None
                for _ in range(e_times):
                    acc = cur
                    # raise to l-th power by repeated multiplication
                    res = [1] + [0] * (f - 1)
                    e = self.p
                    base = acc
                    while e:
                        if e & 1:
                            res = self._poly_mul_mod(res, base)
                        base = self._poly_mul_mod(base, base)
                        e >>= 1
                    cur = res
                return cur
            if f == 1:
                return True
            x = [0, 1] + [0] * (f - 2)
            if frob(f) != x:
                return False
            for r in set(_prime_factors(f)):
                if frob(f // r) == x:
                    return False
            return True
        finally:
            if save is not None:
                self.irred = save

    def _smallest_irreducible(self):
        f = self.p ** self.f
        for i in range(self.p ** self.f):
            poly = self._digits(i) + [1]
            # degree must be exactly f (leading coeff appended as 1)
            if self._poly_is_irreducible(tuple(poly)):
                return tuple(poly)
        raise RuntimeError("no irreducible polynomial found")

    def _build_tables(self):
        q, p, f = self.q, self.p, self.f
        mul = [0] * (q * q)
        for i in range(q):
            di = self._digits(i)
            for j in range(i, q):
                v = self._undigits(self._poly_mul_mod(di, self._digits(j)))
                mul[i * q + j] = v
                mul[j * q + i] = v
        self._mul_table = mul
        inv = [0] * q
        for i in range(1, q):
            if inv[i]:
                continue
            for j in range(1, q):
                if mul[i * q + j] == 1:
                    inv[i] = j
                    inv[j] = i
                    break
        self._inv_table = inv

    # -- element ops on raw indices -------------------------------------------

    def add_i(self, i, j):
        if self.f == 1:
            return (i + j) % self.p
        di, dj = self._digits(i), self._digits(j)
        return self._undigits([x + y for x, y in zip(di, dj)])

    def neg_i(self, i):
        if self.f == 1:
            return (-i) % self.p
        return self._undigits([-x for x in self._digits(i)])

    def mul_i(self, i, j):
        if self._mul_table is not None:
            return self._mul_table[i * self.q + j]
        return self._undigits(self._poly_mul_mod(self._digits(i),
                                                 self._digits(j)))

    def inv_i(self, i):
        if i == 0:
            raise NotInvertibleError("zero in %r" % (self,))
        if self._inv_table is not None:
            return self._inv_table[i]
        return self.pow_i(i, self.q - 2)

    def pow_i(self, i, e):
        if i == 0:
            if e == 0:
                return 1
            if e < 0:
                raise NotInvertibleError("zero in %r" % (self,))
            return 0
        e %= self.q - 1
        acc, base = 1, i
        while e:
            if e & 1:
                acc = self.mul_i(acc, base)
            base = self.mul_i(base, base)
            e >>= 1
        return acc

    def trace_i(self, i):
        # absolute trace to F_p
        if self._trace_cache is None:
            self._trace_cache = {}
        t = self._trace_cache.get(i)
        if t is None:
            acc, cur = 0, i
            for _ in range(self.f):
                acc = self.add_i(acc, cur)
                cur = self.pow_i(cur, self.p)
            t = acc % self.p
            self._trace_cache[i] = t
        return t

    # -- public wrapped interface ----------------------------------------------

    def __repr__(self):
        return "F_%d" % self.q if self.f > 1 else "F_%d" % self.p

    @property
    def descriptor(self):
        return "fl:%d:%d" % (self.p, self.f)

    def element(self, i):
        if isinstance(i, FFElt):
            if i.field is not self:
                raise RingMismatchError("element of %r used in %r"
                                        % (i.field, self))
            return i
        return FFElt(self, i % self.p if self.f == 1 else i % self.q)

    def from_int(self, v):
        return FFElt(self, v % self.p)

    def from_coeffs(self, coeffs):
        return FFElt(self, self._undigits(list(coeffs)[:self.f]))

    def zero(self):
        return FFElt(self, 0)

    def one(self):
        return FFElt(self, 1)

    def elements(self):
        return [FFElt(self, i) for i in range(self.q)]

    def units(self):
        return [FFElt(self, i) for i in range(1, self.q)]

    def root_of_unity(self, order):
        """Lexicographically smallest element of multiplicative order `order`."""
        r = self._root_cache.get(order)
        if r is not None:
            return r
        if order < 1 or (self.q - 1) % order != 0:
            raise NotInvertibleError(
                "order %d not available in %r (q-1 = %d)"
                % (order, self, self.q - 1))
        fac = set(_prime_factors(order))
        for i in range(1, self.q):
            if self.pow_i(i, order) != 1:
                continue
            if all(self.pow_i(i, order // r) != 1 for r in fac):
                elt = FFElt(self, i)
                self._root_cache[order] = elt
                return elt
        raise RuntimeError("unreachable: cyclic group has all orders")


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FFElt:
    """Element of a FiniteField, wrapping the digit-encoded index."""

    __slots__ = ("field", "i")

    def __init__(self, field, i):
        self.field = field
        self.i = i

    def _j(self, other):
        if isinstance(other, FFElt):
            if other.field is not self.field:
                raise RingMismatchError("mixed fields %r and %r"
                                        % (self.field, other.field))
            return other.i
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, Fraction):
            if other.denominator % self.field.p == 0:
                raise NotInvertibleError("denominator divisible by l")
            num = other.numerator % self.field.p
            den = pow(other.denominator % self.field.p, -1, self.field.p)
            return (num * den) % self.field.p
        return None

    def __add__(self, other):
        j = self._j(other)
        if j is None:
            return NotImplemented
        return FFElt(self.field, self.field.add_i(self.i, j))

    __radd__ = __add__

    def __neg__(self):
        return FFElt(self.field, self.field.neg_i(self.i))

    def __sub__(self, other):
        j = self._j(other)
        if j is None:
            return NotImplemented
        return FFElt(self.field, self.field.add_i(self.i, self.field.neg_i(j)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        j = self._j(other)
        if j is None:
            return NotImplemented
        return FFElt(self.field, self.field.mul_i(self.i, j))

    __rmul__ = __mul__

    def inv(self):
        return FFElt(self.field, self.field.inv_i(self.i))

    def __truediv__(self, other):
        j = self._j(other)
        if j is None:
            return NotImplemented
        return FFElt(self.field, self.field.mul_i(self.i, self.field.inv_i(j)))

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        return FFElt(self.field, self.field.pow_i(self.i, e))

    def is_zero(self):
        return self.i == 0

    def trace(self):
        return self.field.trace_i(self.i)

    def __eq__(self, other):
        j = self._j(other) if not isinstance(other, FFElt) else (
            other.i if other.field is self.field else None)
        if j is None and not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.i == j

    def __hash__(self):
        return hash((id(self.field), self.i))

    def __repr__(self):
        if self.field.f == 1:
            return "%d" % self.i
        return "ff(%d;%s)" % (self.i, self.field)


# ---------------------------------------------------------------------------
# Reduction Z[zeta_{p^k}] -> F_{l^d}
# ---------------------------------------------------------------------------

class ReductionMap:
    """r_l restricted to Z[zeta_{p^k}] (denominators prime to l allowed)."""

    def __init__(self, ring, field, root=None):
        self.ring = ring
        self.field = field
        if field.p == ring.p:
            raise RingMismatchError("reduction requires l != p")
        if root is None:
            root = field.root_of_unity(ring.n)
        else:
            root = field.element(root)
        # the image of zeta must have order exactly p^k
        if (root ** ring.n) != 1 or (root ** (ring.n // ring.p)) == 1:
            raise ValueError("designated root has wrong order")
        self.root = root
        self._powers = [field.one()]
        for _ in range(ring.phi - 1):
            self._powers.append(self._powers[-1] * root)

    def __call__(self, x):
        x = self.ring.coerce(x)
        if x.den % self.field.p == 0:
            raise NotInvertibleError("denominator divisible by l")
        acc = self.field.zero()
        for i, v in enumerate(x.coeffs):
            if v:
                acc = acc + self._powers[i] * v
        return acc * Fraction(1, x.den)


# ---------------------------------------------------------------------------
# Spec-level conveniences
# ---------------------------------------------------------------------------

def ring_arith(a, b, op):
    """add | mul | inv on coefficient scalars (inv ignores b)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError("unknown op %r" % (op,))


def root_of_unity(ring, order):
    return ring.root_of_unity(order)
