"""The base field F in both flavors: F_q with q = p^f odd, and Q_p (p odd)
through exact rational representatives.  Additive characters, Haar
conventions and the modulus character live here.

p-adic scalars are plain Fractions; every quantity the package computes from
them depends on finitely many digits, so exact rationals lose nothing.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import (Cyc, CyclotomicRing, FFElt, FiniteField,
                    NotInvertibleError, RingMismatchError)


class FqField(FiniteField):
    """Base field F_q, q = p^f with p odd (char F != 2 throughout)."""

    def __new__(cls, p, f=1, irred=None):
        if p == 2:
            raise ValueError("base fields of characteristic 2 are excluded")
        fld = super().__new__(cls, p, f, irred)
        return fld

    @property
    def descriptor(self):
        return "fq:%d:%d" % (self.p, self.f)

    @property
    def flavor(self):
        return "finite"

    def is_square(self, a):
        a = self.element(a)
        if a.i == 0:
            return True
        return self.pow_i(a.i, (self.q - 1) // 2) == 1

    def nonresidue(self):
        for i in range(2, self.q):
            if not self.is_square(FFElt(self, i)):
                return FFElt(self, i)
        raise RuntimeError("no nonresidue found")

    def half(self):
        return self.from_int(1) / 2


class QpField:
    """Q_p for odd p; elements are exact rationals."""

    _cache = {}

    def __new__(cls, p):
        fld = cls._cache.get(p)
        if fld is not None:
            return fld
        if p == 2:
            raise ValueError("residual characteristic 2 is excluded")
        from .coeff import _is_prime
        if not _is_prime(p):
            raise ValueError("p must be prime")
        fld = object.__new__(cls)
        fld.p = p
        fld._nonres = None
        cls._cache[p] = fld
        return fld

    @property
    def descriptor(self):
        return "qp:%d" % self.p

    @property
    def flavor(self):
        return "padic"

    def __repr__(self):
        return "Q_%d" % self.p

    def element(self, x):
        return Fraction(x)

    def val(self, x):
        """Exact p-adic valuation of a nonzero rational."""
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("valuation of zero")
        v = 0
        n = x.numerator
        while n % self.p == 0:
            n //= self.p
            v += 1
        d = x.denominator
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return v

    def unit_part(self, x):
        """x / p^val(x) as a rational that is a p-adic unit."""
        return Fraction(x) / Fraction(self.p) ** self.val(x)

    def unit_residue(self, x):
        """The residue mod p of the unit part of x."""
        u = self.unit_part(x)
        return (u.numerator * pow(u.denominator, -1, self.p)) % self.p

    def legendre(self, r):
        r %= self.p
        if r == 0:
            return 0
        return 1 if pow(r, (self.p - 1) // 2, self.p) == 1 else -1

    def is_square(self, x):
        x = Fraction(x)
        if x == 0:
            return True
        return self.val(x) % 2 == 0 and self.legendre(self.unit_residue(x)) == 1

    def nonresidue(self):
        """Smallest positive integer nonresidue mod p."""
        if self._nonres is None:
            for u in range(2, self.p):
                if self.legendre(u) == -1:
                    self._nonres = u
                    break
        return self._nonres


def parse_field(desc):
    """Parse "fq:p:f" or "qp:p"."""
    parts = desc.split(":")
    if parts[0] == "fq":
        p = int(parts[1])
        f = int(parts[2]) if len(parts) > 2 else 1
        return FqField(p, f)
    if parts[0] == "qp":
        return QpField(int(parts[1]))
    raise ValueError("bad field descriptor %r" % (desc,))


def frac_part(x, p):
    """(a, n) with x = a/p^n mod Z_p, 0 <= a < p^n and n minimal."""
    x = Fraction(x)
    den = x.denominator
    n = 0
    while den % p == 0:
        den //= p
        n += 1
    if n == 0:
        return 0, 0
    pn = p ** n
    a = (x.numerator * pow(den, -1, pn)) % pn
    # strip p from a if present (keeps n minimal for a = 0 mod p cases)
    while n > 0 and a % p == 0:
        a //= p
        pn //= p
        n -= 1
    return a, n


def modulus(field, x):
    """|x|_F as an exact rational: 1 for finite F, p^{-val(x)} for Q_p."""
    if getattr(field, "flavor", None) == "finite":
        if field.element(x).i == 0:
            raise ZeroDivisionError("modulus of zero")
        return Fraction(1)
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("modulus of zero")
    return Fraction(field.p) ** (-field.val(x))


class AdditiveCharacter:
    """psi: F -> R^x.

    finite flavor: psi(x) = zeta_p^{Tr(c x)} for a twist c in F_q^x.
    p-adic flavor: psi(x) = zeta_{p^n}^{a} for {c x} = a/p^n, the level-0
    character twisted by multiplication with a fixed rational c.
    """

    def __init__(self, field, coeff_ring=None, twist=1):
        self.field = field
        self.flavor = field.flavor
        if self.flavor == "finite":
            self.coeff_ring = coeff_ring or CyclotomicRing(field.p)
            self.twist = field.element(twist)
            if self.twist.i == 0:
                raise ValueError("twist must be nonzero")
            zeta = self.coeff_ring.root_of_unity(field.p)
            self._powers = [self.coeff_ring.one()]
            for _ in range(field.p - 1):
                self._powers.append(self._powers[-1] * zeta)
            t = self.twist.i
            self._table = tuple(
                self._powers[field.trace_i(field.mul_i(t, i))]
                for i in range(field.q))
        else:
            if coeff_ring is not None and not isinstance(coeff_ring,
                                                         CyclotomicRing):
                raise RingMismatchError(
                    "p-adic characters need cyclotomic coefficients")
            self.coeff_ring = coeff_ring or CyclotomicRing(field.p)
            self.twist = Fraction(twist)
            if self.twist == 0:
                raise ValueError("twist must be nonzero")

    @property
    def descriptor(self):
        if self.flavor == "finite":
            return "psi:twist:%d" % self.twist.i if self.twist != 1 \
                else "psi:standard"
        return "psi:level0" if self.twist == 1 else "psi:twist:%s" % self.twist

    def level(self):
        """Conductor exponent: 0 means trivial on Z_p, nontrivial on p^-1 Z_p."""
        if self.flavor == "finite":
            return 1
        return -self.field.val(self.twist)

    def __call__(self, x):
        if self.flavor == "finite":
            return self._table[self.field.element(x).i]
        a, n = frac_part(self.twist * Fraction(x), self.field.p)
        if n == 0:
            return self.coeff_ring.one()
        ring = self.coeff_ring if self.coeff_ring.k >= n else \
            CyclotomicRing(self.field.p, n)
        return ring.root_of_unity(self.field.p ** n) ** a

    def inverse(self):
        """psi^{-1} = psi twisted by -1."""
        if self.flavor == "finite":
            return AdditiveCharacter(self.field, self.coeff_ring,
                                     -self.field.one())
        return AdditiveCharacter(self.field, self.coeff_ring, -self.twist)

    def twisted(self, c):
        if self.flavor == "finite":
            return AdditiveCharacter(self.field, self.coeff_ring,
                                     self.twist * self.field.element(c))
        return AdditiveCharacter(self.field, self.coeff_ring,
                                 self.twist * Fraction(c))


def parse_character(field, desc, coeff_ring=None):
    if desc in (None, "psi:standard", "psi:level0"):
        return AdditiveCharacter(field, coeff_ring)
    if desc.startswith("psi:twist:"):
        raw = desc[len("psi:twist:"):]
        if field.flavor == "finite":
            return AdditiveCharacter(field, coeff_ring, int(raw))
        return AdditiveCharacter(field, coeff_ring, Fraction(raw))
    raise ValueError("bad character descriptor %r" % (desc,))


class HaarConvention:
    """Finite: mass of a point.  p-adic: mass of Z_p^m in quotient coords."""

    def __init__(self, flavor, scale=Fraction(1)):
        self.flavor = flavor
        self.scale = scale

    @classmethod
    def counting(cls):
        return cls("finite", Fraction(1))

    @classmethod
    def standard_padic(cls):
        return cls("padic", Fraction(1))

    @classmethod
    def default_for(cls, field):
        return cls.counting() if field.flavor == "finite" \
            else cls.standard_padic()

    def scaled(self, c):
        return HaarConvention(self.flavor, self.scale * c)
