"""p-adic function models at desk scale: finite sums of quadratic-phase
decorated coset indicators on Q_p, closed under the Heisenberg action, the
P(X)-action and the normalized Fourier element, which yields the full
operator-level section of SL_2(Q) on the Schrödinger model.

A term (c, a, n, q, l) is the function  y -> c psi(q (y-a)^2 + l (y-a))  on
a + p^n Z_p and 0 elsewhere; psi is the level-0 character.  All centers and
phases are exact rationals, all coefficients exact cyclotomics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .basefield import AdditiveCharacter, QpField
from .coeff import CyclotomicRing
from .weilfactor import omega1_padic, omega_ratio


class UnsupportedInputError(ValueError):
    """Input outside the supported (diagonal, m = 1 per factor) class."""


class PhaseTerm(NamedTuple):
    coeff: object      # cyclotomic coefficient
    center: Fraction
    depth: int
    quad: Fraction
    lin: Fraction


def _center_rep(p, a, n):
    """Canonical representative of a + p^n Z_p."""
    a = Fraction(a)
    if a == 0:
        return a
    k = max(0, -QpField(p).val(a))
    if n + k <= 0:
        return Fraction(0)
    mod = p ** (n + k)
    # write a = u / p^k with u having denominator prime to p
    u = a * p ** k
    c = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(c, p ** k)


def _val_den(p, a):
    v = 0
    d = Fraction(a).denominator
    while d % p == 0:
        d //= p
        v += 1
    return -v


def _mod_reduce(p, x, e):
    """Canonical representative of x + p^e Z_p (phases only matter there)."""
    return _center_rep(p, x, e)


class PhaseStepFunction:
    """Finite sum of phase-decorated coset indicators on Q_p^m; m >= 2 only
    as pure products with diagonal data (each term a tuple of 1-dim terms)."""

    def __init__(self, p, terms, m=1):
        self.p = p
        self.m = m
        self.psi = AdditiveCharacter(QpField(p))
        if m == 1:
            self.terms = tuple(self._canon_term(t) for t in terms
                               if not _is_zero_coeff(t.coeff))
        else:
            self.terms = tuple(terms)

    @classmethod
    def indicator(cls, p, center=0, depth=0, m=1):
        one = CyclotomicRing(p).one()
        if m == 1:
            return cls(p, [PhaseTerm(one, Fraction(center), depth,
                                     Fraction(0), Fraction(0))])
        t = tuple(PhaseTerm(one, Fraction(center), depth, Fraction(0),
                            Fraction(0)) for _ in range(m))
        return cls(p, [t], m=m)

    def _canon_term(self, t):
        p = self.p
        a = _center_rep(p, t.center, t.depth)
        coeff = t.coeff
        if a != t.center:
            d = a - t.center
            # rewrite phases around the canonical center
            const = t.quad * d * d + t.lin * d
            lin = t.lin + 2 * t.quad * d
            coeff = coeff * self.psi(const)
        else:
            lin = t.lin
        quad = _mod_reduce(p, t.quad, -2 * t.depth)
        lin = _mod_reduce(p, lin, -t.depth)
        return PhaseTerm(coeff, a, t.depth, quad, lin)

    def canonical(self):
        if self.m != 1:
            return self
        merged = {}
        for t in self.terms:
            key = (t.center, t.depth, t.quad, t.lin)
            if key in merged:
                merged[key] = merged[key] + t.coeff
            else:
                merged[key] = t.coeff
        terms = [PhaseTerm(c, k[0], k[1], k[2], k[3])
                 for k, c in sorted(merged.items(),
                                    key=lambda kv: (kv[0][1], str(kv[0][0]),
                                                    str(kv[0][2]),
                                                    str(kv[0][3])))
                 if not _is_zero_coeff(c)]
        return PhaseStepFunction(self.p, terms)

    def eval(self, y):
        if self.m != 1:
            return self._eval_product(y)
        y = Fraction(y)
        acc = None
        p = self.p
        for t in self.terms:
            d = y - t.center
            if d != 0 and QpField(p).val(d) < t.depth:
                continue
            v = t.coeff * self.psi(t.quad * d * d + t.lin * d)
            acc = v if acc is None else acc + v
        if acc is None:
            return CyclotomicRing(p).zero()
        return acc

    def _eval_product(self, ys):
        acc = None
        for term in self.terms:
            prod = None
            dead = False
            for t, y in zip(term, ys):
                f1 = PhaseStepFunction(self.p, [t])
                v = f1.eval(y)
                if v.is_zero():
                    dead = True
                    break
                prod = v if prod is None else prod * v
            if dead:
                continue
            acc = prod if acc is None else acc + prod
        if acc is None:
            return CyclotomicRing(self.p).zero()
        return acc

    def scaled(self, c):
        if self.m != 1:
            return PhaseStepFunction(
                self.p, [(t[0]._replace(coeff=c * t[0].coeff),) + t[1:]
                         for t in self.terms], m=self.m)
        return PhaseStepFunction(
            self.p, [t._replace(coeff=c * t.coeff) for t in self.terms])

    def __add__(self, other):
        if self.p != other.p or self.m != other.m:
            raise UnsupportedInputError("mismatched function spaces")
        return PhaseStepFunction(self.p, self.terms + other.terms, m=self.m)

    def __repr__(self):
        return "PhaseStep(p=%d, %d terms)" % (self.p, len(self.terms))

    # -- group actions (m = 1) ------------------------------------------------

    def act_heisenberg(self, u, v, t):
        """rho((u e + v f, t)): y -> psi(-u y - u v/2 + t) f(y + v)."""
        if self.m != 1:
            return self._act_heisenberg_product(u, v, t)
        p = self.p
        u, v, t = Fraction(u), Fraction(v), Fraction(t)
        out = []
        for tm in self.terms:
            a1 = tm.center - v
            coeff = tm.coeff * self.psi(-u * a1 - u * v / 2 + t)
            out.append(PhaseTerm(coeff, a1, tm.depth, tm.quad, tm.lin - u))
        return PhaseStepFunction(p, out)

    def _act_heisenberg_product(self, us, vs, t):
        terms = []
        psi = self.psi
        for term in self.terms:
            parts = []
            scalar = psi(Fraction(t))
            for tm, u, v in zip(term, us, vs):
                f1 = PhaseStepFunction(self.p, [tm]).act_heisenberg(u, v, 0)
                if not f1.terms:
                    parts = None
                    break
                parts.append(f1.terms[0])
            if parts is None:
                continue
            parts[0] = parts[0]._replace(coeff=scalar * parts[0].coeff)
            terms.append(tuple(parts))
        return PhaseStepFunction(self.p, terms, m=self.m)

    def act_parabolic(self, a, b):
        """I_p for p = [[a, b],[0, 1/a]]: y -> psi((a b/2) y^2) f(a y)."""
        if self.m != 1:
            raise UnsupportedInputError(
                "general parabolic action only at m = 1; use diagonal tensor")
        p = self.p
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            raise UnsupportedInputError("parabolic block must be invertible")
        va = QpField(p).val(a)
        out = []
        for tm in self.terms:
            c1 = tm.center / a
            d1 = tm.depth - va
            # phases: quad (ay - c)^2 = quad a^2 (y - c1)^2; lin a (y - c1)
            quad = tm.quad * a * a
            lin = tm.lin * a
            # extra (ab/2) y^2 recentred at c1
            e2 = a * b / 2
            quad2 = quad + e2
            lin2 = lin + 2 * e2 * c1
            const = e2 * c1 * c1
            out.append(PhaseTerm(tm.coeff * self.psi(const), c1, d1,
                                 quad2, lin2))
        return PhaseStepFunction(p, out)

    def act_fourier(self):
        """sigma(w) for w = [[0,-1],[1,0]] (m = 1) or the per-coordinate
        Fourier on a product function via act_fourier_subset."""
        if self.m != 1:
            return self.act_fourier_subset(tuple(range(self.m)))
        return sigma_padic_matrix(self.p, ((Fraction(0), Fraction(-1)),
                                           (Fraction(1), Fraction(0))))(self)

    def act_fourier_subset(self, subset):
        if self.m == 1:
            if tuple(subset) != (0,):
                raise UnsupportedInputError("bad subset for m = 1")
            return self.act_fourier()
        terms = []
        w = sigma_padic_matrix(self.p, ((Fraction(0), Fraction(-1)),
                                        (Fraction(1), Fraction(0))))
        for term in self.terms:
            parts = []
            scalar = None
            for i, tm in enumerate(term):
                f1 = PhaseStepFunction(self.p, [tm])
                if i in subset:
                    f1 = w(f1)
                if len(f1.terms) != 1:
                    raise UnsupportedInputError(
                        "non-product output in tensor Fourier")
                parts.append(f1.terms[0])
            terms.append(tuple(parts))
        return PhaseStepFunction(self.p, terms, m=self.m)

    # -- exact equality by refinement -----------------------------------------

    def _needed_depth(self):
        """Refinement depth making every term constant on each sub-ball."""
        d = 0
        p = self.p
        fld = QpField(p)
        for t in self.terms:
            d = max(d, t.depth)
            if t.quad != 0:
                vq = fld.val(t.quad)
                d = max(d, (-vq + 1) // 2, -vq - t.depth)
            if t.lin != 0:
                d = max(d, -fld.val(t.lin))
        return d

    def value_table(self, depth, cap=200000):
        """dict sub-ball-center -> constant value at refinement `depth`;
        requires depth >= self._needed_depth()."""
        p = self.p
        table = {}
        for t in self.terms:
            k = depth - t.depth
            if k < 0:
                raise UnsupportedInputError("refinement coarser than support")
            if p ** k * len(self.terms) > cap:
                raise UnsupportedInputError("refinement too large")
            step = Fraction(p) ** t.depth
            for i in range(p ** k):
                c = _center_rep(p, t.center + i * step, depth)
                d = c - t.center
                v = t.coeff * self.psi(t.quad * d * d + t.lin * d)
                table[c] = table.get(c, CyclotomicRing(p).zero()) + v
        return {c: v for c, v in table.items() if not v.is_zero()}

    def equals(self, other):
        if self.m != 1 or other.m != 1:
            raise UnsupportedInputError("refinement equality only at m = 1")
        a = self.canonical()
        b = other.canonical()
        if a.terms == b.terms:
            return True
        d = max(a._needed_depth(), b._needed_depth())
        return a.value_table(d) == b.value_table(d)

    def nonzero_point(self):
        """Some y with f(y) != 0, or None."""
        if not self.terms:
            return None
        for t in self.terms:
            if not self.eval(t.center).is_zero():
                return t.center
        d = self._needed_depth()
        tab = self.value_table(d)
        for c in sorted(tab, key=str):
            return c
        return None


def _is_zero_coeff(c):
    return hasattr(c, "is_zero") and c.is_zero()


# ---------------------------------------------------------------------------
# the section sigma on SL_2(Q) subset Sp_2(Q_p), operator level
# ---------------------------------------------------------------------------

def _gamma0(p, alpha):
    """int_{Z_p} psi(alpha v^2) dv for val(alpha) < 0, via the stabilized
    Omega machine: p^{-s} Omega(Q_{p^{2s} alpha}), s = ceil(-val/2)."""
    v = QpField(p).val(alpha)
    s = (-v + 1) // 2
    return omega1_padic(p, alpha * p ** (2 * s)) * Fraction(1, p ** s)


def sigma_padic_matrix(p, g):
    """sigma(g) as an operator on PhaseStepFunctions over Q_p, for
    g = [[alpha, beta],[gamma, delta]] in SL_2(Q)."""
    (al, be), (ga, de) = (Fraction(g[0][0]), Fraction(g[0][1])), \
        (Fraction(g[1][0]), Fraction(g[1][1]))
    if al * de - be * ga != 1:
        raise ValueError("matrix must have determinant 1")
    fld = QpField(p)
    psi = AdditiveCharacter(fld)
    if ga == 0:
        scal = omega_ratio(fld, psi, Fraction(1), al)

        def act_p(f):
            return f.act_parabolic(al, be).scaled(scal)
        return act_p

    scal = omega_ratio(fld, psi, Fraction(1), ga)
    vga = fld.val(ga)

    def act(f):
        if f.m != 1:
            raise UnsupportedInputError("operator path is m = 1 only")
        out = []
        for tm in f.terms:
            na = tm.depth - vga
            # a-integral data (see module docstring derivation)
            acoef = ga * de / 2 + tm.quad * ga * ga
            czero = -tm.center / ga          # c(y) = (al/ga) y + czero
            cone = al / ga
            b0 = -tm.lin * ga + ga * de * czero
            # B(y) = b0 + y  (since al*de - be*ga = 1)
            # C(y) = (ga de/2) c(y)^2 - be ga c(y) y, plus (al be/2) y^2
            p2 = (ga * de / 2) * cone * cone - be * ga * cone + al * be / 2
            p1 = ga * de * cone * czero - be * ga * czero
            p0 = (ga * de / 2) * czero * czero
            at = acoef * Fraction(p) ** (2 * na)
            scale = tm.coeff * scal * Fraction(p) ** (-na)
            if at == 0 or fld.val(at) >= 0:
                theta = 0
                gaussian = None
            else:
                theta = fld.val(at)
                gaussian = _gamma0(p, at)
                # extra phase -beta~(y)^2 / (4 at), beta~ = (b0 + y) p^na
                k = -(Fraction(p) ** (2 * na)) / (4 * at)
                p2 = p2 + k
                p1 = p1 + 2 * k * b0
                p0 = p0 + k * b0 * b0
            d_out = theta - na
            y_c = -b0
            # recentre the quadratic P at y_c
            quad = p2
            lin = p1 + 2 * p2 * y_c
            const = p2 * y_c * y_c + p1 * y_c + p0
            coeff = scale * psi(const)
            if gaussian is not None:
                coeff = coeff * gaussian
            out.append(PhaseTerm(coeff, y_c, d_out, quad, lin))
        return PhaseStepFunction(p, out).canonical()
    return act


def cocycle_operator_padic(p, g1, g2, probes=None):
    """Operator-path cocycle over Q_p at m = 1: the scalar c with
    sigma(g1) sigma(g2) = c sigma(g1 g2), verified on probe functions."""
    from . import linalg
    s1 = sigma_padic_matrix(p, g1)
    s2 = sigma_padic_matrix(p, g2)
    g12 = linalg.mat_mul(
        tuple(tuple(Fraction(x) for x in row) for row in g1),
        tuple(tuple(Fraction(x) for x in row) for row in g2))
    s12 = sigma_padic_matrix(p, g12)
    if probes is None:
        probes = [PhaseStepFunction.indicator(p),
                  PhaseStepFunction.indicator(p, center=1, depth=1)]
    ring = CyclotomicRing(p)
    c = None
    for f in probes:
        lhs = s1(s2(f)).canonical()
        rhs = s12(f).canonical()
        y = rhs.nonzero_point()
        if y is None:
            if lhs.nonzero_point() is not None:
                raise RuntimeError("cocycle operator is not scalar")
            continue
        cand = lhs.eval(y) * rhs.eval(y).inv()
        if c is None:
            c = cand
        elif c != cand:
            raise RuntimeError("cocycle scalar differs between probes")
        if not lhs.equals(rhs.scaled(cand)):
            raise RuntimeError("cocycle operator is not scalar")
    if c is None:
        raise RuntimeError("all probes vanished")
    return c
