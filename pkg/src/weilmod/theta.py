"""Finite type-I dual pairs, the restricted Weil representation, isotypic
theta lifts, central idempotents from formal degrees, and reduction-mod-l
congruence checks at desk scale.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .basefield import AdditiveCharacter
from .coeff import CyclotomicRing, FiniteField, ReductionMap
from .heisenberg import Monomial, SympSpace, _fa
from .metaplectic import WeilContext, enumerate_sp2, sigma
from .quadratic import QuadraticForm
from .weilfactor import omega_ratio

GROUP_ORDER_CAP = 10 ** 4
MODEL_DIM_CAP = 81


class SizeCapError(ValueError):
    pass


def enumerate_orthogonal(q_form):
    """All h in GL(V) with h^T G h = G; brute force, dim V <= 2."""
    field = q_form.field
    n = q_form.m
    if n > 2:
        raise SizeCapError("orthogonal enumeration capped at dim 2")
    gram = q_form.gram
    out = []
    elts = field.elements()

    def cols(k):
        if k == 0:
            yield ()
            return
        for head in cols(k - 1):
            for idx in range(field.q ** n):
                v = []
                i = idx
                for _ in range(n):
                    i, r = divmod(i, field.q)
                    v.append(field.element(r))
                yield head + (tuple(v),)

    for colset in cols(n):
        h = linalg.transpose(linalg.mat(colset))
        ht_g_h = linalg.mat_mul(linalg.mat_mul(linalg.transpose(h), gram), h)
        if ht_g_h == gram:
            out.append(h)
    return out


class DualPair:
    """(O(V), Sp(W')) inside Sp(V x W') with X = V x X'."""

    def __init__(self, v_form, mprime, psi_builder=None):
        field = v_form.field
        if not v_form.is_nondegenerate():
            raise ValueError("the quadratic space must be nondegenerate")
        n0 = v_form.m
        if n0 * 2 * mprime > 4:
            raise SizeCapError("full-operator scale capped at dim V * 2m' <= 4")
        self.field = field
        self.v_form = v_form
        self.n0 = n0
        self.mprime = mprime
        self.m = n0 * mprime
        if field.q ** self.m > MODEL_DIM_CAP:
            raise SizeCapError("model dimension exceeds cap")
        vecs, vals = v_form.diagonalize()
        self.diag_basis = vecs       # orthogonal basis of V
        self.diag_vals = vals        # a_i = Q(v_i)
        self.space = SympSpace(field, self.m)
        self._b = linalg.transpose(linalg.mat(vecs))
        self._binv = linalg.mat_inv(self._b, _fa(field))
        self.h1_list = enumerate_orthogonal(v_form)
        if mprime != 1:
            raise SizeCapError("only m' = 1 symplectic partners at this scale")
        self.sp2 = SympSpace(field, 1)
        self.h2_list = enumerate_sp2(self.sp2)
        if 2 * len(self.h1_list) * len(self.h2_list) > 2 * GROUP_ORDER_CAP:
            raise SizeCapError("group order cap exceeded")
        for h1 in self.h1_list:
            e1 = self.embed_h1(h1)
            for h2 in self.h2_list[:6]:
                e2 = self.embed_h2(h2)
                if linalg.mat_mul(e1, e2) != linalg.mat_mul(e2, e1):
                    raise RuntimeError("dual pair images fail to commute")

    def embed_h1(self, h):
        """O(V) acting as h x Id_W': block-diagonal in the rescaled basis."""
        field = self.field
        hb = linalg.mat_mul(linalg.mat_mul(self._binv, h), self._b)
        hbt = linalg.transpose(linalg.mat_inv(hb, _fa(field)))
        m, n0, mp = self.m, self.n0, self.mprime
        z = field.element(0)
        rows = []
        for i in range(n0):
            for j in range(mp):
                row = [z] * (2 * m)
                for k in range(n0):
                    row[k * mp + j] = hb[i][k]
                rows.append(tuple(row))
        for i in range(n0):
            for j in range(mp):
                row = [z] * (2 * m)
                for k in range(n0):
                    row[m + k * mp + j] = hbt[i][k]
                rows.append(tuple(row))
        g = linalg.mat(rows)
        if not self.space.is_symplectic(g):
            raise RuntimeError("orthogonal embedding not symplectic")
        return g

    def embed_h2(self, h):
        """Sp(W') acting as Id_V x h, twisted by the a_i weights."""
        field = self.field
        m, n0 = self.m, self.n0
        al, be = h[0][0], h[0][1]
        ga, de = h[1][0], h[1][1]
        z = field.element(0)
        rows = []
        for i in range(n0):
            row = [z] * (2 * m)
            row[i] = al
            row[m + i] = be / self.diag_vals[i]
            rows.append(tuple(row))
        for i in range(n0):
            row = [z] * (2 * m)
            row[i] = ga * self.diag_vals[i]
            row[m + i] = de
            rows.append(tuple(row))
        g = linalg.mat(rows)
        if not self.space.is_symplectic(g):
            raise RuntimeError("symplectic embedding not symplectic")
        return g


def build_dual_pair(v_form, mprime):
    return DualPair(v_form, mprime)


class RestrictedWeil:
    """The Weil representation pulled back to H1 x H2.

    H1 acts through the natural Levi morphism k -> (k, I_k) (so -Id_V is the
    plain parity operator); H2 acts through the split section sigma."""

    def __init__(self, pair, psi):
        self.pair = pair
        self.psi = psi
        self.ctx = WeilContext(pair.space, psi)
        self.dim = self.ctx.model.dim
        self._h1_ops = {}
        self._h2_ops = {}

    def zero(self):
        return self.ctx.zero()

    def one(self):
        return self.ctx.one()

    def h1_op(self, h):
        op = self._h1_ops.get(h)
        if op is None:
            g = self.pair.embed_h1(h)
            # I_g on the Levi: pure permutation f(y) -> f(a^T y)
            model = self.ctx.model
            a_block, _, _, _ = self.pair.space.blocks(g)
            at = linalg.transpose(a_block)
            n = model.dim
            perm = [0] * n
            one = self.one()
            for i, co in enumerate(model._points):
                tgt = linalg.mat_vec(at, co)
                perm[model._index[tuple(tgt)]] = i
            op = Monomial(perm, (one,) * n).to_dense(self.zero())
            self._h1_ops[h] = op
        return op

    def h2_op(self, h):
        op = self._h2_ops.get(h)
        if op is None:
            op = sigma(self.ctx, self.pair.embed_h2(h))
            self._h2_ops[h] = op
        return op

    def op(self, h1, h2):
        return linalg.mat_mul(self.h1_op(h1), self.h2_op(h2))


def linear_pm_characters(group, mul):
    """All homomorphisms group -> {1, -1} of a small group."""
    from itertools import product
    ident = None
    for g in group:
        if all(mul(g, h) == h for h in group[:3]):
            ident = g
            break
    closure = {ident}
    gens = []
    for g in group:
        if g not in closure:
            gens.append(g)
            new = set(closure)
            frontier = list(closure)
            while True:
                added = False
                for a in list(new):
                    for s in gens:
                        t = mul(a, s)
                        if t not in new:
                            new.add(t)
                            added = True
                if not added:
                    break
            closure = new
            if len(closure) == len(group):
                break
    chars = []
    for signs in product((1, -1), repeat=len(gens)):
        val = {ident: 1}
        ok = True
        frontier = [ident]
        # propagate by right multiplication with generators
        while frontier and ok:
            nxt = []
            for a in frontier:
                for s, sg in zip(gens, signs):
                    t = mul(a, s)
                    v = val[a] * sg
                    if t in val:
                        if val[t] != v:
                            ok = False
                            break
                    else:
                        val[t] = v
                        nxt.append(t)
                if not ok:
                    break
            frontier = nxt
        if ok and len(val) == len(group):
            if all(val[mul(a, b)] == val[a] * val[b]
                   for a in group for b in group):
                chars.append(val)
    return chars


class ThetaLift:
    """Theta(pi_1) on Hom_{H1}(pi_1, omega) with its H2-action."""

    def __init__(self, rw, chi1):
        self.rw = rw
        self.chi1 = chi1
        pair = rw.pair
        zero, one = rw.zero(), rw.one()
        rows = []
        n = rw.dim
        for h in pair.h1_list:
            m = rw.h1_op(h)
            c = chi1[h]
            for i in range(n):
                rows.append(tuple(m[i][j] - (one * c if i == j else zero)
                                  for j in range(n)))

        class _R:
            @staticmethod
            def zero():
                return zero

            @staticmethod
            def one():
                return one
        self.basis = linalg.nullspace(linalg.mat(rows), _R)
        self.dim = len(self.basis)
        self._act_cache = {}

    def act(self, h2):
        """Matrix of omega(h2) on the isotypic subspace in self.basis."""
        a = self._act_cache.get(h2)
        if a is not None:
            return a
        rw = self.rw
        zero, one = rw.zero(), rw.one()
        if self.dim == 0:
            return ()
        m = rw.h2_op(h2)
        imgs = [linalg.mat_vec(m, v) for v in self.basis]
        bt = linalg.transpose(linalg.mat(self.basis))

        class _R:
            @staticmethod
            def zero():
                return zero

            @staticmethod
            def one():
                return one
        cols = []
        for img in imgs:
            sol = linalg.solve(bt, img, _R)
            if sol is None:
                raise RuntimeError("theta subspace is not H2-stable")
            cols.append(sol)
        a = linalg.transpose(linalg.mat(cols))
        self._act_cache[h2] = a
        return a

    def character(self):
        return {h: linalg.trace(self.act(h)) if self.dim else self.rw.zero()
                for h in self.rw.pair.h2_list}


def theta_lift(rw, chi1):
    return ThetaLift(rw, chi1)


def char_inner(group, chi_a, chi_b, inv):
    """dim Hom = (1/|G|) sum chi_a(g) chi_b(g^{-1}); exact scalar."""
    acc = None
    for g in group:
        t = chi_a[g] * chi_b[inv[g]]
        acc = t if acc is None else acc + t
    return acc * Fraction(1, len(group))


def group_inverses(group, mul):
    ident = None
    for g in group:
        if all(mul(g, h) == h for h in group[:2]):
            ident = g
            break
    inv = {}
    for g in group:
        for h in group:
            if mul(g, h) == ident:
                inv[g] = h
                break
    return inv


# ---------------------------------------------------------------------------
# central idempotents and congruences
# ---------------------------------------------------------------------------

class CentralIdempotent:
    """e_Pi = (dim Pi / |G|) sum_g chi(g^{-1}) g in R[G]."""

    def __init__(self, group, mul, char, dim, one_scalar):
        self.group = list(group)
        self.mul = mul
        n = len(self.group)
        if hasattr(one_scalar, "field"):
            ell = one_scalar.field.p
            if n % ell == 0:
                raise ValueError(
                    "non-banal characteristic: l divides the group order")
        self.inv = group_inverses(self.group, mul)
        scale = one_scalar * Fraction(dim, n)
        self.coeffs = {g: scale * char[self.inv[g]] for g in self.group}

    def convolve(self, other):
        out = {g: None for g in self.group}
        for g1, c1 in self.coeffs.items():
            for g2, c2 in other.coeffs.items():
                g = self.mul(g1, g2)
                t = c1 * c2
                out[g] = t if out[g] is None else out[g] + t
        return out

    def is_idempotent(self):
        return self.convolve(self) == self.coeffs

    def is_central(self):
        for g in self.group:
            for h in self.group:
                if self.coeffs[self.mul(self.mul(h, g), self.inv[h])] \
                        != self.coeffs[g]:
                    return False
        return True

    def apply(self, rep_op, zero):
        """The operator sum_g coeffs[g] rep_op(g)."""
        acc = None
        for g, c in self.coeffs.items():
            m = linalg.mat_scal(c, rep_op(g))
            acc = m if acc is None else linalg.mat_add(acc, m)
        return acc


def central_idempotent(group, mul, char, dim, one_scalar):
    return CentralIdempotent(group, mul, char, dim, one_scalar)


def product_group(pair):
    """(H1 x H2 element list, multiplication, inverses)."""
    group = [(h1, h2) for h1 in pair.h1_list for h2 in pair.h2_list]

    def mul(a, b):
        return (linalg.mat_mul(a[0], b[0]), linalg.mat_mul(a[1], b[1]))
    return group, mul


def congruence_check(v_form, mprime, ell, seed_label="pair"):
    """Theta over characteristic 0 vs characteristic l (banal), compared
    through reduced idempotents and traces; returns a report dict."""
    field = v_form.field
    p = field.p
    pair = DualPair(v_form, mprime)
    h1, h2 = pair.h1_list, pair.h2_list
    n_h1, n_h2 = len(h1), len(h2)
    if (n_h1 * n_h2) % ell == 0:
        raise ValueError("non-banal l: refuse (l divides |H1 x H2|)")
    # characteristic zero side
    ring0 = CyclotomicRing(p)
    psi0 = AdditiveCharacter(field, ring0)
    rw0 = RestrictedWeil(pair, psi0)
    # characteristic l side: F_{l^d} containing zeta_p
    d = 1
    while (ell ** d - 1) % p != 0:
        d += 1
    ffl = FiniteField(ell, d)
    red = ReductionMap(ring0, ffl)
    psil = AdditiveCharacter(field, ffl)
    rwl = RestrictedWeil(pair, psil)

    def mul1(a, b):
        return linalg.mat_mul(a, b)
    inv2 = group_inverses(h2, mul1)
    chars1 = linear_pm_characters(h1, mul1)
    report = {"lifts": []}
    for chi in chars1:
        lift0 = ThetaLift(rw0, chi)
        liftl = ThetaLift(rwl, chi)
        if lift0.dim != liftl.dim:
            raise RuntimeError("theta dimensions differ across reduction")
        ch0 = lift0.character()
        chl = liftl.character()
        # Brauer-style comparison: reduced ordinary trace = char-l trace
        for g in h2:
            if red(ch0[g]) != chl[g]:
                raise RuntimeError("semisimplified reductions differ")
        # idempotent congruence on H1 x H2 (via the H1 character x theta)
        irr0 = char_inner(h2, ch0, ch0, inv2)
        irr_one = (irr0 == ring0.one())
        # char-l irreducibility via the commutant of the action matrices
        from .heisenberg import hom_space
        ops = [liftl.act(g) for g in h2]
        endo = hom_space(ops, ops, liftl.dim, liftl.dim,
                         rwl.zero(), rwl.one()) if liftl.dim else []
        irr_l = (len(endo) == 1)
        if irr_one and not irr_l:
            raise RuntimeError("irreducibility not preserved by reduction")
        report["lifts"].append({
            "chi1": "trivial" if all(v == 1 for v in chi.values()) else "sign",
            "dim": lift0.dim,
            "irreducible_char0": bool(irr_one),
            "irreducible_charl": bool(irr_l),
        })
    # idempotent reduction e_Pi -> e_pi for Pi = chi x Theta(chi) on H1 x H2
    group, mul = product_group(pair)
    if len(group) % ell:
        chi = chars1[0]
        lift0 = ThetaLift(rw0, chi)
        ch0 = lift0.character()
        char_prod0 = {(a, b): ch0[b] * chi[a] for (a, b) in group}
        dim0 = lift0.dim
        e0 = CentralIdempotent(group, mul, char_prod0, dim0, ring0.one())
        liftl = ThetaLift(rwl, chi)
        chl = liftl.character()
        char_prodl = {(a, b): chl[b] * chi[a] for (a, b) in group}
        el = CentralIdempotent(group, mul, char_prodl, dim0, ffl.one())
        for g in group:
            if red(e0.coeffs[g]) != el.coeffs[g]:
                raise RuntimeError("idempotent reduction mismatch")
        report["idempotent_reduction"] = True
    return report
