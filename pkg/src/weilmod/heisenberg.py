"""The Heisenberg group H = W x F over a finite base field, its Schrödinger
and general self-dual-subgroup models as explicit monomial matrices over the
coefficient ring, commutant computations and change-of-model intertwiners.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .coeff import RingMismatchError


class SympSpace:
    """W = X + Y with bases e_1..e_m of X, f_1..f_m of Y, <e_i, f_j> = d_ij.
    Vectors are coordinate tuples (x-part then y-part)."""

    def __init__(self, field, m):
        self.field = field
        self.m = m
        self.dim = 2 * m

    def zero_vec(self):
        z = self.field.element(0)
        return (z,) * self.dim

    def basis_e(self, i):
        v = [self.field.element(0)] * self.dim
        v[i] = self.field.element(1)
        return tuple(v)

    def basis_f(self, i):
        v = [self.field.element(0)] * self.dim
        v[self.m + i] = self.field.element(1)
        return tuple(v)

    def pairing(self, u, v):
        m = self.m
        acc = self.field.element(0)
        for i in range(m):
            acc = acc + u[i] * v[m + i] - u[m + i] * v[i]
        return acc

    def gram_j(self):
        rows = []
        for i in range(self.dim):
            rows.append(tuple(self.pairing(self.basis_e(i) if i < self.m
                                           else self.basis_f(i - self.m),
                                           self.basis_e(j) if j < self.m
                                           else self.basis_f(j - self.m))
                              for j in range(self.dim)))
        return linalg.mat(rows)

    def is_symplectic(self, g):
        m = self.m
        cols = linalg.transpose(g)
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                want = self.field.element(0)
                if j == i + m and i < m:
                    want = self.field.element(1)
                if self.pairing(cols[i], cols[j]) != want:
                    return False
        return True

    def apply(self, g, v):
        return linalg.mat_vec(g, v)

    def identity(self):
        return linalg.identity(_fa(self.field), self.dim)

    def w_subset(self, subset):
        """w_S: e_i -> f_i, f_i -> -e_i for i in S; identity elsewhere."""
        m = self.m
        z, o = self.field.element(0), self.field.element(1)
        cols = []
        for i in range(m):
            v = [z] * self.dim
            if i in subset:
                v[m + i] = o
            else:
                v[i] = o
            cols.append(v)
        for i in range(m):
            v = [z] * self.dim
            if i in subset:
                v[i] = -o
            else:
                v[m + i] = o
            cols.append(v)
        return linalg.transpose(linalg.mat(cols))

    def parabolic(self, a, b=None):
        """p = [[a, b], [0, a^-T]]; b must satisfy b^T a^-T symmetric."""
        m = self.m
        fld = _fa(self.field)
        a = linalg.mat(a)
        ainvt = linalg.transpose(linalg.mat_inv(a, fld))
        if b is None:
            b = linalg.zeros(fld, m, m)
        else:
            b = linalg.mat(b)
        z = self.field.element(0)
        rows = []
        for i in range(m):
            rows.append(tuple(a[i]) + tuple(b[i]))
        for i in range(m):
            rows.append((z,) * m + tuple(ainvt[i]))
        g = linalg.mat(rows)
        if not self.is_symplectic(g):
            raise ValueError("parabolic block data is not symplectic")
        return g

    def unipotent_upper(self, s):
        """[[I, S'],[0, I]] from a symmetric parameter: b = s a^-T with a = I
        requires s symmetric under the induced condition."""
        fld = _fa(self.field)
        m = self.m
        return self.parabolic(linalg.identity(fld, m), linalg.mat(s))

    def blocks(self, g):
        m = self.m
        a = tuple(tuple(g[i][j] for j in range(m)) for i in range(m))
        b = tuple(tuple(g[i][j] for j in range(m, 2 * m)) for i in range(m))
        c = tuple(tuple(g[i][j] for j in range(m)) for i in range(m, 2 * m))
        d = tuple(tuple(g[i][j] for j in range(m, 2 * m))
                  for i in range(m, 2 * m))
        return a, b, c, d

    def in_parabolic(self, g):
        _, _, c, _ = self.blocks(g)
        z = self.field.element(0)
        return all(x == z for row in c for x in row)

    def det_x(self, p):
        a, _, _, _ = self.blocks(p)
        return linalg.det(a)

    def half(self):
        if self.field.flavor == "finite":
            return self.field.element(1) / 2
        return Fraction(1, 2)


def _fa(field):
    class _A:
        @staticmethod
        def zero():
            return field.element(0)

        @staticmethod
        def one():
            return field.element(1)
    return _A


class HeisenbergElement:
    """(w, t) with the half-pairing twisted group law."""

    __slots__ = ("space", "w", "t")

    def __init__(self, space, w, t):
        self.space = space
        self.w = tuple(space.field.element(x) for x in w)
        self.t = space.field.element(t) if space.field.flavor == "finite" \
            else Fraction(t)

    def __mul__(self, other):
        if self.space is not other.space:
            raise RingMismatchError("elements of different Heisenberg groups")
        sp = self.space
        w = tuple(a + b for a, b in zip(self.w, other.w))
        t = self.t + other.t + sp.half() * sp.pairing(self.w, other.w)
        return HeisenbergElement(sp, w, t)

    def inv(self):
        return HeisenbergElement(self.space, tuple(-x for x in self.w),
                                 -self.t)

    def __eq__(self, other):
        return (isinstance(other, HeisenbergElement)
                and self.space is other.space and self.w == other.w
                and self.t == other.t)

    def __hash__(self):
        return hash((self.w, self.t))

    def __repr__(self):
        return "h(%r; %r)" % (self.w, self.t)


def h_mul(h1, h2):
    return h1 * h2


def delta(space, w):
    return HeisenbergElement(space, w, 0)


def central(space, t):
    return HeisenbergElement(space, space.zero_vec(), t)


class Monomial:
    """Operator with one nonzero entry per column: M[perm[j], j] = phase[j]."""

    __slots__ = ("perm", "phases")

    def __init__(self, perm, phases):
        self.perm = tuple(perm)
        self.phases = tuple(phases)

    @property
    def dim(self):
        return len(self.perm)

    def __mul__(self, other):
        p1, f1 = self.perm, self.phases
        p2, f2 = other.perm, other.phases
        return Monomial(tuple(p1[p2[j]] for j in range(len(p2))),
                        tuple(f1[p2[j]] * f2[j] for j in range(len(p2))))

    def scaled(self, c):
        return Monomial(self.perm, tuple(c * x for x in self.phases))

    def inv(self):
        n = self.dim
        perm = [0] * n
        phases = [None] * n
        for j in range(n):
            perm[self.perm[j]] = j
            phases[self.perm[j]] = self.phases[j].inv()
        return Monomial(perm, phases)

    def transpose(self):
        n = self.dim
        perm = [0] * n
        phases = [None] * n
        for j in range(n):
            perm[self.perm[j]] = j
            phases[self.perm[j]] = self.phases[j]
        return Monomial(perm, phases)

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.perm == other.perm and self.phases == other.phases

    def __hash__(self):
        return hash((self.perm, self.phases))

    def to_dense(self, zero):
        n = self.dim
        rows = [[zero] * n for _ in range(n)]
        for j in range(n):
            rows[self.perm[j]][j] = self.phases[j]
        return linalg.mat(rows)

    def trace(self, zero):
        acc = zero
        for j in range(self.dim):
            if self.perm[j] == j:
                acc = acc + self.phases[j]
        return acc

    def kron(self, other):
        n2 = other.dim
        perm, phases = [], []
        for j1 in range(self.dim):
            for j2 in range(n2):
                perm.append(self.perm[j1] * n2 + other.perm[j2])
                phases.append(self.phases[j1] * other.phases[j2])
        return Monomial(perm, phases)


class LagrangianModel:
    """S_A = ind_{A_H}^H psi_A for a Lagrangian A with psi_A trivial on A,
    realized on a linear transversal B: basis indexed by points of B."""

    def __init__(self, space, psi, a_basis=None):
        self.space = space
        self.psi = psi
        self.field = space.field
        if self.field.flavor != "finite":
            raise ValueError("matrix models exist for finite F only")
        m = space.m
        if a_basis is None:
            a_basis = [space.basis_e(i) for i in range(m)]
        self.a_basis = linalg.mat(a_basis)
        if len(self.a_basis) != m:
            raise ValueError("self-dual subgroups here are Lagrangians")
        for u in self.a_basis:
            for v in self.a_basis:
                if space.pairing(u, v) != self.field.element(0):
                    raise ValueError("subspace is not isotropic")
        # transversal: standard vectors completing a_basis
        std = [space.basis_e(i) for i in range(m)] + \
              [space.basis_f(i) for i in range(m)]
        comp = linalg.extend_basis(list(self.a_basis), std)[m:]
        self.b_basis = linalg.mat(comp)
        self.dim = self.field.q ** m
        self._full = linalg.mat(list(self.a_basis) + list(self.b_basis))
        self._full_inv = linalg.mat_inv(linalg.transpose(self._full),
                                        _fa(self.field))
        self._points = list(_point_tuples(self.field, m))
        self._index = {pt: i for i, pt in enumerate(self._points)}

    def point(self, i):
        """The i-th B-coset representative as an ambient vector."""
        co = self._points[i]
        return self._combine(self.b_basis, co)

    def _combine(self, basis, coords):
        acc = list(self.space.zero_vec())
        for c, vec in zip(coords, basis):
            for t in range(self.space.dim):
                acc[t] = acc[t] + c * vec[t]
        return tuple(acc)

    def decompose(self, w):
        """w = a + b along A + B; returns (a, b, b-coords)."""
        coords = linalg.mat_vec(self._full_inv, w)
        m = self.space.m
        a = self._combine(self.a_basis, coords[:m])
        b = self._combine(self.b_basis, coords[m:])
        return a, b, tuple(coords[m:])

    def eval_basis(self, i, h):
        """Value at h of the delta function concentrated on B-point i: returns
        (coefficient, basis index) with f(h) = coeff * f~(index)."""
        a, b, co = self.decompose(h.w)
        t = h.t - self.space.half() * self.space.pairing(a, b)
        return self.psi(t), self._index[co]

    def rho(self, h):
        """Right-translation action; monomial in the B-point basis."""
        sp = self.space
        half = sp.half()
        n = self.dim
        perm = [0] * n
        phases = [None] * n
        for i, co in enumerate(self._points):
            b = self._combine(self.b_basis, co)
            w2 = tuple(x + y for x, y in zip(b, h.w))
            a1, b1, co1 = self.decompose(w2)
            t = h.t + half * sp.pairing(b, h.w) - half * sp.pairing(a1, b1)
            j = self._index[co1]
            # (rho(h) f)~(b) = psi(t) f~(b1): column j feeds row i
            perm[j] = i
            phases[j] = None
            # store temporarily; fill after loop
            if phases[j] is None:
                phases[j] = self.psi(t)
        return Monomial(perm, phases)

    def rho_dense(self, h, example_zero=None):
        zero = example_zero if example_zero is not None else \
            self.psi(self.field.element(0)) * 0
        return self.rho(h).to_dense(zero)

    def zero_coeff(self):
        one = self.psi(self.field.element(0))
        return one - one

    def one_coeff(self):
        return self.psi(self.field.element(0))


def _point_tuples(field, m):
    elts = field.elements()
    if m == 0:
        yield ()
        return
    for head in _point_tuples(field, m - 1):
        for e in elts:
            yield head + (e,)


class SchrodingerModel(LagrangianModel):
    """The X-model: functions on Y with the standard action formula."""

    def __init__(self, space, psi):
        super().__init__(space, psi,
                         [space.basis_e(i) for i in range(space.m)])


class TensorModel:
    """Model of H(W1 + W2) on S1 x S2: (w1+w2, t) acts by
    psi(t) rho1(w1, 0) x rho2(w2, 0)."""

    def __init__(self, model1, model2):
        self.model1 = model1
        self.model2 = model2
        self.psi = model1.psi
        self.field = model1.field
        self.dim = model1.dim * model2.dim
        m1, m2 = model1.space.m, model2.space.m
        self.space = SympSpace(self.field, m1 + m2)
        self._m1, self._m2 = m1, m2

    def _split(self, w):
        m1, m2 = self._m1, self._m2
        w1 = w[:m1] + w[m1 + m2:2 * m1 + m2]
        w2 = w[m1:m1 + m2] + w[2 * m1 + m2:]
        return w1, w2

    def rho(self, h):
        w1, w2 = self._split(h.w)
        r1 = self.model1.rho(delta(self.model1.space, w1))
        r2 = self.model2.rho(delta(self.model2.space, w2))
        return r1.kron(r2).scaled(self.psi(h.t))


class DualModel:
    """Contragredient: rho_v(h) = rho(h^{-1})^T in the dual basis."""

    def __init__(self, base):
        self.base = base
        self.space = base.space
        self.field = base.field
        self.psi = base.psi
        self.dim = base.dim

    def rho(self, h):
        return self.base.rho(h.inv()).transpose()


class DirectSumModel:
    def __init__(self, base, copies=2):
        self.base = base
        self.copies = copies
        self.space = base.space
        self.field = base.field
        self.psi = base.psi
        self.dim = base.dim * copies

    def rho(self, h):
        r = self.base.rho(h)
        n = r.dim
        perm, phases = [], []
        for c in range(self.copies):
            perm.extend(p + c * n for p in r.perm)
            phases.extend(r.phases)
        return Monomial(perm, phases)


def model_generators(space):
    """delta(b e_i), delta(b f_i) for b in an F_p-basis of F_q, plus the
    central (0, 1): these generate H(W) also when q is a proper power."""
    field = space.field
    basis_scalars = [field.from_coeffs([1 if t == s else 0
                                        for t in range(field.f)])
                     for s in range(field.f)]
    gens = []
    for b in basis_scalars:
        for i in range(space.m):
            gens.append(delta(space,
                              tuple(b * x for x in space.basis_e(i))))
            gens.append(delta(space,
                              tuple(b * x for x in space.basis_f(i))))
    gens.append(central(space, 1))
    return gens


def commutant_dim(operators, dim):
    """Dimension of {M : M r = r M for all r}, r monomial, via weighted
    union-find on the d^2 entry slots."""
    parent = list(range(dim * dim))
    weight = [None] * (dim * dim)  # M[slot] = weight[slot] * M[root]
    dead = [False] * (dim * dim)
    one = operators[0].phases[0] * operators[0].phases[0].inv()
    for i in range(dim * dim):
        weight[i] = one

    def find(x):
        if parent[x] == x:
            return x, one
        root, w = find(parent[x])
        parent[x] = root
        weight[x] = weight[x] * w
        return root, weight[x]

    def union(a, b, c):
        # M[b] = c * M[a]
        ra, wa = find(a)
        rb, wb = find(b)
        if ra == rb:
            if c * wa != wb:
                dead[ra] = True
            return
        parent[rb] = ra
        weight[rb] = c * wa * wb.inv()
        if dead[rb]:
            dead[ra] = True

    for op in operators:
        perm, ph = op.perm, op.phases
        for i in range(dim):
            for j in range(dim):
                # M[perm[i], perm[j]] = (ph[i]/ph[j]) M[i, j]
                union(i * dim + j, perm[i] * dim + perm[j],
                      ph[i] * ph[j].inv())
    roots = set()
    for x in range(dim * dim):
        r, _ = find(x)
        roots.add(r)
    return sum(1 for r in roots if not dead[r])


def commutant_dim_model(model, extra_generators=()):
    gens = model_generators(model.space)
    ops = [model.rho(h) for h in gens]
    ops.extend(extra_generators)
    return commutant_dim(ops, model.dim)


def intertwiner(model1, model2, mu_point=None, omega_vec=None):
    """I_{A1,A2,mu,omega}: S_{A1} -> S_{A2} as a dense matrix; trivially
    extended characters, so omega must pair A1 cap A2 into ker psi."""
    sp = model1.space
    field = sp.field
    if omega_vec is None:
        omega_vec = sp.zero_vec()
    omega_vec = tuple(field.element(x) for x in omega_vec)
    a1, a2 = model1.a_basis, model2.a_basis
    inter = _intersection(a1, a2, field)
    for u in inter:
        if model1.psi(sp.pairing(u, omega_vec)) != model1.one_coeff():
            raise ValueError("omega incompatible on the intersection")
    reps = _coset_reps(inter, a2, field)
    if mu_point is None:
        mu_point = model1.one_coeff()
    zero = model1.zero_coeff()
    rows = [[zero] * model1.dim for _ in range(model2.dim)]
    om = delta(sp, omega_vec)
    for i2, co2 in enumerate(model2._points):
        b2 = model2._combine(model2.b_basis, co2)
        h2 = delta(sp, b2)
        for a in reps:
            h = om * delta(sp, a) * h2
            coeff, j1 = model1.eval_basis(0, h)
            # eval_basis gives f(h) = coeff * f~(j1) independently of i
            rows[i2][j1] = rows[i2][j1] + coeff * mu_point
    return linalg.mat(rows)


def _intersection(basis1, basis2, field):
    fld = _fa(field)
    if not basis1 or not basis2:
        return ()
    rows = list(basis1) + list(basis2)
    ns = linalg.nullspace(linalg.transpose(linalg.mat(rows)), fld)
    out = []
    for coefs in ns:
        v = [field.element(0)] * len(basis1[0])
        for c, vec in zip(coefs[:len(basis1)], basis1):
            for t in range(len(v)):
                v[t] = v[t] + c * vec[t]
        out.append(tuple(v))
    # independent subset
    return tuple(linalg.column_space_basis(out))


def _coset_reps(subspace, ambient_basis, field):
    """Points of a complement of `subspace` inside span(ambient_basis)."""
    comp = linalg.extend_basis(list(subspace), list(ambient_basis))
    comp = comp[len(subspace):]
    out = []
    for co in _point_tuples(field, len(comp)):
        v = [field.element(0)] * (len(ambient_basis[0])
                                  if ambient_basis else 0)
        for c, vec in zip(co, comp):
            for t in range(len(v)):
                v[t] = v[t] + c * vec[t]
        out.append(tuple(v))
    return out


def hom_space(ops1, ops2, dim1, dim2, zero, one):
    """Basis of {T : T r1(g) = r2(g) T} for paired operator lists (dense)."""
    import itertools
    nvar = dim2 * dim1
    rows = []
    for r1, r2 in zip(ops1, ops2):
        m1 = r1.to_dense(zero) if isinstance(r1, Monomial) else r1
        m2 = r2.to_dense(zero) if isinstance(r2, Monomial) else r2
        # T m1 - m2 T = 0: equations indexed by (i, j)
        for i in range(dim2):
            for j in range(dim1):
                row = [zero] * nvar
                for k in range(dim1):
                    row[i * dim1 + k] = row[i * dim1 + k] + m1[k][j]
                for k in range(dim2):
                    row[k * dim1 + j] = row[k * dim1 + j] - m2[i][k]
                rows.append(tuple(row))
    class _R:
        @staticmethod
        def zero():
            return zero

        @staticmethod
        def one():
            return one
    ns = linalg.nullspace(linalg.mat(rows), _R)
    mats = []
    for v in ns:
        mats.append(linalg.mat([[v[i * dim1 + j] for j in range(dim1)]
                                for i in range(dim2)]))
    return mats
