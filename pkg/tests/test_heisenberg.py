import random
from fractions import Fraction

import pytest

from weilmod import linalg
from weilmod.basefield import AdditiveCharacter, FqField
from weilmod.coeff import CyclotomicRing, FiniteField, ReductionMap
from weilmod.heisenberg import (DirectSumModel, DualModel, HeisenbergElement,
                                LagrangianModel, SchrodingerModel, SympSpace,
                                TensorModel, central, commutant_dim_model,
                                delta, h_mul, hom_space, intertwiner,
                                model_generators)


def all_h(space):
    field = space.field
    elts = field.elements()
    vecs = [()]
    for _ in range(space.dim):
        vecs = [v + (x,) for v in vecs for x in elts]
    return [HeisenbergElement(space, v, t) for v in vecs for t in elts]


def test_group_law_examples():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    h = delta(sp, (1, 2))
    e = HeisenbergElement(sp, (0, 0), 0)
    assert e * h == h and h * e == h
    de, df = delta(sp, (1, 0)), delta(sp, (0, 1))
    prod = de * df
    assert prod.w == (f3.element(1), f3.element(1))
    assert prod.t == f3.element(1) / 2
    # commutator [delta(w), delta(w')] = (0, <w, w'>)
    w1, w2 = delta(sp, (1, 1)), delta(sp, (2, 1))
    comm = w1 * w2 * w1.inv() * w2.inv()
    assert comm.w == sp.zero_vec()
    assert comm.t == sp.pairing(w1.w, w2.w)


def test_group_law_associative_exhaustive_q3():
    sp = SympSpace(FqField(3), 1)
    hs = all_h(sp)
    idx = random.Random(0)
    sample = [(idx.choice(hs), idx.choice(hs), idx.choice(hs))
              for _ in range(400)]
    for a, b, c in sample:
        assert h_mul(h_mul(a, b), c) == h_mul(a, h_mul(b, c))


def test_rho_homomorphism_exhaustive_q3():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    model = SchrodingerModel(sp, AdditiveCharacter(f3))
    hs = all_h(sp)
    for h1 in hs:
        for h2 in hs:
            assert model.rho(h1) * model.rho(h2) == model.rho(h1 * h2)


def test_rho_homomorphism_random_bigger():
    rng = random.Random(4)
    for (p, f, m) in ((5, 1, 2), (7, 1, 2), (3, 2, 2)):
        fq = FqField(p, f)
        sp = SympSpace(fq, m)
        model = SchrodingerModel(sp, AdditiveCharacter(fq))
        for _ in range(334):
            w1 = tuple(fq.element(rng.randrange(fq.q))
                       for _ in range(sp.dim))
            w2 = tuple(fq.element(rng.randrange(fq.q))
                       for _ in range(sp.dim))
            h1 = HeisenbergElement(sp, w1, rng.randrange(fq.q))
            h2 = HeisenbergElement(sp, w2, rng.randrange(fq.q))
            assert model.rho(h1) * model.rho(h2) == model.rho(h1 * h2)


def test_central_character():
    f9 = FqField(3, 2)
    sp = SympSpace(f9, 1)
    psi = AdditiveCharacter(f9)
    model = SchrodingerModel(sp, psi)
    for t in f9.elements():
        mono = model.rho(central(sp, t))
        assert all(j == pj for j, pj in enumerate(mono.perm))
        assert all(ph == psi(t) for ph in mono.phases)


def test_monomial_example_translation_and_phase():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    model = SchrodingerModel(sp, AdditiveCharacter(f3))
    # h = delta(f_1) translates f(y) -> f(y + 1); pure permutation
    mono = model.rho(delta(sp, (0, 1)))
    one = model.one_coeff()
    assert all(ph == one for ph in mono.phases)
    assert sorted(mono.perm) == [0, 1, 2]
    # h = delta(e_1) acts diagonally
    mono2 = model.rho(delta(sp, (1, 0)))
    assert all(j == pj for j, pj in enumerate(mono2.perm))
    assert any(ph != one for ph in mono2.phases)


def test_commutant_dims():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    model = SchrodingerModel(sp, AdditiveCharacter(f3))
    assert commutant_dim_model(model) == 1
    assert commutant_dim_model(DirectSumModel(model, 2)) == 4
    # modular instance: F_5 model over F_{7^4} coefficients
    f5 = FqField(5)
    ffl = FiniteField(7, 4)
    model_l = SchrodingerModel(SympSpace(f5, 1),
                               AdditiveCharacter(f5, ffl))
    assert commutant_dim_model(model_l) == 1
    # char-2 coefficients
    f4 = FiniteField(2, 2)
    model_2 = SchrodingerModel(sp, AdditiveCharacter(f3, f4))
    assert commutant_dim_model(model_2) == 1


def test_stone_von_neumann_grid():
    for (p, f, m) in ((3, 1, 1), (3, 1, 2), (5, 1, 1), (7, 1, 1), (3, 2, 1)):
        fq = FqField(p, f)
        sp = SympSpace(fq, m)
        model = SchrodingerModel(sp, AdditiveCharacter(fq))
        assert commutant_dim_model(model) == 1


def test_general_lagrangian_model_y():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    ymodel = LagrangianModel(sp, psi, [sp.basis_f(0)])
    hs = all_h(sp)
    for h1 in hs[:9]:
        for h2 in hs:
            assert ymodel.rho(h1) * ymodel.rho(h2) == ymodel.rho(h1 * h2)
    assert commutant_dim_model(ymodel) == 1


def test_intertwiner_x_to_y():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    xmodel = SchrodingerModel(sp, psi)
    ymodel = LagrangianModel(sp, psi, [sp.basis_f(0)])
    im = intertwiner(xmodel, ymodel)
    zero = xmodel.zero_coeff()
    # intertwining relation on every group element
    for h in all_h(sp):
        lhs = linalg.mat_mul(im, xmodel.rho(h).to_dense(zero))
        rhs = linalg.mat_mul(ymodel.rho(h).to_dense(zero), im)
        assert lhs == rhs
    # invertible
    linalg.mat_inv(im, type("A", (), {
        "zero": staticmethod(lambda: zero),
        "one": staticmethod(lambda: xmodel.one_coeff())}))


def test_intertwiner_roundtrip_scalar():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    xmodel = SchrodingerModel(sp, psi)
    ymodel = LagrangianModel(sp, psi, [sp.basis_f(0)])
    ixy = intertwiner(xmodel, ymodel)
    iyx = intertwiner(ymodel, xmodel)
    prod = linalg.mat_mul(iyx, ixy)
    zero = xmodel.zero_coeff()
    n = xmodel.dim
    diag = prod[0][0]
    assert not diag.is_zero()
    for i in range(n):
        for j in range(n):
            assert prod[i][j] == (diag if i == j else zero)
    # scalar is q times the point-mass normalization
    assert diag == CyclotomicRing(3).from_int(3)


def test_intertwiner_same_model_is_scalar():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    xmodel = SchrodingerModel(sp, psi)
    im = intertwiner(xmodel, xmodel)
    zero = xmodel.zero_coeff()
    for i in range(xmodel.dim):
        for j in range(xmodel.dim):
            if i != j:
                assert im[i][j] == zero
    assert im[0][0] == im[1][1] == im[2][2]


def test_intertwiner_omega_compatibility():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    xmodel = SchrodingerModel(sp, psi)
    ymodel = LagrangianModel(sp, psi, [sp.basis_f(0)])
    # trivial intersection: any omega is allowed, and omega = e_1 shifts
    im = intertwiner(xmodel, ymodel, omega_vec=sp.basis_e(0))
    zero = xmodel.zero_coeff()
    for h in all_h(sp)[:12]:
        lhs = linalg.mat_mul(im, xmodel.rho(h).to_dense(zero))
        rhs = linalg.mat_mul(ymodel.rho(h).to_dense(zero), im)
        assert lhs == rhs


def test_contragredient_is_psi_inverse_model():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    model = SchrodingerModel(sp, psi)
    dual = DualModel(model)
    inv_model = SchrodingerModel(sp, psi.inverse())
    hs = all_h(sp)
    gens = model_generators(sp)
    ops_dual = [dual.rho(h) for h in gens]
    ops_inv = [inv_model.rho(h) for h in gens]
    zero = model.zero_coeff()
    homs = hom_space(ops_dual, ops_inv, model.dim, model.dim, zero,
                     model.one_coeff())
    assert len(homs) == 1
    t = homs[0]
    # a nonzero intertwiner between irreducibles is an isomorphism
    fld = type("A", (), {"zero": staticmethod(lambda: zero),
                         "one": staticmethod(lambda: model.one_coeff())})
    linalg.mat_inv(t, fld)
    for h in hs:
        lhs = linalg.mat_mul(t, dual.rho(h).to_dense(zero))
        rhs = linalg.mat_mul(inv_model.rho(h).to_dense(zero), t)
        assert lhs == rhs


def test_tensor_model():
    f3 = FqField(3)
    sp1 = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    m1 = SchrodingerModel(sp1, psi)
    tm = TensorModel(m1, m1)
    assert tm.dim == 9
    sp2 = tm.space
    big = SchrodingerModel(sp2, psi)
    rng = random.Random(8)
    # same model up to basis conventions: homomorphism law + irreducible +
    # matching central character
    for _ in range(60):
        w1 = tuple(f3.element(rng.randrange(3)) for _ in range(4))
        w2 = tuple(f3.element(rng.randrange(3)) for _ in range(4))
        h1 = HeisenbergElement(sp2, w1, rng.randrange(3))
        h2 = HeisenbergElement(sp2, w2, rng.randrange(3))
        assert tm.rho(h1) * tm.rho(h2) == tm.rho(h1 * h2)
    assert commutant_dim_model(tm) == 1
    for t in range(3):
        mono = tm.rho(central(sp2, t))
        assert all(ph == psi(f3.element(t)) for ph in mono.phases)


def test_scalar_extension_entrywise():
    # the F_l(zeta_p) model is the entrywise reduction of the Z[zeta_p] model
    f5 = FqField(5)
    sp = SympSpace(f5, 1)
    ring = CyclotomicRing(5)
    ffl = FiniteField(7, 4)
    red = ReductionMap(ring, ffl)
    m0 = SchrodingerModel(sp, AdditiveCharacter(f5, ring))
    ml = SchrodingerModel(sp, AdditiveCharacter(f5, ffl))
    rng = random.Random(12)
    for _ in range(30):
        w = tuple(f5.element(rng.randrange(5)) for _ in range(2))
        h = HeisenbergElement(sp, w, rng.randrange(5))
        a, b = m0.rho(h), ml.rho(h)
        assert a.perm == b.perm
        assert tuple(red(x) for x in a.phases) == b.phases


def test_intertwiner_incompatible_omega_rejected():
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    psi = AdditiveCharacter(f3)
    xmodel = SchrodingerModel(sp, psi)
    with pytest.raises(ValueError):
        intertwiner(xmodel, xmodel, omega_vec=sp.basis_f(0))
