"""Seeded invariant suite behind `weilmod selfcheck`: a fast deterministic
subset of the package's property checks, one pass/fail line per suite."""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .basefield import AdditiveCharacter, FqField, QpField
from .coeff import CyclotomicRing, FiniteField, ReductionMap
from .heisenberg import SympSpace, SchrodingerModel, commutant_dim_model, \
    central
from .metaplectic import (WeilContext, cocycle_formula, cocycle_operator,
                          enumerate_sp2, random_symplectic)
from .quadratic import QuadraticForm, hilbert, hilbert_oracle
from .schwartz import PhaseStepFunction, sigma_padic_matrix
from .weilfactor import hilbert_via_omega, omega_ratio


def run_all(seed):
    rng = random.Random(seed)
    report = []
    ok = True
    for name, fn in SUITES:
        try:
            fn(rng)
            report.append("PASS %s" % name)
        except Exception as ex:  # pragma: no cover - failure path
            report.append("FAIL %s: %s" % (name, ex))
            ok = False
    return report, ok


def _coeff_ring_laws(rng):
    r9 = CyclotomicRing(3, 2)
    f7 = FiniteField(7)
    red = ReductionMap(CyclotomicRing(3), f7)
    r3 = CyclotomicRing(3)
    for _ in range(200):
        a = r3.element([rng.randrange(-9, 10) for _ in range(2)])
        b = r3.element([rng.randrange(-9, 10) for _ in range(2)])
        assert red(a * b) == red(a) * red(b)
        assert red(a + b) == red(a) + red(b)
        if not a.is_zero():
            assert a * a.inv() == r3.one()
    z9 = r9.zeta()
    assert z9 ** 9 == r9.one() and z9 ** 3 != r9.one()


def _hilbert_suite(rng):
    for p in (3, 5, 7):
        fld = QpField(p)
        psi = AdditiveCharacter(fld)
        for _ in range(25):
            a = Fraction(rng.choice([1, 2, 3, 5, 7, 10, -1, -2]),
                         rng.choice([1, 1, 2, 3]))
            b = Fraction(rng.choice([1, 2, 3, 5, 7, 11, -3]),
                         rng.choice([1, 1, 2]))
            s = hilbert(fld, a, b)
            assert s == hilbert_oracle(fld, a, b)
            assert s == hilbert_via_omega(fld, psi, a, b)


def _omega_scaling(rng):
    f5 = FqField(5)
    psi = AdditiveCharacter(f5)
    one = f5.element(1)
    for _ in range(10):
        a = f5.element(rng.randrange(1, 5))
        b = f5.element(rng.randrange(1, 5))
        lhs = omega_ratio(f5, psi, a * b, one)
        rhs = omega_ratio(f5, psi, a, one) * omega_ratio(f5, psi, b, one)
        assert lhs == rhs * hilbert(f5, a, b)


def _finite_cocycle(rng):
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    ctx = WeilContext(sp, AdditiveCharacter(f3))
    group = enumerate_sp2(sp)
    for _ in range(60):
        g1 = group[rng.randrange(len(group))]
        g2 = group[rng.randrange(len(group))]
        assert cocycle_operator(ctx, g1, g2) == ctx.one()


def _padic_cocycle(rng):
    sp = SympSpace(QpField(3), 1)
    for _ in range(12):
        g1 = random_symplectic(sp, rng, length=4, scale=2)
        g2 = random_symplectic(sp, rng, length=4, scale=2)
        g3 = random_symplectic(sp, rng, length=4, scale=2)
        lhs = cocycle_formula(sp, g1, g2) * \
            cocycle_formula(sp, linalg.mat_mul(g1, g2), g3)
        rhs = cocycle_formula(sp, g1, linalg.mat_mul(g2, g3)) * \
            cocycle_formula(sp, g2, g3)
        assert lhs == rhs and lhs in (1, -1)


def _schwartz_closure(rng):
    p = 3
    f = PhaseStepFunction.indicator(p)
    w = ((Fraction(0), Fraction(-1)), (Fraction(1), Fraction(0)))
    sw = sigma_padic_matrix(p, w)
    assert sw(sw(f)).equals(f)
    g = f.act_heisenberg(Fraction(1), Fraction(1, 3), Fraction(1, 2))
    h = g.act_parabolic(Fraction(3), Fraction(1, 2))
    assert sw(h).terms


def _stone_von_neumann(rng):
    f3 = FqField(3)
    sp = SympSpace(f3, 1)
    model = SchrodingerModel(sp, AdditiveCharacter(f3))
    assert commutant_dim_model(model) == 1
    for t in range(3):
        mono = model.rho(central(sp, t))
        assert all(p == j for j, p in enumerate(mono.perm))


def _theta_instance(rng):
    from .theta import DualPair, RestrictedWeil, ThetaLift, \
        linear_pm_characters
    f3 = FqField(3)
    v = QuadraticForm(f3, [[f3.element(1)]])
    pair = DualPair(v, 1)
    rw = RestrictedWeil(pair, AdditiveCharacter(f3))
    dims = sorted(ThetaLift(rw, chi).dim for chi in
                  linear_pm_characters(pair.h1_list, linalg.mat_mul))
    assert dims == [1, 2]


SUITES = [
    ("coeff-ring-laws", _coeff_ring_laws),
    ("hilbert-three-paths", _hilbert_suite),
    ("omega-hilbert-identity", _omega_scaling),
    ("finite-cocycle-trivial", _finite_cocycle),
    ("padic-cocycle-identity", _padic_cocycle),
    ("schwartz-closure", _schwartz_closure),
    ("stone-von-neumann", _stone_von_neumann),
    ("theta-desk-instance", _theta_instance),
]
