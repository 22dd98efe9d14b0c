import random
from fractions import Fraction

import pytest

from weilmod import linalg
from weilmod.basefield import AdditiveCharacter, FqField, QpField
from weilmod.quadratic import QuadraticForm


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_form(field, rng, dim, nondegenerate=False):
    """Random symmetric Gram matrix over the base field."""
    while True:
        g = [[field.element(0)] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                if field.flavor == "finite":
                    v = field.element(rng.randrange(field.q))
                else:
                    v = Fraction(rng.randrange(-6, 7),
                                 rng.choice([1, 1, 2, 3]))
                g[i][j] = v
                g[j][i] = v
        q = QuadraticForm(field, g)
        if not nondegenerate or q.is_nondegenerate():
            return q


def random_unit(field, rng):
    if field.flavor == "finite":
        return field.element(rng.randrange(1, field.q))
    while True:
        v = Fraction(rng.randrange(-30, 31), rng.randrange(1, 31))
        if v != 0:
            return v
