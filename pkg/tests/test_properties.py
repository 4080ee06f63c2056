"""Hypothesis property checks layered on top of the seeded random tests:
the graded-algebra laws on generated sections, and the canonical-form law
for the scalar field."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from algebroid_forge.calculus import (
    FORM,
    MULTIVECTOR,
    differential,
    insert,
    lie_derivative,
    pairing,
    schouten,
    tangent_algebroid,
    wedge,
)
from algebroid_forge.rational import Polynomial, RationalFunction

TR3 = tangent_algebroid(3)

coeff = st.integers(-3, 3)


@st.composite
def scalars(draw):
    c = draw(coeff)
    out = TR3.scalar(c)
    for name in TR3.coords:
        if draw(st.booleans()):
            out = out + TR3.coord_rf(name) * draw(coeff)
    return out


@st.composite
def sections(draw, variance, degree=None):
    if degree is None:
        degree = draw(st.integers(0, 3))
    coeffs = {}
    from itertools import combinations

    for idx in combinations(range(3), degree):
        if draw(st.booleans()):
            coeffs[idx] = draw(scalars())
    return TR3.section(variance, degree, coeffs)


@settings(max_examples=40, deadline=None)
@given(sections(FORM), sections(FORM), sections(FORM))
def test_wedge_associativity(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@settings(max_examples=40, deadline=None)
@given(sections(FORM), sections(FORM))
def test_wedge_graded_commutativity(a, b):
    sign = -1 if (a.degree * b.degree) % 2 else 1
    assert wedge(a, b) == wedge(b, a).scale(sign)


@settings(max_examples=40, deadline=None)
@given(sections(FORM, 2), sections(MULTIVECTOR, 1), sections(MULTIVECTOR, 1))
def test_contraction_adjoint(mu, x, w):
    assert pairing(insert(mu, x), w) == pairing(mu, wedge(x, w))


@settings(max_examples=30, deadline=None)
@given(sections(FORM, 1))
def test_d_squared_vanishes(mu):
    assert differential(differential(mu)).is_zero()


@settings(max_examples=25, deadline=None)
@given(sections(MULTIVECTOR, 1), sections(FORM, 1))
def test_lie_derivative_commutes_with_d(x, mu):
    assert lie_derivative(x, differential(mu)) == differential(lie_derivative(x, mu))


@settings(max_examples=25, deadline=None)
@given(sections(MULTIVECTOR, 1), sections(MULTIVECTOR, 2))
def test_schouten_antisymmetry(p, q):
    sign = -1 if ((p.degree - 1) * (q.degree - 1)) % 2 == 0 else 1
    assert schouten(p, q) == schouten(q, p).scale(sign)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_equal_values_identical_representation(seed, scale_seed):
    rng = random.Random(seed)
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        mono = tuple(rng.randrange(0, 3) for _ in TR3.coords)
        terms[mono] = Fraction(rng.randrange(-4, 5))
    num = Polynomial(TR3.coords, terms)
    den_terms = {tuple(rng.randrange(0, 2) for _ in TR3.coords): Fraction(rng.randrange(1, 4))}
    den = Polynomial(TR3.coords, den_terms)
    rng2 = random.Random(scale_seed)
    scale_terms = {}
    for _ in range(rng2.randrange(1, 3)):
        mono = tuple(rng2.randrange(0, 2) for _ in TR3.coords)
        scale_terms[mono] = Fraction(rng2.randrange(-3, 4))
    scale = Polynomial(TR3.coords, scale_terms)
    if scale.is_zero():
        return
    plain = RationalFunction(num, den)
    blown = RationalFunction(num * scale, den * scale)
    assert plain.num == blown.num and plain.den == blown.den
