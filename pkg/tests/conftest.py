import random
from os.path import abspath, dirname, join

import pytest

from gencx import corpus
from gencx.coeffs import CoeffFn
from gencx.model import Form, VectorField

FIXTURES = join(abspath(dirname(__file__)), "fixtures")


def fixture_path(name):
    return join(FIXTURES, name)


def fixture_text(name):
    with open(fixture_path(name), "r", encoding="utf-8") as handle:
        return handle.read()


def model_corpus():
    """The six reference models the identity tests sweep over."""
    return [
        corpus.symplectic_torus(),
        corpus.complex_torus(1),
        corpus.complex_torus(2),
        corpus.kodaira_thurston().total,
        corpus.c_chart(1),
        corpus.c_chart(2),
    ]


def random_coeff(rng, model):
    if model.invariant:
        return CoeffFn.constant(model.table, corpus.random_gauss(rng))
    characters = 1 if model.table.angle else 0
    return corpus.random_polynomial(rng, model.table, characters=characters)


def random_form(rng, model, degree=None, nterms=3):
    """A random form, homogeneous when degree is given; coefficients stay
    constant on invariant models and polynomial (plus one character when
    angle variables exist) on chart models."""
    subsets = model.subsets(degree)
    terms = {}
    for _ in range(nterms):
        terms[rng.choice(subsets)] = random_coeff(rng, model)
    return Form(model, terms)


def random_vector(rng, model):
    comps = {}
    for idx in rng.sample(range(model.rank), min(2, model.rank)):
        comps[idx] = random_coeff(rng, model)
    return VectorField(model, comps)


@pytest.fixture
def rng():
    return random.Random(20260814)
