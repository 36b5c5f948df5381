import random
from fractions import Fraction
from functools import lru_cache

from hypothesis import settings, HealthCheck
from hypothesis import strategies as st

from ospbethe.exactalg import Polynomial, RationalFunction
from ospbethe.liedata import Algebra, WeightData, hook_weights, standard_parity
from ospbethe.orepdo import DiffOp
from ospbethe.population import explore, seed_trivial

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def polynomials(draw, max_degree=4):
    return Polynomial(draw(st.lists(small_fractions, max_size=max_degree + 1)))


@st.composite
def nonzero_polynomials(draw, max_degree=4):
    p = draw(polynomials(max_degree))
    return p if not p.is_zero() else Polynomial([draw(small_fractions.filter(bool))])


@st.composite
def rational_functions(draw, max_degree=3):
    return RationalFunction(draw(polynomials(max_degree)), draw(nonzero_polynomials(max_degree)))


def random_poly(rng: random.Random, degree: int) -> Polynomial:
    size = rng.randint(0, degree) + 1
    return Polynomial(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size))


def random_rf(rng: random.Random, degree: int = 3) -> RationalFunction:
    den = random_poly(rng, degree)
    while den.is_zero():
        den = random_poly(rng, degree)
    return RationalFunction(random_poly(rng, degree), den)


def random_op(rng: random.Random, order: int, degree: int = 3) -> DiffOp:
    return DiffOp([random_rf(rng, degree) for _ in range(order + 1)])


def make_seed(name, mu, points=(0,), kind=1):
    alg = Algebra.parse(name)
    p = standard_parity(alg)
    std = hook_weights(mu, alg.m, alg.n, kind)
    return seed_trivial(p, WeightData([std] * len(points), list(points), p))


@lru_cache(maxsize=None)
def population(name, mu, depth, points=(0,)):
    """Explored populations shared between test modules."""
    return explore(make_seed(name, tuple(mu), points), depth)
