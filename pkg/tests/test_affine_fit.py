from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from mdlab.exceptions import ScaleTooLarge
from mdlab.harness import Infeasible, fit_affine_maximizer, random_instance
from mdlab.harness._simplex import maximize
from mdlab.mechanisms import AffineMaximizerSpec, affine_maximizer, random_dictator, vcg
from mdlab.valuations import enumerate_valuations


def observe(mechanism, pairs):
    return [((a, b), mechanism(a, b).t) for a, b in pairs]


def reproduces(spec, observations):
    return all(affine_maximizer(spec, a, b).t == t for (a, b), t in observations)


@pytest.mark.parametrize("seed", range(25))
def test_simplex_agrees_with_highs(seed):
    rng = np.random.default_rng(seed)
    rows, cols = rng.integers(2, 7), rng.integers(2, 6)
    A = rng.integers(-4, 5, size=(rows, cols))
    b = rng.integers(0, 6, size=rows)
    c = rng.integers(-2, 4, size=cols)
    status, x, value = maximize(c.tolist(), A.tolist(), b.tolist())
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * cols, method="highs")
    if ref.status == 3:
        assert status == "unbounded"
    else:
        assert status == "optimal"
        assert float(value) == pytest.approx(-ref.fun, abs=1e-7)
        assert all(sum(Fraction(int(a)) * xi for a, xi in zip(row, x)) <= bi
                   for row, bi in zip(A.tolist(), b.tolist()))


def test_vcg_observations_fit():
    obs = observe(vcg, (random_instance(4, 10, 3, i) for i in range(40)))
    spec = fit_affine_maximizer(obs, range(5))
    assert isinstance(spec, AffineMaximizerSpec)
    assert reproduces(spec, obs)
    assert reproduces(AffineMaximizerSpec.full(4), obs)


def test_weighted_generator_fits():
    gen = AffineMaximizerSpec((0, 1, 3, 4), 2, 1, {0: 3, 1: 0, 3: Fraction(5, 2), 4: 1})
    obs = observe(lambda a, b: affine_maximizer(gen, a, b),
                  (random_instance(4, 6, 8, i) for i in range(40)))
    spec = fit_affine_maximizer(obs, gen.range)
    assert isinstance(spec, AffineMaximizerSpec)
    assert spec.w1 + spec.w2 == 1
    assert reproduces(spec, obs)


def test_mixed_dictator_coins_infeasible():
    grid = list(enumerate_valuations(2, 2))
    pairs = [(a, b) for a in grid for b in grid][:80]
    obs = [((a, b), random_dictator(a, b, 1 + i % 2).t) for i, (a, b) in enumerate(pairs)]
    assert isinstance(fit_affine_maximizer(obs, range(3)), Infeasible)
    # a single coin is a maximizer that puts all weight on the chosen bidder
    for coin in (1, 2):
        single = [((a, b), random_dictator(a, b, coin).t) for a, b in pairs]
        fitted = fit_affine_maximizer(single, range(3))
        assert isinstance(fitted, AffineMaximizerSpec) and reproduces(fitted, single)


def test_choice_outside_range():
    a, b = random_instance(3, 5, 0, 0)
    assert isinstance(fit_affine_maximizer([((a, b), 2)], [0, 1]), Infeasible)


def test_scale_cap():
    obs = observe(vcg, (random_instance(6, 10, 1, i) for i in range(50)))
    with pytest.raises(ScaleTooLarge):
        fit_affine_maximizer(obs, range(7), max_tableau=1000)
