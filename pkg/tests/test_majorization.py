import math

import numpy as np
import pytest
from _builders import function_for, premise_instance, random_gauge
from hypothesis import given
from hypothesis import strategies as st

from tchernoff import majorization as mj
from tchernoff import spectral as sp
from tchernoff import tensor as tc
from tchernoff.errors import ContractError, DomainError, ResourceError


def test_vector_relations():
    assert mj.majorize([2, 1, 0], [3, 0, 0])
    assert not mj.majorize([3, 0, 0], [2, 1, 0])
    assert mj.weak_majorize([1, 1, 0], [3, 0, 0])
    assert not mj.majorize([1, 1, 0], [3, 0, 0])
    assert mj.log_majorize([2, 2], [4, 1])
    assert mj.weak_log_majorize([2, 1], [4, 1])
    assert mj.weak_log_majorize([1, 0], [2, 0])
    with pytest.raises(ContractError):
        mj.majorize([0, 1], [1, 0])


def test_gauges():
    v = [3.0, 1.0, 2.0]
    assert mj.gauge_eval(mj.GaugeSpec.ky_fan(2), v) == 5.0
    assert mj.gauge_eval(mj.GaugeSpec.schatten(2), v) == pytest.approx(math.sqrt(14))
    assert mj.gauge_eval(mj.GaugeSpec.schatten(np.inf), v) == 3.0
    with pytest.raises(ContractError):
        mj.gauge_eval(mj.GaugeSpec.ky_fan(4), v)
    with pytest.raises(ContractError):
        mj.gauge_eval(mj.GaugeSpec("bogus", 1), v)
    t = tc.random_tensor(2, 2, 3, seed=0)
    assert mj.tensor_norm(t, mj.GaugeSpec.ky_fan(1)) == pytest.approx(sp.spectral_norm(t))


def test_holder_contract():
    with pytest.raises(ContractError):
        mj.holder_gauge_check(mj.GaugeSpec.ky_fan(1), [[1, 2]], [0.5])
    assert mj.holder_gauge_check(mj.GaugeSpec.ky_fan(1), [[1, 2], [3, 1]], [0.5, 0.5]).holds


def test_compound_matrix_oracles():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert mj.compound_matrix(a, 2)[0, 0] == pytest.approx(-2.0)
    assert np.allclose(mj.compound_matrix(a, 1), a)
    b = np.random.default_rng(1).standard_normal((4, 4))
    c2 = mj.compound_matrix(b, 2)
    assert np.allclose(c2 @ mj.compound_matrix(b.T, 2), mj.compound_matrix(b @ b.T, 2))
    with pytest.raises(ResourceError):
        mj.compound_matrix(np.eye(30), 5)


def test_antisymmetric_norm_product():
    for seed in range(10):
        t = tc.random_tensor(2, 2, 3, seed=seed)
        for k in (1, 2, 3):
            assert mj.antisym_norm_check(t, k)


def test_function_roles():
    assert "nd_convex" in mj.function_roles(sp.exp_fn())
    assert mj.function_roles(mj.log_shift_fn(0.5)) == set()
    assert "logexp" not in mj.function_roles(mj.hinge_fn(-1.0))
    with pytest.raises(ContractError):
        c, mu = premise_instance("thm4", np.random.default_rng(0))
        mj.integral_majorization_check("thm4", c, mu, sp.power_fn(0.5), mj.GaugeSpec.ky_fan(1))


@pytest.mark.parametrize("variant", ["thm4", "thm5", "thm7", "thm10"])
def test_premise_implies_conclusion(variant):
    rng = np.random.default_rng(11)
    for _ in range(25):
        c, mu = premise_instance(variant, rng)
        form = rng.choice(["f", "g"]) if variant in ("thm7", "thm10") else "g"
        rep = mj.integral_majorization_check(variant, c, mu, function_for(variant, form, rng), random_gauge(rng), form)
        assert rep.premise
        assert rep.holds, rep


def test_premise_false_is_reported():
    rng = np.random.default_rng(3)
    d = tc.random_symmetric(2, 2, seed=1)
    big = d * 3.0 + tc.identity(2, 2) * 5.0
    rep = mj.integral_majorization_check("thm4", big, mj.DiscreteMeasure.point(d), sp.exp_fn(), random_gauge(rng))
    assert not rep.premise and not rep.holds


def test_measure_validation():
    d = tc.random_symmetric(2, 2, seed=1)
    with pytest.raises(ContractError):
        mj.DiscreteMeasure([d, d], [0.7, 0.7])
    with pytest.raises(ContractError):
        mj.DiscreteMeasure([d, tc.random_symmetric(3, 2, seed=1)], [0.5, 0.5])


def test_lie_trotter_decreases():
    a, b = tc.random_symmetric(2, 2, seed=1), tc.random_symmetric(2, 2, seed=2)
    errs = [mj.lie_trotter_error([a, b], n) for n in (1, 4, 16, 64)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert mj.lie_trotter_error([a, a * 2.0], 3) < 1e-12


def test_beta0_is_a_density():
    nodes, w = mj.trapezoid_weights(12.0, 8001)
    assert w.sum() == pytest.approx(1.0, abs=1e-9)
    assert mj.beta0(0.0) == pytest.approx(math.pi / 4)
    assert mj.beta0(400.0) >= 0.0


def test_multivariate_inequality_and_domain():
    pair = [sp.tensor_exp(tc.random_symmetric(2, 2, seed=s)) for s in (5, 6)]
    rep = mj.multivariate_norm_ineq_check(pair, sp.power_fn(1.0), mj.GaugeSpec.ky_fan(2))
    assert rep.holds and rep.lhs <= rep.rhs + 1e-6
    with pytest.raises(DomainError):
        mj.multivariate_norm_ineq_check([tc.random_symmetric(2, 2, seed=1) - tc.identity(2, 2) * 9.0],
                                        sp.exp_fn(), mj.GaugeSpec.ky_fan(1))
    with pytest.raises(ContractError):
        mj.multivariate_norm_ineq_check(pair, sp.exp_fn(), mj.GaugeSpec.ky_fan(1), t_max=0.5, steps=11)


def test_commuting_pair_gives_equality():
    # for commuting C_i the integrand is constant in t, so both sides agree
    c = sp.tensor_exp(tc.random_symmetric(2, 2, seed=8))
    rep = mj.multivariate_norm_ineq_check([c, c], sp.power_fn(1.0), mj.GaugeSpec.schatten(2))
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-4)


def test_schatten_limit_monotone():
    mu = mj.DiscreteMeasure([sp.tensor_exp(tc.random_symmetric(2, 2, seed=s)) for s in (1, 2)], [0.3, 0.7])
    rep = mj.schatten_limit_check(mu, [0.01, 0.001, 0.0001])
    assert rep.monotone and rep.converged


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.integers(0, 2 ** 31))
def test_doubly_stochastic_image_is_majorized(vals, seed):
    rng = np.random.default_rng(seed)
    y = np.sort(np.array(vals))[::-1]
    n = y.size
    mix = sum(w * np.eye(n)[rng.permutation(n)] for w in rng.dirichlet(np.ones(3)))
    x = np.sort(mix @ y)[::-1]
    assert mj.majorize(x, y, tol=1e-9)
    assert mj.weak_majorize(x - 0.1, y, tol=1e-9)


@given(st.integers(0, 2 ** 31), st.integers(1, 3))
def test_holder_gauge_property(seed, k):
    rng = np.random.default_rng(seed)
    vecs = rng.random((2, 4))
    alphas = [0.3, 0.7]
    assert mj.holder_gauge_check(mj.GaugeSpec.ky_fan(k), vecs, alphas).holds
    assert mj.holder_gauge_check(mj.GaugeSpec.schatten(k), vecs, alphas).holds
