"""Quick invariant suites used by ``tchernoff verify``.

Each suite returns a mapping ``check name -> bool``; all checks are seeded.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import chernoff as ch
from . import expander as ex
from . import majorization as mj
from . import spectral as sp
from . import tensor as tc

SUITES = ("core", "spectral", "majorization", "expander", "chernoff")


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def suite_core(seed: int) -> dict[str, bool]:
    rng = np.random.default_rng(seed)
    tprod_ok = transpose_ok = roundtrip_ok = True
    for _ in range(20):
        m, n, q, p = (int(x) for x in rng.integers(1, 5, size=4))
        a = tc.random_tensor(m, n, p, seed=rng.integers(2 ** 32))
        b = tc.random_tensor(n, q, p, seed=rng.integers(2 ** 32))
        tprod_ok &= _rel(tc.bcirc(tc.tprod(a, b)), tc.bcirc(a) @ tc.bcirc(b)) < 1e-10
        sq = tc.random_tensor(m, m, p, seed=rng.integers(2 ** 32))
        transpose_ok &= _rel(tc.bcirc(tc.transpose(sq)), tc.bcirc(sq).T) < 1e-12
        roundtrip_ok &= tc.allclose(tc.from_text(tc.to_text(a)), a)
    eye = tc.identity(3, 4)
    return {
        "tprod_matches_bcirc": bool(tprod_ok),
        "transpose_matches_bcirc": bool(transpose_ok),
        "text_roundtrip": bool(roundtrip_ok),
        "identity_is_neutral": tc.allclose(tc.tprod(eye, tc.random_tensor(3, 2, 4, seed=seed)),
                                           tc.random_tensor(3, 2, 4, seed=seed)),
        "trace_identity_is_m": abs(tc.trace(eye) - 3) < 1e-12,
    }


def suite_spectral(seed: int) -> dict[str, bool]:
    rng = np.random.default_rng(seed)
    eig_ok = exp_log_ok = trace_ok = True
    for _ in range(10):
        m, p = (int(x) for x in rng.integers(1, 5, size=2))
        t = tc.random_symmetric(m, p, seed=rng.integers(2 ** 32))
        dense = np.sort(np.linalg.eigvalsh(tc.bcirc(t).real))[::-1]
        eig_ok &= _rel(sp.t_eigenvalues(t), dense) < 1e-8
        trace_ok &= abs(sp.spectral_trace(t) - p * np.trace(t.data[0]).real) < 1e-9 * max(1.0, abs(sp.spectral_trace(t)))
        pos = sp.tensor_exp(t)
        exp_log_ok &= tc.allclose(sp.tensor_exp(sp.tensor_log(pos)), pos, rtol=1e-8)
    return {
        "eigenvalues_match_dense": bool(eig_ok),
        "spectral_trace_is_p_trace_slice1": bool(trace_ok),
        "exp_log_inverse": bool(exp_log_ok),
        "identity_eigenvalues": bool(np.allclose(sp.t_eigenvalues(tc.identity(2, 2)), 1.0)),
    }


def suite_majorization(seed: int) -> dict[str, bool]:
    rng = np.random.default_rng(seed)
    antisym = all(
        mj.antisym_norm_check(tc.random_tensor(2, 2, 2, seed=rng.integers(2 ** 32)), k) for k in (1, 2, 3)
    )
    x = np.sort(rng.random(5))[::-1]
    avg = np.full(5, x.mean())
    holder = mj.holder_gauge_check(mj.GaugeSpec.schatten(2.0), [rng.random(4), rng.random(4)], [0.5, 0.5]).holds
    pair = [sp.tensor_exp(tc.random_symmetric(2, 2, seed=rng.integers(2 ** 32))) for _ in range(2)]
    multi = mj.multivariate_norm_ineq_check(pair, sp.exp_fn(), mj.GaugeSpec.ky_fan(1), steps=801).holds
    return {
        "antisymmetric_norm_product": bool(antisym),
        "average_is_majorized": mj.majorize(avg, x),
        "holder_gauge": bool(holder),
        "multivariate_norm_inequality": bool(multi),
    }


def suite_expander(seed: int) -> dict[str, bool]:
    k4 = ex.gen_complete(4)
    walks, probs = ex.walk_distribution(ex.gen_cycle(5), 4)
    g = ex.gen_random_regular(12, 4, seed)
    sample = ex.sample_walks(g, 6, 50, seed)
    return {
        "complete_lambda": abs(k4.lam - 1 / 3) < 1e-12,
        "walk_probabilities_sum_to_one": abs(probs.sum() - 1) < 1e-12,
        "walks_follow_edges": all(ex.is_valid_walk(g, w) for w in sample),
        "edge_list_roundtrip": np.array_equal(ex.from_edge_list(ex.to_edge_list(g)).adjacency, g.adjacency),
    }


def suite_chernoff(seed: int) -> dict[str, bool]:
    g = ex.gen_complete(3)
    asg = ch.random_assignment(g, 2, 2, 1.0, seed=seed)
    op = ch.MomentOperator(g, asg, 0.1, 1.0, 0.5)
    exact = ch.moment_exact(op, 3)
    transfer = ch.moment_transfer(op, 3)
    bound = ch.lemma43_bound(0.1, 1.0, 0.5, 1.0, g.lam, 3, 2, 2)
    gam = ch.gamma_empirical_check(op, trials=5, seed=seed)
    prm = ch.BoundParams(kappa=2, k=1, C=1.0, sigma=1.0, lam_bar=0.0)
    theta = 3 * 2 * prm.kappa
    pt = ch.main_bound_at(theta, prm, 2, 2, 1.0)
    cor = ch.corollary_bound(theta, prm, 2, 2, 1.0)
    tensors = [tc.random_symmetric(2, 2, seed=seed + i) for i in range(3)]
    return {
        "transfer_matches_exact": abs(transfer - exact) <= 1e-8 * abs(exact),
        "moment_below_lemma43": exact <= bound,
        "gamma_factors": gam.holds,
        "corollary_matches_minimization": abs(pt.bound - cor.value_derived) <= 1e-6 * cor.value_derived,
        "ky_fan_sum": ch.ky_fan_sum_check(tensors, 2.0, 2).holds,
        "fit_constant_finite": math.isfinite(ch.gaussian_domination_fit(1.0)[0]),
    }


_RUNNERS: dict[str, Callable[[int], dict[str, bool]]] = {
    "core": suite_core,
    "spectral": suite_spectral,
    "majorization": suite_majorization,
    "expander": suite_expander,
    "chernoff": suite_chernoff,
}


def run_suites(names, seed: int) -> dict[str, dict[str, bool]]:
    return {name: {k: bool(v) for k, v in _RUNNERS[name](seed).items()} for name in names}
