import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tchernoff import spectral as sp
from tchernoff import tensor as tc
from tchernoff.errors import ContractError, DomainError

# frequency blocks S1 + S2 = [[3,1],[1,2]] and S1 - S2 = [[1,1],[1,4]]
S = tc.Tensor3(np.array([[[2, 1], [1, 3]], [[1, 0], [0, -1]]]))
SQ5, SQ13 = math.sqrt(5), math.sqrt(13)


def test_eigenvalues_hand_oracle():
    expected = sorted([(5 + SQ5) / 2, (5 - SQ5) / 2, (5 + SQ13) / 2, (5 - SQ13) / 2], reverse=True)
    assert np.allclose(sp.t_eigenvalues(S), expected, rtol=1e-12)
    assert sp.determinant(S) == pytest.approx(15.0, rel=1e-12)
    assert sp.spectral_trace(S) == pytest.approx(10.0, rel=1e-12)
    assert sp.ky_fan_norm(S, 2) == pytest.approx((5 + SQ13) / 2 + (5 + SQ5) / 2, rel=1e-12)
    assert sp.schatten_norm(S, 2) == pytest.approx(math.sqrt(34), rel=1e-12)
    assert sp.schatten_norm(S, np.inf) == pytest.approx((5 + SQ13) / 2, rel=1e-12)


def test_identity_spectrum_and_trace_discrepancy():
    eye = tc.identity(2, 2)
    assert np.array_equal(np.round(sp.t_eigenvalues(eye), 12), [1, 1, 1, 1])
    eye3 = tc.identity(3, 4)
    assert tc.trace(eye3) == 3
    assert sp.spectral_trace(eye3) == pytest.approx(12)


def test_exp_matches_dense_expm():
    from scipy.linalg import expm

    e = sp.tensor_exp(S)
    assert e.is_real
    assert np.allclose(tc.bcirc(e), expm(tc.bcirc(S).real), rtol=1e-10)


def test_log_requires_tpd():
    with pytest.raises(DomainError):
        sp.tensor_log(S - 3.0 * tc.identity(2, 2))
    assert not sp.is_tpd(S - 3.0 * tc.identity(2, 2))
    assert sp.is_tpd(S) and sp.is_tpsd(S)


def test_nonsymmetric_eigendecomposition_rejected():
    with pytest.raises(ContractError):
        sp.t_eigendecomposition(tc.random_tensor(2, 2, 3, seed=1))


def test_complex_scalar_exp_is_consistent():
    z = 0.3 + 0.4j
    e = sp.tensor_exp(S, z)
    w, v = np.linalg.eigh(tc.bcirc(S).real)
    dense = (v * np.exp(z * w)) @ v.T
    assert np.allclose(tc.bcirc(e), dense, rtol=1e-10)


def test_power_function_and_abs():
    pos = sp.tensor_exp(S * 0.5)
    sq = sp.apply_spectral_function(pos, sp.power_fn(0.5))
    assert tc.allclose(sq @ sq, pos)
    t = tc.random_tensor(3, 3, 2, seed=3)
    a = sp.abs_tensor(t)
    assert tc.allclose(a @ a, tc.hermitian_transpose(t) @ t)


def test_frequency_roundtrip():
    t = tc.random_tensor(2, 3, 5, seed=2)
    f = sp.to_frequency(t)
    assert f.is_conjugate_symmetric()
    assert tc.allclose(sp.from_frequency(f), t)


def test_rayleigh_and_courant_fischer():
    lam = sp.t_eigenvalues(S)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = tc.Tensor3(rng.standard_normal((2, 2, 1)))
        q = sp.rayleigh_quotient(S, x)
        assert lam[-1] - 1e-12 <= q <= lam[0] + 1e-12
    dec = sp.t_eigendecomposition(S)
    assert sp.courant_fischer_probe(S, [1, 1]) == pytest.approx(np.min(dec.values[:, 0]))
    with pytest.raises(ContractError):
        sp.courant_fischer_probe(S, [3, 1])


def test_tensor_from_spectrum_real_and_exact():
    vals = np.array([[3.0, 1.0], [2.0, -1.0], [2.0, -1.0]])
    t = sp.tensor_from_spectrum(vals, seed=4)
    assert t.is_real and tc.is_symmetric(t)
    assert np.allclose(sp.t_eigendecomposition(t).values, vals)


def test_ky_fan_bounds():
    with pytest.raises(ContractError):
        sp.ky_fan_norm(S, 5)
    with pytest.raises(ContractError):
        sp.schatten_norm(S, 0.5)


seeds = st.integers(0, 2 ** 31)


@given(st.integers(1, 4), st.integers(1, 4), seeds)
def test_eigenvalues_match_bcirc(m, p, seed):
    t = tc.random_symmetric(m, p, seed=seed)
    dense = np.sort(np.linalg.eigvalsh(tc.bcirc(t).real))[::-1]
    assert np.allclose(sp.t_eigenvalues(t), dense, rtol=1e-8, atol=1e-10)
    assert sp.spectral_trace(t) == pytest.approx(p * np.trace(t.data[0]).real, abs=1e-9)


@given(st.integers(1, 3), st.integers(1, 4), seeds)
def test_exp_log_inverse_and_determinant(m, p, seed):
    t = tc.random_symmetric(m, p, seed=seed)
    e = sp.tensor_exp(t)
    assert sp.is_tpd(e)
    assert tc.allclose(sp.tensor_log(e), t, atol=1e-9)
    assert sp.determinant(e) == pytest.approx(math.exp(sp.spectral_trace(t)), rel=1e-8)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), seeds)
def test_norm_properties(m, n, p, seed):
    a = tc.random_tensor(m, m, p, seed=seed)
    b = tc.random_tensor(m, m, p, seed=seed + 1)
    sv = np.linalg.svd(tc.bcirc(a), compute_uv=False)
    for k in range(1, m * p + 1):
        assert sp.ky_fan_norm(a, k) == pytest.approx(np.sum(sv[:k]), rel=1e-8)
        assert sp.ky_fan_norm(a + b, k) <= sp.ky_fan_norm(a, k) + sp.ky_fan_norm(b, k) + 1e-9
    assert sp.schatten_norm(a, 3) <= sp.schatten_norm(a, 2) + 1e-12


@given(st.integers(1, 3), st.integers(1, 4), seeds)
def test_tprod_fft_matches_definition(m, p, seed):
    a = tc.random_tensor(m, m, p, seed=seed, complex_entries=True)
    b = tc.random_tensor(m, 2, p, seed=seed + 1)
    assert tc.allclose(sp.tprod_fft(a, b), a @ b)
