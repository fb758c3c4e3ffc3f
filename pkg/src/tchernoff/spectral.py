"""Frequency-domain view of T-product tensors.

``bcirc(C)`` is block-diagonalized by the unitary DFT ``F_p`` with twiddle
``exp(-2*pi*i/p)``: ``(F_p x I_m) bcirc(C) (F_p^H x I_m) = diag(C_1, ..., C_p)``
where ``C_i`` is the unnormalized FFT of the tube fibres along the slice axis.
Every spectral quantity below is computed from those blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .errors import ContractError, DomainError, StructuralError
from .tensor import ATOL, RTOL, Tensor3, inner_product, is_symmetric, tprod

TPD_TOL = 1e-10


@dataclass(frozen=True)
class FrequencySlices:
    """The diagonal blocks ``C_1..C_p`` of the DFT-similar block-diagonal form."""

    m: int
    n: int
    p: int
    blocks: np.ndarray  # (p, m, n) complex

    def is_conjugate_symmetric(self, atol: float = 1e-9) -> bool:
        """``C_{p+2-i} = conj(C_i)``, which holds exactly for real tensors."""
        mirrored = np.conj(self.blocks[(-np.arange(self.p)) % self.p])
        return bool(np.max(np.abs(mirrored - self.blocks)) <= atol * max(1.0, np.max(np.abs(self.blocks))))


@dataclass(frozen=True)
class TEigenDecomposition:
    """Per-frequency Hermitian eigendecompositions ``C_i = V_i diag(w_i) V_i^H``."""

    values: np.ndarray  # (p, m), each row nonincreasing
    vectors: np.ndarray  # (p, m, m), columns are eigenvectors
    dims: tuple[int, int, int]

    def spectrum(self) -> np.ndarray:
        return _sorted_spectrum(self.values)


def to_frequency(t: Tensor3) -> FrequencySlices:
    m, n, p = t.shape
    return FrequencySlices(m, n, p, np.fft.fft(t.data, axis=0))


def from_frequency(f: FrequencySlices) -> Tensor3:
    return Tensor3(np.fft.ifft(f.blocks, axis=0))


def _to_tensor(blocks: np.ndarray, real: bool) -> Tensor3:
    data = np.fft.ifft(blocks, axis=0)
    return Tensor3(data.real if real else data)


def _sorted_spectrum(values: np.ndarray) -> np.ndarray:
    # flatten slice-major so the stable sort breaks ties by slice, then index
    flat = np.asarray(values, dtype=float).ravel()
    return flat[np.argsort(-flat, kind="stable")]


def _require_square(t: Tensor3) -> None:
    if not t.is_square:
        raise StructuralError(f"square slices required, got {t.shape}")


def _require_symmetric(t: Tensor3) -> None:
    _require_square(t)
    if not is_symmetric(t):
        raise ContractError("tensor is not symmetric under the T-product")


def _hermitian_blocks(t: Tensor3) -> np.ndarray:
    blocks = np.fft.fft(t.data, axis=0)
    return 0.5 * (blocks + np.conj(np.swapaxes(blocks, 1, 2)))


def eigh_blocks(blocks: np.ndarray):
    """Eigendecomposition of a stack of Hermitian blocks via the Jacobi kernel."""
    shape = blocks.shape
    flat = np.ascontiguousarray(blocks.reshape(-1, shape[-2], shape[-1]), dtype=np.complex128)
    w, v = _backend.jacobi_eigh(flat)
    return w.reshape(shape[:-1]), v.reshape(shape)


def t_eigendecomposition(t: Tensor3) -> TEigenDecomposition:
    _require_symmetric(t)
    w, v = eigh_blocks(_hermitian_blocks(t))
    return TEigenDecomposition(w, v, t.shape)


def t_eigenvalues(t: Tensor3) -> np.ndarray:
    """All T-eigenvalues, sorted nonincreasing (length ``m*p``)."""
    return t_eigendecomposition(t).spectrum()


def singular_values_blocks(t: Tensor3) -> np.ndarray:
    """Per-frequency singular values, shape ``(p, min(m, n))``."""
    return np.linalg.svd(np.fft.fft(t.data, axis=0), compute_uv=False)


def t_singular_values(t: Tensor3) -> np.ndarray:
    return _sorted_spectrum(singular_values_blocks(t))


# -- scalar functions applied spectrally ----------------------------------

@dataclass(frozen=True)
class ScalarFunction:
    """A tagged scalar function; tags: exp, log, power, polynomial, hinge, log_shift."""

    name: str
    params: tuple = field(default_factory=tuple)

    def __call__(self, x):
        x = np.asarray(x)
        if self.name == "exp":
            return np.exp(x)
        if self.name == "log":
            return np.log(x.astype(complex) if np.iscomplexobj(x) else x)
        if self.name == "power":
            (alpha,) = self.params
            if np.iscomplexobj(x) or isinstance(alpha, complex):
                return np.exp(alpha * np.log(x.astype(complex)))
            return np.power(x, alpha)
        if self.name == "polynomial":
            coeffs, s = self.params
            base = np.polynomial.polynomial.polyval(x, np.asarray(coeffs, dtype=float))
            if s == 1:
                return base
            if float(s).is_integer():
                return base ** int(s)
            return np.power(base, s)
        if self.name == "hinge":
            (c,) = self.params
            return np.maximum(x + c, 0.0)
        if self.name == "log_shift":
            (delta,) = self.params
            return np.log(delta + x)
        raise ContractError(f"unknown scalar function {self.name!r}")

    def check_domain(self, x: np.ndarray, tol: float = TPD_TOL) -> None:
        """Raise DomainError when ``x`` (real eigenvalues) lies outside the domain."""
        x = np.asarray(x)
        if np.iscomplexobj(x):
            return
        if self.name == "log" and np.min(x) <= tol:
            raise DomainError("log requires a TPD argument")
        if self.name == "power":
            (alpha,) = self.params
            nonneg_int = not isinstance(alpha, complex) and float(alpha).is_integer() and alpha >= 0
            if not nonneg_int:
                floor = tol if (isinstance(alpha, complex) or alpha < 0) else -tol
                if np.min(x) <= floor:
                    raise DomainError(f"power {alpha} requires a TPD argument")
        if self.name == "polynomial":
            coeffs, s = self.params
            if not float(s).is_integer():
                base = np.polynomial.polynomial.polyval(x, np.asarray(coeffs, dtype=float))
                if np.min(base) < -tol:
                    raise DomainError("fractional power of a negative polynomial value")
        if self.name == "log_shift":
            (delta,) = self.params
            if np.min(delta + x) <= 0:
                raise DomainError("log(delta + x) needs delta + x > 0")


def exp_fn() -> ScalarFunction:
    return ScalarFunction("exp")


def log_fn() -> ScalarFunction:
    return ScalarFunction("log")


def power_fn(alpha) -> ScalarFunction:
    return ScalarFunction("power", (alpha,))


def polynomial_fn(coeffs: Sequence[float], s: float = 1.0) -> ScalarFunction:
    return ScalarFunction("polynomial", (tuple(float(a) for a in coeffs), float(s)))


def apply_blocks(w: np.ndarray, v: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Rebuild blocks ``V diag(values) V^H`` for stacked eigendecompositions."""
    return (v * values[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def apply_spectral_function(t: Tensor3, fn: ScalarFunction, z: complex = 1.0) -> Tensor3:
    """``fn(z * t)`` computed per frequency block from its eigendecomposition."""
    dec = t_eigendecomposition(t)
    z = complex(z)
    if z.imag == 0:
        scaled = z.real * dec.values
        fn.check_domain(scaled)
    else:
        # principal branch; the domain is judged on the real spectrum
        scaled = z * dec.values
        if fn.name != "exp":
            fn.check_domain(dec.values)
    out = apply_blocks(dec.values, dec.vectors, fn(scaled))
    return _to_tensor(out, real=t.is_real and z.imag == 0)


def tensor_exp(t: Tensor3, z: complex = 1.0) -> Tensor3:
    return apply_spectral_function(t, exp_fn(), z)


def tensor_log(t: Tensor3) -> Tensor3:
    return apply_spectral_function(t, log_fn())


# -- positivity --------------------------------------------------------------

def _min_eig_if_hermitian(t: Tensor3, tol: float) -> float | None:
    if not t.is_square:
        return None
    blocks = np.fft.fft(t.data, axis=0)
    dev = np.max(np.abs(blocks - np.conj(np.swapaxes(blocks, 1, 2))))
    if dev > tol + RTOL * max(1.0, np.max(np.abs(blocks))):
        return None
    w, _ = eigh_blocks(0.5 * (blocks + np.conj(np.swapaxes(blocks, 1, 2))))
    return float(np.min(w))


def is_tpd(t: Tensor3, tol: float = TPD_TOL) -> bool:
    lo = _min_eig_if_hermitian(t, tol)
    return lo is not None and lo > tol


def is_tpsd(t: Tensor3, tol: float = TPD_TOL) -> bool:
    lo = _min_eig_if_hermitian(t, tol)
    return lo is not None and lo >= -tol


# -- norms -------------------------------------------------------------------

def abs_tensor(t: Tensor3) -> Tensor3:
    """``|t| = (t^H * t)^(1/2)`` via the per-frequency polar factor."""
    _require_square(t)
    blocks = np.fft.fft(t.data, axis=0)
    _, s, vh = np.linalg.svd(blocks)
    v = np.conj(np.swapaxes(vh, 1, 2))
    return _to_tensor(apply_blocks(s, v, s), real=t.is_real)


def ky_fan_norm(t: Tensor3, k: int) -> float:
    sv = t_singular_values(t)
    if not 1 <= k <= sv.size:
        raise ContractError(f"Ky Fan index k={k} outside 1..{sv.size}")
    return float(np.sum(sv[:k]))


def schatten_norm(t: Tensor3, q: float) -> float:
    if q < 1:
        raise ContractError(f"Schatten exponent must be >= 1, got {q}")
    sv = t_singular_values(t)
    if math.isinf(q):
        return float(sv[0])
    return float(np.sum(sv ** q) ** (1.0 / q))


def spectral_norm(t: Tensor3) -> float:
    return ky_fan_norm(t, 1)


def determinant(t: Tensor3) -> float:
    return float(np.prod(t_eigenvalues(t)))


def spectral_trace(t: Tensor3) -> float:
    """Sum of T-eigenvalues, i.e. the trace of ``bcirc(t)`` (``p * tr C^(1)``)."""
    return float(np.sum(t_eigenvalues(t)))


# -- variational characterizations ------------------------------------------

def rayleigh_quotient(t: Tensor3, x: Tensor3) -> float:
    _require_symmetric(t)
    if x.cols != 1 or x.rows != t.rows or x.depth != t.depth:
        raise StructuralError(f"probe must be {t.rows}x1x{t.depth}, got {x.shape}")
    denom = inner_product(x, x).real
    if denom <= 0:
        raise ContractError("probe tensor must be nonzero")
    return float(inner_product(x, tprod(t, x)).real / denom)


def courant_fischer_probe(t: Tensor3, ks: Sequence[int]) -> float:
    """``min_i lambda_{i,k_i}``, provided it dominates every ``lambda_{i,k_i+1}``.

    ``ks`` are one-based per-slice indices.
    """
    dec = t_eigendecomposition(t)
    p, m = dec.values.shape
    ks = [int(k) for k in ks]
    if len(ks) != p or any(not 1 <= k <= m for k in ks):
        raise ContractError(f"need {p} indices in 1..{m}, got {ks}")
    picked = np.array([dec.values[i, k - 1] for i, k in enumerate(ks)])
    lam = float(np.min(picked))
    for i, k in enumerate(ks):
        if k < m and dec.values[i, k] > lam + ATOL:
            raise ContractError(f"indices {ks} are infeasible at slice {i + 1}")
    return lam


# -- helpers -----------------------------------------------------------------

def tprod_fft(a: Tensor3, b: Tensor3) -> Tensor3:
    """T-product through the frequency domain (slice-wise products)."""
    if a.cols != b.rows or a.depth != b.depth:
        raise StructuralError(f"cannot T-multiply {a.shape} by {b.shape}")
    blocks = np.fft.fft(a.data, axis=0) @ np.fft.fft(b.data, axis=0)
    return _to_tensor(blocks, real=a.is_real and b.is_real)


def _paired_unitaries(m: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """Random unitaries ``Q_i`` with ``Q_{p-i} = conj(Q_i)`` so the tensor is real."""
    qs = np.empty((p, m, m), dtype=np.complex128)
    for i in range(p):
        j = (-i) % p
        if j < i:
            qs[i] = np.conj(qs[j])
            continue
        if j == i:
            q, r = np.linalg.qr(rng.standard_normal((m, m)))
            qs[i] = q * np.sign(np.diag(r))
        else:
            z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            q, r = np.linalg.qr(z)
            qs[i] = q * (np.diag(r) / np.abs(np.diag(r)))
    return qs


def random_orthogonal(m: int, p: int, seed=None) -> Tensor3:
    """Real orthogonal tensor ``U`` (``U^T * U = I``) from per-frequency unitaries."""
    rng = np.random.default_rng(seed)
    return _to_tensor(_paired_unitaries(m, p, rng), real=True)


def tensor_from_spectrum(values: np.ndarray, seed=None) -> Tensor3:
    """Symmetric tensor whose block ``i`` has eigenvalues ``values[i]``.

    The result is real when ``values[i]`` and ``values[p-i]`` agree as multisets.
    """
    values = np.asarray(values, dtype=float)
    p, m = values.shape
    rng = np.random.default_rng(seed)
    qs = _paired_unitaries(m, p, rng)
    paired = all(
        np.allclose(np.sort(values[i]), np.sort(values[(-i) % p])) for i in range(p)
    )
    if paired:
        # align the mirrored block with the conjugated eigenbasis
        values = np.array([values[min(i, (-i) % p)] for i in range(p)])
    blocks = apply_blocks(values, qs, values.astype(complex))
    return _to_tensor(blocks, real=paired)
