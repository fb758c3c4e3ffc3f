"""Dense order-3 tensors and the definitional T-product algebra.

A tensor with ``m`` rows, ``n`` columns and ``p`` frontal slices is stored as a
complex array of shape ``(p, m, n)``: slice-major, row-major inside a slice.
Everything in this module works directly on the block-circulant layout; the
frequency-domain shortcuts live in :mod:`tchernoff.spectral`.
"""
from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError

REAL_TOL = 1e-12
ATOL = 1e-10
RTOL = 1e-8
CIRCULANT_TOL = 1e-10


class Tensor3:
    """Immutable dense ``m x n x p`` tensor over the complex numbers."""

    __slots__ = ("_data", "_is_real")

    def __init__(self, data):
        arr = np.array(data, dtype=np.complex128)
        if arr.ndim != 3 or 0 in arr.shape:
            raise StructuralError(f"expected a non-empty (p, m, n) array, got shape {arr.shape}")
        arr.setflags(write=False)
        self._data = arr
        self._is_real = None

    @classmethod
    def from_slices(cls, slices: Sequence) -> "Tensor3":
        """Build from frontal slices ``C^(1), ..., C^(p)``."""
        return cls(np.stack([np.atleast_2d(np.asarray(s, dtype=np.complex128)) for s in slices]))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[1]

    @property
    def cols(self) -> int:
        return self._data.shape[2]

    @property
    def depth(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self) -> tuple[int, int, int]:
        """``(m, n, p)`` in the usual mathematical order."""
        p, m, n = self._data.shape
        return m, n, p

    @property
    def is_real(self) -> bool:
        if self._is_real is None:
            self._is_real = bool(np.max(np.abs(self._data.imag)) <= REAL_TOL)
        return self._is_real

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def slice(self, k: int) -> np.ndarray:
        """Frontal slice ``C^(k+1)`` (zero-based ``k``)."""
        return self._data[k]

    def real(self) -> "Tensor3":
        return Tensor3(self._data.real)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._data)))

    def __add__(self, other: "Tensor3") -> "Tensor3":
        return add(self, other)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return add(self, negate(other))

    def __neg__(self) -> "Tensor3":
        return negate(self)

    def __mul__(self, c) -> "Tensor3":
        return scale(self, c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Tensor3":
        return scale(self, 1.0 / c)

    def __matmul__(self, other: "Tensor3") -> "Tensor3":
        return tprod(self, other)

    def __repr__(self) -> str:
        m, n, p = self.shape
        kind = "real" if self.is_real else "complex"
        return f"Tensor3({m}x{n}x{p}, {kind})"


def _check_same_dims(a: Tensor3, b: Tensor3) -> None:
    if a.data.shape != b.data.shape:
        raise StructuralError(f"dimension mismatch: {a.shape} vs {b.shape}")


def _check_square(t: Tensor3) -> None:
    if not t.is_square:
        raise StructuralError(f"square slices required, got {t.shape}")


def add(a: Tensor3, b: Tensor3) -> Tensor3:
    _check_same_dims(a, b)
    return Tensor3(a.data + b.data)


def scale(t: Tensor3, c) -> Tensor3:
    return Tensor3(complex(c) * t.data)


def negate(t: Tensor3) -> Tensor3:
    return Tensor3(-t.data)


def zeros(m: int, n: int, p: int) -> Tensor3:
    return Tensor3(np.zeros((p, m, n)))


def identity(m: int, p: int) -> Tensor3:
    """Identity tensor: ``I_m`` in the first slice, zeros elsewhere."""
    data = np.zeros((p, m, m))
    data[0] = np.eye(m)
    return Tensor3(data)


def random_tensor(m: int, n: int, p: int, seed=None, complex_entries: bool = False) -> Tensor3:
    rng = np.random.default_rng(seed)
    data = rng.standard_normal((p, m, n))
    if complex_entries:
        data = data + 1j * rng.standard_normal((p, m, n))
    return Tensor3(data)


def random_symmetric(m: int, p: int, seed=None) -> Tensor3:
    """Real symmetric tensor ``(C + C^T) / 2`` with the T-transpose."""
    c = random_tensor(m, m, p, seed)
    return scale(add(c, transpose(c)), 0.5)


def bcirc(t: Tensor3) -> np.ndarray:
    """Block-circulant matrix whose first block column is the frontal slices."""
    p, m, n = t.data.shape
    out = np.empty((m * p, n * p), dtype=np.complex128)
    for i in range(p):
        for j in range(p):
            out[i * m:(i + 1) * m, j * n:(j + 1) * n] = t.data[(i - j) % p]
    return out


def bcirc_inv(b: np.ndarray, dims: tuple[int, int, int], tol: float = CIRCULANT_TOL) -> Tensor3:
    """Recover the tensor of dimensions ``(m, n, p)`` from its block-circulant matrix."""
    m, n, p = dims
    b = np.asarray(b, dtype=np.complex128)
    if b.shape != (m * p, n * p):
        raise StructuralError(f"matrix of shape {b.shape} cannot be bcirc of a {m}x{n}x{p} tensor")
    t = Tensor3(b[:, :n].reshape(p, m, n))
    deviation = np.max(np.abs(bcirc(t) - b))
    if deviation > tol:
        raise StructuralError(f"matrix is not block circulant (deviation {deviation:.3e})")
    return t


def unfold(t: Tensor3) -> np.ndarray:
    """Stack the frontal slices vertically."""
    p, m, n = t.data.shape
    return t.data.reshape(p * m, n).copy()


def fold(mat: np.ndarray, dims: tuple[int, int, int]) -> Tensor3:
    m, n, p = dims
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape != (m * p, n):
        raise StructuralError(f"cannot fold a {mat.shape} matrix into {m}x{n}x{p}")
    return Tensor3(mat.reshape(p, m, n))


def tprod(a: Tensor3, b: Tensor3) -> Tensor3:
    """T-product ``fold(bcirc(a) . unfold(b))``."""
    if a.cols != b.rows or a.depth != b.depth:
        raise StructuralError(f"cannot T-multiply {a.shape} by {b.shape}")
    out = fold(bcirc(a) @ unfold(b), (a.rows, b.cols, a.depth))
    if a.is_real and b.is_real:
        return out.real()
    return out


def _reverse_tail(data: np.ndarray) -> np.ndarray:
    # slice k -> slice (p + 2 - k) for k >= 2, one-based
    return np.concatenate([data[:1], data[1:][::-1]], axis=0)


def transpose(t: Tensor3) -> Tensor3:
    _check_square(t)
    return Tensor3(np.swapaxes(_reverse_tail(t.data), 1, 2))


def hermitian_transpose(t: Tensor3) -> Tensor3:
    _check_square(t)
    return Tensor3(np.conj(np.swapaxes(_reverse_tail(t.data), 1, 2)))


def trace(t: Tensor3) -> complex:
    """Sum of the diagonal entries of every frontal slice."""
    _check_square(t)
    return complex(np.trace(t.data, axis1=1, axis2=2).sum())


def inner_product(a: Tensor3, b: Tensor3) -> complex:
    _check_same_dims(a, b)
    return complex(np.vdot(a.data, b.data))


def allclose(a: Tensor3, b: Tensor3, atol: float = ATOL, rtol: float = RTOL) -> bool:
    """Max-abs entry difference within ``atol + rtol * max-abs``."""
    if a.data.shape != b.data.shape:
        return False
    scale_ = max(a.max_abs(), b.max_abs())
    return bool(np.max(np.abs(a.data - b.data)) <= atol + rtol * scale_)


def is_symmetric(t: Tensor3, atol: float = ATOL, rtol: float = RTOL) -> bool:
    """Self-adjoint under the T-product (``C^H = C``; for real tensors ``C^T = C``)."""
    return t.is_square and allclose(hermitian_transpose(t), t, atol, rtol)


# -- serialization -----------------------------------------------------------

def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def to_text(t: Tensor3) -> str:
    m, n, p = t.shape
    lines = [f"{m} {n} {p}"]
    for k in range(p):
        for row in t.data[k]:
            lines.append(" ".join(_fmt_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Tensor3:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise StructuralError("tensor text must start with a 'm n p' header")
    m, n, p = (int(v) for v in rows[0])
    body = rows[1:]
    if len(body) != m * p or any(len(r) != n for r in body):
        raise StructuralError(f"expected {m * p} rows of {n} entries after the header")
    values = np.array([[complex(tok) for tok in r] for r in body], dtype=np.complex128)
    return Tensor3(values.reshape(p, m, n))


def to_json(t: Tensor3) -> str:
    m, n, p = t.shape
    flat = t.data.ravel()
    return json.dumps({"m": m, "n": n, "p": p, "re": flat.real.tolist(), "im": flat.imag.tolist()})


def from_json(text: str) -> Tensor3:
    obj = json.loads(text)
    m, n, p = int(obj["m"]), int(obj["n"]), int(obj["p"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != m * n * p or im.size != re.size:
        raise StructuralError("entry count does not match m*n*p")
    return Tensor3((re + 1j * im).reshape(p, m, n))


def stack(tensors: Iterable[Tensor3]) -> np.ndarray:
    """Stack tensors into a ``(count, p, m, n)`` complex array."""
    return np.stack([t.data for t in tensors])
