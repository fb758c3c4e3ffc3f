"""Majorization relations and numerical checks of the norm inequalities built on them.

Every check returns a :class:`CheckReport`; tests assert ``premise => holds``.
Functions fed to the theorem checks come from a small whitelist whose
convexity properties are recorded next to each tag.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, DomainError, ResourceError
from .spectral import (
    ScalarFunction,
    apply_blocks,
    eigh_blocks,
    exp_fn,
    is_tpd,
    is_tpsd,
    power_fn,
    t_eigenvalues,
    t_singular_values,
)
from .tensor import Tensor3, bcirc, is_symmetric

MAJ_TOL = 1e-10
HOLDER_TOL = 1e-10
CONCLUSION_TOL = 1e-8
QUADRATURE_BUDGET = 1e-6
COMPOUND_LIMIT = 5000


@dataclass(frozen=True)
class CheckReport:
    check: str
    premise: bool
    lhs: float
    rhs: float
    holds: bool

    def to_dict(self) -> dict:
        return {"check": self.check, "premise": self.premise, "lhs": self.lhs,
                "rhs": self.rhs, "holds": self.holds}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# -- vector relations ---------------------------------------------------------

def _as_sorted(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ContractError(f"{name} must be a vector")
    if np.any(np.diff(x) > MAJ_TOL * max(1.0, float(np.max(np.abs(x), initial=0.0)))):
        raise ContractError(f"{name} must be sorted nonincreasing")
    return x


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x, y = _as_sorted(x, "x"), _as_sorted(y, "y")
    if x.shape != y.shape:
        raise ContractError(f"length mismatch: {x.size} vs {y.size}")
    return x, y


def weak_majorize(x, y, tol: float = MAJ_TOL) -> bool:
    """``x <_w y``: every prefix sum of ``x`` is at most that of ``y``."""
    x, y = _pair(x, y)
    return bool(np.all(np.cumsum(x) <= np.cumsum(y) + tol))


def majorize(x, y, tol: float = MAJ_TOL) -> bool:
    x, y = _pair(x, y)
    return weak_majorize(x, y, tol) and abs(float(np.sum(x) - np.sum(y))) <= tol


def _log_prefix(x, y):
    x, y = _pair(x, y)
    if np.min(x, initial=0.0) < 0 or np.min(y, initial=0.0) < 0:
        raise ContractError("log majorization needs nonnegative entries")
    with np.errstate(divide="ignore"):
        return np.cumsum(np.log(x)), np.cumsum(np.log(y))


def weak_log_majorize(x, y, tol: float = MAJ_TOL) -> bool:
    """Prefix products of ``x`` bounded by those of ``y`` (compared in logs)."""
    lx, ly = _log_prefix(x, y)
    return bool(np.all((lx == -np.inf) | (lx <= ly + tol)))


def log_majorize(x, y, tol: float = MAJ_TOL) -> bool:
    if not weak_log_majorize(x, y, tol):
        return False
    lx, ly = _log_prefix(x, y)
    if lx[-1] == -np.inf or ly[-1] == -np.inf:
        return bool(lx[-1] == ly[-1])
    return abs(float(lx[-1] - ly[-1])) <= tol


# -- gauge functions ------------------------------------------------------------

@dataclass(frozen=True)
class GaugeSpec:
    """Symmetric gauge function: ``kind`` is ``"kyfan"`` (param k) or ``"schatten"`` (param q)."""

    kind: str
    param: float

    @classmethod
    def ky_fan(cls, k: int) -> "GaugeSpec":
        return cls("kyfan", int(k))

    @classmethod
    def schatten(cls, q: float) -> "GaugeSpec":
        return cls("schatten", float(q))

    def validate(self, dim: int) -> None:
        if self.kind == "kyfan":
            if not 1 <= self.param <= dim:
                raise ContractError(f"Ky Fan index {self.param} outside 1..{dim}")
        elif self.kind == "schatten":
            if self.param < 1:
                raise ContractError(f"Schatten exponent {self.param} < 1")
        else:
            raise ContractError(f"unknown gauge {self.kind!r}")


def gauge_eval(g: GaugeSpec, v) -> float:
    v = np.asarray(v, dtype=float)
    if np.min(v, initial=0.0) < -HOLDER_TOL:
        raise ContractError("gauge functions take nonnegative vectors")
    v = np.sort(np.clip(v, 0.0, None))[::-1]
    g.validate(v.size)
    if g.kind == "kyfan":
        return float(np.sum(v[: int(g.param)]))
    if math.isinf(g.param):
        return float(v[0])
    return float(np.sum(v ** g.param) ** (1.0 / g.param))


def tensor_norm(t: Tensor3, g: GaugeSpec) -> float:
    """Unitarily invariant norm ``rho(lambda(|t|))``."""
    return gauge_eval(g, t_singular_values(t))


def holder_gauge_check(g: GaugeSpec, vectors: Sequence, alphas: Sequence[float]) -> CheckReport:
    b = np.asarray(vectors, dtype=float)
    a = np.asarray(alphas, dtype=float)
    if b.ndim != 2 or b.shape[0] != a.size:
        raise ContractError("need one exponent per vector")
    if np.any(a <= 0) or abs(a.sum() - 1.0) > 1e-12:
        raise ContractError("exponents must be positive and sum to 1")
    if np.min(b) < 0:
        raise ContractError("vectors must be nonnegative")
    lhs = gauge_eval(g, np.prod(b ** a[:, None], axis=0))
    rhs = float(np.prod([gauge_eval(g, row) ** ai for row, ai in zip(b, a)]))
    return CheckReport("holder_gauge", True, lhs, rhs, lhs <= rhs + HOLDER_TOL)


# -- compound matrices -----------------------------------------------------------

def compound_matrix(mat: np.ndarray, k: int) -> np.ndarray:
    """k-th compound: signed k x k minors over lexicographic index subsets."""
    mat = np.asarray(mat)
    n = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != n:
        raise ContractError("compound_matrix needs a square matrix")
    if not 1 <= k <= n:
        raise ContractError(f"k={k} outside 1..{n}")
    size = math.comb(n, k)
    if size > COMPOUND_LIMIT:
        raise ResourceError(f"compound of order C({n},{k}) = {size} exceeds {COMPOUND_LIMIT}")
    subsets = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
    out = np.empty((size, size), dtype=np.result_type(mat.dtype, np.float64))
    for i, rows in enumerate(subsets):
        sub = mat[rows]  # (k, n)
        out[i] = np.linalg.det(np.swapaxes(sub[:, subsets], 0, 1))
    return out


def antisym_norm_values(t: Tensor3, k: int) -> tuple[float, float]:
    """``(||compound_k(bcirc t)||_2, product of the top-k T-singular values)``."""
    comp = compound_matrix(bcirc(t), k)
    lhs = float(np.linalg.norm(comp, 2))
    rhs = float(np.prod(t_singular_values(t)[:k]))
    return lhs, rhs


def antisym_norm_check(t: Tensor3, k: int, rtol: float = 1e-7) -> bool:
    lhs, rhs = antisym_norm_values(t, k)
    return abs(lhs - rhs) <= rtol * max(abs(rhs), 1e-300)


# -- whitelisted scalar functions ----------------------------------------------
# roles: "nd_convex"  nondecreasing convex on the reals
#        "convex"     convex on the reals
#        "logexp"     x -> log f(e^x) convex (the f-form)
#        "exp_convex" x -> f(e^x) convex (the g-form)
#        "nonneg_domain" only defined for nonnegative arguments

def hinge_fn(c: float) -> ScalarFunction:
    """``max(x + c, 0)``."""
    return ScalarFunction("hinge", (float(c),))


def log_shift_fn(delta: float) -> ScalarFunction:
    """``log(delta + x)``; nonnegative on ``(0, inf)`` when ``delta >= 1``."""
    return ScalarFunction("log_shift", (float(delta),))


def function_roles(fn: ScalarFunction) -> set[str]:
    if fn.name == "exp":
        return {"nd_convex", "convex", "logexp", "exp_convex"}
    if fn.name == "power":
        (q,) = fn.params
        if isinstance(q, complex) or q == 0:
            return set()
        roles = {"logexp", "exp_convex", "nonneg_domain"}
        if q >= 1:
            roles |= {"nd_convex", "convex"}
        return roles
    if fn.name == "hinge":
        (c,) = fn.params
        roles = {"nd_convex", "convex", "exp_convex"}
        if c >= 0:
            roles.add("logexp")
        return roles
    if fn.name == "log_shift":
        (delta,) = fn.params
        return {"exp_convex"} if delta >= 1 else set()
    return set()


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure over tensors of equal dimensions."""

    support: tuple
    weights: np.ndarray

    def __init__(self, support: Sequence[Tensor3], weights: Sequence[float]):
        support = tuple(support)
        w = np.asarray(weights, dtype=float)
        if not support:
            raise ContractError("support must be nonempty")
        if w.shape != (len(support),) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ContractError("weights must be nonnegative, one per atom, summing to 1")
        if any(d.data.shape != support[0].data.shape for d in support):
            raise ContractError("support tensors must share dimensions")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", w)

    @classmethod
    def point(cls, d: Tensor3) -> "DiscreteMeasure":
        return cls([d], [1.0])


_THEOREM_ROLE = {"thm4": "nd_convex", "thm5": "convex"}


def integral_majorization_check(
    variant: str,
    c: Tensor3,
    measure: DiscreteMeasure,
    fn: ScalarFunction,
    gauge: GaugeSpec,
    form: str = "g",
) -> CheckReport:
    """Evaluate one integral-average majorization theorem on a discrete measure.

    ``variant`` is thm4 (weak), thm5 (strong), thm7 (weak log) or thm10 (log).
    For the log variants ``form`` picks the geometric-mean conclusion ("f")
    or the arithmetic one ("g").
    """
    if variant not in ("thm4", "thm5", "thm7", "thm10"):
        raise ContractError(f"unknown variant {variant!r}")
    roles = function_roles(fn)
    if variant in _THEOREM_ROLE:
        needed = _THEOREM_ROLE[variant]
    elif form in ("f", "g"):
        needed = "logexp" if form == "f" else "exp_convex"
    else:
        raise ContractError(f"form must be 'f' or 'g', got {form!r}")
    if needed not in roles:
        raise ContractError(f"{fn.name}{fn.params} is not certified for {variant} ({needed})")

    tensors = (c,) + measure.support
    if not all(is_symmetric(t) for t in tensors):
        raise ContractError("all tensors must be symmetric")
    log_variant = variant in ("thm7", "thm10")
    if (log_variant or "nonneg_domain" in roles) and not all(is_tpsd(t) for t in tensors):
        raise ContractError(f"{variant} with {fn.name} needs TPSD tensors")

    lam_c = t_eigenvalues(c)
    lam_d = np.array([t_eigenvalues(d) for d in measure.support])
    w = measure.weights
    if log_variant:
        lam_c = np.clip(lam_c, 0.0, None)
        lam_d = np.clip(lam_d, 0.0, None)
        with np.errstate(divide="ignore"):
            target = np.exp(w @ np.log(lam_d))
        premise = (weak_log_majorize if variant == "thm7" else log_majorize)(lam_c, target)
    else:
        target = w @ lam_d
        premise = (weak_majorize if variant == "thm4" else majorize)(lam_c, target)

    lhs = gauge_eval(gauge, fn(lam_c))
    per_atom = np.array([gauge_eval(gauge, fn(row)) for row in lam_d])
    if log_variant and form == "f":
        with np.errstate(divide="ignore"):
            rhs = float(np.exp(w @ np.log(per_atom)))
    else:
        rhs = float(w @ per_atom)
    holds = lhs <= rhs + CONCLUSION_TOL * max(1.0, abs(rhs))
    return CheckReport(f"integral_majorization_{variant}", bool(premise), float(lhs), rhs, bool(holds))


# -- Lie-Trotter ----------------------------------------------------------------

def _exp_blocks(t: Tensor3, scale: float) -> np.ndarray:
    blocks = np.fft.fft(t.data, axis=0)
    blocks = 0.5 * (blocks + np.conj(np.swapaxes(blocks, 1, 2)))
    w, v = eigh_blocks(blocks)
    return apply_blocks(w, v, np.exp(scale * w))


def lie_trotter_error(tensors: Sequence[Tensor3], n: int) -> float:
    """Spectral-norm distance ``||(prod_k exp(L_k/n))^n - exp(sum_k L_k)||``."""
    if n < 1:
        raise ContractError("n must be >= 1")
    tensors = list(tensors)
    if not tensors or not all(is_symmetric(t) for t in tensors):
        raise ContractError("need a nonempty list of symmetric tensors")
    step = _exp_blocks(tensors[0], 1.0 / n)
    for t in tensors[1:]:
        step = step @ _exp_blocks(t, 1.0 / n)
    approx = np.linalg.matrix_power(step, n)
    total = tensors[0]
    for t in tensors[1:]:
        total = total + t
    exact = _exp_blocks(total, 1.0)
    return float(np.max(np.linalg.svd(approx - exact, compute_uv=False)))


# -- multivariate norm inequality ----------------------------------------------

def beta0(t) -> np.ndarray:
    """``pi / (2 (cosh(pi t) + 1))`` written as ``(pi/4) sech^2(pi t / 2)`` to avoid overflow."""
    y = np.abs(np.asarray(t, dtype=float)) * math.pi
    e = np.exp(-y)
    return math.pi * e / (1.0 + e) ** 2


def trapezoid_weights(t_max: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(-t_max, t_max, steps)
    h = nodes[1] - nodes[0]
    w = np.full(steps, h)
    w[0] = w[-1] = h / 2
    return nodes, w * beta0(nodes)


def multivariate_norm_ineq_check(
    tensors: Sequence[Tensor3],
    fn: ScalarFunction,
    gauge: GaugeSpec,
    t_max: float = 8.0,
    steps: int = 4001,
    form: str = "g",
    budget: float = QUADRATURE_BUDGET,
) -> CheckReport:
    """``||fn(exp sum log C_i)|| <= int ||fn(|prod C_i^{1+it}|)|| beta0(t) dt``.

    ``form="f"`` checks the log-averaged version instead.
    """
    tensors = list(tensors)
    if not tensors:
        raise ContractError("need at least one tensor")
    needed = "logexp" if form == "f" else "exp_convex"
    if needed not in function_roles(fn):
        raise ContractError(f"{fn.name}{fn.params} is not certified for form {form!r}")
    for t in tensors:
        if not is_tpd(t):
            raise DomainError("multivariate norm inequality needs TPD tensors")
    nodes, weights = trapezoid_weights(t_max, steps)
    if weights.sum() < 0.999:
        raise ContractError("quadrature window holds less than 99.9% of the beta0 mass")

    decs = []
    for t in tensors:
        blocks = np.fft.fft(t.data, axis=0)
        decs.append(eigh_blocks(0.5 * (blocks + np.conj(np.swapaxes(blocks, 1, 2)))))

    log_sum = sum(apply_blocks(w, v, np.log(w)) for w, v in decs)
    mu, _ = eigh_blocks(log_sum)
    lhs = gauge_eval(gauge, fn(np.exp(mu).ravel()))

    z = 1.0 + 1j * nodes  # (steps,)
    prod = None
    for w, v in decs:
        powered = np.exp(z[:, None, None] * np.log(w)[None])  # (steps, p, m)
        factor = (v[None] * powered[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))[None]
        prod = factor if prod is None else prod @ factor
    sv = np.linalg.svd(prod, compute_uv=False)  # (steps, p, m)
    sv = sv.reshape(steps, -1)
    values = np.array([gauge_eval(gauge, fn(row)) for row in sv])
    if form == "f":
        rhs = float(np.exp(np.sum(weights * np.log(values))))
    else:
        rhs = float(np.sum(weights * values))
    return CheckReport(f"multivariate_norm_{form}", True, float(lhs), rhs, bool(lhs <= rhs + budget))


# -- Schatten limit -----------------------------------------------------------------

@dataclass(frozen=True)
class LimitReport:
    qs: tuple
    values: tuple
    target: float
    gaps: tuple
    monotone: bool
    converged: bool

    def to_dict(self) -> dict:
        return {"check": "schatten_limit", "premise": True, "lhs": self.values[-1],
                "rhs": self.target, "holds": self.converged}


def schatten_limit_check(measure: DiscreteMeasure, qs: Sequence[float], final_gap: float = 1e-2) -> LimitReport:
    """Track ``(1/q) log int ||D^{-q}||_1 / (mp) dnu`` toward ``-(1/mp) int log det D dnu``."""
    for d in measure.support:
        if not is_tpd(d):
            raise DomainError("schatten_limit_check needs TPD support")
    logs = np.array([np.log(t_eigenvalues(d)) for d in measure.support])  # (atoms, mp)
    mp = logs.shape[1]
    target = float(-(measure.weights @ logs.sum(axis=1)) / mp)
    values = []
    for q in qs:
        # log of sum_tau nu_tau * mean_i exp(-q log lambda_i)
        a = -q * logs
        top = np.max(a)
        inner = np.sum(measure.weights[:, None] * np.exp(a - top)) / mp
        values.append(float((top + math.log(inner)) / q))
    gaps = [abs(v - target) for v in values]
    monotone = all(g2 <= g1 + 1e-15 for g1, g2 in zip(gaps, gaps[1:]))
    return LimitReport(tuple(qs), tuple(values), target, tuple(gaps), monotone,
                       monotone and gaps[-1] < final_gap)


__all__ = [
    "CheckReport", "DiscreteMeasure", "GaugeSpec", "LimitReport", "antisym_norm_check",
    "antisym_norm_values", "beta0", "compound_matrix", "exp_fn", "function_roles",
    "gauge_eval", "hinge_fn", "holder_gauge_check", "integral_majorization_check",
    "lie_trotter_error", "log_majorize", "log_shift_fn", "majorize",
    "multivariate_norm_ineq_check", "power_fn", "schatten_limit_check", "tensor_norm",
    "trapezoid_weights", "weak_log_majorize", "weak_majorize",
]
