"""Expander Chernoff machinery for T-product tensors.

Covers vertex-to-tensor assignments, walk statistics, the transfer-operator
moment and its enumeration oracle, the gamma factors and trace-moment bound,
the main tail bound with its one-variable corollary, and Monte Carlo tails.
"""
from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ContractError, ResourceError
from .expander import RegularGraph, trial_uniforms, walk_distribution, walks_from_uniforms
from .majorization import CheckReport, beta0
from .spectral import (
    TPD_TOL,
    apply_spectral_function,
    eigh_blocks,
    exp_fn,
    polynomial_fn,
    singular_values_blocks,
    spectral_norm,
)
from .tensor import Tensor3, bcirc, identity, is_symmetric, random_symmetric, trace, tprod

# moment_transfer's raw quadratic form equals p^2 times the trace-def moment:
# U0's vector is vec(J_p x I_m), and (1_p x I_m)^T bcirc(C) (1_p x I_m) = p * sum_k C^(k).
# Two such factors give p^2. Confirmed numerically against the enumeration oracle.
TRANSFER_CONSTANT_EXPONENT = 2

DEFAULT_T_GRID = tuple(np.logspace(-4, 1, 200))
GOLDEN_RTOL = 1e-10
DEFAULT_FIT_WINDOW = 4.0
CHUNK = 512
WALK_LIMIT = 10 ** 6


# -- assignments -----------------------------------------------------------------

@dataclass(frozen=True)
class TensorAssignment:
    """Map ``v -> g(v)`` of symmetric real ``m x m x p`` tensors with ``||g(v)|| <= r``."""

    m: int
    p: int
    tensors: tuple
    r: float

    def __post_init__(self):
        for v, t in enumerate(self.tensors):
            if t.shape != (self.m, self.m, self.p) or not is_symmetric(t):
                raise ContractError(f"g({v}) must be a symmetric {self.m}x{self.m}x{self.p} tensor")
            if spectral_norm(t) > self.r + 1e-10:
                raise ContractError(f"||g({v})|| exceeds r={self.r}")

    @property
    def num_vertices(self) -> int:
        return len(self.tensors)

    def stacked(self) -> np.ndarray:
        """Real array ``(n, p, m, m)``."""
        return np.stack([t.data.real for t in self.tensors])


def random_assignment(
    graph: RegularGraph,
    m: int,
    p: int,
    r: float,
    centered: bool = False,
    seed=None,
    positive: bool = False,
) -> TensorAssignment:
    """Random symmetric tensors per vertex, rescaled so the largest norm is ``r``.

    ``centered`` subtracts the mean so that the tensors sum to zero.
    ``positive`` draws TPD tensors ``I + 0.8 H / ||H||`` before rescaling.
    """
    if r <= 0:
        raise ContractError("r must be positive")
    if centered and positive:
        raise ContractError("centered and positive assignments are incompatible")
    rng = np.random.default_rng(seed)
    raw = []
    for _ in range(graph.num_vertices):
        h = random_symmetric(m, p, seed=rng.integers(2 ** 63))
        if positive:
            h = identity(m, p) + h * (0.8 / spectral_norm(h))
        raw.append(h)
    if centered:
        mean = sum(raw[1:], raw[0]) / len(raw)
        raw = [h - mean for h in raw]
    top = max(spectral_norm(h) for h in raw)
    if top == 0:
        return TensorAssignment(m, p, tuple(raw), float(r))
    return TensorAssignment(m, p, tuple((h * (r / top)).real() for h in raw), float(r))


# -- polynomial f ------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """``f(x) = (a_0 + a_1 x + ... + a_d x^d)^s`` with ``a_l >= 0`` and ``s >= 1``."""

    coeffs: tuple
    s: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if not self.coeffs or any(a < 0 for a in self.coeffs):
            raise ContractError("polynomial coefficients must be nonnegative")
        if self.s < 1:
            raise ContractError("outer power s must be >= 1")

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls((0.0, 1.0), 1.0)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return polynomial_fn(self.coeffs, self.s)(x)

    def log_of_exp(self, y: np.ndarray) -> np.ndarray:
        """``log f(exp(y))`` evaluated stably."""
        y = np.asarray(y, dtype=float)
        terms = [math.log(a) + l * y for l, a in enumerate(self.coeffs) if a > 0]
        if not terms:
            return np.full(y.shape, -np.inf)
        return self.s * np.logaddexp.reduce(np.stack(terms), axis=0)


# -- walk statistics ---------------------------------------------------------------

def walk_sum_eigenvalues(assignment: TensorAssignment, walks: np.ndarray) -> np.ndarray:
    """T-eigenvalues of ``sum_j g(v_j)`` per walk, shape ``(trials, p, m)``."""
    g = assignment.stacked()
    walks = np.asarray(walks, dtype=np.int64)
    total = g[walks[:, 0]].copy()
    for j in range(1, walks.shape[1]):
        total += g[walks[:, j]]
    blocks = np.fft.fft(total, axis=1)
    blocks = 0.5 * (blocks + np.conj(np.swapaxes(blocks, -1, -2)))
    w, _ = eigh_blocks(blocks)
    return w


def statistics_from_eigenvalues(w: np.ndarray, poly: Polynomial, k: int) -> np.ndarray:
    """Ky Fan k-norm of ``f(S)`` from the T-eigenvalues of ``S``."""
    fw = np.abs(np.asarray(poly(w.reshape(w.shape[0], -1)), dtype=float))
    if not 1 <= k <= fw.shape[1]:
        raise ContractError(f"Ky Fan index k={k} outside 1..{fw.shape[1]}")
    top = -np.sort(-fw, axis=1)[:, :k]
    return top.sum(axis=1)


def walk_statistics(assignment: TensorAssignment, walks: np.ndarray, poly: Polynomial, k: int) -> np.ndarray:
    return statistics_from_eigenvalues(walk_sum_eigenvalues(assignment, walks), poly, k)


def walk_statistic(assignment: TensorAssignment, walk: Sequence[int], poly: Polynomial, k: int) -> float:
    """``||f(sum_j g(v_j))||_(k)`` for one walk."""
    return float(walk_statistics(assignment, np.asarray([walk]), poly, k)[0])


def assumption2_holds(w: np.ndarray, poly: Polynomial) -> np.ndarray:
    """Per walk: ``f(S)`` is TPD."""
    return np.min(np.asarray(poly(w.reshape(w.shape[0], -1)), dtype=float), axis=1) > TPD_TOL


def assumption1_holds(w: np.ndarray, poly: Polynomial, t: float) -> np.ndarray:
    """Per walk: ``f(exp(tS)) >= exp(t f(S))``, compared eigenvalue by eigenvalue in logs."""
    flat = w.reshape(w.shape[0], -1)
    lhs = poly.log_of_exp(t * flat)
    rhs = t * np.asarray(poly(flat), dtype=float)
    return np.all(lhs >= rhs - 1e-12 * np.maximum(1.0, np.abs(rhs)), axis=1)


# -- bound parameters and the main bound ---------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    kappa: int
    k: int
    coeffs: tuple = (0.0, 1.0)
    s: float = 1.0
    C: float = 1.0
    sigma: float = 1.0
    lam_bar: float = 0.0
    t_grid: tuple = DEFAULT_T_GRID
    thetas: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        if self.kappa < 1:
            raise ContractError("kappa must be >= 1")
        if any(a < 0 for a in self.coeffs) or not self.coeffs:
            raise ContractError("coefficients must be nonnegative")
        if self.s < 1:
            raise ContractError("s must be >= 1")
        if self.sigma <= 0 or self.C <= 0:
            raise ContractError("C and sigma must be positive")
        if any(t <= 0 for t in self.t_grid):
            raise ContractError("t grid must be positive")

    @property
    def poly(self) -> Polynomial:
        return Polynomial(self.coeffs, self.s)

    def check_dims(self, m: int, p: int) -> None:
        if not 1 <= self.k <= m * p:
            raise ContractError(f"k={self.k} outside 1..{m * p}")


def ky_fan_factor(m: int, p: int, k: int) -> float:
    mp = m * p
    return mp + math.sqrt((mp - k) * mp / k)


def log_objective(t, theta: float, params: BoundParams, m: int, p: int, r: float) -> np.ndarray:
    """Log of the bracketed objective minimized over ``t``."""
    t = np.asarray(t, dtype=float)
    kk = params.kappa + 8 * params.lam_bar
    d = len(params.coeffs) - 1
    terms = []
    a0 = params.coeffs[0]
    if a0 > 0:
        terms.append(np.full(t.shape, math.log(a0 * params.k)))
    base = math.log(params.C) + math.log(ky_fan_factor(m, p, params.k))
    for l, a in enumerate(params.coeffs[1:], start=1):
        if a <= 0:
            continue
        lsr = l * params.s * r
        expo = 8 * params.kappa * params.lam_bar + 2 * kk * lsr * t + 2 * (params.sigma * kk * lsr) ** 2 * t ** 2
        terms.append(base + math.log(a) + expo)
    if not terms:
        return np.full(t.shape, -np.inf)
    return (params.s - 1) * math.log(d + 1) - theta * t + np.logaddexp.reduce(np.stack(terms), axis=0)


def golden_section(fn, lo: float, hi: float, rtol: float = GOLDEN_RTOL, max_iter: int = 200) -> float:
    """Minimize a unimodal ``fn`` on ``[lo, hi]``; stops when the bracket is ``rtol`` relative."""
    inv = (math.sqrt(5) - 1) / 2
    x1 = hi - inv * (hi - lo)
    x2 = lo + inv * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if hi - lo <= rtol * max(abs(x1), abs(x2), 1e-300):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv * (hi - lo)
            f2 = fn(x2)
    return x1 if f1 <= f2 else x2


@dataclass(frozen=True)
class BoundPoint:
    theta: float
    bound: float
    t_star: float
    log_bound: float
    at_grid_edge: bool


def main_bound_at(theta: float, params: BoundParams, m: int, p: int, r: float) -> BoundPoint:
    params.check_dims(m, p)
    if not params.t_grid:
        raise ContractError("t grid is empty")
    grid = np.asarray(params.t_grid)
    vals = log_objective(grid, theta, params, m, p, r)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    fn = lambda t: float(log_objective(np.array(t), theta, params, m, p, r))
    t_ref = golden_section(fn, lo, hi) if hi > lo else grid[i]
    best_t, best = (t_ref, fn(t_ref)) if fn(t_ref) <= vals[i] else (float(grid[i]), float(vals[i]))
    edge = i in (0, grid.size - 1)
    return BoundPoint(float(theta), float(np.exp(best)), float(best_t), float(best), edge)


def main_bound(params: BoundParams, m: int, p: int, r: float, thetas: Sequence[float] | None = None) -> list[BoundPoint]:
    """Minimized right-hand side of the tail bound for each threshold."""
    thetas = params.thetas if thetas is None else thetas
    return [main_bound_at(th, params, m, p, r) for th in thetas]


@dataclass(frozen=True)
class CorollaryValue:
    theta: float
    value_printed: float
    t_star_printed: float
    value_derived: float
    as_printed: bool = True


def corollary_bound(theta: float, params: BoundParams, m: int, p: int, r: float) -> CorollaryValue:
    """Identity-f corollary: the printed closed form next to the re-derived minimum."""
    params.check_dims(m, p)
    kk = params.kappa + 8 * params.lam_bar
    sig2 = params.sigma ** 2
    pre = params.C * ky_fan_factor(m, p, params.k)
    t_star = (theta - 2 * kk * r) / (4 * sig2 * r ** 2 * kk ** 2)
    printed = pre * math.exp(
        -theta ** 2 / (8 * sig2 * r ** 2) + theta / (2 * sig2 * r ** 2) - 1 / (2 * sig2)
        + 8 * params.kappa * params.lam_bar
    )
    if t_star > 0:
        derived = pre * math.exp(8 * params.kappa * params.lam_bar - (theta - 2 * kk * r) ** 2 / (8 * sig2 * kk ** 2 * r ** 2))
    else:
        # the quadratic exponent increases on t > 0, so the infimum sits at t -> 0+
        derived = pre * math.exp(8 * params.kappa * params.lam_bar)
    return CorollaryValue(float(theta), printed, t_star, derived)


def gaussian_domination_fit(sigma: float, window: float = DEFAULT_FIT_WINDOW, grid_steps: int = 4001) -> tuple[float, bool]:
    """Smallest C with ``beta0(tau) <= C N(0, sigma^2)(tau)`` on ``[-window, window]``.

    The flag is always True: beta0 decays like exp(-pi |tau|), so no Gaussian
    dominates it on the whole line.
    """
    if window <= 0 or sigma <= 0:
        raise ContractError("window and sigma must be positive")
    taus = np.linspace(0.0, window, grid_steps)
    logs = np.log(beta0(taus)) + math.log(sigma * math.sqrt(2 * math.pi)) + taus ** 2 / (2 * sigma ** 2)
    return float(np.exp(np.max(logs))), True


# -- transfer operator and moments ------------------------------------------------------

class MomentOperator:
    """Dense realization of the walk transfer operator for parameters ``(t, a, b)``."""

    def __init__(self, graph: RegularGraph, assignment: TensorAssignment, t: float, a: float, b: float):
        if graph.num_vertices != assignment.num_vertices:
            raise ContractError("assignment must cover every vertex")
        self.graph = graph
        self.assignment = assignment
        self.t, self.a, self.b = float(t), float(a), float(b)
        m, p = assignment.m, assignment.p
        self.block = (m * p) ** 2
        blocks = []
        for g in assignment.tensors:
            mat = bcirc(g).real
            w, v = np.linalg.eigh(0.5 * (mat + mat.T))
            plus = (v * np.exp(self.t * w * complex(self.a, self.b) / 2)) @ v.T
            minus = (v * np.exp(self.t * w * complex(self.a, -self.b) / 2)) @ v.T
            blocks.append(np.kron(plus, minus))
        self.t_blocks = np.stack(blocks)

    @property
    def size(self) -> int:
        return self.graph.num_vertices * self.block

    def dense(self) -> np.ndarray:
        """``blockdiag(T_v) . (A x I)``, the bcirc-level realization of F * A~."""
        n, nb = self.graph.num_vertices, self.block
        f = np.zeros((n * nb, n * nb), dtype=np.complex128)
        for v in range(n):
            f[v * nb:(v + 1) * nb, v * nb:(v + 1) * nb] = self.t_blocks[v]
        return f @ np.kron(self.graph.normalized, np.eye(nb))

    def start(self) -> np.ndarray:
        """U0 with p^2 columns; only the first is nonzero: (1/sqrt n) 1 x vec(J_p x I_m)."""
        m, p = self.assignment.m, self.assignment.p
        n = self.graph.num_vertices
        u0 = np.zeros((self.size, p * p))
        u0[:, 0] = np.kron(np.ones(n) / math.sqrt(n), np.kron(np.ones((p, p)), np.eye(m)).ravel())
        return u0

    def parallel_projector(self) -> np.ndarray:
        n = self.graph.num_vertices
        return np.kron(np.full((n, n), 1.0 / n), np.eye(self.block))


def transfer_constant(p: int) -> float:
    return float(p ** TRANSFER_CONSTANT_EXPONENT)


def moment_transfer_raw(op: MomentOperator, kappa: int) -> complex:
    u0 = op.start()
    u = u0.astype(np.complex128)
    mat = op.dense()
    for _ in range(kappa):
        u = mat @ u
    return complex(np.sum(u0 * u))


def moment_transfer(op: MomentOperator, kappa: int) -> float:
    """``<U0, bcirc((F*A~)^kappa) U0>`` divided by the frozen constant ``p^2``."""
    raw = moment_transfer_raw(op, kappa)
    _check_real(raw)
    return raw.real / transfer_constant(op.assignment.p)


def _check_real(z: complex, tol: float = 1e-9) -> None:
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        raise ContractError(f"moment has imaginary residue {z.imag:.3e}")


def moment_exact(op: MomentOperator, kappa: int) -> float:
    """Walk-enumeration oracle using the definitional T-product and trace."""
    walks, probs = walk_distribution(op.graph, kappa)
    if walks.shape[0] > WALK_LIMIT:
        raise ResourceError("too many walks")
    plus = [apply_spectral_function(g, exp_fn(), op.t * complex(op.a, op.b) / 2) for g in op.assignment.tensors]
    minus = [apply_spectral_function(g, exp_fn(), op.t * complex(op.a, -op.b) / 2) for g in op.assignment.tensors]
    total = 0j
    for walk, pr in zip(walks, probs):
        prod = plus[walk[0]]
        for v in walk[1:]:
            prod = tprod(prod, plus[v])
        for v in walk[::-1]:
            prod = tprod(prod, minus[v])
        total += pr * trace(prod)
    _check_real(total)
    return total.real


# -- gamma factors and the trace-moment bound -----------------------------------------

def gamma_factors(t: float, a: float, b: float, r: float, lam: float) -> tuple[float, float, float, float]:
    if t < 0 or r < 0 or not 0 <= lam <= 1:
        raise ContractError("need t, r >= 0 and 0 <= lambda <= 1")
    e = math.exp(t * r * math.hypot(a, b))
    return e, lam * (e - 1), e - 1, lam * e


@dataclass(frozen=True)
class GammaReport:
    ratios: tuple  # worst measured ||.|| / ||U-part|| per item
    gammas: tuple
    operator_norms: tuple
    holds: bool


def gamma_empirical_check(op: MomentOperator, trials: int = 100, seed=None, slack: float = 1e-9) -> GammaReport:
    """Measure the four parallel/perpendicular operator bounds on random ``U``."""
    lam = op.graph.lam
    gam = gamma_factors(op.t, op.a, op.b, op.assignment.r, lam)
    mat = op.dense()
    par = op.parallel_projector()
    perp = np.eye(op.size) - par
    pieces = (par @ mat @ par, par @ mat @ perp, perp @ mat @ par, perp @ mat @ perp)
    op_norms = tuple(float(np.linalg.norm(x, 2)) for x in pieces)
    rng = np.random.default_rng(seed)
    p2 = op.assignment.p ** 2
    worst = [0.0] * 4
    ok = all(nrm <= g + slack for nrm, g in zip(op_norms, gam))
    for _ in range(trials):
        u = rng.standard_normal((op.size, p2))
        u_par, u_perp = par @ u, perp @ u
        n_par, n_perp = np.linalg.norm(u_par, 2), np.linalg.norm(u_perp, 2)
        vals = (
            (np.linalg.norm(par @ (mat @ u_par), 2), n_par),
            (np.linalg.norm(par @ (mat @ u_perp), 2), n_perp),
            (np.linalg.norm(perp @ (mat @ u_par), 2), n_par),
            (np.linalg.norm(perp @ (mat @ u_perp), 2), n_perp),
        )
        for i, ((num, den), g) in enumerate(zip(vals, gam)):
            ok &= num <= g * den + slack
            if den > 0:
                worst[i] = max(worst[i], num / den)
    return GammaReport(tuple(worst), gam, op_norms, bool(ok))


def lemma43_bound(t: float, a: float, b: float, r: float, lam: float, kappa: int, m: int, p: int) -> float:
    if lam >= 1:
        return math.inf
    x = t * r * math.hypot(a, b)
    expo = kappa * (2 * x + 8 / (1 - lam) + 16 * x / (1 - lam))
    return (m * p) ** 2 * math.exp(expo) if expo < 700 else math.inf


def lemma43_validity(t: float, a: float, b: float, r: float, lam: float) -> bool:
    x = t * r * math.hypot(a, b)
    return x < 1 and lam * (2 * math.exp(x) - 1) <= 1


def ky_fan_sum_check(tensors: Sequence[Tensor3], s: float, k: int, slack: float = 1e-9) -> CheckReport:
    """``|| |sum C_i|^s ||_(k) <= M^(s-1) sum_i || |C_i|^s ||_(k)``."""
    tensors = list(tensors)
    if s < 1:
        raise ContractError("s must be >= 1")
    if not tensors or not all(is_symmetric(t) for t in tensors):
        raise ContractError("need symmetric tensors")

    def top(t):
        sv = np.sort(singular_values_blocks(t).ravel())[::-1]
        if not 1 <= k <= sv.size:
            raise ContractError(f"k={k} outside 1..{sv.size}")
        return float(np.sum(sv[:k] ** s))

    total = tensors[0]
    for t in tensors[1:]:
        total = total + t
    lhs = top(total)
    rhs = len(tensors) ** (s - 1) * sum(top(t) for t in tensors)
    return CheckReport("ky_fan_sum", True, lhs, rhs, lhs <= rhs + slack)


# -- tails ------------------------------------------------------------------------------

def clopper_pearson(successes: int, trials: int, alpha: float = 0.05) -> tuple[float, float]:
    lo = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


def statistic_upper_bound(params: BoundParams, r: float) -> float:
    """Deterministic ceiling ``k * (sum_l a_l (kappa r)^l)^s`` on the statistic."""
    x = params.kappa * r
    return params.k * float(sum(a * x ** l for l, a in enumerate(params.coeffs))) ** params.s


@dataclass
class TailRow:
    theta: float
    empirical_p: float
    ci_low: float
    ci_high: float
    bound_eq8: float
    t_star: float
    corollary_printed: float
    corollary_derived: float
    trials: int
    assumption1_violation_rate: float = 0.0
    at_grid_edge: bool = False

    @property
    def vacuous(self) -> bool:
        return not self.bound_eq8 < 1.0


CSV_HEADER = "theta,empirical_p,ci_low,ci_high,bound_eq8,t_star,corollary_printed,corollary_derived,trials"


def _fmt(x: float) -> str:
    return f"{x:.8e}"


@dataclass
class TailReport:
    rows: list
    summary: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for row in sorted(self.rows, key=lambda r: r.theta):
            vals = [row.theta, row.empirical_p, row.ci_low, row.ci_high, row.bound_eq8,
                    row.t_star, row.corollary_printed, row.corollary_derived]
            buf.write(",".join(_fmt(v) for v in vals) + f",{row.trials}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        rows = []
        for row in sorted(self.rows, key=lambda r: r.theta):
            d = asdict(row)
            d["vacuous"] = row.vacuous
            rows.append(d)
        return json.dumps({"rows": rows, "summary": self.summary}, indent=2, sort_keys=True)

    def violations(self) -> list:
        """Non-vacuous rows whose empirical tail exceeds the bound."""
        return [r for r in self.rows if not r.vacuous and r.empirical_p > r.bound_eq8]


def _bound_columns(params: BoundParams, m: int, p: int, r: float, theta: float):
    pt = main_bound_at(theta, params, m, p, r)
    cor = corollary_bound(theta, params, m, p, r)
    return pt, cor


def _chunk_eigenvalues(assignment, graph, kappa, seed, start, stop):
    walks = walks_from_uniforms(graph, trial_uniforms(seed, start, stop, kappa))
    return walk_sum_eigenvalues(assignment, walks)


def sampled_eigenvalues(
    assignment: TensorAssignment, graph: RegularGraph, kappa: int, trials: int, seed: int, threads: int | None = None
) -> np.ndarray:
    """T-eigenvalues of the walk sums for every trial, in trial order."""
    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]
    threads = threads or os.cpu_count() or 1
    if threads == 1 or len(bounds) == 1:
        parts = [_chunk_eigenvalues(assignment, graph, kappa, seed, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: _chunk_eigenvalues(assignment, graph, kappa, seed, *ab), bounds))
    return np.concatenate(parts, axis=0)


def _summary(graph, params, a2_ok, rows) -> dict:
    return {
        "graph_lambda": graph.lam,
        "lambda_bar": params.lam_bar,
        "assumption2_violation_rate": float(1.0 - np.mean(a2_ok)),
        "assumption1_violation_rate": max((r.assumption1_violation_rate for r in rows), default=0.0),
        "vacuous_rows": int(sum(r.vacuous for r in rows)),
        "bound_violations": 0,
    }


def empirical_tail(
    assignment: TensorAssignment,
    graph: RegularGraph,
    params: BoundParams,
    trials: int,
    seed: int,
    threads: int | None = None,
) -> TailReport:
    """Monte Carlo tail with Clopper-Pearson 95% intervals next to the bounds.

    Trial ``i`` draws from PCG64(SeedSequence([seed, i])), so results do not
    depend on ``threads``.
    """
    if trials < 1:
        raise ContractError("trials must be >= 1")
    m, p, r = assignment.m, assignment.p, assignment.r
    params.check_dims(m, p)
    poly = params.poly
    w = sampled_eigenvalues(assignment, graph, params.kappa, trials, seed, threads)
    stat = statistics_from_eigenvalues(w, poly, params.k)
    a2_ok = assumption2_holds(w, poly)
    rows = []
    for theta in sorted(params.thetas):
        hits = int(np.count_nonzero(stat >= theta))
        lo, hi = clopper_pearson(hits, trials)
        pt, cor = _bound_columns(params, m, p, r, theta)
        a1_ok = assumption1_holds(w, poly, pt.t_star)
        rows.append(TailRow(theta, hits / trials, lo, hi, pt.bound, pt.t_star, cor.value_printed,
                            cor.value_derived, trials, float(1.0 - np.mean(a1_ok)), pt.at_grid_edge))
    report = TailReport(rows, _summary(graph, params, a2_ok, rows))
    report.summary["bound_violations"] = len(report.violations())
    return report


@dataclass(frozen=True)
class ExactTail:
    thetas: tuple
    probabilities: tuple
    assumptions_hold: tuple  # per theta: both assumptions on every positive-probability walk
    total_probability: float


def exact_tail(assignment: TensorAssignment, graph: RegularGraph, params: BoundParams) -> ExactTail:
    """Tail probabilities by full walk enumeration."""
    walks, probs = walk_distribution(graph, params.kappa)
    if walks.shape[0] > WALK_LIMIT:
        raise ResourceError("too many walks to enumerate")
    params.check_dims(assignment.m, assignment.p)
    poly = params.poly
    w = walk_sum_eigenvalues(assignment, walks)
    stat = statistics_from_eigenvalues(w, poly, params.k)
    a2 = bool(np.all(assumption2_holds(w, poly)))
    tails, valid = [], []
    for theta in params.thetas:
        tails.append(float(np.sum(probs[stat >= theta])))
        t_star = main_bound_at(theta, params, assignment.m, assignment.p, assignment.r).t_star
        valid.append(a2 and bool(np.all(assumption1_holds(w, poly, t_star))))
    return ExactTail(params.thetas, tuple(tails), tuple(valid), float(np.sum(probs)))
