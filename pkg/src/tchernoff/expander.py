"""Regular multigraphs, their spectral gap, and stationary random walks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import _backend
from .errors import ContractError, ResourceError, StructuralError

WALK_LIMIT = 10 ** 6


@dataclass(frozen=True)
class RegularGraph:
    """d-regular multigraph given by a symmetric integer adjacency matrix.

    A self-loop contributes 2 to its diagonal entry, so every row sums to d.
    """

    adjacency: np.ndarray
    degree: int
    lam: float = field(compare=False)

    @classmethod
    def from_adjacency(cls, adjacency) -> "RegularGraph":
        a = np.array(adjacency, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise StructuralError("adjacency must be a nonempty square matrix")
        if np.any(a < 0) or not np.array_equal(a, a.T):
            raise StructuralError("adjacency must be symmetric and nonnegative")
        sums = a.sum(axis=1)
        if np.any(sums != sums[0]) or sums[0] < 1:
            raise StructuralError("adjacency rows must share a positive degree")
        a.setflags(write=False)
        d = int(sums[0])
        return cls(a, d, _second_eigenvalue(a, d))

    @property
    def num_vertices(self) -> int:
        return self.adjacency.shape[0]

    @property
    def normalized(self) -> np.ndarray:
        return self.adjacency / self.degree

    @property
    def lambda_bar(self) -> float:
        return 1.0 - self.lam

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.adjacency, axis=1)

    def __repr__(self) -> str:
        return f"RegularGraph(n={self.num_vertices}, d={self.degree}, lambda={self.lam:.6g})"


def _second_eigenvalue(a: np.ndarray, d: int) -> float:
    n = a.shape[0]
    if n == 1:
        return 0.0
    mu = np.linalg.eigvalsh(a / d)  # ascending
    return float(min(1.0, max(abs(mu[-2]), abs(mu[0]))))


def second_eigenvalue(g: RegularGraph) -> float:
    """``max(|mu_2|, |mu_n|)`` of the normalized adjacency spectrum."""
    return g.lam


def gen_complete(n: int) -> RegularGraph:
    if n < 2:
        raise ContractError("complete graph needs n >= 2")
    return RegularGraph.from_adjacency(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))


def gen_cycle(n: int) -> RegularGraph:
    if n < 2:
        raise ContractError("cycle needs n >= 2")
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        a[i, (i + 1) % n] += 1
        a[(i + 1) % n, i] += 1
    return RegularGraph.from_adjacency(a)


def gen_random_regular(n: int, d: int, seed=None) -> RegularGraph:
    """Permutation model (sum of d/2 permutations and their transposes) for even d,
    configuration model for odd d. Multi-edges and self-loops are kept."""
    if n < 2 or d < 2:
        raise ContractError("random regular graph needs n >= 2 and d >= 2")
    rng = np.random.default_rng(seed)
    a = np.zeros((n, n), dtype=np.int64)
    if d % 2 == 0:
        idx = np.arange(n)
        for _ in range(d // 2):
            perm = rng.permutation(n)
            np.add.at(a, (idx, perm), 1)
            np.add.at(a, (perm, idx), 1)
    else:
        if (n * d) % 2:
            raise ContractError(f"n*d must be even for odd degree (n={n}, d={d})")
        stubs = rng.permutation(np.repeat(np.arange(n), d)).reshape(-1, 2)
        np.add.at(a, (stubs[:, 0], stubs[:, 1]), 1)
        np.add.at(a, (stubs[:, 1], stubs[:, 0]), 1)
    return RegularGraph.from_adjacency(a)


def disjoint_union(g1: RegularGraph, g2: RegularGraph) -> RegularGraph:
    if g1.degree != g2.degree:
        raise ContractError("disjoint union needs equal degrees")
    n1, n2 = g1.num_vertices, g2.num_vertices
    a = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
    a[:n1, :n1] = g1.adjacency
    a[n1:, n1:] = g2.adjacency
    return RegularGraph.from_adjacency(a)


def single_vertex(d: int = 2) -> RegularGraph:
    """One vertex carrying d/2 self-loops (d even)."""
    if d < 2 or d % 2:
        raise ContractError("single-vertex graph needs an even degree >= 2")
    return RegularGraph.from_adjacency([[d]])


# -- walks --------------------------------------------------------------------

@dataclass(frozen=True)
class WalkSample:
    vertices: tuple[int, ...]
    seed: object = None


def trial_uniforms(master_seed: int, start: int, stop: int, length: int) -> np.ndarray:
    """Uniforms for trials ``start..stop-1``; trial ``i`` uses PCG64(SeedSequence([master, i]))."""
    out = np.empty((stop - start, length))
    for row, i in enumerate(range(start, stop)):
        out[row] = np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, i]))).random(length)
    return out


def walks_from_uniforms(g: RegularGraph, uniforms: np.ndarray) -> np.ndarray:
    return _backend.walks_from_uniforms(g.cumulative(), g.degree, np.ascontiguousarray(uniforms))


def sample_walk(g: RegularGraph, kappa: int, seed=None) -> WalkSample:
    if kappa < 1:
        raise ContractError("walk length must be >= 1")
    u = np.random.default_rng(seed).random((1, kappa))
    return WalkSample(tuple(int(v) for v in walks_from_uniforms(g, u)[0]), seed)


def sample_walks(g: RegularGraph, kappa: int, trials: int, master_seed: int) -> np.ndarray:
    """``(trials, kappa)`` walks, trial ``i`` driven by its own generator."""
    if kappa < 1:
        raise ContractError("walk length must be >= 1")
    return walks_from_uniforms(g, trial_uniforms(master_seed, 0, trials, kappa))


def walk_probability(g: RegularGraph, walk) -> float:
    walk = [int(v) for v in walk]
    prob = 1.0 / g.num_vertices
    for u, v in zip(walk, walk[1:]):
        prob *= g.adjacency[u, v] / g.degree
    return prob


def is_valid_walk(g: RegularGraph, walk) -> bool:
    return all(g.adjacency[u, v] > 0 for u, v in zip(walk, walk[1:]))


def walk_distribution(g: RegularGraph, kappa: int) -> tuple[np.ndarray, np.ndarray]:
    """All positive-probability walks of length ``kappa`` and their probabilities."""
    n = g.num_vertices
    if n ** kappa > WALK_LIMIT:
        raise ResourceError(f"{n}^{kappa} walks exceed the enumeration limit {WALK_LIMIT}")
    p = g.normalized
    walks = np.arange(n).reshape(n, 1)
    probs = np.full(n, 1.0 / n)
    for _ in range(kappa - 1):
        last = walks[:, -1]
        step = p[last]  # (count, n)
        rows, cols = np.nonzero(step)
        walks = np.column_stack([walks[rows], cols])
        probs = probs[rows] * step[rows, cols]
    return walks, probs


def enumerate_walks(g: RegularGraph, kappa: int) -> Iterator[tuple[tuple[int, ...], float]]:
    walks, probs = walk_distribution(g, kappa)
    for w, pr in zip(walks, probs):
        yield tuple(int(v) for v in w), float(pr)


# -- serialization --------------------------------------------------------------

def to_edge_list(g: RegularGraph) -> str:
    a = g.adjacency
    lines = [f"{g.num_vertices} {g.degree}"]
    for u, v in itertools.combinations_with_replacement(range(g.num_vertices), 2):
        mult = a[u, v]
        if u == v:
            if mult % 2:
                raise StructuralError(f"odd diagonal entry at vertex {u} has no edge-list form")
            mult //= 2
        if mult:
            lines.append(f"{u} {v} {mult}")
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> RegularGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise StructuralError("edge list must start with an 'n d' header")
    n, d = int(rows[0][0]), int(rows[0][1])
    a = np.zeros((n, n), dtype=np.int64)
    for row in rows[1:]:
        if len(row) != 3:
            raise StructuralError(f"bad edge line: {' '.join(row)!r}")
        u, v, mult = (int(x) for x in row)
        if not (0 <= u < n and 0 <= v < n) or mult < 0:
            raise StructuralError(f"edge {u} {v} {mult} out of range")
        if u == v:
            a[u, u] += 2 * mult
        else:
            a[u, v] += mult
            a[v, u] += mult
    g = RegularGraph.from_adjacency(a)
    if g.degree != d:
        raise StructuralError(f"header degree {d} but rows sum to {g.degree}")
    return g


def parse_graph_spec(spec: str) -> RegularGraph:
    """``complete:n``, ``cycle:n``, ``random:n:d:seed`` or ``file:path``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "complete":
            return gen_complete(int(rest))
        if kind == "cycle":
            return gen_cycle(int(rest))
        if kind == "random":
            n, d, seed = (int(x) for x in rest.split(":"))
            return gen_random_regular(n, d, seed)
    except ValueError as exc:
        if isinstance(exc, (ContractError, StructuralError)):
            raise
        raise ContractError(f"malformed graph spec {spec!r}") from exc
    if kind == "file":
        return from_edge_list(Path(rest).read_text())
    raise ContractError(f"unknown graph spec {spec!r}")
