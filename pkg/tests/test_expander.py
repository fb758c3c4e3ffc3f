import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tchernoff import expander as ex
from tchernoff.errors import ContractError, ResourceError, StructuralError


def test_known_second_eigenvalues():
    assert ex.gen_complete(4).lam == pytest.approx(1 / 3)
    assert ex.gen_complete(3).lam == pytest.approx(0.5)
    assert ex.gen_cycle(4).lam == pytest.approx(1.0)  # bipartite
    assert ex.gen_cycle(5).lam == pytest.approx(np.cos(np.pi / 5))
    assert ex.single_vertex(4).lam == 0.0
    disc = ex.disjoint_union(ex.gen_complete(3), ex.gen_cycle(3))
    assert disc.lam == pytest.approx(1.0)
    assert ex.gen_cycle(5).lambda_bar == pytest.approx(1 - np.cos(np.pi / 5))


def test_adjacency_validation():
    with pytest.raises(StructuralError):
        ex.RegularGraph.from_adjacency([[0, 1], [0, 0]])
    with pytest.raises(StructuralError):
        ex.RegularGraph.from_adjacency([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    with pytest.raises(ContractError):
        ex.gen_random_regular(5, 3, seed=0)
    with pytest.raises(ContractError):
        ex.single_vertex(3)


def test_random_regular_degrees():
    for n, d in [(10, 4), (12, 3), (50, 4)]:
        g = ex.gen_random_regular(n, d, seed=1)
        assert np.all(g.adjacency.sum(axis=1) == d)
        assert np.array_equal(g.adjacency, g.adjacency.T)
    a = ex.gen_random_regular(20, 4, seed=9).adjacency
    assert np.array_equal(a, ex.gen_random_regular(20, 4, seed=9).adjacency)


def test_walk_distribution_complete3():
    walks, probs = ex.walk_distribution(ex.gen_complete(3), 3)
    assert walks.shape == (12, 3)
    assert probs.sum() == pytest.approx(1.0)
    assert np.allclose(probs, 1 / 12)
    for w, pr in ex.enumerate_walks(ex.gen_complete(3), 3):
        assert ex.is_valid_walk(ex.gen_complete(3), w)
        assert ex.walk_probability(ex.gen_complete(3), w) == pytest.approx(pr)


def test_walk_enumeration_guard():
    with pytest.raises(ResourceError):
        ex.walk_distribution(ex.gen_complete(10), 7)


def test_sampling_is_chunk_invariant():
    g = ex.gen_random_regular(8, 4, seed=3)
    full = ex.sample_walks(g, 6, 300, master_seed=11)
    parts = np.vstack([ex.walks_from_uniforms(g, ex.trial_uniforms(11, a, a + 100, 6)) for a in (0, 100, 200)])
    assert np.array_equal(full, parts)
    assert all(ex.is_valid_walk(g, w) for w in full)


def test_sampling_follows_stationary_walk_law():
    g = ex.gen_cycle(5)
    walks = ex.sample_walks(g, 2, 20000, master_seed=2)
    start = np.bincount(walks[:, 0], minlength=5) / len(walks)
    assert np.allclose(start, 0.2, atol=0.02)
    steps = (walks[:, 1] - walks[:, 0]) % 5
    assert set(np.unique(steps)) == {1, 4}
    assert np.mean(steps == 1) == pytest.approx(0.5, abs=0.02)


def test_self_loops_and_multi_edges_in_walks():
    g = ex.RegularGraph.from_adjacency([[2, 1, 1], [1, 0, 3], [1, 3, 0]])
    walks, probs = ex.walk_distribution(g, 2)
    assert probs.sum() == pytest.approx(1.0)
    loop = [pr for w, pr in zip(walks, probs) if tuple(w) == (0, 0)][0]
    assert loop == pytest.approx(1 / 3 * 2 / 4)


def test_edge_list_roundtrip_and_errors(tmp_path):
    g = ex.RegularGraph.from_adjacency([[2, 1, 1], [1, 0, 3], [1, 3, 0]])
    text = ex.to_edge_list(g)
    assert np.array_equal(ex.from_edge_list(text).adjacency, g.adjacency)
    with pytest.raises(StructuralError):
        ex.from_edge_list("3 2\n0 1 1\n")
    with pytest.raises(StructuralError):
        ex.to_edge_list(ex.RegularGraph.from_adjacency([[1, 1], [1, 1]]))
    path = tmp_path / "g.txt"
    path.write_text(text)
    assert np.array_equal(ex.parse_graph_spec(f"file:{path}").adjacency, g.adjacency)


def test_graph_specs():
    assert ex.parse_graph_spec("complete:5").num_vertices == 5
    assert ex.parse_graph_spec("cycle:6").degree == 2
    assert ex.parse_graph_spec("random:8:4:1").degree == 4
    for bad in ("complete:x", "wheel:4", "random:8:4"):
        with pytest.raises(ContractError):
            ex.parse_graph_spec(bad)


@given(st.integers(3, 16).map(lambda n: 2 * (n // 2)), st.sampled_from([2, 3, 4]), st.integers(0, 2 ** 31))
def test_random_regular_spectrum_bounds(n, d, seed):
    g = ex.gen_random_regular(n, d, seed=seed)
    mu = np.linalg.eigvalsh(g.normalized)
    assert mu[-1] == pytest.approx(1.0)
    assert 0.0 <= g.lam <= 1.0


@given(st.integers(2, 5), st.integers(1, 4))
def test_walk_probabilities_sum_to_one(n, kappa):
    _, probs = ex.walk_distribution(ex.gen_complete(n), kappa)
    assert probs.sum() == pytest.approx(1.0)
