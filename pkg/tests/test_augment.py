import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphon_mixture.augment import (
    fit_class_mixtures,
    gmam,
    graphon_augment,
    selected_pairs_mask,
    write_augmented,
)
from graphon_mixture.graphon import constant_graphon, sample_graph
from graphon_mixture.graphs import Graph, LabeledDataset, read_edge_list
from graphon_mixture.mixture import degree_latents

from conftest import graphs, random_graph

LOW, HIGH = 0.1, 0.9


def constant_classes(per_class=10, n=40, seed=0):
    gs = [sample_graph(constant_graphon(p), n, seed=[seed, c, i])[0]
          for c, p in enumerate((LOW, HIGH)) for i in range(per_class)]
    labels = np.repeat([1, 2], per_class)
    return LabeledDataset(tuple(gs), labels, 2)


@pytest.fixture(scope="module")
def dataset():
    return constant_classes()


@pytest.fixture(scope="module")
def mixtures(dataset):
    return fit_class_mixtures(dataset, refinement_size=5, resolution=8, seed=0)


def density(g):
    n = g.node_count
    return g.edge_count / (n * (n - 1) / 2)


def test_count_is_ceiling():
    data = constant_classes(per_class=50, n=20)
    out = gmam(data, ratio=0.2, resolution=5, seed=0, target_n=10)
    assert len(out) == 20


@pytest.mark.parametrize("ratio", [0.01, 0.15, 0.33, 1.0])
def test_count_for_ratios(dataset, mixtures, ratio):
    out = gmam(dataset, ratio=ratio, target_n=5, seed=1, mixtures=mixtures)
    assert len(out) == math.ceil(ratio * len(dataset))


def test_soft_labels(dataset, mixtures):
    for s in gmam(dataset, ratio=1.0, target_n=10, seed=2, mixtures=mixtures):
        assert s.soft_label.sum() == pytest.approx(1.0, abs=1e-12)
        assert s.source_classes[0] != s.source_classes[1]
        assert 0.0 <= s.weight <= 0.2
        assert s.soft_label[s.source_classes[0] - 1] == pytest.approx(s.weight)


def expected_density(sample, lam):
    p = {1: LOW, 2: HIGH}
    i, j = sample.source_classes
    return lam * p[i] + (1 - lam) * p[j]


@pytest.mark.parametrize("lam", [0.0, 1.0, 0.25])
def test_fixed_weight_density(dataset, mixtures, lam):
    out = gmam(dataset, ratio=0.3, target_n=500, seed=3, fixed_weight=lam, mixtures=mixtures)
    for s in out:
        assert density(s.graph) == pytest.approx(expected_density(s, lam), abs=0.03)
        if lam in (0.0, 1.0):
            winner = s.source_classes[1] if lam == 0.0 else s.source_classes[0]
            assert s.soft_label[winner - 1] == 1.0


def test_gmam_deterministic(dataset):
    a = gmam(dataset, ratio=0.3, target_n=30, seed=5, resolution=6)
    b = gmam(dataset, ratio=0.3, target_n=30, seed=5, resolution=6)
    assert [s.graph for s in a] == [s.graph for s in b]
    assert [s.weight for s in a] == [s.weight for s in b]


def test_gmam_errors(dataset):
    with pytest.raises(ValueError):
        gmam(LabeledDataset(dataset.graphs), seed=0)
    one = LabeledDataset(dataset.graphs[:3], [1, 1, 1], 1)
    with pytest.raises(ValueError):
        gmam(one, seed=0)
    with pytest.raises(ValueError):
        gmam(dataset, ratio=0.0, seed=0)


def test_write_augmented(tmp_path, dataset, mixtures):
    out = gmam(dataset, ratio=0.1, target_n=12, seed=6, mixtures=mixtures)
    write_augmented(out, tmp_path)
    rows = (tmp_path / "manifest.csv").read_text().splitlines()
    assert rows[0] == "file,lambda,class_i,class_j,y1,y2"
    assert len(rows) == len(out) + 1
    assert read_edge_list(tmp_path / "mixed_00000.edges") == out[0].graph


def test_rate_zero_is_identity(rng):
    g = random_graph(rng, 30, 0.4)
    assert graphon_augment(g, constant_graphon(0.5), degree_latents(g), 0, seed=1) == g


def test_full_rate_with_one_gives_complete(rng):
    g = random_graph(rng, 25, 0.2)
    out = graphon_augment(g, constant_graphon(1.0), degree_latents(g), 100, seed=1)
    assert out == Graph.complete(25)


def test_resampled_edge_count_binomial():
    g = Graph.empty(100)
    out = graphon_augment(g, constant_graphon(0.5), degree_latents(g), 20, seed=7)
    m = round(0.2 * 4950)
    assert m == 990
    assert abs(out.edge_count - 0.5 * m) <= 3 * math.sqrt(m * 0.25)


@given(graphs(min_nodes=2, max_nodes=15), st.floats(0, 100), st.integers(0, 2**31))
def test_unselected_pairs_unchanged(g, rate, seed):
    out = graphon_augment(g, constant_graphon(0.5), degree_latents(g), rate, seed=seed)
    mask = selected_pairs_mask(g.node_count, rate, seed)
    iu, ju = np.triu_indices(g.node_count, k=1)
    before = g.adjacency[iu, ju]
    after = out.adjacency[iu, ju]
    np.testing.assert_array_equal(before[~mask], after[~mask])
    assert mask.sum() == round(rate / 100 * len(iu))


def test_augment_errors(rng):
    g = random_graph(rng, 10, 0.5)
    with pytest.raises(ValueError):
        graphon_augment(g, constant_graphon(0.5), np.zeros(3), 10, seed=0)
    with pytest.raises(ValueError):
        graphon_augment(g, constant_graphon(0.5), degree_latents(g), 150, seed=0)
