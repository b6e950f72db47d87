import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from graphon_mixture.contrastive import (
    DegenerateBatchError,
    EmbeddingBatch,
    infonce_lower_bound,
    model_aware_infonce,
    read_embedding_csv,
    tfr,
)

E = np.eye(3)


def test_two_anchor_example():
    batch = EmbeddingBatch(E[:2, :2], E[:2, :2], [0, 1], tau=0.5)
    assert model_aware_infonce(batch).per_anchor[0] == pytest.approx(-2.0, abs=1e-12)


def test_equal_negatives_example_and_tight_bound():
    batch = EmbeddingBatch(E, E, [0, 1, 2], tau=1.0)
    loss = model_aware_infonce(batch).per_anchor[0]
    assert loss == pytest.approx(math.log(2) - 1, abs=1e-12)
    assert infonce_lower_bound(batch).bound[0] == pytest.approx(loss, abs=1e-12)


def test_single_negative_bound_is_exact(rng):
    z, zt = rng.normal(size=(2, 4)), rng.normal(size=(2, 4))
    batch = EmbeddingBatch(z, zt, [0, 1], tau=0.5)
    np.testing.assert_allclose(infonce_lower_bound(batch).bound,
                               model_aware_infonce(batch).per_anchor, atol=1e-12)


def test_all_same_cluster_is_degenerate(rng):
    batch = EmbeddingBatch(rng.normal(size=(4, 3)), rng.normal(size=(4, 3)), [2, 2, 2, 2])
    with pytest.raises(DegenerateBatchError):
        model_aware_infonce(batch)


def test_partial_skip(rng):
    # anchors of the only cluster present once still see others; none skipped
    batch = EmbeddingBatch(rng.normal(size=(3, 3)), rng.normal(size=(3, 3)), [0, 0, 1])
    res = model_aware_infonce(batch)
    assert res.skip_count == 0
    assert np.isfinite(res.per_anchor).all()


def test_same_cluster_positives_never_negatives(rng):
    z, zt = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
    a = model_aware_infonce(EmbeddingBatch(z, zt, [0, 0, 1, 1])).per_anchor
    zt2 = zt.copy()
    zt2[1] = rng.normal(size=3)  # same cluster as anchor 0
    b = model_aware_infonce(EmbeddingBatch(z, zt2, [0, 0, 1, 1])).per_anchor
    assert a[0] == pytest.approx(b[0], abs=1e-12)


def test_batch_validation():
    with pytest.raises(ValueError):
        EmbeddingBatch(np.zeros((2, 3)), np.ones((2, 3)), [0, 1])
    with pytest.raises(ValueError):
        EmbeddingBatch(np.ones((2, 3)), np.ones((2, 3)), [0, 1], tau=0.0)
    with pytest.raises(ValueError):
        EmbeddingBatch(np.ones((2, 3)), np.ones((3, 3)), [0, 1])


@given(
    arrays(np.float64, (12, 5), elements=st.floats(-3, 3)),
    arrays(np.float64, (12, 5), elements=st.floats(-3, 3)),
    st.lists(st.integers(0, 3), min_size=12, max_size=12),
    st.sampled_from([0.2, 0.5, 1.0]),
)
def test_bound_below_loss(z, zt, clusters, tau):
    assume(np.all(np.linalg.norm(z, axis=1) > 1e-3) and np.all(np.linalg.norm(zt, axis=1) > 1e-3))
    assume(len(set(clusters)) > 1)
    batch = EmbeddingBatch(z, zt, clusters, tau)
    loss = model_aware_infonce(batch)
    lb = infonce_lower_bound(batch)
    keep = ~loss.skipped
    assert np.all(lb.bound[keep] <= loss.per_anchor[keep] + 1e-9)


def test_tfr_examples():
    labels = np.array([0, 0, 0, 1])
    assert tfr([(labels, labels)], "baseline") == pytest.approx(1.125)
    assert tfr([(labels, labels)], "model_aware") == pytest.approx(1.5)
    assert tfr([(np.zeros(5, int), np.zeros(5, int))], "baseline") == 0.0


@given(st.lists(st.integers(0, 4), min_size=2, max_size=20))
def test_tfr_clusters_equal_classes_never_lower(labels):
    assume(len(set(labels)) > 1)
    y = np.array(labels)
    assert tfr([(y, y)], "model_aware") >= tfr([(y, y)], "baseline")


def test_tfr_errors():
    with pytest.raises(ValueError):
        tfr([], "baseline")
    with pytest.raises(ValueError):
        tfr([(np.array([0, 1]), np.array([0, 1]))], "other")


def test_embedding_csv(tmp_path):
    path = tmp_path / "emb.csv"
    path.write_text("graph_index,cluster,class,z_0,z_1,zt_0,zt_1\n0,0,1,1,0,1,0\n1,1,2,0,1,0,1\n")
    batch = read_embedding_csv(path, tau=0.5)
    assert batch.labels.tolist() == [1, 2]
    assert model_aware_infonce(batch).per_anchor[0] == pytest.approx(-2.0)
