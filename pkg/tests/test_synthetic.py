import numpy as np
import pytest

from simembed import (
    ConfigError,
    make_linear_margin,
    make_multimodal_clusters,
    make_sign_favoring,
)


class TestMultimodalClusters:
    def test_shape_and_balance(self):
        ds = make_multimodal_clusters(n=160, seed=0)
        assert ds.n == 160
        assert ds.features.shape == (160, 2)
        assert (ds.labels == 1).sum() == 80

    def test_proportions_skew_cluster_sizes(self):
        ds = make_multimodal_clusters(n=800, seed=0,
                                      proportions=(0.7, 0.1, 0.1, 0.1))
        assert ds.n == 800
        assert (ds.labels == 1).sum() == 400

    def test_determinism(self):
        a = make_multimodal_clusters(n=80, seed=5)
        b = make_multimodal_clusters(n=80, seed=5)
        assert np.array_equal(a.features, b.features)

    def test_bad_proportions(self):
        with pytest.raises(ConfigError):
            make_multimodal_clusters(n=80, proportions=(0.5, 0.5))
        with pytest.raises(ConfigError):
            make_multimodal_clusters(n=80, proportions=(0.4, 0.4, 0.1, 0.2))


class TestPlantedGenerators:
    def test_sign_favoring_properties(self):
        ds = make_sign_favoring(n=100, seed=1)
        assert ds.similarity.shape == (100, 100)
        assert np.array_equal(ds.similarity, ds.similarity.T)
        assert ds.binary
        with pytest.raises(ConfigError):
            make_sign_favoring(n=7)

    def test_linear_margin_properties(self):
        ds = make_linear_margin(n=100, seed=1)
        assert ds.similarity.shape == (100, 100)
        assert np.array_equal(ds.similarity, ds.similarity.T)
        assert ds.binary
        with pytest.raises(ConfigError):
            make_linear_margin(n=7)

    def test_determinism(self):
        a = make_sign_favoring(n=60, seed=2)
        b = make_sign_favoring(n=60, seed=2)
        assert np.array_equal(a.similarity, b.similarity)
