import numpy as np
import pytest
from scipy.spatial.distance import pdist

from gcl_divergence import synth
from gcl_divergence.clustering import Partition
from gcl_divergence.divergence import observed_block_proportions
from gcl_divergence.errors import InputError
from gcl_divergence.graph import degree_sequence, is_connected


def test_planted_is_deterministic():
    spec = synth.PlantedSpec(50, 3, 0.4, 0.05, 9)
    a, pa = synth.planted_partition(spec)
    b, pb = synth.planted_partition(spec)
    assert a.to_edge_list() == b.to_edge_list() and pa == pb


def test_single_cluster_is_erdos_renyi():
    g, p = synth.planted_partition(synth.PlantedSpec(200, 1, 0.1, 0.0, 1))
    assert p.cluster_count == 1 and is_connected(g)
    density = g.edge_count / (200 * 199 / 2)
    assert abs(density - 0.1) < 4 * np.sqrt(0.1 * 0.9 / (200 * 199 / 2))


def test_internal_share():
    shares = []
    for seed in range(20):
        g, p = synth.planted_partition(synth.PlantedSpec(60, 3, 0.4, 0.02, seed))
        assert p.cluster_count == 3
        assert sorted(np.bincount(p.assignment).tolist()) == [20, 20, 20]
        shares.append(observed_block_proportions(g, p).internal.sum())
    assert min(shares) >= 0.8


def test_disconnected_spec_rejected():
    with pytest.raises(InputError, match="connected"):
        synth.planted_partition(synth.PlantedSpec(10, 2, 1.0, 0.0, 0))


@pytest.mark.parametrize("args", [(10, 2, 0.1, 0.1), (10, 2, 0.1, 0.3), (3, 4, 0.5, 0.1),
                                  (10, 0, 0.5, 0.1)])
def test_spec_validation(args):
    with pytest.raises(InputError):
        synth.PlantedSpec(*args)


def test_structured_zero_spread():
    p = Partition(np.repeat([0, 1, 2, 3, 4], 4))
    e = synth.structured_embedding(p, dim=2, separation=10, spread=0.0)
    d = np.linalg.norm(e.coords[:, None] - e.coords[None], axis=-1)
    same = p.assignment[:, None] == p.assignment[None]
    assert np.all(d[same] == 0)
    assert np.all(d[~same] >= 10 - 1e-9)


def test_structured_zero_separation():
    p = Partition(np.repeat([0, 1], 200))
    e = synth.structured_embedding(p, separation=0.0, spread=1.0, seed=3)
    means = [e.coords[p.assignment == c].mean(axis=0) for c in (0, 1)]
    assert np.linalg.norm(means[0] - means[1]) < 0.4


def test_structured_two_clusters_separated():
    # the chance shrinks with cluster size (about 0.93 at 20 points each)
    hits = 0
    for seed in range(1000):
        p = Partition(np.repeat([0, 1], 5))
        e = synth.structured_embedding(p, dim=2, separation=10, spread=1, seed=seed)
        d = np.linalg.norm(e.coords[:, None] - e.coords[None], axis=-1)
        same = p.assignment[:, None] == p.assignment[None]
        hits += d[~same].min() > d[same].max()
    assert hits / 1000 >= 0.99


def test_structured_needs_two_dimensions():
    with pytest.raises(InputError):
        synth.structured_embedding(Partition([0, 1]), dim=1)


def test_random_embedding():
    e = synth.random_embedding(100, 2, seed=4)
    assert e.coords.min() >= 0 and e.coords.max() <= 1
    assert not np.array_equal(e.coords, synth.random_embedding(100, 2, seed=5).coords)
    np.testing.assert_array_equal(e.coords, synth.random_embedding(100, 2, seed=4).coords)
    # mean distance of two uniform points in the unit square is 0.5214...
    assert abs(pdist(e.coords).mean() - 0.5214) < 0.05


def test_spectral_and_netmf_shapes(karate):
    g, _ = karate
    assert synth.spectral_embedding(g, 3).coords.shape == (34, 3)
    e = synth.netmf_embedding(g, dim=4, window=5)
    assert e.coords.shape == (34, 4) and e.name == "netmf-T5-d4"
    np.testing.assert_array_equal(e.coords, synth.netmf_embedding(g, dim=4, window=5).coords)


def test_karate_data(karate):
    g, clubs = karate
    assert clubs.cluster_count == 2
    assert np.bincount(clubs.assignment).tolist() == [17, 17]
    assert degree_sequence(g).sum() == 156
