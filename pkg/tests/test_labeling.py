import numpy as np
import pytest

from voxtopo import shapes
from voxtopo.labeling import extract_component, label_background, label_components, split_components
from voxtopo.volume import AdjacencyKind, VoxelVolume

from . import oracles

F6, V26 = AdjacencyKind.FACE6, AdjacencyKind.VERTEX26


def partition(labeling, volume):
    groups = {}
    for c in volume.coords().tolist():
        groups.setdefault(labeling.label_at(c), set()).add(tuple(c))
    return groups


def test_corner_pair():
    v = VoxelVolume.from_coords([(0, 0, 0), (1, 1, 1)])
    assert label_components(v, V26).component_count == 1
    assert label_components(v, F6).component_count == 2


def test_labels_dense_and_sizes_sum(rng):
    grid = rng.random((12, 12, 12)) < 0.3
    v = VoxelVolume(grid)
    lab = label_components(v, F6)
    present = set(np.unique(lab.labels[grid]).tolist())
    assert present == set(range(1, lab.component_count + 1))
    assert sum(lab.component_sizes) == v.count
    assert (lab.labels[~grid] == 0).all()


def test_label_order_follows_linear_index():
    # (5,0,0) precedes (0,1,0) in x-fastest order
    v = VoxelVolume.from_coords([(0, 1, 0), (5, 0, 0)])
    lab = label_components(v, F6)
    assert lab.label_at((5, 0, 0)) == 1
    assert lab.label_at((0, 1, 0)) == 2


@pytest.mark.parametrize("adj", [F6, V26])
def test_matches_pairwise_oracle(rng, adj):
    for _ in range(150):
        n = int(rng.integers(1, 65))
        pts = {tuple(int(c) for c in rng.integers(0, 6, size=3)) for _ in range(n)}
        v = VoxelVolume.from_coords(pts)
        lab = label_components(v, adj)
        got = sorted(map(sorted, partition(lab, v).values()))
        want = sorted(map(sorted, oracles.components_by_pairs(pts, adj.offsets)))
        assert got == want


def test_random_16_face_count_at_least_vertex(rng):
    for _ in range(10):
        v = VoxelVolume(rng.random((16, 16, 16)) < 0.25)
        pts = oracles.voxel_set(v)
        f6 = label_components(v, F6)
        v26 = label_components(v, V26)
        assert f6.component_count >= v26.component_count
        assert v26.component_count == len(oracles.components_by_pairs(pts, V26.offsets))


def test_face6_refines_vertex26(rng):
    v = VoxelVolume(rng.random((10, 10, 10)) < 0.4)
    f6 = label_components(v, F6)
    v26 = label_components(v, V26)
    mask = v.grid
    for k in range(1, f6.component_count + 1):
        assert len(np.unique(v26.labels[f6.labels == k])) == 1
    assert mask.sum() == sum(f6.component_sizes)


def test_deterministic(rng):
    v = VoxelVolume(rng.random((9, 9, 9)) < 0.4)
    a, b = label_components(v, V26), label_components(v, V26)
    assert np.array_equal(a.labels, b.labels)


@pytest.mark.parametrize(
    "volume, components, cavities",
    [
        (shapes.cuboid(3, 3, 3), 1, 0),
        (shapes.shell((5, 5, 5), (1, 1, 1)), 2, 1),
        (shapes.ring(3, 3), 1, 0),
        (shapes.shell((7, 7, 7), (3, 3, 3)), 2, 1),
    ],
)
def test_background(volume, components, cavities):
    bg = label_background(volume)
    assert bg.component_count == components
    assert len(bg.cavities) == cavities
    assert bg.exterior == 1
    assert oracles.background_components(oracles.voxel_set(volume)) == (components, cavities)


def test_background_matches_flood_fill(rng):
    for _ in range(40):
        v = VoxelVolume(rng.random((6, 6, 6)) < 0.6).cropped()
        bg = label_background(v)
        assert (bg.component_count, len(bg.cavities)) == oracles.background_components(oracles.voxel_set(v))


def test_extract_component():
    v = VoxelVolume.from_coords([(0, 0, 0), (1, 0, 0), (5, 5, 5)])
    lab = label_components(v, V26)
    first = extract_component(v, lab, 1)
    assert first.count == lab.size(1) == 2
    assert first.origin == (0, 0, 0) and first.dims == (2, 1, 1)
    second = extract_component(v, lab, 2)
    assert second.origin == (5, 5, 5) and second.dims == (1, 1, 1)
    assert label_components(first, V26).component_count == 1
    with pytest.raises(ValueError):
        extract_component(v, lab, 3)
    with pytest.raises(ValueError):
        extract_component(v, lab, 0)


def test_union_of_components_is_original(rng):
    v = VoxelVolume(rng.random((10, 10, 10)) < 0.3).cropped()
    parts = split_components(v, label_components(v, F6))
    union = set()
    for p in parts:
        pts = oracles.voxel_set(p)
        assert not union & pts
        union |= pts
    assert union == oracles.voxel_set(v)
