import numpy as np
import pytest
from hypothesis import given, strategies as st

from voxtopo.volume import MAX_DIM, AdjacencyKind, VoxelVolume


def test_single_voxel():
    v = VoxelVolume.from_coords([(0, 0, 0)])
    assert v.dims == (1, 1, 1)
    assert v.count == 1
    assert v.origin == (0, 0, 0)


def test_duplicates_collapse():
    v = VoxelVolume.from_coords([(3, -2, 7), (3, -2, 7)])
    assert v.count == 1
    assert v.origin == (3, -2, 7)


def test_empty_rejected():
    with pytest.raises(ValueError, match="empty volume"):
        VoxelVolume.from_coords([])


def test_outside_box_is_background():
    v = VoxelVolume.from_coords([(0, 0, 0), (2, 0, 0)])
    assert v.is_set((0, 0, 0))
    assert not v.is_set((1, 0, 0))
    assert not v.is_set((-1, 0, 0))
    assert (5, 5, 5) not in v


def test_count_matches_population(rng):
    grid = rng.random((5, 6, 7)) < 0.3
    v = VoxelVolume(grid, (1, 2, 3))
    assert v.count == int(grid.sum())
    assert len(v.coords()) == v.count


def test_immutable():
    v = VoxelVolume(np.ones((2, 2, 2), dtype=bool))
    with pytest.raises(ValueError):
        v.grid[0, 0, 0] = False


def test_dimension_limits():
    with pytest.raises(ValueError):
        VoxelVolume(np.ones((0, 1, 1), dtype=bool))
    with pytest.raises(ValueError, match="int32"):
        VoxelVolume(np.ones((2, 1, 1), dtype=bool), (2**31 - 1, 0, 0))
    assert MAX_DIM == 2**20


def test_coords_in_linear_order():
    v = VoxelVolume(np.ones((2, 2, 2), dtype=bool), (10, 20, 30))
    idx = [v.linear_index(c) for c in v.coords().tolist()]
    assert idx == list(range(8))
    assert v.coords()[1].tolist() == [11, 20, 30]  # x varies fastest


@given(
    dims=st.tuples(*[st.integers(1, 9)] * 3),
    origin=st.tuples(*[st.integers(-50, 50)] * 3),
    data=st.data(),
)
def test_linearization_roundtrip(dims, origin, data):
    v = VoxelVolume(np.ones(dims, dtype=bool), origin)
    c = tuple(o + data.draw(st.integers(0, n - 1)) for o, n in zip(origin, dims))
    assert v.coord_of(v.linear_index(c)) == c
    i = data.draw(st.integers(0, dims[0] * dims[1] * dims[2] - 1))
    assert v.linear_index(v.coord_of(i)) == i


def test_flat_matches_linear_index(rng):
    grid = rng.random((3, 4, 5)) < 0.5
    v = VoxelVolume(grid, (0, 0, 0))
    flat = v.flat()
    for c in v.coords().tolist():
        assert flat[v.linear_index(c)]
    assert flat.sum() == v.count


def test_adjacency_offsets():
    f6 = AdjacencyKind.FACE6.offsets
    v26 = AdjacencyKind.VERTEX26.offsets
    assert len(f6) == 6 and all(sum(map(abs, d)) == 1 for d in f6)
    assert len(v26) == 26 and all(max(map(abs, d)) == 1 for d in v26)
    assert set(f6) <= set(v26)


def test_cropped_and_equality():
    grid = np.zeros((4, 4, 4), dtype=bool)
    grid[1, 2, 3] = True
    v = VoxelVolume(grid, (0, 0, 0))
    c = v.cropped()
    assert c.origin == (1, 2, 3) and c.dims == (1, 1, 1)
    assert c == VoxelVolume.from_coords([(1, 2, 3)])
    assert c != v
    assert hash(c) == hash(VoxelVolume.from_coords([(1, 2, 3)]))
