"""Connected-component labeling of voxel sets by breadth-first search."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .volume import AdjacencyKind, Coord, VoxelVolume


@dataclass(frozen=True)
class ComponentLabeling:
    """Per-voxel labels over a box; 0 is unlabeled, components are 1..component_count.

    ``component_sizes[i]`` is the voxel count of label ``i + 1``.  For
    background labelings the box is the volume box padded by one layer and
    ``exterior`` names the label of the component touching that padding.
    """

    labels: np.ndarray
    origin: Coord
    component_count: int
    component_sizes: list[int]
    adjacency: AdjacencyKind
    exterior: int | None = None
    cavities: list[int] = field(default_factory=list)

    def size(self, label: int) -> int:
        self._check(label)
        return self.component_sizes[label - 1]

    def label_at(self, coord) -> int:
        x, y, z = (int(c) - o for c, o in zip(coord, self.origin))
        nx, ny, nz = self.labels.shape
        if 0 <= x < nx and 0 <= y < ny and 0 <= z < nz:
            return int(self.labels[x, y, z])
        return 0

    def _check(self, label: int) -> None:
        if not 1 <= label <= self.component_count:
            raise ValueError(f"component id {label} out of range 1..{self.component_count}")


def _flat_offsets(shape, offsets) -> list[int]:
    nx, ny, _ = shape
    return [dx + nx * (dy + ny * dz) for dx, dy, dz in offsets]


def _bfs_label(mask: np.ndarray, offsets) -> tuple[np.ndarray, list[int]]:
    """Label ``mask`` (already padded with one False layer) in x-fastest scan order."""
    shape = mask.shape
    flat = mask.ravel(order="F")
    steps = _flat_offsets(shape, offsets)
    # occ[j] is cleared once j is labeled, so one lookup decides each step
    occ = flat.tolist()
    lab = [0] * len(occ)
    sizes: list[int] = []
    queue: deque[int] = deque()
    pop, push = queue.popleft, queue.append
    for seed in np.flatnonzero(flat).tolist():
        if lab[seed]:
            continue
        cur = len(sizes) + 1
        lab[seed] = cur
        occ[seed] = False
        push(seed)
        n = 0
        while queue:
            i = pop()
            n += 1
            for s in steps:
                j = i + s
                if occ[j]:
                    occ[j] = False
                    lab[j] = cur
                    push(j)
        sizes.append(n)
    labels = np.asarray(lab, dtype=np.int32).reshape(shape, order="F")
    return labels, sizes


def label_components(volume: VoxelVolume, adjacency: AdjacencyKind = AdjacencyKind.VERTEX26) -> ComponentLabeling:
    """Label the foreground; components are numbered by their first voxel in linear order."""
    labels, sizes = _bfs_label(volume.padded(1), adjacency.offsets)
    return ComponentLabeling(
        labels=labels[1:-1, 1:-1, 1:-1],
        origin=volume.origin,
        component_count=len(sizes),
        component_sizes=sizes,
        adjacency=adjacency,
    )


def label_background(volume: VoxelVolume) -> ComponentLabeling:
    """Label the complement within the box padded by one layer, under FACE6.

    The padded box gets a second sentinel layer internally so the search
    never leaves the array; label 1 always owns the padding and is the
    exterior.  Every other label is a cavity.
    """
    mask = np.zeros(tuple(n + 4 for n in volume.dims), dtype=bool)
    mask[1:-1, 1:-1, 1:-1] = True
    mask[2:-2, 2:-2, 2:-2] = ~volume.grid
    labels, sizes = _bfs_label(mask, AdjacencyKind.FACE6.offsets)
    return ComponentLabeling(
        labels=labels[1:-1, 1:-1, 1:-1],
        origin=tuple(o - 1 for o in volume.origin),
        component_count=len(sizes),
        component_sizes=sizes,
        adjacency=AdjacencyKind.FACE6,
        exterior=1,
        cavities=list(range(2, len(sizes) + 1)),
    )


def extract_component(volume: VoxelVolume, labeling: ComponentLabeling, label: int) -> VoxelVolume:
    """The voxels of one component, cropped to their bounding box."""
    labeling._check(label)
    if labeling.exterior is not None:
        raise ValueError("extract_component expects a foreground labeling")
    return VoxelVolume(labeling.labels == label, labeling.origin).cropped()


def split_components(volume: VoxelVolume, labeling: ComponentLabeling) -> list[VoxelVolume]:
    """All components in label order, each cropped to its own box."""
    return [extract_component(volume, labeling, k) for k in range(1, labeling.component_count + 1)]
