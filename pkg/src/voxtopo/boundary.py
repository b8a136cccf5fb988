"""Boundary voxels and the boundary surface as a quad complex in point space.

Voxel ``(x, y, z)`` occupies the point-space cube ``[x, x+1] x [y, y+1] x [z, z+1]``.
A boundary face is the unit square between a set voxel and a background
face-neighbor.  Points, edges and faces are deduplicated through dense
integer keys over the point lattice, so every step is a linear pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import IO

import numpy as np

from .repair import PathologyInstance, detect_pathologies
from .volume import Coord, VoxelVolume

# direction index -> (axis, sign); order -x, +x, -y, +y, -z, +z
DIRECTIONS: tuple[tuple[int, int], ...] = ((0, -1), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1))
DIRECTION_NAMES = ("-x", "+x", "-y", "+y", "-z", "+z")


class NotWellComposedError(ValueError):
    """Boundary construction was given a volume with a pathological configuration."""

    def __init__(self, instance: PathologyInstance):
        super().__init__(
            f"volume is not well-composed: {instance.kind.value} at {instance.location} "
            f"(witnesses {instance.witnesses[0]}, {instance.witnesses[1]})"
        )
        self.instance = instance


class NonManifoldError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundaryFace:
    owner: Coord
    normal: str
    corners: tuple[Coord, Coord, Coord, Coord]


def _unit(axis: int) -> np.ndarray:
    e = np.zeros(3, dtype=np.int64)
    e[axis] = 1
    return e


def _corner_offsets(direction: int) -> np.ndarray:
    """Corner offsets from the owner's min corner, CCW seen from the background side."""
    axis, sign = DIRECTIONS[direction]
    eu, ew = _unit((axis + 1) % 3), _unit((axis + 2) % 3)
    base = _unit(axis) if sign > 0 else np.zeros(3, dtype=np.int64)
    if sign > 0:
        ring = (0 * eu, eu, eu + ew, ew)
    else:
        ring = (0 * eu, ew, eu + ew, eu)
    return np.stack([base + r for r in ring])


_CORNERS = np.stack([_corner_offsets(d) for d in range(6)])  # (6, 4, 3)


@dataclass(frozen=True, eq=False)
class BoundaryComplex:
    """Boundary faces with deduplicated points and edges.

    Arrays (F faces, P points, E edges):

    ``owners`` (F, 3) voxel coordinates; ``directions`` (F,) index into
    DIRECTIONS; ``face_points`` (F, 4) point ids in CCW order;
    ``points`` (P, 3) point-space coordinates; ``point_incidence`` (P,)
    number of faces at each point; ``edges`` (E, 2) point ids (lower
    first); ``edge_faces`` (E, 2) the two faces on each edge;
    ``surface_ids`` (F,) surface label 0..surface_count-1.
    """

    owners: np.ndarray
    directions: np.ndarray
    face_points: np.ndarray
    points: np.ndarray
    point_incidence: np.ndarray
    edges: np.ndarray
    edge_faces: np.ndarray
    surface_ids: np.ndarray
    surface_count: int

    @property
    def face_count(self) -> int:
        return len(self.owners)

    def face(self, i: int) -> BoundaryFace:
        corners = tuple(tuple(int(c) for c in self.points[p]) for p in self.face_points[i])
        return BoundaryFace(tuple(int(c) for c in self.owners[i]), DIRECTION_NAMES[self.directions[i]], corners)

    @cached_property
    def faces(self) -> list[BoundaryFace]:
        return [self.face(i) for i in range(self.face_count)]

    def check_surface(self, surface: int) -> None:
        if not 0 <= surface < self.surface_count:
            raise ValueError(f"surface id {surface} out of range 0..{self.surface_count - 1}")

    def surface_faces(self, surface: int) -> np.ndarray:
        self.check_surface(surface)
        return np.flatnonzero(self.surface_ids == surface)

    @cached_property
    def point_surface(self) -> np.ndarray:
        """Surface id of every point (points never straddle surfaces here)."""
        ps = np.full(len(self.points), -1, dtype=np.int64)
        ps[self.face_points.ravel()] = np.repeat(self.surface_ids, 4)
        return ps

    @cached_property
    def edge_surface(self) -> np.ndarray:
        return self.surface_ids[self.edge_faces[:, 0]]

    def surface_cells(self, surface: int) -> tuple[int, int, int]:
        """(points, edges, faces) counts of one surface."""
        self.check_surface(surface)
        v = int(np.count_nonzero(self.point_surface == surface))
        e = int(np.count_nonzero(self.edge_surface == surface))
        f = int(np.count_nonzero(self.surface_ids == surface))
        return v, e, f


def find_boundary_voxels(volume: VoxelVolume) -> set[Coord]:
    """Set voxels with at least one background voxel among their 26 neighbors."""
    p = volume.padded(1)
    n = volume.dims
    interior = np.ones(n, dtype=bool)
    for dx in range(3):
        for dy in range(3):
            for dz in range(3):
                interior &= p[dx:dx + n[0], dy:dy + n[1], dz:dz + n[2]]
    hits = np.argwhere(volume.grid & ~interior) + np.asarray(volume.origin)
    return {tuple(c) for c in hits.tolist()}


def build_boundary_complex(volume: VoxelVolume, check: bool = True) -> BoundaryComplex:
    """Quad complex of the boundary of a well-composed, face-connected volume.

    With ``check`` the volume is first scanned for pathologies and a
    NotWellComposedError names the first one found.
    """
    if check:
        found = detect_pathologies(volume)
        if found:
            raise NotWellComposedError(found[0])

    pad = volume.padded(1)
    n = np.asarray(volume.dims)
    core = pad[1:-1, 1:-1, 1:-1]
    owners_parts, dir_parts = [], []
    for d, (axis, sign) in enumerate(DIRECTIONS):
        sl = [slice(1, -1)] * 3
        sl[axis] = slice(1 + sign, n[axis] + 1 + sign)
        exposed = core & ~pad[tuple(sl)]
        idx = np.argwhere(exposed)
        owners_parts.append(idx)
        dir_parts.append(np.full(len(idx), d, dtype=np.int64))
    rel = np.concatenate(owners_parts).astype(np.int64)
    dirs = np.concatenate(dir_parts)
    # owner linear order (x fastest), then direction
    order = np.lexsort((dirs, rel[:, 0], rel[:, 1], rel[:, 2]))
    rel, dirs = rel[order], dirs[order]
    nf = len(rel)

    # point lattice spans [0, n] per axis, relative to the volume origin
    lat = n + 1
    corners = rel[:, None, :] + _CORNERS[dirs]  # (F, 4, 3)
    pkey = corners[..., 0] + lat[0] * (corners[..., 1] + lat[1] * corners[..., 2])
    used = np.zeros(int(np.prod(lat)), dtype=bool)
    used[pkey.ravel()] = True
    compact = np.cumsum(used) - 1
    face_points = compact[pkey]
    keys = np.flatnonzero(used)
    points = np.stack([keys % lat[0], (keys // lat[0]) % lat[1], keys // (lat[0] * lat[1])], axis=1)
    point_incidence = np.bincount(face_points.ravel(), minlength=len(points))

    # an edge is keyed by its lower endpoint and its axis
    a = pkey
    b = np.roll(pkey, -1, axis=1)
    lo = np.minimum(a, b)
    ca = corners
    cb = np.roll(corners, -1, axis=1)
    axis = np.argmax(ca != cb, axis=2)
    ekey = lo * 3 + axis
    eused = np.zeros(int(np.prod(lat)) * 3, dtype=bool)
    eused[ekey.ravel()] = True
    ecompact = np.cumsum(eused) - 1
    face_edges = ecompact[ekey]  # (F, 4)
    ne = int(eused.sum())
    incidence = np.bincount(face_edges.ravel(), minlength=ne)
    bad = np.flatnonzero(incidence != 2)
    if len(bad):
        raise NonManifoldError(f"non-manifold edge: {len(bad)} edges without exactly two incident faces")
    fidx = np.repeat(np.arange(nf), 4)
    first = np.full(ne, nf, dtype=np.int64)
    second = np.full(ne, -1, dtype=np.int64)
    np.minimum.at(first, face_edges.ravel(), fidx)
    np.maximum.at(second, face_edges.ravel(), fidx)
    edge_faces = np.stack([first, second], axis=1)
    ekeys = np.flatnonzero(eused)
    elo = compact[ekeys // 3]
    eaxis = ekeys % 3
    step = np.array([1, lat[0], lat[0] * lat[1]])[eaxis]
    ehi = compact[ekeys // 3 + step]
    edges = np.stack([elo, ehi], axis=1)

    neighbors = (edge_faces[face_edges, 0] + edge_faces[face_edges, 1] - fidx.reshape(nf, 4)).tolist()
    surface_ids = _label_faces(neighbors)

    return BoundaryComplex(
        owners=rel + np.asarray(volume.origin),
        directions=dirs,
        face_points=face_points,
        points=points + np.asarray(volume.origin),
        point_incidence=point_incidence,
        edges=edges,
        edge_faces=edge_faces,
        surface_ids=np.asarray(surface_ids, dtype=np.int64),
        surface_count=max(surface_ids) + 1 if surface_ids else 0,
    )


def _label_faces(neighbors: list[list[int]]) -> list[int]:
    """Breadth-first labeling of faces joined through shared edges."""
    label = [-1] * len(neighbors)
    cur = 0
    for seed in range(len(neighbors)):
        if label[seed] >= 0:
            continue
        label[seed] = cur
        frontier = [seed]
        while frontier:
            nxt = []
            for f in frontier:
                for g in neighbors[f]:
                    if label[g] < 0:
                        label[g] = cur
                        nxt.append(g)
            frontier = nxt
        cur += 1
    return label


def euler_characteristic(complex: BoundaryComplex, surface: int) -> int:
    """V - E + F over the cells of one surface."""
    v, e, f = complex.surface_cells(surface)
    return v - e + f


def write_off(complex: BoundaryComplex, out: IO[str]) -> None:
    """Quad mesh in OFF format with integer point coordinates and CCW faces."""
    out.write("OFF\n")
    out.write(f"{len(complex.points)} {complex.face_count} 0\n")
    for x, y, z in complex.points.tolist():
        out.write(f"{x} {y} {z}\n")
    for i, j, k, l in complex.face_points.tolist():
        out.write(f"4 {i} {j} {k} {l}\n")
