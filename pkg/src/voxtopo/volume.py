"""Binary voxel volumes in raster space.

A volume is a dense boolean grid indexed ``grid[x, y, z]`` plus the lattice
coordinate of its ``[0, 0, 0]`` cell.  The linearization used everywhere a
scalar index is needed (file format, tie-breaking, label order) is::

    index = x + nx * (y + ny * z)

with coordinates taken relative to ``origin``, i.e. x varies fastest.
"""
from __future__ import annotations

import enum
import itertools
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 1 << 20
INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1

Coord = tuple[int, int, int]


class AdjacencyKind(enum.Enum):
    FACE6 = "face6"
    VERTEX26 = "vertex26"

    @property
    def offsets(self) -> list[Coord]:
        if self is AdjacencyKind.FACE6:
            return list(FACE_OFFSETS)
        return list(VERTEX_OFFSETS)


FACE_OFFSETS: tuple[Coord, ...] = (
    (-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1),
)
VERTEX_OFFSETS: tuple[Coord, ...] = tuple(
    d for d in itertools.product((-1, 0, 1), repeat=3) if d != (0, 0, 0)
)


class VoxelVolume:
    """Immutable binary occupancy grid with a bounding-box origin."""

    __slots__ = ("origin", "grid", "count")

    def __init__(self, grid: np.ndarray, origin: Sequence[int] = (0, 0, 0)):
        grid = np.array(grid, dtype=bool, copy=True)
        if grid.ndim != 3:
            raise ValueError(f"grid must be 3-dimensional, got shape {grid.shape}")
        if any(n <= 0 for n in grid.shape):
            raise ValueError(f"dims must be positive, got {grid.shape}")
        if any(n > MAX_DIM for n in grid.shape):
            raise ValueError(f"dims {grid.shape} exceed the per-axis limit {MAX_DIM}")
        origin = tuple(int(o) for o in origin)
        if len(origin) != 3:
            raise ValueError("origin must have three components")
        for o, n in zip(origin, grid.shape):
            if o < INT32_MIN or o + n - 1 > INT32_MAX:
                raise ValueError(f"origin {origin} with dims {grid.shape} leaves the int32 range")
        grid.flags.writeable = False
        self.origin: Coord = origin
        self.grid = grid
        self.count = int(grid.sum())

    # -- construction -----------------------------------------------------

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[int]]) -> "VoxelVolume":
        """Tight volume containing exactly ``coords`` (duplicates collapse)."""
        pts = np.asarray(list(coords), dtype=np.int64).reshape(-1, 3)
        if len(pts) == 0:
            raise ValueError("empty volume")
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        grid = np.zeros(tuple(hi - lo + 1), dtype=bool)
        rel = pts - lo
        grid[rel[:, 0], rel[:, 1], rel[:, 2]] = True
        return cls(grid, tuple(int(v) for v in lo))

    def cropped(self) -> "VoxelVolume":
        """Same voxels in their tight bounding box."""
        if self.count == 0:
            raise ValueError("empty volume")
        lo, hi = [], []
        for axis in range(3):
            hit = np.flatnonzero(self.grid.any(axis=tuple(a for a in range(3) if a != axis)))
            lo.append(int(hit[0]))
            hi.append(int(hit[-1]) + 1)
        if lo == [0, 0, 0] and tuple(hi) == self.dims:
            return self
        sub = self.grid[lo[0]:hi[0], lo[1]:hi[1], lo[2]:hi[2]]
        return VoxelVolume(sub, tuple(o + l for o, l in zip(self.origin, lo)))

    # -- queries ----------------------------------------------------------

    @property
    def dims(self) -> Coord:
        return tuple(int(n) for n in self.grid.shape)

    def __len__(self) -> int:
        return self.count

    def __contains__(self, coord: Sequence[int]) -> bool:
        return self.is_set(coord)

    def is_set(self, coord: Sequence[int]) -> bool:
        """Occupancy at a lattice coordinate; outside the box is background."""
        x, y, z = (int(c) - o for c, o in zip(coord, self.origin))
        nx, ny, nz = self.grid.shape
        if 0 <= x < nx and 0 <= y < ny and 0 <= z < nz:
            return bool(self.grid[x, y, z])
        return False

    def linear_index(self, coord: Sequence[int]) -> int:
        x, y, z = (int(c) - o for c, o in zip(coord, self.origin))
        nx, ny, nz = self.grid.shape
        if not (0 <= x < nx and 0 <= y < ny and 0 <= z < nz):
            raise IndexError(f"{tuple(coord)} outside volume box")
        return x + nx * (y + ny * z)

    def coord_of(self, index: int) -> Coord:
        nx, ny, nz = self.grid.shape
        if not 0 <= index < nx * ny * nz:
            raise IndexError(f"linear index {index} out of range")
        x = index % nx
        y = (index // nx) % ny
        z = index // (nx * ny)
        ox, oy, oz = self.origin
        return (x + ox, y + oy, z + oz)

    def coords(self) -> np.ndarray:
        """Set voxel coordinates, shape (count, 3), in linear-index order."""
        z, y, x = np.nonzero(self.grid.transpose(2, 1, 0))
        return np.stack([x, y, z], axis=1).astype(np.int64) + np.asarray(self.origin)

    def flat(self) -> np.ndarray:
        """Occupancy as a 1-D array in linear-index order."""
        return self.grid.ravel(order="F")

    def padded(self, width: int = 1) -> np.ndarray:
        """Writable copy of the grid with ``width`` background layers on every side."""
        out = np.zeros(tuple(n + 2 * width for n in self.grid.shape), dtype=bool)
        out[width:-width or None, width:-width or None, width:-width or None] = self.grid
        return out

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoxelVolume):
            return NotImplemented
        return (
            self.origin == other.origin
            and self.grid.shape == other.grid.shape
            and bool(np.array_equal(self.grid, other.grid))
        )

    def __hash__(self) -> int:
        return hash((self.origin, self.grid.shape, np.packbits(self.flat()).tobytes()))

    def __repr__(self) -> str:
        return f"VoxelVolume(origin={self.origin}, dims={self.dims}, count={self.count})"
