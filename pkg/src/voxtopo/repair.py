"""Detection and removal of non-well-composed voxel configurations.

A volume is well-composed when no 2x2 square holds exactly one diagonal
pair of set voxels, and no 2x2x2 block holds exactly two antipodal set
voxels or exactly two antipodal empty voxels.  Repair runs in passes:
fill every complement-corner block first, then delete one voxel of every
corner- or edge-sharing pair, and re-scan until clean or out of budget.
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .volume import Coord, VoxelVolume

# antipodal corner pairs of a 2x2x2 block
_ANTIPODES = (
    ((0, 0, 0), (1, 1, 1)),
    ((1, 0, 0), (0, 1, 1)),
    ((0, 1, 0), (1, 0, 1)),
    ((0, 0, 1), (1, 1, 0)),
)
# (first axis, second axis) spanning each square orientation
_PLANES = ((0, 1), (0, 2), (1, 2))
_BLOCK = tuple(itertools.product((0, 1), repeat=3))
_FACE = ((-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1))


class PathologyKind(enum.Enum):
    CORNER_SHARE = "corner_share"
    EDGE_SHARE = "edge_share"
    COMPLEMENT_CORNER = "complement_corner"


@dataclass(frozen=True)
class PathologyInstance:
    kind: PathologyKind
    location: Coord
    witnesses: tuple[Coord, Coord]


@dataclass
class RepairLog:
    deletions: list[Coord] = field(default_factory=list)
    additions: list[Coord] = field(default_factory=list)
    passes: int = 0
    aborted: bool = False
    reason: str = field(default="", compare=False)

    @property
    def modifications(self) -> int:
        return len(self.deletions) + len(self.additions)


def _add(a, b) -> Coord:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sort_key(inst: PathologyInstance):
    x, y, z = inst.location
    return (z, y, x, _KIND_RANK[inst.kind], _linear_key(inst.witnesses[0]), _linear_key(inst.witnesses[1]))


_KIND_RANK = {PathologyKind.CORNER_SHARE: 0, PathologyKind.COMPLEMENT_CORNER: 1, PathologyKind.EDGE_SHARE: 2}


def _linear_key(c: Coord):
    return (c[2], c[1], c[0])


def _block_table():
    """For each 8-bit block code, the pathologies anchored at the block origin.

    Bit ``x + 2y + 4z`` of a code is the voxel at offset (x, y, z).  Corner
    kinds use the whole block; edge shares use the three squares through the
    block origin, so every square in the grid is looked at exactly once.
    """
    table = []
    for code in range(256):
        on = {d: bool(code >> (d[0] + 2 * d[1] + 4 * d[2]) & 1) for d in _BLOCK}
        total = sum(on.values())
        entries = []
        for a, b in _ANTIPODES:
            if total == 2 and on[a] and on[b]:
                entries.append((PathologyKind.CORNER_SHARE, a, b))
            if total == 6 and not on[a] and not on[b]:
                entries.append((PathologyKind.COMPLEMENT_CORNER, a, b))
        for u, w in _PLANES:
            eu = tuple(int(i == u) for i in range(3))
            ew = tuple(int(i == w) for i in range(3))
            euw = _add(eu, ew)
            o = (0, 0, 0)
            if on[o] and on[euw] and not on[eu] and not on[ew]:
                entries.append((PathologyKind.EDGE_SHARE, o, euw))
            if on[eu] and on[ew] and not on[o] and not on[euw]:
                entries.append((PathologyKind.EDGE_SHARE, eu, ew))
        table.append(tuple(entries))
    return tuple(table), np.array([bool(e) for e in table])


def _scan(grid: np.ndarray, origin: Coord) -> list[PathologyInstance]:
    """All pathologies of a grid whose outer layer is background."""
    g = grid.view(np.uint8)
    n = g.shape
    code = np.zeros(tuple(k - 1 for k in n), dtype=np.uint8)
    for d in _BLOCK:
        code |= g[d[0]:n[0] - 1 + d[0], d[1]:n[1] - 1 + d[1], d[2]:n[2] - 1 + d[2]] << (d[0] + 2 * d[1] + 4 * d[2])
    hit = np.nonzero(_BAD_CODE[code])
    found: list[PathologyInstance] = []
    for p, c in zip(zip(*(h.tolist() for h in hit)), code[hit].tolist()):
        loc = _add(origin, p)
        for kind, a, b in _BLOCK_TABLE[c]:
            found.append(PathologyInstance(kind, loc, (_add(loc, a), _add(loc, b))))
    found.sort(key=_sort_key)
    return found


_BLOCK_TABLE, _BAD_CODE = _block_table()


def detect_pathologies(volume: VoxelVolume) -> list[PathologyInstance]:
    """Every corner-share, edge-share and complement-corner instance, in scan order.

    Scan order is by the instance's block origin in linear-index order
    (x fastest), then kind (corner, complement, edge), then witnesses.
    """
    origin = tuple(o - 1 for o in volume.origin)
    return _scan(volume.padded(1), origin)


def is_well_composed(volume: VoxelVolume) -> bool:
    return not detect_pathologies(volume)


class _Grid:
    """Mutable padded occupancy used during repair, addressed by lattice coordinate.

    The numpy array feeds the vectorized scan; the coordinate set mirrors it
    for cheap point queries.
    """

    def __init__(self, volume: VoxelVolume):
        self.data = volume.padded(1)
        self.origin = tuple(o - 1 for o in volume.origin)
        self.cells = {tuple(c) for c in volume.coords().tolist()}

    def __getitem__(self, c: Coord) -> bool:
        return c in self.cells

    def __setitem__(self, c: Coord, value: bool) -> None:
        self.data[c[0] - self.origin[0], c[1] - self.origin[1], c[2] - self.origin[2]] = value
        if value:
            self.cells.add(c)
        else:
            self.cells.discard(c)

    def face_neighbors(self, c: Coord) -> int:
        x, y, z = c
        cells = self.cells
        return sum((x + dx, y + dy, z + dz) in cells for dx, dy, dz in _FACE)

    def still_present(self, inst: PathologyInstance) -> bool:
        loc = inst.location
        if inst.kind is PathologyKind.EDGE_SHARE:
            a, b = inst.witnesses
            i, j = (k for k in range(3) if a[k] != b[k])
            # the other diagonal of the square spanned by the witnesses
            o1, o2 = list(a), list(a)
            o1[i] = b[i]
            o2[j] = b[j]
            return self[a] and self[b] and not self[tuple(o1)] and not self[tuple(o2)]
        total = sum(_add(loc, d) in self.cells for d in _BLOCK)
        a, b = inst.witnesses
        if inst.kind is PathologyKind.CORNER_SHARE:
            return total == 2 and self[a] and self[b]
        return total == 6 and not self[a] and not self[b]

    def volume(self) -> VoxelVolume:
        return VoxelVolume(self.data, self.origin).cropped()


def repair_volume(volume: VoxelVolume, budget: int | None = None) -> tuple[VoxelVolume, RepairLog]:
    """Remove pathologies by local additions and deletions.

    ``budget`` caps the number of modifications (None is unlimited).  When
    the budget or the pass bound would be exceeded the partial result is
    returned with ``log.aborted`` set; no exception is raised.
    """
    if budget is not None and budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    grid = _Grid(volume)
    log = RepairLog()
    found = _scan(grid.data, grid.origin)
    pass_bound = volume.count + len(found)
    added: Counter[Coord] = Counter()
    deleted: Counter[Coord] = Counter()

    def spend() -> bool:
        if budget is not None and log.modifications >= budget:
            log.aborted = True
            log.reason = f"modification budget {budget} exhausted"
            return False
        return True

    while found:
        if log.passes >= pass_bound:
            log.aborted = True
            log.reason = f"pass bound {pass_bound} reached with {len(found)} pathologies left"
            break
        log.passes += 1
        for inst in found:
            if inst.kind is not PathologyKind.COMPLEMENT_CORNER or not grid.still_present(inst):
                continue
            if not spend():
                return grid.volume(), log
            # least often deleted before (breaks add/delete cycles); then most
            # face contacts with the object; then smaller linear index
            pick = min(inst.witnesses, key=lambda c: (deleted[c], -grid.face_neighbors(c), _linear_key(c)))
            grid[pick] = True
            added[pick] += 1
            log.additions.append(pick)
        for inst in found:
            if inst.kind is PathologyKind.COMPLEMENT_CORNER or not grid.still_present(inst):
                continue
            if not spend():
                return grid.volume(), log
            pick = min(inst.witnesses, key=lambda c: (added[c], grid.face_neighbors(c), _linear_key(c)))
            grid[pick] = False
            deleted[pick] += 1
            log.deletions.append(pick)
        found = _scan(grid.data, grid.origin)
    return grid.volume(), log
