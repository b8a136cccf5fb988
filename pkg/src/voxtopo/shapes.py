"""Deterministic fixture volumes: cuboids, digital balls, rings, holed plates, shells.

Shapes can be built directly or from a compact text form used by the CLI::

    cuboid:5,3,2      ball:4       ring:3,3[,t]     plate:2[,t]
    shell:5,5,5,1,1,1 random:10,10,10[,density]
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .volume import VoxelVolume

KINDS = ("cuboid", "ball", "ring", "plate", "shell", "random")


class ShapeError(ValueError):
    pass


def _positive(name: str, *values) -> None:
    for v in values:
        if v <= 0:
            raise ShapeError(f"{name}: dimensions must be positive, got {values}")


def cuboid(a: int, b: int, c: int) -> VoxelVolume:
    _positive("cuboid", a, b, c)
    return VoxelVolume(np.ones((a, b, c), dtype=bool))


def ball(r: float) -> VoxelVolume:
    """Voxels whose centers lie within distance ``r`` of the center voxel's center."""
    _positive("ball", r)
    k = int(np.floor(r))
    ax = np.arange(-k, k + 1)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    return VoxelVolume(x * x + y * y + z * z <= r * r)


def ring(a: int, b: int, thickness: int = 1, holes=None) -> VoxelVolume:
    """An ``a x b`` slab of the given thickness with through-holes.

    ``holes`` is a list of (x, y) columns to remove; by default the whole
    interior is removed, leaving a one-voxel-wide frame.
    """
    _positive("ring", a, b, thickness)
    if holes is None:
        if a < 3 or b < 3:
            raise ShapeError(f"ring: footprint {a}x{b} has no interior for a hole")
        holes = [(x, y) for x in range(1, a - 1) for y in range(1, b - 1)]
    grid = np.ones((a, b, thickness), dtype=bool)
    for x, y in holes:
        if not (1 <= x <= a - 2 and 1 <= y <= b - 2):
            raise ShapeError(f"ring: hole ({x}, {y}) overlaps the border of the {a}x{b} footprint")
        grid[x, y, :] = False
    return VoxelVolume(grid)


def plate_with_holes(n: int, thickness: int = 1) -> VoxelVolume:
    """A 3-wide plate with ``n`` single-column holes separated by solid columns."""
    if n < 0:
        raise ShapeError(f"plate: hole count must be >= 0, got {n}")
    _positive("plate", thickness)
    a = max(2 * n + 1, 3)
    return ring(a, 3, thickness, holes=[(1 + 2 * i, 1) for i in range(n)])


def shell(outer=(5, 5, 5), inner=(1, 1, 1)) -> VoxelVolume:
    """Outer cuboid minus a centered inner cuboid, leaving a closed cavity."""
    _positive("shell", *outer, *inner)
    grid = np.ones(tuple(outer), dtype=bool)
    lo = []
    for o, i in zip(outer, inner):
        if o - i < 2 or (o - i) % 2:
            raise ShapeError(f"shell: inner {tuple(inner)} cannot be centered in outer {tuple(outer)} with walls")
        lo.append((o - i) // 2)
    grid[lo[0]:lo[0] + inner[0], lo[1]:lo[1] + inner[1], lo[2]:lo[2] + inner[2]] = False
    return VoxelVolume(grid)


def random_volume(dims, density: float = 0.5, seed: int = 0) -> VoxelVolume:
    """Bernoulli voxels in a box; at least one voxel is always set."""
    _positive("random", *dims)
    if not 0.0 < density <= 1.0:
        raise ShapeError(f"random: density must be in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    grid = rng.random(tuple(dims)) < density
    if not grid.any():
        grid.flat[rng.integers(grid.size)] = True
    return VoxelVolume(grid).cropped()


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    params: tuple = ()
    seed: int = 0
    options: dict = field(default_factory=dict, compare=False)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "ShapeSpec":
        kind, _, rest = text.partition(":")
        kind = kind.strip().lower()
        if kind not in KINDS:
            raise ShapeError(f"unknown shape {kind!r}; expected one of {', '.join(KINDS)}")
        params = []
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            try:
                params.append(int(tok))
            except ValueError:
                try:
                    params.append(float(tok))
                except ValueError:
                    raise ShapeError(f"{kind}: bad parameter {tok!r}") from None
        return cls(kind, tuple(params), seed)


def generate_shape(spec: ShapeSpec | str, seed: int = 0) -> VoxelVolume:
    if isinstance(spec, str):
        spec = ShapeSpec.parse(spec, seed)
    p = spec.params
    try:
        if spec.kind == "cuboid":
            return cuboid(*(p or (1, 1, 1)))
        if spec.kind == "ball":
            return ball(*(p or (3,)))
        if spec.kind == "ring":
            return ring(*(p or (3, 3)), **spec.options)
        if spec.kind == "plate":
            return plate_with_holes(*(p or (1,)))
        if spec.kind == "shell":
            if p and len(p) != 6:
                raise ShapeError("shell: expected six parameters (outer a,b,c then inner a,b,c)")
            return shell(p[:3], p[3:]) if p else shell()
        if spec.kind == "random":
            if len(p) not in (3, 4):
                raise ShapeError("random: expected nx,ny,nz[,density]")
            return random_volume(p[:3], *p[3:], seed=spec.seed)
    except TypeError as exc:
        raise ShapeError(f"{spec.kind}: {exc}") from None
    raise ShapeError(f"unknown shape {spec.kind!r}")
