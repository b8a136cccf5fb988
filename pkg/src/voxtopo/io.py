"""Reading and writing volumes as ``voxlist`` text or ``dvol`` binary files.

voxlist
    ASCII, one voxel per line as three signed decimal integers separated by
    single spaces.  Lines starting with ``#`` and blank lines are skipped.
    The origin is the componentwise minimum of the listed coordinates.

dvol
    ``b"DVOL"``, version byte ``0x01``, origin as three little-endian int32,
    dims as three little-endian uint32, then ``ceil(nx*ny*nz / 8)`` bytes of
    occupancy.  Bit ``i`` of byte ``b`` (LSB first) is linear index
    ``8*b + i`` where ``index = x + nx*(y + ny*z)``.
"""
from __future__ import annotations

import os
import re
import struct
from pathlib import Path

import numpy as np

from .volume import MAX_DIM, VoxelVolume

FORMATS = ("voxlist", "dvol")
DVOL_MAGIC = b"DVOL"
DVOL_VERSION = 1
_HEADER = struct.Struct("<4sB3i3I")
_LINE = re.compile(rb"^([+-]?\d+) ([+-]?\d+) ([+-]?\d+)[ \t\r]*$")


class VolumeFormatError(ValueError):
    """A volume file does not parse under its declared format."""

    def __init__(self, message: str, path=None, line: int | None = None, offset: int | None = None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{': '.join(where + [message]) if where else message}")
        self.path = path
        self.line = line
        self.offset = offset


def infer_format(path) -> str:
    ext = Path(path).suffix.lower()
    if ext == ".dvol":
        return "dvol"
    if ext in (".voxlist", ".txt", ".xyz", ""):
        return "voxlist"
    raise ValueError(f"cannot infer volume format from extension {ext!r}; pass a format")


def load_volume(path, format: str | None = None) -> VoxelVolume:
    fmt = format or infer_format(path)
    data = Path(path).read_bytes()
    if fmt == "voxlist":
        return parse_voxlist(data, path)
    if fmt == "dvol":
        return parse_dvol(data, path)
    raise ValueError(f"unknown volume format {fmt!r}")


def save_volume(volume: VoxelVolume, path, format: str | None = None) -> None:
    fmt = format or infer_format(path)
    if volume.count == 0:
        raise ValueError("empty volume")
    if fmt == "voxlist":
        data = encode_voxlist(volume)
    elif fmt == "dvol":
        data = encode_dvol(volume)
    else:
        raise ValueError(f"unknown volume format {fmt!r}")
    # write-then-rename so a failed write never leaves a truncated file behind
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def parse_voxlist(data: bytes, path=None) -> VoxelVolume:
    coords = []
    for lineno, raw in enumerate(data.split(b"\n"), start=1):
        if not raw.strip() or raw.startswith(b"#"):
            continue
        m = _LINE.match(raw)
        if m is None:
            raise VolumeFormatError(f"expected three integers, got {raw[:40]!r}", path, line=lineno)
        coords.append(tuple(int(g) for g in m.groups()))
    if not coords:
        raise VolumeFormatError("empty volume", path)
    try:
        return VoxelVolume.from_coords(coords)
    except ValueError as exc:
        raise VolumeFormatError(str(exc), path) from exc


def encode_voxlist(volume: VoxelVolume) -> bytes:
    lines = [f"{x} {y} {z}\n" for x, y, z in volume.coords().tolist()]
    return "".join(lines).encode("ascii")


def parse_dvol(data: bytes, path=None) -> VoxelVolume:
    if len(data) < _HEADER.size:
        raise VolumeFormatError(f"truncated header ({len(data)} bytes)", path, offset=len(data))
    magic, version, ox, oy, oz, nx, ny, nz = _HEADER.unpack_from(data)
    if magic != DVOL_MAGIC:
        raise VolumeFormatError(f"bad magic {magic!r}", path, offset=0)
    if version != DVOL_VERSION:
        raise VolumeFormatError(f"unsupported version {version}", path, offset=4)
    dims = (nx, ny, nz)
    if any(n == 0 or n > MAX_DIM for n in dims):
        raise VolumeFormatError(f"invalid dims {dims}", path, offset=17)
    ncell = nx * ny * nz
    nbytes = (ncell + 7) // 8
    body = data[_HEADER.size:]
    if len(body) != nbytes:
        raise VolumeFormatError(
            f"occupancy has {len(body)} bytes, expected {nbytes}", path,
            offset=_HEADER.size + min(len(body), nbytes),
        )
    bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8), bitorder="little")
    if bits[ncell:].any():
        raise VolumeFormatError("nonzero padding bits", path, offset=len(data) - 1)
    flat = bits[:ncell].astype(bool)
    if not flat.any():
        raise VolumeFormatError("empty volume", path)
    grid = flat.reshape((nx, ny, nz), order="F")
    try:
        return VoxelVolume(grid, (ox, oy, oz))
    except ValueError as exc:
        raise VolumeFormatError(str(exc), path) from exc


def encode_dvol(volume: VoxelVolume) -> bytes:
    header = _HEADER.pack(DVOL_MAGIC, DVOL_VERSION, *volume.origin, *volume.dims)
    body = np.packbits(volume.flat(), bitorder="little").tobytes()
    return header + body
