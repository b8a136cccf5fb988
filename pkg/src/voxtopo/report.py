"""End-to-end pipeline and the topology report.

Stages: 26-connected components, repair of each, face-connected
relabeling, then per face-connected component the boundary complex,
surface genera, cavities and Betti ranks.  One failing component never
hides the others; failures are collected in ``status``.
"""
from __future__ import annotations

import functools
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary import NonManifoldError, build_boundary_complex
from .homology import HomologyRanks, euler_characteristic_3m, homology_of_component
from .labeling import extract_component, label_background, label_components
from .repair import RepairLog, repair_volume
from .surface import GenusEulerMismatch, SurfaceClassificationError, SurfaceResult, analyze_surfaces
from .volume import AdjacencyKind, VoxelVolume

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
STATUS_OK = "ok"
STATUS_REPAIR_ABORTED = "repair_aborted"
STATUS_CLASSIFICATION_FAILED = "classification_failed"


class PipelineInconsistency(RuntimeError):
    pass


@dataclass
class SurfaceEntry:
    id: int
    faces: int
    points: int
    m3: int
    m4: int
    m5: int
    m6: int
    euler: int
    genus: int

    @classmethod
    def from_result(cls, r: SurfaceResult) -> "SurfaceEntry":
        c = r.classification
        return cls(r.surface, r.faces, r.points, c.m3, c.m4, c.m5, c.m6, r.euler, r.genus)


@dataclass
class ComponentEntry:
    id: int
    voxels: int
    surfaces: list[SurfaceEntry]
    homology: HomologyRanks
    cavities: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "voxels": self.voxels,
            "surfaces": [vars(s).copy() for s in self.surfaces],
            "homology": {"b0": self.homology.b0, "b1": self.homology.b1, "b2": self.homology.b2, "b3": self.homology.b3},
            "cavities": self.cavities,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComponentEntry":
        h = d["homology"]
        return cls(
            id=d["id"],
            voxels=d["voxels"],
            surfaces=[SurfaceEntry(**s) for s in d["surfaces"]],
            homology=HomologyRanks(h["b0"], h["b1"], h["b2"], h["b3"]),
            cavities=d["cavities"],
        )


@dataclass
class TopologyReport:
    path: str | None
    format: str | None
    voxels: int
    repair: RepairLog
    components: list[ComponentEntry] = field(default_factory=list)
    status: str = STATUS_OK
    diagnostics: list[str] = field(default_factory=list)
    # analyzed face-connected components, parallel to ``components``; not serialized
    volumes: list[VoxelVolume] = field(default_factory=list, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "input": {"path": self.path, "format": self.format, "voxels": self.voxels},
            "repair": {
                "deletions": [list(c) for c in self.repair.deletions],
                "additions": [list(c) for c in self.repair.additions],
                "passes": self.repair.passes,
                "aborted": self.repair.aborted,
            },
            "components": [c.to_dict() for c in self.components],
            "status": {"code": self.status, "diagnostics": list(self.diagnostics)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TopologyReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {d.get('schema_version')!r}")
        rep = d["repair"]
        return cls(
            path=d["input"]["path"],
            format=d["input"]["format"],
            voxels=d["input"]["voxels"],
            repair=RepairLog(
                deletions=[tuple(c) for c in rep["deletions"]],
                additions=[tuple(c) for c in rep["additions"]],
                passes=rep["passes"],
                aborted=rep["aborted"],
            ),
            components=[ComponentEntry.from_dict(c) for c in d["components"]],
            status=d["status"]["code"],
            diagnostics=list(d["status"]["diagnostics"]),
        )


def worker_count() -> int:
    raw = os.environ.get("VOXTOPO_THREADS", "").strip()
    n = int(raw) if raw else 0
    if n < 0:
        raise ValueError(f"VOXTOPO_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def analyze_component(component: VoxelVolume) -> tuple[list[SurfaceResult], int, HomologyRanks]:
    """Surfaces, cavity count and Betti ranks of one well-composed face-connected component.

    Results depend only on the shape, not its position, so small shapes
    (single voxels, short bars) are memoized across calls.
    """
    if component.count <= _MEMO_MAX_VOXELS:
        return _analyze_shape(component.dims, component.flat().tobytes())
    return _analyze(component)


_MEMO_MAX_VOXELS = 64


@functools.lru_cache(maxsize=4096)
def _analyze_shape(dims, bits: bytes):
    grid = np.frombuffer(bits, dtype=bool).reshape(dims, order="F")
    return _analyze(VoxelVolume(grid))


def _analyze(component: VoxelVolume):
    complex = build_boundary_complex(component, check=False)
    surfaces = analyze_surfaces(complex)
    cavities = len(label_background(component).cavities)
    if cavities != len(surfaces) - 1:
        raise PipelineInconsistency(f"{len(surfaces)} boundary surfaces but {cavities} cavities")
    h = homology_of_component([s.genus for s in surfaces])
    boundary_chi = sum(s.euler for s in surfaces)
    if 2 * euler_characteristic_3m(h) != boundary_chi:
        raise PipelineInconsistency(f"chi(M) = {euler_characteristic_3m(h)} but chi(boundary) = {boundary_chi}")
    return surfaces, cavities, h


def run_pipeline(
    volume: VoxelVolume,
    budget: int | None = None,
    connectivity: AdjacencyKind = AdjacencyKind.VERTEX26,
    path: str | None = None,
    format: str | None = None,
    threads: int | None = None,
) -> TopologyReport:
    """Repair and analyze every component of ``volume``.

    ``budget`` caps total repair modifications across all components
    (None is unlimited).  ``connectivity`` is the adjacency used to find
    the objects that are repaired independently.
    """
    report = TopologyReport(path, format, volume.count, RepairLog())
    objects = label_components(volume, connectivity)
    pieces: list[VoxelVolume] = []
    for k in range(1, objects.component_count + 1):
        obj = extract_component(volume, objects, k)
        remaining = None if budget is None else budget - report.repair.modifications
        fixed, rlog = repair_volume(obj, remaining)
        report.repair.deletions += rlog.deletions
        report.repair.additions += rlog.additions
        report.repair.passes += rlog.passes
        if rlog.aborted:
            report.repair.aborted = True
            report.status = STATUS_REPAIR_ABORTED
            report.diagnostics.append(
                f"object {k} ({obj.count} voxels at {obj.origin}): repair aborted, {rlog.reason}; not analyzed"
            )
            continue
        if rlog.modifications == 0 and connectivity is AdjacencyKind.VERTEX26:
            # an untouched 26-connected object without pathologies is face-connected
            pieces.append(fixed)
            continue
        faces = label_components(fixed, AdjacencyKind.FACE6)
        pieces += [extract_component(fixed, faces, j) for j in range(1, faces.component_count + 1)]

    n = threads if threads is not None else worker_count()
    if n > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=min(n, len(pieces))) as pool:
            futures = [pool.submit(analyze_component, p) for p in pieces]
            outcomes = [_outcome(f.result) for f in futures]
    else:
        outcomes = [_outcome(lambda p=p: analyze_component(p)) for p in pieces]

    for cid, (piece, (result, err)) in enumerate(zip(pieces, outcomes), start=1):
        if err is not None:
            if report.status == STATUS_OK:
                report.status = STATUS_CLASSIFICATION_FAILED
            report.diagnostics.append(f"component {cid} ({piece.count} voxels at {piece.origin}): {err}")
            log.warning("component %d failed: %s", cid, err)
            continue
        surfaces, cavities, h = result
        report.components.append(
            ComponentEntry(cid, piece.count, [SurfaceEntry.from_result(s) for s in surfaces], h, cavities)
        )
        report.volumes.append(piece)
    return report


def _outcome(call):
    try:
        return call(), None
    except (SurfaceClassificationError, NonManifoldError, GenusEulerMismatch, PipelineInconsistency) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def render_report(report: TopologyReport, mode: str = "json") -> bytes:
    if mode == "json":
        return (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if mode == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown report mode {mode!r}")


def render_text(report: TopologyReport) -> str:
    lines = [
        f"input: {report.path or '-'} ({report.format or 'in-memory'}), {report.voxels} voxels",
        f"repair: {len(report.repair.deletions)} deleted, {len(report.repair.additions)} added, "
        f"{report.repair.passes} passes{' (aborted)' if report.repair.aborted else ''}",
        f"status: {report.status}",
    ]
    lines += [f"  ! {d}" for d in report.diagnostics]
    if report.components:
        lines.append("ranks assume each component is a 3-manifold: certified by clean repair and surface classification")
    for c in report.components:
        h = c.homology
        lines.append("")
        lines.append(f"component {c.id}: {c.voxels} voxels, {len(c.surfaces)} boundary surfaces, {c.cavities} cavities")
        lines.append(f"  betti: b0={h.b0} b1={h.b1} b2={h.b2} b3={h.b3}")
        for s in c.surfaces:
            lines.append(
                f"  surface {s.id}: genus {s.genus}, euler {s.euler}, {s.faces} faces, {s.points} points "
                f"(M3={s.m3} M4={s.m4} M5={s.m5} M6={s.m6})"
            )
    return "\n".join(lines) + "\n"
