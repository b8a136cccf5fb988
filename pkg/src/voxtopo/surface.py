"""Genus of closed digital surfaces from surface-point types.

Each point of a closed quad surface in the cubical grid meets 3, 4, 5 or 6
boundary faces.  Its discrete curvature is ``(4 - k)`` quarter turns, so
+pi/2, 0, -pi/2 and -pi for k = 3..6.  Summing over the surface gives
``m3 - m5 - 2*m6 = 4 * (2 - 2g)``, i.e. ``g = 1 + (m5 + 2*m6 - m3) / 8``.
All arithmetic stays in integer quarter turns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryComplex, euler_characteristic

# curvature per point class, in units of pi/2
CURVATURE_UNITS = {3: 1, 4: 0, 5: -1, 6: -2}
FULL_TURN_UNITS = 4


class SurfaceClassificationError(ValueError):
    pass


class GenusEulerMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class SurfaceClassification:
    surface: int
    m3: int
    m4: int
    m5: int
    m6: int

    @property
    def total_points(self) -> int:
        return self.m3 + self.m4 + self.m5 + self.m6

    @property
    def curvature_units(self) -> int:
        return sum(CURVATURE_UNITS[k] * getattr(self, f"m{k}") for k in CURVATURE_UNITS)


@dataclass(frozen=True)
class SurfaceResult:
    surface: int
    classification: SurfaceClassification
    genus: int
    euler: int
    faces: int
    points: int


def classify_points(complex: BoundaryComplex, surface: int) -> SurfaceClassification:
    """Bin the points of one surface by the number of its faces meeting there."""
    faces = complex.surface_faces(surface)
    incident = np.bincount(complex.face_points[faces].ravel(), minlength=len(complex.points))
    on_surface = incident > 0
    counts = incident[on_surface]
    bad = (counts < 3) | (counts > 6)
    if bad.any():
        p = np.flatnonzero(on_surface)[np.argmax(bad)]
        raise SurfaceClassificationError(
            f"not a digital surface point: {tuple(int(c) for c in complex.points[p])} "
            f"has {int(incident[p])} incident faces on surface {surface}"
        )
    m = np.bincount(counts, minlength=7)
    return SurfaceClassification(surface, int(m[3]), int(m[4]), int(m[5]), int(m[6]))


def genus(sc: SurfaceClassification) -> int:
    excess = sc.m5 + 2 * sc.m6 - sc.m3
    if excess % 8:
        raise SurfaceClassificationError(
            f"classification inconsistent with closed orientable surface: m5 + 2*m6 - m3 = {excess} is not a multiple of 8"
        )
    g = 1 + excess // 8
    if g < 0:
        raise SurfaceClassificationError(
            f"classification inconsistent with closed orientable surface: genus {g} < 0"
        )
    return g


def gauss_bonnet_check(sc: SurfaceClassification, g: int) -> bool:
    """Total curvature equals 2*pi*(2 - 2g), compared exactly in quarter turns."""
    return sc.curvature_units == FULL_TURN_UNITS * (2 - 2 * g)


def analyze_surfaces(complex: BoundaryComplex) -> list[SurfaceResult]:
    """Classify and compute the genus of every surface, cross-checked against V - E + F."""
    results = []
    for s in range(complex.surface_count):
        sc = classify_points(complex, s)
        g = genus(sc)
        chi = euler_characteristic(complex, s)
        if chi != 2 - 2 * g:
            raise GenusEulerMismatch(f"genus/Euler disagreement on surface {s}: genus {g}, chi {chi}")
        if not gauss_bonnet_check(sc, g):
            raise GenusEulerMismatch(f"Gauss-Bonnet sum {sc.curvature_units} != {FULL_TURN_UNITS * (2 - 2 * g)} on surface {s}")
        _, _, f = complex.surface_cells(s)
        results.append(SurfaceResult(s, sc, g, chi, f, sc.total_points))
    return results
