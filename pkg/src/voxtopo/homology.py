"""Betti ranks of a compact connected 3-manifold in space from its boundary surfaces.

For such a manifold all homology groups are free, so ranks are the whole
story: b0 = 1, b1 = sum of boundary genera (half the first Betti number of
the boundary), b2 = number of boundary surfaces - 1, b3 = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class HomologyRanks:
    b0: int
    b1: int
    b2: int
    b3: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.b0, self.b1, self.b2, self.b3)


def homology_of_component(genera: Sequence[int]) -> HomologyRanks:
    if len(genera) == 0:
        raise ValueError("a bounded component needs at least one boundary surface")
    if any(g < 0 for g in genera):
        raise ValueError(f"negative genus in {list(genera)}")
    return HomologyRanks(1, int(sum(genera)), len(genera) - 1, 0)


def euler_characteristic_3m(h: HomologyRanks) -> int:
    return h.b0 - h.b1 + h.b2 - h.b3
