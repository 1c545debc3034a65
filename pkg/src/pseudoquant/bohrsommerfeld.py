"""Integral-point counting for energy spheres in the folded chart.

For integer energy level E the standard chart contributes a level space of
dimension 2E - 1.  In the folded chart the admissible axis values l satisfy
l^2 = E^2 - 2k with k a positive integer, giving symmetric pairs +-l for
0 < 2k < E^2 and the single point l = 0 exactly when E is even
(2k = E^2).  Values are stored exactly as (integer l^2, sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SphereSpec:
    """Energy sphere at positive integer level E."""

    E: int

    def __post_init__(self):
        if not isinstance(self.E, int) or self.E < 1:
            raise ValueError("energy level E must be a positive integer")


@dataclass(frozen=True, order=True)
class FoldedPoint:
    """Admissible axis value l = sign * sqrt(l_squared), stored exactly."""

    sign: int
    l_squared: int

    def __post_init__(self):
        if self.l_squared < 0:
            raise ValueError("l_squared must be non-negative")
        if self.l_squared == 0 and self.sign != 0:
            raise ValueError("l = 0 carries sign 0")
        if self.l_squared > 0 and self.sign not in (-1, 1):
            raise ValueError("sign must be -1 or +1 for nonzero l")

    @property
    def value(self) -> float:
        return self.sign * math.sqrt(self.l_squared)


@dataclass(frozen=True)
class LatticeReport:
    """Counting summary for one energy level."""

    E: int
    standard_dim: int
    folded_points: tuple[FoldedPoint, ...]

    @property
    def folded_count(self) -> int:
        return len(self.folded_points)

    @property
    def counts_match(self) -> bool:
        return self.folded_count == self.standard_dim


def standard_dim(E: int) -> int:
    """Dimension 2E - 1 of the level-E space in the standard chart."""
    SphereSpec(E)
    return 2 * E - 1


def folded_points(E: int) -> tuple[FoldedPoint, ...]:
    """All admissible axis values for level E, sorted ascending."""
    SphereSpec(E)
    pts: list[FoldedPoint] = []
    e2 = E * E
    for two_k in range(2, e2, 2):
        ls = e2 - two_k
        pts.append(FoldedPoint(1, ls))
        pts.append(FoldedPoint(-1, ls))
    if e2 % 2 == 0:
        pts.append(FoldedPoint(0, 0))
    return tuple(sorted(pts, key=lambda p: p.value))


def analyse(E: int) -> LatticeReport:
    return LatticeReport(E, standard_dim(E), folded_points(E))


def analyse_range(E_max: int) -> list[LatticeReport]:
    return [analyse(E) for E in range(1, E_max + 1)]


__all__ = [
    "FoldedPoint",
    "LatticeReport",
    "SphereSpec",
    "analyse",
    "analyse_range",
    "folded_points",
    "standard_dim",
]
