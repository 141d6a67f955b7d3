"""Phase-space points: positions paired with undirected orientations.

Orientations are angles modulo pi (an undirected line element).  The
angle metric is geodesic on that circle, so 0.05 and pi - 0.05 are 0.1
apart, not pi - 0.1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PhasePoint", "PhaseSet", "angle_distance", "phase_metric"]


def angle_distance(a, b):
    """Geodesic distance between orientations modulo pi."""
    d = np.abs(np.mod(a, np.pi) - np.mod(b, np.pi))
    return np.minimum(d, np.pi - d)


@dataclass(frozen=True)
class PhasePoint:
    x1: float
    x2: float
    theta: float

    def position(self):
        return np.array([self.x1, self.x2])


class PhaseSet:
    """Finite sampled subset of position x orientation space."""

    def __init__(self, positions, orientations):
        self.positions = np.atleast_2d(np.asarray(positions, dtype=float))
        self.orientations = np.mod(np.asarray(orientations, dtype=float), np.pi)
        if self.positions.shape != (len(self.orientations), 2):
            raise ValueError("positions must be (n, 2) matching orientations")

    def __len__(self):
        return len(self.orientations)

    def __iter__(self):
        for (x1, x2), th in zip(self.positions, self.orientations):
            yield PhasePoint(float(x1), float(x2), float(th))

    @classmethod
    def concat(cls, sets):
        sets = list(sets)
        return cls(
            np.concatenate([s.positions for s in sets], axis=0),
            np.concatenate([s.orientations for s in sets]),
        )


def phase_metric(p: PhasePoint, q: PhasePoint) -> float:
    """Euclidean position gap combined with the geodesic angle gap.

    The set-level directed distance built on this metric lives in
    diagnostics.phase_distance.
    """
    dx = np.hypot(p.x1 - q.x1, p.x2 - q.x2)
    return float(np.hypot(dx, angle_distance(p.theta, q.theta)))
