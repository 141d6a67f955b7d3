"""Spectral evaluators: closed-form and structured off-grid evaluation.

Curvelet analysis quadrates on rotated wedge grids rather than the master
Cartesian grid, so every spectrum entering it must be evaluable at
arbitrary frequency nodes.  Evaluators are callables `ev(xi1, xi2)`;
those that admit a fast structured path on a wedge grid also implement
`eval_wedge_grid(wedge)` where `wedge` provides rotated-coordinate axes
(see curvelets.WedgeGrid).  Everything here is exact evaluation of the
model, never interpolation of grid samples.
"""
from __future__ import annotations

import numpy as np

from .windows import meyer_window

__all__ = [
    "SumEvaluator",
    "WindowedEvaluator",
    "WaveletSumEvaluator",
    "evaluate_on_wedge",
]


def evaluate_on_wedge(ev, wedge):
    """Evaluate `ev` on a wedge grid, using its structured path if any."""
    fast = getattr(ev, "eval_wedge_grid", None)
    if fast is not None:
        return fast(wedge)
    x1, x2 = wedge.xi_mesh()
    return ev(x1, x2)


class SumEvaluator:
    """Linear combination sum_i c_i * ev_i."""

    def __init__(self, terms):
        self.terms = [(complex(c), ev) for c, ev in terms]

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape, dtype=np.complex128)
        for c, ev in self.terms:
            out += c * ev(x1, x2)
        return out

    def eval_wedge_grid(self, wedge):
        out = np.zeros((wedge.m1, wedge.m2), dtype=np.complex128)
        for c, ev in self.terms:
            out += c * evaluate_on_wedge(ev, wedge)
        return out


class WindowedEvaluator:
    """Base spectrum times the radial subband window at one scale."""

    def __init__(self, base, scale: int):
        self.base = base
        self.scale = int(scale)

    def __call__(self, x1, x2):
        r = np.hypot(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
        return self.base(x1, x2) * meyer_window(r / 2.0**self.scale)

    def eval_wedge_grid(self, wedge):
        vals = evaluate_on_wedge(self.base, wedge)
        return vals * meyer_window(wedge.radii() / 2.0**self.scale)


class WaveletSumEvaluator:
    """Evaluator for a superposition of wavelet atoms.

    The generic path costs one complex exponential per (entry, point) and
    is meant for small probe sets.  On a wedge grid the lattice phases
    factor over the two rotated axes, so the whole sum collapses to one
    (entries x M1) by (entries x M2) matrix product per scale.
    """

    def __init__(self, table):
        if table.kind != "wavelet":
            raise ValueError("expected a wavelet coefficient table")
        self.scales = table.scales.astype(int).copy()
        self.positions = table.positions()
        self.values = table.values.copy()

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape, dtype=np.complex128)
        if len(self.values) == 0:
            return out
        r = np.hypot(x1, x2)
        for scale in np.unique(self.scales):
            sel = self.scales == scale
            acc = np.zeros_like(out)
            for b, v in zip(self.positions[sel], self.values[sel]):
                acc += v * np.exp(-1j * (b[0] * x1 + b[1] * x2))
            out += (2.0 ** -float(scale)) * meyer_window(r / 2.0**scale) * acc
        return out

    def eval_wedge_grid(self, wedge):
        out = np.zeros((wedge.m1, wedge.m2), dtype=np.complex128)
        if len(self.values) == 0:
            return out
        z1, z2 = wedge.zeta_axes()
        r = wedge.radii()
        ct, st = np.cos(wedge.theta), np.sin(wedge.theta)
        for scale in np.unique(self.scales):
            sel = self.scales == scale
            b = self.positions[sel]
            # rotated position components: phase is p*zeta1 + q*zeta2
            p = ct * b[:, 0] + st * b[:, 1]
            q = -st * b[:, 0] + ct * b[:, 1]
            u = self.values[sel, None] * np.exp(-1j * p[:, None] * z1[None, :])
            w = np.exp(-1j * q[:, None] * z2[None, :])
            acc = u.T @ w
            out += (2.0 ** -float(scale)) * meyer_window(r / 2.0**scale) * acc
        return out
