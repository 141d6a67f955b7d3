"""Radial and angular window profiles for the tight frame construction.

The radial window W lives on [1/2, 2] and satisfies the dyadic partition
identity sum_j W(r/2^j)^2 = 1 for r > 0.  The angular bump V lives on
[-1, 1] and satisfies the integer-shift partition sum_l V(t-l)^2 = 1.
Both are built from one polynomial smooth step so the partition identities
hold pointwise to machine precision rather than approximately.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "smooth_step",
    "meyer_window",
    "angular_bump",
    "calderon_sum",
    "RadialWindow",
    "AngularBump",
]


def smooth_step(t):
    """Polynomial step: 0 for t<=0, 1 for t>=1, C^3 flat at both ends.

    Satisfies smooth_step(t) + smooth_step(1-t) = 1 exactly.
    """
    t = np.asarray(t, dtype=float)
    t = np.clip(t, 0.0, 1.0)
    return t**4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))


def meyer_window(r):
    """Radial frame window W(r).

    Supported on [1/2, 2] with W(1) = 1; rises as sin(pi/2 * step) on
    [1/2, 1] and falls as cos(pi/2 * step) on [1, 2], so
    W(r)^2 + W(2r)^2 = 1 on the overlap and the full Calderon sum
    telescopes to 1 exactly for every r > 0.

    Parameters
    ----------
    r : array_like
        Radii, any shape.  Negative values are treated by |r|.

    Returns
    -------
    ndarray
        Window values in [0, 1], same shape as `r`.
    """
    r = np.abs(np.asarray(r, dtype=float))
    out = np.zeros_like(r)
    rise = (r > 0.5) & (r < 1.0)
    out[rise] = np.sin(0.5 * np.pi * smooth_step(2.0 * r[rise] - 1.0))
    fall = (r >= 1.0) & (r < 2.0)
    out[fall] = np.cos(0.5 * np.pi * smooth_step(r[fall] - 1.0))
    return out


def angular_bump(t):
    """Angular frame window V(t) on [-1, 1] with V(0) = 1.

    Even, vanishes for |t| >= 1, and sum_l V(t-l)^2 = 1 exactly: the
    half-step complement identity makes adjacent shifts square-sum to one.
    """
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    m = t < 1.0
    out[m] = np.cos(0.5 * np.pi * smooth_step(t[m]))
    return out


def calderon_sum(r, j_lo: int, j_hi: int):
    """Partial Calderon sum sum_{j=j_lo}^{j_hi} W(r/2^j)^2.

    Parameters
    ----------
    r : array_like
        Radii at which to evaluate.
    j_lo, j_hi : int
        Inclusive scale range.

    Returns
    -------
    value : ndarray
        The partial sum.
    truncated : ndarray of bool
        True where the scale range clips part of the support, i.e. where
        some scale outside [j_lo, j_hi] would contribute: exactly the radii
        with r/2^{j_lo} < 1 or r/2^{j_hi} > 1.
    """
    if j_hi < j_lo:
        raise ValueError("empty scale range")
    r = np.abs(np.asarray(r, dtype=float))
    value = np.zeros_like(r)
    for j in range(j_lo, j_hi + 1):
        value += meyer_window(r / 2.0**j) ** 2
    truncated = (r < 2.0**j_lo) | (r > 2.0**j_hi)
    return value, truncated


class RadialWindow:
    """Radial window with its smoothness order, support, and moments.

    Thin wrapper so frame code can pass the window around as an object;
    the default profile is `meyer_window`.
    """

    support = (0.5, 2.0)
    seam_order = 3  # continuous derivatives across support seams

    def __call__(self, r):
        return meyer_window(r)


class AngularBump:
    support = (-1.0, 1.0)

    def __call__(self, t):
        return angular_bump(t)
