"""Dyadic subband filtering."""

from __future__ import annotations

import numpy as np

from .windows import meyer_window
from .grid import FreqGrid, GridError, SpectralImage
from .evaluators import WindowedEvaluator


def subband_filter(f: SpectralImage, j: int) -> SpectralImage:
    """Multiply by the radial window of scale j.

    The output is supported in the open annulus 2^(j-1) < |xi| < 2^(j+1).
    """
    grid = f.grid
    if not grid.covers_annulus(j):
        raise GridError(
            f"grid extent {grid.extent:g} does not cover the scale-{j} annulus")
    win = meyer_window(grid.radii() / 2.0 ** j)
    evaluator = None
    if f.evaluator is not None:
        evaluator = WindowedEvaluator(f.evaluator, j)
    return SpectralImage(grid, f.values * win, evaluator)
