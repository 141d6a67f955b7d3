"""Frequency grids and sampled spectra.

All transforms in this package quadrate continuum inner products
<f, g> = (2pi)^-2 Int fhat conj(ghat) on a centered Cartesian grid.
The grid for scale j has N = 2^{j+2} * oversample samples per axis at
spacing pi/oversample, so the total extent is 4*pi*2^j regardless of
oversampling.  That extent covers the supports of all frame elements at
scales j-1, j, j+1 (largest radius 2^{j+2} < 4*pi*2^j / 2) and makes
every lattice phase used by the analysis sweeps an exact FFT kernel.

The dual spatial period is X = 2*oversample, so oversample=2 keeps
periodization images of unit-square content at distance >= 2 from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

MIN_SCALE = 3  # coarser scales belong to the father block, not the frame


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class FreqGrid:
    """Centered frequency grid for the scale-j annulus family.

    Attributes
    ----------
    j : int
        Nominal scale; must be >= MIN_SCALE.
    oversample : int
        Sampling density factor (1 or 2 in practice).  Spacing is
        pi/oversample.
    """

    j: int
    oversample: int = 2

    def __post_init__(self):
        if self.j < MIN_SCALE:
            raise GridError(f"scale {self.j} below minimum {MIN_SCALE}")
        if self.oversample < 1:
            raise GridError("oversample must be a positive integer")

    @property
    def n(self) -> int:
        return 2 ** (self.j + 2) * self.oversample

    @property
    def dxi(self) -> float:
        return np.pi / self.oversample

    @property
    def extent(self) -> float:
        # one-sided: grid covers [-extent/2, extent/2) per axis
        return self.n * self.dxi

    @property
    def spatial_period(self) -> float:
        return 2.0 * np.pi / self.dxi

    def axis(self) -> np.ndarray:
        n = self.n
        return (np.arange(n) - n // 2) * self.dxi

    def mesh(self):
        ax = self.axis()
        return np.meshgrid(ax, ax, indexing="ij")

    def radii(self) -> np.ndarray:
        ax = self.axis()
        return np.hypot(ax[:, None], ax[None, :])

    def covers_annulus(self, j: int, margin: float = 1.0) -> bool:
        """Whether the outer radius 2^{j+1} (times margin) fits on the grid."""
        return margin * 2.0 ** (j + 1) <= self.extent / 2.0

    def require_scale(self, j: int):
        """Reject scales whose annuli this grid does not cover.

        Analysis at nominal scale self.j touches scales self.j-1 .. self.j+1
        only; anything else is a caller bug.
        """
        if not (self.j - 1 <= j <= self.j + 1):
            raise GridError(
                f"grid for scale {self.j} serves scales "
                f"{self.j - 1}..{self.j + 1}, got {j}"
            )
        if not self.covers_annulus(j):
            raise GridError(f"grid extent {self.extent:g} does not cover scale {j}")


@dataclass
class SpectralImage:
    """Spectrum samples on a FreqGrid, optionally with a point evaluator.

    `values[i1, i2]` is the spectrum at xi = (axis[i1], axis[i2]).  The
    evaluator, when present, returns the same spectrum at arbitrary
    frequency points; transforms that quadrate on non-Cartesian node sets
    require it.  Pipeline constructors always attach one.
    """

    grid: FreqGrid
    values: np.ndarray
    evaluator: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        n = self.grid.n
        if self.values.shape != (n, n):
            raise GridError(
                f"values shape {self.values.shape} does not match grid ({n}, {n})"
            )

    def evaluate(self, xi1, xi2):
        """Spectrum at arbitrary frequencies; needs the evaluator."""
        if self.evaluator is None:
            raise GridError(
                "spectral image carries no point evaluator; "
                "off-grid quadrature is not available for raw samples"
            )
        return self.evaluator(np.asarray(xi1), np.asarray(xi2))

    def norm(self) -> float:
        """L2 norm of the underlying signal via the grid Riemann sum."""
        s = np.sum(np.abs(self.values) ** 2)
        return float(np.sqrt(s) * self.grid.dxi / (2.0 * np.pi))

    def copy_with(self, values, evaluator=None) -> "SpectralImage":
        return SpectralImage(self.grid, values, evaluator)


def inner_product(a: SpectralImage, b: SpectralImage) -> complex:
    if a.grid != b.grid:
        raise GridError("inner product requires a common grid")
    s = np.vdot(b.values, a.values)  # sum(a * conj(b))
    return complex(s) * (a.grid.dxi / (2.0 * np.pi)) ** 2
