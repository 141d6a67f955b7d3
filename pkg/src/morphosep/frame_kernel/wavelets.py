"""Radial wavelet family: atoms, analysis sweeps, synthesis.

Atoms at scale s and lattice index k = (k1, k2):

    psihat_{s,k}(xi) = 2^-s W(|xi|/2^s) exp(-i b . xi),   b = k * 2^-s / ov

with W the radial window and ov the optional lattice densification.  The
scale-j piece of a signal is analyzed over scales j-1, j, j+1; the window
partition makes that family a Parseval frame for spectra supported on the
scale-j annulus, and on the grid the lattice sweep is an exact DFT, so
analysis followed by synthesis reproduces the samples to roundoff.
"""
from __future__ import annotations

import numpy as np

from .evaluators import WaveletSumEvaluator
from .grid import FreqGrid, GridError, SpectralImage
from .indices import CoefficientTable
from .windows import meyer_window

__all__ = [
    "wavelet_spectrum",
    "wavelet_analysis",
    "wavelet_synthesis",
    "iter_wavelet_blocks",
    "analysis_scales",
    "lattice_counts",
    "WAVELET_NORM",
]


def _window_l2() -> float:
    from scipy.integrate import quad

    val, _ = quad(lambda s: meyer_window(s) ** 2 * s, 0.5, 2.0)
    return val


# ||psi||_2, identical for every atom
WAVELET_NORM = float(np.sqrt(_window_l2() / (2.0 * np.pi)))


def analysis_scales(j: int):
    return (j - 1, j, j + 1)


def _stride(grid: FreqGrid, scale: int, ov: int) -> int:
    # lattice step a = 2^-scale/ov maps to `stride` grid samples per index
    s_num = 2 ** (grid.j + 1 - scale)
    if s_num % ov != 0:
        raise GridError(
            f"lattice oversample {ov} is incompatible with scale {scale} "
            f"on the scale-{grid.j} grid (stride 2^{grid.j + 1 - scale} not divisible)"
        )
    return s_num // ov


def lattice_counts(grid: FreqGrid, scale: int, ov: int = 1):
    """Half-width K and full torus count M of the position lattice per axis.

    Positions run over k in [-K, K] when the field of view plus margin is
    smaller than the spatial torus, otherwise over one full torus period
    [-M/2, M/2).
    """
    stride = _stride(grid, scale, ov)
    m_torus = grid.n // stride
    k_fov = (2**scale) * ov + 8  # covers |b| <= 1 plus 8 lattice steps
    if 2 * k_fov + 1 >= m_torus:
        return m_torus // 2, m_torus, True
    return k_fov, 2 * k_fov + 1, False


def _k_axis(grid: FreqGrid, scale: int, ov: int) -> np.ndarray:
    k_half, m, full = lattice_counts(grid, scale, ov)
    if full:
        return np.arange(m) - m // 2
    return np.arange(-k_half, k_half + 1)


def _sign_pattern(stride: int, k1, k2):
    # exp(-i pi stride (k1+k2)) for the grid's centered origin
    if stride % 2 == 0:
        return 1.0
    return np.where((k1 + k2) % 2 == 0, 1.0, -1.0)


def wavelet_spectrum(grid: FreqGrid, scale: int, k1: int, k2: int, ov: int = 1) -> SpectralImage:
    """Sampled spectrum of one wavelet atom, with point evaluator."""
    grid.require_scale(scale)
    _stride(grid, scale, ov)  # validates densification
    a = 2.0**-scale / ov
    b1, b2 = k1 * a, k2 * a
    amp = 2.0**-scale

    def ev(x1, x2):
        return amp * meyer_window(np.hypot(x1, x2) / 2.0**scale) * np.exp(
            -1j * (b1 * x1 + b2 * x2)
        )

    x1, x2 = grid.mesh()
    return SpectralImage(grid, ev(x1, x2), ev)


def wavelet_analysis(f: SpectralImage, j: int, ov: int = 1) -> CoefficientTable:
    """All wavelet coefficients of the scale-j piece over scales j-1..j+1.

    Parameters
    ----------
    f : SpectralImage
        Spectrum samples of the piece (supported on the scale-j annulus).
    j : int
        Nominal scale; must match the grid's.
    ov : int
        Lattice densification factor (1 = canonical Parseval lattice).

    Returns
    -------
    CoefficientTable
        Entries for every lattice position within the field of view plus
        margin (the full spatial torus when that is smaller).
    """
    grid = f.grid
    if j != grid.j:
        raise GridError(f"analysis at scale {j} needs the scale-{j} grid, got {grid.j}")
    blocks = []
    for scale, k1, k2, vals in iter_wavelet_blocks(f, ov):
        kk1, kk2 = np.meshgrid(k1, k2, indexing="ij")
        blocks.append(
            CoefficientTable.wavelet(
                np.full(vals.size, scale),
                kk1.ravel(),
                kk2.ravel(),
                vals.ravel(),
                analysis_oversample=ov,
            )
        )
    return CoefficientTable.concat(blocks)


def iter_wavelet_blocks(f: SpectralImage, ov: int = 1):
    """Yield (scale, k1_axis, k2_axis, coeff_block) per analysis scale.

    The block layout lets thresholding stream scale by scale without
    materializing three full tables at the top grid sizes.
    """
    grid = f.grid
    n = grid.n
    r = grid.radii()
    quad = (grid.dxi / (2.0 * np.pi)) ** 2
    for scale in analysis_scales(grid.j):
        stride = _stride(grid, scale, ov)
        env = (2.0**-scale) * meyer_window(r / 2.0**scale)
        g = f.values * env
        del env
        t = np.fft.ifft2(g)
        del g
        t *= n * n * quad
        k1 = _k_axis(grid, scale, ov)
        k2 = k1
        rows = (k1 * stride) % n
        cols = (k2 * stride) % n
        vals = t[np.ix_(rows, cols)]
        del t
        if stride % 2 == 1:
            kk1, kk2 = np.meshgrid(k1, k2, indexing="ij")
            vals = vals * np.where((kk1 + kk2) % 2 == 0, 1.0, -1.0)
        yield scale, k1, k2, vals


def wavelet_synthesis(table: CoefficientTable, grid: FreqGrid) -> SpectralImage:
    """Superpose the table's atoms on the grid.

    Raises on any entry whose index is not a frame element the grid
    serves: wrong family, scale outside j-1..j+1, or position off the
    lattice torus.
    """
    if table.kind != "wavelet":
        raise GridError("wavelet synthesis got a non-wavelet table")
    ov = table.analysis_oversample
    n = grid.n
    out = np.zeros((n, n), dtype=np.complex128)
    if len(table) == 0:
        return SpectralImage(grid, out, WaveletSumEvaluator(table))
    r = grid.radii()
    for scale in np.unique(table.scales):
        scale = int(scale)
        try:
            grid.require_scale(scale)
        except GridError:
            bad = np.flatnonzero(table.scales == scale)[0]
            raise GridError(f"unknown frame index {table.index_at(bad)}") from None
        stride = _stride(grid, scale, ov)
        m_torus = n // stride
        sel = table.scales == scale
        k1 = table.k1[sel].astype(np.int64)
        k2 = table.k2[sel].astype(np.int64)
        vals = table.values[sel]
        bad = (k1 < -m_torus // 2) | (k1 >= (m_torus + 1) // 2) | (
            k2 < -m_torus // 2
        ) | (k2 >= (m_torus + 1) // 2)
        if np.any(bad):
            i = np.flatnonzero(sel)[np.flatnonzero(bad)[0]]
            raise GridError(f"unknown frame index {table.index_at(i)}")
        emb = np.zeros((n, n), dtype=np.complex128)
        signed = vals * _sign_pattern(stride, k1, k2)
        np.add.at(emb, ((k1 * stride) % n, (k2 * stride) % n), signed)
        s = np.fft.fft2(emb)
        del emb
        s *= (2.0**-scale) * meyer_window(r / 2.0**scale)
        out += s
        del s
    return SpectralImage(grid, out, WaveletSumEvaluator(table))
