"""Radial wavelet and curvelet tight frames on periodized frequency grids."""

from .windows import (
    smooth_step,
    meyer_window,
    angular_bump,
    calderon_sum,
    RadialWindow,
    AngularBump,
)
from .grid import MIN_SCALE, FreqGrid, GridError, SpectralImage, inner_product
from .indices import WaveletIndex, CurveletIndex, CoefficientTable
from .evaluators import SumEvaluator, WindowedEvaluator, WaveletSumEvaluator
from .wavelets import (
    analysis_scales,
    lattice_counts,
    wavelet_spectrum,
    wavelet_analysis,
    wavelet_synthesis,
    iter_wavelet_blocks,
    WAVELET_NORM,
)
from .curvelets import (
    GAIN,
    wedge_count,
    wedge_spacing,
    lattice_steps,
    amplitude,
    orientation,
    WedgeGrid,
    envelope_on_master,
    curvelet_spectrum,
    iter_curvelet_blocks,
    curvelet_analysis,
    curvelet_coefficient,
    directional_coefficient,
    curvelet_synthesis,
    CurveletSumEvaluator,
    CURVELET_NORM,
)
from .subband import subband_filter

__all__ = [
    "smooth_step", "meyer_window", "angular_bump", "calderon_sum",
    "RadialWindow", "AngularBump",
    "MIN_SCALE", "FreqGrid", "GridError", "SpectralImage", "inner_product",
    "WaveletIndex", "CurveletIndex", "CoefficientTable",
    "SumEvaluator", "WindowedEvaluator", "WaveletSumEvaluator",
    "analysis_scales", "lattice_counts", "wavelet_spectrum",
    "wavelet_analysis", "wavelet_synthesis", "iter_wavelet_blocks", "WAVELET_NORM",
    "GAIN", "wedge_count", "wedge_spacing", "lattice_steps", "amplitude",
    "orientation", "WedgeGrid", "envelope_on_master", "curvelet_spectrum",
    "iter_curvelet_blocks", "curvelet_analysis", "curvelet_coefficient", "directional_coefficient",
    "curvelet_synthesis", "CurveletSumEvaluator", "CURVELET_NORM",
    "subband_filter",
]
