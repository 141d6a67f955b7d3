"""Geometric separation of point and curve singularities.

Subpackages:

- frame_kernel: radial wavelet and curvelet tight frames
- targets: synthetic singular distributions and their subband pieces
- separation: one-step thresholding decomposition and its abstract model
- diagnostics: coherence, sparsity, phase-space and wavefront probes
- harness: experiment driver, config files and command line interface
"""

__version__ = "0.1.0"
