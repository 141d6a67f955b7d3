"""Shared construction helpers for the test suite."""
import numpy as np

from morphosep.frame_kernel import (
    SpectralImage,
    SumEvaluator,
    wavelet_spectrum,
)


def random_annulus_input(grid, j, n_atoms=20, seed=0, bmax=0.6):
    """Random superposition of scale-j wavelet atoms.

    Spectrum is confined to the annulus [2^{j-1}, 2^{j+1}] where the
    three-scale window partition is complete, which is the class the
    analysis/synthesis round trip is exact on; positions stay inside
    the field of view.
    """
    rng = np.random.default_rng(seed)
    kmax = int(bmax * 2.0 ** j)
    parts, coefs = [], []
    for _ in range(n_atoms):
        k1 = int(rng.integers(-kmax, kmax + 1))
        k2 = int(rng.integers(-kmax, kmax + 1))
        c = complex(rng.normal(), rng.normal())
        parts.append(wavelet_spectrum(grid, j, k1, k2))
        coefs.append(c)
    vals = sum(c * a.values for c, a in zip(coefs, parts))
    ev = SumEvaluator([(c, a.evaluator) for c, a in zip(coefs, parts)])
    return SpectralImage(grid, vals, evaluator=ev)


def rel_err(got, want):
    scale = np.linalg.norm(np.asarray(want).ravel())
    return np.linalg.norm(np.asarray(got - want).ravel()) / scale
