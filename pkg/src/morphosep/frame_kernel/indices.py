"""Index types and coefficient tables for the two frame families."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, order=True)
class WaveletIndex:
    scale: int
    k1: int
    k2: int


@dataclass(frozen=True, order=True)
class CurveletIndex:
    scale: int
    wedge: int
    k1: int
    k2: int


class CoefficientTable:
    """Flat array-backed table of frame coefficients.

    One table holds entries from several scales (and wedges, for the
    curvelet family).  `kind` is "wavelet" or "curvelet"; wavelet tables
    carry wedge = -1 throughout.  `analysis_oversample` records the lattice
    densification the coefficients were computed at (positions are
    k * 2^-scale / analysis_oversample for wavelets).
    """

    __slots__ = ("kind", "scales", "wedges", "k1", "k2", "values", "analysis_oversample")

    def __init__(self, kind, scales, wedges, k1, k2, values, analysis_oversample=1):
        if kind not in ("wavelet", "curvelet"):
            raise ValueError(f"unknown table kind {kind!r}")
        self.kind = kind
        self.scales = np.asarray(scales, dtype=np.int16)
        self.wedges = np.asarray(wedges, dtype=np.int32)
        self.k1 = np.asarray(k1, dtype=np.int32)
        self.k2 = np.asarray(k2, dtype=np.int32)
        self.values = np.asarray(values, dtype=np.complex128)
        self.analysis_oversample = int(analysis_oversample)
        n = len(self.values)
        for arr in (self.scales, self.wedges, self.k1, self.k2):
            if len(arr) != n:
                raise ValueError("coefficient table columns disagree in length")

    # ---- constructors ----

    @classmethod
    def empty(cls, kind, analysis_oversample=1):
        z = np.zeros(0)
        return cls(kind, z, z, z, z, z, analysis_oversample)

    @classmethod
    def wavelet(cls, scales, k1, k2, values, analysis_oversample=1):
        wedges = np.full(len(values), -1, dtype=np.int32)
        return cls("wavelet", scales, wedges, k1, k2, values, analysis_oversample)

    @classmethod
    def curvelet(cls, scales, wedges, k1, k2, values):
        return cls("curvelet", scales, wedges, k1, k2, values)

    @classmethod
    def concat(cls, tables):
        tables = list(tables)
        if not tables:
            raise ValueError("nothing to concatenate")
        kind = tables[0].kind
        ov = tables[0].analysis_oversample
        if any(t.kind != kind or t.analysis_oversample != ov for t in tables):
            raise ValueError("cannot concatenate tables of mixed kind or lattice")
        return cls(
            kind,
            np.concatenate([t.scales for t in tables]),
            np.concatenate([t.wedges for t in tables]),
            np.concatenate([t.k1 for t in tables]),
            np.concatenate([t.k2 for t in tables]),
            np.concatenate([t.values for t in tables]),
            ov,
        )

    # ---- basics ----

    def __len__(self):
        return len(self.values)

    def abs_values(self):
        return np.abs(self.values)

    def select(self, mask) -> "CoefficientTable":
        return CoefficientTable(
            self.kind,
            self.scales[mask],
            self.wedges[mask],
            self.k1[mask],
            self.k2[mask],
            self.values[mask],
            self.analysis_oversample,
        )

    def index_at(self, i):
        if self.kind == "wavelet":
            return WaveletIndex(int(self.scales[i]), int(self.k1[i]), int(self.k2[i]))
        return CurveletIndex(
            int(self.scales[i]), int(self.wedges[i]), int(self.k1[i]), int(self.k2[i])
        )

    def indices(self):
        return [self.index_at(i) for i in range(len(self))]

    def l1(self) -> float:
        return float(np.sum(np.abs(self.values)))

    def positions(self) -> np.ndarray:
        """Spatial positions of the entries, shape (n, 2)."""
        if self.kind == "wavelet":
            a = 2.0 ** (-self.scales.astype(float)) / self.analysis_oversample
            return np.stack([self.k1 * a, self.k2 * a], axis=1)
        # curvelet positions rotate an anisotropic step; wedge count is
        # parity-dependent through floor(scale/2)
        d1 = 2.0 ** (-self.scales.astype(float))
        d2 = 2.0 ** (-(np.ceil(self.scales / 2.0) + 1.0))
        nw = 2.0 ** np.floor(self.scales / 2.0)
        theta = np.pi * self.wedges / nw
        p, q = self.k1 * d1, self.k2 * d2
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([c * p - s * q, s * p + c * q], axis=1)

    def orientations(self) -> np.ndarray:
        """Wedge orientations mod pi; wavelet entries have none."""
        if self.kind == "wavelet":
            raise ValueError("wavelet entries carry no orientation")
        nw = 2.0 ** np.floor(self.scales / 2.0)
        return np.mod(np.pi * self.wedges / nw, np.pi)
