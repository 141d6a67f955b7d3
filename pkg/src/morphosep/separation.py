"""One-step alternating thresholding for point/curve separation.

The concrete pipeline takes one subband piece, keeps its super-threshold
wavelet coefficients, synthesizes the pointlike part, and then keeps the
super-threshold curvelet coefficients of what remains.  Thresholds are
parameter-free powers of two in the scale; the only tuning knob is the
exponent ``epsilon``.

An abstract mirror of the same four steps operates on a pair of tight
frame matrices in finite dimensions, together with a verifier for the
a-priori error bound that controls it.  The abstract form is what the
proofs manipulate; the concrete form is what runs on spectra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .frame_kernel import (
    CoefficientTable,
    CurveletIndex,
    FreqGrid,
    GridError,
    SpectralImage,
    SumEvaluator,
    WaveletSumEvaluator,
    curvelet_coefficient,
    curvelet_synthesis,
    iter_curvelet_blocks,
    iter_wavelet_blocks,
    wavelet_synthesis,
)
from .targets import piece_energy

__all__ = [
    "EPSILON_LIMIT",
    "EPSILON_OVERRIDE_LIMIT",
    "threshold_pair",
    "ThresholdOutput",
    "select_wavelets",
    "select_curvelets",
    "one_step_threshold",
    "coefficients_at",
    "separation_error",
    "residual_identity_check",
    "probe_indices",
    "AbstractFrame",
    "AbstractOutput",
    "abstract_one_step",
    "BoundReport",
    "threshold_error_bound",
]

# the analysis of the thresholding step needs epsilon below 1/64; the
# override cap keeps the curvelet threshold exponent 1/4 - epsilon positive
EPSILON_LIMIT = 1.0 / 64.0
EPSILON_OVERRIDE_LIMIT = 0.25


def threshold_pair(j: int, epsilon: float) -> tuple[float, float]:
    """Wavelet and curvelet thresholds at nominal scale j.

    No prefactors: the wavelet cut is 2**(epsilon*j), the curvelet cut
    2**(j*(1/4 - epsilon)).
    """
    return 2.0 ** (epsilon * j), 2.0 ** (j * (0.25 - epsilon))


@dataclass
class ThresholdOutput:
    """Everything the one-step pipeline produces at one scale.

    Attributes
    ----------
    scale : int
        Nominal scale j of the input piece.
    epsilon : float
        Threshold exponent used.
    wavelet_threshold, curvelet_threshold : float
        The two cuts, 2**(epsilon*j) and 2**(j*(1/4 - epsilon)).
    kept_wavelets : CoefficientTable
        Super-threshold wavelet coefficients of the input piece; its
        index set is the significant-wavelet set.
    kept_curvelets : CoefficientTable
        Super-threshold curvelet coefficients of the residual.
    point_part, curve_part : SpectralImage
        Syntheses over the two kept sets.
    residual : SpectralImage
        Input minus point_part, exact spectral subtraction.
    """

    scale: int
    epsilon: float
    wavelet_threshold: float
    curvelet_threshold: float
    kept_wavelets: CoefficientTable
    kept_curvelets: CoefficientTable
    point_part: SpectralImage
    curve_part: SpectralImage
    residual: SpectralImage


def select_wavelets(f_j: SpectralImage, j: int, threshold: float,
                    lattice_oversample: int = 1) -> CoefficientTable:
    """Wavelet coefficients of f_j with magnitude >= threshold.

    Ties are kept.  Streams scale by scale, so only the survivors are
    ever materialized.
    """
    if j != f_j.grid.j:
        raise GridError(f"thresholding at scale {j} needs the scale-{j} grid, "
                        f"got {f_j.grid.j}")
    blocks = []
    for scale, k1, k2, vals in iter_wavelet_blocks(f_j, lattice_oversample):
        keep = np.abs(vals) >= threshold
        if not np.any(keep):
            continue
        kk1, kk2 = np.meshgrid(k1, k2, indexing="ij")
        blocks.append(CoefficientTable.wavelet(
            np.full(int(keep.sum()), scale), kk1[keep], kk2[keep], vals[keep],
            analysis_oversample=lattice_oversample))
    if not blocks:
        return CoefficientTable.empty("wavelet", analysis_oversample=lattice_oversample)
    return CoefficientTable.concat(blocks)


def select_curvelets(f_j: SpectralImage, j: int, threshold: float,
                     method: str = "auto") -> CoefficientTable:
    """Curvelet coefficients of f_j with magnitude >= threshold."""
    blocks = []
    for scale, wedge, k1, k2, coef in iter_curvelet_blocks(f_j, j, method):
        keep = np.abs(coef) >= threshold
        if not np.any(keep):
            continue
        kk1, kk2 = np.meshgrid(k1, k2, indexing="ij")
        m = int(keep.sum())
        blocks.append(CoefficientTable.curvelet(
            np.full(m, scale), np.full(m, wedge), kk1[keep], kk2[keep], coef[keep]))
    if not blocks:
        return CoefficientTable.empty("curvelet")
    return CoefficientTable.concat(blocks)


def one_step_threshold(f_j: SpectralImage, j: int, epsilon: float = 0.01, *,
                       allow_large_epsilon: bool = False,
                       method: str = "auto") -> ThresholdOutput:
    """Separate one subband piece into pointlike and curvelike parts.

    Four steps, in order: wavelet analysis of ``f_j`` with the cut
    2**(epsilon*j); synthesis of the kept atoms (the pointlike part);
    exact subtraction; curvelet analysis of the remainder with the cut
    2**(j*(1/4 - epsilon)) and synthesis of its kept elements (the
    curvelike part).  Coefficients at scales j-1, j, j+1 all enter, with
    both thresholds taken at the nominal j.

    Parameters
    ----------
    f_j : SpectralImage
        Subband piece on the scale-j grid.  A point evaluator is needed
        on grids larger than the direct-quadrature limit.
    j : int
        Nominal scale; must match the grid.
    epsilon : float
        Threshold exponent, 0 < epsilon < 1/64.
    allow_large_epsilon : bool
        Accept any epsilon in (0, 1/4) instead.  The separation guarantee
        degrades; the algorithm itself stays well defined as long as the
        curvelet exponent 1/4 - epsilon is positive.
    method : str
        Curvelet quadrature path, as in the frame layer: "auto",
        "wrapped" or "direct".

    Returns
    -------
    ThresholdOutput

    Raises
    ------
    ValueError
        epsilon outside the permitted range.
    GridError
        Grid/scale mismatch.
    """
    limit = EPSILON_OVERRIDE_LIMIT if allow_large_epsilon else EPSILON_LIMIT
    if not 0.0 < epsilon < limit:
        hint = "" if allow_large_epsilon else \
            " (pass allow_large_epsilon=True to go up to 1/4)"
        raise ValueError(f"epsilon {epsilon} outside (0, {limit}){hint}")
    t1, t2 = threshold_pair(j, epsilon)
    kept_w = select_wavelets(f_j, j, t1)
    point_part = wavelet_synthesis(kept_w, f_j.grid)
    evaluator = None
    if f_j.evaluator is not None:
        evaluator = SumEvaluator([(1.0, f_j.evaluator), (-1.0, point_part.evaluator)])
    residual = SpectralImage(f_j.grid, f_j.values - point_part.values, evaluator)
    kept_c = select_curvelets(residual, j, t2, method=method)
    curve_part = curvelet_synthesis(kept_c, f_j.grid)
    return ThresholdOutput(
        scale=j, epsilon=epsilon,
        wavelet_threshold=t1, curvelet_threshold=t2,
        kept_wavelets=kept_w, kept_curvelets=kept_c,
        point_part=point_part, curve_part=curve_part, residual=residual)


def coefficients_at(f: SpectralImage, table: CoefficientTable) -> np.ndarray:
    """Frame coefficients of f at the index set of ``table``.

    Runs the same analysis sweep the thresholding uses, so entries for
    the same input agree bitwise with a prior selection.  Works for both
    wavelet and curvelet tables; the table's kind picks the sweep.
    """
    out = np.zeros(len(table), dtype=np.complex128)
    seen = np.zeros(len(table), dtype=bool)

    def place(sel, k1, k2, vals):
        i1 = table.k1[sel].astype(np.int64) - int(k1[0])
        i2 = table.k2[sel].astype(np.int64) - int(k2[0])
        if np.any((i1 < 0) | (i1 >= k1.size) | (i2 < 0) | (i2 >= k2.size)):
            raise GridError("table position outside the analysis lattice")
        out[sel] = vals[i1, i2]
        seen[sel] = True

    if table.kind == "wavelet":
        for scale, k1, k2, vals in iter_wavelet_blocks(f, table.analysis_oversample):
            sel = table.scales == scale
            if np.any(sel):
                place(sel, k1, k2, vals)
    else:
        for scale, wedge, k1, k2, vals in iter_curvelet_blocks(f, f.grid.j):
            sel = (table.scales == scale) & (table.wedges == wedge)
            if np.any(sel):
                place(sel, k1, k2, vals)
    if not np.all(seen):
        bad = int(np.flatnonzero(~seen)[0])
        raise GridError(f"table scale outside the analysis range: {table.index_at(bad)}")
    return out


def separation_error(out: ThresholdOutput, point_piece: SpectralImage,
                     curve_piece: SpectralImage) -> float:
    """Relative separation error against the true filtered pieces.

    (||W - P|| + ||C* - C||) / (||P|| + ||C||) with every norm taken by
    piece_energy on the common grid.
    """
    grid = out.residual.grid
    for piece in (point_piece, curve_piece):
        if piece.grid.j != grid.j or piece.grid.n != grid.n:
            raise GridError("separation error needs all pieces on one grid")
    denominator = piece_energy(point_piece) + piece_energy(curve_piece)
    if denominator == 0.0:
        raise ValueError("degenerate scene: both true pieces vanish")
    numerator = (
        piece_energy(SpectralImage(grid, out.point_part.values - point_piece.values))
        + piece_energy(SpectralImage(grid, out.curve_part.values - curve_piece.values)))
    return numerator / denominator


def _component_sum(kept: CoefficientTable, values: np.ndarray,
                   grid: FreqGrid) -> SpectralImage:
    table = CoefficientTable.wavelet(
        kept.scales, kept.k1, kept.k2, values,
        analysis_oversample=kept.analysis_oversample)
    zeros = np.broadcast_to(np.complex128(0.0), (grid.n, grid.n))
    return SpectralImage(grid, zeros, WaveletSumEvaluator(table))


def residual_identity_check(out: ThresholdOutput, point_piece: SpectralImage,
                            curve_piece: SpectralImage,
                            probe: Sequence[CurveletIndex]) -> float:
    """Verify the residual's curvelet coefficients against their assembly.

    For each probe element, the residual coefficient must equal the curve
    piece's coefficient, minus the kept-set sum of (curve coefficient at
    a kept wavelet) times (wavelet-curvelet cross-Gramian entry), plus
    the matching off-set sum for the point piece.  The off-set sum is
    folded through the analysis identity (full-lattice sum equals the
    coefficient of the piece itself), so the assembled right-hand side
    needs only the kept set and stays exact on the grid; each kept-set
    sum is evaluated as one synthesized-spectrum quadrature.

    Returns the maximum absolute mismatch over the probe set.
    """
    probes = list(probe)
    if not probes:
        raise ValueError("probe set is empty")
    grid = out.residual.grid
    kept = out.kept_wavelets
    kept_point = kept_curve = None
    if len(kept):
        kept_point = _component_sum(kept, coefficients_at(point_piece, kept), grid)
        kept_curve = _component_sum(kept, coefficients_at(curve_piece, kept), grid)
    worst = 0.0
    for index in probes:
        lhs = curvelet_coefficient(out.residual, index)
        rhs = curvelet_coefficient(curve_piece, index) \
            + curvelet_coefficient(point_piece, index)
        if kept_point is not None:
            rhs -= curvelet_coefficient(kept_curve, index)
            rhs -= curvelet_coefficient(kept_point, index)
        worst = max(worst, abs(lhs - rhs))
    return worst


def probe_indices(out: ThresholdOutput, count: int = 10, seed: int = 0) -> list:
    """Deterministic probe set near the significant curvelet support.

    Draws rows of the kept curvelet table and jitters the positions a few
    lattice steps, so some probes land off the kept set.  Falls back to
    wedge origins when nothing was kept.
    """
    rng = np.random.default_rng(seed)
    kept = out.kept_curvelets
    picks = []
    if len(kept):
        rows = rng.choice(len(kept), size=min(count, len(kept)), replace=False)
        for row in rows:
            index = kept.index_at(int(row))
            picks.append(CurveletIndex(
                index.scale, index.wedge,
                int(index.k1 + rng.integers(-3, 4)),
                int(index.k2 + rng.integers(-3, 4))))
    while len(picks) < count:
        picks.append(CurveletIndex(out.scale, 0, len(picks), 0))
    return picks[:count]


class AbstractFrame:
    """Finite frame held as a (dimension, count) column matrix.

    By default the constructor checks the two working hypotheses of the
    error bound: the frame is Parseval (frame operator is the identity
    to 1e-10) and the columns share the norm sqrt(dimension/count).
    ``require_tight=False`` skips both checks; the thresholding steps are
    well defined for any column matrix, only the bound needs tightness.
    Columns may be complex; the adjoint is used throughout.
    """

    def __init__(self, vectors, *, require_tight: bool = True):
        vectors = np.asarray(vectors)
        if vectors.ndim != 2:
            raise ValueError("frame needs a 2d (dimension, count) array")
        d, n = vectors.shape
        if n < d:
            raise ValueError(f"only {n} vectors in dimension {d}")
        self.vectors = vectors
        self.dimension = d
        self.count = n
        norms = np.linalg.norm(vectors, axis=0)
        if require_tight:
            gram = vectors @ vectors.conj().T
            worst = float(np.max(np.abs(gram - np.eye(d))))
            if worst > 1e-10:
                raise ValueError(f"frame operator is off identity by {worst:.2e}")
            c = math.sqrt(d / n)
            drift = float(np.max(np.abs(norms - c)))
            if drift > 1e-10:
                raise ValueError(f"column norms vary from sqrt(d/n) by {drift:.2e}")
            self.column_norm = c
        else:
            self.column_norm = float(norms.max()) if n else 0.0

    def coefficients(self, signal: np.ndarray) -> np.ndarray:
        return self.vectors.conj().T @ signal

    @classmethod
    def harmonic(cls, dimension: int, count: int) -> "AbstractFrame":
        """Real harmonic tight frame: rows of sampled sines and cosines.

        Needs count > dimension for even dimension (count >= dimension
        works when dimension is odd, but the uniform requirement keeps
        the constructor simple).
        """
        if count <= dimension:
            raise ValueError("harmonic frame needs count > dimension")
        i = np.arange(count)
        rows = []
        if dimension % 2 == 1:
            rows.append(np.full(count, 1.0 / math.sqrt(count)))
        for k in range(1, dimension // 2 + 1):
            arg = 2.0 * np.pi * k * i / count
            rows.append(np.cos(arg) * math.sqrt(2.0 / count))
            rows.append(np.sin(arg) * math.sqrt(2.0 / count))
        return cls(np.vstack(rows))


@dataclass
class AbstractOutput:
    """Result of the abstract one-step run.

    selected1/selected2 are sorted integer index arrays into the two
    frames' columns; part1/part2 the masked syntheses; residual the exact
    difference signal - part1.
    """

    selected1: np.ndarray
    selected2: np.ndarray
    part1: np.ndarray
    part2: np.ndarray
    residual: np.ndarray


def abstract_one_step(frame1: AbstractFrame, frame2: AbstractFrame,
                      signal, t1: float, t2: float) -> AbstractOutput:
    """One-step thresholding in the two-frame matrix model.

    Keep the frame-1 coefficients of the signal with magnitude >= t1 and
    synthesize; subtract; keep the frame-2 coefficients of the remainder
    with magnitude >= t2 and synthesize.  Ties are kept.
    """
    signal = np.asarray(signal)
    if frame1.dimension != frame2.dimension or signal.shape != (frame1.dimension,):
        raise ValueError("frame/signal dimensions disagree")
    if t1 < 0.0 or t2 < 0.0:
        raise ValueError("thresholds must be nonnegative")
    coef1 = frame1.coefficients(signal)
    selected1 = np.flatnonzero(np.abs(coef1) >= t1)
    masked = np.zeros_like(coef1)
    masked[selected1] = coef1[selected1]
    part1 = frame1.vectors @ masked
    residual = signal - part1
    coef2 = frame2.coefficients(residual)
    selected2 = np.flatnonzero(np.abs(coef2) >= t2)
    masked = np.zeros_like(coef2)
    masked[selected2] = coef2[selected2]
    part2 = frame2.vectors @ masked
    return AbstractOutput(selected1, selected2, part1, part2, residual)


class BoundReport(NamedTuple):
    lhs: float
    rhs: float
    cluster_coherence: float
    missed_mass: float


def threshold_error_bound(frame1: AbstractFrame, frame2: AbstractFrame,
                          out: AbstractOutput, part1_true, part2_true) -> BoundReport:
    """Evaluate both sides of the a-priori separation error bound.

    lhs is the achieved error ||part1 - part1_true||_2 +
    ||part2 - part2_true||_2.  rhs is the guarantee
    c * ((1 + mu) * ||cross||_1 + (2 + mu) * delta), where delta is the
    l1 mass of the true parts' own coefficients missed by the selected
    sets, mu the cluster coherence of frame-1 columns against the
    selected frame-2 cluster, cross the frame-1 coefficients of the
    wrong component on the first selected set, and c the common column
    norm (the larger one if the frames disagree).

    The inequality lhs <= rhs is what the proof guarantees for tight
    frames; Parseval violation beyond 1e-8 raises, because the bound is
    meaningless without it.
    """
    part1_true = np.asarray(part1_true)
    part2_true = np.asarray(part2_true)
    for frame in (frame1, frame2):
        gram = frame.vectors @ frame.vectors.conj().T
        worst = float(np.max(np.abs(gram - np.eye(frame.dimension))))
        if worst > 1e-8:
            raise ValueError(f"frame operator is off identity by {worst:.2e}; "
                             "the bound requires tight frames")
    signal = out.part1 + out.residual
    drift = float(np.linalg.norm(part1_true + part2_true - signal))
    if drift > 1e-10 * max(1.0, float(np.linalg.norm(signal))):
        raise ValueError("true parts do not sum to the analyzed signal")
    lhs = float(np.linalg.norm(out.part1 - part1_true)
                + np.linalg.norm(out.part2 - part2_true))
    own1 = np.abs(frame1.coefficients(part1_true))
    own2 = np.abs(frame2.coefficients(part2_true))
    mask1 = np.zeros(frame1.count, dtype=bool)
    mask1[out.selected1] = True
    mask2 = np.zeros(frame2.count, dtype=bool)
    mask2[out.selected2] = True
    missed = float(own1[~mask1].sum() + own2[~mask2].sum())
    if out.selected2.size:
        cluster = frame2.vectors[:, out.selected2]
        coherence = float(np.max(np.sum(np.abs(cluster.conj().T @ frame1.vectors), axis=0)))
    else:
        coherence = 0.0
    cross = float(np.abs(frame1.coefficients(part2_true))[mask1].sum())
    c = max(frame1.column_norm, frame2.column_norm)
    rhs = c * ((1.0 + coherence) * cross + (2.0 + coherence) * missed)
    return BoundReport(lhs=lhs, rhs=rhs, cluster_coherence=coherence,
                       missed_mass=missed)
