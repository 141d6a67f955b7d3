"""Separation diagnostics: coherence, sparsity, phase-space geometry.

Everything here measures, on concrete runs, the quantities the error
bound and the trend statements are phrased in: cluster coherence of the
kept curvelet set against the wavelet system, l1 coefficient mass
outside a kept set, projections of kept index sets into phase space and
their directed distance to geometric wavefront sets, tube membership,
fitted decay slopes, and single-pair Gramian probes.

Conventions.  Coherence uses Parseval-normalized atoms (the curvelet
analyzer's gain constant is divided out), so its values plug into the
abstract error bound directly.  The Gramian probe returns the raw
frame-pair inner product instead, gain included, because it exists to
check the analyzer's own numbers.  Both are documented where defined;
trend statements are insensitive to the constant either way.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .frame_kernel import (
    GAIN,
    CoefficientTable,
    CurveletIndex,
    FreqGrid,
    GridError,
    SpectralImage,
    WaveletIndex,
    analysis_scales,
    angular_bump,
    directional_coefficient,
    iter_curvelet_blocks,
    iter_wavelet_blocks,
    lattice_counts,
    lattice_steps,
    meyer_window,
    orientation,
    wedge_count,
    wedge_spacing,
)
from .frame_kernel.curvelets import amplitude, _wrap_half
from .phase import PhasePoint, PhaseSet, angle_distance
from .targets import CurveSpec, LineFragment

__all__ = [
    "cluster_coherence",
    "relative_sparsity",
    "tail_sparsity",
    "phase_projection_wavelet",
    "phase_projection_curvelet",
    "phase_distance",
    "TubeSpec",
    "tube_membership",
    "decay_slope",
    "cross_gram_probe",
    "wavelet_probe",
    "wavefront_probe",
    "classify_slope",
    "nearest_wavelet_index",
    "nearest_curvelet_index",
    "export_phase_sets",
]


# ---------------------------------------------------------------------------
# cluster coherence


def _sector_support(grid: FreqGrid, band, scale: int, wedge: int):
    """Half-sector support samples of one wedge envelope.

    Returns integer frequency indices, coordinates, radii and the
    amplitude-weighted window values on the half of the two-sided wedge
    with positive component along the codirection; the other half is the
    exact mirror image, so real atoms need only this one.
    """
    q1, q2, xi1, xi2, rr, ang = band
    theta = orientation(scale, wedge)
    spacing = wedge_spacing(scale)
    rel = _wrap_half(ang - theta)
    keep = (np.abs(rel) < spacing) & (
        math.cos(theta) * xi1 + math.sin(theta) * xi2 > 0.0
    )
    env = amplitude(scale) * meyer_window(rr[keep] / 2.0**scale)
    env *= angular_bump(rel[keep] / spacing)
    return q1[keep], q2[keep], xi1[keep], xi2[keep], rr[keep], env


def _radial_band(grid: FreqGrid, scale: int):
    """Open annulus 2^(scale-1) < r < 2^(scale+1) as flat sample arrays."""
    r = grid.radii()
    mask = (r > 2.0 ** (scale - 1)) & (r < 2.0 ** (scale + 1))
    i1, i2 = np.nonzero(mask)
    ax = grid.axis()
    xi1, xi2 = ax[i1], ax[i2]
    half = grid.n // 2
    return (
        (i1 - half).astype(np.int32),
        (i2 - half).astype(np.int32),
        xi1,
        xi2,
        r[mask],
        np.arctan2(xi2, xi1),
    )


def _torus_count(grid: FreqGrid, scale: int, ov: int) -> int:
    step = 2 ** (grid.j + 1 - scale)
    if step % ov != 0:
        raise GridError(
            f"lattice oversample {ov} is incompatible with scale {scale} "
            f"on the scale-{grid.j} grid"
        )
    return grid.n * ov // step


def cluster_coherence(
    cluster: CoefficientTable,
    j: int,
    grid: FreqGrid,
    *,
    lattice: Optional[CoefficientTable] = None,
    lattice_oversample: int = 1,
    panel: int = 64,
    dtype=np.complex128,
) -> float:
    """Coherence of a curvelet cluster against the wavelet system.

    max over wavelet atoms psi of sum_{eta in cluster} |<gamma_eta, psi>|
    with Parseval-normalized atoms (the analyzer's gain divided out) and
    the package quadrature for every inner product.  The wavelet system
    is the three-scale analysis family at nominal scale ``j``; couplings
    across a scale gap of two or more vanish identically (disjoint
    dyadic annuli) and are never computed.

    Parameters
    ----------
    cluster : CoefficientTable
        Curvelet index set (values are ignored; only the geometry
        enters).  Empty clusters have coherence 0.
    j : int
        Nominal scale; must match the grid's.
    grid : FreqGrid
        Master quadrature grid the analysis ran on.
    lattice : CoefficientTable, optional
        Explicit wavelet index set to maximize over.  Must be nonempty.
        Without it the maximum runs over the full analysis lattice of
        every compatible scale, accumulated in anchored position panels
        (``panel`` lattice steps per axis around each cluster atom;
        couplings past the panel edge are envelope tails below 1e-6
        relative and cannot carry the maximum).
    lattice_oversample : int
        Lattice densification for the implicit full-lattice scan.
    panel : int
        Panel width in lattice steps for the accumulation path.
    dtype : numpy dtype
        complex64 trades ~1e-4 relative accuracy for twice the speed;
        the default keeps full precision.

    Returns
    -------
    float
    """
    if cluster.kind != "curvelet":
        raise ValueError("cluster coherence expects a curvelet index set")
    if grid.j != j:
        raise GridError(f"coherence at scale {j} needs the scale-{j} grid, got {grid.j}")
    if len(cluster) == 0:
        return 0.0
    scales = analysis_scales(j)
    bad = ~np.isin(cluster.scales, scales)
    if np.any(bad):
        raise GridError(
            f"cluster scale outside the analysis range: "
            f"{cluster.index_at(int(np.flatnonzero(bad)[0]))}"
        )
    if lattice is not None:
        if lattice.kind != "wavelet":
            raise ValueError("lambda lattice must be a wavelet index set")
        if len(lattice) == 0:
            raise ValueError("lambda lattice must not be empty")
        return _coherence_direct(cluster, j, grid, lattice)
    return _coherence_panel(cluster, j, grid, lattice_oversample, panel, dtype)


def _coherence_panel(cluster, j, grid, ov, panel, dtype) -> float:
    cdt = np.dtype(dtype)
    quad = (grid.dxi / (2.0 * math.pi)) ** 2
    pos = cluster.positions()
    accs = {}
    best = 0.0
    for s_c in np.unique(cluster.scales):
        s_c = int(s_c)
        grid.require_scale(s_c)
        band = _radial_band(grid, s_c)
        at_scale = cluster.scales == s_c
        for w in np.unique(cluster.wedges[at_scale]):
            w = int(w)
            rows = np.flatnonzero(at_scale & (cluster.wedges == w))
            q1, q2, xi1, xi2, rr, env_c = _sector_support(grid, band, s_c, w)
            for s_w in analysis_scales(j):
                if abs(s_w - s_c) > 1:
                    continue
                e_full = env_c * (2.0**-s_w) * meyer_window(rr / 2.0**s_w) * quad
                nz = e_full > 0.0
                if not np.any(nz):
                    continue
                e, p1, p2 = e_full[nz], q1[nz], q2[nz]
                a0, a1 = int(p1.min()), int(p1.max()) + 1
                b0, b1 = int(p2.min()), int(p2.max()) + 1
                ebox = np.zeros((a1 - a0, b1 - b0), dtype=cdt)
                ebox[p1 - a0, p2 - b0] = e
                n_b = _torus_count(grid, s_w, ov)
                width = min(panel, n_b)
                u = np.arange(width) - width // 2
                qax1 = np.arange(a0, a1)
                qax2 = np.arange(b0, b1)
                twiddle = 2.0j * math.pi / n_b
                c1 = np.exp(twiddle * np.outer(qax1, u)).astype(cdt)
                c2 = np.exp(twiddle * np.outer(qax2, u)).astype(cdt)
                k_half, m, full = lattice_counts(grid, s_w, ov)
                if s_w not in accs:
                    accs[s_w] = np.zeros((m, m))
                acc = accs[s_w]
                h = 2.0**-s_w / ov
                dxi = grid.dxi
                for i in rows:
                    x1, x2 = pos[i]
                    m1, m2 = round(x1 / h), round(x2 / h)
                    r1 = np.exp(-1j * (x1 - h * m1) * dxi * qax1).astype(cdt)
                    r2 = np.exp(-1j * (x2 - h * m2) * dxi * qax2).astype(cdt)
                    block = ((c1 * r1[:, None]).T @ (ebox @ (c2 * r2[:, None])))
                    block = 2.0 * np.abs(block.real.astype(np.float64))
                    kk1 = m1 + u
                    kk2 = m2 + u
                    if full:
                        i1 = (kk1 + m // 2) % m
                        i2 = (kk2 + m // 2) % m
                        np.add.at(acc, (i1[:, None], i2[None, :]), block)
                    else:
                        lo1 = max(-k_half, int(kk1[0]))
                        hi1 = min(k_half, int(kk1[-1]))
                        lo2 = max(-k_half, int(kk2[0]))
                        hi2 = min(k_half, int(kk2[-1]))
                        if lo1 > hi1 or lo2 > hi2:
                            continue
                        acc[lo1 + k_half : hi1 + k_half + 1,
                            lo2 + k_half : hi2 + k_half + 1] += block[
                            lo1 - int(kk1[0]) : hi1 - int(kk1[0]) + 1,
                            lo2 - int(kk2[0]) : hi2 - int(kk2[0]) + 1,
                        ]
    for acc in accs.values():
        best = max(best, float(acc.max()))
    return best / GAIN


def _coherence_direct(cluster, j, grid, lattice) -> float:
    """Reference path: explicit lambda set, full sums per atom.

    Memory scales with (support samples) x (lattice size); meant for
    small grids and cross-checks of the panel path.
    """
    quad = (grid.dxi / (2.0 * math.pi)) ** 2
    pos = cluster.positions()
    lpos = lattice.positions()
    totals = np.zeros(len(lattice))
    for s_c in np.unique(cluster.scales):
        s_c = int(s_c)
        grid.require_scale(s_c)
        band = _radial_band(grid, s_c)
        at_scale = cluster.scales == s_c
        for w in np.unique(cluster.wedges[at_scale]):
            w = int(w)
            rows = np.flatnonzero(at_scale & (cluster.wedges == w))
            q1, q2, xi1, xi2, rr, env_c = _sector_support(grid, band, s_c, w)
            for s_w in analysis_scales(j):
                if abs(s_w - s_c) > 1:
                    continue
                lam = np.flatnonzero(lattice.scales == s_w)
                if lam.size == 0:
                    continue
                e = env_c * (2.0**-s_w) * meyer_window(rr / 2.0**s_w) * quad
                nz = e > 0.0
                if not np.any(nz):
                    continue
                f1, f2, ee = xi1[nz], xi2[nz], e[nz]
                b = lpos[lam]
                x = pos[rows]
                g = ee[:, None] * np.exp(
                    1j * (np.outer(f1, b[:, 0]) + np.outer(f2, b[:, 1]))
                )
                hmat = np.exp(
                    -1j * (np.outer(f1, x[:, 0]) + np.outer(f2, x[:, 1]))
                )
                c = g.T @ hmat
                totals[lam] += np.abs(2.0 * c.real).sum(axis=1)
    return float(totals.max()) / GAIN


# ---------------------------------------------------------------------------
# relative sparsity


def _row_keys(table: CoefficientTable) -> np.ndarray:
    # scale+32 in 8 bits, wedge+1 in 16, each position in 20: one int64 per row
    s = table.scales.astype(np.int64) + 32
    w = table.wedges.astype(np.int64) + 1
    a = table.k1.astype(np.int64) + (1 << 19)
    b = table.k2.astype(np.int64) + (1 << 19)
    return (((s << 16 | w) << 20) | a) << 20 | b


def relative_sparsity(coeffs: CoefficientTable, kept: CoefficientTable) -> float:
    """l1 mass of the coefficients outside the kept index set.

    ``kept`` must be a subset of the table's index set and of the same
    family; keeping everything gives 0, keeping nothing gives the full
    l1 mass.
    """
    if kept.kind != coeffs.kind:
        raise ValueError("kept set family differs from the table")
    if kept.kind == "wavelet" and kept.analysis_oversample != coeffs.analysis_oversample:
        raise ValueError("kept set lattice differs from the table")
    if len(kept) == 0:
        return float(coeffs.l1())
    keys = _row_keys(coeffs)
    kk = _row_keys(kept)
    if not np.all(np.isin(kk, keys)):
        raise ValueError("kept set contains indices outside the table")
    outside = ~np.isin(keys, kk)
    return float(np.abs(coeffs.values[outside]).sum())


def tail_sparsity(f: SpectralImage, kept: CoefficientTable) -> float:
    """Streaming form of relative_sparsity against a full analysis.

    Same number as relative_sparsity(full_table, kept) where full_table
    is the complete three-scale analysis of ``f`` in the kept set's
    family, but block-streamed, so the full table is never materialized.
    """
    total = 0.0
    inside = 0.0
    seen = np.zeros(len(kept), dtype=bool)

    def grab(sel, k1, k2, mag):
        nonlocal inside
        i1 = kept.k1[sel].astype(np.int64) - int(k1[0])
        i2 = kept.k2[sel].astype(np.int64) - int(k2[0])
        if np.any((i1 < 0) | (i1 >= k1.size) | (i2 < 0) | (i2 >= k2.size)):
            raise GridError("kept position outside the analysis lattice")
        inside += float(mag[i1, i2].sum())
        seen[sel] = True

    if kept.kind == "wavelet":
        for scale, k1, k2, vals in iter_wavelet_blocks(f, kept.analysis_oversample):
            mag = np.abs(vals)
            total += float(mag.sum())
            sel = kept.scales == scale
            if np.any(sel):
                grab(sel, k1, k2, mag)
    else:
        for scale, wedge, k1, k2, vals in iter_curvelet_blocks(f, f.grid.j):
            mag = np.abs(vals)
            total += float(mag.sum())
            sel = (kept.scales == scale) & (kept.wedges == wedge)
            if np.any(sel):
                grab(sel, k1, k2, mag)
    if not np.all(seen):
        bad = int(np.flatnonzero(~seen)[0])
        raise GridError(f"kept scale outside the analysis range: {kept.index_at(bad)}")
    return total - inside


# ---------------------------------------------------------------------------
# phase-space projections and distance


def phase_projection_wavelet(kept: CoefficientTable, orient_samples: int) -> PhaseSet:
    """Project a wavelet index set into phase space.

    Wavelet atoms are omnidirectional, so each lattice position fans out
    to ``orient_samples`` equispaced orientations in [0, pi); the result
    has len(kept) * orient_samples entries.
    """
    if kept.kind != "wavelet":
        raise ValueError("expected a wavelet index set")
    if orient_samples < 4:
        raise ValueError("need at least four orientation samples")
    angles = np.arange(orient_samples) * (math.pi / orient_samples)
    positions = np.repeat(kept.positions(), orient_samples, axis=0)
    return PhaseSet(positions, np.tile(angles, len(kept)))


def phase_projection_curvelet(kept: CoefficientTable) -> PhaseSet:
    """Project a curvelet index set into phase space, one entry per atom."""
    if kept.kind != "curvelet":
        raise ValueError("expected a curvelet index set")
    return PhaseSet(kept.positions(), kept.orientations())


def phase_distance(probe: PhaseSet, reference: PhaseSet, chunk: int = 512) -> float:
    """Directed Hausdorff-style distance from ``probe`` into ``reference``.

    max over probe entries of the min over reference entries of the
    phase metric (Euclidean position gap combined with geodesic angle
    gap, hypot-style).  Asymmetric by design: it reports how far the
    worst probe entry strays from the reference set, not the converse.
    Zero exactly when every probe entry occurs in the reference set.
    """
    if len(probe) == 0 or len(reference) == 0:
        raise ValueError("phase distance needs nonempty sets")
    rp = reference.positions
    ro = reference.orientations
    worst = 0.0
    for lo in range(0, len(probe), chunk):
        pp = probe.positions[lo : lo + chunk]
        po = probe.orientations[lo : lo + chunk]
        gap2 = ((pp[:, None, :] - rp[None, :, :]) ** 2).sum(axis=2)
        ga = angle_distance(po[:, None], ro[None, :])
        worst = max(worst, float(np.sqrt(gap2 + ga * ga).min(axis=1).max()))
    return worst


# ---------------------------------------------------------------------------
# tubes


@dataclass(frozen=True)
class TubeSpec:
    """Phase-space tube around a singularity's wavefront set.

    Spatial radius width_constant * scale^(1 - eps_prime) around the
    base (doubled segment for a straight fragment, the curve itself
    otherwise), angular cap sqrt(scale) around the base orientation.
    """

    base: Union[LineFragment, CurveSpec]
    scale: float
    width_constant: float
    eps_prime: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.scale < 1.0:
            raise ValueError("tube scale must lie in (0, 1)")
        if self.width_constant <= 0.0:
            raise ValueError("tube width constant must be positive")
        if not 0.0 < self.eps_prime < self.epsilon:
            raise ValueError("tube exponent must lie in (0, epsilon)")

    def spatial_radius(self) -> float:
        return self.width_constant * self.scale ** (1.0 - self.eps_prime)

    def angular_cap(self) -> float:
        return math.sqrt(self.scale)


def _segment_geometry(fragment: LineFragment, positions):
    # base set is {0} x [-2 rho, 2 rho]: twice the fragment, per the tube's
    # definition, so near-end atoms stay inside
    rho = fragment.half_length
    x1 = positions[:, 0]
    x2 = positions[:, 1]
    over = np.maximum(np.abs(x2) - 2.0 * rho, 0.0)
    return np.hypot(x1, over), np.zeros(len(positions))


def _curve_geometry(curve: CurveSpec, positions, seeds: int = 1024, chunk: int = 256):
    length = curve.length
    t_seed = length * np.arange(seeds) / seeds
    nodes = curve.point(t_seed)
    dist = np.empty(len(positions))
    theta = np.empty(len(positions))
    step = length / (8.0 * seeds)
    for lo in range(0, len(positions), chunk):
        x = positions[lo : lo + chunk]
        d2 = ((x[:, None, :] - nodes[None, :, :]) ** 2).sum(axis=2)
        t = t_seed[np.argmin(d2, axis=1)]
        for _ in range(3):
            # Newton on g(t) = (gamma(t) - x) . tau(t), derivative by
            # central difference; monotone near the foot point
            p = curve.point(t)
            tau = curve.tangent(t)
            g = ((p - x) * tau).sum(axis=1)
            gp = (
                ((curve.point(t + step) - x) * curve.tangent(t + step)).sum(axis=1)
                - ((curve.point(t - step) - x) * curve.tangent(t - step)).sum(axis=1)
            ) / (2.0 * step)
            safe = np.abs(gp) > 1e-12
            t = np.where(safe, t - g / np.where(safe, gp, 1.0), t)
            t = np.mod(t, length)
        p = curve.point(t)
        dist[lo : lo + chunk] = np.hypot(*(x - p).T)
        theta[lo : lo + chunk] = curve.normal_angle(t)
    return dist, theta


def tube_membership(points: PhaseSet, tube: TubeSpec) -> float:
    """Fraction of the phase-space points inside the tube.

    Spatial test against the base set (closest point by seeded Newton
    for curves), angular test against the base orientation there.  An
    empty sample is vacuously inside (fraction 1.0).
    """
    if len(points) == 0:
        return 1.0
    if isinstance(tube.base, LineFragment):
        dist, base_theta = _segment_geometry(tube.base, points.positions)
    elif isinstance(tube.base, CurveSpec):
        dist, base_theta = _curve_geometry(tube.base, points.positions)
    else:
        raise TypeError(f"no tube geometry for base {type(tube.base).__name__}")
    inside = (dist <= tube.spatial_radius()) & (
        angle_distance(points.orientations, base_theta) <= tube.angular_cap()
    )
    return float(np.mean(inside))


# ---------------------------------------------------------------------------
# decay fits and probes


def decay_slope(series: Iterable[Tuple[int, float]]) -> float:
    """Least-squares slope of log2(value) against scale.

    Needs at least three entries, all values positive.  A pure 2^(c j)
    sequence returns c exactly.
    """
    pts = [(int(j), float(v)) for j, v in series]
    if len(pts) < 3:
        raise ValueError("decay fit needs at least three scales")
    vals = np.array([p[1] for p in pts])
    if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
        raise ValueError("decay fit needs positive finite values")
    jj = np.array([p[0] for p in pts], dtype=float)
    return float(np.polyfit(jj, np.log2(vals), 1)[0])


def cross_gram_probe(
    lam: WaveletIndex,
    eta: CurveletIndex,
    oversample: int = 2,
    grid: Optional[FreqGrid] = None,
) -> complex:
    """Raw inner product <gamma_eta, psi_lambda> of one frame pair.

    Atoms two or more scales apart have disjoint dyadic annuli, so the
    result is exactly zero and no quadrature runs.  Otherwise the
    product is quadratured on the master grid for the larger scale
    (oversample drops to 1 past scale 9, where the doubled grid no
    longer fits in memory).  Gain included; divide by the frame gain
    for the Parseval-pair value.
    """
    if abs(lam.scale - eta.scale) >= 2:
        return 0.0 + 0.0j
    if grid is None:
        top = max(lam.scale, eta.scale)
        grid = FreqGrid(top, oversample if top <= 9 else 1)
    grid.require_scale(lam.scale)
    grid.require_scale(eta.scale)
    band = _radial_band(grid, eta.scale)
    q1, q2, xi1, xi2, rr, env_c = _sector_support(grid, band, eta.scale, eta.wedge)
    env = env_c * (2.0**-lam.scale) * meyer_window(rr / 2.0**lam.scale)
    d1, d2 = lattice_steps(eta.scale)
    th = orientation(eta.scale, eta.wedge)
    c, s = math.cos(th), math.sin(th)
    x1 = c * eta.k1 * d1 - s * eta.k2 * d2
    x2 = s * eta.k1 * d1 + c * eta.k2 * d2
    b1, b2 = lam.k1 * 2.0**-lam.scale, lam.k2 * 2.0**-lam.scale
    quad = (grid.dxi / (2.0 * math.pi)) ** 2
    half = np.sum(env * np.exp(1j * ((b1 - x1) * xi1 + (b2 - x2) * xi2)))
    return complex(2.0 * half.real * quad)


def wavelet_probe(f: SpectralImage, scale: int, b1: float, b2: float) -> complex:
    """Inner product with a wavelet atom at a free position.

    At lattice positions b = k 2^-scale this equals the analysis
    coefficient; between them it interpolates the same quadrature.
    """
    grid = f.grid
    grid.require_scale(scale)
    ax = grid.axis()
    env = (2.0**-scale) * meyer_window(grid.radii() / 2.0**scale)
    quad = (grid.dxi / (2.0 * math.pi)) ** 2
    ph1 = np.exp(1j * b1 * ax)
    ph2 = np.exp(1j * b2 * ax)
    return complex(quad * (ph1 @ (f.values * env) @ ph2))


def wavefront_probe(
    pieces: Sequence[SpectralImage], point: PhasePoint, probe: str = "curvelet"
) -> float:
    """Fitted decay slope of probe coefficients at one phase-space point.

    Probes each subband piece at its own nominal scale: a curvelet-
    shaped probe at the point's position and orientation, or the
    omnidirectional wavelet probe at its position.  Positive slopes mean
    the pieces grow there (the point is singular for the probed
    component); decaying slopes mean smoothness.  Needs at least four
    scales; an all-but-vanishing series is degenerate and raises.
    """
    if probe not in ("curvelet", "wavelet"):
        raise ValueError(f"unknown probe family {probe!r}")
    pieces = list(pieces)
    if len(pieces) < 4:
        raise ValueError("wavefront probe needs at least four scales")
    series = []
    for f in pieces:
        j = f.grid.j
        if probe == "curvelet":
            val = directional_coefficient(f, j, point.theta, point.x1, point.x2)
        else:
            val = wavelet_probe(f, j, point.x1, point.x2)
        series.append((j, abs(val)))
    try:
        return decay_slope(series)
    except ValueError as exc:
        raise ValueError(
            f"degenerate probe series at ({point.x1:g}, {point.x2:g}, "
            f"{point.theta:g}): {exc}"
        ) from exc


def classify_slope(slope: float, dead_zone: float = 0.1) -> str:
    """Singular / smooth verdict from a probe slope, with a dead zone."""
    if slope > dead_zone:
        return "singular"
    if slope < -dead_zone:
        return "smooth"
    return "inconclusive"


# ---------------------------------------------------------------------------
# lattice snapping and export


def nearest_wavelet_index(
    x1: float, x2: float, scale: int, oversample: int = 1
) -> WaveletIndex:
    step = 2.0**-scale / oversample
    return WaveletIndex(scale, round(x1 / step), round(x2 / step))


def nearest_curvelet_index(x1: float, x2: float, theta: float, scale: int) -> CurveletIndex:
    nw = wedge_count(scale)
    w = round(float(np.mod(theta, math.pi)) / wedge_spacing(scale)) % nw
    th = orientation(scale, w)
    c, s = math.cos(th), math.sin(th)
    d1, d2 = lattice_steps(scale)
    p = c * x1 + s * x2
    q = -s * x1 + c * x2
    return CurveletIndex(scale, w, round(p / d1), round(q / d2))


def export_phase_sets(path, entries: Iterable[Tuple[int, str, PhaseSet]]):
    """Write tagged phase sets as CSV rows (j, b1, b2, theta, tag).

    Always writes the header, so an empty iterable leaves a header-only
    file.  Floats are rendered with repr-round-trip precision.
    """
    with open(path, "w", newline="") as fh:
        # pinned line terminator: report bytes must not vary by platform
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["j", "b1", "b2", "theta", "tag"])
        for j, tag, points in entries:
            for (x1, x2), th in zip(points.positions, points.orientations):
                writer.writerow(
                    [j, f"{x1:.17g}", f"{x2:.17g}", f"{th:.17g}", tag]
                )
