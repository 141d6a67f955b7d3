"""Second-generation curvelet frame on parabolic wedge grids.

Each frame element is supported on an antipodal pair of angular wedges
of the dyadic annulus 2^{s-1} < |xi| < 2^{s+1}.  Coefficients are
computed by quadrature on a wedge-adapted rotated grid whose spacing
matches the translation lattice exactly, so the full lattice of one
wedge is a single 2D FFT.

The frame is tight with frame constant GAIN**2 (synthesis divides it
back out).  GAIN rescales every frame element by the same factor; it
exists so that frame coefficients of order-one curvilinear data clear
the parameter-free thresholds of the separation stage at desk scales.
Any fixed constant here leaves reconstruction, decay slopes and
Gramian geometry unchanged.
"""

from __future__ import annotations

import math

import numpy as np

from .windows import meyer_window, angular_bump
from .grid import FreqGrid, GridError, SpectralImage, MIN_SCALE
from .indices import CurveletIndex, CoefficientTable
from .evaluators import evaluate_on_wedge

GAIN = 32.0

# master grids up to this size can be analyzed by direct quadrature
# without a point evaluator
DIRECT_LIMIT = 256


def _element_norm() -> float:
    from scipy.integrate import quad

    radial, _ = quad(lambda s: meyer_window(s) ** 2 * s, 0.5, 2.0)
    angular, _ = quad(lambda t: angular_bump(t) ** 2, -1.0, 1.0)
    return GAIN * math.sqrt(radial * angular / (4.0 * math.pi))


# ||gamma||_2, identical for every scale, wedge and position
CURVELET_NORM = _element_norm()


def wedge_count(scale: int) -> int:
    """Number of orientations modulo pi at a scale."""
    return 2 ** (scale // 2)


def wedge_spacing(scale: int) -> float:
    """Angular separation of adjacent wedge centers."""
    return math.pi / wedge_count(scale)


def lattice_steps(scale: int) -> tuple[float, float]:
    """Translation steps (fine, coarse) of the position lattice."""
    return 2.0 ** (-scale), 2.0 ** (-(-(-scale // 2) + 1))


def amplitude(scale: int) -> float:
    """Peak spectral amplitude of one frame element."""
    d1, d2 = lattice_steps(scale)
    return GAIN * math.sqrt(d1 * d2)


def orientation(scale: int, wedge: int) -> float:
    return math.pi * wedge / wedge_count(scale)


def _rotate(theta: float, p, q):
    """Rotated wedge coordinates (along, across) to absolute position."""
    c, s = math.cos(theta), math.sin(theta)
    return c * p - s * q, s * p + c * q


def _wrap_half(angles):
    """Wrap angles to [-pi/2, pi/2); identifies antipodal wedges."""
    return (angles + 0.5 * np.pi) % np.pi - 0.5 * np.pi


class WedgeGrid:
    """Rotated quadrature grid adapted to one wedge orientation.

    Node spacing is pi/2 on both wedge axes; counts per axis match the
    dual translation lattice, d_i * dz_i * m_i = 2*pi exactly, so the
    implied spatial period is 4 in both rotated directions.  The factor
    of two over the critical lattice keeps periodization ghosts of the
    order-3 windows below the reconstruction tolerance; density beyond
    the critical one only improves the frame bounds.  `theta` may be
    any angle; frame wedges use orientation(scale, wedge).
    """

    dz1 = math.pi / 2.0
    dz2 = math.pi / 2.0

    def __init__(self, scale: int, wedge: int | None = None, theta: float | None = None):
        if scale < MIN_SCALE:
            raise GridError(f"scale {scale} below minimum {MIN_SCALE}")
        if theta is None:
            if wedge is None:
                raise GridError("need a wedge number or an explicit angle")
            theta = orientation(scale, wedge)
        self.scale = scale
        self.wedge = wedge
        self.theta = float(theta)
        self.m1 = 2 ** (scale + 2)
        self.m2 = 2 ** (-(-scale // 2) + 3)

    def zeta_axes(self):
        z1 = (np.arange(self.m1) - self.m1 // 2) * self.dz1
        z2 = (np.arange(self.m2) - self.m2 // 2) * self.dz2
        return z1, z2

    def xi_mesh(self):
        z1, z2 = self.zeta_axes()
        c, s = math.cos(self.theta), math.sin(self.theta)
        x1 = c * z1[:, None] - s * z2[None, :]
        x2 = s * z1[:, None] + c * z2[None, :]
        return x1, x2

    def radii(self):
        z1, z2 = self.zeta_axes()
        return np.hypot(z1[:, None], z2[None, :])

    def envelope(self):
        """Windowed amplitude W*V on the wedge nodes (no phase)."""
        z1, z2 = self.zeta_axes()
        r = self.radii()
        omega = np.arctan2(z2[None, :], z1[:, None]) + self.theta
        rel = _wrap_half(omega - self.theta)
        win = meyer_window(r / 2.0 ** self.scale)
        win *= angular_bump(rel / wedge_spacing(self.scale))
        return amplitude(self.scale) * win


def envelope_on_master(grid: FreqGrid, scale: int, wedge: int | None = None,
                       theta: float | None = None):
    """Windowed amplitude of one wedge pair sampled on the master grid."""
    grid.require_scale(scale)
    if theta is None:
        theta = orientation(scale, wedge)
    x1, x2 = grid.mesh()
    rel = _wrap_half(np.arctan2(x2, x1) - theta)
    win = meyer_window(grid.radii() / 2.0 ** scale)
    win *= angular_bump(rel / wedge_spacing(scale))
    return amplitude(scale) * win


def curvelet_spectrum(grid: FreqGrid, scale: int, wedge: int, k1: int, k2: int) -> SpectralImage:
    """Spectrum of a single frame element on the master grid."""
    grid.require_scale(scale)
    nw = wedge_count(scale)
    if not 0 <= wedge < nw:
        raise GridError(f"wedge {wedge} outside 0..{nw - 1} at scale {scale}")
    d1, d2 = lattice_steps(scale)
    theta = orientation(scale, wedge)
    c, s = math.cos(theta), math.sin(theta)
    b1 = c * k1 * d1 - s * k2 * d2
    b2 = s * k1 * d1 + c * k2 * d2
    amp = amplitude(scale)
    dtheta = wedge_spacing(scale)

    def evaluator(x1, x2):
        r = np.hypot(x1, x2)
        rel = _wrap_half(np.arctan2(x2, x1) - theta)
        win = meyer_window(r / 2.0 ** scale) * angular_bump(rel / dtheta)
        return amp * win * np.exp(-1j * (b1 * x1 + b2 * x2))

    x1, x2 = grid.mesh()
    return SpectralImage(grid, evaluator(x1, x2).astype(np.complex128), evaluator)


def _wedge_values(f: SpectralImage, wgrid: WedgeGrid):
    """Input spectrum sampled on the wedge nodes."""
    if f.evaluator is not None:
        return evaluate_on_wedge(f.evaluator, wgrid)
    if f.grid.n > DIRECT_LIMIT:
        raise GridError(
            "curvelet analysis on grids larger than "
            f"{DIRECT_LIMIT}^2 needs a point evaluator on the input")
    return None


def _analysis_direct(f: SpectralImage, wgrid: WedgeGrid):
    """Master-grid quadrature for sample-only inputs (small grids).

    The Riemann sum runs over master nodes instead of wedge nodes, so
    positions cover the spatial torus exactly once: the k2 range is
    half the wrapped path's (the wrapped lattice doubles it to stay
    exactly tight on the rotated nodes).
    """
    grid = f.grid
    env = envelope_on_master(grid, wgrid.scale, theta=wgrid.theta)
    mask = env > 0.0
    x1, x2 = grid.mesh()
    c, s = math.cos(wgrid.theta), math.sin(wgrid.theta)
    z1 = (c * x1 + s * x2)[mask]
    z2 = (-s * x1 + c * x2)[mask]
    w = (f.values[mask] * env[mask]) * (grid.dxi / (2.0 * math.pi)) ** 2
    d1, d2 = lattice_steps(wgrid.scale)
    k1 = np.arange(wgrid.m1 // 2) - wgrid.m1 // 4
    k2 = np.arange(wgrid.m2 // 2) - wgrid.m2 // 4
    ph1 = np.exp(1j * d1 * np.outer(k1, z1))
    ph2 = np.exp(1j * d2 * np.outer(k2, z2))
    return (ph1 * w) @ ph2.T


def _analysis_wrapped(values, wgrid: WedgeGrid):
    """All lattice coefficients of one wedge by a single FFT."""
    h = values * wgrid.envelope()
    quad = wgrid.dz1 * wgrid.dz2 / (2.0 * math.pi) ** 2
    coef = quad * wgrid.m1 * wgrid.m2 * np.fft.ifft2(h)
    coef = np.fft.fftshift(coef)
    # (-1)^(k1+k2) checkerboard; m1//2 and m2//2 are even, so the
    # shifted array's (0,0) corner has even parity
    coef[1::2, ::2] *= -1.0
    coef[::2, 1::2] *= -1.0
    return coef


def iter_curvelet_blocks(f_j: SpectralImage, j: int, method: str = "auto"):
    """Yield (scale, wedge, k1_axis, k2_axis, coeff_block) per wedge.

    Streaming layout: thresholding can keep only super-threshold entries
    without materializing the full three-scale table, which does not fit
    in memory at the top grid sizes.
    """
    from .wavelets import analysis_scales

    if method not in ("auto", "wrapped", "direct"):
        raise GridError(f"unknown analysis method {method!r}")
    for scale in analysis_scales(j):
        f_j.grid.require_scale(scale)
        for wedge in range(wedge_count(scale)):
            wgrid = WedgeGrid(scale, wedge)
            use_direct = method == "direct"
            if method == "auto" and f_j.evaluator is None:
                if f_j.grid.n > DIRECT_LIMIT:
                    _wedge_values(f_j, wgrid)  # raises with the standard message
                use_direct = True
            if use_direct:
                coef = _analysis_direct(f_j, wgrid)
            else:
                vals = _wedge_values(f_j, wgrid)
                coef = _analysis_wrapped(vals, wgrid)
            k1 = np.arange(coef.shape[0]) - coef.shape[0] // 2
            k2 = np.arange(coef.shape[1]) - coef.shape[1] // 2
            yield scale, wedge, k1, k2, coef


def curvelet_analysis(f_j: SpectralImage, j: int, method: str = "auto") -> CoefficientTable:
    """Frame coefficients of a subband piece over its three scales.

    method: "auto" picks wrapped quadrature when the input can be
    evaluated off the master grid, else direct; "wrapped"/"direct"
    force one path.
    """
    blocks = []
    for scale, wedge, k1, k2, coef in iter_curvelet_blocks(f_j, j, method):
        kk1, kk2 = np.meshgrid(k1, k2, indexing="ij")
        n = kk1.size
        blocks.append(CoefficientTable.curvelet(
            np.full(n, scale), np.full(n, wedge),
            kk1.ravel(), kk2.ravel(), coef.ravel()))
    return CoefficientTable.concat(blocks)


def curvelet_coefficient(f: SpectralImage, index: CurveletIndex) -> complex:
    """One frame coefficient by wedge quadrature (lattice-free inputs)."""
    wgrid = WedgeGrid(index.scale, index.wedge)
    vals = _wedge_values(f, wgrid)
    if vals is None:
        d1, d2 = lattice_steps(index.scale)
        return directional_coefficient(
            f, index.scale, wgrid.theta,
            *_rotate(wgrid.theta, index.k1 * d1, index.k2 * d2))
    d1, d2 = lattice_steps(index.scale)
    z1, z2 = wgrid.zeta_axes()
    h = vals * wgrid.envelope()
    quad = wgrid.dz1 * wgrid.dz2 / (2.0 * math.pi) ** 2
    ph1 = np.exp(1j * index.k1 * d1 * z1)
    ph2 = np.exp(1j * index.k2 * d2 * z2)
    return complex(quad * ph1 @ h @ ph2)


def directional_coefficient(f: SpectralImage, scale: int, theta: float,
                            b1: float, b2: float) -> complex:
    """Inner product with a curvelet-shaped probe at a free phase-space
    point (position off the lattice, orientation off the wedge grid)."""
    wgrid = WedgeGrid(scale, theta=theta)
    vals = _wedge_values(f, wgrid)
    if vals is None:
        grid = f.grid
        env = envelope_on_master(grid, scale, theta=theta)
        x1, x2 = grid.mesh()
        ph = np.exp(1j * (b1 * x1 + b2 * x2))
        quad = (grid.dxi / (2.0 * math.pi)) ** 2
        return complex(np.sum(f.values * env * ph) * quad)
    h = vals * wgrid.envelope()
    c, s = math.cos(theta), math.sin(theta)
    p = c * b1 + s * b2
    q = -s * b1 + c * b2
    z1, z2 = wgrid.zeta_axes()
    quad = wgrid.dz1 * wgrid.dz2 / (2.0 * math.pi) ** 2
    return complex(np.exp(1j * p * z1) @ h @ np.exp(1j * q * z2) * quad)


class CurveletSumEvaluator:
    """Point evaluator for a synthesized curvelet sum (frame-constant
    normalized).  Carries the coefficient table; grouped by scale and
    wedge so wedge-grid evaluation reduces to one matrix product per
    group."""

    def __init__(self, table: CoefficientTable, gain: float = GAIN):
        self.scales = table.scales.copy()
        self.wedges = table.wedges.copy()
        self.positions = table.positions()
        self.values = table.values / gain ** 2

    def _groups(self):
        pairs = np.stack([self.scales.astype(np.int64), self.wedges.astype(np.int64)], axis=1)
        for scale, wedge in np.unique(pairs, axis=0):
            yield int(scale), int(wedge), (self.scales == scale) & (self.wedges == wedge)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape, dtype=np.complex128)
        r = np.hypot(x1, x2)
        omega = np.arctan2(x2, x1)
        for scale, wedge, sel in self._groups():
            rel = _wrap_half(omega - orientation(scale, wedge))
            env = amplitude(scale) * meyer_window(r / 2.0 ** scale)
            env *= angular_bump(rel / wedge_spacing(scale))
            live = env > 0.0
            if not np.any(live):
                continue
            b = self.positions[sel]
            vals = self.values[sel]
            acc = np.zeros(int(live.sum()), dtype=np.complex128)
            step = max(1, 4_000_000 // max(1, acc.size))
            p1 = x1[live] if x1.shape == out.shape else np.broadcast_to(x1, out.shape)[live]
            p2 = x2[live] if x2.shape == out.shape else np.broadcast_to(x2, out.shape)[live]
            for lo in range(0, vals.size, step):
                hi = min(lo + step, vals.size)
                ph = np.exp(-1j * (np.outer(b[lo:hi, 0], p1) + np.outer(b[lo:hi, 1], p2)))
                acc += vals[lo:hi] @ ph
            out[live] += env[live] * acc
        return out

    def eval_wedge_grid(self, wgrid):
        z1, z2 = wgrid.zeta_axes()
        r = wgrid.radii()
        omega = np.arctan2(z2[None, :], z1[:, None]) + wgrid.theta
        c, s = math.cos(wgrid.theta), math.sin(wgrid.theta)
        out = np.zeros((wgrid.m1, wgrid.m2), dtype=np.complex128)
        for scale, wedge, sel in self._groups():
            rel = _wrap_half(omega - orientation(scale, wedge))
            env = amplitude(scale) * meyer_window(r / 2.0 ** scale)
            env *= angular_bump(rel / wedge_spacing(scale))
            if not np.any(env > 0.0):
                continue
            b = self.positions[sel]
            p = c * b[:, 0] + s * b[:, 1]
            q = -s * b[:, 0] + c * b[:, 1]
            u = self.values[sel, None] * np.exp(-1j * p[:, None] * z1[None, :])
            w = np.exp(-1j * q[:, None] * z2[None, :])
            out += env * (u.T @ w)
        return out


def curvelet_synthesis(table: CoefficientTable, grid: FreqGrid) -> SpectralImage:
    """Weighted sum of frame elements divided by the frame constant."""
    if table.kind != "curvelet":
        raise GridError("curvelet synthesis needs curvelet coefficients")
    out = np.zeros((grid.n, grid.n), dtype=np.complex128)
    x1, x2 = grid.mesh()
    scales = table.scales
    wedges = table.wedges
    for scale in np.unique(scales):
        grid.require_scale(int(scale))
        nw = wedge_count(int(scale))
        d1, d2 = lattice_steps(int(scale))
        for wedge in np.unique(wedges[scales == scale]):
            if not 0 <= wedge < nw:
                raise GridError(
                    f"unknown frame index (scale {scale}, wedge {wedge})")
            sel = (scales == scale) & (wedges == wedge)
            wk1 = table.k1[sel]
            wk2 = table.k2[sel]
            m1 = 2 ** (int(scale) + 2)
            m2 = 2 ** (-(-int(scale) // 2) + 3)
            bad = (wk1 < -m1 // 2) | (wk1 >= m1 // 2) | \
                  (wk2 < -m2 // 2) | (wk2 >= m2 // 2)
            if np.any(bad):
                k = int(np.argmax(bad))
                raise GridError(
                    "unknown frame index " + repr(CurveletIndex(
                        int(scale), int(wedge), int(wk1[k]), int(wk2[k]))))
            env = envelope_on_master(grid, int(scale), int(wedge))
            mask = env > 0.0
            theta = orientation(int(scale), int(wedge))
            c, s = math.cos(theta), math.sin(theta)
            z1 = (c * x1 + s * x2)[mask]
            z2 = (-s * x1 + c * x2)[mask]
            vals = table.values[sel]
            acc = np.zeros(z1.shape, dtype=np.complex128)
            step = max(1, 4_000_000 // max(1, z1.size))
            for lo in range(0, vals.size, step):
                hi = min(lo + step, vals.size)
                ph = np.exp(-1j * (d1 * np.outer(wk1[lo:hi], z1)
                                   + d2 * np.outer(wk2[lo:hi], z2)))
                acc += vals[lo:hi] @ ph
            out[mask] += env[mask] * acc
    out /= GAIN ** 2
    return SpectralImage(grid, out, CurveletSumEvaluator(table, gain=GAIN))
