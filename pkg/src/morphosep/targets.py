"""Synthetic singular scenes and their sampled spectra.

Three model distributions drive every experiment in this package: a
cluster of inverse-3/2-power point profiles, unit mass integrated along
a closed curve, and a weighted straight segment.  Each constructor
returns a SpectralImage whose values are sampled on the master grid and
whose evaluator reproduces the same spectrum at arbitrary frequency
nodes, which the rotated-grid transforms require.

Fourier convention throughout: fhat(xi) = Int f(x) exp(-i x.xi) dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline
from scipy.special import gamma as _gamma, j0

from .frame_kernel.evaluators import SumEvaluator
from .frame_kernel.grid import FreqGrid, GridError, SpectralImage
from .frame_kernel.subband import subband_filter
from .frame_kernel.windows import angular_bump
from .phase import PhaseSet

__all__ = [
    "POWER_FOURIER_CONSTANT",
    "PointConfig",
    "CurveSpec",
    "LineFragment",
    "Scene",
    "point_spectrum",
    "curve_spectrum",
    "required_curve_nodes",
    "line_fragment_spectrum",
    "weight_profile_transform",
    "filtered_piece",
    "piece_energy",
    "ground_truth_wavefront",
    "default_scene",
    "scene_from_mapping",
]

# Planar Fourier pair |x|^(-3/2) <-> const * |xi|^(-1/2); the constant is
# pi * 2^(1/2) * Gamma(1/4) / Gamma(3/4) = 13.145047206596875.
POWER_FOURIER_CONSTANT = float(np.pi * np.sqrt(2.0) * _gamma(0.25) / _gamma(0.75))


@dataclass(frozen=True)
class PointConfig:
    """Finite set of point-singularity locations in [-1, 1]^2."""

    points: tuple

    def __post_init__(self):
        pts = tuple((float(a), float(b)) for a, b in self.points)
        if not pts:
            raise ValueError("point configuration needs at least one point")
        for a, b in pts:
            if abs(a) > 1.0 or abs(b) > 1.0:
                raise ValueError(f"point ({a}, {b}) outside [-1, 1]^2")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


class PointFieldEvaluator:
    """Closed-form spectrum of the inverse-power point cluster."""

    def __init__(self, points):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))

    def _amplitude(self, r):
        # |xi|^(-1/2), with the origin node sent to 0
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, POWER_FOURIER_CONSTANT / np.sqrt(safe), 0.0)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        acc = np.zeros(np.broadcast(x1, x2).shape, dtype=np.complex128)
        for a, b in self.points:
            acc += np.exp(-1j * (a * x1 + b * x2))
        return self._amplitude(np.hypot(x1, x2)) * acc

    def eval_wedge_grid(self, wedge):
        z1, z2 = wedge.zeta_axes()
        ct, st = math.cos(wedge.theta), math.sin(wedge.theta)
        acc = np.zeros((wedge.m1, wedge.m2), dtype=np.complex128)
        for a, b in self.points:
            p = ct * a + st * b
            q = -st * a + ct * b
            acc += np.exp(-1j * p * z1)[:, None] * np.exp(-1j * q * z2)[None, :]
        return self._amplitude(wedge.radii()) * acc

    def eval_cartesian(self, ax):
        acc = np.zeros((ax.size, ax.size), dtype=np.complex128)
        for a, b in self.points:
            acc += np.exp(-1j * a * ax)[:, None] * np.exp(-1j * b * ax)[None, :]
        return self._amplitude(np.hypot(ax[:, None], ax[None, :])) * acc


def point_spectrum(cfg: PointConfig, grid: FreqGrid) -> SpectralImage:
    """Sampled spectrum of the point cluster.

    The value at a grid node xi is the power-law amplitude
    ``POWER_FOURIER_CONSTANT * |xi|^(-1/2)`` times the sum of the point
    phases; the origin node is set to 0 since the annulus transforms
    never touch it.
    """
    ev = PointFieldEvaluator(cfg.array())
    return SpectralImage(grid, ev.eval_cartesian(grid.axis()), ev)


class CurveSpec:
    """Closed C^2 curve with a unit-speed parametrization.

    Construct through `circle` or `closed_spline`.  Attributes:

    length : float
        Total arclength L; parameters live on [0, L).
    curvature_bound : float
        Max |tau''| observed on a dense sample (exact 1/R for circles).
    speed_error : float
        Max deviation of |tau'| from 1 on a dense sample; the spline
        constructor rejects curves where this exceeds 1e-6.
    """

    def __init__(self, kind, length, curvature_bound, speed_error):
        self.kind = kind
        self.length = float(length)
        self.curvature_bound = float(curvature_bound)
        self.speed_error = float(speed_error)

    @classmethod
    def circle(cls, center, radius: float) -> "CurveSpec":
        radius = float(radius)
        if radius <= 0.0:
            raise ValueError("circle radius must be positive")
        c1, c2 = (float(center[0]), float(center[1]))
        if max(abs(c1), abs(c2)) + radius > 1.0:
            raise ValueError("circle leaves the [-1, 1]^2 scene square")
        self = cls("circle", 2.0 * np.pi * radius, 1.0 / radius, 0.0)
        self.center = (c1, c2)
        self.radius = radius
        return self

    @classmethod
    def closed_spline(cls, control_points, dense: int = 16384) -> "CurveSpec":
        """Closed periodic cubic spline through the control points.

        The chord-length spline is resampled to unit speed by inverting
        its arclength function on `dense` nodes; the residual speed
        error is measured and must come in at or below 1e-6.
        """
        pts = np.asarray(control_points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
            raise ValueError("closed spline needs at least 4 control points")
        ext = np.vstack([pts, pts[:1]])
        seg = np.hypot(*np.diff(ext, axis=0).T)
        if np.any(seg == 0.0):
            raise ValueError("consecutive control points must differ")
        u = np.concatenate([[0.0], np.cumsum(seg)]) / seg.sum()
        base = CubicSpline(u, ext, bc_type="periodic", axis=0)

        uu = np.linspace(0.0, 1.0, dense + 1)
        du = base(uu, 1)
        speed = np.hypot(du[:, 0], du[:, 1])
        s = cumulative_trapezoid(speed, uu, initial=0.0)
        length = float(s[-1])
        u_of_s = CubicSpline(s, uu)

        self = cls("spline", length, 0.0, 0.0)
        self._base = base
        self._u_of_s = u_of_s

        t = np.linspace(0.0, length, 4096, endpoint=False)
        tan = self.tangent(t)
        err = float(np.max(np.abs(np.hypot(tan[:, 0], tan[:, 1]) - 1.0)))
        if err > 1e-6:
            raise ValueError(
                f"unit-speed resampling error {err:.2e} exceeds 1e-06; "
                "raise the dense node count"
            )
        self.speed_error = err
        uv = u_of_s(t)
        acc = (
            base(uv, 2) * (u_of_s(t, 1) ** 2)[:, None]
            + base(uv, 1) * u_of_s(t, 2)[:, None]
        )
        self.curvature_bound = float(np.max(np.hypot(acc[:, 0], acc[:, 1])))
        p = self.point(t)
        if np.max(np.abs(p)) > 1.0:
            raise ValueError("spline curve leaves the [-1, 1]^2 scene square")
        return self

    def point(self, t):
        """Position tau(t); t may be scalar or array, taken modulo length."""
        t = np.mod(np.asarray(t, dtype=float), self.length)
        if self.kind == "circle":
            ang = t / self.radius
            return np.stack(
                [
                    self.center[0] + self.radius * np.cos(ang),
                    self.center[1] + self.radius * np.sin(ang),
                ],
                axis=-1,
            )
        return self._base(self._u_of_s(t))

    def tangent(self, t):
        t = np.mod(np.asarray(t, dtype=float), self.length)
        if self.kind == "circle":
            ang = t / self.radius
            return np.stack([-np.sin(ang), np.cos(ang)], axis=-1)
        return self._base(self._u_of_s(t), 1) * self._u_of_s(t, 1)[..., None]

    def normal_angle(self, t):
        """Orientation of the curve normal, modulo pi."""
        tan = np.atleast_2d(self.tangent(t))
        ang = np.arctan2(tan[:, 0], -tan[:, 1])  # tangent rotated by 90 deg
        out = np.mod(ang, np.pi)
        return out if np.ndim(t) else float(out[0])

    def nodes(self, m: int) -> np.ndarray:
        """m equispaced unit-speed sample positions, t = length * k / m."""
        return np.atleast_2d(self.point(self.length * np.arange(m) / m))


def required_curve_nodes(curve: CurveSpec, grid: FreqGrid) -> int:
    """Trapezoid node count needed for this grid: 16 per period of the
    fastest phase, i.e. 16 * max|xi| * length / (2 pi)."""
    ximax = (grid.n // 2) * grid.dxi * math.sqrt(2.0)
    return int(math.ceil(16.0 * ximax * curve.length / (2.0 * math.pi)))


def _bessel_tail_log(order: float, x: float) -> float:
    # log J_order(x) upper bound for order > e*x/2 (Kapteyn-style)
    if order <= 0.5 * math.e * x:
        return 0.0
    return order * math.log(0.5 * math.e * x / order) - 0.5 * math.log(
        2.0 * math.pi * order
    )


class CircleSpectrumEvaluator:
    """Spectrum of unit line mass on a circle.

    The uniform-angle trapezoid sum collapses to the radial profile
    2*pi*R*J0(R|xi|) once its aliasing terms (Bessel functions of order
    >= the node count) are below float precision; curve_spectrum asserts
    that bound before taking this path.
    """

    def __init__(self, center, radius):
        self.center = (float(center[0]), float(center[1]))
        self.radius = float(radius)

    def _radial(self, r):
        return 2.0 * np.pi * self.radius * j0(self.radius * np.asarray(r, dtype=float))

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        c1, c2 = self.center
        return self._radial(np.hypot(x1, x2)) * np.exp(-1j * (c1 * x1 + c2 * x2))

    def eval_wedge_grid(self, wedge):
        z1, z2 = wedge.zeta_axes()
        ct, st = math.cos(wedge.theta), math.sin(wedge.theta)
        c1, c2 = self.center
        p = ct * c1 + st * c2
        q = -st * c1 + ct * c2
        phase = np.exp(-1j * p * z1)[:, None] * np.exp(-1j * q * z2)[None, :]
        return self._radial(wedge.radii()) * phase

    def eval_cartesian(self, ax):
        c1, c2 = self.center
        phase = np.exp(-1j * c1 * ax)[:, None] * np.exp(-1j * c2 * ax)[None, :]
        return self._radial(np.hypot(ax[:, None], ax[None, :])) * phase


class CurveQuadEvaluator:
    """Trapezoid quadrature of exp(-i tau(t).xi) over curve nodes.

    Cost is (node count) x (evaluation points); on Cartesian and wedge
    grids the node phases factor over the two axes, so evaluation runs
    as chunked matrix products.  Meant for moderate scales; circles take
    the closed-form path instead.
    """

    _CHUNK = 4096

    def __init__(self, nodes, weight):
        self.nodes = np.asarray(nodes, dtype=float)
        self.weight = float(weight)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        shape = np.broadcast(x1, x2).shape
        f1 = np.broadcast_to(x1, shape).ravel()
        f2 = np.broadcast_to(x2, shape).ravel()
        out = np.zeros(f1.size, dtype=np.complex128)
        for lo in range(0, len(self.nodes), self._CHUNK):
            blk = self.nodes[lo : lo + self._CHUNK]
            out += np.exp(
                -1j * (blk[:, :1] * f1[None, :] + blk[:, 1:] * f2[None, :])
            ).sum(axis=0)
        return self.weight * out.reshape(shape)

    def _separable(self, p, q, ax1, ax2):
        out = np.zeros((ax1.size, ax2.size), dtype=np.complex128)
        for lo in range(0, len(p), self._CHUNK):
            u = np.exp(-1j * p[lo : lo + self._CHUNK, None] * ax1[None, :])
            w = np.exp(-1j * q[lo : lo + self._CHUNK, None] * ax2[None, :])
            out += u.T @ w
        return self.weight * out

    def eval_wedge_grid(self, wedge):
        z1, z2 = wedge.zeta_axes()
        ct, st = math.cos(wedge.theta), math.sin(wedge.theta)
        p = ct * self.nodes[:, 0] + st * self.nodes[:, 1]
        q = -st * self.nodes[:, 0] + ct * self.nodes[:, 1]
        return self._separable(p, q, z1, z2)

    def eval_cartesian(self, ax):
        return self._separable(self.nodes[:, 0], self.nodes[:, 1], ax, ax)


def curve_spectrum(
    curve: CurveSpec, grid: FreqGrid, quad_nodes: Optional[int] = None
) -> SpectralImage:
    """Sampled spectrum of unit line mass along the curve.

    The spectrum is the trapezoid quadrature of exp(-i tau(t).xi) on the
    unit-speed parameter.  `quad_nodes` defaults to the minimum admitted
    by `required_curve_nodes`; passing fewer raises an error naming the
    required count.
    """
    need = required_curve_nodes(curve, grid)
    if quad_nodes is None:
        quad_nodes = need
    elif quad_nodes < need:
        raise GridError(
            f"curve quadrature under-resolved: needs {need} nodes "
            f"for this grid, got {quad_nodes}"
        )
    ximax = (grid.n // 2) * grid.dxi * math.sqrt(2.0)
    if curve.kind == "circle" and (
        _bessel_tail_log(quad_nodes, curve.radius * ximax) < -50.0
    ):
        ev = CircleSpectrumEvaluator(curve.center, curve.radius)
    else:
        ev = CurveQuadEvaluator(curve.nodes(quad_nodes), curve.length / quad_nodes)
    return SpectralImage(grid, ev.eval_cartesian(grid.axis()), ev)


@dataclass(frozen=True)
class LineFragment:
    """Straight segment {0} x [-rho, rho] weighted by the bump profile."""

    half_length: float

    def __post_init__(self):
        if not 0.0 < self.half_length < 1.0:
            raise ValueError("segment half-length must lie in (0, 1)")


_W2_TABLE = None


def _w2hat_table():
    """Tabulated transform of the segment weight profile.

    One padded FFT of the bump on 8192 midpoint samples; Poisson
    aliasing sits beyond |omega| ~ 2.5e4 where the transform is far
    below float noise, so the table nodes are exact and the cubic
    interpolant between them is good to ~1e-8 absolute.
    """
    global _W2_TABLE
    if _W2_TABLE is None:
        n = 8192
        dt = 2.0 / n
        t = -1.0 + dt * (np.arange(n) + 0.5)
        nfft = n * 64
        spec = np.fft.rfft(angular_bump(t), nfft)
        om = 2.0 * np.pi * np.arange(spec.size) / (nfft * dt)
        vals = dt * (spec * np.exp(-1j * om * t[0])).real
        _W2_TABLE = (CubicSpline(om, vals), float(om[-1]))
    return _W2_TABLE


def weight_profile_transform(omega):
    """Fourier transform of the segment weight profile (real, even)."""
    spline, om_max = _w2hat_table()
    om = np.abs(np.asarray(omega, dtype=float))
    if np.any(om > om_max):
        raise GridError(f"weight profile table covers |omega| <= {om_max:.0f}")
    return spline(om)


class LineFragmentEvaluator:
    def __init__(self, half_length: float):
        self.half_length = float(half_length)

    def _profile(self, x2):
        return self.half_length * weight_profile_transform(self.half_length * x2)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        vals = self._profile(x2).astype(np.complex128)
        shape = np.broadcast(x1, x2).shape
        return np.array(np.broadcast_to(vals, shape))

    def eval_wedge_grid(self, wedge):
        z1, z2 = wedge.zeta_axes()
        ct, st = math.cos(wedge.theta), math.sin(wedge.theta)
        xi2 = st * z1[:, None] + ct * z2[None, :]
        return self._profile(xi2).astype(np.complex128)


def line_fragment_spectrum(frag: LineFragment, grid: FreqGrid) -> SpectralImage:
    """Sampled spectrum of the weighted segment.

    The transform is constant along xi1: the value at (xi1, xi2) is
    rho * w2hat(rho * xi2) with rho the half-length.
    """
    ev = LineFragmentEvaluator(frag.half_length)
    row = ev._profile(grid.axis()).astype(np.complex128)
    values = np.array(np.broadcast_to(row[None, :], (grid.n, grid.n)))
    return SpectralImage(grid, values, ev)


def filtered_piece(target: SpectralImage, j: int) -> SpectralImage:
    """Scale-j subband piece of a full target spectrum."""
    return subband_filter(target, j)


def piece_energy(f_j: SpectralImage) -> float:
    """L2 norm of the piece via the grid's Plancherel quadrature."""
    return f_j.norm()


def ground_truth_wavefront(target, samples: int) -> PhaseSet:
    """Reference sample of the target's singular position/orientation set.

    Points carry every orientation, so each location is paired with
    `samples` uniform angles in [0, pi); curves contribute their normal
    direction at equispaced arclength nodes; the weighted segment is
    singular across its axis only, orientation 0.  Diagnostics want
    samples >= 8; smaller counts are allowed for hand checks.
    """
    if samples < 1:
        raise ValueError("samples must be a positive integer")
    if isinstance(target, PointConfig):
        thetas = np.arange(samples) * (np.pi / samples)
        pos = np.repeat(target.array(), samples, axis=0)
        ori = np.tile(thetas, len(target.points))
        return PhaseSet(pos, ori)
    if isinstance(target, CurveSpec):
        t = target.length * np.arange(samples) / samples
        return PhaseSet(target.point(t), target.normal_angle(t))
    if isinstance(target, LineFragment):
        b = np.linspace(-target.half_length, target.half_length, samples)
        return PhaseSet(np.column_stack([np.zeros(samples), b]), np.zeros(samples))
    if isinstance(target, Scene):
        parts = [
            ground_truth_wavefront(target.points, samples),
            ground_truth_wavefront(target.curve, samples),
        ]
        if target.fragment is not None:
            parts.append(ground_truth_wavefront(target.fragment, samples))
        return PhaseSet.concat(parts)
    raise TypeError(f"no wavefront rule for {type(target).__name__}")


@dataclass(frozen=True)
class Scene:
    """A point cluster plus a closed curve (optionally a segment)."""

    points: PointConfig
    curve: CurveSpec
    fragment: Optional[LineFragment] = None

    def point_field(self, grid: FreqGrid) -> SpectralImage:
        return point_spectrum(self.points, grid)

    def curve_field(self, grid: FreqGrid, quad_nodes=None) -> SpectralImage:
        return curve_spectrum(self.curve, grid, quad_nodes)

    def mixture(self, grid: FreqGrid, quad_nodes=None) -> SpectralImage:
        """Spectrum of the observed sum (points + curve)."""
        p = self.point_field(grid)
        c = self.curve_field(grid, quad_nodes)
        ev = SumEvaluator([(1.0, p.evaluator), (1.0, c.evaluator)])
        return SpectralImage(grid, p.values + c.values, ev)


def default_scene() -> Scene:
    """One point at (-0.4, 0.3) and a circle of radius 0.5 at (0.15, -0.1).

    Singular supports are well separated and stay inside the scene
    square, away from its boundary.
    """
    return Scene(
        PointConfig(((-0.4, 0.3),)),
        CurveSpec.circle((0.15, -0.1), 0.5),
    )


def _parse_pairs(text: str) -> list:
    pairs = []
    for chunk in text.replace("(", " ").replace(")", " ").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(",")
        pairs.append((float(a), float(b)))
    return pairs


def scene_from_mapping(mapping) -> Scene:
    """Build a Scene from a flat key-value mapping (all values strings).

    Keys: `points` = "x,y; x,y; ..."; `curve` = circle | spline;
    circle takes `center` and `radius`, spline takes `control_points`;
    optional `rho` adds a weighted segment.  Unknown keys (e.g. `seed`,
    which belongs to the experiment layer) are ignored.
    """
    pts = PointConfig(tuple(_parse_pairs(mapping["points"])))
    kind = mapping.get("curve", "circle").strip().lower()
    if kind == "circle":
        center = _parse_pairs(mapping.get("center", "0,0"))[0]
        curve = CurveSpec.circle(center, float(mapping["radius"]))
    elif kind == "spline":
        curve = CurveSpec.closed_spline(_parse_pairs(mapping["control_points"]))
    else:
        raise ValueError(f"unknown curve kind: {kind!r}")
    fragment = None
    if mapping.get("rho") not in (None, ""):
        fragment = LineFragment(float(mapping["rho"]))
    return Scene(pts, curve, fragment)
