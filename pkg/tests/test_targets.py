"""Tests for the synthetic scene constructors and their spectra."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma

from morphosep.frame_kernel import (
    FreqGrid,
    GridError,
    WAVELET_NORM,
    wavelet_spectrum,
)
from morphosep.frame_kernel.grid import SpectralImage
from morphosep.frame_kernel.windows import angular_bump
from morphosep.phase import PhasePoint, PhaseSet, angle_distance, phase_metric
from morphosep.targets import (
    CurveQuadEvaluator,
    CurveSpec,
    LineFragment,
    POWER_FOURIER_CONSTANT,
    PointConfig,
    Scene,
    curve_spectrum,
    default_scene,
    filtered_piece,
    ground_truth_wavefront,
    line_fragment_spectrum,
    piece_energy,
    point_spectrum,
    required_curve_nodes,
    scene_from_mapping,
    weight_profile_transform,
)

# Frozen reference values.  The power-law constant is the closed form
# pi*sqrt(2)*Gamma(1/4)/Gamma(3/4); the profile integral and decay
# constant were measured once from the quadratures asserted below.
POWER_CONSTANT_REF = 13.145047206596875
PROFILE_INTEGRAL_REF = 1.1554657083640931
PROFILE_DECAY_CONST = 1.0e5  # measured max of |w2hat(om)|*e^om on [0,20] is 7.95e4


def mirror_conjugate(values):
    """conj(v(-xi)) realigned onto the grid; row/col 0 have no partner."""
    m = np.conj(values[::-1, ::-1])
    return np.roll(np.roll(m, 1, axis=0), 1, axis=1)


def assert_conjugate_symmetric(values, tol=1e-13):
    m = mirror_conjugate(values)
    scale = np.abs(values).max()
    assert np.abs(values[1:, 1:] - m[1:, 1:]).max() <= tol * scale


class TestPowerConstant:
    def test_closed_form(self):
        want = float(np.pi * np.sqrt(2.0) * gamma(0.25) / gamma(0.75))
        assert POWER_FOURIER_CONSTANT == want
        assert abs(POWER_FOURIER_CONSTANT - POWER_CONSTANT_REF) < 1e-14

    def test_hankel_quadrature_oracle(self):
        # radial transform of |x|^(-3/2) at |xi| = 1, integrated segment by
        # segment between Bessel zeros with alternating-series acceleration
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 25

        def seg(k):
            a = mp.besseljzero(0, int(k)) if k >= 1 else mp.mpf(0)
            b = mp.besseljzero(0, int(k) + 1)
            return mp.quad(lambda s: mp.sqrt(1 / s) * mp.besselj(0, s), [a, b])

        oracle = 2 * mp.pi * (seg(0) + mp.nsum(seg, [1, mp.inf], method="a"))
        assert abs(float(oracle) - POWER_FOURIER_CONSTANT) < 1e-12


class TestPointConfig:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            PointConfig(())

    def test_rejects_out_of_square(self):
        with pytest.raises(ValueError, match="outside"):
            PointConfig(((1.2, 0.0),))

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="distinct"):
            PointConfig(((0.1, 0.2), (0.1, 0.2)))


class TestPointSpectrum:
    def test_origin_point_radial_profile(self):
        grid = FreqGrid(5, oversample=2)
        img = point_spectrum(PointConfig(((0.0, 0.0),)), grid)
        assert np.all(img.values.imag == 0.0)
        assert img.values[grid.n // 2, grid.n // 2] == 0.0
        r = grid.radii()
        off = r > 0
        prod = img.values.real[off] * np.sqrt(r[off])
        assert prod.min() > 0
        assert np.allclose(prod, POWER_FOURIER_CONSTANT, rtol=1e-12)

    def test_translated_point_phase(self):
        grid = FreqGrid(5, oversample=1)
        a, b = 0.37, -0.52
        img = point_spectrum(PointConfig(((a, b),)), grid)
        x1, x2 = grid.mesh()
        r = grid.radii()
        want = np.where(
            r > 0,
            POWER_FOURIER_CONSTANT / np.sqrt(np.where(r > 0, r, 1.0)),
            0.0,
        ) * np.exp(-1j * (a * x1 + b * x2))
        assert np.allclose(img.values, want, rtol=0, atol=1e-12)

    def test_evaluator_agrees_with_samples(self):
        grid = FreqGrid(4, oversample=1)
        img = point_spectrum(PointConfig(((-0.4, 0.3), (0.2, 0.6))), grid)
        ax = grid.axis()
        picks = [(3, 50), (17, 17), (40, 9)]
        for i1, i2 in picks:
            assert img.evaluate(ax[i1], ax[i2]) == pytest.approx(
                img.values[i1, i2], abs=1e-13
            )

    def test_conjugate_symmetry(self):
        grid = FreqGrid(5, oversample=1)
        img = point_spectrum(PointConfig(((-0.4, 0.3), (0.11, -0.73))), grid)
        assert_conjugate_symmetric(img.values)


class TestCurveSpec:
    def test_circle_geometry(self):
        c = CurveSpec.circle((0.15, -0.1), 0.5)
        assert c.length == pytest.approx(np.pi)
        assert c.curvature_bound == pytest.approx(2.0)
        assert c.speed_error == 0.0
        t = np.linspace(0, c.length, 7)
        p = c.point(t)
        assert np.allclose(np.hypot(p[:, 0] - 0.15, p[:, 1] + 0.1), 0.5)

    def test_circle_must_fit_scene(self):
        with pytest.raises(ValueError, match="square"):
            CurveSpec.circle((0.8, 0.0), 0.5)

    def test_spline_unit_speed_and_closure(self):
        th = np.linspace(0, 2 * np.pi, 12, endpoint=False)
        ctrl = np.column_stack([0.6 * np.cos(th) + 0.05, 0.45 * np.sin(th) - 0.1])
        sp = CurveSpec.closed_spline(ctrl)
        assert sp.speed_error <= 1e-6
        assert np.allclose(sp.point(0.0), sp.point(sp.length), atol=1e-12)
        assert np.isfinite(sp.curvature_bound) and sp.curvature_bound > 0
        tan = sp.tangent(np.linspace(0, sp.length, 257))
        assert np.abs(np.hypot(tan[:, 0], tan[:, 1]) - 1.0).max() <= 1e-6

    def test_spline_needs_four_points(self):
        with pytest.raises(ValueError, match="4 control points"):
            CurveSpec.closed_spline([(0, 0), (0.5, 0), (0.5, 0.5)])

    def test_spline_must_fit_scene(self):
        th = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        ctrl = np.column_stack([1.3 * np.cos(th), 1.3 * np.sin(th)])
        with pytest.raises(ValueError, match="square"):
            CurveSpec.closed_spline(ctrl)


class TestCurveSpectrum:
    def test_circle_bessel_oracle(self):
        # independent slow oracle: mpmath Bessel series vs our quadrature
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 25
        grid = FreqGrid(5, oversample=2)
        curve = CurveSpec.circle((0.15, -0.1), 0.5)
        img = curve_spectrum(curve, grid)
        ax = grid.axis()
        rng = np.random.default_rng(7)
        idx = rng.integers(0, grid.n, size=(100, 2))
        scale = 2.0 * np.pi * 0.5
        for i1, i2 in idx:
            x1, x2 = ax[i1], ax[i2]
            r = float(np.hypot(x1, x2))
            want = scale * float(mp.besselj(0, 0.5 * r)) * np.exp(
                -1j * (0.15 * x1 - 0.1 * x2)
            )
            assert abs(img.values[i1, i2] - want) <= 1e-8 * scale

    def test_translation_phase(self):
        grid = FreqGrid(4, oversample=1)
        base = curve_spectrum(CurveSpec.circle((0.0, 0.0), 0.4), grid)
        moved = curve_spectrum(CurveSpec.circle((0.3, -0.2), 0.4), grid)
        x1, x2 = grid.mesh()
        shifted = base.values * np.exp(-1j * (0.3 * x1 - 0.2 * x2))
        assert np.allclose(moved.values, shifted, rtol=0, atol=1e-12)

    def test_under_resolved_error_names_count(self):
        grid = FreqGrid(5, oversample=1)
        curve = CurveSpec.circle((0.0, 0.0), 0.5)
        need = required_curve_nodes(curve, grid)
        with pytest.raises(GridError, match=str(need)):
            curve_spectrum(curve, grid, quad_nodes=need - 1)

    def test_trapezoid_route_matches_closed_form(self):
        # the literal node sum and the collapsed radial profile must agree
        grid = FreqGrid(5, oversample=1)
        curve = CurveSpec.circle((0.15, -0.1), 0.5)
        m = required_curve_nodes(curve, grid)
        raw = CurveQuadEvaluator(curve.nodes(m), curve.length / m)
        img = curve_spectrum(curve, grid)
        rng = np.random.default_rng(5)
        pts = rng.uniform(-200, 200, size=(50, 2))
        got = raw(pts[:, 0], pts[:, 1])
        want = img.evaluate(pts[:, 0], pts[:, 1])
        assert np.abs(got - want).max() <= 1e-12

    def test_spline_circle_matches_circle(self):
        th = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        ctrl = np.column_stack([0.5 * np.cos(th), 0.5 * np.sin(th)])
        grid = FreqGrid(4, oversample=1)
        approx = curve_spectrum(CurveSpec.closed_spline(ctrl), grid)
        exact = curve_spectrum(CurveSpec.circle((0.0, 0.0), 0.5), grid)
        scale = 2.0 * np.pi * 0.5
        assert np.abs(approx.values - exact.values).max() <= 1e-4 * scale

    def test_spline_conjugate_symmetry(self):
        th = np.linspace(0, 2 * np.pi, 10, endpoint=False)
        ctrl = np.column_stack([0.5 * np.cos(th) + 0.1, 0.35 * np.sin(th)])
        grid = FreqGrid(4, oversample=1)
        img = curve_spectrum(CurveSpec.closed_spline(ctrl), grid)
        assert_conjugate_symmetric(img.values, tol=1e-12)

    def test_circle_conjugate_symmetry(self):
        grid = FreqGrid(5, oversample=1)
        img = curve_spectrum(CurveSpec.circle((0.15, -0.1), 0.5), grid)
        assert_conjugate_symmetric(img.values)


class TestLineFragment:
    def test_half_length_range(self):
        with pytest.raises(ValueError):
            LineFragment(0.0)
        with pytest.raises(ValueError):
            LineFragment(1.0)

    def test_profile_integral(self):
        want = quad(lambda t: angular_bump(t), -1.0, 1.0, limit=200)[0]
        got = float(weight_profile_transform(0.0))
        assert abs(got - want) < 1e-12
        assert abs(got - PROFILE_INTEGRAL_REF) < 1e-13

    def test_zero_frequency_row(self):
        grid = FreqGrid(4, oversample=2)
        frag = LineFragment(0.7)
        img = line_fragment_spectrum(frag, grid)
        col = grid.n // 2  # xi2 = 0
        assert np.allclose(
            img.values[:, col], 0.7 * PROFILE_INTEGRAL_REF, rtol=1e-12
        )

    def test_constant_along_xi1(self):
        grid = FreqGrid(4, oversample=1)
        img = line_fragment_spectrum(LineFragment(0.4), grid)
        assert np.abs(img.values - img.values[:1, :]).max() == 0.0

    def test_table_matches_direct_quadrature(self):
        for om in (0.7, 3.3, 7.9, 14.2, 19.5):
            direct = quad(
                lambda t: angular_bump(t) * np.cos(om * t), -1.0, 1.0, limit=400
            )[0]
            assert abs(float(weight_profile_transform(om)) - direct) <= 1e-8

    def test_exponential_decay_on_probe_band(self):
        om = np.linspace(0.0, 20.0, 4001)
        vals = np.abs(weight_profile_transform(om))
        assert np.max(vals * np.exp(om)) <= PROFILE_DECAY_CONST

    def test_spectrum_decay_in_xi2(self):
        grid = FreqGrid(4, oversample=2)
        rho = 0.6
        img = line_fragment_spectrum(LineFragment(rho), grid)
        ax = grid.axis()
        probe = np.abs(rho * ax) <= 20.0
        bound = rho * PROFILE_DECAY_CONST * np.exp(-rho * np.abs(ax[probe]))
        assert np.all(np.abs(img.values[0, probe]) <= bound)

    def test_conjugate_symmetry(self):
        grid = FreqGrid(4, oversample=1)
        img = line_fragment_spectrum(LineFragment(0.5), grid)
        assert_conjugate_symmetric(img.values)


class TestFilteredPiece:
    def test_linearity(self):
        # float products distribute only to an ulp, not bitwise
        grid = FreqGrid(5, oversample=1)
        scene = default_scene()
        p = scene.point_field(grid)
        c = scene.curve_field(grid)
        s = SpectralImage(grid, p.values + c.values)
        lhs = filtered_piece(s, 5).values
        rhs = filtered_piece(p, 5).values + filtered_piece(c, 5).values
        assert np.abs(lhs - rhs).max() <= 1e-14 * np.abs(lhs).max()

    def test_support_confined_to_annulus(self):
        grid = FreqGrid(5, oversample=1)
        img = filtered_piece(default_scene().point_field(grid), 5)
        r = grid.radii()
        outside = (r <= 2.0**4) | (r >= 2.0**6)
        assert np.abs(img.values[outside]).max() == 0.0


class TestPieceEnergy:
    def test_zero_input(self):
        grid = FreqGrid(4, oversample=1)
        z = SpectralImage(grid, np.zeros((grid.n, grid.n), dtype=complex))
        assert piece_energy(z) == 0.0

    def test_wavelet_atom_energy_matches_frame_constant(self):
        grid = FreqGrid(5, oversample=2)
        w = wavelet_spectrum(grid, 5, 3, -2)
        assert piece_energy(w) == pytest.approx(WAVELET_NORM, abs=1e-8)

    def test_matches_double_sum_oracle(self):
        grid = FreqGrid(4, oversample=1)
        rng = np.random.default_rng(11)
        vals = rng.standard_normal((grid.n, grid.n)) * (
            1.0 + 1j
        ) + 1j * rng.standard_normal((grid.n, grid.n))
        img = SpectralImage(grid, vals)
        acc = 0.0
        for row in vals:
            acc += float(np.sum(np.abs(row) ** 2))
        want = np.sqrt(acc) * grid.dxi / (2.0 * np.pi)
        assert abs(piece_energy(img) - want) <= 1e-12


@pytest.fixture(scope="module")
def annulus_scan():
    """Energies of the default scene on one wide grid, j = 5..10."""
    scene = default_scene()
    grid = FreqGrid(10, oversample=1)
    p = scene.point_field(grid)
    c = scene.curve_field(grid)
    r = grid.radii()
    cell = grid.dxi**2
    scales = np.arange(5, 11)
    point_energy, curve_energy, piece_norms = [], [], []
    for j in scales:
        ring = (r > 2.0**j) & (r < 2.0 ** (j + 1))
        point_energy.append(float(np.sum(np.abs(p.values[ring]) ** 2) * cell))
        curve_energy.append(float(np.sum(np.abs(c.values[ring]) ** 2) * cell))
        piece_norms.append(
            piece_energy(filtered_piece(p, j)) + piece_energy(filtered_piece(c, j))
        )
    return scales, np.array(point_energy), np.array(curve_energy), np.array(piece_norms)


class TestSceneEnergies:
    def test_point_annulus_slope(self, annulus_scan):
        scales, ep, _, _ = annulus_scan
        slope = np.polyfit(scales, np.log2(ep), 1)[0]
        assert abs(slope - 1.0) <= 0.05

    def test_curve_annulus_slope(self, annulus_scan):
        scales, _, ec, _ = annulus_scan
        slope = np.polyfit(scales, np.log2(ec), 1)[0]
        assert abs(slope - 1.0) <= 0.05

    def test_energy_balance_across_scales(self, annulus_scan):
        _, ep, ec, _ = annulus_scan
        ratio = ep / ec
        assert ratio.max() / ratio.min() <= 4.0

    def test_subband_norm_growth(self, annulus_scan):
        scales, _, _, tot = annulus_scan
        slope = np.polyfit(scales, np.log2(tot), 1)[0]
        assert slope >= 0.45


class TestGroundTruthWavefront:
    def test_point_four_samples(self):
        wf = ground_truth_wavefront(PointConfig(((-0.4, 0.3),)), 4)
        assert len(wf) == 4
        assert np.allclose(wf.positions, [-0.4, 0.3])
        assert np.allclose(wf.orientations, [0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])

    def test_circle_orientation_is_radial(self):
        c = CurveSpec.circle((0.15, -0.1), 0.5)
        wf = ground_truth_wavefront(c, 16)
        radial = np.mod(
            np.arctan2(wf.positions[:, 1] + 0.1, wf.positions[:, 0] - 0.15), np.pi
        )
        assert np.abs(angle_distance(wf.orientations, radial)).max() <= 1e-12

    def test_fragment_orientations_zero(self):
        wf = ground_truth_wavefront(LineFragment(0.3), 9)
        assert np.all(wf.orientations == 0.0)
        assert np.all(wf.positions[:, 0] == 0.0)
        assert wf.positions[:, 1].min() == -0.3
        assert wf.positions[:, 1].max() == 0.3

    def test_scene_concatenates_parts(self):
        wf = ground_truth_wavefront(default_scene(), 8)
        assert len(wf) == 16

    def test_rejects_nonpositive_samples(self):
        with pytest.raises(ValueError):
            ground_truth_wavefront(PointConfig(((0.0, 0.0),)), 0)


class TestScene:
    def test_default_geometry(self):
        sc = default_scene()
        assert sc.points.points == ((-0.4, 0.3),)
        assert sc.curve.kind == "circle"
        assert sc.curve.center == (0.15, -0.1)
        assert sc.curve.radius == 0.5
        assert sc.fragment is None

    def test_mixture_is_sum(self):
        sc = default_scene()
        grid = FreqGrid(4, oversample=1)
        mix = sc.mixture(grid)
        p = sc.point_field(grid)
        c = sc.curve_field(grid)
        assert np.array_equal(mix.values, p.values + c.values)
        probe = mix.evaluate(33.0, -47.5)
        assert probe == pytest.approx(
            p.evaluate(33.0, -47.5) + c.evaluate(33.0, -47.5), abs=1e-13
        )

    def test_from_mapping_circle(self):
        sc = scene_from_mapping(
            {
                "points": "(-0.4, 0.3); (0.2, 0.55)",
                "curve": "circle",
                "center": "0.15, -0.1",
                "radius": "0.5",
                "rho": "0.25",
                "seed": "7",
            }
        )
        assert len(sc.points.points) == 2
        assert sc.curve.radius == 0.5
        assert sc.fragment == LineFragment(0.25)

    def test_from_mapping_spline(self):
        th = np.linspace(0, 2 * np.pi, 6, endpoint=False)
        pts = "; ".join(
            f"{0.5 * np.cos(a):.4f}, {0.5 * np.sin(a):.4f}" for a in th
        )
        sc = scene_from_mapping(
            {"points": "0.0, 0.1", "curve": "spline", "control_points": pts}
        )
        assert sc.curve.kind == "spline"

    def test_from_mapping_rejects_unknown_curve(self):
        with pytest.raises(ValueError, match="unknown curve"):
            scene_from_mapping({"points": "0,0", "curve": "ellipse"})


class TestPhaseSpace:
    def test_angle_wraps_at_pi(self):
        assert angle_distance(0.05, np.pi - 0.05) == pytest.approx(0.1, abs=1e-12)

    def test_phase_metric_combines_components(self):
        p = PhasePoint(0.0, 0.0, 0.05)
        q = PhasePoint(0.0, 0.0, np.pi - 0.05)
        assert phase_metric(p, q) == pytest.approx(0.1, abs=1e-12)
        r = PhasePoint(0.3, -0.4, 0.05)
        assert phase_metric(p, r) == pytest.approx(0.5, abs=1e-12)

    def test_phase_set_shape_guard(self):
        with pytest.raises(ValueError):
            PhaseSet(np.zeros((3, 2)), np.zeros(4))
