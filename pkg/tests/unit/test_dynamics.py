"""
Unit tests for return maps, orbit location and transverse boundary value problems.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from nonsmooth_hopf.coeffs import sigma_hash
from nonsmooth_hopf.core import NonsmoothQuadCoeffs, PlanarSystem, SmoothCoeffs, System3D, SystemND
from nonsmooth_hopf.dynamics import (
    BranchKind,
    Stability,
    centre_seeds,
    classify_stability,
    continue_3d_branch,
    continue_branch,
    continue_in_amplitude,
    find_orbit,
    fit_slope,
    integrate_phi,
    kernel_dimension,
    linear_monodromy,
    locate_root,
    monodromy_nd,
    poincare,
    poincare3,
    radial_defect,
    radius_cap,
    solve_3d_bvp,
    solve_nd_bvp,
    speed_radius,
    switched_integrate,
    time_domain_return,
)
from nonsmooth_hopf.utils import get_config
from nonsmooth_hopf.utils.config import IntegratorConfig
from nonsmooth_hopf.utils.exceptions import (
    AngularSpeedError,
    DegenerateCoefficientError,
    IntegrationError,
    ModelError,
    NonIsolatedOrbitsError,
    RadiusEscapedError,
)

SLOPE = 3.0 * math.pi / 8.0


class TestIntegrator:
    """Test the angle-parametrized integrator."""

    def test_linear_return(self):
        """Test r(2pi) = r exp(2 pi mu / omega) without nonlinearity."""
        sys = PlanarSystem(mu=0.01, omega=2.0)
        assert poincare(sys, 0.1) == pytest.approx(0.1 * math.exp(math.pi * 0.01), rel=1e-9)

    def test_linear_period(self):
        """Test that one turn takes 2 pi / omega."""
        traj = integrate_phi(PlanarSystem(omega=2.0), 0.1)
        assert traj.period == pytest.approx(math.pi, rel=1e-9)
        assert traj.u is None

    def test_clockwise_time_is_negative(self):
        """Test that a clockwise flow accumulates negative time."""
        traj = integrate_phi(PlanarSystem(omega=-1.0), 0.1)
        assert traj.elapsed == pytest.approx(-2.0 * math.pi, rel=1e-9)

    def test_steps_end_on_kinks(self, subcritical_system):
        """Test that the switching angles are sample points."""
        traj = integrate_phi(subcritical_system, 0.05)
        for kink in (0.5 * math.pi, math.pi, 1.5 * math.pi):
            assert np.min(np.abs(traj.phi - kink)) < 1e-13

    def test_fixed_step_agrees(self, subcritical_system):
        """Test the fixed-step path against the adaptive one."""
        sys = subcritical_system.with_mu(-0.01)
        adaptive = integrate_phi(sys, 0.02).r_end
        fixed = integrate_phi(sys, 0.02, fixed_step=0.01).r_end
        assert fixed == pytest.approx(adaptive, rel=1e-8)

    @pytest.mark.parametrize("quad_fixture", ["subcritical_system", "supercritical_system"])
    def test_order_restored_by_kink_steps(self, quad_fixture, request):
        """Test that halving the step cuts the return error at least 2^4-fold."""
        sys = request.getfixturevalue(quad_fixture)
        reference = integrate_phi(sys, 0.1, fixed_step=math.pi / 256).r_end
        errors = [abs(integrate_phi(sys, 0.1, fixed_step=h).r_end - reference) for h in (math.pi / 8, math.pi / 16)]
        assert errors[1] > 0.0
        assert errors[0] / errors[1] >= 16.0

    def test_negative_radius(self, subcritical_system):
        """Test that r0 < 0 is rejected."""
        with pytest.raises(IntegrationError):
            integrate_phi(subcritical_system, -0.1)

    def test_transverse_size(self):
        """Test that u0 must match the transverse dimension."""
        with pytest.raises(IntegrationError):
            integrate_phi(System3D(c1=-1.0), 0.1, u0=[0.0, 0.0])

    def test_escape(self, subcritical_system):
        """Test that leaving r <= r_max raises and counts as growth."""
        sys = subcritical_system.with_mu(0.05)
        with pytest.raises(RadiusEscapedError):
            integrate_phi(sys, 0.45)
        assert radial_defect(sys, 0.45) == 1.0

    def test_poincare3(self):
        """Test the 3D return of a decoupled linear transverse variable."""
        u_end, r_end = poincare3(System3D(c1=-1.0), 0.2, 0.1)
        assert u_end == pytest.approx(0.2 * math.exp(-2.0 * math.pi), rel=1e-8)
        assert r_end == pytest.approx(0.1, rel=1e-10)


class TestTimeDomain:
    """Test the switched time-domain integrator."""

    def test_crossing_counts(self):
        """Test crossings of both axes on a rotation."""
        result = switched_integrate(
            lambda t, y: np.array([-y[1], y[0]]), [1.0, 0.0], surfaces=(0, 1), t_max=2 * math.pi - 0.1
        )
        assert result.count(0) == 2
        assert result.count(1) == 1
        assert result.crossings[0][0] == pytest.approx(0.5 * math.pi, rel=1e-8)

    def test_stop_surface(self):
        """Test stopping at the first crossing of a surface."""
        result = switched_integrate(
            lambda t, y: np.array([-y[1], y[0]]), [1.0, 0.0], surfaces=(0, 1), t_max=10.0,
            stop_surface=1, stop_count=1,
        )
        assert result.t_end == pytest.approx(math.pi, rel=1e-8)
        assert result.y_end[0] == pytest.approx(-1.0, rel=1e-8)

    def test_agrees_with_angle_map(self, subcritical_system):
        """Test the time-domain return against the phi-map."""
        sys = subcritical_system.with_mu(-0.005)
        assert time_domain_return(sys, 0.01) == pytest.approx(poincare(sys, 0.01), rel=1e-6)


class TestOrbits:
    """Test orbit location and continuation."""

    def test_find_orbit_subcritical(self, subcritical_system):
        """Test the orbit radius against the leading-order prediction."""
        orbit = find_orbit(subcritical_system, mu=-0.01)
        assert orbit is not None
        assert orbit.r0 == pytest.approx(SLOPE * 0.01, rel=0.05)
        assert orbit.stability == Stability.UNSTABLE
        assert orbit.period == pytest.approx(2 * math.pi, rel=0.05)

    def test_find_orbit_wrong_side(self, subcritical_system):
        """Test that the side without orbits returns None."""
        assert find_orbit(subcritical_system, mu=0.01) is None

    def test_find_orbit_supercritical_is_stable(self, supercritical_system):
        """Test the stability of a supercritical orbit."""
        orbit = find_orbit(supercritical_system, mu=0.01)
        assert orbit.stability == Stability.STABLE

    def test_find_orbit_refuses_3d(self):
        """Test that transverse systems are routed elsewhere."""
        with pytest.raises(ModelError):
            find_orbit(System3D(c1=-1.0))

    def test_locate_root_bad_bracket(self):
        """Test bracket validation."""
        with pytest.raises(ModelError):
            locate_root(lambda r: r - 0.1, (0.2, 0.1), get_config())

    def test_locate_root_non_isolated(self):
        """Test that an identically vanishing defect is reported."""
        with pytest.raises(NonIsolatedOrbitsError):
            locate_root(lambda r: 0.0, (1e-3, 0.1), get_config())

    def test_locate_root_sweep(self):
        """Test a root found by the sweep when the ends share a sign."""
        root = locate_root(lambda r: (r - 0.01) * (r - 0.2), (1e-3, 0.4), get_config())
        assert root == pytest.approx(0.01, rel=1e-9)

    def test_continue_branch(self, subcritical_system):
        """Test the branch kind and its slope."""
        branch = continue_branch(subcritical_system, [-0.01, -0.005, 0.005, 0.01])
        assert branch.kind == BranchKind.SUBCRITICAL
        assert all(p.mu < 0 for p in branch.points)
        assert abs(branch.slope) == pytest.approx(SLOPE, rel=0.05)
        frame = branch.to_frame()
        assert list(frame.columns) == ["mu", "r0", "period", "floquet", "stability", "u0"]

    def test_continue_branch_both_signs_supercritical(self, supercritical_system):
        """Test sigma_# = -4 over both signs of mu: orbits on mu > 0 only and no failures."""
        magnitudes = np.geomspace(1e-3, 1e-2, 6)
        grid = np.concatenate([-magnitudes[::-1], magnitudes])
        branch = continue_branch(supercritical_system, grid)
        assert branch.failures == []
        assert len(branch.points) == 6
        assert all(p.mu > 0 for p in branch.points)
        assert branch.kind == BranchKind.SUPERCRITICAL
        assert branch.slope == pytest.approx(SLOPE, rel=0.05)

    def test_subcritical_radius_on_geometric_grid(self, subcritical_system):
        """Test r0 = 3 pi |mu| / 8 across a decade of mu < 0."""
        for mu in -np.geomspace(1e-3, 1e-2, 4):
            orbit = find_orbit(subcritical_system, mu=mu)
            assert orbit is not None
            assert orbit.r0 == pytest.approx(SLOPE * abs(mu), rel=0.05)

    def test_speed_radius_linear(self):
        """Test that a linear system has no angular-speed limit."""
        config = get_config()
        assert speed_radius(PlanarSystem()) == math.inf
        assert radius_cap(PlanarSystem(), config) == pytest.approx(0.99 * config.integrator.r_max)

    def test_speed_radius_smooth(self):
        """Test phi' = 1 + r cos(phi): the speed radius is 1."""
        sys = PlanarSystem(mu=0.0, smooth=SmoothCoeffs(a2=-1.0, b1=1.0))
        assert speed_radius(sys) == pytest.approx(1.0)

    def test_radius_cap_inside_neighbourhood(self, subcritical_system):
        """Test that the bracket cap stays below r_max and clear of vanishing phi'."""
        config = get_config()
        cap = radius_cap(subcritical_system, config)
        assert 0.0 < cap < config.integrator.r_max
        assert cap <= config.orbit.speed_margin * speed_radius(subcritical_system)

    def test_radial_defect_vanishing_speed(self):
        """Test that a trajectory on which phi' vanishes counts as growth."""
        sys = PlanarSystem(mu=0.0, smooth=SmoothCoeffs(a2=-1.0, b1=1.0))
        wide = IntegratorConfig(r_max=5.0)
        with pytest.raises(AngularSpeedError):
            integrate_phi(sys, 2.0, config=wide)
        assert radial_defect(sys, 2.0, wide) == 1.0
        assert radial_defect(sys, 0.5, wide) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("quad_fixture, mu", [("subcritical_system", -0.01), ("supercritical_system", 0.01)])
    def test_return_map_monotone_near_orbit(self, quad_fixture, mu, request):
        """Test that P(r) increases across a neighbourhood of the located orbit."""
        sys = request.getfixturevalue(quad_fixture).with_mu(mu)
        orbit = find_orbit(sys)
        radii = np.linspace(0.5 * orbit.r0, 1.5 * orbit.r0, 21)
        returns = np.array([poincare(sys, r) for r in radii])
        assert np.all(np.diff(returns) > 0.0)
        assert np.sign(returns[0] - radii[0]) != np.sign(returns[-1] - radii[-1])

    @pytest.mark.parametrize("count", [5, pytest.param(50, marks=pytest.mark.slow)])
    def test_branch_slope_random_sets(self, count):
        """Test dr0/dmu = -3 pi / (2 sigma_#) on random sets with |sigma_#| > 0.5."""
        rng = np.random.default_rng(5)
        magnitudes = np.geomspace(1e-3, 1e-2, 4)
        grid = np.concatenate([-magnitudes[::-1], magnitudes])
        tested = 0
        while tested < count:
            q = NonsmoothQuadCoeffs.from_matrices(rng.uniform(-1.0, 1.0, (2, 2)), rng.uniform(-1.0, 1.0, (2, 2)))
            sigma = sigma_hash(q)
            if abs(sigma) <= 0.5:
                continue
            tested += 1
            branch = continue_branch(PlanarSystem(quad=q), grid)
            assert branch.slope == pytest.approx(-3.0 * math.pi / (2.0 * sigma), rel=0.05), q

    def test_continue_branch_rejects_zero(self, subcritical_system):
        """Test that mu = 0 may not be on the grid."""
        with pytest.raises(ModelError):
            continue_branch(subcritical_system, [-0.01, 0.0, 0.01])

    def test_vertical_branch(self):
        """Test that a linear system yields a vertical branch."""
        branch = continue_branch(PlanarSystem(), [-0.01, 0.01])
        assert branch.kind == BranchKind.VERTICAL
        assert branch.points == []

    def test_fit_slope(self):
        """Test the quadratic fit through the origin."""
        mus = np.array([0.01, 0.02, 0.03])
        assert fit_slope(mus, 2 * mus + 3 * mus ** 2) == pytest.approx(2.0)
        assert fit_slope([], []) is None

    def test_classify_stability(self):
        """Test stability from the multiplier."""
        assert classify_stability(0.5) == Stability.STABLE
        assert classify_stability(1.5) == Stability.UNSTABLE
        assert classify_stability(1.0) == Stability.NEUTRAL

    def test_continue_in_amplitude(self, subcritical_system):
        """Test mu(r) on a radius grid."""
        amp = continue_in_amplitude(subcritical_system, [0.005, 0.01], (-0.05, -1e-6))
        np.testing.assert_allclose(amp.mus, -amp.radii / SLOPE, rtol=0.05)


class TestTransverse:
    """Test boundary value problems with transverse variables."""

    def test_kernel_dimension(self):
        """Test counting of unit eigen-directions."""
        assert kernel_dimension(np.eye(2)) == 2
        assert kernel_dimension(np.diag([1.0, 0.5])) == 1
        assert kernel_dimension(np.diag([0.2, 0.5])) == 0

    def test_linear_monodromy(self):
        """Test exp(2 pi c1 / omega)."""
        np.testing.assert_allclose(linear_monodromy(System3D(c1=-1.0)), [[math.exp(-2 * math.pi)]])

    def test_monodromy_nd_linear_block(self):
        """Test that an uncoupled block gives e^{2 pi A} and a zero residual."""
        sys = SystemND(planar=PlanarSystem(), transverse=[[-1.0, 0.5], [0.0, -2.0]])
        result = monodromy_nd(sys, None, [0.0, 0.0], 0.05)
        assert result.matrix.shape == (2, 2)
        np.testing.assert_allclose(result.matrix, linear_monodromy(sys), rtol=1e-4, atol=1e-6)
        assert result.residual_norm < 1e-10
        assert result.kernel_dim == 0

    def test_hyperbolic_3d_matches_planar(self, subcritical_system):
        """Test that an uncoupled transverse variable leaves r0 unchanged."""
        sys = System3D(planar=subcritical_system, c1=-1.0, c5=1.0, h11=1.0)
        orbits = solve_3d_bvp(sys, mu=-0.01)
        planar = find_orbit(subcritical_system, mu=-0.01)
        assert len(orbits) == 1
        assert orbits[0].r0 == pytest.approx(planar.r0, rel=1e-6)
        assert orbits[0].transverse is not None

    def test_centre_direction_two_orbits(self, centre_system):
        """Test the pair of orbits u0 = +/-(3pi/8) sqrt(mu^3), r0 = 3pi mu/8 for c1 = 0."""
        mu = 1e-3
        orbits = solve_3d_bvp(centre_system, mu=mu)
        assert len(orbits) == 2
        u_expected = SLOPE * math.sqrt(mu ** 3)
        assert orbits[0].transverse[0] == pytest.approx(-u_expected, rel=0.1)
        assert orbits[1].transverse[0] == pytest.approx(u_expected, rel=0.1)
        for orbit in orbits:
            assert orbit.r0 == pytest.approx(SLOPE * mu, rel=0.1)

    def test_centre_direction_no_orbits(self, centre_system):
        """Test that omega c2 gamma mu < 0 gives no orbit."""
        assert solve_3d_bvp(replace(centre_system, c2=-1.0), mu=1e-3) == []

    def test_centre_seeds_use_cubic_forcing(self, supercritical_system):
        """Test that the r0^3 forcing of c5 on the sigma_# = -4 set closes the branch."""
        sys = System3D(planar=supercritical_system, c2=1.0, c5=1.0)
        assert centre_seeds(sys.with_mu(1e-3)) == []
        seeds = centre_seeds(replace(sys, c2=-1.0).with_mu(1e-3))
        assert len(seeds) == 2
        assert seeds[0][0][0] == pytest.approx(-seeds[1][0][0])

    def test_centre_degenerate_balance(self, supercritical_system):
        """Test that an h21 forcing alone is refused."""
        sys = System3D(planar=supercritical_system, c2=1.0, h21=1.0)
        with pytest.raises(DegenerateCoefficientError):
            solve_3d_bvp(sys, mu=0.01)

    def test_nd_matches_planar(self, subcritical_system):
        """Test a hyperbolic two-dimensional transverse block."""
        sys = SystemND(planar=subcritical_system, transverse=[[-1.0, 0.5], [0.0, -2.0]], vw=[1.0, 0.5])
        orbits = solve_nd_bvp(sys, mu=-0.01)
        planar = find_orbit(subcritical_system, mu=-0.01)
        assert len(orbits) == 1
        assert orbits[0].r0 == pytest.approx(planar.r0, rel=1e-6)
        assert len(orbits[0].transverse) == 2

    def test_continue_3d_branch(self, subcritical_system):
        """Test the 3D branch kind."""
        sys = System3D(planar=subcritical_system, c1=-1.0, c5=1.0)
        branch = continue_3d_branch(sys, [-0.01, -0.005, 0.005])
        assert branch.kind == BranchKind.SUBCRITICAL
        assert len(branch.points) == 2

    def test_continue_3d_branch_rejects_zero(self):
        """Test that mu = 0 may not be on the grid."""
        with pytest.raises(ModelError):
            continue_3d_branch(System3D(c1=-1.0), [0.0])
