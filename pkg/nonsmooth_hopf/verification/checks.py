"""
The property suite behind ``nshopf verify``.

One check per acceptance property: closed forms against quadrature, branch
scaling laws against numerically located orbits, and the shimmy verdict
against simulation. Sample counts default to the full pass; ``quick_suite``
trims them for CI smoke runs.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..averaging.normal_form import averaged_form
from ..averaging.quadrature import piecewise_integral
from ..coeffs import planar as pc
from ..coeffs.general import lambda_by_quadrature, lambda_general, sigma_general
from ..coeffs.ledger3d import gamma_hash_effective
from ..core.polar import AXIS_ANGLES, AngleFunction
from ..core.types import NonsmoothQuadCoeffs, PlanarSystem, SlopePair, SmoothCoeffs, System3D
from ..dynamics.bvp import solve_3d_bvp
from ..dynamics.orbits import continue_branch, detect_fold, find_orbit, fit_slope
from ..predict.branches import bautin_fold, fold_radius, r0_second
from ..shimmy.analysis import ShimmyVerdict, analyze_shimmy
from ..shimmy.model import hopf_tuned_params
from ..shimmy.simulation import simulate_verdict
from ..utils.config import Config, get_config
from ..utils.exceptions import ShimmyError
from .base import CheckResult, CheckSeverity, CheckSuite, PropertyCheck

SUBCRITICAL_QUAD = NonsmoothQuadCoeffs(a11=1, a12=1, a21=1, a22=1, b11=1, b12=1, b21=-1, b22=1)
SUPERCRITICAL_QUAD = NonsmoothQuadCoeffs(a11=1, a12=1, a21=1, a22=1, b11=1, b12=1, b21=-1, b22=-3)
# sigma_# = -4 with no r^3 forcing of u from c5
CENTRE_QUAD = NonsmoothQuadCoeffs(a11=-2)


def _rel_err(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def _random_quad(rng: np.random.Generator, general_slopes: bool = False) -> NonsmoothQuadCoeffs:
    values = rng.uniform(-2.0, 2.0, 8)
    slopes = None
    if general_slopes:
        slopes = [SlopePair(*rng.uniform(-2.0, 2.0, 2)) for _ in range(8)]
    a, b = values[:4].reshape(2, 2), values[4:].reshape(2, 2)
    return NonsmoothQuadCoeffs.from_matrices(a, b, slopes)


def _random_smooth(rng: np.random.Generator) -> SmoothCoeffs:
    return SmoothCoeffs.from_lists(rng.uniform(-2.0, 2.0, 6), rng.uniform(-2.0, 2.0, 8))


def _hopf_matrix(rng: np.random.Generator) -> np.ndarray:
    """Zero-trace 2x2 matrix with eigenvalues +/- i omega, omega in [0.5, 2]."""
    omega = rng.uniform(0.5, 2.0)
    m1 = rng.uniform(-1.0, 1.0)
    m2 = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    m3 = -(m1 * m1 + omega * omega) / m2
    return np.array([[m1, m2], [m3, -m1]])


def _loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.abs(x)), np.log(np.abs(y)), 1)[0])


class ClosedFormQuadratureCheck(PropertyCheck):
    """Planar closed forms against their piecewise-quadrature oracles."""

    name = "planar closed forms vs quadrature"
    severity = CheckSeverity.HIGH
    tolerance = 1e-9

    def check(self) -> CheckResult:
        rng = self.rng()
        worst: Dict[str, float] = {}
        for _ in range(self.count(1000)):
            q = _random_quad(rng)
            s = _random_smooth(rng)
            omega = rng.uniform(0.5, 2.0)
            general = _random_quad(rng, general_slopes=True)
            nf = averaged_form(PlanarSystem(omega=omega, quad=q, smooth=s))
            pairs = {
                "sigma_hash": (pc.sigma_hash(q), pc.sigma_tilde_by_quadrature(q)),
                "sigma_tilde": (pc.sigma_tilde(general), pc.sigma_tilde_by_quadrature(general)),
                "sigma_2": (pc.sigma_2(q), pc.sigma_2_by_quadrature(q)),
                "S_q": (pc.s_q(s), pc.s_q_by_quadrature(s)),
                "S_c": (pc.s_c(s), pc.s_c_by_quadrature(s)),
                "averaged_cubic": (nf.cubic, nf.cubic_quadrature),
            }
            for name, (closed, quad) in pairs.items():
                worst[name] = max(worst.get(name, 0.0), _rel_err(closed, quad))
        failing = sorted(k for k, v in worst.items() if v > self.tolerance)
        message = "all coefficients agree" if not failing else f"disagreement in {', '.join(failing)}"
        return self.result(not failing, message, max_rel_err=worst)


class BranchSlopeCheck(PropertyCheck):
    """Orbits only on the predicted side of mu, with |dr0/dmu| = 3 pi / 8."""

    name = "first-order branch side and slope"
    severity = CheckSeverity.CRITICAL
    tolerance = 0.05

    def __init__(self, *args, points: int = 6, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.points = points
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        magnitudes = np.geomspace(1e-3, 1e-2, self.points)
        grid = np.concatenate([-magnitudes[::-1], magnitudes])
        expected = 3.0 * math.pi / 8.0
        details = {}
        passed = True
        for label, quad, side in (("sigma=4", SUBCRITICAL_QUAD, -1.0), ("sigma=-4", SUPERCRITICAL_QUAD, 1.0)):
            branch = continue_branch(PlanarSystem(quad=quad), grid, config)
            one_sided = bool(branch.points) and all(np.sign(p.mu) == side for p in branch.points)
            slope = branch.slope
            ok = one_sided and slope is not None and abs(abs(slope) - expected) <= self.tolerance * expected
            passed = passed and ok
            details[label] = {"orbits": len(branch.points), "one_sided": one_sided, "slope": slope}
        return self.result(passed, f"expected |slope| {expected:.6f}", **details)


class SecondOrderScalingCheck(PropertyCheck):
    """Square-root branch when sigma_# vanishes."""

    name = "second-order square-root branch"
    severity = CheckSeverity.MEDIUM

    def __init__(self, *args, points: int = 5, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.points = points
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        q = NonsmoothQuadCoeffs(a11=1.0, a12=-2.0, b11=1.0)
        system = PlanarSystem(quad=q)
        sigma2 = pc.sigma_2(q)
        mus = np.geomspace(1e-5, 1e-4, self.points) * math.copysign(1.0, sigma2)
        radii, errors = [], []
        for mu in mus:
            orbit = find_orbit(system, mu, config=config)
            if orbit is None:
                return self.result(False, f"no orbit at mu={mu:.3g}", sigma_2=sigma2)
            predicted = r0_second(sigma2, system.omega, mu)
            radii.append(orbit.r0)
            errors.append(abs(orbit.r0 - predicted) / predicted)
        slope = _loglog_slope(mus, radii)
        passed = max(errors) <= 0.1 and abs(slope - 0.5) <= 0.05
        return self.result(passed, f"log-log slope {slope:.4f}", max_rel_err=max(errors), sigma_2=sigma2)


class AverageIdentityCheck(PropertyCheck):
    """Period integrals of products of cos, sin and their moduli."""

    name = "trigonometric period integrals"
    severity = CheckSeverity.HIGH
    tolerance = 1e-12

    def check(self) -> CheckResult:
        def f(func, name):
            return AngleFunction(func, AXIS_ANGLES, smooth=False, name=name)

        cases: List[Tuple[str, float, float]] = [
            ("cos^2|cos|", piecewise_integral(f(lambda p: np.cos(p) ** 2 * np.abs(np.cos(p)), "c2|c|")), 8.0 / 3.0),
            (
                "cos^4 - (3/4) cos^2",
                piecewise_integral(f(lambda p: np.cos(p) ** 4 - 0.75 * np.cos(p) ** 2, "c4")),
                0.0,
            ),
            ("cos|cos| sin", piecewise_integral(f(lambda p: np.cos(p) * np.abs(np.cos(p)) * np.sin(p), "c|c|s")), 0.0),
            ("cos^2 sin|sin|", piecewise_integral(f(lambda p: np.cos(p) ** 2 * np.sin(p) * np.abs(np.sin(p)), "c2s|s|")), 0.0),
            ("cos^3 sin", piecewise_integral(f(lambda p: np.cos(p) ** 3 * np.sin(p), "c3s")), 0.0),
        ]
        errors = {name: abs(value - exact) for name, value, exact in cases}
        passed = max(errors.values()) <= self.tolerance
        return self.result(passed, f"max abs error {max(errors.values()):.2e}", errors=errors)


class TransverseSlavingCheck(PropertyCheck):
    """Transverse amplitude of the 3D orbit scales as r0^2 for c1 < 0."""

    name = "3D hyperbolic slaving"
    severity = CheckSeverity.MEDIUM

    def __init__(self, *args, points: int = 5, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.points = points
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        planar = PlanarSystem(quad=SUBCRITICAL_QUAD)
        mus = -np.geomspace(1e-3, 1e-2, self.points)
        details = {}
        passed = True
        for c1 in (-1.0, -0.5):
            system = System3D(planar=planar, c1=c1, c5=1.0, h11=1.0)
            radii, amplitudes = [], []
            for mu in mus:
                orbits = solve_3d_bvp(system, mu, config)
                if len(orbits) != 1:
                    return self.result(False, f"{len(orbits)} orbits at c1={c1}, mu={mu:.3g}")
                radii.append(orbits[0].r0)
                amplitudes.append(orbits[0].transverse[0])
            slope = _loglog_slope(radii, amplitudes)
            details[f"c1={c1}"] = slope
            passed = passed and abs(slope - 2.0) <= 0.1
        return self.result(passed, "log-log slope of |u0| against r0", slopes=details)


class TwoBranchCheck(PropertyCheck):
    """c1 = 0: two orbits with u0 = +/-(3pi/(2|sigma|)) sqrt(gamma mu^3 / (2 omega c2)), or none."""

    name = "3D centre direction: two branches"
    severity = CheckSeverity.HIGH

    def __init__(self, *args, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        mu = 1e-3
        planar = PlanarSystem(quad=CENTRE_QUAD)
        system = System3D(planar=planar, c2=1.0, c5=2.0)
        sigma = abs(pc.sigma_hash(planar.quad))
        gamma = gamma_hash_effective(system)
        expected = 3.0 * math.pi / (2.0 * sigma) * math.sqrt(gamma * mu ** 3 / (2.0 * planar.omega * system.c2))
        orbits = solve_3d_bvp(system, mu, config)
        amplitudes = sorted(o.transverse[0] for o in orbits)
        violated = solve_3d_bvp(System3D(planar=planar, c2=-1.0, c5=2.0), mu, config)
        if len(orbits) != 2:
            return self.result(False, f"{len(orbits)} orbits where two were expected", gamma_hash_eff=gamma)
        errors = [abs(abs(u) - expected) / expected for u in amplitudes]
        passed = amplitudes[0] < 0.0 < amplitudes[1] and max(errors) <= 0.1 and not violated
        return self.result(
            passed, f"u0 = {amplitudes}, expected +/-{expected:.4e}",
            max_rel_err=max(errors), orbits_when_violated=len(violated), gamma_hash_eff=gamma,
        )


class GeneralLinearCheck(PropertyCheck):
    """Lambda closed form vs quadrature, and sign of (3 pi omega/2) Sigma vs continued orbits."""

    name = "general linear part"
    severity = CheckSeverity.CRITICAL
    margin = 0.1

    def __init__(self, *args, dynamic_samples: int = 20, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.dynamic_samples = dynamic_samples
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        rng = self.rng()
        worst_lambda = 0.0
        systems = []
        for _ in range(self.count(100)):
            m = _hopf_matrix(rng) + rng.uniform(-0.5, 0.5) * np.eye(2)
            worst_lambda = max(worst_lambda, _rel_err(lambda_general(m), lambda_by_quadrature(m)))
            systems.append(m - 0.5 * np.trace(m) * np.eye(2))

        mismatches = []
        tested = 0
        eps = 1e-3
        for m in systems:
            if tested >= self.dynamic_samples:
                break
            q = _random_quad(rng)
            carrier = sigma_general(m, q).lyapunov_carrier
            if abs(carrier) < self.margin:
                continue
            tested += 1
            system = PlanarSystem(linear=(tuple(m[0]), tuple(m[1])), quad=q)
            plus = find_orbit(system, eps, config=config) is not None
            minus = find_orbit(system, -eps, config=config) is not None
            if (plus, minus) != ((True, False) if carrier < 0.0 else (False, True)):
                mismatches.append({"carrier": carrier, "orbit_plus": plus, "orbit_minus": minus})
        passed = worst_lambda <= 1e-9 and not mismatches
        return self.result(
            passed, f"{tested - len(mismatches)}/{tested} sides match",
            max_lambda_rel_err=worst_lambda, mismatches=mismatches,
        )


class SmootheningCheck(PropertyCheck):
    """Equal-weight smoothening can flip the sign; weights (2/3, 1, 1, 2/3) never do."""

    name = "smoothening sign agreement"
    severity = CheckSeverity.HIGH

    def check(self) -> CheckResult:
        grid = np.linspace(-2.0, 2.0, 10)
        counterexample = None
        disagreements = 0
        weights = (2.0 / 3.0, 1.0, 1.0, 2.0 / 3.0)
        for a11 in grid:
            for a12 in grid:
                for b21 in grid:
                    for b22 in grid:
                        q = NonsmoothQuadCoeffs(a11=a11, a12=a12, b21=b21, b22=b22)
                        sharp = pc.sigma_hash(q)
                        if counterexample is None and pc.sigma_cubic(q) * sharp < 0.0:
                            counterexample = [a11, a12, b21, b22]
                        weighted = pc.smoothed_sigma(q, weights)
                        if np.sign(weighted) != np.sign(sharp) and abs(sharp) > 1e-12:
                            disagreements += 1
        passed = counterexample is not None and disagreements == 0
        return self.result(
            passed, f"{disagreements} sign disagreements with weights {weights}",
            counterexample=counterexample,
        )


class ShimmyCheck(PropertyCheck):
    """Shimmy verdict against simulation; negating c4 flips every verdict."""

    name = "shimmy verdict vs simulation"
    severity = CheckSeverity.CRITICAL
    min_carrier = 0.1

    def __init__(self, *args, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        rng = self.rng()
        target = self.count(20)
        flips = {ShimmyVerdict.SUPERCRITICAL: ShimmyVerdict.SUBCRITICAL,
                 ShimmyVerdict.SUBCRITICAL: ShimmyVerdict.SUPERCRITICAL}
        mismatches = []
        tested = attempts = 0
        while tested < target and attempts < 20 * target:
            attempts += 1
            p = hopf_tuned_params(rng)
            try:
                analysis = analyze_shimmy(p, config)
            except ShimmyError:
                continue
            if abs(analysis.integral_chi2) < self.min_carrier:
                continue
            tested += 1
            negated = analyze_shimmy(p.negated_c4(), config).verdict
            simulated = simulate_verdict(p, config=config).verdict
            if simulated != analysis.verdict or flips.get(analysis.verdict) != negated:
                mismatches.append({
                    "params": p.to_list(),
                    "verdict": analysis.verdict.value,
                    "negated": negated.value,
                    "simulated": None if simulated is None else simulated.value,
                })
        passed = tested == target and not mismatches
        return self.result(passed, f"{tested - len(mismatches)}/{tested} draws agree", mismatches=mismatches)


class BautinFoldCheck(PropertyCheck):
    """Numerically detected fold against mu* = -2 omega sigma^2 / (9 pi sigma_2)."""

    name = "Bautin fold"
    severity = CheckSeverity.MEDIUM
    tolerance = 0.2

    def __init__(self, *args, points: int = 15, config: Optional[Config] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.points = points
        self.config = config

    def check(self) -> CheckResult:
        config = self.config or get_config()
        details = {}
        passed = True
        for delta in (0.05, 0.1):
            q = NonsmoothQuadCoeffs(a11=1.0 + 0.5 * delta, a12=-2.0, b11=1.0)
            system = PlanarSystem(quad=q)
            predicted = bautin_fold(pc.sigma_hash(q), pc.sigma_2(q), system.omega)
            r_star = fold_radius(*pc.gamma23_planar(system))
            r_grid = np.linspace(0.2 * r_star, 3.0 * r_star, self.points)
            fold = detect_fold(system, r_grid, (-0.05, 0.05), config)
            if fold is None:
                details[f"delta={delta}"] = {"predicted": predicted, "found": None}
                passed = False
                continue
            err = abs(fold.mu - predicted) / abs(predicted)
            details[f"delta={delta}"] = {"predicted": predicted, "found": fold.mu, "rel_err": err}
            passed = passed and err <= self.tolerance
        return self.result(passed, "fold location", **details)


def full_suite(seed: int = 0, config: Optional[Config] = None, strict_mode: bool = True) -> CheckSuite:
    """Every property check at its default sample counts."""
    return CheckSuite(
        [
            ClosedFormQuadratureCheck(seed=seed),
            BranchSlopeCheck(seed=seed, config=config),
            SecondOrderScalingCheck(seed=seed, config=config),
            AverageIdentityCheck(seed=seed),
            TransverseSlavingCheck(seed=seed, config=config),
            TwoBranchCheck(seed=seed, config=config),
            GeneralLinearCheck(seed=seed, config=config),
            SmootheningCheck(seed=seed),
            ShimmyCheck(seed=seed, config=config),
            BautinFoldCheck(seed=seed, config=config),
        ],
        strict_mode=strict_mode,
    )


def quick_suite(seed: int = 0, config: Optional[Config] = None, strict_mode: bool = True) -> CheckSuite:
    """The same checks with reduced sample counts."""
    return CheckSuite(
        [
            ClosedFormQuadratureCheck(seed=seed, samples=50),
            BranchSlopeCheck(seed=seed, config=config),
            SecondOrderScalingCheck(seed=seed, config=config),
            AverageIdentityCheck(seed=seed),
            TransverseSlavingCheck(seed=seed, config=config),
            TwoBranchCheck(seed=seed, config=config),
            GeneralLinearCheck(seed=seed, samples=20, dynamic_samples=4, config=config),
            SmootheningCheck(seed=seed),
            ShimmyCheck(seed=seed, samples=3, config=config),
            BautinFoldCheck(seed=seed, config=config),
        ],
        strict_mode=strict_mode,
    )
