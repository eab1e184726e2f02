"""Registry of invariant checks, grouped into suites.

Every check function of the numerical modules has to be exercised by at
least one registered invariant; :func:`build_manifest` refuses to build
otherwise.
"""

import inspect
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import beltrami, bloch, conformal, dimension, extremal, levelsets, transforms, variance
from .config import ExperimentConfig
from .errors import ConfigError, DiskbenchError
from .models import CheckResult, PowerSeries, RadiiLadder
from .symbols import ConstantSymbol, MonomialSymbol, symbol_corpus

logger = logging.getLogger(__name__)

CHECK_MODULES = (transforms, bloch, variance, extremal, levelsets, conformal, beltrami, dimension)
#: Checks whose names do not end in ``_check``.
EXTRA_CHECKS = ("green_energy_inequality", "elementary_moment_inequality")
# desymmetrize loses about 1/(2 sqrt(1 - k^2)) ulps near k = 1; the 1e-14 round trip holds up to here.
SYMMETRIZATION_MAX = 0.99

InvariantFunc = Callable[[ExperimentConfig], List[CheckResult]]


@dataclass
class Invariant:
    suite: str
    name: str
    reference: str
    func: InvariantFunc
    uses: Tuple[str, ...] = ()


@dataclass
class SuiteReport:
    suite: str
    results: List[Tuple[Invariant, CheckResult]] = field(default_factory=list)

    @property
    def failed(self) -> List[Tuple[Invariant, CheckResult]]:
        return [(inv, res) for inv, res in self.results if not res.passed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_records(self) -> List[Dict]:
        records = []
        for inv, res in self.results:
            record = res.to_record()
            record["invariant"] = inv.name
            record["suite"] = inv.suite
            records.append(record)
        return records


REGISTRY: Dict[str, Invariant] = {}


def invariant(suite: str, name: str, reference: str, uses: Tuple[str, ...] = ()):
    """Register a function returning a list of CheckResult as an invariant."""

    def decorator(func: InvariantFunc) -> InvariantFunc:
        key = f"{suite}.{func.__name__}"
        if key in REGISTRY:
            raise ConfigError(f"duplicate invariant {key}")
        REGISTRY[key] = Invariant(suite, name, reference, func, tuple(uses))
        return func

    return decorator


def suites() -> List[str]:
    return sorted({inv.suite for inv in REGISTRY.values()})


def _rng(config: ExperimentConfig, offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(config.seed + offset)


def _disk_points(rng: np.random.Generator, count: int, rmax: float) -> np.ndarray:
    r = rmax * np.sqrt(rng.uniform(0.0, 1.0, count))
    return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, count))


def _bounded_a(config: ExperimentConfig) -> List[float]:
    return [a for a in config.a_grid if 0 < a < 1]


# transforms

@invariant("transforms", "closed-form projection", "projection of the extremal symbol")
def closed_form_projection(config: ExperimentConfig) -> List[CheckResult]:
    z = _disk_points(_rng(config), 100, 0.99)
    series = transforms.bergman_project(extremal.ExtremalSymbol(), J=4096).series
    err = np.abs(series(z) - extremal.mu0_projection(z)) / np.abs(extremal.mu0_projection(z))
    worst = float(err.max())
    return [CheckResult("closed-form projection", "series against the closed form",
                        worst, 1e-8, worst <= 1e-8, "100 points, |z| <= 0.99")]


@invariant("transforms", "pointwise projection bound", "growth of P mu at a point",
           uses=("pointwise_bound_check", "bloch_image_check"))
def projection_bounds(config: ExperimentConfig) -> List[CheckResult]:
    z = _disk_points(_rng(config), 200, 0.999)
    results = [transforms.pointwise_bound_check(mu, z) for mu in symbol_corpus(config.seed)]
    for mu in (ConstantSymbol(1.0, name="one"), extremal.ExtremalSymbol(), MonomialSymbol(0, 1)):
        results.append(transforms.bloch_image_check(mu))
    return results


@invariant("transforms", "pairing identities", "dilations and boundary pairings",
           uses=("dilate_symmetry_check", "circle_disk_identity_check", "mobius_invariance_check"))
def pairing_identities(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 1)

    def poly(degree: int) -> PowerSeries:
        return PowerSeries(rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))

    f, g, p = poly(6), poly(5), poly(4)
    dp = p.derivative()
    results = [
        transforms.dilate_symmetry_check(f, g, 0.7),
        transforms.circle_disk_identity_check(
            g, lambda z: np.real(p(z)), lambda z: 0.5 * dp(z), 0.8, degree=6),
        transforms.mobius_invariance_check(bloch.random_bloch_polynomial(rng, 8), 0.3 + 0.2j),
    ]
    return results


# bloch

@invariant("bloch", "Bloch space estimates", "growth, quotient and decomposition bounds",
           uses=("constant5_check", "growth_bound_check", "quotient_bound_check",
                 "decomposition_check", "derivative_seminorm_check"))
def bloch_estimates(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 2)
    results = [bloch.constant5_check(np.linspace(0.0, 0.999, 25))]
    for _ in range(3):
        g = bloch.random_bloch_polynomial(rng, 16)
        results.append(bloch.growth_bound_check(g, [0.5, 0.9, 0.99, 0.999], seminorm=1.0))
        results.append(bloch.quotient_bound_check(g))
        results.append(bloch.decomposition_check(g))
        results.append(bloch.derivative_seminorm_check(g))
    return results


# main theorem

@invariant("main-theorem", "uniform tail integral", "tail integral bounded by 10(1-a)^(-3/2)",
           uses=("main_theorem_check",))
def main_theorem(config: ExperimentConfig) -> List[CheckResult]:
    ladder = config.radii_ladder()
    a_grid = _bounded_a(config)
    results = []
    for mu in symbol_corpus(config.seed):
        g = transforms.projection_function(mu)
        results.append(variance.main_theorem_check(g, a_grid, ladder, name=mu.name))
    return results


# variance

@invariant("variance", "Makarov finite-radius bounds", "variance ratio and exponential integral",
           uses=("makarov_check",))
def makarov(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 3)
    results = []
    for _ in range(50):
        g = bloch.random_bloch_polynomial(rng, 24)
        for r in (0.99, 0.999):
            results.extend(variance.makarov_check(g, r))
    return results


@invariant("variance", "modulus bounds", "pointwise splitting and moment bounds",
           uses=("marshall_bound_check", "betterest_bound_check", "moment_bound_check", "subadditivity_check"))
def modulus_bounds(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 4)
    results = []
    polys = [bloch.random_bloch_polynomial(rng, 12) for _ in range(20)]
    worst: Optional[CheckResult] = None
    failures, count = [], 0
    for g in polys:
        for _ in range(500):
            sigma = rng.uniform(0.5, 2.0)
            t = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            r = 1.0 - 10.0 ** rng.uniform(-3, -0.5)
            res = variance.marshall_bound_check(g, sigma, t, r, n=1024)
            count += 1
            if not res.passed:
                failures.append(res)
            elif worst is None or res.lhs / res.rhs > worst.lhs / worst.rhs:
                worst = res
    results.extend(failures)
    if worst is not None:
        worst.detail = f"tightest of {count} samples"
        results.append(worst)
    mu0 = extremal.mu0_function()
    for a, t, r in ((0.5, 0.5, 0.9), (0.5, 2.0, 0.99), (0.9, 1.0 + 1.0j, 0.999)):
        results.append(variance.betterest_bound_check(mu0, a, t, r))
    for q in (1.0, 2.0, 4.0):
        results.append(variance.moment_bound_check(mu0, q, 0.9))
    g_values = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    h_values = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    results.append(variance.subadditivity_check(g_values, h_values, 0.5))
    return results


@invariant("variance", "exponential type spectrum", "regression of the spectrum against its envelope")
def spectrum(config: ExperimentConfig) -> List[CheckResult]:
    ladder = RadiiLadder.dyadic(4, 20)
    results = []
    for g, tol in ((variance.log_pole_function(), 0.02), (extremal.mu0_exponent(), 0.05)):
        est = variance.exp_type_spectrum(g, 2.0, ladder)
        envelope = variance.spectrum_envelope(2.0) + 0.05
        ok = abs(est.beta_hat - 1.0) <= tol and est.beta_hat <= envelope
        results.append(CheckResult("exponential type spectrum", "slope at t = 2",
                                   est.beta_hat, 1.0, ok, f"{g.name} rms={est.fit_residual:.3g}"))
    return results


# extremal

@invariant("extremal", "sharpness of the extremal symbol", "lower bound and unbounded growth beyond a = 1",
           uses=("lower_bound_check", "exponential_identity_check", "near_maximal_growth_check"))
def extremal_sharpness(config: ExperimentConfig) -> List[CheckResult]:
    ladder = config.radii_ladder()
    results = []
    for a in (1.5, 2.0, 4.0):
        results.extend(extremal.lower_bound_check(a, float(r)) for r in ladder)
        results.append(extremal.ladder_growth(a, ladder))
    results.append(extremal.exponential_identity_check(_disk_points(_rng(config), 100, 0.99)))
    results.append(extremal.near_maximal_growth_check(np.linspace(0.01, 0.999, 200)))
    return results


# level sets

@invariant("levelsets", "Green identity and energy", "Green formula and the energy inequality",
           uses=("green_identity_check", "green_energy_inequality"))
def green(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 5)
    results = []
    for _ in range(10):
        coeffs = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        results.append(levelsets.green_identity_check(levelsets.PolynomialField(coeffs), tol=1e-8))
    for i in range(10):
        c = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2)
        c *= 0.45 / np.sum(np.abs(c))
        h = levelsets.PoissonExtension([1.0, c[0], c[1]], name=f"poisson{i}")
        results.extend(levelsets.green_energy_inequality(h, q) for q in (1.25, 1.5, 2.0))
    return results


@invariant("levelsets", "entropy bounds", "gradient norms against anentropy",
           uses=("anentropy_bound_check", "hardy_entropy_bound_check"))
def entropy(config: ExperimentConfig) -> List[CheckResult]:
    family = [levelsets.ArcIndicator(0.0, 2.0 * math.pi * ell) for ell in (0.05, 0.1, 0.25, 0.5, 0.75)]
    family.append(levelsets.cosine_density())
    results = []
    for h in family:
        for r in (0.5, 0.9, 0.99, 0.999):
            results.append(levelsets.anentropy_bound_check(h, r))
    results.append(levelsets.hardy_entropy_bound_check(levelsets.cosine_density(), 1.5, 0.9))
    return results


@invariant("levelsets", "level sets of the extremal projection", "weak-type and polygon bounds",
           uses=("level_set_check", "weak_set_check", "polygon_set_check", "polygon_containment_check",
                 "ibp_identity_check", "carleman_check", "elementary_moment_inequality"))
def level_sets(config: ExperimentConfig) -> List[CheckResult]:
    rng = _rng(config, 6)
    g = extremal.mu0_function()
    results = []
    for r in (0.9, 0.99, 0.999):
        L = math.sqrt(-math.log1p(-r * r))
        for eta in (0.5 * L, L, 2.0 * L):
            report = levelsets.level_set_check(g, r, eta)
            results.append(CheckResult("level set", "s-length of a level set", report.measured_length,
                                       report.bound, report.holds, f"r={r} eta={eta:.4g} N={report.n_sides}"))
            results.append(levelsets.weak_set_check(g, r, eta))
            results.append(levelsets.polygon_set_check(g, r, eta, report.n_sides))
        results.append(levelsets.ibp_identity_check(g, 0.5, r))
    w = 3.0 * (rng.standard_normal(2000) + 1j * rng.standard_normal(2000))
    results.extend(levelsets.polygon_containment_check(w, 1.0, N) for N in (3, 6, 12))
    for a in np.linspace(0.05, 0.95, 19):
        N, bound = levelsets.strong_bound_N(float(a))
        results.append(CheckResult("strong bound", "assembled polygon bound", bound,
                                   variance.main_bound(float(a)), N > 5 and bound <= variance.main_bound(float(a)),
                                   f"a={a:.2f} N={N}"))
    results.append(levelsets.elementary_moment_inequality(rng.uniform(0, 10, 500), rng.uniform(0, 20, 500)))
    f = PowerSeries(rng.standard_normal(6) + 1j * rng.standard_normal(6))
    results.extend(levelsets.carleman_check(f, p) for p in (0.5, 1.0, 2.0))
    return results


# conformal

@invariant("conformal", "distortion in class S", "distortion bounds for univalent maps",
           uses=("koebe_bieberbach_check", "pointwise_distortion_check", "reconstruction_check",
                 "nu_phi_bound_check"))
def distortion(config: ExperimentConfig) -> List[CheckResult]:
    results = []
    for phi in conformal.schlicht_corpus(config.seed):
        results.append(conformal.koebe_bieberbach_check(phi))
        results.append(conformal.pointwise_distortion_check(phi))
        results.append(conformal.nu_phi_bound_check(phi))
    results.append(conformal.reconstruction_check(conformal.koebe(), J=64))
    return results


def _zeta_grid(rmin: float, rmax: float = 10.0, radii: int = 8, angles: int = 16) -> np.ndarray:
    rs = np.geomspace(rmin, rmax, radii)
    theta = 2.0 * np.pi * (np.arange(angles) + 0.5) / angles
    return (rs[:, None] * np.exp(1j * theta)[None, :]).ravel()


@invariant("conformal", "Goluzin inequality", "sharp distortion bound in Sigma",
           uses=("goluzin_check", "elliptic_ratio_check"))
def goluzin(config: ExperimentConfig) -> List[CheckResult]:
    results = [conformal.elliptic_ratio_check(np.linspace(0.01, 0.99, 99))]
    maps = [conformal.JoukowskiMap()] + [conformal.psi_from_phi(phi) for phi in conformal.schlicht_corpus(config.seed)]
    for psi in maps:
        results.extend(conformal.goluzin_check(psi, zeta) for zeta in _zeta_grid(1.01))
    return results


# beltrami

@invariant("beltrami", "closed-form motion of the disk indicator", "terminating Neumann series")
def disk_motion(config: ExperimentConfig) -> List[CheckResult]:
    one = ConstantSymbol(1.0, name="one")
    series = beltrami.NeumannSeries(one, terms=4)
    zeta = _zeta_grid(1.05, 4.0)
    results = []
    for k in (0.1, 0.5, 0.9):
        value = beltrami.neumann_derivative(series, k, zeta)
        err = float(np.max(np.abs(value - (1.0 - k / zeta ** 2))))
        results.append(CheckResult("disk motion derivative", "1 - lambda/zeta^2", err, 1e-12, err <= 1e-12, f"k={k}"))
    motion = beltrami.motion_coefficients(series, config.R, 3)
    err = max(float(np.max(np.abs(motion.coefficient(j).values + 1.0 / (j * motion.coefficient(j).points ** (2 * j)))))
              for j in range(1, 4))
    results.append(CheckResult("disk motion coefficients", "-1/(j zeta^(2j))", err, 1e-12, err <= 1e-12))
    z = _disk_points(_rng(config), 50, 0.95)
    lam = 0.5
    err = float(np.max(np.abs(beltrami.G_lambda(series, lam, z) - np.log1p(-lam * z * z) / lam)))
    results.append(CheckResult("disk motion G", "log(1 - lambda z^2)/lambda", err, 1e-12, err <= 1e-12))
    return results


@invariant("beltrami", "motion coefficients", "first two coefficients in closed form",
           uses=("goluzin_derived_bounds_check",))
def motion(config: ExperimentConfig) -> List[CheckResult]:
    symbols = [ConstantSymbol(1.0, name="one"), ConstantSymbol(0.5, name="const:0.5"),
               extremal.ExtremalSymbol(), extremal.ExtremalSymbol().reflect(), MonomialSymbol(0, 1)]
    results = []
    for mu in symbols:
        series = beltrami.NeumannSeries(mu, terms=8)
        m = beltrami.motion_coefficients(series, config.R, 2)
        H1, H2 = beltrami.closed_form_coefficients(series, config.R, m.coefficient(1).n)
        err = max(float(np.max(np.abs(m.coefficient(1).values - H1.values))),
                  float(np.max(np.abs(m.coefficient(2).values - H2.values))))
        results.append(CheckResult("motion coefficients", "contour extraction against closed forms",
                                   err, 1e-8, err <= 1e-8, mu.name))
        for lam in (0.1, 0.5):
            results.append(beltrami.goluzin_derived_bounds_check(series, lam, J=8))
    return results


@invariant("beltrami", "averaged motion bounds", "Plancherel averaging and the Beurling form",
           uses=("plancherel_average_check", "beurling_form_check", "bk_splice_check"))
def averaged(config: ExperimentConfig) -> List[CheckResult]:
    results = []
    for mu in (ConstantSymbol(0.0, name="zero"), ConstantSymbol(1.0, name="one"), extremal.ExtremalSymbol().reflect()):
        m = beltrami.motion_coefficients(mu, config.R, 3)
        results.append(beltrami.plancherel_average_check(m, 0.5))
        results.append(beltrami.plancherel_average_check(m, 0.5, rho=0.9))
    for mu in symbol_corpus(config.seed, n_phase=2):
        series = beltrami.NeumannSeries(mu, terms=1)
        for R in (1.5, 1.1, 1.05):
            results.extend(beltrami.beurling_form_check(series, a, R) for a in (0.1, 0.5, 0.9))
    results.extend(beltrami.bk_splice_check(k) for k in (0.05, 0.1, 0.2, 0.5))
    return results


@invariant("beltrami", "Goluzin inequality for motions", "sharp distortion bound for motion-generated maps")
def motion_goluzin(config: ExperimentConfig) -> List[CheckResult]:
    results = []
    for mu in (ConstantSymbol(1.0, name="one"), extremal.ExtremalSymbol(), MonomialSymbol(0, 1),
               ConstantSymbol(0.5, name="const:0.5"), extremal.ExtremalSymbol().reflect()):
        series = beltrami.NeumannSeries(mu, terms=8)
        for lam in (0.2, 0.4):
            psi = beltrami.MotionMap(series, lam, J=8)
            results.extend(conformal.goluzin_check(psi, zeta) for zeta in _zeta_grid(1.01))
    return results


# dimension

@invariant("dimension", "dimension bound", "root of F and the asymptotics of the bound",
           uses=("root_check", "gap_ratio_check", "symmetrization_check"))
def dimension_bound(config: ExperimentConfig) -> List[CheckResult]:
    return [
        dimension.root_check(np.linspace(0.001, 0.2, 200)),
        dimension.gap_ratio_check(np.linspace(0.0005, 0.05, 100)),
        dimension.symmetrization_check(np.linspace(0.0, SYMMETRIZATION_MAX, 991)),
    ]


def run_suite(suite: str, config: ExperimentConfig) -> SuiteReport:
    """Run every invariant of ``suite`` (or of all suites for "all").

    A check that raises is recorded as a failure carrying the message.

    Raises:
        ConfigError: If the suite is unknown
    """
    if suite != "all" and suite not in suites():
        raise ConfigError(f"Unknown suite: {suite}. Choose from: all, {', '.join(suites())}")
    report = SuiteReport(suite)
    for key, inv in REGISTRY.items():
        if suite != "all" and inv.suite != suite:
            continue
        logger.debug("running %s", key)
        try:
            results = inv.func(config)
        except DiskbenchError as e:
            logger.warning("invariant %s raised: %s", key, e)
            results = [CheckResult(inv.name, inv.reference, math.nan, math.nan, False, f"error: {e}")]
        for res in results:
            report.results.append((inv, res))
            if not res.passed:
                logger.warning("%s failed: %s (%s)", inv.name, res.reference, res.detail)
    return report


def check_functions() -> List[str]:
    names = set(EXTRA_CHECKS)
    for module in CHECK_MODULES:
        for name, obj in inspect.getmembers(module, inspect.isfunction):
            if obj.__module__ == module.__name__ and name.endswith("_check") and not name.startswith("_"):
                names.add(name)
    return sorted(names)


def build_manifest() -> List[Dict[str, str]]:
    """One row per registered invariant.

    Raises:
        ConfigError: If a check function is used by no invariant, or an
            invariant names a check that does not exist
    """
    available = set(check_functions())
    used = set()
    rows = []
    for key, inv in REGISTRY.items():
        missing = set(inv.uses) - available
        if missing:
            raise ConfigError(f"invariant {key} uses unknown checks: {', '.join(sorted(missing))}")
        used.update(inv.uses)
        rows.append({"suite": inv.suite, "invariant": inv.name, "reference": inv.reference,
                     "checks": " ".join(inv.uses)})
    unreferenced = available - used
    if unreferenced:
        raise ConfigError(f"unreferenced invariant checks: {', '.join(sorted(unreferenced))}")
    return rows
