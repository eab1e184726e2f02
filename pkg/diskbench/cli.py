"""Command line interface for diskbench."""
import argparse
import logging
import sys
from typing import Any, Dict, Iterator, List, Optional

import numpy as np
from rich.logging import RichHandler

from . import dimension, transforms, variance, verify
from .beltrami import motion_coefficients, plancherel_average_check
from .config import FORMATS, ExperimentConfig, parse_complex_list, parse_float_grid, parse_ladder
from .export import generate_html_report, write_plot_data, write_rows
from .models import log_normalizer
from .symbols import get_symbol

logger = logging.getLogger("diskbench")

#: Neumann terms kept by the motion command; --truncation only lowers it.
MOTION_TERMS = 8

COLUMNS = {
    "verify": ["suite", "invariant", "name", "reference", "lhs", "rhs", "passed", "detail"],
    "project": ["z", "value", "closed_form"],
    "sweep": ["a", "r", "value", "flagged"],
    "spectrum": ["t", "beta_hat", "fit_residual", "n_used", "n_dropped", "envelope"],
    "atvar": ["symbol", "avar", "atvar"],
    "dimension": ["k_prime", "k", "t_k", "F_at_root", "smirnov", "gap"],
    "motion": ["j", "R", "sup", "mean_square"],
    "manifest": ["suite", "invariant", "reference", "checks"],
}


def setup_logging(verbose: bool = False):
    handler = RichHandler(show_path=False, rich_tracebacks=verbose)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON experiment configuration')
    common.add_argument('--symbol', help='Symbol: zero, one, const:c, mu0, mu0*, conj, monomial:m,k, radial:p, phase:seed or file:path')
    common.add_argument('--a-grid', help='Tail-integral parameters, a,b,c or start:stop:count')
    common.add_argument('--t', help='Comma separated complex values of t')
    common.add_argument('--tau-grid', help='Candidate tau values for the tail variance')
    common.add_argument('--ladder', help='Dyadic ladder exponents m_min:m_max')
    common.add_argument('--truncation', type=int, help='Truncation degree J')
    common.add_argument('--format', '-f', choices=FORMATS, help='Output format')
    common.add_argument('--seed', type=int, help='Seed for random corpora')
    common.add_argument('--out', '-o', help='Output file (stdout if omitted)')
    common.add_argument('--plot-data', help='Write two-column plot files with this prefix')
    common.add_argument('--verbose', '-v', action='store_true', help='Enable verbose output')

    parser = argparse.ArgumentParser(description='Numerical workbench for operators on the unit disk')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify', parents=[common], help='Run invariant suites')
    p.add_argument('--suite', help='Suite name or "all"')
    p.add_argument('--report', help='Write an HTML report to this path')
    p.add_argument('--template', default='report', help='Report template name')

    p = sub.add_parser('project', parents=[common], help='Bergman projection at sample points')
    p.add_argument('--points', type=int, help='Number of sample points')

    sub.add_parser('sweep', parents=[common], help='Tail integrals over a radii ladder')
    sub.add_parser('spectrum', parents=[common], help='Exponential type spectrum')
    sub.add_parser('atvar', parents=[common], help='Asymptotic variance and tail variance')

    p = sub.add_parser('dimension', parents=[common], help='Dimension bound for quasicircles')
    p.add_argument('--kprime', help="Comma separated values of k'")

    p = sub.add_parser('motion', parents=[common], help='Coefficients of a holomorphic motion')
    p.add_argument('--R', type=float, help='Circle radius R > 1')
    p.add_argument('--lam', help='Motion parameter for the Plancherel check')

    sub.add_parser('manifest', parents=[common], help='List registered invariants')
    return parser.parse_args(args)


def build_config(parsed: argparse.Namespace) -> ExperimentConfig:
    """ExperimentConfig from --config, overridden by explicit flags."""
    data: Dict[str, Any] = {}
    if parsed.config:
        data = ExperimentConfig.from_file(parsed.config).to_dict()
    data["command"] = parsed.command
    if parsed.symbol is not None:
        data["symbol"] = parsed.symbol
    if parsed.a_grid is not None:
        data["a_grid"] = parse_float_grid(parsed.a_grid)
    if parsed.t is not None:
        data["t"] = parse_complex_list(parsed.t)
    if parsed.tau_grid is not None:
        data["tau_grid"] = parse_float_grid(parsed.tau_grid)
    if parsed.ladder is not None:
        data["ladder"] = parse_ladder(parsed.ladder)
    for name in ("truncation", "format", "seed", "out", "plot_data"):
        value = getattr(parsed, name)
        if value is not None:
            data[name] = value
    extra = {
        "suite": getattr(parsed, "suite", None),
        "report": getattr(parsed, "report", None),
        "points": getattr(parsed, "points", None),
        "R": getattr(parsed, "R", None),
    }
    data.update({k: v for k, v in extra.items() if v is not None})
    if getattr(parsed, "kprime", None) is not None:
        data["k_prime"] = parse_float_grid(parsed.kprime)
    if getattr(parsed, "lam", None) is not None:
        data["lam"] = parse_complex_list(parsed.lam)[0]
    return ExperimentConfig.from_dict(data)


def _project_rows(config: ExperimentConfig) -> Iterator[Dict[str, Any]]:
    mu = get_symbol(config.symbol)
    series = transforms.bergman_project(mu, config.truncation).series
    closed = mu.projection()
    n = config.points
    k = np.arange(n)
    z = 0.99 * (k + 1) / n * np.exp(2j * np.pi * k / n)
    values = series(z)
    reference = closed(z) if closed is not None else [None] * n
    for zi, vi, ci in zip(z, values, reference):
        yield {"z": complex(zi), "value": complex(vi), "closed_form": None if ci is None else complex(ci)}


def _sweep_rows(config: ExperimentConfig) -> List[Dict[str, Any]]:
    g = transforms.projection_function(get_symbol(config.symbol), config.truncation)
    table = variance.tail_integral_sweep(g, config.a_grid, config.radii_ladder())
    rows = table.to_records()
    if config.plot_data:
        for a in config.a_grid:
            subset = [row for row in rows if row["a"] == a]
            write_plot_data(f"{config.plot_data}_a{a:g}.dat",
                            [log_normalizer(row["r"]) for row in subset], [row["value"] for row in subset])
    return rows


def _spectrum_rows(config: ExperimentConfig) -> Iterator[Dict[str, Any]]:
    g = transforms.projection_function(get_symbol(config.symbol), config.truncation)
    ladder = config.radii_ladder()
    for t in config.t:
        est = variance.exp_type_spectrum(g, t, ladder)
        yield {"t": t, "beta_hat": est.beta_hat, "fit_residual": est.fit_residual,
               "n_used": est.n_used, "n_dropped": est.n_dropped, "envelope": variance.spectrum_envelope(t)}


def _atvar_rows(config: ExperimentConfig) -> List[Dict[str, Any]]:
    g = transforms.projection_function(get_symbol(config.symbol), config.truncation)
    ladder = config.radii_ladder()
    return [{"symbol": config.symbol, "avar": variance.avar_estimate(g, ladder),
             "atvar": variance.atvar_estimate(g, ladder, config.tau_grid)}]


def _dimension_rows(config: ExperimentConfig) -> Iterator[Dict[str, Any]]:
    for kp in config.k_prime:
        report = dimension.dimension_report(kp)
        yield {"k_prime": kp, "k": report.k, "t_k": report.t_k, "F_at_root": report.F_at_root,
               "smirnov": dimension.smirnov_bound(kp), "gap": report.asymptotic_gap}


def _motion_rows(config: ExperimentConfig) -> List[Dict[str, Any]]:
    mu = get_symbol(config.symbol)
    motion = motion_coefficients(mu, config.R, min(config.truncation, MOTION_TERMS))
    rows = []
    for j in range(1, motion.J + 1):
        values = motion.coefficient(j).values
        rows.append({"j": j, "R": config.R, "sup": float(np.max(np.abs(values))),
                     "mean_square": float(np.mean(np.abs(values) ** 2))})
    check = plancherel_average_check(motion, 0.5, rho=abs(config.lam) or 1.0)
    logger.debug("Plancherel averaging: lhs=%.6g rhs=%.6g passed=%s", check.lhs, check.rhs, check.passed)
    return rows


def _emit(config: ExperimentConfig, rows, columns: List[str]) -> int:
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as f:
            count = write_rows(rows, columns, f, config.format)
        print(f"{count} rows saved to: {config.out}")
    else:
        count = write_rows(rows, columns, sys.stdout, config.format)
    return count


def run(config: ExperimentConfig, template: str = "report") -> int:
    """Execute one command; returns the exit code."""
    command = config.command
    if command == "verify":
        report = verify.run_suite(config.suite, config)
        _emit(config, report.to_records(), COLUMNS["verify"])
        if config.report:
            with open(config.report, "w", encoding="utf-8") as f:
                f.write(generate_html_report(report, template))
            print(f"Report saved to: {config.report}")
        if not report.passed:
            for inv, res in report.failed:
                print(f"Violated: {inv.suite}/{inv.name}: {res.reference} ({res.detail})", file=sys.stderr)
            return 2
        return 0
    producers = {
        "project": _project_rows,
        "sweep": _sweep_rows,
        "spectrum": _spectrum_rows,
        "atvar": _atvar_rows,
        "dimension": _dimension_rows,
        "motion": _motion_rows,
        "manifest": lambda c: verify.build_manifest(),
    }
    _emit(config, producers[command](config), COLUMNS[command])
    return 0


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI.

    Args:
        args: Command line arguments (uses sys.argv if None)

    Returns:
        Exit code (0 for success, 1 for errors, 2 for violated invariants)
    """
    parsed = parse_args(args)
    setup_logging(parsed.verbose)
    try:
        config = build_config(parsed)
        if parsed.verbose:
            logger.debug("configuration: %s", config.to_dict())
        return run(config, getattr(parsed, "template", "report"))
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if parsed.verbose:
            raise
        return 1


if __name__ == '__main__':
    sys.exit(main())
