"""
Main CLI entry point for nonsmooth-hopf.

Artifacts (JSON, CSV) go to --output or standard output; human-readable
progress goes to standard error.
"""

import sys
from pathlib import Path

import click
from rich.console import Console
from rich.panel import Panel

from .. import __version__
from ..utils import (
    NonsmoothHopfError,
    get_config,
    load_config,
    set_config,
    setup_logging,
)
from .io import apply_tolerances, cli_errors, emit_error, mu_grid

console = Console()


def input_option(func):
    return click.option(
        "--input", "-i", "input_path", required=True, type=click.Path(dir_okay=False),
        help="System descriptor (JSON)",
    )(func)


def output_option(func):
    return click.option(
        "--output", "-o", default="-", show_default=True, help="Artifact path; '-' writes to standard output",
    )(func)


def grid_options(func):
    for option in reversed([
        click.option("--mu-min", type=float, default=-0.01, show_default=True, help="Smallest parameter value"),
        click.option("--mu-max", type=float, default=0.01, show_default=True, help="Largest parameter value"),
        click.option("--mu-count", type=int, default=20, show_default=True, help="Grid size (0 is dropped)"),
        click.option("--rtol", type=float, default=None, help="Integrator relative tolerance"),
        click.option("--atol", type=float, default=None, help="Integrator absolute tolerance"),
    ]):
        func = option(func)
    return func


@click.group()
@click.option("--debug", is_flag=True, help="Enable debug mode")
@click.option("--config", type=click.Path(exists=True), help="Path to config file")
@click.pass_context
def cli(ctx, debug, config):
    """
    nonsmooth-hopf: Hopf bifurcations with second-order modulus terms

    Generalized Lyapunov coefficients, branch predictions and numerically
    continued periodic orbits.

    \b
    Examples:
        nshopf coeffs -i system.json
        nshopf branch -i system.json --mu-min -0.01 --mu-max -0.001 -o branch.csv
        nshopf shimmy -i wheel.json --simulate
        nshopf verify --quick
    """
    ctx.ensure_object(dict)

    try:
        cfg = load_config(Path(config)) if config else get_config()
    except NonsmoothHopfError as e:
        sys.exit(emit_error(e))

    if debug:
        cfg.debug = True
        cfg.log_level = "DEBUG"

    set_config(cfg)

    logger = setup_logging(
        level=cfg.log_level,
        log_file=cfg.log_file,
        enable_rich=not cfg.debug,
    )

    ctx.obj["config"] = cfg
    ctx.obj["logger"] = logger


@cli.command()
@input_option
@output_option
@click.pass_context
@cli_errors
def coeffs(ctx, input_path, output):
    """
    Compute the coefficient report of a system.

    \b
    Examples:
        nshopf coeffs -i subcritical.json
        nshopf coeffs -i system3d.json -o report.json
    """
    from .commands.coeffs import run_coeffs

    run_coeffs(input_path, output, ctx.obj["config"], ctx.obj["logger"])


@cli.command()
@input_option
@output_option
@click.pass_context
@cli_errors
def averaged(ctx, input_path, output):
    """Compute the averaged radial normal form of a planar system."""
    from .commands.coeffs import run_averaged

    run_averaged(input_path, output, ctx.obj["config"], ctx.obj["logger"])


@cli.command()
@input_option
@output_option
@grid_options
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.pass_context
@cli_errors
def branch(ctx, input_path, output, mu_min, mu_max, mu_count, rtol, atol, fmt):
    """
    Continue the branch of periodic orbits over a parameter grid.

    With --format csv and a file output, the prediction summary is written
    next to it as <name>.prediction.json.

    \b
    Examples:
        nshopf branch -i subcritical.json --mu-min -0.01 --mu-max -0.001 --mu-count 10
    """
    from .commands.branch import run_branch

    config = apply_tolerances(ctx.obj["config"], rtol, atol)
    grid = mu_grid(mu_min, mu_max, mu_count)
    run_branch(input_path, output, grid, fmt, config, ctx.obj["logger"])


@cli.command()
@input_option
@output_option
@grid_options
@click.option("--workers", type=int, default=1, show_default=True, help="Worker processes for the sweep")
@click.pass_context
@cli_errors
def diagram(ctx, input_path, output, mu_min, mu_max, mu_count, rtol, atol, workers):
    """Sweep the parameter and write mu, r0_numeric, r0_predicted, rel_err as CSV."""
    from .commands.branch import run_diagram

    config = apply_tolerances(ctx.obj["config"], rtol, atol)
    grid = mu_grid(mu_min, mu_max, mu_count)
    run_diagram(input_path, output, grid, workers, config, ctx.obj["logger"])


@cli.command()
@input_option
@output_option
@click.option("--simulate", is_flag=True, help="Cross-check the verdict by time-domain simulation")
@click.option("--eps", type=float, default=1e-3, show_default=True, help="Distance from criticality for --simulate")
@click.pass_context
@cli_errors
def shimmy(ctx, input_path, output, simulate, eps):
    """
    Criticality of the shimmying wheel from its seven reduced constants.

    \b
    Examples:
        nshopf shimmy -i wheel.json
        nshopf shimmy -i wheel.json --simulate --eps 1e-3
    """
    from .commands.shimmy import run_shimmy

    run_shimmy(input_path, output, simulate, eps, ctx.obj["config"], ctx.obj["logger"])


@cli.command()
@output_option
@click.option("--seed", type=int, default=None, help="Seed of the randomized checks (default: config seed)")
@click.option("--quick", is_flag=True, help="Reduced sample counts")
@click.option("--lenient", is_flag=True, help="Only CRITICAL failures fail the run")
@click.pass_context
@cli_errors
def verify(ctx, output, seed, quick, lenient):
    """Run the property suite; exits nonzero when a check fails."""
    from .commands.verify import run_verify

    config = ctx.obj["config"]
    run_verify(output, config.seed if seed is None else seed, quick, not lenient, config, ctx.obj["logger"])


@cli.command()
@click.pass_context
def info(ctx):
    """Show the active configuration."""
    config = ctx.obj["config"]

    console.print(Panel.fit(
        f"""[bold]nonsmooth-hopf Configuration[/bold]

[cyan]Quadrature:[/cyan]
  Gauss-Legendre order: {config.quadrature.order}
  Absolute tolerance: {config.quadrature.abs_tol:g}
  Max refinement depth: {config.quadrature.max_depth}

[cyan]Integrator:[/cyan]
  rtol / atol: {config.integrator.rtol:g} / {config.integrator.atol:g}
  Radius cap: {config.integrator.r_max:g}
  Max steps: {config.integrator.max_steps}

[cyan]Orbits:[/cyan]
  Bracket start: {config.orbit.bracket_lo:g}
  Sweep points: {config.orbit.sweep_points}
  Non-isolated tolerance: {config.orbit.nonisolated_tol:g}

[cyan]Acceptance:[/cyan]
  Quadrature / orbit / slope: {config.tolerances.quadrature:g} / {config.tolerances.orbit:g} / {config.tolerances.slope:g}
  Degeneracy / vertical: {config.tolerances.degeneracy:g} / {config.tolerances.vertical:g}

[cyan]Run:[/cyan]
  Seed: {config.seed}
  Log level: {config.log_level}
""",
        title="System Information",
        border_style="cyan",
    ))


@cli.command()
def version():
    """Show version information."""
    console.print(f"[bold cyan]nonsmooth-hopf v{__version__}[/bold cyan]")


def main():
    """Main entry point for the CLI."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        click.echo("\nInterrupted", err=True)
        sys.exit(130)


if __name__ == "__main__":
    main()
