"""Command-line interface for multiport-fama."""

import json
import time
from typing import List, Optional, Sequence

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from multiport_fama import FamaSimulator
from multiport_fama._version import __version__
from multiport_fama.config import ExperimentConfig, load_experiment_config
from multiport_fama.core.channel import trial_streams
from multiport_fama.core.harness import compare_strategies, run_experiment
from multiport_fama.core.output_handler import OutputHandler
from multiport_fama.core.receivers import drop_reports
from multiport_fama.core.verification import run_quick_suite
from multiport_fama.models.experiment import SweepResult
from multiport_fama.utils.exceptions import ConfigurationError, FamaError, OutputExistsError
from multiport_fama.utils.logging import configure_logging

console = Console()

AXIS_LABELS = {"snr_db": "SNR [dB]", "L": "L", "N": "N"}


def _fail(ctx: click.Context, exc: FamaError) -> None:
    """Print the error and exit 2 for input problems, 1 otherwise."""
    code = 2 if isinstance(exc, (ConfigurationError, OutputExistsError)) else 1
    console.print(f"[red]Error:[/red] {escape(str(exc))}")
    ctx.exit(code)


@click.group()
@click.version_option(version=__version__, prog_name="famasim")
@click.option("--verbose", "-v", count=True, help="-v for progress, -vv for solver detail")
def cli(verbose):
    """multiport-fama - fluid-antenna port selection and combining simulator."""
    configure_logging(verbose)


def sweep_options(func):
    """Arguments shared by the sweep commands."""
    decorators = [
        click.argument("config", type=click.Path(dir_okay=False)),
        click.option("--output-dir", "-o", type=click.Path(file_okay=False), default="results",
                     show_default=True, help="Directory for results.csv, plot data and manifest"),
        click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                     help="Override seed, trials, strategies, target_user, snr_db or L"),
        click.option("--workers", "-w", type=click.IntRange(min=1), default=1, show_default=True,
                     help="Parallel worker processes"),
        click.option("--force", is_flag=True, help="Overwrite existing result files"),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def _run_sweep(ctx: click.Context, axis: str, config: str, output_dir: str,
               overrides: Sequence[str], workers: int, force: bool) -> None:
    try:
        settings = load_experiment_config(config, overrides)
        spec = settings.to_spec(axis)
        handler = OutputHandler(output_dir, force=force)
        handler.prepare(axis)
        start = time.perf_counter()
        result = run_experiment(spec, workers=workers)
        wall_time = time.perf_counter() - start
        written = handler.write(result, settings.model_dump(mode="json"), wall_time)
    except FamaError as exc:
        _fail(ctx, exc)
        return
    display_sweep(result)
    console.print(f"\n[green]Wrote[/green] {', '.join(str(p) for p in written)} "
                  f"in {wall_time:.1f} s")


def display_sweep(result: SweepResult) -> None:
    """Mean SE table plus the per-point strategy ranking."""
    table = Table(title=f"Average spectral efficiency [bit/s/Hz] vs {AXIS_LABELS[result.axis]}")
    table.add_column(AXIS_LABELS[result.axis], style="cyan", no_wrap=True)
    strategies = result.strategies()
    for name in strategies:
        table.add_column(name, style="green", justify="right")
    for value in result.values():
        table.add_row(f"{value:g}", *(
            f"{result.cell(value, s).mean_se:.4f} ± {result.cell(value, s).stderr:.4f}"
            for s in strategies
        ))
    console.print(table)

    if len(strategies) < 2:
        return
    ranking = Table(title="Ranking per sweep point")
    ranking.add_column(AXIS_LABELS[result.axis], style="cyan")
    ranking.add_column("Order", style="magenta")
    ranking.add_column("Top gap", style="yellow", justify="right")
    for comparison in compare_strategies(result):
        top = comparison.gaps[0]
        ranking.add_row(
            f"{comparison.sweep_value:g}",
            " > ".join(comparison.order()),
            f"{top.difference:.4f} ({top.difference / top.stderr:.1f} se)" if top.stderr > 0
            else f"{top.difference:.4f}",
        )
    console.print(ranking)


@cli.command("sweep-snr")
@sweep_options
@click.pass_context
def sweep_snr(ctx, config, output_dir, overrides, workers, force):
    """Average SE versus transmit SNR."""
    _run_sweep(ctx, "snr_db", config, output_dir, overrides, workers, force)


@cli.command("sweep-l")
@sweep_options
@click.pass_context
def sweep_l(ctx, config, output_dir, overrides, workers, force):
    """Average SE versus the number of active ports L."""
    _run_sweep(ctx, "L", config, output_dir, overrides, workers, force)


@cli.command("sweep-n")
@sweep_options
@click.pass_context
def sweep_n(ctx, config, output_dir, overrides, workers, force):
    """Average SE versus the number of available ports N at fixed aperture."""
    _run_sweep(ctx, "N", config, output_dir, overrides, workers, force)


def _single_payload(settings: ExperimentConfig, seed: int, trial: int,
                    users: List[int], drops: bool) -> dict:
    system = settings.build_system()
    simulator = FamaSimulator(system, settings.strategies, settings.geport.to_options())
    H = simulator.draw_channels(trial_streams(seed, trial, system.K))
    payload = {"seed": seed, "trial": trial, "system": system.to_dict(), "users": []}
    for k in users:
        pair = simulator.pair(H, k)
        entry = {
            "user": k,
            "designs": [simulator.design_user(H, k, name, pair=pair).to_dict()
                        for name in simulator.strategies],
        }
        if drops and pair.dim >= 2:
            entry["drops"] = [report.to_dict() for report in drop_reports(pair)]
        payload["users"].append(entry)
    return payload


def display_single(payload: dict) -> None:
    """Per-user design tables."""
    console.print(f"\n[bold]Trial {payload['trial']}[/bold] (seed {payload['seed']}), "
                  f"ports are 0-based")
    for entry in payload["users"]:
        table = Table(title=f"User {entry['user']}")
        table.add_column("Strategy", style="cyan", no_wrap=True)
        table.add_column("Ports", style="magenta")
        table.add_column("w", style="white")
        table.add_column("SINR", style="green", justify="right")
        table.add_column("SE", style="yellow", justify="right")
        for design in entry["designs"]:
            weights = ", ".join(f"{re:+.4f}{im:+.4f}j" for re, im in design["w"])
            table.add_row(design["strategy"], str(design["ports"]), weights,
                          f"{design['sinr']:.6g}", f"{design['se']:.4f}")
        console.print(table)
        for design in entry["designs"]:
            if design["removed_ports"]:
                console.print(f"  geport removal order: {design['removed_ports']}")
                trace = ", ".join(f"{x:.4g}" for x in design["loss_trace"])
                console.print(f"  geport loss trace: [{trace}]")
        if "drops" in entry:
            drops = Table(title=f"SINR drop per port, user {entry['user']}")
            drops.add_column("Port", style="cyan")
            drops.add_column("Exact", style="green", justify="right")
            drops.add_column("Lower bound", style="yellow", justify="right")
            for report in entry["drops"]:
                drops.add_row(str(report["port"]), f"{report['exact_drop']:.6g}",
                              f"{report['lower_bound']:.6g}")
            console.print(drops)


@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Config overrides")
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None,
              help="Master seed (defaults to the config seed)")
@click.option("--trial", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--user", type=click.IntRange(min=0), default=None, help="Only show this user")
@click.option("--drops/--no-drops", default=False, help="Print the SINR drop of every port")
@click.option("--output-format", "-f", type=click.Choice(["table", "json"]), default="table",
              show_default=True, help="Output format")
@click.pass_context
def single(ctx, config, overrides, seed, trial, user, drops, output_format):
    """Design every user's receiver for one channel draw."""
    try:
        settings = load_experiment_config(config, overrides)
        seed = settings.seed if seed is None else seed
        K = settings.system.K
        if user is not None and user >= K:
            raise ConfigurationError(f"user {user} out of range [0, {K})", location="--user")
        users = list(range(K)) if user is None else [user]
        payload = _single_payload(settings, seed, trial, users, drops)
    except FamaError as exc:
        _fail(ctx, exc)
        return
    if output_format == "json":
        console.print_json(json.dumps(payload))
    else:
        display_single(payload)


@cli.command()
@click.option("--instances", "-n", type=click.IntRange(min=1), default=20, show_default=True,
              help="Random instances per check")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.pass_context
def verify(ctx, instances, seed):
    """Run the randomized identity, interlacing, drop and optimality checks."""
    try:
        outcomes = run_quick_suite(instances=instances, seed=seed)
    except FamaError as exc:
        _fail(ctx, exc)
        return
    table = Table(title="Verification")
    table.add_column("Check", style="cyan")
    table.add_column("Instances", justify="right")
    table.add_column("Worst error", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Result")
    for outcome in outcomes:
        table.add_row(
            outcome.name,
            str(outcome.instances),
            f"{outcome.worst_error:.3e}",
            f"{outcome.tolerance:.0e}",
            "[green]pass[/green]" if outcome.passed else "[red]FAIL[/red]",
        )
    console.print(table)
    if not all(o.passed for o in outcomes):
        ctx.exit(1)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit status instead of exiting."""
    try:
        rv = cli.main(args=None if argv is None else list(argv), prog_name="famasim",
                      standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    cli()
