"""``forge run session.txt``: run a session file and report."""

from __future__ import annotations

import sys

import click

from .report import EXIT_INPUT, run_text


@click.group()
def main():
    """Graded syzygy computations driven by session files."""


@main.command()
@click.argument("session", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("--parallel", is_flag=True, help="Run independent tasks in worker processes.")
@click.option("--fail-fast", is_flag=True, help="Stop after the first task that does not pass.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for tasks without their own.")
def run(session, json_out, parallel, fail_fast, seed):
    """Run every task in SESSION."""
    try:
        with click.open_file(session, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        click.echo(f"cannot read {session}: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    report = run_text(text, seed=seed, parallel=parallel, fail_fast=fail_fast)
    click.echo(report.to_text())
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(report.dumps())
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
