"""Command line interface for the certificate generator."""

from __future__ import annotations

import sys as _sys
from pathlib import Path

import click

from .core import batch as run_batch
from .core import generate as run_generate


@click.group()
def main():
    """Numerical Positivstellensatz certificate generation."""


@main.command()
@click.option("--in", "systems_dir", type=click.Path(exists=True, file_okay=False),
              required=True, help="directory of ConstraintSystem JSON files")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--m1", type=int, default=2, show_default=True)
@click.option("--m2", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True,
              help="residual below which a system counts as solved")
def batch(systems_dir, out_dir, m1, m2, tol):
    """Generate certificates for every system in a directory.

    Systems that already have a certificate in the output directory are
    skipped, so successive runs with increasing m2 refine the unsolved set.
    """
    summary = run_batch(systems_dir, out_dir, schedule=[(m1, m2)],
                        solved_tol=tol, log=click.echo)
    click.echo(
        f"solved {len(summary['solved'])}, skipped {len(summary['skipped'])}, "
        f"unsolved {len(summary['unsolved'])}, errors {len(summary['errors'])}"
    )
    if summary["unsolved"]:
        click.echo("unsolved: " + ", ".join(summary["unsolved"]))


@main.command()
@click.option("--system", "system_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--m1", type=int, default=2, show_default=True)
@click.option("--m2", type=int, default=0, show_default=True)
def generate(system_path, out_path, m1, m2):
    """Generate one certificate and print (or write) it."""
    cert = run_generate(Path(system_path), m1=m1, m2=m2)
    text = cert.to_json()
    if out_path:
        Path(out_path).write_text(text)
        click.echo(f"residual {cert.residual:.2e} ({cert.solver_status})")
    else:
        click.echo(text)
    if cert.residual == float("inf"):
        _sys.exit(1)


if __name__ == "__main__":
    main()
