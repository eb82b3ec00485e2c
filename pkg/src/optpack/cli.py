"""Command line interface.

Subcommands cover the stages of the classification: orbit enumeration,
certificate verification, interval elimination, the per-dimension pipeline,
and the summary table.  `systems` exports the matched-pair constraint
systems so an external certificate generator can consume them.
"""

from __future__ import annotations

import json
import sys as _sys
from pathlib import Path

import click

from .boxelim import Box, prove_empty
from .orbits import enumerate_reps
from .pipeline import classify as run_classify
from .pipeline import reproduce_table1, system_id
from .psatz import (
    Certificate,
    ConstraintSystem,
    build_subprogram_system,
    round_certificate,
    verify_certificate,
)


@click.group()
def main():
    """Exact classification of optimal (d+2)-line packings, d = 3..6."""


@main.command()
@click.option("--species", type=click.IntRange(1, 2), required=True)
@click.option("--d", "dim", type=click.IntRange(3, 7), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def orbits(species, dim, out):
    """Enumerate orbit representatives and write them as JSON lines."""
    db = enumerate_reps(species, dim)
    db.dump(out)
    click.echo(f"wrote {len(db)} representatives to {out}")


@main.command()
@click.option("--d", "dim", type=click.IntRange(3, 7), default=6, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def systems(dim, out):
    """Write one matched-pair ConstraintSystem JSON per representative."""
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    db = enumerate_reps(2, dim)
    for idx, S in enumerate(db.representatives):
        sid = system_id(dim, idx)
        sys_ = build_subprogram_system(S, dim, system_id=sid)
        (outdir / f"{sid}.json").write_text(sys_.to_json())
    click.echo(f"wrote {len(db)} systems to {out}")


@main.command("verify-cert")
@click.option("--system", "system_path", type=click.Path(exists=True), required=True)
@click.option("--cert", "cert_path", type=click.Path(exists=True), required=True)
@click.option("--raw/--rounded", default=True, show_default=True,
              help="treat the certificate as raw generator output (5-decimal "
                   "rounding is applied) or as already exact")
def verify_cert(system_path, cert_path, raw):
    """Exactly verify a Positivstellensatz certificate against a system."""
    sys_ = ConstraintSystem.from_json(Path(system_path).read_text())
    text = Path(cert_path).read_text()
    if raw:
        cert = round_certificate(json.loads(text), sys_.variables)
    else:
        cert = Certificate.from_json(text, sys_.variables)
    res = verify_certificate(cert, sys_)
    if res.accepted:
        click.echo(f"Accepted ({res.reason}): max coeff {float(res.max_coeff):.3e} "
                   f"<= bound {float(res.bound):.3e}")
    else:
        click.echo(f"Rejected ({res.reason})")
        if res.witness is not None:
            click.echo(f"witness monomial: {res.witness}")
        _sys.exit(1)


@main.command()
@click.option("--system", "system_path", type=click.Path(exists=True), required=True)
@click.option("--box", "box_radius", type=float, default=None,
              help="start from the cube [-r, r]^n instead of the contracted "
                   "feasible box")
@click.option("--max-depth", type=int, default=40, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None,
              help="stream discarded boxes with their refuting constraint")
def eliminate(system_path, box_radius, max_depth, jobs, log_path):
    """Prove P(f) and Z(g) disjoint over a box, or report residual boxes."""
    sys_ = ConstraintSystem.from_json(Path(system_path).read_text())
    box = None
    if box_radius is not None:
        box = Box.cube(len(sys_.variables), str(box_radius))
    logf = open(log_path, "w") if log_path else None
    try:
        res = prove_empty(sys_, box=box, max_depth=max_depth, jobs=jobs, log=logf)
    finally:
        if logf:
            logf.close()
    click.echo(f"{res.tag}: nodes={res.nodes} max_depth={res.max_depth_seen} "
               f"residual_boxes={len(res.boxes)}")
    if res.tag != "Empty":
        _sys.exit(1)


@main.command("classify")
@click.option("--d", "dim", type=click.IntRange(3, 6), required=True)
@click.option("--certs", "cert_dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="directory of d=6 certificate fixtures")
@click.option("--fallback", type=click.Choice(["boxelim", "none"]),
              default="boxelim", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--max-depth", type=int, default=40, show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def classify_cmd(dim, cert_dir, fallback, jobs, max_depth, cache_dir, out_path):
    """Run the full classification for one dimension."""
    report = run_classify(
        dim,
        cert_dir=cert_dir,
        fallback=(fallback == "boxelim"),
        max_depth=max_depth,
        jobs=jobs,
        cache_dir=cache_dir,
    )
    text = report.to_json()
    if out_path:
        Path(out_path).write_text(text)
    else:
        click.echo(text)
    click.echo(f"r1: {report.r1_tally}")
    click.echo(f"r2: {report.r2_tally}")
    if report.blocked:
        click.echo(f"blocked: {report.blocked}")
        _sys.exit(2)
    if not report.survivors or report.mu_star is None:
        click.echo("no survivor confirmed")
        _sys.exit(1)
    unresolved = sum(
        v for k, v in report.r2_tally.items()
        if k not in {"EliminatedByBox", "ConfirmedUnique", "SurvivorVerified"}
        and not k.startswith("CertificateAccepted")
    )
    if unresolved:
        click.echo(f"{unresolved} representatives unresolved")
        _sys.exit(1)


@main.command()
@click.option("--d", "drange", default="3..7", show_default=True,
              help="a single dimension or an inclusive range like 3..7")
def table1(drange):
    """Print the summary table of optimal-code parameters."""
    if ".." in drange:
        lo, hi = (int(x) for x in drange.split(".."))
        dims = range(lo, hi + 1)
    else:
        dims = [int(drange)]
    rows = reproduce_table1(tuple(dims))
    click.echo(f"{'d':>2} {'n':>2} {'mu':>8} {'|R1|':>5} {'|R2|':>6}  minpoly")
    for row in rows:
        click.echo(
            f"{row['d']:>2} {row['n']:>2} {row['mu']:>8} {row['R1']:>5} "
            f"{row['R2']:>6}  {row['minpoly']}"
        )


if __name__ == "__main__":
    main()
