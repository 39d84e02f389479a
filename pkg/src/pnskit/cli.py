"""Command-line front end.

Subcommands: estimate, are, simulate, dataset-summary, dataset-study,
gen-fixture.  Results are machine-readable tables (csv or aligned text);
every file output gets a JSON run manifest alongside it.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass

import click
import numpy as np

from . import __version__, dataset, montecarlo
from .design import Direction
from .estimators import PnsSample, TieMatrix, edf, estimate_mb, estimate_ml
from .montecarlo import DEFAULT_SEED, ExperimentConfig, ResultRecord


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int | None
    version: str
    duration_s: float


def _write_manifest(subcommand: str, params: dict, seed, out, started: float) -> None:
    manifest = RunManifest(
        subcommand=subcommand,
        params={k: v for k, v in params.items() if v is not None},
        seed=seed,
        version=__version__,
        duration_s=round(time.monotonic() - started, 3),
    )
    payload = json.dumps(asdict(manifest), indent=2, default=str)
    if out:
        with open(f"{out}.manifest.json", "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload, file=sys.stderr)


def _format_rows(rows, header, fmt: str) -> str:
    def cell(v):
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    table = [[cell(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(table)
        return buf.getvalue()
    else:
        widths = [max(len(h), *(len(r[i]) for r in table)) if table else len(h)
                  for i, h in enumerate(header)]
        lines = [" ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines += [" ".join(c.ljust(w) for c, w in zip(row, widths)) for row in table]
    return "\n".join(lines) + "\n"


def _emit(records, out, fmt: str) -> None:
    text = _format_rows([r.row() for r in records], ResultRecord.COLUMNS, fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _read_sample_file(path, direction: Direction) -> PnsSample:
    values, rows = [], []
    with open(path) as fh:
        for line_num, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            try:
                values.append(float(parts[0]))
                rows.append([int(p) for p in parts[1:]])
            except (ValueError, IndexError):
                raise click.ClickException(
                    f"{path}:{line_num}: expected 'value tie_1 ... tie_m'"
                )
    if not values:
        raise click.ClickException(f"{path}: no sample rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1 or widths == {0}:
        raise click.ClickException(f"{path}: inconsistent tie-row widths {sorted(widths)}")
    try:
        ties = TieMatrix(np.asarray(rows, dtype=np.int64))
        return PnsSample.from_tie_matrix(np.asarray(values), ties, direction)
    except ValueError as exc:
        raise click.ClickException(str(exc))


@click.group()
@click.version_option(__version__)
def main():
    """Partial nomination sampling toolkit."""


fmt_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "text"]), default="text", show_default=True
)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None)
seed_option = click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
threads_option = click.option(
    "--threads", type=int, default=None, help="Worker count (default: PNSKIT_THREADS or 1)."
)


@main.command()
@click.argument("sample_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "threshold", type=float, required=True, help="Evaluation threshold.")
@click.option("--direction", type=click.Choice(["min", "max"]), default="min", show_default=True)
@fmt_option
@out_option
def estimate(sample_file, threshold, direction, fmt, out):
    """Estimate the CDF at a threshold from a PNS sample file.

    Each row of SAMPLE_FILE is a measured value followed by its binary tie
    row (m columns), comma or whitespace separated.
    """
    started = time.monotonic()
    sample = _read_sample_file(sample_file, Direction(direction))
    rows = []
    rows.append(("edf", sample.n, threshold, edf(sample, threshold), ""))
    for rep in (estimate_mb(sample, threshold), estimate_ml(sample, threshold)):
        se = float(np.sqrt(rep.asymptotic_variance / rep.n))
        rows.append((rep.method, rep.n, threshold, rep.estimate, se))
    text = _format_rows(rows, ("method", "n", "t", "estimate", "stderr"), fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    _write_manifest(
        "estimate",
        {"sample_file": sample_file, "t": threshold, "direction": direction, "format": fmt},
        None,
        out,
        started,
    )


@main.command()
@click.option("--m", type=int, required=True)
@click.option("--scenario", default="B", show_default=True,
              help="Scenario name (A/B/C) or comma-separated weights.")
@click.option("--grid-points", type=int, default=99, show_default=True)
@fmt_option
@out_option
def are(m, scenario, grid_points, fmt, out):
    """Deterministic asymptotic relative efficiency curve over the F grid."""
    started = time.monotonic()
    lam = _parse_scenario(scenario, m)
    f_grid = np.linspace(0.0, 1.0, grid_points + 2)[1:-1]
    records = montecarlo.run_are_curve(m, lam, f_grid)
    _emit(records, out, fmt)
    _write_manifest(
        "are",
        {"m": m, "scenario": scenario, "grid_points": grid_points, "format": fmt},
        None,
        out,
        started,
    )


def _parse_scenario(scenario: str, m: int):
    if "," in scenario:
        lam = tuple(float(v) for v in scenario.split(","))
        if len(lam) != m:
            raise click.ClickException(f"weight vector has {len(lam)} entries, expected {m}")
        return lam
    from .sampler import scenario_weights

    try:
        return scenario_weights(scenario, m)
    except ValueError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--scenario", default="B", show_default=True)
@click.option("--rho", type=float, default=None, help="Ranking correlation; omit for perfect.")
@click.option("--parent", type=click.Choice(["uniform", "exponential"]), default="uniform",
              show_default=True)
@click.option("--replications", type=int, default=20_000, show_default=True)
@click.option("--p-grid", default=None,
              help="Comma-separated p values (default 0.01..0.99).")
@seed_option
@threads_option
@fmt_option
@out_option
def simulate(n, m, scenario, rho, parent, replications, p_grid, seed, threads, fmt, out):
    """Monte Carlo RE(p) experiment for a MinPNS design against SRS."""
    started = time.monotonic()
    grid = (
        tuple(float(v) for v in p_grid.split(","))
        if p_grid
        else montecarlo.DEFAULT_P_GRID
    )
    config = ExperimentConfig(
        n=n,
        m=m,
        scenario=_parse_scenario(scenario, m) if "," in scenario else scenario,
        rho=rho,
        parent=parent,
        replications=replications,
        p_grid=grid,
        seed=seed,
    )
    result = montecarlo.run_re_experiment(config, threads=threads)
    _emit(result.records, out, fmt)
    _write_manifest(
        "simulate",
        {
            "n": n, "m": m, "scenario": scenario, "rho": rho, "parent": parent,
            "replications": replications, "p_grid": p_grid, "format": fmt,
            "threads": threads,
        },
        seed,
        out,
        started,
    )


data_options = [
    click.option("--delimiter", default=",", show_default=True),
    click.option("--value-col", default="bmd", show_default=True),
    click.option("--bmi-col", default="bmi", show_default=True),
    click.option("--age-col", default="age", show_default=True),
]


def _add_options(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


def _load(data_file, delimiter, value_col, bmi_col, age_col):
    try:
        return dataset.load_population(
            data_file,
            delimiter=delimiter,
            value_col=value_col,
            bmi_col=bmi_col,
            age_col=age_col,
        )
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))


@main.command("dataset-summary")
@click.argument("data_file", type=click.Path(exists=True, dir_okay=False))
@_add_options(data_options)
@fmt_option
@out_option
def dataset_summary(data_file, delimiter, value_col, bmi_col, age_col, fmt, out):
    """Summary statistics, rank correlations, and prevalence for a survey file."""
    started = time.monotonic()
    pop = _load(data_file, delimiter, value_col, bmi_col, age_col)
    stats = dataset.summary_stats(pop)
    for var in ("bmic", "ad"):
        codes = pop.ordinals[var].astype(float)
        codes[codes < 0] = np.nan
        stats[f"spearman_{var}"] = dataset.spearman(pop.values, codes)
    stats["prevalence_0.56"] = dataset.prevalence_true(pop, 0.56)
    rows = [(k, v) for k, v in stats.items()]
    text = _format_rows(rows, ("statistic", "value"), fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    _write_manifest("dataset-summary", {"data_file": data_file}, None, out, started)


@main.command("dataset-study")
@click.argument("data_file", type=click.Path(exists=True, dir_okay=False))
@_add_options(data_options)
@click.option("--rank-by", type=click.Choice(["bmic", "ad"]), default="bmic", show_default=True)
@click.option("--n", "n_list", default="10", show_default=True, help="Comma-separated sizes.")
@click.option("--m", "m_list", default="3", show_default=True, help="Comma-separated set sizes.")
@click.option("--t", "threshold", type=float, default=0.56, show_default=True)
@click.option("--replications", type=int, default=20_000, show_default=True)
@seed_option
@threads_option
@fmt_option
@out_option
def dataset_study(data_file, delimiter, value_col, bmi_col, age_col, rank_by, n_list, m_list,
                  threshold, replications, seed, threads, fmt, out):
    """Bias/variance/RE study on a finite population with natural ties."""
    started = time.monotonic()
    pop = _load(data_file, delimiter, value_col, bmi_col, age_col)
    records = montecarlo.run_dataset_study(
        pop,
        rank_by,
        reverse=(rank_by == "ad"),
        n_list=[int(v) for v in n_list.split(",")],
        m_list=[int(v) for v in m_list.split(",")],
        t=threshold,
        replications=replications,
        seed=seed,
        threads=threads,
    )
    _emit(records, out, fmt)
    _write_manifest(
        "dataset-study",
        {
            "data_file": data_file, "rank_by": rank_by, "n": n_list, "m": m_list,
            "t": threshold, "replications": replications, "threads": threads,
        },
        seed,
        out,
        started,
    )


@main.command("gen-fixture")
@click.argument("out_file", type=click.Path(dir_okay=False))
@click.option("--size", type=int, default=3978, show_default=True)
@click.option("--missing", type=int, default=667, show_default=True)
@click.option("--seed", type=int, default=987654321, show_default=True)
def gen_fixture(out_file, size, missing, seed):
    """Write a synthetic survey fixture for offline testing."""
    started = time.monotonic()
    dataset.write_synthetic_fixture(out_file, size=size, n_missing=missing, seed=seed)
    _write_manifest(
        "gen-fixture", {"size": size, "missing": missing}, seed, out_file, started
    )


if __name__ == "__main__":
    main()
