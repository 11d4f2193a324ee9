# pcut/cli.py
"""
Command-line interface for pcut.

This module provides the ``pcut`` command: clustering and SSL runs, delta
sweeps, rank and cut-curve exports, limit validation and dataset generation,
built with Typer and Rich.
"""

import os
import sys
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
import typer
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from rich import box
from rich.console import Console
from rich.table import Table

from pcut import __version__
from pcut.core.exceptions import NoFeasiblePartitionError, NumericalError, PCutError
from pcut.core.models import (
    CutObjective,
    GraphKind,
    GraphParams,
    HyperplaneCut,
    LabelMask,
    Mode,
    Objective,
    PCutReport,
    SearchGrid,
)
from pcut.core.settings import get_settings

# Configure logger for CLI
logger.remove()  # Remove default handler
logger.add(
    sys.stderr,
    format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
    level="INFO" if not os.getenv("PCUT_DEBUG") else "DEBUG",
)

app = typer.Typer(
    name="pcut",
    help="Partition-constrained minimum cuts on rank-modulated graphs",
    add_completion=False,
    rich_markup_mode="rich",
)
console = Console()
err_console = Console(stderr=True)

EXIT_USAGE = 1
EXIT_NO_FEASIBLE = 2
EXIT_NUMERICAL = 3

VALIDATION_SPECS = ("gaussian1d", "bimodal1d", "uniform1d", "fig2", "fig5")


class RunConfig(BaseModel):
    """
    Resolved options of one CLI invocation.

    Attributes:
        command: Subcommand name
        input: CSV file to read points from
        gen: Named generator to sample points from
        n: Sample size for generators
        K: Number of clusters or classes
        delta: Minimum cluster-size fraction
        seed: Seed of every random stream
        out: Output directory
        grid: Search grid built from the overrides
    """

    model_config = ConfigDict(frozen=True)

    command: str
    input: Optional[Path] = None
    gen: Optional[str] = None
    n: int = Field(default=1000, ge=2)
    K: int = Field(default=2, ge=1)
    delta: float = Field(default=0.05, gt=0.0, lt=1.0)
    seed: int = 42
    out: Path = Path(".")
    header: bool = False
    has_labels: bool = False
    k0: Optional[int] = Field(default=None, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)
    weighted_eta: bool = False
    grid: SearchGrid = Field(default_factory=SearchGrid)

    @model_validator(mode="after")
    def check_source(self) -> "RunConfig":
        """Data commands need exactly one of --input and --gen."""
        if self.command != "validate" and (self.input is None) == (self.gen is None):
            raise ValueError("give exactly one of --input and --gen")
        return self

    def load_dataset(self):
        from pcut.data import generate, load_csv

        if self.input is not None:
            return load_csv(self.input, has_labels=self.has_labels, header=self.header)
        return generate(self.gen, self.n, self.seed)

    def output(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / name


def _split(text: Optional[str]) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()] if text else []


def _floats(text: Optional[str], option: str) -> Optional[List[float]]:
    if not text:
        return None
    try:
        return [float(part) for part in _split(text)]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated numbers, got {text!r}", param_hint=option) from None


def _ints(text: Optional[str], option: str) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(part) for part in _split(text)]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint=option) from None


def _sigmas(text: Optional[str]) -> Optional[List[Optional[float]]]:
    if not text:
        return None
    try:
        return [None if part.lower() in ("none", "binary") else float(part) for part in _split(text)]
    except ValueError:
        raise typer.BadParameter(f"expected numbers or 'none', got {text!r}", param_hint="--sigmas") from None


def _grid(
    lambdas: Optional[str],
    ks: Optional[str],
    sigmas: Optional[str],
    kinds: Optional[str],
    objective: Objective,
    mode: Mode = Mode.CLUSTERING,
) -> SearchGrid:
    overrides = {"objective": objective, "mode": mode}
    if lambdas:
        overrides["lambdas"] = _floats(lambdas, "--lambdas")
    if ks:
        overrides["ks"] = _ints(ks, "--ks")
    if sigmas:
        overrides["sigma_multipliers"] = _sigmas(sigmas)
    if kinds:
        try:
            overrides["kinds"] = [GraphKind(kind) for kind in _split(kinds)]
        except ValueError:
            raise typer.BadParameter(f"unknown graph kind in {kinds!r}", param_hint="--kinds") from None
    return SearchGrid(**overrides)


def _config(command: str, **options) -> RunConfig:
    """Fill unset options from the settings and validate."""
    settings = get_settings()
    options = {key: value for key, value in options.items() if value is not None}
    options.setdefault("seed", settings.seed)
    options.setdefault("delta", settings.delta)
    if settings.threads is not None:
        options.setdefault("threads", settings.threads)
    return RunConfig(command=command, **options)


def _print_report(report: PCutReport, error: Optional[float] = None, label: str = "error rate") -> None:
    chosen = report.selected_candidate
    table = Table(title="Selected Partition", box=box.ROUNDED)
    table.add_column("Graph", style="cyan", no_wrap=True)
    table.add_column("cut0", style="magenta")
    table.add_column("Cluster sizes", style="green")
    table.add_column("q", style="blue")
    table.add_column("y", style="blue")
    table.add_row(
        chosen.params.label() if chosen.params else "forced",
        f"{chosen.cut0:.6g}",
        ", ".join(str(s) for s in chosen.partition.sizes().tolist()),
        "-" if chosen.q is None else f"{chosen.q:.4f}",
        f"{chosen.y:.4f}",
    )
    console.print(table)
    feasible = sum(1 for c in report.candidates if c.feasible)
    console.print(f"{feasible}/{len(report.candidates)} candidates feasible (min cluster size {report.min_size})")
    if error is not None:
        console.print(f"{label}: [green]{error:.4f}[/green]")


def _write_report(report: PCutReport, config: RunConfig) -> None:
    from pcut.data.io import save_partition_csv, write_rows

    report.write_json(config.output("report.json"))
    rows = report.summary_rows()
    header = ["lambda", "k", "sigma", "cut0", "min_cluster", "feasible"]
    write_rows(config.output("summary.csv"), header, [[row[key] for key in header] for row in rows])
    if report.selected_partition is not None:
        save_partition_csv(report.selected_partition, config.output("partition.csv"))


def _run_and_write(config: RunConfig, dataset, mask: Optional[LabelMask] = None) -> PCutReport:
    from pcut.core.selector import run_pcut

    try:
        report = run_pcut(
            dataset,
            config.grid,
            K=config.K,
            delta=config.delta,
            k0=config.k0,
            seed=config.seed,
            mask=mask,
            threads=config.threads,
            weighted_eta=config.weighted_eta,
        )
    except NoFeasiblePartitionError as e:
        if e.report is not None:
            _write_report(e.report, config)
        raise
    _write_report(report, config)
    return report


def version_callback(value: bool):
    """Show version and exit."""
    if value:
        console.print(f"[bold blue]pcut[/bold blue] version [green]{__version__}[/green]")
        raise typer.Exit()


@app.callback()
def callback(
    version: bool = typer.Option(
        None,
        "--version",
        "-v",
        help="Show version and exit",
        callback=version_callback,
        is_eager=True,
    ),
):
    """
    pcut - partition-constrained minimum cuts.

    Builds rank modulated degree graphs, generates candidate partitions and
    keeps the feasible one with the smallest baseline cut.
    """
    pass


@app.command()
def cluster(
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="CSV file of points"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator: fig2, fig5 or moons"),
    n: Optional[int] = typer.Option(None, "--n", help="Sample size for --gen"),
    header: bool = typer.Option(False, "--header", help="Skip the first CSV line"),
    labeled: bool = typer.Option(False, "--labeled", help="Last CSV column holds true labels"),
    k_classes: Optional[int] = typer.Option(None, "--k-classes", "-K", help="Number of clusters"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Minimum cluster-size fraction"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    k0: Optional[int] = typer.Option(None, "--k0", help="Baseline neighbour count (default ceil(sqrt(n)))"),
    lambdas: Optional[str] = typer.Option(None, "--lambdas", help="Comma list of lambda values"),
    ks: Optional[str] = typer.Option(None, "--ks", help="Comma list of neighbour counts"),
    sigmas: Optional[str] = typer.Option(None, "--sigmas", help="Comma list of sigma multipliers, 'none' = binary"),
    kinds: Optional[str] = typer.Option(None, "--kinds", help="Comma list of graph kinds"),
    objective: Objective = typer.Option(Objective.RCUT, "--objective", case_sensitive=False),
    weighted_eta: bool = typer.Option(False, "--weighted-eta", help="Use the weighted rank statistic"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Cluster a dataset with PCut; writes report.json, summary.csv and partition.csv."""
    from pcut.core.selector import clustering_error_rate

    config = _config(
        "cluster",
        input=input,
        gen=gen,
        n=n,
        header=header,
        has_labels=labeled,
        K=k_classes,
        delta=delta,
        seed=seed,
        k0=k0,
        threads=threads,
        weighted_eta=weighted_eta,
        out=out,
        grid=_grid(lambdas, ks, sigmas, kinds, objective),
    )
    dataset = config.load_dataset()
    report = _run_and_write(config, dataset)

    error = None
    if dataset.true_labels is not None and dataset.n_classes == config.K:
        error = clustering_error_rate(report.selected_partition, dataset)
    _print_report(report, error, "clustering error rate")


@app.command()
def ssl(
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="CSV file of points"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator: fig2, fig5 or moons"),
    n: Optional[int] = typer.Option(None, "--n", help="Sample size for --gen"),
    header: bool = typer.Option(False, "--header", help="Skip the first CSV line"),
    labeled: bool = typer.Option(False, "--labeled", help="Last CSV column holds true labels"),
    labels: Optional[Path] = typer.Option(None, "--labels", help="Seed label file (id,class)"),
    n_labeled: int = typer.Option(20, "--n-labeled", help="Random seeds to draw when --labels is absent"),
    k_classes: Optional[int] = typer.Option(None, "--k-classes", "-K", help="Number of classes"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Minimum cluster-size fraction"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    k0: Optional[int] = typer.Option(None, "--k0", help="Baseline neighbour count"),
    lambdas: Optional[str] = typer.Option(None, "--lambdas", help="Comma list of lambda values"),
    ks: Optional[str] = typer.Option(None, "--ks", help="Comma list of neighbour counts"),
    sigmas: Optional[str] = typer.Option(None, "--sigmas", help="Comma list of sigma multipliers"),
    kinds: Optional[str] = typer.Option(None, "--kinds", help="Comma list of graph kinds"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Label propagation with PCut-selected graphs; writes the same files as cluster."""
    from pcut.data.io import load_label_mask, sample_label_mask, save_label_mask

    config = _config(
        "ssl",
        input=input,
        gen=gen,
        n=n,
        header=header,
        has_labels=labeled,
        K=k_classes,
        delta=delta,
        seed=seed,
        k0=k0,
        threads=threads,
        out=out,
        grid=_grid(lambdas, ks, sigmas, kinds, Objective.RCUT, Mode.SSL),
    )
    dataset = config.load_dataset()
    if labels is not None:
        mask = load_label_mask(labels)
    else:
        mask = sample_label_mask(dataset, n_labeled, config.seed)
        save_label_mask(mask, config.output("labels.csv"))
    if k_classes is None:
        config = config.model_copy(update={"K": max(mask.labels.values()) + 1})

    report = _run_and_write(config, dataset, mask)
    _print_report(report, report.ssl_error, "SSL error rate")


@app.command("sweep-delta")
def sweep_delta(
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="CSV file of points"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator: fig2, fig5 or moons"),
    n: Optional[int] = typer.Option(None, "--n", help="Sample size for --gen"),
    header: bool = typer.Option(False, "--header", help="Skip the first CSV line"),
    labeled: bool = typer.Option(False, "--labeled", help="Last CSV column holds true labels"),
    deltas: str = typer.Option("0.3,0.25,0.2,0.15,0.1,0.05", "--deltas", help="Comma list of deltas"),
    k_classes: Optional[int] = typer.Option(None, "--k-classes", "-K", help="Number of clusters"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    k0: Optional[int] = typer.Option(None, "--k0", help="Baseline neighbour count"),
    lambdas: Optional[str] = typer.Option(None, "--lambdas", help="Comma list of lambda values"),
    ks: Optional[str] = typer.Option(None, "--ks", help="Comma list of neighbour counts"),
    sigmas: Optional[str] = typer.Option(None, "--sigmas", help="Comma list of sigma multipliers"),
    kinds: Optional[str] = typer.Option(None, "--kinds", help="Comma list of graph kinds"),
    objective: Objective = typer.Option(Objective.RCUT, "--objective", case_sensitive=False),
    axis: int = typer.Option(0, "--axis", help="Axis of the reported boundary (2-partitions)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Select one partition per delta; writes sweep.csv with flat-spot intervals appended."""
    from pcut.core.selector import delta_sweep, flat_spot_detect, selected_boundary
    from pcut.data.io import write_rows

    config = _config(
        "sweep-delta",
        input=input,
        gen=gen,
        n=n,
        header=header,
        has_labels=labeled,
        K=k_classes,
        seed=seed,
        k0=k0,
        threads=threads,
        out=out,
        grid=_grid(lambdas, ks, sigmas, kinds, objective),
    )
    dataset = config.load_dataset()
    entries = delta_sweep(
        dataset, config.grid, K=config.K, deltas=_floats(deltas, "--deltas"), k0=config.k0, seed=config.seed,
        threads=config.threads,
    )
    spots = flat_spot_detect(entries)

    rows = []
    for entry in entries:
        if entry.partition is None:
            rows.append([entry.delta, "", "", "", "", "", ""])
            continue
        boundary = ""
        if entry.partition.K == 2 and axis < dataset.d and entry.partition.min_cluster_size > 0:
            boundary = repr(selected_boundary(dataset, entry.partition, axis))
        p = entry.params
        rows.append(
            [
                entry.delta,
                repr(entry.cut0),
                "" if p is None or p.lam is None else p.lam,
                "" if p is None or p.k is None else p.k,
                "" if p is None or p.sigma is None else repr(p.sigma),
                entry.partition.min_cluster_size,
                boundary,
            ]
        )
    rows.append([])
    rows.append(["flat_spot_start", "flat_spot_end"])
    rows.extend([start, end] for start, end in spots)
    path = write_rows(
        config.output("sweep.csv"), ["delta", "cut0", "lambda", "k", "sigma", "min_cluster", "boundary"], rows
    )

    table = Table(title="Delta Sweep", box=box.ROUNDED)
    table.add_column("delta", style="cyan")
    table.add_column("cut0", style="magenta")
    table.add_column("boundary", style="green")
    for row in rows[: len(entries)]:
        table.add_row(str(row[0]), row[1] or "-", row[6] or "-")
    console.print(table)
    console.print(f"Flat spots: {spots or 'none'} -> [green]{path}[/green]")


@app.command()
def rank(
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="CSV file of points"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator: fig2, fig5 or moons"),
    n: Optional[int] = typer.Option(None, "--n", help="Sample size for --gen"),
    header: bool = typer.Option(False, "--header", help="Skip the first CSV line"),
    labeled: bool = typer.Option(False, "--labeled", help="Last CSV column holds true labels"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    k0: Optional[int] = typer.Option(None, "--k0", help="Baseline neighbour count"),
    weighted_eta: bool = typer.Option(False, "--weighted-eta", help="Use the weighted rank statistic"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Compute density ranks on the baseline graph; writes rank.csv (id,eta,rank)."""
    from pcut.core.ranking import compute_ranks
    from pcut.data.io import write_rows

    config = _config(
        "rank", input=input, gen=gen, n=n, header=header, has_labels=labeled, seed=seed, k0=k0, out=out
    )
    dataset = config.load_dataset()
    ranks, baseline = compute_ranks(dataset, k0=config.k0, weighted=weighted_eta)
    rows = [[i, repr(float(e)), repr(float(r))] for i, (e, r) in enumerate(zip(ranks.eta, ranks.rank))]
    path = write_rows(config.output("rank.csv"), ["id", "eta", "rank"], rows)
    console.print(f"Ranked {dataset.n} points on {baseline.params.label()} -> [green]{path}[/green]")


@app.command()
def curve(
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="CSV file of points"),
    gen: Optional[str] = typer.Option(None, "--gen", "-g", help="Generator: fig2, fig5 or moons"),
    n: Optional[int] = typer.Option(None, "--n", help="Sample size for --gen"),
    header: bool = typer.Option(False, "--header", help="Skip the first CSV line"),
    labeled: bool = typer.Option(False, "--labeled", help="Last CSV column holds true labels"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    kind: GraphKind = typer.Option(GraphKind.RMD, "--kind", case_sensitive=False, help="Graph kind"),
    lam: float = typer.Option(0.3, "--lambda", help="Degree modulation (RMD graphs)"),
    k: int = typer.Option(30, "--k", help="Neighbour count"),
    sigma_mult: Optional[float] = typer.Option(None, "--sigma-mult", help="sigma / d~_k; omit for binary"),
    k0: Optional[int] = typer.Option(None, "--k0", help="Baseline neighbour count for ranks"),
    axis: int = typer.Option(0, "--axis", help="Hyperplane axis"),
    t_min: float = typer.Option(-3.0, "--t-min", help="First threshold"),
    t_max: float = typer.Option(8.0, "--t-max", help="Last threshold"),
    steps: int = typer.Option(111, "--steps", min=2, help="Number of thresholds"),
    objective: CutObjective = typer.Option(CutObjective.RCUT, "--objective", case_sensitive=False),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Evaluate hyperplane cuts over a threshold range; writes curve.csv (t,value)."""
    from pcut.core.analysis import cut_curve
    from pcut.core.ranking import compute_ranks
    from pcut.data.io import write_rows
    from pcut.graphs import builder_for, mean_knn_distance

    config = _config(
        "curve", input=input, gen=gen, n=n, header=header, has_labels=labeled, seed=seed, k0=k0, out=out
    )
    dataset = config.load_dataset()
    ranks, _ = compute_ranks(dataset, k0=config.k0)
    scale = mean_knn_distance(dataset, min(k, dataset.n - 1))
    sigma = sigma_mult * scale if sigma_mult is not None and scale > 0 else None
    if kind == GraphKind.EPSILON:
        params = GraphParams(kind=kind, k=k, sigma=sigma, epsilon=scale)
    elif kind == GraphKind.FULL_RBF:
        params = GraphParams(kind=kind, k=k, sigma=sigma or scale)
    elif kind == GraphKind.FULL_ARBF:
        params = GraphParams(kind=kind)
    else:
        params = GraphParams(kind=kind, lam=lam if kind == GraphKind.RMD else None, k=k, sigma=sigma)
    graph = builder_for(kind).build(dataset, params, rank=ranks)

    thresholds = np.linspace(t_min, t_max, steps)
    values = cut_curve(dataset, graph, axis, thresholds, objective)
    rows = [[repr(t), "" if v is None else repr(v)] for t, v in values]
    path = write_rows(config.output("curve.csv"), ["t", "value"], rows)
    finite = [(t, v) for t, v in values if v is not None]
    if finite:
        t_best, v_best = min(finite, key=lambda item: item[1])
        console.print(f"Minimum {objective.value} {v_best:.6g} at t={t_best:.4g}")
    console.print(f"{params.label()} curve -> [green]{path}[/green]")


@app.command()
def validate(
    theorem: int = typer.Option(1, "--theorem", min=1, max=2, help="1: rank consistency, 2: RMD cut limit"),
    spec: str = typer.Option("gaussian1d", "--spec", help=f"Density: {', '.join(VALIDATION_SPECS)}"),
    n_values: str = typer.Option("500,1000,2000,4000", "--n-values", help="Comma list of sample sizes"),
    lam: float = typer.Option(1.0, "--lambda", help="Degree modulation for the cut limit check"),
    axis: int = typer.Option(0, "--axis", help="Hyperplane axis for the cut limit check"),
    threshold: float = typer.Option(0.5, "--threshold", help="Hyperplane threshold for the cut limit check"),
    repeats: int = typer.Option(1, "--repeats", min=1, help="Monte Carlo repetitions per n"),
    k0_exponent: float = typer.Option(0.5, "--k0-exponent", help="Rank consistency: k0 = ceil(n^exponent)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Check rank consistency (1) or the scaled RMD cut limit (2); writes validate.csv."""
    from pcut.core.analysis import verify_thm1, verify_thm2
    from pcut.data import densities
    from pcut.data.io import write_rows

    specs = {
        "gaussian1d": densities.gaussian_1d_spec,
        "bimodal1d": densities.bimodal_1d_spec,
        "uniform1d": densities.uniform_1d_spec,
        "fig2": densities.fig2_spec,
        "fig5": densities.fig5_spec,
    }
    if spec not in specs:
        raise typer.BadParameter(f"unknown density {spec!r}", param_hint="--spec")
    config = _config("validate", seed=seed, out=out)
    sizes = _ints(n_values, "--n-values")
    density = specs[spec]()

    if theorem == 1:
        results = verify_thm1(density, sizes, config.seed, repeats=repeats, k0_exponent=k0_exponent)
        path = write_rows(config.output("validate.csv"), ["n", "mean_abs_error"], [[n, repr(e)] for n, e in results])
        for n, e in results:
            console.print(f"n={n}: mean |R - p| = {e:.4f}")
    else:
        result = verify_thm2(density, HyperplaneCut(axis=axis, threshold=threshold), lam, sizes, config.seed, repeats)
        rows = [
            [n, repr(e), repr(result.predicted), repr(r)]
            for n, e, r in zip(result.n_values, result.empirical, result.relative_errors)
        ]
        path = write_rows(config.output("validate.csv"), ["n", "empirical", "predicted", "rel_error"], rows)
        for n, e, r in zip(result.n_values, result.empirical, result.relative_errors):
            console.print(f"n={n}: scaled RCut {e:.4f} vs predicted {result.predicted:.4f} (rel. error {r:.3f})")
    console.print(f"-> [green]{path}[/green]")


@app.command()
def gen(
    name: str = typer.Argument(..., help="Generator: fig2, fig5 or moons"),
    n: int = typer.Option(1000, "--n", help="Number of points"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    out: Path = typer.Option(Path("."), "--out", "-o", help="Output directory"),
):
    """Sample a named dataset; writes dataset.csv with the true label as last column."""
    from pcut.data.io import save_csv

    config = _config("gen", gen=name, n=n, seed=seed, out=out)
    dataset = config.load_dataset()
    path = save_csv(dataset, config.output("dataset.csv"))
    console.print(f"Wrote {dataset.n} points of dimension {dataset.d} -> [green]{path}[/green]")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and map failures to exit codes.

    Returns:
        0 on success, 1 on usage or input errors, 2 when no partition is feasible,
        3 on numerical failures
    """
    try:
        result = app(args=argv, prog_name="pcut", standalone_mode=False)
        return result if isinstance(result, int) else 0
    except click.exceptions.Abort:
        err_console.print("[red]Aborted[/red]")
        return EXIT_USAGE
    except click.ClickException as e:
        err_console.print(f"[red]Error: {e.format_message()}[/red]")
        return EXIT_USAGE
    except NoFeasiblePartitionError as e:
        err_console.print(f"[red]No feasible partition: {e}[/red]")
        return EXIT_NO_FEASIBLE
    except NumericalError as e:
        err_console.print(f"[red]Numerical failure: {e}[/red]")
        return EXIT_NUMERICAL
    except (PCutError, ValidationError, OSError, ValueError) as e:
        message = str(e).splitlines()[0] if str(e) else e.__class__.__name__
        err_console.print(f"[red]Error: {message}[/red]")
        return EXIT_USAGE


def run() -> None:
    """Console script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
