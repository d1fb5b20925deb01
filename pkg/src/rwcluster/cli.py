"""Command-line interface: clustering runs, b-sweeps and the theory oracle."""

from __future__ import annotations

import json
import sys
import time
from dataclasses import asdict

import click
import numpy as np

from .data import SCALERS, Dataset, DatasetError, builtin_dataset, load_dataset
from .geometry import ModelParams, ParticleSystem
from .pipeline import RunConfig, run_clustering, sweep_b
from .report import RunReport, write_run_report, write_sweep_report
from .theory import (LineWalkSpec, PairWalkSpec, absorbing_probability,
                     encounter_probability, simulate_line_walk, simulate_pair_walk)

EXIT_USAGE = 1
EXIT_IO = 2


@click.group()
def cli():
    """Particle random-walk clustering."""


def _load(input_path: str, label_col: str, missing_token: str, seed: int,
          scale: str) -> Dataset:
    if input_path.startswith("builtin:"):
        dataset = builtin_dataset(input_path.split(":", 1)[1])
    else:
        column = int(label_col) if label_col.lstrip("-").isdigit() else label_col
        dataset = load_dataset(input_path, column, missing_token=missing_token, seed=seed)
    dataset.features = SCALERS[scale](dataset.features)
    return dataset


@cli.command()
@click.option("--input", "input_path", required=True,
              help="Dataset file, or builtin:iris / builtin:wine.")
@click.option("--label-col", default="-1", show_default=True,
              help="Label column name or 0-based index.")
@click.option("--missing-token", default="?", show_default=True)
@click.option("--algorithm", type=click.Choice(["rw1", "rw2", "naive"]), default="rw1",
              show_default=True)
@click.option("--b", type=int, default=None, help="Interaction-range order statistic.")
@click.option("--range", "interaction_range", type=float, default=None,
              help="Interaction range set directly (>= 1).")
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--theta", type=float, default=1.1, show_default=True)
@click.option("--epsilon", type=float, default=None,
              help="Stopping threshold on the summed walk length (default 1e-3 * N).")
@click.option("--max-iters", type=int, default=1000, show_default=True)
@click.option("--clusters", type=int, default=None,
              help="Merge emergent clusters down to this count.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True,
              help="rw2 repetitions per b in sweep mode.")
@click.option("--scale", type=click.Choice(["minmax", "standard", "none"]), default="none",
              show_default=True)
@click.option("--sweep", default=None, help="Comma-separated b values to sweep.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Report directory.")
def cluster(input_path, label_col, missing_token, algorithm, b, interaction_range,
            sigma, theta, epsilon, max_iters, clusters, seed, trials, scale,
            sweep, out_dir):
    """Cluster a dataset and write a machine-readable report."""
    if b is None and interaction_range is None and sweep is None:
        raise click.UsageError("one of --b, --range or --sweep is required")
    if b is not None and interaction_range is not None:
        raise click.UsageError("--b and --range are mutually exclusive")
    dataset = _load(input_path, label_col, missing_token, seed, scale)
    params = ModelParams(sigma=sigma, theta=theta, b=b if b is not None else 1,
                         interaction_range=interaction_range, epsilon=epsilon,
                         max_iters=max_iters, variant=algorithm, seed=seed)
    system = ParticleSystem.from_points(dataset.features, params, labels=dataset.labels)
    config = RunConfig(params=params, target_clusters=clusters)
    started = time.perf_counter()
    if sweep is not None:
        try:
            b_values = [int(v) for v in sweep.split(",") if v.strip()]
        except ValueError as exc:
            raise click.UsageError(f"bad --sweep value: {exc}")
        if not b_values:
            raise click.UsageError("--sweep must list at least one b value")
        entries = sweep_b(system, config, b_values, n_trials=trials)
        write_sweep_report(entries, out_dir)
        for entry in entries:
            click.echo(f"b={entry.b} R={entry.interaction_range:.4f} "
                       f"raw={entry.raw_cluster_count} merged={entry.merged_cluster_count} "
                       f"acc_mean={entry.accuracy_mean} acc_max={entry.accuracy_max}")
    else:
        result = run_clustering(system, config)
        duration = time.perf_counter() - started
        report = RunReport(
            config={"dataset": dataset.name, "algorithm": algorithm, "scale": scale,
                    **{k: v for k, v in asdict(params).items()},
                    "interaction_range_used": result.interaction_range,
                    "converged": result.converged},
            trace=result.convergence_trace,
            assignments=[int(a) for a in result.assignments],
            labels=[str(v) for v in dataset.labels],
            raw_clusters=result.raw_cluster_count,
            merged_clusters=result.merged_cluster_count,
            accuracy=result.accuracy,
            duration_seconds=duration)
        write_run_report(report, out_dir)
        click.echo(f"clusters={result.merged_cluster_count} (raw {result.raw_cluster_count}) "
                   f"iterations={result.iterations} accuracy={result.accuracy}")


@cli.command()
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--horizon", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pair-specs", type=int, default=5, show_default=True,
              help="Number of random two-walker specs to check.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def oracle(trials, horizon, seed, pair_specs, fmt):
    """Compare closed-form absorbing/encounter probabilities with Monte Carlo."""
    rng = np.random.default_rng(seed)
    rows = []
    for p in (0.4, 0.5, 0.6, 0.75):
        for start in (1, 2, 3, 5):
            spec = LineWalkSpec(p=p, q=1.0 - p, l=start)
            closed = absorbing_probability(spec)
            mc = simulate_line_walk(spec, trials=trials, horizon=horizon, rng=rng)
            rows.append({"walk": "line", "p": p, "q": round(1.0 - p, 10), "start": start,
                         "closed_form": closed, "mc_estimate": mc.estimate,
                         "stderr": mc.stderr, "unresolved": mc.unresolved})
    for _ in range(pair_specs):
        pa = float(rng.uniform(0.2, 0.8))
        pb = float(rng.uniform(0.2, 0.8))
        gap = int(rng.integers(0, 7))
        spec = PairWalkSpec(pa=pa, qa=1.0 - pa, pb=pb, qb=1.0 - pb, j=0, k=gap)
        closed = encounter_probability(spec)
        mc = simulate_pair_walk(spec, trials=trials, horizon=horizon, rng=rng)
        rows.append({"walk": "pair", "pa": round(pa, 4), "pb": round(pb, 4), "gap": gap,
                     "closed_form": closed, "mc_estimate": mc.composed.estimate,
                     "mc_direct": mc.direct.estimate, "stderr": mc.combined_stderr})
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
    else:
        for row in rows:
            parts = [f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                     for k, v in row.items()]
            click.echo("  ".join(parts))


def main(argv=None):
    """Entry point with the documented exit codes (1 usage, 2 I/O)."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except ValueError as exc:
        click.echo(f"usage error: {exc}", err=True)
        return EXIT_USAGE
    except DatasetError as exc:
        click.echo(f"load error: {exc}", err=True)
        return EXIT_IO
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
