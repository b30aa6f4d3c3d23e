"""Command-line surface: load, optionally reduce, fit, write a run document.

The output is a deterministic plain-text document: ``key: value`` lines
holding the echoed manifest and the fit summary, then the per-point
cluster assignment. Running the same manifest twice yields byte-identical
files, and the echoed manifest is enough to replay a run exactly.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataio import load_csv, pca_reduce
from .evaluate import LabelProtocol, run_protocol_grid
from .exceptions import CecibError, ConfigurationError
from .optimize import FitConfig, fit
from .partitions import Clustering
from .thresholds import beta0_gaussian_halves

_FORMAT = "cecib-run-v1"
_GRID_FORMAT = "cecib-grid-v1"
_GRID_COLUMNS = ("fraction", "noise", "beta", "mean_nmi", "sd_nmi", "mean_k", "mean_epochs")


@dataclass
class RunManifest:
    """Everything one invocation needs; echoed into the output document."""

    input: str
    output: str
    label_column: str | None = None
    beta: float = 1.0
    k_init: int = 10
    epsilon: float = 0.02
    restarts: int = 10
    max_epochs: int = 100
    seed: int = 0
    ridge: float | None = None
    pca_dims: int | None = None
    grid: str | None = None


def resolve_beta(text) -> float:
    """Parse a --beta argument: a float, or auto:halves for the 1-d split threshold."""
    if isinstance(text, (int, float)):
        return float(text)
    if text == "auto:halves":
        return beta0_gaussian_halves()
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(
            f"--beta must be a number or 'auto:halves', got {text!r}"
        ) from None


def _atomic_write(path: Path, payload: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(payload, encoding="utf-8")
    os.replace(tmp, path)


def _manifest_lines(manifest: RunManifest) -> list:
    return [
        f"input: {manifest.input}",
        f"label_column: {manifest.label_column if manifest.label_column is not None else '-'}",
        f"beta: {float(manifest.beta)!r}",
        f"k_init: {int(manifest.k_init)}",
        f"epsilon: {float(manifest.epsilon)!r}",
        f"restarts: {int(manifest.restarts)}",
        f"max_epochs: {int(manifest.max_epochs)}",
        f"seed: {int(manifest.seed)}",
        "ridge: auto" if manifest.ridge is None else f"ridge: {float(manifest.ridge)!r}",
        f"pca_dims: {int(manifest.pca_dims) if manifest.pca_dims is not None else '-'}",
    ]


def _parse_grid_spec(spec: str):
    """Parse 'fractions=0,0.1;noises=0,0.5;betas=0,1[;samples=10]'."""
    fields = {"noises": [0.0], "samples": [10.0]}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigurationError(f"bad grid fragment {part!r}, expected key=v1,v2")
        key, _, rest = part.partition("=")
        key = key.strip()
        if key not in ("fractions", "noises", "betas", "samples"):
            raise ConfigurationError(f"unknown grid key {key!r}")
        try:
            fields[key] = [float(v) for v in rest.split(",") if v.strip() != ""]
        except ValueError:
            raise ConfigurationError(f"bad grid values in {part!r}") from None
    for required in ("fractions", "betas"):
        if required not in fields or not fields[required]:
            raise ConfigurationError(f"grid spec needs {required}=...")
    return (
        fields["fractions"],
        fields["noises"],
        fields["betas"],
        int(fields["samples"][0]),
    )


def _run_grid(manifest: RunManifest, data, side) -> str:
    if manifest.label_column is None:
        raise ConfigurationError("grid mode needs --label-col as the reference partition")
    if side.n_labeled != side.n:
        raise ConfigurationError("grid mode needs a fully labeled reference column")
    truth = Clustering(assignment=side.labels.copy(), k=side.m)
    fractions, noises, betas, samples = _parse_grid_spec(manifest.grid)
    protocols = [
        LabelProtocol(labeled_fraction=f, noise_fraction=z)
        for f in fractions
        for z in noises
    ]
    config = FitConfig(
        k_init=manifest.k_init,
        epsilon=manifest.epsilon,
        restarts=manifest.restarts,
        max_epochs=manifest.max_epochs,
        ridge=manifest.ridge,
    )
    rows = run_protocol_grid(
        data, truth, protocols, betas, config,
        n_samples=samples, master_seed=manifest.seed,
    )
    header = [f"# {_GRID_FORMAT}"]
    header += [f"# {line}" for line in _manifest_lines(manifest)]
    header += [f"# grid: {manifest.grid}"]
    table = [",".join(_GRID_COLUMNS)]
    for row in rows:
        table.append(",".join(repr(float(row[c])) for c in _GRID_COLUMNS))
    return "\n".join(header + table) + "\n"


def cli_run(manifest: RunManifest) -> int:
    """Execute one manifest; returns the process exit status."""
    try:
        data, side = load_csv(manifest.input, manifest.label_column)
        if manifest.pca_dims is not None:
            data = pca_reduce(data, manifest.pca_dims)
        out_path = Path(manifest.output)
        if manifest.grid is not None:
            _atomic_write(out_path, _run_grid(manifest, data, side))
            return 0
        config = FitConfig(
            beta=manifest.beta,
            k_init=manifest.k_init,
            epsilon=manifest.epsilon,
            restarts=manifest.restarts,
            max_epochs=manifest.max_epochs,
            seed=manifest.seed,
            ridge=manifest.ridge,
        )
        report = fit(data, side, config)
        lines = [f"format: {_FORMAT}"]
        lines += _manifest_lines(manifest)
        lines += [
            f"n: {data.rows}",
            f"dims: {data.dims}",
            f"resolved_ridge: {report.ridge!r}",
            f"k: {report.clustering.k}",
            f"partition_entropy: {report.cost.partition_term!r}",
            f"model_term: {report.cost.model_term!r}",
            f"side_entropy: {report.cost.side_term!r}",
            f"weighted_side_term: {report.cost.beta * report.cost.side_term!r}",
            f"total_cost: {report.cost.total!r}",
            f"winning_restart: {report.restart_index}",
            f"epochs_run: {report.epochs_run}",
            f"moves_made: {report.moves_made}",
            f"clusters_deleted: {report.clusters_deleted}",
            "epochs_per_restart: " + " ".join(str(e) for e in report.epochs_per_restart),
            "assignment:",
        ]
        body = "\n".join(lines) + "\n"
        body += "\n".join(str(int(c)) for c in report.clustering.assignment) + "\n"
        _atomic_write(out_path, body)
        return 0
    except (CecibError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def read_run_output(path):
    """Parse a run document back into (fields dict, assignment array)."""
    fields = {}
    assignment = []
    in_assignment = False
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if in_assignment:
            if line.strip():
                assignment.append(int(line))
            continue
        if line.strip() == "assignment:":
            in_assignment = True
            continue
        key, _, value = line.partition(": ")
        fields[key] = value
    return fields, np.asarray(assignment, dtype=np.int64)


def manifest_from_output(path, output: str) -> RunManifest:
    """Rebuild a manifest from a run document's echoed header."""
    fields, _ = read_run_output(path)
    return RunManifest(
        input=fields["input"],
        output=output,
        label_column=None if fields["label_column"] == "-" else fields["label_column"],
        beta=float(fields["beta"]),
        k_init=int(fields["k_init"]),
        epsilon=float(fields["epsilon"]),
        restarts=int(fields["restarts"]),
        max_epochs=int(fields["max_epochs"]),
        seed=int(fields["seed"]),
        ridge=None if fields["ridge"] == "auto" else float(fields["ridge"]),
        pca_dims=None if fields["pca_dims"] == "-" else int(fields["pca_dims"]),
    )


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(
        prog="cecib",
        description="Semi-supervised model-based clustering with partial labels.",
    )
    parser.add_argument("--input", required=True, help="CSV file with a header row")
    parser.add_argument("--label-col", default=None, help="name of the label column")
    parser.add_argument("--beta", default="1.0",
                        help="consistency weight: a float or 'auto:halves'")
    parser.add_argument("--k-init", type=int, default=10, help="initial cluster count")
    parser.add_argument("--epsilon", type=float, default=0.02,
                        help="delete clusters below this mass fraction")
    parser.add_argument("--restarts", type=int, default=10)
    parser.add_argument("--max-epochs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--ridge", default="auto",
                        help="covariance regulariser: a float or 'auto'")
    parser.add_argument("--pca", type=int, default=None, metavar="D",
                        help="reduce to D principal components first")
    parser.add_argument("--output", required=True, help="where to write the run document")
    parser.add_argument("--grid", default=None,
                        help="protocol grid, e.g. 'fractions=0,0.1,0.3;noises=0;betas=0,1'")
    args = parser.parse_args(argv)
    try:
        manifest = RunManifest(
            input=args.input,
            output=args.output,
            label_column=args.label_col,
            beta=resolve_beta(args.beta),
            k_init=args.k_init,
            epsilon=args.epsilon,
            restarts=args.restarts,
            max_epochs=args.max_epochs,
            seed=args.seed,
            ridge=None if args.ridge == "auto" else float(args.ridge),
            pca_dims=args.pca,
            grid=args.grid,
        )
    except (CecibError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        sys.exit(2)
    sys.exit(cli_run(manifest))


if __name__ == "__main__":
    main()
