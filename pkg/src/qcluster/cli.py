"""Command-line entry point: ``qcluster run | elbow | compare``.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from . import kernels
from .cluster import KMeansConfig, elbow_curve, suggest_k
from .errors import DataError, MetricUndefinedError, UsageError
from .ingest import UNIT_RANGE, min_max_normalize, profiles_markdown
from .pipeline import (
    LABELS,
    RunSpec,
    build_report,
    check_report,
    comparison_csv,
    comparison_rows,
    comparison_text,
    load_dataset,
    run_all,
)
from .svg import elbow_svg, scatter_svg

log = logging.getLogger("qcluster")

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4

DEFAULTS = {
    "input": None,
    "algorithm": "all",
    "k": 4,
    "seed": 0,
    "restarts": 10,
    "shots": None,
    "year": "2022",
    "out": "out",
    "kernel_measurement": "all_zeros",
    "angle_encoding": "full",
    "k_min": 1,
    "k_max": 10,
}
INT_KEYS = ("k", "seed", "restarts", "shots", "k_min", "k_max")


def read_config(path) -> dict:
    """Parse a ``key = value`` file (``#`` comments; dashes in keys allowed)."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    opts = dict(DEFAULTS)
    if args.config:
        opts.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    for key in INT_KEYS:
        if opts[key] is not None and not isinstance(opts[key], int):
            try:
                opts[key] = int(opts[key])
            except ValueError:
                raise UsageError(f"{key} must be an integer, got {opts[key]!r}") from None
    year = opts["year"]
    opts["year"] = None if str(year).lower() in ("all", "none", "") else _as_int("year", year)
    if not opts["input"]:
        raise UsageError("--input is required (flag or config file)")
    return opts


def _as_int(key, value) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {value!r}") from None


def spec_from(opts: dict) -> RunSpec:
    return RunSpec(
        input_path=opts["input"],
        algorithm=opts["algorithm"],
        k=opts["k"],
        seed=opts["seed"],
        restarts=opts["restarts"],
        shots=opts["shots"],
        output_dir=opts["out"],
        year_filter=opts["year"],
        kernel_measurement=opts["kernel_measurement"],
        angle_encoding=opts["angle_encoding"],
    )


def write_outputs(out_dir, files: dict[str, str]) -> None:
    """Write every file via a temp file + rename so none is ever truncated."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, out / name)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_run(opts: dict) -> int:
    spec = spec_from(opts)
    ds, runs = run_all(spec)
    report = build_report(spec, ds, runs, _timestamp())
    report["timing"]["backend"] = kernels.BACKEND
    check_report(report, runs)
    rows = comparison_rows(runs)
    files = {
        "report.json": json.dumps(report, indent=2) + "\n",
        "metrics.csv": comparison_csv(rows),
        "profiles.md": "# Cluster profiles\n\n" + "\n".join(
            profiles_markdown(LABELS[r.name], r.profiles) for r in runs
        ),
    }
    for r in runs:
        files[f"scatter_{r.name}.svg"] = scatter_svg(
            r.features, r.result.assignments, r.plot_centroids, LABELS[r.name], r.value_range
        )
    write_outputs(spec.output_dir, files)
    print(comparison_text(rows), end="")
    print(f"wrote {len(files)} files to {spec.output_dir}")
    return 0


def cmd_compare(opts: dict) -> int:
    opts = {**opts, "algorithm": "all"}
    spec = spec_from(opts)
    _, runs = run_all(spec)
    rows = comparison_rows(runs)
    text = comparison_text(rows)
    write_outputs(spec.output_dir, {"comparison.csv": comparison_csv(rows), "comparison.txt": text})
    print(text, end="")
    return 0


def cmd_elbow(opts: dict) -> int:
    spec = spec_from(opts)
    ds = load_dataset(spec.input_path, spec.year_filter)
    k_max = min(opts["k_max"], ds.m)
    features = min_max_normalize(ds.raw, UNIT_RANGE)
    curve = elbow_curve(features, opts["k_min"], k_max, KMeansConfig(k=1, seed=spec.seed), spec.restarts)
    best = suggest_k(curve)
    csv_text = "k,wcss\n" + "".join(f"{k},{w!r}\n" for k, w in curve)
    write_outputs(spec.output_dir, {"elbow.csv": csv_text, "elbow.svg": elbow_svg(curve, best)})
    print(csv_text, end="")
    print(f"suggested k = {best}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="KEV catalog CSV")
    common.add_argument("--k", type=int, help="number of clusters (default 4)")
    common.add_argument("--seed", type=int, help="base random seed (default 0)")
    common.add_argument("--restarts", type=int, help="restarts per algorithm (default 10)")
    common.add_argument("--shots", type=int, help="sample fidelities with this many shots (default exact)")
    common.add_argument("--year", help="keep records added in this year; 'all' disables (default 2022)")
    common.add_argument("--out", help="output directory (default ./out)")
    common.add_argument("--config", help="key = value config file; flags take precedence")
    common.add_argument("--kernel-measurement", dest="kernel_measurement",
                        choices=("all_zeros", "first_qubit"), help="kernel readout (default all_zeros)")
    common.add_argument("--angle-encoding", dest="angle_encoding", choices=("full", "half"),
                        help="full: RY(2x) per feature (default); half: RY(x)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qcluster", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="cluster and write report, metrics, profiles, plots")
    run.add_argument("--algorithm", choices=("kmeans", "spectral", "qcswap_kmeans", "qkernel_kmeans", "all"))
    sub.add_parser("compare", parents=[common], help="metric table for all four algorithms")
    elbow = sub.add_parser("elbow", parents=[common], help="WCSS versus k for classical K-means")
    elbow.add_argument("--k-min", dest="k_min", type=int)
    elbow.add_argument("--k-max", dest="k_max", type=int)
    return parser


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "elbow": cmd_elbow}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](resolve_options(args))
    except UsageError as exc:
        print(f"qcluster: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, MetricUndefinedError) as exc:
        print(f"qcluster: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"qcluster: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
