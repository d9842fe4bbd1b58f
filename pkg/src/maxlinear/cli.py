"""Command-line interface.

Subcommands: simulate | learn | study | extremes | transform.

Options can come from a single JSON config file (``--config``) whose
keys match the long option names with dashes replaced by underscores;
explicit command-line flags always win over config-file values.

Exit codes: 0 success; 2 validation/config error; 3 a threshold could
not be met or no initial node was found; 4 file I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    EmptyGenerationError,
    FileFormatError,
    NoInitialNodeError,
    ThresholdError,
    ValidationError,
)
from .pipeline import (
    ExtremesConfig,
    LearnConfig,
    SimulateConfig,
    StudyConfig,
    TransformConfig,
    run_extremes,
    run_learn,
    run_simulate,
    run_study,
    run_transform,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_THRESHOLD = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxlinear",
        description=(
            "Structure learning and coefficient estimation for recursive "
            "max-linear models on DAGs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--config",
            help="JSON config file; explicit flags override its values",
        )

    p = sub.add_parser("simulate", help="simulate a max-linear sample")
    add_config(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--dag", help="'ten-node' preset or a DAG file (text/JSON)")
    p.add_argument(
        "--weights",
        help="'preset', 'paper' (random draw), 'unit', or a matrix file",
    )
    p.add_argument("--n", type=int, help="number of observations")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--workers", type=int, help="simulation worker threads")

    p = sub.add_parser("learn", help="learn order and coefficients")
    add_config(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--data", help="sample CSV (estimated mode)")
    p.add_argument(
        "--model", help="coefficient matrix file (exact-scalings mode)"
    )
    p.add_argument("--k", type=int, help="radial threshold count (default ceil(sqrt(n)))")
    p.add_argument("--a", type=float, help="scaling factor a > 1")
    p.add_argument("--eps1", type=float, help="initial-pass upper tolerance")
    p.add_argument("--eps2", type=float, help="initial-pass lower tolerance")
    p.add_argument("--eps3", type=float, help="generation-pass tolerance")
    p.add_argument(
        "--transform",
        choices=["frechet", "negate-frechet", "none"],
        help="margin transform applied to the data before estimation",
    )
    p.add_argument(
        "--prune",
        type=float,
        help="zero estimated off-diagonal coefficients below this value",
    )
    p.add_argument(
        "--diagnostics",
        action="store_true",
        default=None,
        help="report degenerate recovery-variance directions",
    )

    p = sub.add_parser("study", help="reordering success study")
    add_config(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--sizes", help="comma-separated sample sizes")
    p.add_argument("--runs", type=int, help="runs per sample size")
    p.add_argument("--seed", type=int, help="master random seed")
    p.add_argument("--a", type=float, help="scaling factor a > 1")
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--eps3", type=float)
    p.add_argument(
        "--mode", choices=["estimated", "exact-scalings"], help="scaling source"
    )
    p.add_argument(
        "--weights",
        choices=["preset", "paper"],
        help="edge weights: fixed preset matrix, or redrawn from the grid per run",
    )
    p.add_argument("--workers", type=int, help="worker threads across replicates")
    p.add_argument(
        "--detail",
        action="store_true",
        default=None,
        help="also write per-run outcomes",
    )

    p = sub.add_parser("extremes", help="largest bivariate exceedances")
    add_config(p)
    p.add_argument("--data", help="sample CSV")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--pairs", help="'all' or comma list like '1-2,3-4'")
    p.add_argument("--count", type=int, help="exceedances per pair (default 50)")
    p.add_argument(
        "--source", choices=["real", "simulated", "both"], help="data source(s)"
    )
    p.add_argument("--model", help="coefficient matrix for the simulated source")
    p.add_argument("--seed", type=int, help="seed for the simulated source")

    p = sub.add_parser("transform", help="margin transforms of a sample CSV")
    add_config(p)
    p.add_argument("--data", help="input sample CSV")
    p.add_argument("--out", help="output CSV path")
    p.add_argument(
        "--ops",
        help="comma list from negate, negative-part, frechet (default frechet)",
    )

    return parser


def _load_config_file(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read config file {path}: {exc}") from exc
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FileFormatError(f"config file {path} must hold a JSON object")
    return payload


class _Options:
    """Flag values override config-file values; both override defaults."""

    def __init__(self, args: argparse.Namespace, config: dict[str, Any]):
        self._args = args
        self._config = config

    def get(self, name: str, default: Any = None) -> Any:
        flag = getattr(self._args, name, None)
        if flag is not None:
            return flag
        if name in self._config:
            return self._config[name]
        return default

    def require(self, name: str) -> Any:
        value = self.get(name)
        if value is None:
            raise ValidationError(f"missing required option: {name}")
        return value


def _parse_sizes(value: Any) -> tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    try:
        return tuple(int(tok) for tok in str(value).split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError(f"cannot parse sizes {value!r}") from exc


def _parse_ops(value: Any) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(str(v) for v in value)
    return tuple(tok.strip() for tok in str(value).split(",") if tok.strip())


def _dispatch(args: argparse.Namespace) -> None:
    opts = _Options(args, _load_config_file(getattr(args, "config", None)))
    if args.command == "simulate":
        run_simulate(
            SimulateConfig(
                out_dir=opts.require("out"),
                dag=str(opts.get("dag", "ten-node")),
                weights=str(opts.get("weights", "preset")),
                n=int(opts.get("n", 10_000)),
                seed=int(opts.get("seed", 0)),
                workers=int(opts.get("workers", 1)),
            )
        )
    elif args.command == "learn":
        k = opts.get("k")
        run_learn(
            LearnConfig(
                out_dir=opts.require("out"),
                data=opts.get("data"),
                model=opts.get("model"),
                k=int(k) if k is not None else None,
                a=_opt_float(opts, "a"),
                eps1=_opt_float(opts, "eps1"),
                eps2=_opt_float(opts, "eps2"),
                eps3=_opt_float(opts, "eps3"),
                transform=str(opts.get("transform", "frechet")),
                prune=float(opts.get("prune", 0.0)),
                diagnostics=bool(opts.get("diagnostics", False)),
            )
        )
    elif args.command == "study":
        run_study(
            StudyConfig(
                out_dir=opts.require("out"),
                sizes=_parse_sizes(opts.get("sizes", "2000,3000,5000,10000")),
                runs=int(opts.get("runs", 100)),
                seed=int(opts.get("seed", 0)),
                a=_opt_float(opts, "a"),
                eps1=_opt_float(opts, "eps1"),
                eps2=_opt_float(opts, "eps2"),
                eps3=_opt_float(opts, "eps3"),
                mode=str(opts.get("mode", "estimated")),
                weights=str(opts.get("weights", "preset")),
                workers=int(opts.get("workers", 1)),
                detail=bool(opts.get("detail", False)),
            )
        )
    elif args.command == "extremes":
        run_extremes(
            ExtremesConfig(
                out_path=opts.require("out"),
                data=opts.require("data"),
                pairs=str(opts.get("pairs", "all")),
                count=int(opts.get("count", 50)),
                source=str(opts.get("source", "real")),
                model=opts.get("model"),
                seed=int(opts.get("seed", 0)),
            )
        )
    elif args.command == "transform":
        run_transform(
            TransformConfig(
                data=opts.require("data"),
                out_path=opts.require("out"),
                ops=_parse_ops(opts.get("ops", "frechet")),
            )
        )
    else:  # pragma: no cover - argparse enforces the choices
        raise ValidationError(f"unknown command {args.command!r}")


def _opt_float(opts: _Options, name: str) -> float | None:
    value = opts.get(name)
    return float(value) if value is not None else None


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _dispatch(args)
    except (ThresholdError, NoInitialNodeError, EmptyGenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_THRESHOLD
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
