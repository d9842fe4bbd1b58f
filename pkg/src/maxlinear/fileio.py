"""File formats: DAG text/JSON, matrix CSV/JSON, sample CSV, labeled
scaling/covariance exports, learn-result reports, and DOT graphs.

Formats are deliberately small and stable:

* DAG text: a ``nodes: d`` header line, then one ``j -> i`` edge per
  line (j is the parent); blank lines and ``#`` comments are ignored.
* DAG JSON: ``{"nodes": d, "edges": [[j, i], ...]}``.
* Matrix CSV: plain d rows of comma-separated numbers, no header.
* Sample CSV: one header row of column names, then one observation per
  row, dot-decimal.
* Scaling/squared-coefficient JSON: entries carry their (i, j) pair and
  node subset explicitly so the vector layout is unambiguous.

All writes are deterministic: fixed float formatting, no timestamps.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .dag import DagStructure
from .errors import FileFormatError, ValidationError
from .identify import index_pairs, subset_at, vector_length
from .ordering import LearnResult

FLOAT_FMT = "%.17g"


def _fmt(v: float) -> str:
    return FLOAT_FMT % float(v)


# ---------------------------------------------------------------------------
# DAG


def write_dag_text(dag: DagStructure, path: str | Path) -> None:
    lines = [f"nodes: {dag.node_count}"]
    lines += [f"{j} -> {i}" for j, i in sorted(dag.edges)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_dag_text(path: str | Path) -> DagStructure:
    """Parse the ``nodes:`` header plus ``j -> i`` edge lines."""
    node_count = None
    edges: list[tuple[int, int]] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("nodes:"):
            node_count = int(line.split(":", 1)[1])
            continue
        if "->" not in line:
            raise FileFormatError(f"cannot parse DAG line: {raw!r}")
        left, right = line.split("->", 1)
        try:
            edges.append((int(left), int(right)))
        except ValueError as exc:
            raise FileFormatError(f"cannot parse DAG line: {raw!r}") from exc
    if node_count is None:
        raise FileFormatError("DAG file is missing the 'nodes: d' header")
    return DagStructure(node_count, edges)


def write_dag_json(dag: DagStructure, path: str | Path) -> None:
    payload = {
        "nodes": dag.node_count,
        "edges": [[j, i] for j, i in sorted(dag.edges)],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_dag_json(path: str | Path) -> DagStructure:
    try:
        payload = json.loads(Path(path).read_text())
        return DagStructure(int(payload["nodes"]), [tuple(e) for e in payload["edges"]])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot parse DAG JSON {path}: {exc}") from exc


def read_dag_auto(path: str | Path) -> DagStructure:
    p = Path(path)
    if p.suffix.lower() == ".json":
        return read_dag_json(p)
    return read_dag_text(p)


# ---------------------------------------------------------------------------
# matrices and samples


def write_matrix_csv(matrix: np.ndarray, path: str | Path) -> None:
    a = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in a:
            writer.writerow([_fmt(v) for v in row])


def read_matrix_csv(path: str | Path) -> np.ndarray:
    try:
        a = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise FileFormatError(f"cannot parse matrix CSV {path}: {exc}") from exc
    return a


def write_matrix_json(matrix: np.ndarray, path: str | Path) -> None:
    a = np.asarray(matrix, dtype=np.float64)
    payload = {"d": a.shape[0], "matrix": [[float(v) for v in row] for row in a]}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_matrix_json(path: str | Path) -> np.ndarray:
    """Read a square matrix from JSON.

    Accepts either a plain matrix payload (key ``matrix``) or a
    simulation metadata payload (key ``coefficients``), so a learn run
    can point directly at the ``model.json`` a simulate run wrote.
    """
    try:
        payload = json.loads(Path(path).read_text())
        key = "matrix" if "matrix" in payload else "coefficients"
        return np.asarray(payload[key], dtype=np.float64)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot parse matrix JSON {path}: {exc}") from exc


def default_column_names(d: int) -> list[str]:
    return [f"X{i}" for i in range(1, d + 1)]


def write_sample_csv(
    x: np.ndarray, path: str | Path, columns: Sequence[str] | None = None
) -> None:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValidationError("sample must be a 2-D matrix")
    names = list(columns) if columns is not None else default_column_names(a.shape[1])
    if len(names) != a.shape[1]:
        raise ValidationError("column-name count does not match sample width")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in a:
            writer.writerow([_fmt(v) for v in row])


def read_sample_csv(path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Read a header CSV sample; returns (matrix, column names)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError(f"sample CSV {path} is empty") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise FileFormatError(
                    f"sample CSV {path} line {lineno}: {exc}"
                ) from exc
    if not rows:
        raise FileFormatError(f"sample CSV {path} has no data rows")
    a = np.asarray(rows, dtype=np.float64)
    if a.shape[1] != len(header):
        raise FileFormatError(f"sample CSV {path}: ragged rows")
    return a, [h.strip() for h in header]


# ---------------------------------------------------------------------------
# labeled vectors and covariance matrices


def _pair_entries(vector: np.ndarray, d: int) -> list[dict]:
    v = np.asarray(vector, dtype=np.float64)
    if v.shape != (vector_length(d),):
        raise ValidationError(
            f"vector length {v.shape} does not match d(d+1)/2 for d={d}"
        )
    return [
        {"i": i, "j": j, "nodes": list(subset_at(i, j, d)), "value": float(val)}
        for (i, j), val in zip(index_pairs(d), v)
    ]


def write_scaling_vector_json(vector: np.ndarray, d: int, path: str | Path) -> None:
    """Scaling vector with explicit (i, j) labels and node subsets."""
    payload = {"d": d, "kind": "max-scalings", "entries": _pair_entries(vector, d)}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def write_squared_coefficients_json(
    vector: np.ndarray, d: int, path: str | Path
) -> None:
    entries = _pair_entries(vector, d)
    for e in entries:
        e.pop("nodes")
    payload = {"d": d, "kind": "squared-coefficients", "entries": entries}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_labeled_vector_json(path: str | Path) -> tuple[np.ndarray, int]:
    try:
        payload = json.loads(Path(path).read_text())
        d = int(payload["d"])
        v = np.zeros(vector_length(d))
        from .identify import vector_index

        for e in payload["entries"]:
            v[vector_index(int(e["i"]), int(e["j"]), d) - 1] = float(e["value"])
        return v, d
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot parse labeled vector {path}: {exc}") from exc


def _position_labels(d: int) -> list[str]:
    return [f"s{i}_{j}" for i, j in index_pairs(d)]


def write_covariance_csv(w: np.ndarray, d: int, path: str | Path) -> None:
    """Covariance over the scaling-vector layout with position labels."""
    a = np.asarray(w, dtype=np.float64)
    labels = _position_labels(d)
    if a.shape != (len(labels), len(labels)):
        raise ValidationError(f"covariance shape {a.shape} does not match d={d}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["position", *labels])
        for name, row in zip(labels, a):
            writer.writerow([name, *(_fmt(v) for v in row)])


def write_covariance_json(w: np.ndarray, d: int, path: str | Path) -> None:
    a = np.asarray(w, dtype=np.float64)
    payload = {
        "d": d,
        "labels": [[i, j] for i, j in index_pairs(d)],
        "matrix": [[float(v) for v in row] for row in a],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


# ---------------------------------------------------------------------------
# learn results and DOT


def learn_result_payload(result: LearnResult) -> dict:
    cfg = result.config
    return {
        "discovery": list(result.discovery),
        "column_order": list(result.column_order()) if result.discovery else [],
        "positions": {str(m): result.position(m) for m in result.discovery},
        "generations": [list(g) for g in result.generations]
        if result.generations is not None
        else None,
        "valid": result.valid,
        "config": {
            "a": cfg.a,
            "eps1": cfg.eps1,
            "eps2": cfg.eps2,
            "eps3": cfg.eps3,
            "mode": cfg.mode,
        },
        "passes": [
            {
                "kind": p.kind,
                "ordered_before": list(p.ordered_before),
                "accepted": list(p.accepted),
                "deltas": {
                    str(m): {"min": lo, "max": hi}
                    for m, (lo, hi) in sorted(p.deltas.items())
                },
            }
            for p in result.passes
        ],
    }


def write_learn_result_json(result: LearnResult, path: str | Path) -> None:
    Path(path).write_text(json.dumps(learn_result_payload(result), indent=2) + "\n")


def write_dot(
    coef: np.ndarray,
    path: str | Path,
    labels: Sequence[str] | None = None,
    prune: float = 0.0,
) -> None:
    """DOT graph of the DAG implied by a coefficient matrix.

    Edge j -> i appears exactly when the (i, j) off-diagonal entry
    exceeds ``prune`` (default: any positive value).
    """
    a = np.asarray(coef, dtype=np.float64)
    d = a.shape[0]
    names = list(labels) if labels is not None else default_column_names(d)
    lines = ["digraph model {"]
    for i in range(d):
        lines.append(f'  n{i + 1} [label="{names[i]}"];')
    for i in range(d):
        for j in range(d):
            if i != j and a[i, j] > prune:
                lines.append(f'  n{j + 1} -> n{i + 1} [label="{a[i, j]:.3f}"];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")
