"""CSV / JSON round-tripping for matrices, distributions and reports.

Exact values are written as ``"num/den"`` (or an integer); floats are
rounded to 15 significant digits.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction
from typing import Any, Iterable

from .chains import DistOverPartitions, TransitionMatrix
from .partitions import (
    Partition,
    ScalarLike,
    check_alpha,
    enumerate_partitions,
    format_partition,
    format_scalar,
    parse_partition,
    parse_scalar,
)
from .residual import Residual


def float15(x: float) -> float:
    return float(f"{x:.15g}")


def matrix_to_csv(chain: TransitionMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"{chain.kind}"] + [format_partition(p) for p in chain.partitions])
    for lam, row in zip(chain.partitions, chain.dense()):
        w.writerow([format_partition(lam)] + [format_scalar(x) for x in row])
    return buf.getvalue()


def matrix_from_csv(text: str, alpha: ScalarLike) -> TransitionMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    kind = rows[0][0]
    labels = [parse_partition(x) for x in rows[0][1:]]
    n = sum(labels[0])
    if tuple(labels) != enumerate_partitions(n):
        raise ValueError("matrix columns are not in canonical order")
    out = []
    for lam, row in zip(labels, rows[1:]):
        if parse_partition(row[0]) != lam:
            raise ValueError("matrix rows are not in canonical order")
        out.append({j: v for j, v in enumerate(parse_scalar(x) for x in row[1:]) if v})
    return TransitionMatrix(n, check_alpha(alpha), kind, tuple(out))


def dist_to_json(dist: DistOverPartitions) -> str:
    return json.dumps({format_partition(lam): format_scalar(p) for lam, p in dist.items()}, indent=2)


def dist_from_json(text: str, alpha: ScalarLike) -> DistOverPartitions:
    data = {parse_partition(k): parse_scalar(v) for k, v in json.loads(text).items()}
    n = sum(next(iter(data)))
    probs = tuple(data.get(lam, Fraction(0)) for lam in enumerate_partitions(n))
    if sum(probs) != sum(data.values()):
        raise ValueError("distribution keys are not partitions of one size")
    return DistOverPartitions(n, check_alpha(alpha), probs)


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return float15(value)
    if isinstance(value, Partition):
        return format_partition(value)
    if isinstance(value, Residual):
        return {"value": format_scalar(value.value), "witness": to_jsonable(value.witness)}
    if dataclasses.is_dataclass(value):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def report_to_json(report: Any) -> str:
    return json.dumps(to_jsonable(report), indent=2)


SWEEP_COLUMNS = ("n", "alpha", "quantity", "exact", "float")


def sweep_to_csv(rows: Iterable[tuple[int, Fraction, str, Any, float]]) -> str:
    """Rows of ``(n, alpha, quantity, exact or None, float)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for n, alpha, name, exact, approx in rows:
        w.writerow([
            n,
            format_scalar(alpha),
            name,
            "" if exact is None else format_scalar(exact),
            f"{approx:.15g}",
        ])
    return buf.getvalue()
