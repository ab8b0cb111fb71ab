"""``jackstein`` command line: measure, chain, sample, clt, verify, theta.

Exit status is 0 on success, 1 when ``verify`` finds a failing check and 2
for usage errors (bad alpha text, alpha < 1 for a chain, unknown kind, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chains import (
    AlphaRangeError,
    KINDS,
    chain_step_distribution,
    check_chain_alpha,
    get_chain,
    jack_distribution,
)
from .io import dist_to_json, float15, matrix_to_csv, to_jsonable
from .partitions import (
    Partition,
    check_alpha,
    format_partition,
    format_scalar,
    parse_partition,
    parse_scalar,
)
from .sampling import MASK64, chi_square_test, exchangeable_pair_sample, make_rng, sample_shapes
from .stein import stein_upper_bound, w_law, w_scale, w_statistic
from .symfunc import jack_theta_table
from .verify import DEFAULT_ALPHAS, DEFAULT_CAP, run_suite

EXACT_SAMPLE_CAP = 30
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    alpha: Fraction
    seed: int = DEFAULT_SEED
    samples: int = 10_000
    fmt: str = "pretty"

    def __post_init__(self):
        if self.alpha <= 0:
            raise UsageError(f"alpha must be positive, got {format_scalar(self.alpha)}")
        if not 0 <= self.seed <= MASK64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.fmt not in ("csv", "json", "pretty"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _f(x) -> str:
    return f"{float(x):.15g}"


def _table(header: Sequence[str], rows: list[Sequence], fmt: str) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"


# ---- subcommands ----------------------------------------------------------

def cmd_measure(cfg: RunConfig) -> str:
    dist = jack_distribution(cfg.n, cfg.alpha)
    if cfg.fmt == "json":
        return dist_to_json(dist) + "\n"
    rows = [[format_partition(lam), format_scalar(p), _f(p)] for lam, p in dist.items()]
    rows.append(["total", format_scalar(dist.total()), _f(dist.total())])
    return _table(["partition", "exact", "float"], rows, cfg.fmt)


def cmd_chain(cfg: RunConfig, kind: str, steps: Optional[int], start: Optional[Partition]) -> str:
    if kind not in KINDS:
        raise UsageError(f"unknown chain kind {kind!r}; choose from {', '.join(KINDS)}")
    if cfg.n < 2:
        raise UsageError("chains need n >= 2")
    chain = get_chain(kind, cfg.n, cfg.alpha)
    if steps is None:
        if cfg.fmt == "csv":
            return matrix_to_csv(chain)
        labels = [format_partition(p) for p in chain.partitions]
        dense = chain.dense()
        if cfg.fmt == "json":
            return json.dumps({
                "kind": kind, "n": cfg.n, "alpha": format_scalar(cfg.alpha), "labels": labels,
                "exact": [[format_scalar(x) for x in row] for row in dense],
                "float": [[float15(float(x)) for x in row] for row in dense],
            }, indent=2) + "\n"
        rows = [[lab] + [format_scalar(x) for x in row] for lab, row in zip(labels, dense)]
        return f"{kind} chain, n={cfg.n}, alpha={format_scalar(cfg.alpha)}\n" + _table([kind] + labels, rows, "pretty")
    if steps < 0:
        raise UsageError("--steps must be nonnegative")
    start = start if start is not None else Partition([1] * cfg.n)
    if sum(start) != cfg.n:
        raise UsageError(f"start {format_partition(start)} is not a partition of {cfg.n}")
    dist = chain_step_distribution(chain, start, steps)
    if cfg.fmt == "json":
        return dist_to_json(dist) + "\n"
    rows = [[format_partition(lam), format_scalar(p), _f(p)] for lam, p in dist.items()]
    return _table(["partition", "exact", "float"], rows, cfg.fmt)


def cmd_sample(cfg: RunConfig, pairs: bool = False) -> str:
    if cfg.samples < 1:
        raise UsageError("--samples must be at least 1")
    rng = make_rng(cfg.seed)
    a = cfg.alpha
    if pairs:
        if cfg.n < 2:
            raise UsageError("exchangeable pairs need n >= 2")
        check_chain_alpha(a)
        draws = [exchangeable_pair_sample(cfg.n, a, rng) for _ in range(cfg.samples)]
        shapes = [lam for lam, _ in draws]
    else:
        shapes = sample_shapes(cfg.n, a, rng, cfg.samples)
    counts = Counter(shapes)
    report: dict = {"n": cfg.n, "alpha": format_scalar(a), "seed": cfg.seed, "samples": cfg.samples}
    if cfg.n >= 2:
        root = math.sqrt(w_scale(cfg.n, a))
        ws = [float(w_statistic(lam, a).raw) / root for lam in shapes]
        mean = sum(ws) / len(ws)
        report["w_mean"] = float15(mean)
        report["w_variance"] = float15(sum((w - mean) ** 2 for w in ws) / len(ws))
        report["w_third_moment"] = float15(sum(w**3 for w in ws) / len(ws))
        raw_counts = Counter(w_statistic(lam, a).raw for lam in shapes)
        exact = dict(w_law(cfg.n, a)) if cfg.n <= EXACT_SAMPLE_CAP else {}
        report["w_histogram"] = [
            {"raw": format_scalar(r), "w": float15(float(r) / root), "count": raw_counts[r],
             "freq": float15(raw_counts[r] / cfg.samples),
             "exact": format_scalar(exact[r]) if r in exact else None}
            for r in sorted(raw_counts)
        ]
        if pairs:
            jumps = [float(w_statistic(b, a).raw - w_statistic(l, a).raw) / root for l, b in draws]
            report["pair_mean_sq_jump"] = float15(sum(j * j for j in jumps) / len(jumps))
            report["pair_mean_abs_cube_jump"] = float15(sum(abs(j) ** 3 for j in jumps) / len(jumps))
    if cfg.n <= EXACT_SAMPLE_CAP:
        chi = chi_square_test(counts, dict(jack_distribution(cfg.n, a).items()))
        report["chi_square"] = {
            "statistic": float15(chi.statistic), "dof": chi.dof, "p_value": float15(chi.p_value),
            "critical_0.999": float15(chi.critical), "passed": chi.passed,
        }
    if cfg.fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if cfg.fmt == "csv":
        rows = [[format_partition(lam), counts[lam], _f(counts[lam] / cfg.samples)]
                for lam in sorted(counts, reverse=True)]
        return _table(["partition", "count", "freq"], rows, "csv")
    out = [f"{k}: {v}" for k, v in report.items() if k not in ("w_histogram", "chi_square")]
    if "w_histogram" in report:
        out.append(_table(["raw", "w", "count", "freq", "exact"],
                          [[h["raw"], h["w"], h["count"], h["freq"], h["exact"] or "-"]
                           for h in report["w_histogram"]], "pretty").rstrip())
    if "chi_square" in report:
        c = report["chi_square"]
        out.append(f"chi-square: {c['statistic']} on {c['dof']} dof, p={c['p_value']}, "
                   f"critical(0.999)={c['critical_0.999']}, {'pass' if c['passed'] else 'FAIL'}")
    return "\n".join(out) + "\n"


CLT_COLUMNS = ("n", "distance", "bound", "distance_n14", "bound_n14", "term1_w", "term3")


def cmd_clt(cfg: RunConfig, n_list: Sequence[int]) -> str:
    a = check_chain_alpha(cfg.alpha)
    rows = []
    for n in n_list:
        if n < 2:
            raise UsageError("clt needs every n >= 2")
        rep = stein_upper_bound(n, a)
        q = n ** 0.25
        rows.append([n, _f(rep.kolmogorov), _f(rep.bound), _f(rep.kolmogorov * q), _f(rep.bound * q),
                     _f(rep.term1_w), _f(rep.term3)])
    if cfg.fmt == "json":
        return json.dumps([dict(zip(CLT_COLUMNS, (r[0], *map(_num, r[1:])))) for r in rows], indent=2) + "\n"
    head = f"alpha={format_scalar(a)}\n" if cfg.fmt == "pretty" else ""
    return head + _table(CLT_COLUMNS, rows, cfg.fmt)


def _num(text: str):
    return text if "/" in text else float(text)


def cmd_verify(cfg: RunConfig, alphas: Optional[Sequence[Fraction]] = None, cap: int = DEFAULT_CAP,
               stream=None) -> tuple[str, bool]:
    if cfg.n > cap:
        raise UsageError(f"verify refuses n={cfg.n}: the exact cap is n <= {cap}")
    result = run_suite(cfg.n, alphas or DEFAULT_ALPHAS, cap=cap)
    if cfg.fmt == "json":
        text = json.dumps(to_jsonable(result), indent=2) + "\n"
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}" + (f"  [{r.witness}]" if r.witness else "")
                 for r in result.results]
        bad = len(result.failures)
        lines.append(f"{len(result.results) - bad} passed, {bad} failed")
        text = "\n".join(lines) + "\n"
    return text, result.passed


def cmd_theta(cfg: RunConfig) -> str:
    if cfg.n < 1:
        raise UsageError("theta needs n >= 1")
    theta = jack_theta_table(cfg.n, cfg.alpha)
    if cfg.fmt == "json":
        return json.dumps({
            "n": cfg.n, "alpha": format_scalar(cfg.alpha),
            "rows": {format_partition(lam): {format_partition(mu): format_scalar(theta[lam, mu])
                                             for mu in theta.partitions} for lam in theta.partitions},
        }, indent=2) + "\n"
    return theta.to_csv()


# ---- argument handling ----------------------------------------------------

def _options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", default=None, help="size; clt also accepts a comma list")
    common.add_argument("--alpha", default=None, help="positive rational as P/Q or an integer (default 1)")
    common.add_argument("--kind", default="M", help="chain kind: M, L or K")
    common.add_argument("--steps", type=int, default=None)
    common.add_argument("--start", default=None, help="partition such as [2,1^3]")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--format", dest="fmt", choices=("csv", "json", "pretty"), default="pretty")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    parser = argparse.ArgumentParser(prog="jackstein", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("measure", parents=[common], help="tabulate Jack measure")
    sub.add_parser("chain", parents=[common], help="M, L or K transition matrix or r-step law")
    p = sub.add_parser("sample", parents=[common], help="seeded Monte Carlo summary of W")
    p.add_argument("--pairs", action="store_true", help="draw exchangeable pairs (W, W*)")
    p = sub.add_parser("clt", parents=[common], help="Kolmogorov distance and Stein bound sweep")
    p.add_argument("--n-list", default=None, help="comma separated sizes")
    p = sub.add_parser("verify", parents=[common], help="run every exact identity check")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sub.add_parser("theta", parents=[common], help="dump power-sum coefficients of Jack polynomials")
    return parser


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None


def _dispatch(args) -> tuple[str, int]:
    try:
        alpha = check_alpha(parse_scalar(args.alpha or "1"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n_text = args.n
    if args.command == "clt":
        n_list = _int_list(args.n_list or n_text or "")
        if not n_list:
            raise UsageError("clt needs -n or --n-list")
        n = n_list[0]
    else:
        if args.command == "verify" and n_text is None:
            n_text = str(DEFAULT_CAP)
        if n_text is None:
            raise UsageError(f"{args.command} needs -n")
        ns = _int_list(n_text)
        if len(ns) != 1 or ns[0] < 0:
            raise UsageError(f"-n must be one nonnegative integer, got {n_text!r}")
        n = ns[0]
    cfg = RunConfig(n=n, alpha=alpha, seed=args.seed, samples=args.samples, fmt=args.fmt)
    if args.command == "measure":
        return cmd_measure(cfg), 0
    if args.command == "chain":
        try:
            start = parse_partition(args.start) if args.start else None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return cmd_chain(cfg, args.kind.upper(), args.steps, start), 0
    if args.command == "sample":
        return cmd_sample(cfg, pairs=args.pairs), 0
    if args.command == "clt":
        return cmd_clt(cfg, n_list), 0
    if args.command == "verify":
        alphas = [alpha] if args.alpha is not None else None
        text, ok = cmd_verify(cfg, alphas, cap=args.cap)
        return text, 0 if ok else 1
    return cmd_theta(cfg), 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _options()
    args = parser.parse_args(argv)
    try:
        text, status = _dispatch(args)
    except AlphaRangeError as exc:
        print(f"jackstein: error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"jackstein: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
