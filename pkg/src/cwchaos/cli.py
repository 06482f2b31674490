"""Command-line front end: ``cwchaos <command> [--flags]``.

Tables go out as CSV (default) or JSON, floats with 12 significant digits.
Exit status is 0 on success, 1 on a domain error (reported on stderr as JSON
with the error class name) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, dist, model, tv
from .errors import DomainError

COMMANDS = ("solve", "pmf", "marginal", "tv", "limit", "llt", "gap34", "gap36", "sweep",
            "critical", "urn")
TABLE_FIELDS = ("N", "k", "observed", "predicted", "gap")


@dataclass
class RunConfig:
    command: str
    beta: float | None = None
    h: float = 0.0
    N: int | None = None
    k: int | None = None
    alpha: float | None = None
    Ns: list = field(default_factory=list)
    output_format: str | None = None
    output_path: str | None = None
    seed: int = 0
    threads: int | None = None
    v1sq: float | None = None
    v2sq: float | None = None
    a: float | None = None
    b: float | None = None
    draws: int = 100_000


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    return x


def _cell(x) -> str:
    x = _fmt(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def render(fields, rows, output_format: str) -> str:
    """Text for a list of row dicts in CSV or JSON."""
    if output_format == "json":
        return json.dumps([{f: _fmt(r[f]) for f in fields} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_cell(r[f]) for f in fields])
    return buf.getvalue()


def render_record(record: dict, output_format: str) -> str:
    if output_format == "json":
        return json.dumps({key: _fmt(v) for key, v in record.items()}, indent=2) + "\n"
    return render(list(record), [record], "csv")


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write output to {path}: {exc.strerror or exc}") from exc


def emit_table(table: analysis.ConvergenceTable, output_format: str = "csv",
               path: str | None = None) -> None:
    rows = [{f: getattr(r, f) for f in TABLE_FIELDS} for r in table.rows]
    _write(render(TABLE_FIELDS, rows, output_format), path)


def _params(cfg: RunConfig) -> model.ModelParams:
    if cfg.beta is None:
        raise UsageError("--beta is required")
    return model.ModelParams(cfg.beta, cfg.h)


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _k_for(cfg: RunConfig, N: int) -> tuple[int, float]:
    """Resolve exactly one of --k / --alpha into (k, alpha)."""
    if (cfg.k is None) == (cfg.alpha is None):
        raise UsageError("supply exactly one of --k and --alpha")
    if cfg.k is not None:
        return cfg.k, cfg.k / N
    return analysis.sample_size(N, cfg.alpha), cfg.alpha


def _grid(cfg: RunConfig) -> list:
    if cfg.Ns and cfg.N is not None:
        raise UsageError("supply only one of --N and --Ns")
    if cfg.Ns:
        return list(cfg.Ns)
    return [_need(cfg.N, "--N or --Ns")]


def _pmf_rows(pmf: model.Pmf) -> list:
    return [{"j": int(j), "probability": float(p)} for j, p in zip(pmf.support, pmf.probs)]


def _execute(cfg: RunConfig) -> None:
    cmd = cfg.command
    table_fmt = cfg.output_format or "csv"
    record_fmt = cfg.output_format or "json"
    out = cfg.output_path

    if cmd == "solve":
        p = _params(cfg)
        mag = model.solve_magnetization(p)
        g = model.gamma_pair(p)
        _write(render_record({"beta": p.beta, "h": p.h, "regime": p.regime.value, "m": mag.m,
                              "v2": mag.v2, "gamma1": g.gamma1, "gamma2": g.gamma2},
                             record_fmt), out)
    elif cmd == "pmf":
        pmf = model.exact_spin_count_pmf(_need(cfg.N, "--N"), _params(cfg))
        _write(render(("j", "probability"), _pmf_rows(pmf), table_fmt), out)
    elif cmd == "marginal":
        N = _need(cfg.N, "--N")
        k, _ = _k_for(cfg, N)
        pmf = dist.marginal_spin_count_pmf(N, k, _params(cfg))
        _write(render(("j", "probability"), _pmf_rows(pmf), table_fmt), out)
    elif cmd == "tv":
        if cfg.v1sq is not None or cfg.v2sq is not None:
            v1, v2 = _need(cfg.v1sq, "--v1sq"), _need(cfg.v2sq, "--v2sq")
            _write(render_record({"v1sq": v1, "v2sq": v2, "closed_form": tv.gaussian_tv(v1, v2),
                                  "quadrature": tv.gaussian_tv_quadrature(v1, v2)},
                                 record_fmt), out)
        else:
            p = _params(cfg)
            N = _need(cfg.N, "--N")
            k, alpha = _k_for(cfg, N)
            p.require_noncritical()
            row = analysis.theorem1_row(p, N, k, min(1.0, alpha))
            emit_table(analysis.ConvergenceTable([row]), table_fmt, out)
    elif cmd == "limit":
        pred = analysis.theorem1_limit(_params(cfg), _need(cfg.alpha, "--alpha"))
        _write(render_record({"regime": pred.regime.value, "alpha": pred.alpha,
                              "predicted_tv": pred.predicted_tv,
                              "sigma_alpha_sq": pred.sigma_alpha_sq,
                              "binomial_variance": pred.binomial_variance,
                              "reference": repr(pred.reference_law)}, record_fmt), out)
    elif cmd == "llt":
        p = _params(cfg)
        rows = [{"N": N, "sup_error": analysis.llt_sup_error(N, p)} for N in _grid(cfg)]
        _write(render(("N", "sup_error"), rows, table_fmt), out)
    elif cmd in ("gap34", "gap36"):
        p = _params(cfg)
        if cmd == "gap36" and p.h != 0:
            raise UsageError("gap36 is defined at h = 0 only")
        Ns = _grid(cfg)
        rows = []
        for N in Ns:
            k, _ = _k_for(cfg, N)
            g = (analysis.theorem36_gap(N, k, p.beta) if cmd == "gap36"
                 else analysis.theorem34_gap(N, k, p))
            rows.append(analysis.Row(N, k, g, 0.0, g))
        emit_table(analysis.ConvergenceTable(rows), table_fmt, out)
    elif cmd == "sweep":
        if not cfg.Ns:
            raise UsageError("--Ns is required")
        table = analysis.theorem1_empirical(_params(cfg), _need(cfg.alpha, "--alpha"), cfg.Ns,
                                            threads=cfg.threads)
        emit_table(table, table_fmt, out)
    elif cmd == "critical":
        rows = [{"N": N, "distance": analysis.critical_cdf_distance(N)} for N in _grid(cfg)]
        _write(render(("N", "distance"), rows, table_fmt), out)
    elif cmd == "urn":
        k = _need(cfg.k, "--k")
        a, b = _need(cfg.a, "--a"), _need(cfg.b, "--b")
        draws = dist.polya_urn_draws(k, a, b, cfg.draws, cfg.seed)
        counts = np.bincount(draws, minlength=k + 1)
        exact = dist.beta_binomial_pmf(k, a, b).probs
        rows = [{"j": j, "count": int(counts[j]), "empirical": counts[j] / cfg.draws,
                 "exact": exact[j]} for j in range(k + 1)]
        _write(render(("j", "count", "empirical", "exact"), rows, table_fmt), out)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown command {cmd!r}")


def run(cfg: RunConfig) -> int:
    try:
        _execute(cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except DomainError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc)}) + "\n")
        return 1
    return 0


def _int_list(text: str) -> list:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _default_threads() -> int:
    env = os.environ.get("CW_CHAOS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cwchaos",
                                     description="Exact Curie-Weiss marginals and their limits.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--beta", type=float)
        p.add_argument("--h", type=float, default=0.0)
        p.add_argument("--N", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--Ns", type=_int_list, default=[])
        p.add_argument("--format", choices=("csv", "json"), dest="output_format")
        p.add_argument("--output", dest="output_path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int)
        if name == "tv":
            p.add_argument("--v1sq", type=float)
            p.add_argument("--v2sq", type=float)
        if name == "urn":
            p.add_argument("--a", type=float)
            p.add_argument("--b", type=float)
            p.add_argument("--draws", type=int, default=100_000)
    return parser


def parse_config(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    if args.get("threads") is None:
        args["threads"] = _default_threads()
    return RunConfig(**args)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
