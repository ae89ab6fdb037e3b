"""``ghost`` command line: dimension tables, coefficients, slopes and theorem checks.

Exit status is 0 on success, 1 when a verification or comparison fails, and 2
for bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import analysis
from .dimensions import AxiomError, verify_axioms
from .formats import (
    FormatError,
    build_model,
    coefficients_to_json,
    format_weight,
    frac_to_str,
    model_label,
    parse_model_text,
    parse_weight,
    slopes_from_json,
    slopes_to_json,
)
from .ghost import coefficient
from .newton import ghost_polygon, ghost_slopes, wadic_slopes
from .weightspace import check_weight

log = logging.getLogger("ghostseries")

COMMANDS = ("dims", "coeffs", "slopes", "np", "dist", "gouvea", "ss", "ap", "axioms", "compare")
FORMATS = ("json", "csv", "table")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: str
    weight: Optional[str] = None
    count: Optional[int] = None
    range: Optional[tuple] = None
    n: Optional[int] = None
    up_to: Optional[int] = None
    file: Optional[str] = None
    format: str = "table"
    out: Optional[str] = None
    threads: int = 1


@dataclass
class Result:
    payload: Any
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)
    status: int = 0


def parse_range(text: str) -> tuple:
    a, sep, b = text.partition("..")
    try:
        lo, hi = (int(a), int(b)) if sep else (int(a), int(a))
    except ValueError:
        raise InputError(f"invalid range {text!r}: expected a..b") from None
    if lo > hi:
        raise InputError(f"invalid range {text!r}: start exceeds end")
    return lo, hi


def _s(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return frac_to_str(x)
    return str(x)


def _header(model, cfg: RunConfig, **extra) -> dict:
    h = {"command": cfg.command, "model": model_label(model), "p": model.params.p}
    h.update(extra)
    return h


def _weight(cfg: RunConfig, model, required=True):
    if cfg.weight is None:
        if required:
            raise InputError(f"'{cfg.command}' needs --weight")
        return None
    if cfg.weight == "wadic":
        return None
    kappa = parse_weight(cfg.weight)
    check_weight(model.params, kappa)
    return kappa


def _ns(cfg: RunConfig, default: tuple) -> list:
    if cfg.range is not None:
        lo, hi = cfg.range
    elif cfg.n is not None:
        lo = hi = cfg.n
    else:
        lo, hi = default
    return list(range(lo, hi + 1))


def _map(cfg: RunConfig, fn, items: list) -> list:
    if cfg.threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


# -- commands ------------------------------------------------------------------


def cmd_dims(model, cfg: RunConfig) -> Result:
    ns = _ns(cfg, (0, 10))
    rows = [[n, model.params.k(n), model.d(n), model.dnew(n), model.dp(n)] for n in ns]
    cols = ["n", "k", "d", "dnew", "dp"]
    return Result({"header": _header(model, cfg), "rows": [dict(zip(cols, r)) for r in rows]}, cols, rows)


def cmd_coeffs(model, cfg: RunConfig) -> Result:
    up_to = 5 if cfg.up_to is None else cfg.up_to
    if up_to < 0:
        raise InputError("--up-to must be >= 0")
    coeffs = _map(cfg, lambda i: coefficient(model, i), list(range(up_to + 1)))
    rows = [[c.i, c.degree, c.lz, c.hz, " ".join(f"{n}^{m}" for n, m in c.zeros)] for c in coeffs]
    return Result({"header": _header(model, cfg, up_to=up_to), "coefficients": coefficients_to_json(coeffs)},
                  ["i", "degree", "lz", "hz", "zeros"], rows)


def _slopes(model, cfg: RunConfig, count: int):
    kappa = _weight(cfg, model, required=False)
    if kappa is None:
        return wadic_slopes(model, count)
    return ghost_slopes(model, kappa, count)


def cmd_slopes(model, cfg: RunConfig) -> Result:
    count = 10 if cfg.count is None else cfg.count
    if count < 1:
        raise InputError("--count must be >= 1")
    seq = _slopes(model, cfg, count)
    payload = slopes_to_json(seq, model)
    rows = [[j, frac_to_str(s)] for j, s in enumerate(seq.slopes, start=1)]
    return Result(payload, ["index", "slope"], rows,
                  [("weight", payload["header"]["weight"]), ("certified", seq.certified)],
                  0 if seq.certified else 1)


def cmd_np(model, cfg: RunConfig) -> Result:
    kappa = _weight(cfg, model)
    up_to = 20 if cfg.up_to is None else cfg.up_to
    if up_to < 1:
        raise InputError("--up-to must be >= 1")
    poly = ghost_polygon(model, kappa, up_to)
    rows = [[x, frac_to_str(y)] for x, y in poly.vertices]
    payload = {
        "header": _header(model, cfg, weight=format_weight(kappa), up_to=up_to),
        "vertices": [[x, frac_to_str(y)] for x, y in poly.vertices],
        "slopes": [[frac_to_str(s), m] for s, m in poly.slopes],
    }
    return Result(payload, ["x", "y"], rows,
                  [("slopes", " ".join(f"{frac_to_str(s)}x{m}" for s, m in poly.slopes))])


def cmd_dist(model, cfg: RunConfig) -> Result:
    n = cfg.n if cfg.n is not None else 50
    r = analysis.distribution_report(model, n)
    lo, half, hi = r.limit_masses
    rows = [
        ["low", r.mass_low, lo, r.ks_low, f"[{_s(r.low_interval[0])}, {_s(r.low_interval[1])}]"],
        ["half", r.mass_at_half, half, "", "{1/2}"],
        ["high", r.mass_high, hi, r.ks_high, f"[{_s(r.high_interval[0])}, {_s(r.high_interval[1])}]"],
    ]
    cols = ["block", "mass", "limit", "ks", "support"]
    rows = [[_s(x) for x in row] for row in rows]
    payload = {"header": _header(model, cfg, n=n, k=model.params.k(n), normalizer=_s(r.normalizer)),
               "blocks": [dict(zip(cols, row)) for row in rows]}
    return Result(payload, cols, rows, [("n", n), ("normalizer", _s(r.normalizer))])


def cmd_gouvea(model, cfg: RunConfig) -> Result:
    ns = _ns(cfg, (50, 50))
    reports = _map(cfg, lambda n: analysis.gouvea_check(model, n), ns)
    cols = ["n", "k", "s_old", "ratio_old", "limit_old", "s_top", "ratio_classical", "limit_classical",
            "buzzard_bound", "buzzard_ok"]
    rows = [[_s(x) for x in (r.n, r.k, r.highest_old, r.ratio_old, r.limit_old, r.highest_classical,
                             r.ratio_classical, r.limit_classical, r.buzzard_bound, r.buzzard_ok)]
            for r in reports]
    payload = {"header": _header(model, cfg), "rows": [dict(zip(cols, row)) for row in rows]}
    return Result(payload, cols, rows, status=0 if all(r.buzzard_ok for r in reports) else 1)


def cmd_ss(model, cfg: RunConfig) -> Result:
    ns = _ns(cfg, (10, 10))
    reports = _map(cfg, lambda n: analysis.semistable_check(model, n), ns)
    cols = ["n", "k", "lower", "upper", "ok", "slope", "predicted", "deviation"]
    rows = [[_s(x) for x in (r.n, r.k, r.lower_index, r.upper_index, r.ok, r.slope, r.predicted, r.deviation)]
            for r in reports]
    payload = {"header": _header(model, cfg), "rows": [dict(zip(cols, row)) for row in rows]}
    return Result(payload, cols, rows, status=0 if all(r.ok for r in reports) else 1)


def cmd_ap(model, cfg: RunConfig) -> Result:
    kappa = _weight(cfg, model)
    params = analysis.ap_parameters(model, kappa)
    count = cfg.count if cfg.count is not None else max(200, 3 * params.Q_r)
    seq = ghost_slopes(model, kappa, count)
    if not seq.certified:
        raise analysis.UncertifiedError("slopes could not be certified; raise the index bound")
    rep = analysis.ap_verify(seq, params.Q_r, params.common_difference, params)
    summary = [("Q", params.Q), ("Q_r", params.Q_r), ("r", params.r), ("D", _s(params.common_difference)),
               ("checked", f"{rep.verified_range[0]}..{rep.verified_range[1]}"),
               ("verified", rep.verified)]
    rows = [[i, _s(diff)] for i, diff in rep.violations]
    payload = {"header": _header(model, cfg, weight=format_weight(kappa), count=count),
               "Q": params.Q, "Q_r": params.Q_r, "r": params.r, "D": _s(params.common_difference),
               "verified_range": list(rep.verified_range), "verified": rep.verified,
               "violations": [{"i": i, "difference": _s(d)} for i, d in rep.violations]}
    cols = ["i", "difference"] if rows else []
    return Result(payload, cols, rows, summary, 0 if rep.verified else 1)


def cmd_axioms(model, cfg: RunConfig) -> Result:
    longest = max(P for P, _ in model.periods.values())
    window = cfg.range if cfg.range is not None else (-4 * longest, 8 * longest)
    rep = verify_axioms(model, window)
    rows = [[name, P, Q] for name, (P, Q) in model.periods.items()]
    summary = [("window", f"{window[0]}..{window[1]}"), ("A", _s(rep.A)), ("B", _s(rep.B)),
               ("B == (p-1)A", rep.b_is_p_minus_1_a), ("ok", rep.ok)]
    summary += [("failure", f) for f in rep.failures]
    payload = {"header": _header(model, cfg), "periods": {k: list(v) for k, v in model.periods.items()},
               "A": _s(rep.A), "B": _s(rep.B), "ok": rep.ok, "failures": rep.failures}
    return Result(payload, ["function", "period", "defect"], rows, summary, 0 if rep.ok else 1)


def cmd_compare(model, cfg: RunConfig) -> Result:
    if cfg.file is None:
        raise InputError("'compare' needs --file")
    try:
        with open(cfg.file) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {cfg.file}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{cfg.file}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    header, external = slopes_from_json(data)
    if not external:
        raise FormatError(f"{cfg.file}: empty slope list")
    if cfg.weight is None and header.get("weight"):
        cfg.weight = header["weight"]
    count = cfg.count if cfg.count is not None else len(external)
    seq = _slopes(model, cfg, count)
    rep = analysis.compare_slopes(seq, external)
    summary = [("compared", rep.compared), ("match", rep.match)]
    if rep.first_mismatch is not None:
        j = rep.first_mismatch
        summary.append(("first mismatch", f"index {j}: computed {_s(seq.slopes[j - 1])}, "
                                          f"external {_s(sorted(external)[j - 1])}"))
    if rep.note:
        summary.append(("note", rep.note))
    if not seq.certified:
        summary.append(("note", "computed slopes are not certified"))
    payload = {"header": _header(model, cfg, weight=cfg.weight or "wadic"), "compared": rep.compared,
               "match": rep.match, "first_mismatch": rep.first_mismatch, "note": rep.note}
    return Result(payload, [], [], summary, 0 if rep.match else 1)


HANDLERS = {
    "dims": cmd_dims, "coeffs": cmd_coeffs, "slopes": cmd_slopes, "np": cmd_np, "dist": cmd_dist,
    "gouvea": cmd_gouvea, "ss": cmd_ss, "ap": cmd_ap, "axioms": cmd_axioms, "compare": cmd_compare,
}


# -- output --------------------------------------------------------------------


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for key, val in result.summary:
            writer.writerow([f"# {key}", _s(val)])
        if result.columns:
            writer.writerow(result.columns)
            writer.writerows([[_s(x) for x in row] for row in result.rows])
        return buf.getvalue()
    lines = [f"{key}: {_s(val)}" for key, val in result.summary]
    if result.columns:
        table = [result.columns] + [[_s(x) for x in row] for row in result.rows]
        widths = [max(len(r[j]) for r in table) for j in range(len(result.columns))]
        for r in table:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ghost", description="Exact slopes of abstract ghost series.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--model", help="gamma0:p,N,k0 | rhobar:p=..,k=..,split=..,m1=.. | path to a JSON model")
    ap.add_argument("--weight", help="int:K | boundary:V | near:K,ALPHA | wadic")
    ap.add_argument("--count", type=int)
    ap.add_argument("--range", dest="range_", metavar="A..B")
    ap.add_argument("--n", type=int)
    ap.add_argument("--up-to", dest="up_to", type=int)
    ap.add_argument("--file", help="external slope file for 'compare'")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--out", help="write output here instead of stdout")
    ap.add_argument("--config", help="JSON file with default option values")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def make_config(args: argparse.Namespace) -> RunConfig:
    conf: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load config {args.config}: {exc}") from None
        if not isinstance(conf, dict):
            raise InputError("config file must hold a JSON object")
        unknown = set(conf) - {"model", "weight", "count", "range", "n", "up_to", "file", "format", "out"}
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def pick(name, value):
        return value if value is not None else conf.get(name)

    model = pick("model", args.model)
    if not model:
        raise InputError("--model is required")
    rng = pick("range", args.range_)
    fmt = pick("format", args.format) or "table"
    if fmt not in FORMATS:
        raise InputError(f"unknown format {fmt!r}")
    try:
        threads = int(os.environ.get("GHOST_THREADS", "1"))
    except ValueError:
        raise InputError("GHOST_THREADS must be an integer") from None
    return RunConfig(
        command=args.command, model=model, weight=pick("weight", args.weight),
        count=pick("count", args.count), range=parse_range(rng) if rng else None,
        n=pick("n", args.n), up_to=pick("up_to", args.up_to), file=pick("file", args.file),
        format=fmt, out=pick("out", args.out), threads=max(1, threads),
    )


def run(cfg: RunConfig) -> tuple:
    """Execute ``cfg`` and return ``(text, exit_status)``."""
    model = build_model(parse_model_text(cfg.model))
    result = HANDLERS[cfg.command](model, cfg)
    return render(result, cfg.format), result.status


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        text, status = run(cfg)
    except analysis.UncertifiedError as exc:
        print(f"ghost {args.command}: {exc}", file=sys.stderr)
        return 1
    except (InputError, FormatError, AxiomError, ValueError, ArithmeticError) as exc:
        print(f"ghost {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
