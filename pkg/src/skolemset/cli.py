"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 resource error.
All randomised behaviour is keyed by --seed; reports are byte-identical for
the same argv + seed + config regardless of thread count, and embed their
parameter provenance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, asdict, replace

from . import arith, bhcount, decide, density, lrs as lrsmod, skolem
from .errors import DomainError, ResourceError, SkolemSetError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass(frozen=True)
class Config:
    sieve_limit: int = 1 << 22
    cache_path: str | None = None
    scan_cap: int = skolem.DEFAULT_SCAN_CAP
    exact_cap: int = lrsmod.DEFAULT_EXACT_CAP
    probable_prime_rounds: int = arith.DEFAULT_PP_ROUNDS
    threads: int = 1
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self):
        for name in ("sieve_limit", "scan_cap", "exact_cap",
                     "probable_prime_rounds", "threads"):
            if getattr(self, name) <= 0:
                raise DomainError(f"config {name} must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise DomainError(f"invalid output format {self.output_format!r}")

    @classmethod
    def from_file(cls, path: str) -> "Config":
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def provenance(self) -> dict:
        # thread count intentionally excluded: it never affects results
        return {
            "sieve_limit": self.sieve_limit,
            "scan_cap": self.scan_cap,
            "exact_cap": self.exact_cap,
            "probable_prime_rounds": self.probable_prime_rounds,
            "seed": self.seed,
        }


def load_or_build_cache(config: Config) -> arith.PrimeTable:
    """Load the sieve cache when version and limit match, else rebuild;
    unusable cache paths degrade to an in-memory table with a warning."""
    path = config.cache_path
    if path and os.path.exists(path):
        try:
            table = arith.PrimeTable.load(path)
            if table.limit == config.sieve_limit:
                return table
        except (ValueError, OSError) as exc:
            warnings.warn(f"sieve cache unusable ({exc}); rebuilding")
    table = arith.prime_sieve(config.sieve_limit)
    if path:
        try:
            table.save(path)
        except OSError as exc:
            warnings.warn(f"cannot persist sieve cache to {path}: {exc}")
    return table


# ---------------------------------------------------------------------------
# Emission helpers
# ---------------------------------------------------------------------------

def _emit(out, payload: dict, fmt: str, csv_rows=None, csv_header=None):
    if fmt == "json":
        json.dump(payload, out, separators=(",", ":"), sort_keys=True)
        out.write("\n")
    elif fmt == "csv" and csv_rows is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
    else:
        for key, value in payload.items():
            if key in ("schema", "params"):
                continue
            out.write(f"{key}: {value}\n")
        out.write("params: " + json.dumps(payload.get("params", {}),
                                          sort_keys=True) + "\n")


def _payload(config: Config, body: dict, **extra_params) -> dict:
    params = config.provenance()
    params.update(extra_params)
    return {"schema": SCHEMA_VERSION, **body, "params": params}


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_skolem_member(args, config, out) -> int:
    n = int(args.n)
    result = skolem.in_s(n, extra_rounds=config.probable_prime_rounds)
    body = result.to_json_dict()
    fmt = "json" if args.json else config.output_format
    _emit(out, _payload(config, body, n=n), fmt)
    return EXIT_OK

def _cmd_skolem_enum(args, config, out) -> int:
    table = load_or_build_cache(config)
    subrange = None
    if args.subrange:
        lo, hi = (int(t) for t in args.subrange.split(","))
        subrange = (lo, hi)
    rows = []
    for n, reps in skolem.enumerate_window(args.w, subrange=subrange,
                                           table=table,
                                           scan_cap=config.scan_cap,
                                           threads=config.threads):
        if config.output_format == "json":
            rows.append({"n": n, "r": len(reps),
                         "reps": [r.as_triple() for r in reps]})
        else:
            out.write(skolem.format_stream_line(n, reps) + "\n")
    if config.output_format == "json":
        _emit(out, _payload(config, {"w": args.w, "members": rows},
                            w=args.w, X=1 << args.w), "json")
    return EXIT_OK


def _parse_w_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _cmd_density_scan(args, config, out) -> int:
    table = load_or_build_cache(config)
    sample = None
    if args.sample:
        sample = (args.sample, config.seed)
    stats = []
    for w in _parse_w_list(args.w):
        stats.append(density.moment_scan(w, sample=sample, table=table,
                                         scan_cap=config.scan_cap,
                                         threads=config.threads))
    rows = [density.stats_csv_row(s) for s in stats]
    if args.plot:
        from . import report
        report.render_moment_figure(stats, args.plot)
    if config.output_format == "json":
        body = {"windows": [
            dict(zip(density.CSV_COLUMNS, row)) for row in rows]}
        _emit(out, _payload(config, body), "json")
    else:
        _emit(out, {}, "csv", csv_rows=rows, csv_header=density.CSV_COLUMNS)
    return EXIT_OK


def _cmd_density_mean_g(args, config, out) -> int:
    check = density.mean_g_check(args.Y, prime_limit=args.plimit)
    body = {"Y": check.Y, "lhs": check.lhs_float, "rhs": check.rhs,
            "rel_err": check.rel_err, "prime_limit": check.prime_limit}
    _emit(out, _payload(config, body, Y=check.Y), config.output_format)
    return EXIT_OK


def _cmd_bh_count(args, config, out) -> int:
    pair = bhcount.LinearFormPair.parse(args.f1, args.f2)
    table = load_or_build_cache(config)
    count = bhcount.count_pairs(pair, args.X, table)
    body = {"f1": [pair.a1, pair.b1], "f2": [pair.a2, pair.b2],
            "X": args.X, "count": count}
    _emit(out, _payload(config, body, X=args.X), config.output_format)
    return EXIT_OK


def _cmd_bh_constant(args, config, out) -> int:
    pair = bhcount.LinearFormPair.parse(args.f1, args.f2)
    const = bhcount.bh_constant(pair, prime_limit=args.plimit)
    body = {"f1": [pair.a1, pair.b1], "f2": [pair.a2, pair.b2],
            "C_f": const.C_f, "tail_bound": const.tail_bound,
            "prime_limit": const.prime_limit}
    _emit(out, _payload(config, body), config.output_format)
    return EXIT_OK


def _cmd_bh_report(args, config, out) -> int:
    pair = bhcount.LinearFormPair.parse(args.f1, args.f2)
    table = load_or_build_cache(config)
    xs = [int(t) for t in str(args.X).split(",")]
    reports = [bhcount.bound_report(pair, x, prime_limit=args.plimit,
                                    table=table) for x in xs]
    if args.plot:
        from . import report
        report.render_bound_figure(reports, args.plot)
    rows = [[r.X, r.actual, f"{r.C_f:.8g}", f"{r.bh_point:.8g}",
             f"{r.bh_integral:.8g}", f"{r.brun8:.8g}", f"{r.wu:.8g}",
             f"{r.sieve_rhs:.8g}"] for r in reports]
    if config.output_format == "json":
        body = {"f1": [pair.a1, pair.b1], "f2": [pair.a2, pair.b2],
                "reports": [r.to_json_dict() for r in reports]}
        _emit(out, _payload(config, body), "json")
    else:
        _emit(out, {}, "csv", csv_rows=rows,
              csv_header=bhcount.BOUND_CSV_COLUMNS)
    return EXIT_OK


def _parse_lrs_args(args) -> lrsmod.Lrs:
    coeffs = tuple(int(t) for t in args.coeffs.split(","))
    inits = tuple(int(t) for t in args.inits.split(","))
    return lrsmod.Lrs(coeffs=coeffs, inits=inits)


def _cmd_lrs_zeros(args, config, out) -> int:
    seq = _parse_lrs_args(args)
    table = load_or_build_cache(config)
    exact_cap = args.exact_cap or config.exact_cap
    rep = decide.find_zeros_in_s(
        seq, args.max_n, exact_cap=exact_cap, scan_cap=config.scan_cap,
        seed=config.seed, table=table, threads=config.threads)
    body = rep.to_json_dict()
    fmt = "json" if args.json else config.output_format
    _emit(out, _payload(config, body, max_n=args.max_n,
                        lrs=seq.format()), fmt)
    return EXIT_OK


def _cmd_lrs_degenerate(args, config, out) -> int:
    seq = lrsmod.minimize(_parse_lrs_args(args))
    res = lrsmod.is_degenerate(seq)
    body = {"minimized": seq.format(), "degenerate": res.degenerate,
            "witness_order": res.witness_order}
    _emit(out, _payload(config, body), config.output_format)
    return EXIT_OK


def _cmd_bounds(args, config, out) -> int:
    seq = lrsmod.minimize(_parse_lrs_args(args))
    a = decide.constant_A(seq)
    body = {"minimized": seq.format(), "order": seq.order, "A": a}
    if seq.order >= 2:
        bound = decide.zero_bound(seq)
        body["zero_bound"] = str(bound)
    else:
        body["zero_bound"] = None
        body["note"] = ("order-1 recurrence: zero set empty unless the "
                        "sequence is identically zero")
    _emit(out, _payload(config, body), config.output_format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="skolemset",
        description="Prime-representation membership set: enumeration, "
                    "density statistics, linear-form prime counting and "
                    "recurrence zero search.")
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--seed", type=int, help="seed for all randomised behaviour")
    p.add_argument("--sieve-limit", type=int, dest="sieve_limit")
    p.add_argument("--cache", dest="cache_path", help="sieve cache file path")
    p.add_argument("--scan-cap", type=int, dest="scan_cap")
    p.add_argument("--exact-cap", type=int, dest="exact_cap_g")
    p.add_argument("--threads", type=int)
    p.add_argument("--rounds", type=int, dest="probable_prime_rounds",
                   help="extra probable-prime rounds beyond 2^64")
    p.add_argument("--format", dest="output_format",
                   choices=("json", "csv", "text"))
    p.add_argument("--out", help="write the report to this file instead of stdout")

    sub = p.add_subparsers(dest="group", required=True)

    ps = sub.add_parser("skolem", help="membership and enumeration")
    ss = ps.add_subparsers(dest="action", required=True)
    m = ss.add_parser("member", help="test one integer for membership")
    m.add_argument("n")
    m.add_argument("--json", action="store_true")
    m.set_defaults(handler=_cmd_skolem_member)
    e = ss.add_parser("enum", help="stream members of one window")
    e.add_argument("--w", type=int, required=True)
    e.add_argument("--subrange", help="lo,hi to restrict/resume the stream")
    e.set_defaults(handler=_cmd_skolem_enum)

    pd = sub.add_parser("density", help="window statistics")
    sd = pd.add_subparsers(dest="action", required=True)
    d = sd.add_parser("scan", help="moment scan over windows")
    d.add_argument("--w", required=True,
                   help="window list: 10..16 or 10,12,14")
    d.add_argument("--sample", type=int,
                   help="sample size (full scan when omitted)")
    d.add_argument("--plot", help="render a moment figure to this file")
    d.set_defaults(handler=_cmd_density_scan)
    g = sd.add_parser("mean-g", help="mean value of g over even n <= Y")
    g.add_argument("--Y", type=int, required=True)
    g.add_argument("--plimit", type=int, default=10**6)
    g.set_defaults(handler=_cmd_density_mean_g)

    pb = sub.add_parser("bh", help="linear-form prime pair experiments")
    sb = pb.add_subparsers(dest="action", required=True)
    c = sb.add_parser("count", help="count simultaneous prime values")
    c.add_argument("--f1", required=True, metavar="a1,b1")
    c.add_argument("--f2", required=True, metavar="a2,b2")
    c.add_argument("--X", type=int, required=True)
    c.set_defaults(handler=_cmd_bh_count)
    k = sb.add_parser("constant", help="singular-series constant")
    k.add_argument("--f1", required=True, metavar="a1,b1")
    k.add_argument("--f2", required=True, metavar="a2,b2")
    k.add_argument("--plimit", type=int, default=10**6)
    k.set_defaults(handler=_cmd_bh_constant)
    r = sb.add_parser("report", help="bounds report at one or more X")
    r.add_argument("--f1", required=True, metavar="a1,b1")
    r.add_argument("--f2", required=True, metavar="a2,b2")
    r.add_argument("--X", required=True, help="X or comma list of X values")
    r.add_argument("--plimit", type=int, default=10**6)
    r.add_argument("--plot", help="render a bound figure to this file")
    r.set_defaults(handler=_cmd_bh_report)

    pl = sub.add_parser("lrs", help="recurrence operations")
    sl = pl.add_subparsers(dest="action", required=True)
    z = sl.add_parser("zeros", help="zeros of the recurrence at set members")
    z.add_argument("--coeffs", required=True)
    z.add_argument("--inits", required=True)
    z.add_argument("--max-n", type=int, required=True, dest="max_n")
    z.add_argument("--exact-cap", type=int, dest="exact_cap")
    z.add_argument("--json", action="store_true")
    z.set_defaults(handler=_cmd_lrs_zeros)
    dg = sl.add_parser("degenerate", help="degeneracy of the minimised recurrence")
    dg.add_argument("--coeffs", required=True)
    dg.add_argument("--inits", required=True)
    dg.set_defaults(handler=_cmd_lrs_degenerate)

    b = sub.add_parser("bounds", help="effective zero bound as a tower")
    b.add_argument("--coeffs", required=True)
    b.add_argument("--inits", required=True)
    b.set_defaults(handler=_cmd_bounds)

    return p


def _config_from_args(args) -> Config:
    config = Config.from_file(args.config) if args.config else Config()
    overrides = {}
    for field_name, arg_name in (
            ("sieve_limit", "sieve_limit"), ("cache_path", "cache_path"),
            ("scan_cap", "scan_cap"), ("exact_cap", "exact_cap_g"),
            ("probable_prime_rounds", "probable_prime_rounds"),
            ("threads", "threads"), ("output_format", "output_format"),
            ("seed", "seed")):
        value = getattr(args, arg_name, None)
        if value is not None:
            overrides[field_name] = value
    return replace(config, **overrides) if overrides else config


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        config = _config_from_args(args)
        buffer = io.StringIO()
        code = args.handler(args, config, buffer)
        text = buffer.getvalue()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SkolemSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
