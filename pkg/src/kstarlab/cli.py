"""Command-line entry point: ``kstarlab <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__, configspace, constants, distribution, ecbox, kfun
from .averages import Mode, RunConstants, partial_sums
from .errors import DomainError, ResourceError
from .reduce import DEFAULT_CHUNK

FORMAT_VERSION = "1"


@dataclasses.dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed_free: bool = True
    versions: dict = dataclasses.field(
        default_factory=lambda: {"kstarlab": __version__, "format": FORMAT_VERSION}
    )
    wall_time: float = 0.0


def fmt_num(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return f"{q.numerator} (exact)"
    return f"{q.numerator}/{q.denominator} (= {float(q):.15g})"


def render(rows: list[dict], fmt: str, report, manifest: RunManifest) -> str:
    if fmt == "json":
        return json.dumps({"manifest": dataclasses.asdict(manifest), "report": report}, indent=2) + "\n"
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt_num(r[c]) for c in cols])
        return buf.getvalue()
    cells = [[fmt_num(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _rc(args) -> RunConstants:
    return RunConstants.at(args.truncation_prime)


def cmd_kstar(args):
    rc = _rc(args)
    v = kfun.k_exact(args.n, rc.c2, k_at_1=rc.k_at_1)
    report = {
        "n": v.n,
        "k": v.k,
        "k_star": v.k_star,
        "k_circ": kfun.k_circ(args.n, rc.c2) if args.n >= 2 else None,
        "c2": rc.c2,
        "c2_truncation_prime": args.truncation_prime,
        "c2_tail_bound": rc.c2_tail,
    }
    rows = [{"quantity": q, "value": report[q]} for q in ("k", "k_star", "k_circ") if report[q] is not None]
    rows.append({"quantity": f"c2 (P={args.truncation_prime}, tail {rc.c2_tail:.3g})", "value": rc.c2})
    return rows, report


def cmd_constants(args):
    P = args.truncation_prime
    results = [constants.named_constant(name, P) for name in constants.NAMED]
    results += [
        constants.moment_mu(2, P),
        constants.mu2_reference(P),
        constants.moment_mu_prime(1, P),
    ]
    report = [dataclasses.asdict(r) for r in results]
    rows = [
        {"name": r["factor_id"], "value": r["value"], "truncation_prime": r["truncation_prime"],
         "tail_bound": r["tail_bound"]}
        for r in report
    ]
    return rows, report


def cmd_avg(args):
    r = partial_sums(Mode.parse(args.mode), args.x, args.chunk, rc=_rc(args))
    report = dataclasses.asdict(r)
    cols = ("mode", "x", "terms", "sum", "mean", "reference", "deviation")
    return [{c: report[c] for c in cols}], report


def cmd_moments(args):
    rc = _rc(args)
    rows = []
    for k in range(1, args.k_max + 1):
        rows.append({
            "k": k,
            "empirical": distribution.empirical_moment(args.x, k, args.chunk, rc=rc),
            "euler_product": constants.moment_mu(k, min(args.truncation_prime, 10**7)).value,
            "schur": constants.moment_mu_prime(k, min(args.truncation_prime, 10**7)).value,
        })
    return rows, {"x": args.x, "moments": rows}


def cmd_cdf(args):
    c = distribution.empirical_cdf(args.x, args.bins, args.chunk, rc=_rc(args))
    cum = c.cumulative()
    rows = [
        {"bin_lo": c.bin_edges[i], "bin_hi": c.bin_edges[i + 1], "count": c.counts[i], "cum_fraction": float(cum[i])}
        for i in range(len(c.counts))
    ]
    return rows, dataclasses.asdict(c)


def cmd_config_identity(args):
    if args.odd:
        q = configspace.identity_sum_odd(args.z, args.k, args.e_max)
    else:
        q = configspace.identity_sum(args.z, args.k, args.e_max)
    report = {
        "z": args.z, "k": args.k, "e_max": args.e_max, "odd": args.odd,
        "numerator": q.numerator, "denominator": q.denominator, "value": float(q),
        "rendered": fmt_rational(q),
    }
    return [{"identity_sum": report["rendered"]}], report


def cmd_ec(args):
    if args.ec_cmd == "count":
        c = ecbox.CurveSpec(args.a, args.b)
        n = ecbox.point_count(c, args.p)
        report = {"a": args.a, "b": args.b, "p": args.p, "points": n}
    elif args.ec_cmd == "me":
        c = ecbox.CurveSpec(args.a, args.b)
        report = {"a": args.a, "b": args.b, "N": args.N, "m_e": ecbox.m_e(c, args.N)}
    elif args.ec_cmd == "box":
        report = dataclasses.asdict(ecbox.box_average(args.N, args.A, args.B, _rc(args).c2))
    else:
        c = ecbox.CurveSpec(args.a, args.b)
        s, pi = ecbox.sum_me(c, args.x)
        report = {"a": args.a, "b": args.b, "x": args.x, "sum": s, "pi_x": pi}
    return [report], report


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    # subcommand copies use SUPPRESS so a flag given before the subcommand survives
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("table", "csv", "json"), default=d("table"), help="output format")
    parser.add_argument("--out", metavar="PATH", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--truncation-prime", type=int, default=d(constants.DEFAULT_TRUNCATION), metavar="P",
                        help="truncation prime for Euler-product constants (default 10^7)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    chunked = argparse.ArgumentParser(add_help=False)
    chunked.add_argument("--chunk", type=int, default=DEFAULT_CHUNK,
                         help="chunk size of the reduction; part of the reproducibility contract")

    p = argparse.ArgumentParser(
        prog="kstarlab",
        description="Evaluate K*(N) and check its averages.",
        epilog="KSTARLAB_THREADS sets the worker count; results do not depend on it.",
    )
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("kstar", parents=[common], help="K(N), K*(N) and K°(N) at one N")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_kstar)

    s = sub.add_parser("constants", parents=[common], help="Euler-product constants with tail bounds")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("avg", parents=[common, chunked], help="partial-sum averages over N <= x")
    s.add_argument("--mode", default="all",
                   choices=("all", "odd", "prime-kstar", "prime-k", "f-shifted", "kcirc"))
    s.add_argument("--x", type=int, required=True)
    s.set_defaults(func=cmd_avg)

    s = sub.add_parser("moments", parents=[common, chunked], help="empirical moments vs Euler products")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--k-max", type=int, default=8)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("cdf", parents=[common, chunked], help="histogram of K*(N) for N <= x")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--bins", type=int, default=200)
    s.set_defaults(func=cmd_cdf)

    s = sub.add_parser("config-identity", parents=[common], help="exact configuration-space sum")
    s.add_argument("--z", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--e-max", type=int, default=None, help="enumerate exponents up to this bound literally")
    s.add_argument("--odd", action="store_true", help="restrict to configurations with 2 in C")
    s.set_defaults(func=cmd_config_identity)

    s = sub.add_parser("ec", help="elliptic-curve ground truth")
    ec = s.add_subparsers(dest="ec_cmd", required=True)
    e = ec.add_parser("count", parents=[common], help="#E(F_p)")
    e.add_argument("--a", type=int, required=True)
    e.add_argument("--b", type=int, required=True)
    e.add_argument("--p", type=int, required=True)
    e = ec.add_parser("me", parents=[common], help="M_E(N)")
    e.add_argument("--a", type=int, required=True)
    e.add_argument("--b", type=int, required=True)
    e.add_argument("--N", type=int, required=True)
    e = ec.add_parser("box", parents=[common], help="box average of M_E(N) vs K*(N)/log N")
    e.add_argument("--N", type=int, required=True)
    e.add_argument("--A", type=int, required=True)
    e.add_argument("--B", type=int, required=True)
    e = ec.add_parser("sum", parents=[common], help="sum of M_E(N) over N <= x vs pi(x)")
    e.add_argument("--a", type=int, required=True)
    e.add_argument("--b", type=int, required=True)
    e.add_argument("--x", type=int, required=True)
    s.set_defaults(func=cmd_ec)
    return p


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        rows, report = args.func(args)
    except (DomainError, ResourceError, ValueError) as exc:
        print(f"kstarlab: error: {exc}", file=sys.stderr)
        return 1
    name = args.cmd if args.cmd != "ec" else f"ec {args.ec_cmd}"
    manifest = RunManifest(name, _params(args), wall_time=round(time.perf_counter() - t0, 3))
    text = render(rows, args.format, report, manifest)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
