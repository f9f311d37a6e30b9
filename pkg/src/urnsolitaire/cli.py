"""Command-line front end.

Subcommands: prob, expect, table, simulate, guess, verify, diag, bench.
Exit status: 0 success, 1 domain error, 2 usage error, 3 verification failure.
stdout carries only the requested payload; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import holonomic, montecarlo, urnproc
from .exact import format_rational
from .urnproc import TableSizeError, UrnDomainError, UrnState

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3


class VerificationFailure(Exception):
    def __init__(self, payload: str):
        super().__init__("verification failed")
        self.payload = payload


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="urnsolitaire",
        description="Exact probabilities, expected round counts and holonomic "
                    "recurrences for urn solitaire.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_state(sp):
        sp.add_argument("--m", type=int, required=True, help="green balls")
        sp.add_argument("--n", type=int, required=True, help="red balls")

    def add_format(sp, choices=("text", "json"), default="text"):
        sp.add_argument("--format", choices=choices, default=default)

    def add_out(sp):
        sp.add_argument("--out", metavar="PATH", default=None,
                        help="write output to PATH instead of stdout")

    sp = sub.add_parser("prob", help="exact win probability")
    add_state(sp)
    sp.add_argument("--variant", choices=("returning", "simple"),
                    default="returning")
    add_format(sp)
    add_out(sp)

    sp = sub.add_parser("expect", help="exact expected number of rounds")
    add_state(sp)
    sp.add_argument("--variant", choices=("returning", "simple"),
                    default="returning")
    add_format(sp)
    add_out(sp)

    sp = sub.add_parser("table", help="full exact DP table")
    sp.add_argument("--quantity", choices=urnproc.QUANTITIES,
                    default="expected_rounds")
    sp.add_argument("--max-m", type=int, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    add_format(sp, choices=("json", "csv"), default="json")
    add_out(sp)

    sp = sub.add_parser("simulate", help="seeded Monte Carlo simulation")
    add_state(sp)
    sp.add_argument("--variant", choices=("returning", "simple"),
                    default="returning")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("balls", "rounds"), default="balls",
                    help="ball-by-ball draws or distributional round sampling")
    add_format(sp, choices=("json",), default="json")
    add_out(sp)

    sp = sub.add_parser("guess", help="guess a recurrence from DP data")
    sp.add_argument("--quantity", choices=urnproc.QUANTITIES,
                    default="expected_rounds")
    sp.add_argument("--diagonal", action="store_true",
                    help="guess a univariate recurrence for the diagonal")
    sp.add_argument("--up-to", type=int, default=40,
                    help="data size (diagonal length, or square table side)")
    sp.add_argument("--order", type=int, default=4)
    sp.add_argument("--deg-m", type=int, default=4)
    sp.add_argument("--deg-n", type=int, default=3)
    sp.add_argument("--margin", type=int, default=20)
    add_format(sp, choices=("json",), default="json")
    add_out(sp)

    sp = sub.add_parser("verify", help="verify a theorem against DP values")
    sp.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    sp.add_argument("--up-to", type=int, default=None,
                    help="theorem 2: check n = 1..UP_TO (default 27)")
    sp.add_argument("--max-m", type=int, default=30,
                    help="theorem 1: table bound in m (default 30)")
    sp.add_argument("--max-n", type=int, default=30,
                    help="theorem 1: table bound in n (default 30)")
    add_format(sp, choices=("json",), default="json")
    add_out(sp)

    sp = sub.add_parser("diag", help="diagonal of a DP table")
    sp.add_argument("--quantity", choices=urnproc.QUANTITIES,
                    default="expected_rounds")
    sp.add_argument("--up-to", type=int, required=True)
    add_format(sp)
    add_out(sp)

    sp = sub.add_parser(
        "bench",
        help="quadratic DP vs linear recurrence evaluation of E(m, n)")
    sp.add_argument("--n", type=int, default=5, help="fixed red count")
    sp.add_argument("--sizes", default="100,1000,10000",
                    help="comma-separated target m values")
    sp.add_argument("--dp-max", type=int, default=1000,
                    help="largest m for which the DP path is attempted")
    add_format(sp, choices=("json",), default="json")
    add_out(sp)

    return p


def _cmd_prob(args) -> str:
    if args.variant == "simple":
        value = urnproc.simple_win_probability(args.m, args.n)
    else:
        value = urnproc.win_probability(args.m, args.n)
    if args.format == "json":
        return json.dumps({"m": args.m, "n": args.n, "variant": args.variant,
                           "win_probability": format_rational(value)})
    return format_rational(value)


def _cmd_expect(args) -> str:
    if args.variant == "simple":
        value = urnproc.simple_expected_rounds(args.m, args.n)
    else:
        value = urnproc.expected_rounds(args.m, args.n)
    if args.format == "json":
        return json.dumps({"m": args.m, "n": args.n, "variant": args.variant,
                           "expected_rounds": format_rational(value)})
    return format_rational(value)


def _cmd_table(args) -> str:
    table = urnproc.build_table(args.quantity, args.max_m, args.max_n)
    return table.to_csv() if args.format == "csv" else table.to_json()


def _cmd_simulate(args) -> str:
    config = montecarlo.SimConfig(start=UrnState(args.m, args.n),
                                  variant=args.variant, trials=args.trials,
                                  seed=args.seed, draw_mode=args.mode)
    return montecarlo.simulate(config).to_json()


def _cmd_guess(args) -> str:
    status: dict = {}
    if args.diagonal:
        table = urnproc.build_table(args.quantity, args.up_to, args.up_to)
        seq = holonomic.diagonal(table)
        spec = holonomic.GuessSpec(order_max=args.order, deg_shift=args.deg_n,
                                   confirmation_margin=args.margin)
        rec = holonomic.guess_univariate(seq, spec, status=status)
    else:
        table = urnproc.build_table(args.quantity, args.up_to, args.up_to)
        spec = holonomic.GuessSpec(order_max=args.order, deg_shift=args.deg_m,
                                   deg_param=args.deg_n,
                                   confirmation_margin=args.margin)
        rec = holonomic.guess_bivariate(table, spec, status=status)
    if rec is None:
        return json.dumps({"found": False, "status": status.get("status")})
    return json.dumps({"found": True, "recurrence": rec.to_obj()})


def _cmd_verify(args) -> str:
    if args.theorem == 2:
        up_to = args.up_to if args.up_to is not None else 27
        table = urnproc.build_table("expected_rounds", up_to + 3, up_to + 3)
        seq = holonomic.diagonal(table)
        report = holonomic.verify_recurrence(holonomic.theorem2(), seq,
                                             range(1, up_to + 1))
        scope = {"theorem": 2, "n_range": [1, up_to]}
    else:
        table = urnproc.build_table("expected_rounds", args.max_m, args.max_n)
        rec = holonomic.theorem1()
        points = [(m, n) for m in range(0, args.max_m - 4 + 1)
                  for n in range(1, args.max_n + 1)]
        report = holonomic.verify_recurrence(rec, table, points)
        scope = {"theorem": 1, "m_range": [0, args.max_m - 4],
                 "n_range": [1, args.max_n]}
    payload = json.dumps(scope | report.to_obj())
    if not report.ok:
        raise VerificationFailure(payload)
    return payload


def _cmd_diag(args) -> str:
    table = urnproc.build_table(args.quantity, args.up_to, args.up_to)
    seq = holonomic.diagonal(table)
    if args.format == "json":
        return json.dumps({"quantity": args.quantity,
                           "values": [format_rational(x) for x in seq]})
    return "\n".join(format_rational(x) for x in seq)


def _cmd_bench(args) -> str:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise UrnDomainError(f"bad --sizes value {args.sizes!r}")
    n = args.n
    rec = holonomic.theorem1()
    results = []
    for m_target in sizes:
        entry: dict = {"m": m_target, "n": n}
        # recurrence path: initial window E(1,n)..E(4,n) from a tiny table
        # (the recurrence holds for m >= 1), then a linear forward pass
        # holding only order-many values
        small = urnproc.build_table("expected_rounds", rec.order, n)
        initial = [small.get(i, n) for i in range(1, rec.order + 1)]
        t0 = time.perf_counter()
        value, stats = holonomic.eval_forward(
            rec, {"n": n}, initial, 1, m_target, instrument=True)
        entry["recurrence_seconds"] = round(time.perf_counter() - t0, 6)
        entry["recurrence_tracked_cells"] = stats.max_window
        if m_target <= args.dp_max:
            t0 = time.perf_counter()
            table = urnproc.build_table("expected_rounds", m_target, n)
            dp_value = table.get(m_target, n)
            entry["dp_seconds"] = round(time.perf_counter() - t0, 6)
            entry["dp_tracked_cells"] = (m_target + 1) * (n + 1)
            entry["agree"] = dp_value == value
        else:
            entry["dp_seconds"] = None
            entry["dp_skipped"] = f"m > --dp-max ({args.dp_max})"
        results.append(entry)
    return json.dumps({"fixed_n": n, "results": results})


_HANDLERS = {
    "prob": _cmd_prob,
    "expect": _cmd_expect,
    "table": _cmd_table,
    "simulate": _cmd_simulate,
    "guess": _cmd_guess,
    "verify": _cmd_verify,
    "diag": _cmd_diag,
    "bench": _cmd_bench,
}


def _emit(payload: str, out_path: str | None):
    if not payload.endswith("\n"):
        payload += "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload = _HANDLERS[args.command](args)
    except VerificationFailure as exc:
        _emit(exc.payload, getattr(args, "out", None))
        print("verification failed", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (UrnDomainError, TableSizeError,
            holonomic.InsufficientDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(payload, getattr(args, "out", None))
    return EXIT_OK


def entrypoint():  # console_scripts target
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
