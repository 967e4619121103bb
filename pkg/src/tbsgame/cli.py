"""Command-line entry point: ``tbsgame <subcommand> ...``.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 validation or usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

from . import veris
from .best_response import (Player, best_response, br_attacker, br_defender,
                            grid_points)
from .equilibrium import find_equilibria
from .model import GameError, GameParams, StrategyPair, validate
from .payoff import compute_payoffs
from .simulator import SimConfig, simulate

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2

PARAM_FLAGS = {"p": "p", "d": "d", "r": "r", "cd": "c_D", "ck": "c_k",
               "ca": "c_A"}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(value) -> str:
    """Shortest round-trip text for numbers; plain ``str`` otherwise."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, allow_nan=False) + "\n"


def table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    cells = [[fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells))
              for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths))
              for row in cells]
    return "\n".join(lines) + "\n"


def csv_text(rows: list[dict], header: list[str] | None = None) -> str:
    buf = io.StringIO()
    header = header or (list(rows[0]) if rows else [])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in header])
    return buf.getvalue()


def render(rows: list[dict], kind: str, payload=None) -> str:
    if kind == "json":
        return dumps(payload if payload is not None else rows)
    if kind == "csv":
        return csv_text(rows)
    return table(rows)


def add_param_flags(parser, periods=()):
    g = parser.add_argument_group("game parameters")
    for flag in PARAM_FLAGS:
        g.add_argument(f"--{flag}", type=float)
    g.add_argument("--params-json", metavar="PATH",
                   help="JSON object with p, d, r, c_D, c_k, c_A "
                        "(and optionally t_D, t_A); flags override it")
    for flag in periods:
        g.add_argument(f"--{flag}", type=float)
    parser.add_argument("--format", choices=("table", "csv", "json"),
                        default="table")


def load_params(args) -> tuple[GameParams, dict]:
    base = {}
    if args.params_json:
        with open(args.params_json, encoding="utf-8") as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise UsageError("--params-json must hold a JSON object")
    values = {}
    for flag, name in PARAM_FLAGS.items():
        v = getattr(args, flag)
        if v is None:
            v = base.get(name, 0.0 if name.startswith("c_") else None)
        if v is None:
            raise UsageError(f"missing --{flag}")
        values[name] = float(v)
    periods = {}
    for flag, name in (("td", "t_D"), ("ta", "t_A")):
        if hasattr(args, flag):
            v = getattr(args, flag)
            periods[name] = base.get(name) if v is None else v
    params = GameParams(**values)
    validate(params)
    return params, periods


def _pair(periods) -> StrategyPair:
    for name in ("t_D", "t_A"):
        if periods.get(name) is None:
            raise UsageError(f"missing --{name.replace('_', '').lower()}")
    return StrategyPair(float(periods["t_D"]), float(periods["t_A"]))


def cmd_payoff(args, out):
    params, periods = load_params(args)
    profile = compute_payoffs(params, _pair(periods))
    row = profile.to_dict()
    out.write(render([row], args.format, row))


def cmd_simulate(args, out):
    params, periods = load_params(args)
    pair = _pair(periods)
    profile = compute_payoffs(params, pair)
    res = simulate(SimConfig(params, pair, args.horizon_periods, args.reps,
                             args.seed))
    gap = abs(res.tau_hat - profile.tau_D)
    if args.format == "json":
        out.write(dumps({"analytic": profile.to_dict(),
                         "simulated": res.to_dict(), "tau_abs_gap": gap}))
        return
    rows = [
        {"quantity": "tau_D", "analytic": profile.tau_D,
         "simulated": res.tau_hat},
        {"quantity": "delta_D", "analytic": profile.delta_D,
         "simulated": res.delta_hat},
        {"quantity": "u_D", "analytic": profile.u_D, "simulated": res.u_D_hat},
        {"quantity": "u_A", "analytic": profile.u_A, "simulated": res.u_A_hat},
    ]
    extra = {"tau_abs_gap": gap, "ci_halfwidth_tau": res.ci_halfwidth_tau,
             "resets": res.resets, "checks": res.checks,
             "attacks_launched": res.attacks_launched,
             "attacks_voided": res.attacks_voided,
             "region": profile.region.value}
    rows += [{"quantity": k, "analytic": "", "simulated": v}
             for k, v in extra.items()]
    out.write(render(rows, args.format))


def cmd_br(args, out):
    params, periods = load_params(args)
    if args.player == "defender":
        if periods.get("t_A") is None:
            raise UsageError("br defender needs --ta")
        res = br_defender(params, float(periods["t_A"]))
    else:
        if periods.get("t_D") is None:
            raise UsageError("br attacker needs --td")
        res = br_attacker(params, float(periods["t_D"]))
    rows = [{"value": c.value, "source": c.source.value, "payoff": c.payoff,
             "best": c is res.best} for c in res.candidates]
    payload = {"player": res.player.value,
               "opponent_period": res.opponent_period,
               "best": {"value": res.best.value,
                        "source": res.best.source.value,
                        "payoff": res.best.payoff},
               "candidates": rows}
    out.write(render(rows, args.format, payload))


SWEEP_HEADER = ["opponent_period", "best_response", "payoff"]


def cmd_sweep(args, out):
    params, _ = load_params(args)
    rows = []
    for t in grid_points(args.start, args.stop, args.step):
        res = best_response(params, args.player, float(t))
        rows.append({"opponent_period": float(t),
                     "best_response": res.best.value,
                     "payoff": res.best.payoff})
    if args.format == "table":
        out.write(table(rows))
    elif args.format == "json":
        out.write(dumps(rows))
    else:
        out.write(csv_text(rows, SWEEP_HEADER))


def cmd_nash(args, out):
    params, _ = load_params(args)
    found = find_equilibria(params, args.tmax, args.grid_step, args.eps)
    rows = [c.to_dict() for c in found]
    if args.format == "csv" and not rows:
        out.write(",".join(["t_A", "t_D", "dev_gap_D", "dev_gap_A", "u_D",
                            "u_A"]) + "\n")
        return
    out.write(render(rows, args.format))


VERIS_HEADER = ["field", "bin_start_days", "bin_width_days", "count",
                "cumulative_fraction"]


def cmd_veris_stats(args, out, err):
    records, skips = veris.parse_incidents(args.dir)
    actions = [a.strip() for a in args.actions.split(",") if a.strip()]
    kept = veris.filter_malicious(records, actions)
    table_ = (veris.DAYS_PER_UNIT_CALENDAR if args.calendar_units
              else veris.DAYS_PER_UNIT)
    cap = None if args.no_cap else args.cap_days
    samples, excluded = veris.extract_durations(kept, args.field, table_, cap)
    report = {"documents_parsed": len(records), "skipped": skips.to_dict(),
              "incidents_selected": len(kept), "field": args.field,
              "retained": len(samples), "excluded": excluded}
    if args.exclusions_out:
        with open(args.exclusions_out, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))
    stats = veris.timing_stats(samples, args.bin_days)
    if args.format == "json":
        out.write(dumps({"field": args.field, **stats.to_dict(),
                         "exclusions": report}))
    else:
        rows = [dict(zip(VERIS_HEADER, (args.field, *h)))
                for h in stats.histogram]
        out.write(table(rows) if args.format == "table"
                  else csv_text(rows, VERIS_HEADER))
    err.write(f"n={stats.n} mean_days={fmt(stats.mean_days)} "
              f"min_days={fmt(stats.min_days)} "
              f"max_days={fmt(stats.max_days)}\n")
    if args.snapshot_assertions:
        failed = False
        for name, ok, detail in veris.snapshot_checks(len(kept), args.field,
                                                      stats):
            err.write(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}\n")
            failed |= not ok
        if failed:
            return EXIT_INVALID
    return EXIT_OK


def build_parser() -> Parser:
    parser = Parser(prog="tbsgame", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    p = sub.add_parser("payoff", help="analytic payoffs for one pair")
    add_param_flags(p, ("td", "ta"))

    p = sub.add_parser("simulate", help="Monte Carlo vs analytic payoffs")
    add_param_flags(p, ("td", "ta"))
    p.add_argument("--horizon-periods", type=int, default=10_000)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("br", help="best response with its candidate set")
    p.add_argument("player", choices=("defender", "attacker"))
    add_param_flags(p, ("td", "ta"))

    p = sub.add_parser("sweep", help="best-response curve as CSV")
    p.add_argument("--player", choices=("defender", "attacker"),
                   required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    add_param_flags(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("nash", help="epsilon-Nash search on a grid")
    p.add_argument("--tmax", type=float)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=1e-3)
    add_param_flags(p)

    p = sub.add_parser("veris", help="VERIS incident statistics")
    vsub = p.add_subparsers(dest="veris_command", parser_class=Parser)
    vsub.required = True
    v = vsub.add_parser("stats", help="timeline duration histogram")
    v.add_argument("--dir", required=True)
    v.add_argument("--actions", default="malware,hacking")
    v.add_argument("--field", default="discovery",
                   choices=("discovery", "containment", "exfiltration"))
    v.add_argument("--bin-days", type=float, default=60.0)
    v.add_argument("--cap-days", type=float,
                   default=veris.DEFAULT_CONTAINMENT_CAP_DAYS,
                   help="containment outlier cap in days (default 9 years)")
    v.add_argument("--no-cap", action="store_true")
    v.add_argument("--calendar-units", action="store_true",
                   help="use months=30.44 and years=365.25 days")
    v.add_argument("--exclusions-out", metavar="PATH")
    v.add_argument("--snapshot-assertions", action="store_true",
                   help="check the published 2016 VCDB statistics")
    v.add_argument("--format", choices=("table", "csv", "json"),
                   default="csv")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else
                        logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "veris":
            return cmd_veris_stats(args, out, err)
        {"payoff": cmd_payoff, "simulate": cmd_simulate, "br": cmd_br,
         "sweep": cmd_sweep, "nash": cmd_nash}[args.command](args, out)
    except (GameError, UsageError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        err.write(f"I/O error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
