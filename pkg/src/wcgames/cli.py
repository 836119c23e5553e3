"""Command-line interface: ``wcgames <command> [flags]``.

Settings come from built-in defaults, then a ``--config`` file of
``key=value`` lines, then explicit flags.  ``WCGAMES_OUT_DIR`` names a
default directory for sweep/baseline/bisect outputs.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .bounds import all_bounds, reference_constants
from .engine import GameRules
from .experiments import (ConfigError, ExperimentConfig, NonMonotoneProfile, bisect_threshold,
                          format_table, game_board, named_family, property_objective,
                          random_baseline, read_config_file, run_game, sweep, write_output)
from .solver import BudgetExceeded, MonotonicityError, Solver, exact_threshold_bias

OUT_DIR_ENV = "WCGAMES_OUT_DIR"
CONFIG_KEYS = ("game", "version", "n", "k", "q_min", "q_max", "family", "waiter", "client",
               "objective", "reps", "seed", "out", "format", "workers", "level", "side")


def _common(p: argparse.ArgumentParser):
    # defaults are None so that config-file values survive unless a flag is given
    p.add_argument("--config", help="key=value settings file")
    p.add_argument("--game", choices=("non2col", "ksat"))
    p.add_argument("--version", dest="version", choices=("wc", "cw", "WC", "CW"))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=int, help="single bias (sets q-min = q-max)")
    p.add_argument("--q-min", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--family", help="auto, none, clique, local-density, monochromatic, or a family file")
    p.add_argument("--objective", choices=("property", "contain", "transversal"))
    p.add_argument("--waiter")
    p.add_argument("--client")
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--level", type=float, help="crossing level for bisect/baseline")
    p.add_argument("--side", choices=("auto", "waiter", "client"))
    p.add_argument("--out", help="output file (default: stdout, or $%s)" % OUT_DIR_ENV)
    p.add_argument("--format", choices=("csv", "text"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wcgames", description="Biased Waiter-Client / Client-Waiter games")
    parser.add_argument("-V", "--tool-version", action="version", version=f"wcgames {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("bounds", "print the theorem bound table"),
                        ("play", "play one game and print its transcript"),
                        ("sweep", "win rates over a range of biases"),
                        ("bisect", "empirical threshold bias for a strategy pair"),
                        ("solve", "exact optimal-play winner on a tiny board"),
                        ("baseline", "random-subset property threshold")):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "play":
            p.add_argument("--game-index", type=int, default=0)
        if name == "bisect":
            p.add_argument("--scan", action="store_true", help="probe every q in the bracket")
        if name == "solve":
            p.add_argument("--threshold", action="store_true", help="solve every q in the range")
            p.add_argument("--budget", type=int, default=2_000_000)
        if name == "baseline":
            p.add_argument("--m-min", type=int)
            p.add_argument("--m-max", type=int)
            p.add_argument("--m-step", type=int, default=1)
    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--quick", action="store_true", help="reduced instance counts")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    return parser


def resolve_config(args) -> ExperimentConfig:
    values = {}
    if args.config:
        values.update({k.replace("-", "_"): v for k, v in read_config_file(args.config).items()})
        if "q" in values:
            values["q_min"] = values["q_max"] = values.pop("q")
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "q", None) is not None:
        values["q_min"] = values["q_max"] = args.q
    values.setdefault("q_max", values.get("q_min", 1))
    return ExperimentConfig.from_mapping(values)


def _emit(text: str, out, default_name: str | None = None):
    if out is None and default_name and os.environ.get(OUT_DIR_ENV):
        out = Path(os.environ[OUT_DIR_ENV]) / default_name
    if out is None:
        sys.stdout.write(text)
    else:
        path = write_output(text, out)
        print(f"wrote {path}", file=sys.stderr)


def _stem(cfg: ExperimentConfig, what: str) -> str:
    return f"{what}-{cfg.game}-{cfg.version}-n{cfg.n}-k{cfg.k}-q{cfg.q_min}-{cfg.q_max}-s{cfg.seed}.csv"


def cmd_bounds(args, cfg):
    rows = []
    for b in all_bounds(cfg.n, cfg.k):
        if args.game and b.game != args.game:
            continue
        if args.version and b.version != args.version.upper():
            continue
        rows.append({"formula": b.formula, "game": b.game, "version": b.version, "side": b.side,
                     "winner": b.winner, "relation": "<" if b.strict else ("<=" if b.side == "below" else ">="),
                     "value": b.value})
    ref = reference_constants(cfg.k)
    header = (f"# wcgames version={__version__} n={cfg.n} k={cfg.k} "
              f"c2k=[{ref.c2k_lower:.6g},{ref.c2k_upper:.6g}] ksat={ref.ksat_threshold:.6g} (o_k(1) omitted)")
    cols = ("formula", "game", "version", "side", "winner", "relation", "value")
    _emit(format_table(header, cols, rows, cfg.format), cfg.out)


def cmd_play(args, cfg):
    _, t = run_game(cfg, cfg.q_min, args.game_index, transcript=True)
    _emit(t.to_text(), cfg.out)


def cmd_sweep(args, cfg):
    res = sweep(cfg)
    _emit(res.to_csv() if cfg.format == "csv" else res.to_text(), cfg.out, _stem(cfg, "sweep"))


def cmd_bisect(args, cfg):
    res = bisect_threshold(cfg, scan=args.scan)
    rows = [{"q": q, "rate": r, "q_star": int(q == res.q_star)} for q, r in sorted(res.profile.items())]
    ci = "" if res.ci is None else f" ci=[{res.ci[0]:.3f},{res.ci[1]:.3f}]"
    header = (cfg.header() + f"\n# q_star={res.q_star} side={res.side} level={res.level}{ci}"
              f"\n# {res.label}")
    _emit(format_table(header, ("q", "rate", "q_star"), rows, cfg.format), cfg.out, _stem(cfg, "bisect"))


def cmd_solve(args, cfg):
    board = game_board(cfg.game, cfg.n, cfg.k)
    if cfg.objective == "property":
        family, objective = None, property_objective(cfg.game, board)
    else:
        family, objective = named_family(cfg.game, cfg.n, cfg.k, cfg.family), cfg.objective
    if args.threshold:
        res = exact_threshold_bias(board, family, cfg.kind, cfg.q_max, objective, args.budget)
        desc = " ".join(f"{k}={v}" for k, v in board.describe().items())
        lines = [f"# wcgames-threshold {desc} kind={cfg.kind.value}",
                 f"q_star={res.q_star}"] + [f"q={q}\t{w}" for q, w in sorted(res.winners.items())]
        _emit("\n".join(lines) + "\n", cfg.out)
        return
    res = Solver(board, family, GameRules(cfg.kind, cfg.q_min), objective, args.budget).solve()
    _emit(res.to_text(), cfg.out)


def cmd_baseline(args, cfg):
    board = game_board(cfg.game, cfg.n, cfg.k)
    prop = "non2col" if cfg.game == "non2col" else "unsat"
    lo = args.m_min if args.m_min is not None else 0
    hi = args.m_max if args.m_max is not None else board.size
    res = random_baseline(board, prop, range(lo, hi + 1, max(args.m_step, 1)), max(cfg.reps, 1),
                          cfg.seed, cfg.level, cfg.workers)
    text = res.to_csv() if cfg.format == "csv" else res.to_text()
    if res.crossing is not None:
        text += f"# crossing m={res.crossing:.3f} m/anchors={res.crossing_density:.4f}\n"
    _emit(text, cfg.out, _stem(cfg, "baseline"))


def cmd_verify(args):
    from .verification import run_all
    reports = run_all(0.2 if args.quick else 1.0, args.seed, sys.stdout, args.workers)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


COMMANDS = {"bounds": cmd_bounds, "play": cmd_play, "sweep": cmd_sweep, "bisect": cmd_bisect,
            "solve": cmd_solve, "baseline": cmd_baseline}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        cfg = resolve_config(args)
        COMMANDS[args.command](args, cfg)
    except (ConfigError, KeyError, BudgetExceeded, MonotonicityError, NonMonotoneProfile, OSError) as exc:
        print(f"wcgames {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
