"""Command-line front end.

Every solver and oracle is exposed as a subcommand, and the ``figure``
subcommand emits the CSV series behind the standard plots (equilibrium
strategies across player counts, win-chance decay under uniform play,
scaled payoff comparisons, and the per-number win-chance traces of the
sequential procedure). No plotting happens here; the output is one
observation per row so any tool can render it.

Conventions: flags have long names only; configuration precedence is
flags, then ``LUPI_*`` environment variables, then defaults. Output is CSV
with a header row (JSON via ``--format json``; the ``simulate`` command is
JSON-only), numbers carry 10 significant digits, and identical invocations
produce byte-identical output. Exit codes: 0 success, 1 usage or
validation error, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import ResourceLimitError, cache_path, subset_cap
from .game import Strategy
from .oracle import simulate
from .solvers import (
    ClassificationError,
    bound_c0,
    best_symmetric,
    sequential_solve,
    solve_ne,
)
from .winprob import expected_payoff, symmetric_payoff, win_prob_vector

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

NAMED_STRATEGIES = ("uniform", "zeng", "flitney", "ne")
FIGURES = ("fig1", "fig1b", "fig2a", "fig2b", "fig3")


class CliError(Exception):
    """Usage or validation problem; maps to exit code 1."""


class NonConvergence(Exception):
    """Numerical failure; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract here is exit 1
    def error(self, message: str):  # noqa: D102
        raise CliError(message)


@dataclass
class RunConfig:
    """Resolved options shared across commands (flags > env > defaults)."""

    subset_cap: int
    cache_path: str
    output_format: str
    output_path: str | None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            subset_cap=subset_cap(getattr(args, "subset_cap", None)),
            cache_path=cache_path(getattr(args, "cache_path", None)),
            output_format=getattr(args, "format", "csv"),
            output_path=getattr(args, "output", None),
        )


def fmt(x: float) -> str:
    """Numbers are printed with 10 significant digits everywhere."""
    return f"{x:.10g}"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list[object]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# equilibrium cache (used by --strategy ne and the figure sweeps)
# ---------------------------------------------------------------------------


def _cache_key(n: int, tol: float) -> str:
    return f"n={n},tol={tol!r}"


def _load_cache(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict) and isinstance(data.get("entries"), dict):
            return data
    except (OSError, ValueError):
        pass
    return {"entries": {}}


def _store_cache(path: str, data: dict) -> None:
    # atomic write-and-rename so concurrent runs never see a torn file
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(_json(data))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def solved_ne_strategy(n: int, cfg: RunConfig, tol: float = 1e-12) -> tuple[Strategy, float]:
    """Equilibrium strategy for ``n``, via the cache when warm."""
    data = _load_cache(cfg.cache_path)
    key = _cache_key(n, tol)
    entry = data["entries"].get(key)
    if entry is not None:
        try:
            return Strategy(entry["probs"]), float(entry["c_ne"])
        except (KeyError, ValueError, TypeError):
            pass  # stale or corrupt entry: recompute
    solution = solve_ne(n, tol=tol, cap=cfg.subset_cap)
    if not solution.converged:
        raise NonConvergence(
            f"equilibrium solve for n={n} did not converge "
            f"(residual {solution.residual:.3e} after {solution.iterations} iterations)"
        )
    data["entries"][key] = {
        "n": n,
        "tol": tol,
        "probs": [float(v) for v in solution.strategy.probs],
        "c_ne": solution.c_ne,
        "residual": solution.residual,
        "iterations": solution.iterations,
    }
    _store_cache(cfg.cache_path, data)
    return solution.strategy, solution.c_ne


def resolve_strategy(source: str, n: int, cfg: RunConfig) -> Strategy:
    """Turn a ``--strategy`` value (named or file path) into a Strategy."""
    if source == "uniform":
        return Strategy.uniform(n)
    if source == "zeng":
        return Strategy.zeng(n)
    if source == "flitney":
        return Strategy.flitney(n)
    if source == "ne":
        return solved_ne_strategy(n, cfg)[0]
    try:
        strategy = Strategy.from_file(source)
    except OSError as exc:
        raise CliError(f"cannot read strategy file {source!r}: {exc}") from exc
    if strategy.n != n:
        raise CliError(f"strategy file {source!r} is for n={strategy.n}, expected n={n}")
    return strategy


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_ne(args: argparse.Namespace, cfg: RunConfig) -> int:
    solution = solve_ne(args.n, tol=args.tol, max_iter=args.max_iter, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(_json(solution.to_json_obj()), cfg)
    else:
        rows = [[i + 1, float(v), solution.c_ne] for i, v in enumerate(solution.strategy.probs)]
        _emit(_csv(["i", "p_i", "c_ne"], rows), cfg)
    return EXIT_OK if solution.converged else EXIT_NUMERIC


def cmd_winprob(args: argparse.Namespace, cfg: RunConfig) -> int:
    strategy = resolve_strategy(args.strategy, args.n, cfg)
    per = win_prob_vector(strategy, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(_json(per.to_json_obj()), cfg)
    else:
        _emit(_csv(["i", "c_i"], [[i + 1, float(v)] for i, v in enumerate(per.values)]), cfg)
    return EXIT_OK


def cmd_sequential(args: argparse.Namespace, cfg: RunConfig) -> int:
    result = sequential_solve(args.n, args.c0, args.depth, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(_json(result.to_json_obj()), cfg)
    else:
        rows = [
            [e.i, "" if e.p_i is None else fmt(e.p_i), e.status, float(e.residual)]
            for e in result.entries
        ]
        _emit(_csv(["i", "p_i", "status", "residual"], rows), cfg)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace, cfg: RunConfig) -> int:
    interval = bound_c0(args.n, args.depth, tol=args.tol, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(_json(interval.to_json_obj()), cfg)
    else:
        _emit(
            _csv(
                ["n", "depth", "lower", "upper"],
                [[args.n, interval.depth, interval.lower, interval.upper]],
            ),
            cfg,
        )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> int:
    pi = resolve_strategy(args.pi, args.n, cfg)
    p = resolve_strategy(args.p, args.n, cfg)
    stats = simulate(pi, p, args.rounds, args.seed, shards=args.shards)
    _emit(_json(stats.to_json_obj()), cfg)
    return EXIT_OK


def cmd_payoff(args: argparse.Namespace, cfg: RunConfig) -> int:
    pi = resolve_strategy(args.pi, args.n, cfg)
    p = resolve_strategy(args.p, args.n, cfg)
    report = expected_payoff(pi, p, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(_json(report.to_json_obj()), cfg)
    else:
        rows = [
            [i + 1, float(c), float(q), float(c * q)]
            for i, (c, q) in enumerate(zip(report.per_number.values, pi.probs))
        ]
        rows.append(["w", "", "", report.w])
        _emit(_csv(["i", "c_i", "pi_i", "c_i_times_pi_i"], rows), cfg)
    return EXIT_OK


def cmd_bestsym(args: argparse.Namespace, cfg: RunConfig) -> int:
    optimum = best_symmetric(args.n, restarts=args.restarts, cap=cfg.subset_cap)
    if cfg.output_format == "json":
        _emit(
            _json(
                {
                    "strategy": optimum.strategy.to_json_obj(),
                    "w": optimum.w,
                    "starts": optimum.starts,
                    "iterations": optimum.iterations,
                }
            ),
            cfg,
        )
    else:
        rows = [[i + 1, float(v), optimum.w] for i, v in enumerate(optimum.strategy.probs)]
        _emit(_csv(["i", "p_i", "w"], rows), cfg)
    return EXIT_OK


def _parse_n_list(raw: str) -> list[int]:
    try:
        values = [int(tok) for tok in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise CliError(f"--n-list must be a comma-separated list of integers, got {raw!r}") from exc
    if not values:
        raise CliError("--n-list is empty")
    return values


def cmd_figure(args: argparse.Namespace, cfg: RunConfig) -> int:
    which = args.which
    if which == "fig3":
        if args.n is None or args.c0 is None:
            raise CliError("fig3 needs --n and --c0")
        return _figure_traces(args, cfg)
    if args.n_list is None:
        raise CliError(f"{which} needs --n-list")
    n_list = _parse_n_list(args.n_list)

    rows: list[list[object]] = []
    if which == "fig1":
        for n in n_list:
            strategy, _ = solved_ne_strategy(n, cfg)
            rows.extend([n, i + 1, float(v)] for i, v in enumerate(strategy.probs))
        _emit(_csv(["n", "i", "p_ne"], rows), cfg)
    elif which == "fig1b":
        for n in n_list:
            strategy, _ = solved_ne_strategy(n, cfg)
            rows.extend([n, (i + 1) / n, n * float(v)] for i, v in enumerate(strategy.probs))
        _emit(_csv(["n", "i_over_n", "n_times_p_ne"], rows), cfg)
    elif which == "fig2a":
        for n in n_list:
            per = win_prob_vector(Strategy.uniform(n), cap=cfg.subset_cap)
            rows.extend([n, i + 1, float(v)] for i, v in enumerate(per.values))
        _emit(_csv(["n", "i", "c_i"], rows), cfg)
    elif which == "fig2b":
        for n in n_list:
            _, c_ne = solved_ne_strategy(n, cfg)
            series = {
                "uniform": symmetric_payoff(Strategy.uniform(n), cap=cfg.subset_cap),
                "ne": c_ne,
                "zeng": symmetric_payoff(Strategy.zeng(n), cap=cfg.subset_cap),
                "flitney": symmetric_payoff(Strategy.flitney(n), cap=cfg.subset_cap),
            }
            rows.extend([name, n, n * w] for name, w in series.items())
        _emit(_csv(["series", "n", "n_times_w"], rows), cfg)
    else:
        raise CliError(f"unknown figure {which!r}")
    return EXIT_OK


def _figure_traces(args: argparse.Namespace, cfg: RunConfig) -> int:
    """Win-chance traces c_i over candidate p_i, prefix fixed by the chain."""
    from .winprob import _ci_raw_grid

    n, c0, depth, points = args.n, args.c0, args.depth, args.points
    if not 0.0 < c0 < 1.0:
        raise CliError(f"--c0 must lie in (0, 1), got {c0}")
    result = sequential_solve(n, c0, depth, cap=cfg.subset_cap)
    rows: list[list[object]] = []
    prefix: list[float] = []
    for entry in result.entries:
        upper = 1.0 - math.fsum(prefix)
        grid = upper * np.arange(1, points + 1) / (points + 1)
        values = _ci_raw_grid(entry.i, np.array(prefix), grid, n, cfg.subset_cap)
        rows.extend([entry.i, float(x), float(v)] for x, v in zip(grid, values))
        if entry.p_i is None:
            break
        prefix.append(entry.p_i)
    _emit(_csv(["i", "p", "c_i"], rows), cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="lupi",
        description="Win probabilities and equilibrium strategies for the "
        "lowest-unique-positive-integer game.",
    )
    parser.add_argument("--version", action="version", version=f"lupi {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")
    common.add_argument("--output", default=None, help="write output to this file instead of stdout")
    common.add_argument("--subset-cap", type=int, default=None,
                        help="override the subset-enumeration cap (env LUPI_SUBSET_CAP)")
    common.add_argument("--cache-path", default=None,
                        help="equilibrium cache file (env LUPI_CACHE_PATH)")

    sub = parser.add_subparsers(dest="command", required=True)

    p_ne = sub.add_parser("ne", parents=[common], help="solve the symmetric equilibrium")
    p_ne.add_argument("--n", type=int, required=True)
    p_ne.add_argument("--tol", type=float, default=1e-12)
    p_ne.add_argument("--max-iter", type=int, default=200)
    p_ne.set_defaults(func=cmd_ne)

    p_wp = sub.add_parser("winprob", parents=[common], help="per-number win chances of a strategy")
    p_wp.add_argument("--n", type=int, required=True)
    p_wp.add_argument("--strategy", required=True,
                      help="uniform | zeng | flitney | ne | path to a strategy file")
    p_wp.set_defaults(func=cmd_winprob)

    p_seq = sub.add_parser("sequential", parents=[common],
                           help="solve p_1, p_2, ... one number at a time for a target win value")
    p_seq.add_argument("--n", type=int, required=True)
    p_seq.add_argument("--c0", type=float, required=True)
    p_seq.add_argument("--depth", type=int, required=True)
    p_seq.set_defaults(func=cmd_sequential)

    p_bound = sub.add_parser("bound", parents=[common],
                             help="bracket the equilibrium win value from a shallow chain")
    p_bound.add_argument("--n", type=int, required=True)
    p_bound.add_argument("--depth", type=int, required=True)
    p_bound.add_argument("--tol", type=float, default=1e-4)
    p_bound.set_defaults(func=cmd_bound)

    p_sim = sub.add_parser("simulate", parents=[common], help="play the game (JSON output)")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--pi", required=True, help="observed player's strategy source")
    p_sim.add_argument("--p", required=True, help="opponents' strategy source")
    p_sim.add_argument("--rounds", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--shards", type=int, default=1)
    p_sim.set_defaults(func=cmd_simulate)

    p_pay = sub.add_parser("payoff", parents=[common],
                           help="expected payoff of one strategy against another")
    p_pay.add_argument("--n", type=int, required=True)
    p_pay.add_argument("--pi", required=True)
    p_pay.add_argument("--p", required=True)
    p_pay.set_defaults(func=cmd_payoff)

    p_best = sub.add_parser("bestsym", parents=[common],
                            help="best symmetric strategy (everyone plays it)")
    p_best.add_argument("--n", type=int, required=True)
    p_best.add_argument("--restarts", type=int, default=10)
    p_best.set_defaults(func=cmd_bestsym)

    p_fig = sub.add_parser(
        "figure",
        parents=[common],
        help="emit plot-ready CSV series",
        description="fig1: equilibrium strategies per n; fig1b: the same "
        "scaled as (i/n, n*p_i), an interpretation of how the axes grow; "
        "fig2a: win chances under uniform play; fig2b: scaled payoffs n*W "
        "for the uniform/ne/zeng/flitney strategies; fig3: win-chance "
        "traces against candidate p_i for a fixed target win value.",
    )
    p_fig.add_argument("--which", choices=FIGURES, required=True)
    p_fig.add_argument("--n-list", default=None, help="comma-separated player counts")
    p_fig.add_argument("--n", type=int, default=None, help="player count (fig3)")
    p_fig.add_argument("--c0", type=float, default=None, help="target win value (fig3)")
    p_fig.add_argument("--depth", type=int, default=4, help="chain depth (fig3)")
    p_fig.add_argument("--points", type=int, default=256, help="grid points per trace (fig3)")
    p_fig.set_defaults(func=cmd_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, ClassificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
