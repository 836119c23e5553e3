"""Seeded experiment drivers: strategy sweeps, empirical threshold
bisection and random-subset baselines.

Thresholds found here are relative to the chosen strategy pair; only the
exact solver computes optimal-play thresholds.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from pathlib import Path

import numpy as np

from .analyzers import ClauseSet, Hypergraph, is_r_colorable, is_satisfiable
from .boards import ClauseBoard, HypergraphBoard
from .engine import GameRules, Kind, PropertyObjective, as_objective, play
from .families import (SetFamily, clique_family, local_density_family,
                       monochromatic_clause_family)
from .strategies import WAITERS, CLIENTS, AnchorIncidence, make_client, make_waiter

SWEEP_VERSION = 1
SWEEP_COLUMNS = ("q", "reps", "waiter_wins", "client_wins", "client_win_rate", "waiter_win_rate",
                 "mean_client_size", "mean_initial_potential", "mean_final_potential",
                 "mean_max_anchor_load", "max_anchor_load")
BASELINE_COLUMNS = ("m", "density", "reps", "with_property", "fraction")
FAMILY_CHOICES = ("auto", "none", "clique", "local-density", "monochromatic")
OBJECTIVES = ("property", "contain", "transversal")

# which family a ledger strategy steers by when family="auto"
_AUTO_FAMILY = {
    "wc-client-potential": "local-density",
    "wc-waiter-potential": "target",
    "wc-waiter-danger": "target",
    "cw-client-potential": "target",
}


def tool_version() -> str:
    from . import __version__
    return __version__


class ConfigError(ValueError):
    pass


class NonMonotoneProfile(RuntimeError):
    def __init__(self, profile: dict, side: str):
        pretty = ", ".join(f"q={q}: {r:.3f}" for q, r in sorted(profile.items()))
        super().__init__(f"{side} win rate is not monotone across the bracket ({pretty})")
        self.profile = profile
        self.side = side


@dataclass
class ExperimentConfig:
    game: str = "non2col"
    version: str = "wc"
    n: int = 6
    k: int = 2
    q_min: int = 1
    q_max: int = 1
    waiter: str = "random"
    client: str = "random"
    family: str = "auto"  # or a path to a family file
    objective: str = "property"
    reps: int = 10
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    level: float = 0.5
    side: str = "auto"

    def __post_init__(self):
        self.version = str(self.version).lower()
        self.validate()

    def validate(self):
        if self.game not in ("non2col", "ksat"):
            raise ConfigError(f"game must be non2col or ksat, got {self.game!r}")
        if self.version not in ("wc", "cw"):
            raise ConfigError(f"version must be wc or cw, got {self.version!r}")
        if not 2 <= self.k <= self.n:
            raise ConfigError(f"need n >= k >= 2 (n={self.n}, k={self.k})")
        if not 1 <= self.q_min <= self.q_max:
            raise ConfigError(f"need 1 <= q_min <= q_max (got {self.q_min}..{self.q_max})")
        if self.waiter not in WAITERS:
            raise ConfigError(f"unknown waiter strategy {self.waiter!r}")
        if self.client not in CLIENTS:
            raise ConfigError(f"unknown client strategy {self.client!r}")
        if self.family not in FAMILY_CHOICES and not Path(self.family).is_file():
            raise ConfigError(f"family must be one of {FAMILY_CHOICES} or a readable file, got {self.family!r}")
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"objective must be one of {OBJECTIVES}")
        if self.objective != "property" and self.family in ("auto", "none"):
            raise ConfigError(f"objective {self.objective!r} needs an explicit family")
        if self.reps < 0 or self.workers < 1:
            raise ConfigError("reps must be >= 0 and workers >= 1")
        if self.format not in ("csv", "text"):
            raise ConfigError("format must be csv or text")
        if not 0 < self.level < 1:
            raise ConfigError("crossing level must lie in (0, 1)")
        if self.side not in ("auto", "waiter", "client"):
            raise ConfigError("side must be auto, waiter or client")

    @property
    def kind(self) -> Kind:
        return Kind(self.version.upper())

    @property
    def high_side(self) -> str:
        """The side that profits from a large bias."""
        return "client" if self.kind is Kind.WC else "waiter"

    def designated_side(self) -> str:
        return self.high_side if self.side == "auto" else self.side

    @classmethod
    def from_mapping(cls, values: dict) -> "ExperimentConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            name = key.replace("-", "_")
            if name not in known:
                raise ConfigError(f"unknown config key {key!r}")
            default = getattr(cls, name, None)
            if isinstance(default, bool) or raw is None:
                kwargs[name] = raw
            elif isinstance(default, int):
                kwargs[name] = int(raw)
            elif isinstance(default, float):
                kwargs[name] = float(raw)
            else:
                kwargs[name] = raw
        return cls(**kwargs)

    def header(self) -> str:
        cfg = {k: v for k, v in asdict(self).items() if k not in ("out", "workers")}
        return (f"# wcgames version={tool_version()} schema={SWEEP_VERSION} seed={self.seed} "
                f"config={json.dumps(cfg, sort_keys=True)}")


def read_config_file(path) -> dict:
    """Plain ``key=value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


# --- game setup -----------------------------------------------------------

@lru_cache(maxsize=None)
def game_board(game: str, n: int, k: int):
    return HypergraphBoard(n, k) if game == "non2col" else ClauseBoard(n, k)


def property_objective(game: str, board) -> PropertyObjective:
    """Non-2-colourability of Client's hypergraph, or unsatisfiability of
    Client's clause set."""
    if game == "non2col":
        return PropertyObjective(lambda ids: not is_r_colorable(Hypergraph.from_board(board, ids), 2)[0],
                                 "non2col")
    return PropertyObjective(lambda ids: not is_satisfiable(ClauseSet.from_board(board, ids), board.n)[0],
                             "unsat")


@lru_cache(maxsize=None)
def named_family(game: str, n: int, k: int, name: str) -> SetFamily | None:
    board = game_board(game, n, k)
    if name == "none":
        return None
    if name == "target":
        name = "clique" if game == "non2col" else "monochromatic"
    if name == "clique":
        if game != "non2col":
            raise ConfigError("clique family needs the non2col game")
        return clique_family(board, -(-n // 2))
    if name == "monochromatic":
        if game != "ksat":
            raise ConfigError("monochromatic family needs the ksat game")
        return monochromatic_clause_family(board)
    if name == "local-density":
        return local_density_family(board)
    return SetFamily.from_text(Path(name).read_text())


def strategy_family(config: ExperimentConfig, key: str):
    if config.family != "auto":
        return named_family(config.game, config.n, config.k, config.family)
    auto = _AUTO_FAMILY.get(key)
    return None if auto is None else named_family(config.game, config.n, config.k, auto)


def game_setup(config: ExperimentConfig):
    """(board, family for scoring, objective, waiter, client)."""
    board = game_board(config.game, config.n, config.k)
    waiter = make_waiter(config.waiter, strategy_family(config, config.waiter))
    client = make_client(config.client, strategy_family(config, config.client))
    if config.objective == "property":
        family, objective = None, property_objective(config.game, board)
    else:
        family = named_family(config.game, config.n, config.k, config.family)
        objective = as_objective(config.objective)
    return board, family, objective, waiter, client


def game_index(config: ExperimentConfig, q: int, rep: int) -> int:
    return (q - config.q_min) * max(config.reps, 1) + rep


def run_game(config: ExperimentConfig, q: int, rep: int, transcript=False):
    """Play one game; returns a summary dict (and the transcript if asked)."""
    board, family, objective, waiter, client = game_setup(config)
    t = play(board, family, GameRules(config.kind, q), waiter, client,
             seed=config.seed, game_index=game_index(config, q, rep), objective=objective)
    load = max(AnchorIncidence(board).loads(t.client_final), default=0)
    final = t.rounds[-1].diagnostics if t.rounds else t.initial_diagnostics
    summary = {
        "winner": t.winner,
        "client_size": len(t.client_final),
        "initial_potential": t.initial_diagnostics.get("potential"),
        "final_potential": final.get("potential"),
        "max_anchor_load": load,
    }
    return (summary, t) if transcript else summary


def _run_task(args):
    return run_game(*args)


def _map(fn, tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def _mean(values):
    values = [v for v in values if v is not None]
    return math.fsum(values) / len(values) if values else None


def _summarize(q, games) -> dict:
    reps = len(games)
    client_wins = sum(g["winner"] == "client" for g in games)
    return {
        "q": q,
        "reps": reps,
        "waiter_wins": reps - client_wins,
        "client_wins": client_wins,
        "client_win_rate": client_wins / reps if reps else None,
        "waiter_win_rate": (reps - client_wins) / reps if reps else None,
        "mean_client_size": _mean([g["client_size"] for g in games]),
        "mean_initial_potential": _mean([g["initial_potential"] for g in games]),
        "mean_final_potential": _mean([g["final_potential"] for g in games]),
        "mean_max_anchor_load": _mean([g["max_anchor_load"] for g in games]),
        "max_anchor_load": max((g["max_anchor_load"] for g in games), default=None),
    }


@dataclass
class SweepResult:
    config: ExperimentConfig
    rows: list = field(default_factory=list)
    outcomes: dict = field(default_factory=dict)  # q -> list of winners

    def to_csv(self) -> str:
        return format_table(self.config.header(), SWEEP_COLUMNS, self.rows, "csv")

    def to_text(self) -> str:
        return format_table(self.config.header(), SWEEP_COLUMNS, self.rows, "text")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def format_table(header: str, columns, rows, fmt="csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(header + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
        return buf.getvalue()
    cells = [list(columns)] + [[_cell(r[c]) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = [header] + ["  ".join(s.rjust(w) for s, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def sweep(config: ExperimentConfig) -> SweepResult:
    """R games per q in [q_min, q_max]; one summary row per q."""
    config.validate()
    qs = range(config.q_min, config.q_max + 1)
    tasks = [(config, q, r) for q in qs for r in range(config.reps)]
    games = _map(_run_task, tasks, config.workers)
    result = SweepResult(config)
    if config.reps == 0:
        return result
    for i, q in enumerate(qs):
        chunk = games[i * config.reps:(i + 1) * config.reps]
        result.rows.append(_summarize(q, chunk))
        result.outcomes[q] = [g["winner"] for g in chunk]
    return result


def write_output(text: str, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write output {path}: {exc}") from exc
    return path


# --- statistics -----------------------------------------------------------

def bootstrap_ci(outcomes, n_boot: int = 2000, alpha: float = 0.05, seed: int = 0):
    """Percentile bootstrap interval for the mean of 0/1 outcomes."""
    x = np.asarray(outcomes, dtype=float)
    if x.size == 0:
        return (math.nan, math.nan)
    rng = np.random.default_rng(seed)
    means = x[rng.integers(0, x.size, size=(n_boot, x.size))].mean(axis=1)
    lo, hi = np.quantile(means, [alpha / 2, 1 - alpha / 2])
    return float(lo), float(hi)


@dataclass
class BisectResult:
    q_star: int | None  # None: no crossing inside the bracket
    rate: float | None
    side: str
    level: float
    profile: dict  # probed q -> win rate of the designated side
    ci: tuple | None = None
    label: str = "empirical threshold for this strategy pair (not optimal play)"


def _side_rate(config, q, side):
    cfg = ExperimentConfig(**{**asdict(config), "q_min": q, "q_max": q})
    res = sweep(cfg)
    if not res.rows:
        raise ConfigError("bisection needs reps >= 1")
    wins = [int(w == side) for w in res.outcomes[q]]
    return sum(wins) / len(wins), wins


def check_monotone(profile: dict, side: str, increasing: bool, noise: float) -> None:
    qs = sorted(profile)
    for a, b in zip(qs, qs[1:]):
        step = profile[b] - profile[a]
        if (step < -noise) if increasing else (step > noise):
            raise NonMonotoneProfile(profile, side)


def bisect_threshold(config: ExperimentConfig, noise: float | None = None, scan: bool = False) -> BisectResult:
    """Smallest q in [q_min, q_max] at which the designated side's win rate
    crosses ``config.level``: reaches it from below for the side favoured by
    a large bias, drops under it for the other side.

    The probed rates must be monotone in that direction up to ``noise``
    (default three standard errors of a fair coin at R games); ``scan=True``
    probes every q in the bracket.
    """
    side = config.designated_side()
    R = config.reps
    if R < 1:
        raise ConfigError("bisection needs reps >= 1")
    noise = 3 * math.sqrt(0.25 / R) if noise is None else noise
    increasing = side == config.high_side
    cache = {}

    def probe(q):
        if q not in cache:
            cache[q] = _side_rate(config, q, side)
        return cache[q][0]

    def crossed(q):
        r = probe(q)
        return r >= config.level if increasing else r < config.level

    lo, hi = config.q_min, config.q_max
    if scan:
        for q in range(lo, hi + 1):
            probe(q)
    if crossed(lo) or lo == hi:
        q_star = lo
    elif not crossed(hi):
        q_star = None
    else:
        a, b = lo, hi
        while b - a > 1:
            mid = (a + b) // 2
            if crossed(mid):
                b = mid
            else:
                a = mid
        q_star = b
    profile = {q: v[0] for q, v in cache.items()}
    check_monotone(profile, side, increasing, noise)
    if q_star is None:
        return BisectResult(None, None, side, config.level, profile)
    return BisectResult(q_star, profile[q_star], side, config.level, profile,
                        bootstrap_ci(cache[q_star][1], seed=config.seed))


# --- random baselines -----------------------------------------------------

def property_checker(board, prop):
    """Predicate on element-id collections for ``prop`` in {non2col, unsat}
    or a callable passed through."""
    if callable(prop):
        return prop
    if prop == "non2col":
        if not isinstance(board, HypergraphBoard):
            raise ConfigError("non2col needs a hypergraph board")
        return lambda ids: not is_r_colorable(Hypergraph.from_board(board, ids), 2)[0]
    if prop == "unsat":
        if not isinstance(board, ClauseBoard):
            raise ConfigError("unsat needs a clause board")
        return lambda ids: not is_satisfiable(ClauseSet.from_board(board, ids), max_vars=board.n)[0]
    raise ConfigError(f"unknown property {prop!r}")


@dataclass
class BaselineResult:
    rows: list
    crossing: float | None  # interpolated m at which the fraction reaches the level
    anchors: int
    header: str = ""

    @property
    def crossing_density(self):
        return None if self.crossing is None else self.crossing / self.anchors

    def to_csv(self) -> str:
        return format_table(self.header, BASELINE_COLUMNS, self.rows, "csv")

    def to_text(self) -> str:
        return format_table(self.header, BASELINE_COLUMNS, self.rows, "text")


def _baseline_task(args):
    board, prop, m, reps, seed, index = args
    check = property_checker(board, prop)
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    hits = 0
    for _ in range(reps):
        ids = rng.choice(board.size, size=m, replace=False)
        hits += bool(check(sorted(int(i) for i in ids)))
    return hits


def crossing_point(points, level=0.5):
    """Linear interpolation of the first upward crossing of ``level``."""
    prev = None
    for m, f in points:
        if f >= level:
            if prev is None or prev[1] >= level:
                return float(m)
            (m0, f0) = prev
            return m0 + (level - f0) * (m - m0) / (f - f0)
        prev = (m, f)
    return None


def random_baseline(board, prop, m_values, reps: int, seed: int = 0, level: float = 0.5,
                    workers: int = 1) -> BaselineResult:
    """Fraction of uniform m-subsets of the board with the property, per m."""
    m_values = sorted(set(int(m) for m in m_values))
    if any(not 0 <= m <= board.size for m in m_values):
        raise ConfigError(f"m must lie in [0, {board.size}]")
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    if isinstance(prop, str) and workers > 1:
        tasks = [(board, prop, m, reps, seed, i) for i, m in enumerate(m_values)]
        hits = _map(_baseline_task, tasks, workers)
    else:
        hits = [_baseline_task((board, prop, m, reps, seed, i)) for i, m in enumerate(m_values)]
    anchors = board.anchor_count
    rows = [{"m": m, "density": m / anchors, "reps": reps, "with_property": h, "fraction": h / reps}
            for m, h in zip(m_values, hits)]
    crossing = crossing_point([(r["m"], r["fraction"]) for r in rows], level)
    name = prop if isinstance(prop, str) else getattr(prop, "__name__", "custom")
    header = (f"# wcgames version={tool_version()} schema={SWEEP_VERSION} seed={seed} "
              f"config={json.dumps({'board': board.describe(), 'property': name, 'reps': reps, 'level': level}, sort_keys=True)}")
    return BaselineResult(rows, crossing, anchors, header)
