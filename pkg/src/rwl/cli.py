"""Command-line entry point: config parsing, experiment dispatch, and
bit-stable serialization of reports and time series.

The configuration format is a restricted TOML-like document:

    # comment
    command = "conservation"
    [params]
    p = 7.0
    iota = 1
    [grid]
    r_max = 16.0
    n = 2048
    [experiment]
    times = [0.0, 1.0, 2.0]
    seed = 42

Only one level of tables; values are numbers, booleans, double-quoted
strings, or flat arrays of those.  Serialization writes keys in a fixed
order so that parse -> serialize -> parse is the identity on RunConfig.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .energetics import (exterior_generalized_energy, generalized_energy,
                         hardy_weighted_norm, nonlinear_energy, pair_norm,
                         sobolev_norm_radial)
from .errors import NUMERICAL_FAILURES, ConfigError, RwlError
from .experiments import RUNNERS, ExperimentReport
from .dalembert import build_free_profile, eval_linear
from .families import SplitMix64, resolve_family
from .grid import RadialGrid, RadialState, state_from_arrays
from .model import make_params
from .nonlinear import SolverConfig, evolve

SCHEMA_VERSION = 1

COMMANDS = ("simulate", "linear", "stationary", "channel", "huygens",
            "conservation", "smalldata", "exterior-decay", "blowup-ode",
            "norms", "all")

EXPERIMENT_COMMANDS = {
    "conservation": "conservation",
    "channel": "channel",
    "huygens": "huygens",
    "exterior-decay": "exterior_decay",
    "smalldata": "smalldata",
    "stationary": "stationary",
    "blowup-ode": "blowup_ode",
}

RANDOMIZED = {"channel", "huygens"}


# ---------------------------------------------------------------------------
# restricted TOML-like document

def parse_config_text(text: str) -> dict:
    """Parse the restricted key-value grammar into nested dicts."""
    root: dict = {}
    table = root
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: unterminated table header")
            name = line[1:-1].strip()
            if not name.isidentifier():
                raise ConfigError(f"line {lineno}: bad table name {name!r}")
            table = root.setdefault(name, {})
            if not isinstance(table, dict):
                raise ConfigError(f"line {lineno}: {name!r} already a value")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        try:
            table[key] = _parse_value(rhs.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return root


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    for ch in line:
        if ch == '"':
            in_string = not in_string
        if ch == "#" and not in_string:
            break
        out.append(ch)
    return "".join(out)


def _parse_value(token: str):
    if token == "true":
        return True
    if token == "false":
        return False
    if token.startswith('"'):
        if not token.endswith('"') or len(token) < 2:
            raise ValueError(f"unterminated string {token!r}")
        return token[1:-1]
    if token.startswith("["):
        if not token.endswith("]"):
            raise ValueError(f"unterminated array {token!r}")
        inner = token[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(part.strip()) for part in inner.split(",")]
    try:
        if any(c in token for c in ".eE") and not token.lstrip("+-").isdigit():
            return float(token)
        return int(token)
    except ValueError:
        raise ValueError(f"cannot parse value {token!r}") from None


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class RunConfig:
    command: str | None = None
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    BLOCKS = ("params", "grid", "data", "experiment", "output")

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        doc = parse_config_text(text)
        cfg = cls()
        for key, value in doc.items():
            if key == "command":
                if value not in COMMANDS:
                    raise ConfigError(f"unknown command {value!r}")
                cfg.command = value
            elif key in cls.BLOCKS:
                getattr(cfg, key).update(value)
            else:
                raise ConfigError(f"unknown top-level entry {key!r}")
        if "file" in cfg.data:
            path = Path(cfg.data["file"])
            if not path.exists():
                raise ConfigError(f"data file does not exist: {path}")
        return cfg

    def to_text(self) -> str:
        lines = []
        if self.command is not None:
            lines.append(f'command = "{self.command}"')
        for block in self.BLOCKS:
            table = getattr(self, block)
            if not table:
                continue
            lines.append("")
            lines.append(f"[{block}]")
            for key in sorted(table):
                lines.append(f"{key} = {_format_value(table[key])}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# serialization

def format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def write_series(path: Path, columns, rows) -> None:
    """CSV with a header; floats as shortest round-trip decimals."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(columns) + "\n")
        for row in rows:
            if len(row) != len(columns):
                raise ValueError("row width does not match header")
            f.write(",".join(format_cell(v) for v in row) + "\n")


def write_report(report: ExperimentReport, directory: Path) -> bool:
    directory.mkdir(parents=True, exist_ok=True)
    series_name = None
    if report.series_columns:
        series_name = f"{report.experiment}.csv"
        write_series(directory / series_name, report.series_columns,
                     report.series_rows)
    doc = report.to_json_dict(series_ref=series_name)
    with open(directory / "report.json", "w", encoding="utf-8",
              newline="\n") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")
    return report.passed


# ---------------------------------------------------------------------------
# config -> runner adapters

def _seed_for(cfg: RunConfig, args) -> int | None:
    if args.seed is not None:
        return args.seed
    return cfg.experiment.get("seed")


def _family_spec(cfg: RunConfig, default_family: str, default_opts: dict):
    data = dict(cfg.data)
    family = data.pop("family", default_family)
    data.pop("file", None)
    return family, (data or dict(default_opts))


def _runner_kwargs(command: str, cfg: RunConfig, seed: int | None) -> dict:
    p = cfg.params.get("p", 7.0)
    iota = cfg.params.get("iota", 1)
    grid = cfg.grid
    exp = cfg.experiment
    if command == "conservation":
        family, opts = _family_spec(cfg, "gaussian",
                                    {"amplitude": 1.0, "width": 1.0})
        kw = {"p": p, "iota": iota, "family": family, "family_options": opts,
              "seed": seed}
        if "times" in exp:
            kw["times"] = tuple(float(t) for t in exp["times"])
        for name in ("r_max", "n"):
            if name in grid:
                kw[name] = grid[name]
        return kw
    if command == "channel":
        if seed is None:
            raise ConfigError("channel needs a seed ("
                              "--seed or experiment.seed)")
        kw = {"p": p, "iota": iota, "seed": seed}
        if "R" in exp:
            R = exp["R"]
            kw["R"] = float(R[0] if isinstance(R, list) else R)
        if "trials" in exp:
            kw["trials"] = int(exp["trials"])
        if "t_end" in grid:
            kw["horizon"] = float(grid["t_end"])
        for name in ("r_max", "n"):
            if name in grid:
                kw[name] = grid[name]
        return kw
    if command == "huygens":
        if seed is None:
            raise ConfigError("huygens needs a seed")
        kw = {"p": p, "iota": iota, "seed": seed}
        if "times" in exp:
            kw["t_eval"] = float(exp["times"][0])
        if "R" in exp:
            kw["R_list"] = tuple(float(R) for R in exp["R"])
        for name in ("r_max", "n"):
            if name in grid:
                kw[name] = grid[name]
        return kw
    if command == "exterior-decay":
        family, opts = _family_spec(cfg, "gaussian",
                                    {"amplitude": 0.3, "width": 1.2})
        kw = {"p": p, "iota": cfg.params.get("iota", -1), "family": family,
              "family_options": opts, "seed": seed}
        if "R" in exp:
            kw["R_list"] = tuple(float(R) for R in exp["R"])
        for src, dst in (("t_end", "t_end"), ("r_max", "r_max"), ("n", "n"),
                         ("record_stride", "record_stride")):
            if src in grid:
                kw[dst] = grid[src]
        return kw
    if command == "smalldata":
        kw = {"p": p, "iota": iota}
        if "epsilons" in exp:
            kw["epsilons"] = tuple(float(e) for e in exp["epsilons"])
        for name in ("r_max", "n", "t_end", "record_stride"):
            if name in grid:
                kw[name] = grid[name]
        return kw
    if command == "stationary":
        kw = {"p": p}
        if "ells" in exp:
            kw["ells"] = tuple(float(e) for e in exp["ells"])
        return kw
    if command == "blowup-ode":
        kw = {"p": p}
        if "amplitude" in cfg.data:
            kw["amplitude"] = float(cfg.data["amplitude"])
        if "radius" in cfg.data:
            kw["plateau_radius"] = float(cfg.data["radius"])
        for name in ("r_max", "n", "t_end", "record_stride"):
            if name in grid:
                kw[name] = grid[name]
        return kw
    raise ConfigError(f"no experiment adapter for {command!r}")


# ---------------------------------------------------------------------------
# non-experiment subcommands

def _build_state(cfg: RunConfig, seed: int | None) -> RadialState:
    params = make_params(cfg.params.get("p", 7.0), cfg.params.get("iota", 1))
    if "file" in cfg.data:
        r, w0, w1 = load_samples(Path(cfg.data["file"]))
        grid = _grid_from_radii(r)
        return state_from_arrays(params, grid, w0, w1)
    grid = RadialGrid(cfg.grid.get("r_max", 16.0), int(cfg.grid.get("n", 2048)))
    data = dict(cfg.data)
    family = data.pop("family", "gaussian")
    if not data and family == "gaussian":
        data = {"amplitude": 0.3, "width": 1.0}
    rng = SplitMix64(seed) if seed is not None else None
    return resolve_family(family, params, grid, data, rng)


def _grid_from_radii(r: np.ndarray) -> RadialGrid:
    if r[0] != 0.0:
        raise ConfigError("samples file must start at r = 0")
    spacing = np.diff(r)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=1e-12):
        raise ConfigError("samples file must be uniformly spaced")
    return RadialGrid(float(r[-1]), len(r) - 1)


def load_samples(path: Path):
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    if rows.ndim != 2 or rows.shape[1] < 3:
        raise ConfigError(f"{path}: need columns r,w0,w1")
    return rows[:, 0], rows[:, 1], rows[:, 2]


def cmd_simulate(cfg: RunConfig, out_dir: Path, seed: int | None,
                 quiet: bool) -> int:
    state = _build_state(cfg, seed)
    grid_cfg = cfg.grid
    solver = SolverConfig(
        t_end=float(grid_cfg.get("t_end", 5.0)),
        dt_ratio=float(grid_cfg.get("dt_ratio", 1.0)),
        blowup_threshold=float(grid_cfg.get("blowup_threshold", 1e6)),
        record_stride=int(grid_cfg.get("record_stride", 32)))
    R = float(cfg.experiment.get("R", [1.0])[0]
              if isinstance(cfg.experiment.get("R", [1.0]), list)
              else cfg.experiment.get("R"))
    traj = evolve(state, solver)
    rows = []
    for s in traj.states:
        brk = nonlinear_energy(s)
        ext = (exterior_generalized_energy(s, R)
               if R + abs(s.time) <= s.grid.r_max else 0.0)
        max_w = float(np.max(np.abs(s.w.values)))
        rows.append((s.time, brk.e_m, brk.e_2, brk.total_nonlinear, ext,
                     max_w))
    write_series(out_dir / "simulate.csv",
                 ("t", "E_m", "E_2_total", "nonlinear_total", "ext_E_m_R",
                  "max_abs_w"), rows)
    if not quiet:
        print(f"simulate: status={traj.status} snapshots={len(traj.states)}"
              f" -> {out_dir / 'simulate.csv'}")
    return 0 if traj.status == "completed" else 3


def cmd_linear(cfg: RunConfig, out_dir: Path, seed: int | None,
               quiet: bool) -> int:
    state = _build_state(cfg, seed)
    times = cfg.experiment.get("times", [0.0, 1.0, 2.0, 4.0])
    horizon = max(abs(float(t)) for t in times)
    profile = build_free_profile(state, state.grid.r_max + horizon)
    rows = []
    for t in times:
        snap = eval_linear(profile, float(t))
        for r, w, wt in zip(snap.grid.nodes, snap.w.values, snap.wt.values):
            rows.append((float(t), float(r), float(w), float(wt)))
    write_series(out_dir / "linear.csv", ("t", "r", "w", "wt"), rows)
    if not quiet:
        print(f"linear: {len(times)} times -> {out_dir / 'linear.csv'}")
    return 0


def cmd_norms(cfg: RunConfig, out_dir: Path, seed: int | None,
              quiet: bool) -> int:
    state = _build_state(cfg, seed)
    params = state.params
    brk = nonlinear_energy(state)
    table = {
        "E_m": brk.e_m,
        "E_2_total": brk.e_2,
        "nonlinear_total": brk.total_nonlinear,
        "hardy_derivative_w0": hardy_weighted_norm(state.w, "derivative",
                                                   params.m),
        "hardy_position_w1": hardy_weighted_norm(state.wt, "position",
                                                 params.m),
        "sobolev_sc_w0": sobolev_norm_radial(state.w, params.s_c),
        "sobolev_scm1_w1": sobolev_norm_radial(state.wt, params.s_c - 1.0),
    }
    table["pair_norm"] = float(np.hypot(table["sobolev_sc_w0"],
                                        table["sobolev_scm1_w1"]))
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "norms.json", "w", encoding="utf-8",
              newline="\n") as f:
        json.dump({"schema_version": SCHEMA_VERSION,
                   "params": {"p": params.p, "iota": params.iota,
                              "m": params.m, "s_c": params.s_c},
                   "norms": table}, f, sort_keys=True, indent=2)
        f.write("\n")
    if not quiet:
        for key in sorted(table):
            print(f"{key:22s} {table[key]:.9e}")
    return 0


# ---------------------------------------------------------------------------
# dispatch

def _run_experiment(command: str, cfg: RunConfig, seed: int | None):
    name = EXPERIMENT_COMMANDS[command]
    kwargs = _runner_kwargs(command, cfg, seed)
    return RUNNERS[name](**kwargs)


def _default_seed(command: str, args_seed: int | None) -> int | None:
    if args_seed is not None:
        return args_seed
    if command in RANDOMIZED:
        return None     # must come from config or --seed
    return None


def run_all(cfg: RunConfig, out_dir: Path, seed: int | None, threads: int,
            quiet: bool) -> int:
    seed = 42 if seed is None else seed
    order = ("conservation", "channel", "huygens", "exterior-decay",
             "smalldata", "stationary", "blowup-ode")
    reports: dict[str, ExperimentReport] = {}

    def run_one(command: str):
        return command, _run_experiment(command, cfg, seed)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
            for command, report in ex.map(run_one, order):
                reports[command] = report
    else:
        for command in order:
            reports[command] = run_one(command)[1]

    all_pass = True
    summary = {}
    for command in order:
        report = reports[command]
        sub = out_dir / report.experiment
        passed = write_report(report, sub)
        summary[report.experiment] = passed
        all_pass = all_pass and passed
        if not quiet:
            print(f"{report.experiment:16s} {'PASS' if passed else 'FAIL'}")
    with open(out_dir / "summary.json", "w", encoding="utf-8",
              newline="\n") as f:
        json.dump({"schema_version": SCHEMA_VERSION, "seed": seed,
                   "pass": all_pass, "experiments": summary},
                  f, sort_keys=True, indent=2)
        f.write("\n")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rwl",
        description="Radial supercritical wave laboratory")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, default=None,
                        help="restricted TOML-like config document")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--quiet", action="store_true")
    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.config is not None:
            if not args.config.exists():
                raise ConfigError(f"config file not found: {args.config}")
            cfg = RunConfig.from_text(args.config.read_text(encoding="utf-8"))
        else:
            cfg = RunConfig()
        command = args.command
        if cfg.command is not None and command != cfg.command:
            # CLI subcommand wins; keep the config's blocks
            pass
        out_dir = args.out or Path(cfg.output.get("dir", "out"))
        threads = args.threads or int(os.environ.get("RWL_THREADS", "1"))
        seed = _seed_for(cfg, args)

        if command == "all":
            return run_all(cfg, out_dir, seed, threads, args.quiet)
        if command == "simulate":
            return cmd_simulate(cfg, out_dir, seed, args.quiet)
        if command == "linear":
            return cmd_linear(cfg, out_dir, seed, args.quiet)
        if command == "norms":
            return cmd_norms(cfg, out_dir, seed, args.quiet)
        report = _run_experiment(command, cfg, seed)
        passed = write_report(report, out_dir / report.experiment)
        if not args.quiet:
            print(f"{report.experiment}: {'PASS' if passed else 'FAIL'}")
        return 0 if passed else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_FAILURES as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except RwlError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
