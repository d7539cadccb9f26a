"""Command-line entry point: ``ecoplan {states,estimate,solve,game,synth}``.

Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import game as gm
from .config import RunConfig, bundled_path, load_config, parse_config
from .errors import ConfigError, EcoplanError
from .io import (fmt_prob, fmt_value, read_model, read_observations, write_csv, write_histogram,
                 write_model, write_observations)
from .markov import count_transitions, estimate, synthesize_log
from .report import format_amount, render_report
from .sdp import simulate_forward, solve_backward
from .state_space import ProblemDims, appendix_cross_map, enumerate_states

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--params", type=Path, default=default, help="params.json document")
    p.add_argument("--out", type=Path, default=argparse.SUPPRESS if suppress else Path("."),
                   help="output directory (default: current directory)")
    p.add_argument("--seed", type=int, default=default, help="random seed (overrides params)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecoplan", description=__doc__.splitlines()[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common(True)]

    p = sub.add_parser("states", parents=common, help="list the feasible assignment states")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)

    p = sub.add_parser("estimate", parents=common, help="estimate stage transition matrices")
    p.add_argument("--obs", type=Path, required=True, help="observations.csv")
    p.add_argument("--alpha", type=float, help="additive smoothing strength (default 1)")
    p.add_argument("--stationary", action="store_true", help="pool counts over all stages")
    p.add_argument("--hist-k", type=int, action="append", default=[], help="emit hist_k<K>.csv")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)

    p = sub.add_parser("solve", parents=common, help="backward induction and annual report")
    p.add_argument("--model", type=Path, required=True, help="transition_model.csv")
    p.add_argument("--obs", type=Path, help="observations.csv for the empirical initial distribution")

    p = sub.add_parser("game", parents=common, help="replicator equilibria, basins and separatrix")
    p.add_argument("--u", type=float)
    p.add_argument("--v", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--step", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--q0", type=float)

    p = sub.add_parser("synth", parents=common, help="sample a synthetic observation log")
    p.add_argument("--trajectories", type=int)
    p.add_argument("--truth", type=Path, help="transition_model.csv (default: bundled Yulin chain)")
    return parser


def _config(args) -> RunConfig:
    if args.params is not None:
        cfg = load_config(args.params)
    else:
        cfg = parse_config({})
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _dims(cfg: RunConfig, args) -> ProblemDims:
    m = args.m if getattr(args, "m", None) is not None else cfg.dims.m
    n = args.n if getattr(args, "n", None) is not None else cfg.dims.n
    N = args.N if getattr(args, "N", None) is not None else cfg.dims.N
    return ProblemDims(m, n, N)


def cmd_states(args) -> None:
    cfg = _config(args)
    space = enumerate_states(_dims(cfg, args))
    cross = {}
    if (space.dims.m, space.dims.n) == (2, 3):
        cross = {canon: app for app, canon in appendix_cross_map(space).items()}
    rows = [(s.index, s.code, s.render(), cross.get(s.index, "")) for s in space]
    header = ("index", "code", "bits", "appendix_index")
    if args.out is not None:
        write_csv(args.out / "states.csv", header, rows)
    print(",".join(header))
    for r in rows:
        print(",".join(str(x) for x in r))


def cmd_estimate(args) -> None:
    cfg = _config(args)
    obs = read_observations(args.obs)
    dims = _dims(cfg, args)
    if args.N is None and args.params is None:
        dims = ProblemDims(dims.m, dims.n, max((r.k for r in obs.records), default=2))
    space = enumerate_states(dims)
    alpha = cfg.alpha if args.alpha is None else args.alpha
    stationary = cfg.stationary or args.stationary
    model = estimate(count_transitions(obs, space, dims.N), alpha, space.l, stationary)
    model.validate()
    write_model(args.out / "transition_model.csv", model)
    for k in args.hist_k:
        write_histogram(args.out / f"hist_k{k}.csv", model, k)
    print(f"estimated {model.matrices.shape[0]} stage matrices over {space.l} states (alpha={alpha:g})")


def _initial(cfg: RunConfig, args, l: int) -> np.ndarray:
    if cfg.initial is not None:
        if cfg.initial.shape != (l,):
            raise ConfigError(f"params: 'dp.initial' must have length {l}")
        return cfg.initial
    if args.obs is not None:
        freq = read_observations(args.obs).initial_frequencies(l)
        if freq is not None:
            return freq
    return np.full(l, 1.0 / l)


def cmd_solve(args) -> None:
    if args.params is None:
        raise ConfigError("solve needs --params with an 'economics' section")
    cfg = _config(args)
    if cfg.economics is None:
        raise ConfigError("params: 'economics' section is required for solve")
    space = enumerate_states(cfg.dims)
    model = read_model(args.model)
    if model.l != space.l:
        raise ConfigError(f"params: 'dims' give {space.l} states but the model has {model.l}")
    if model.horizon != cfg.dims.N:
        raise ConfigError(f"params: 'dims.N' is {cfg.dims.N} but the model covers {model.horizon} stages")
    if cfg.terminal is not None and cfg.terminal.shape != (space.l,):
        raise ConfigError(f"params: 'dp.terminal' must have length {space.l}")
    sol = solve_backward(space, model, cfg.economics, cfg.terminal)
    m, n = cfg.dims.m, cfg.dims.n
    rep = simulate_forward(sol, model, _initial(cfg, args, space.l), m, n)
    doc = render_report(rep, cfg.resources, cfg.users)

    N = cfg.dims.N
    write_csv(args.out / "values.csv", ("k", "state_index", "J"),
              ((k, x, fmt_value(sol.values[k - 1, x - 1])) for k in range(1, N + 1) for x in range(1, space.l + 1)))
    write_csv(args.out / "policy.csv", ("k", "state_index", "resource", "user", "u"),
              ((k, x, i + 1, j + 1, format_amount(sol.policy[k, x].amounts[i, j]))
               for k in range(1, N) for x in range(1, space.l + 1) for i in range(m) for j in range(n)))
    write_csv(args.out / "report.csv", ("resource", "user", "amount", "ratio"), doc.rows)
    write_csv(args.out / "monthly.csv", ("k", "user", "amount"), doc.monthly_rows)
    sys.stdout.write(doc.text)


def cmd_game(args) -> None:
    cfg = _config(args)
    s = cfg.game
    u = s.u if args.u is None else args.u
    v = s.v if args.v is None else args.v
    grid = s.grid if args.grid is None else args.grid
    h = s.step if args.step is None else args.step
    T = s.horizon if args.horizon is None else args.horizon
    start = (s.start[0] if args.p0 is None else args.p0, s.start[1] if args.q0 is None else args.q0)
    g = gm.GameParams(u, v)

    eq = gm.equilibria(g)
    write_csv(args.out / "equilibria.csv", ("p", "q", "det", "trace", "label"),
              ((fmt_value(e.point.p), fmt_value(e.point.q), fmt_value(e.det), fmt_value(e.trace), e.label)
               for e in eq))
    basin = gm.basin_grid(g, grid, h=h, T=T)
    write_csv(args.out / "basin.csv", ("p", "q", "label"),
              ((fmt_value(p), fmt_value(q), lab) for p, q, lab in basin.cells()))
    sep = gm.separatrix_polyline(g)
    write_csv(args.out / "separatrix.csv", ("name", "p", "q"),
              ((name, fmt_value(p), fmt_value(q)) for name, (p, q) in zip(("Q2", "Q5", "Q3"), sep.vertices)))
    traj = gm.integrate(start, g, h=h, T=T)
    every = max(1, s.record_every)
    idx = list(range(0, len(traj.t), every))
    if idx[-1] != len(traj.t) - 1:
        idx.append(len(traj.t) - 1)
    write_csv(args.out / "trajectory.csv", ("t", "p", "q"),
              ((fmt_value(traj.t[i]), fmt_prob(traj.p[i]), fmt_prob(traj.q[i])) for i in idx))
    for e in eq:
        print(f"{e.name} ({e.point.p:.6g}, {e.point.q:.6g}) det={e.det:.6g} trace={e.trace:.6g} {e.label}")
    print(f"Q4 fraction on {grid}x{grid} grid: {basin.q4_fraction:.4f}; "
          f"trajectory from {start} -> {traj.label}")


def cmd_synth(args) -> None:
    cfg = _config(args)
    truth_path = args.truth or bundled_path("yulin", "truth_model.csv")
    truth = read_model(truth_path)
    count = cfg.trajectories if args.trajectories is None else args.trajectories
    if count < 1:
        raise ConfigError("trajectory count must be at least 1")
    obs = synthesize_log(truth.l, truth, count, cfg.seed)
    write_observations(args.out / "observations.csv", obs)
    print(f"wrote {len(obs)} records ({count} trajectories x {truth.horizon} stages, seed {cfg.seed})")


COMMANDS = {"states": cmd_states, "estimate": cmd_estimate, "solve": cmd_solve,
            "game": cmd_game, "synth": cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except EcoplanError as exc:
        print(f"ecoplan: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"ecoplan: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
