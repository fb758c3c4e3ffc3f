"""Command-line driver: ``tchernoff {verify,experiment,bound,graph,moment}``.

Exit codes: 0 success, 1 assertion failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import chernoff as ch
from . import expander as ex
from .errors import TChernoffError
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env_seed() -> int | None:
    raw = os.environ.get("TCHERNOFF_SEED")
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"TCHERNOFF_SEED must be an integer, got {raw!r}") from exc


def _resolve_seed(flag: int | None, configured: int | None = None, default: int = 0) -> int:
    for value in (flag, configured, _env_seed()):
        if value is not None:
            return int(value)
    return default


# -- experiment config -----------------------------------------------------------

@dataclass
class ExperimentConfig:
    graph: str = "complete:5"
    m: int = 2
    p: int = 2
    r: float = 1.0
    centered: bool = False
    positive: bool = True
    coeffs: tuple = (0.0, 1.0)
    s: float = 1.0
    kappa: int = 4
    k: int = 1
    C: float | None = None
    sigma: float = 1.0
    fit_window: float = ch.DEFAULT_FIT_WINDOW
    thetas: tuple | None = None
    theta_points: int = 10
    trials: int = 10_000
    seed: int | None = None
    assignment_seed: int = 0
    csv: str | None = None
    json: str | None = None

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    def validate(self) -> None:
        def need(cond, name, msg):
            if not cond:
                raise UsageError(f"invalid config field {name!r}: {msg}")

        for name in ("m", "p", "kappa", "k", "trials", "theta_points", "assignment_seed"):
            need(isinstance(getattr(self, name), int) and not isinstance(getattr(self, name), bool),
                 name, "must be an integer")
        for name in ("r", "s", "sigma", "fit_window"):
            need(isinstance(getattr(self, name), (int, float)), name, "must be a number")
        for name in ("centered", "positive"):
            need(isinstance(getattr(self, name), bool), name, "must be true or false")
        need(self.m >= 1 and self.p >= 1, "m" if self.m < 1 else "p", "must be >= 1")
        need(self.r > 0, "r", "must be positive")
        need(self.kappa >= 1, "kappa", "must be >= 1")
        need(1 <= self.k <= self.m * self.p, "k", f"must lie in 1..{self.m * self.p}")
        need(self.trials >= 1, "trials", "must be >= 1")
        need(self.sigma > 0, "sigma", "must be positive")
        need(self.C is None or (isinstance(self.C, (int, float)) and self.C > 0), "C", "must be positive")
        need(self.s >= 1, "s", "must be >= 1")
        need(isinstance(self.coeffs, (list, tuple)) and len(self.coeffs) > 0
             and all(isinstance(a, (int, float)) and a >= 0 for a in self.coeffs), "coeffs",
             "must be a nonempty list of nonnegative numbers")
        need(not (self.centered and self.positive), "centered", "cannot combine with positive")
        if self.thetas is not None:
            th = list(self.thetas)
            need(len(th) > 0 and all(isinstance(x, (int, float)) for x in th), "thetas", "must be a nonempty list")
            need(all(a < b for a, b in zip(th, th[1:])), "thetas", "must be strictly ascending")
        need(self.theta_points >= 1, "theta_points", "must be >= 1")

    def resolved_thetas(self) -> tuple:
        if self.thetas is not None:
            return tuple(float(x) for x in self.thetas)
        params = ch.BoundParams(kappa=self.kappa, k=self.k, coeffs=tuple(self.coeffs), s=self.s)
        top = ch.statistic_upper_bound(params, self.r)
        return tuple(float(x) for x in np.linspace(0.0, top, self.theta_points))


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise UsageError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
    unknown = set(data) - ExperimentConfig.field_names()
    if unknown:
        raise UsageError(f"unknown config field {sorted(unknown)[0]!r}")
    merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    cfg = ExperimentConfig(**merged)
    cfg.validate()
    return cfg


def run_experiment(cfg: ExperimentConfig, seed: int, threads: int | None) -> ch.TailReport:
    try:
        graph = ex.parse_graph_spec(cfg.graph)
    except (TChernoffError, ValueError, OSError) as exc:
        raise UsageError(f"invalid config field 'graph': {exc}") from exc
    asg = ch.random_assignment(graph, cfg.m, cfg.p, cfg.r, centered=cfg.centered,
                               seed=cfg.assignment_seed, positive=cfg.positive)
    c_value = cfg.C if cfg.C is not None else ch.gaussian_domination_fit(cfg.sigma, cfg.fit_window)[0]
    params = ch.BoundParams(kappa=cfg.kappa, k=cfg.k, coeffs=tuple(cfg.coeffs), s=cfg.s, C=c_value,
                            sigma=cfg.sigma, lam_bar=graph.lambda_bar, thetas=cfg.resolved_thetas())
    report = ch.empirical_tail(asg, graph, params, cfg.trials, seed, threads)
    report.summary.update({"graph": cfg.graph, "C": c_value, "sigma": cfg.sigma, "seed": seed})
    return report


# -- formatting ----------------------------------------------------------------------

def format_bound_table(points, corollaries=None) -> str:
    head = "theta,bound,t_star"
    if corollaries is not None:
        head += ",corollary_printed,corollary_derived"
    lines = [head]
    for i, pt in enumerate(points):
        vals = [pt.theta, pt.bound, pt.t_star]
        if corollaries is not None:
            vals += [corollaries[i].value_printed, corollaries[i].value_derived]
        lines.append(",".join(f"{v:.8e}" for v in vals))
    return "\n".join(lines) + "\n"


def _summary_line(report: ch.TailReport) -> str:
    s = report.summary
    return (f"summary: assumption1_violation_rate={s['assumption1_violation_rate']:.6g} "
            f"assumption2_violation_rate={s['assumption2_violation_rate']:.6g} "
            f"vacuous_rows={s['vacuous_rows']} bound_violations={s['bound_violations']}")


# -- commands --------------------------------------------------------------------------

def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = run_suites(names, _resolve_seed(args.seed))
    passed = all(all(r.values()) for r in results.values())
    print(json.dumps({"passed": passed, "suites": results}, indent=2, sort_keys=True))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_experiment(args) -> int:
    overrides = {
        "graph": args.graph, "trials": args.trials, "kappa": args.kappa, "k": args.k,
        "csv": args.csv, "json": args.json,
    }
    if args.thetas is not None:
        overrides["thetas"] = tuple(args.thetas)
    cfg = load_config(args.config, overrides)
    seed = _resolve_seed(args.seed, cfg.seed)
    report = run_experiment(cfg, seed, args.threads)
    csv_text = report.to_csv()
    if cfg.csv:
        Path(cfg.csv).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if cfg.json:
        Path(cfg.json).write_text(report.to_json() + "\n")
    print(_summary_line(report), file=sys.stderr if not cfg.csv else sys.stdout)
    return EXIT_FAIL if report.summary["bound_violations"] else EXIT_OK


def cmd_bound(args) -> int:
    lam_bar = args.lam_bar
    if args.graph is not None:
        lam_bar = ex.parse_graph_spec(args.graph).lambda_bar
    if not 1 <= args.k <= args.m * args.p:
        raise UsageError(f"--k must lie in 1..{args.m * args.p}")
    params = ch.BoundParams(kappa=args.kappa, k=args.k, coeffs=tuple(args.coeffs), s=args.s, C=args.C,
                            sigma=args.sigma, lam_bar=lam_bar, thetas=tuple(args.theta))
    points = ch.main_bound(params, args.m, args.p, args.r)
    cors = [ch.corollary_bound(th, params, args.m, args.p, args.r) for th in params.thetas] if args.corollary else None
    sys.stdout.write(format_bound_table(points, cors))
    return EXIT_OK


def cmd_graph(args) -> int:
    g = ex.parse_graph_spec(args.graph)
    text = ex.to_edge_list(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# lambda={g.lam:.12g}", file=sys.stderr)
    return EXIT_OK


def cmd_moment(args) -> int:
    g = ex.parse_graph_spec(args.graph)
    asg = ch.random_assignment(g, args.m, args.p, args.r, centered=args.centered, seed=_resolve_seed(args.seed))
    op = ch.MomentOperator(g, asg, args.t, args.a, args.b)
    exact = ch.moment_exact(op, args.kappa)
    transfer = ch.moment_transfer(op, args.kappa)
    bound = ch.lemma43_bound(args.t, args.a, args.b, args.r, g.lam, args.kappa, args.m, args.p)
    valid = ch.lemma43_validity(args.t, args.a, args.b, args.r, g.lam)
    rel = abs(transfer - exact) / max(abs(exact), 1e-300)
    ok = bool(rel <= 1e-8 and (not valid or exact <= bound))
    out = {"moment_exact": exact, "moment_transfer": transfer, "relative_difference": rel,
           "lemma43_bound": bound if math.isfinite(bound) else "inf", "lemma43_valid": bool(valid), "passed": ok}
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (fallback: TCHERNOFF_SEED)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")

    parser = argparse.ArgumentParser(prog="tchernoff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("suite", choices=(*SUITES, "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="Monte Carlo tail vs bounds")
    p.add_argument("config", nargs="?", default=None, help="JSON config file")
    p.add_argument("--graph")
    p.add_argument("--trials", type=int)
    p.add_argument("--kappa", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--thetas", type=float, nargs="+")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bound", parents=[common], help="evaluate the tail bound")
    p.add_argument("--theta", type=float, nargs="+", required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--coeffs", type=float, nargs="+", default=[0.0, 1.0])
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--lam-bar", type=float, default=0.0)
    p.add_argument("--graph", help="take lambda_bar from this graph")
    p.add_argument("--corollary", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("graph", parents=[common], help="graph utilities")
    gsub = p.add_subparsers(dest="graph_command", required=True)
    gen = gsub.add_parser("gen", parents=[common], help="write an edge list")
    gen.add_argument("--graph", required=True)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_graph)

    p = sub.add_parser("moment", parents=[common], help="moment oracle vs transfer vs bound")
    p.add_argument("--graph", default="complete:3")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--kappa", type=int, default=3)
    p.add_argument("--t", type=float, default=0.1)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.5)
    p.add_argument("--centered", action="store_true")
    p.set_defaults(func=cmd_moment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, TChernoffError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
