"""Command-line surface.

Subcommands evaluate memberships, verify coverage, emit expected-length and
lower-bound curves, solve knapsack instances, replay recipe files and run a
quick self-test battery.  All tabular output is CSV (17 significant digits,
dot decimal separator) or JSON, to stdout or to ``--output``; a relative
``--output`` is resolved against ``$FUZZYCI_OUTPUT_DIR`` when that is set.

Exit codes: 0 success, 2 usage/parameter errors, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import binomial, normal, poisson
from .core import construct_psi_star
from .knapsack import KnapsackInstance, solve_01_dp, solve_fractional, to_measure_problem
from .length import QuadratureSpec, el_curve, lower_bound_curve
from .specfun import ConvergenceError

USAGE_ERROR = 2
NUMERICAL_ERROR = 3

OUTPUT_DIR_ENV = "FUZZYCI_OUTPUT_DIR"


@dataclass(frozen=True)
class RunConfig:
    """Validated per-family parameters for one command invocation."""

    family: str
    method: str
    gamma: float
    n: int | None = None
    o: float | None = None
    sigma: float | None = None
    a: float | None = None
    b: float | None = None
    tau_max: float | None = None
    rel_tol: float = 1e-9


class UsageError(ValueError):
    """Invalid flag combination or out-of-domain parameter."""


_METHODS = {
    "binomial": ("proposed", "agresti_coull"),
    "poisson": ("proposed", "score"),
    "normal": ("proposed", "standard", "truncated_standard"),
}


def _build_config(args, need_o=True) -> RunConfig:
    family = args.family
    method = args.method
    if method not in _METHODS[family]:
        raise UsageError(
            f"method {method!r} is not available for family {family!r}; "
            f"choose from {_METHODS[family]}"
        )
    if not 0.0 < args.gamma < 1.0:
        raise UsageError(f"--gamma must lie in (0, 1), got {args.gamma}")
    cfg = RunConfig(
        family=family,
        method=method,
        gamma=args.gamma,
        n=getattr(args, "n", None),
        o=getattr(args, "o", None),
        sigma=getattr(args, "sigma", None),
        a=getattr(args, "a", None),
        b=getattr(args, "b", None),
        tau_max=getattr(args, "tau_max", None),
        rel_tol=getattr(args, "rel_tol", 1e-9),
    )
    if family == "binomial":
        if cfg.n is None:
            raise UsageError("binomial family requires --n")
        if cfg.n < 1:
            raise UsageError(f"--n must be a positive integer, got {cfg.n}")
        if need_o:
            if cfg.o is None:
                raise UsageError("the proposed binomial method requires --o")
            if not 0.0 < cfg.o < 1.0:
                raise UsageError(f"--o must lie in (0, 1), got {cfg.o}")
    elif family == "poisson":
        if need_o:
            if cfg.o is None:
                raise UsageError("the proposed poisson method requires --o")
            if not cfg.o > 0.0:
                raise UsageError(f"--o must be positive, got {cfg.o}")
    else:
        if cfg.sigma is None or not cfg.sigma > 0.0:
            raise UsageError("normal family requires --sigma > 0")
        if (cfg.a is None) != (cfg.b is None):
            raise UsageError("provide both --a and --b, or neither")
        if cfg.a is not None and not cfg.a < cfg.b:
            raise UsageError(f"bounds must satisfy a < b, got [{cfg.a}, {cfg.b}]")
        if method == "truncated_standard" and cfg.a is None:
            raise UsageError("truncated_standard requires --a and --b")
        if need_o:
            if cfg.o is None:
                raise UsageError("the proposed normal method requires --o")
            if cfg.a is not None and not cfg.a <= cfg.o <= cfg.b:
                raise UsageError(f"--o must lie inside [{cfg.a}, {cfg.b}]")
    return cfg


def parse_grid(spec: str) -> list[float]:
    """Inclusive grid 'start:stop:count'; count 0 gives an empty grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like start:stop:count, got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"malformed grid {spec!r}: {exc}") from None
    if count < 0:
        raise UsageError(f"grid count must be nonnegative, got {count}")
    if count == 0:
        return []
    if count == 1:
        return [start]
    return [float(v) for v in np.linspace(start, stop, count)]


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit(columns, rows, args, comments=()):
    """Write rows as CSV or JSON to stdout or the configured output path."""
    if args.format == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_format_value(v) for v in row) for row in rows)
        lines.extend(f"# {c}" for c in comments)
        text = "\n".join(lines) + "\n"
    else:
        payload = {"columns": list(columns), "rows": [list(r) for r in rows]}
        if comments:
            payload["notes"] = list(comments)
        text = json.dumps(payload, indent=2) + "\n"
    if args.output is None:
        sys.stdout.write(text)
        return
    path = args.output
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir and not os.path.isabs(path):
        path = os.path.join(out_dir, path)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _binomial_family(cfg: RunConfig) -> binomial.BinomialFamily:
    return binomial.BinomialFamily(cfg.n, cfg.o, cfg.gamma)


def _poisson_family(cfg: RunConfig) -> poisson.PoissonFamily:
    return poisson.PoissonFamily(cfg.o, cfg.gamma)


def _normal_family(cfg: RunConfig) -> normal.NormalFamily:
    bounds = (cfg.a, cfg.b) if cfg.a is not None else None
    o = cfg.o
    if o is None:
        # Commands that never evaluate at o (the lower bound is o-free).
        o = 0.5 * (cfg.a + cfg.b) if bounds else 0.0
    return normal.NormalFamily(o=o, gamma=cfg.gamma, sigma=cfg.sigma, bounds=bounds)


def cmd_membership(args) -> int:
    cfg = _build_config(args, need_o=(args.method == "proposed"))
    taus = parse_grid(args.tau_grid)
    rows = []
    if cfg.family == "binomial":
        fam = _binomial_family(cfg) if cfg.method == "proposed" else None
        for w in range(cfg.n + 1):
            for tau in taus:
                if not 0.0 < tau < 1.0:
                    raise UsageError(f"binomial tau grid must stay in (0, 1), got {tau}")
                if cfg.method == "proposed":
                    value = binomial.psi_o(w, tau, fam)
                else:
                    value = binomial.agresti_coull_membership(w, tau, cfg.n, cfg.gamma)
                rows.append((tau, w, value))
    elif cfg.family == "poisson":
        fam = _poisson_family(cfg) if cfg.method == "proposed" else None
        omega_max = args.omega_max
        if omega_max is None:
            top = max([t for t in taus] + ([cfg.o] if cfg.o else [1.0]))
            omega_max = poisson.support_bound(top, 1e-12)
        for w in range(omega_max + 1):
            for tau in taus:
                if not tau > 0.0:
                    raise UsageError(f"poisson tau grid must be positive, got {tau}")
                if cfg.method == "proposed":
                    value = poisson.psi_o(w, tau, fam)
                else:
                    value = poisson.score_membership(w, tau, cfg.gamma)
                rows.append((tau, w, value))
    else:
        if args.x_grid is None:
            raise UsageError("normal membership requires --x-grid")
        fam = _normal_family(cfg)
        for x in parse_grid(args.x_grid):
            for tau in taus:
                if cfg.method == "proposed":
                    value = normal.psi_o(x, tau, fam)
                else:
                    value = normal.psi_standard(x, tau, fam)
                rows.append((tau, x, value))
    emit(("tau", "omega", "psi"), rows, args)
    return 0


def _normal_coverage(cfg: RunConfig, tau: float) -> float:
    # Crisp normal intervals have analytic coverage; see README.
    if cfg.method == "proposed":
        return 2.0 * cfg.gamma - 1.0 if tau == cfg.o else cfg.gamma
    return cfg.gamma


def cmd_coverage(args) -> int:
    cfg = _build_config(args, need_o=(args.method == "proposed"))
    taus = parse_grid(args.tau_grid)
    rows = []
    for tau in taus:
        if cfg.family == "binomial":
            if not 0.0 < tau < 1.0:
                raise UsageError(f"binomial tau grid must stay in (0, 1), got {tau}")
            if cfg.method == "proposed":
                value = binomial.coverage(tau, _binomial_family(cfg))
            else:
                value = binomial.agresti_coull_coverage(tau, cfg.n, cfg.gamma)
        elif cfg.family == "poisson":
            if not tau > 0.0:
                raise UsageError(f"poisson tau grid must be positive, got {tau}")
            if cfg.method == "proposed":
                value = poisson.coverage(tau, _poisson_family(cfg))
            else:
                value = poisson.score_coverage(tau, cfg.gamma)
        else:
            value = _normal_coverage(cfg, tau)
        rows.append((tau, value))
    emit(("tau", "coverage"), rows, args)
    return 0


def _discrete_curve(cfg: RunConfig, thetas, need_model=True):
    model = None
    if cfg.family == "binomial":
        quad = QuadratureSpec(0.0, 1.0, rel_tol=cfg.rel_tol)
        make_ref = lambda th: binomial.model(
            binomial.BinomialFamily(cfg.n, th, cfg.gamma)
        )
        if need_model:
            if cfg.method == "proposed":
                model = binomial.model(_binomial_family(cfg))
            else:
                model = binomial.agresti_coull_model(cfg.n, cfg.gamma)
        for theta in thetas:
            if not 0.0 < theta < 1.0:
                raise UsageError(f"binomial theta grid must stay in (0, 1), got {theta}")
    else:
        top = cfg.tau_max
        if top is None:
            anchor = max([t for t in thetas] + ([cfg.o] if cfg.o else []))
            top = poisson.default_tau_max(anchor)
        quad = QuadratureSpec(1e-9, top, rel_tol=cfg.rel_tol)
        make_ref = lambda th: poisson.model(poisson.PoissonFamily(th, cfg.gamma))
        if need_model:
            if cfg.method == "proposed":
                model = poisson.model(_poisson_family(cfg))
            else:
                model = poisson.score_model(cfg.gamma)
        for theta in thetas:
            if not theta > 0.0:
                raise UsageError(f"poisson theta grid must be positive, got {theta}")
    return model, make_ref, quad


def cmd_el_curve(args) -> int:
    cfg = _build_config(args, need_o=(args.method == "proposed"))
    thetas = parse_grid(args.theta_grid)
    if cfg.family == "normal":
        if cfg.a is None:
            raise UsageError("normal el-curve requires --a and --b")
        if cfg.method == "standard":
            raise UsageError(
                "normal el-curve supports methods 'proposed' and 'truncated_standard'"
            )
        fam = _normal_family(cfg)
        rows = []
        for theta in thetas:
            if cfg.method == "proposed":
                el = normal.el_psi_o_closed(theta, fam)
            else:
                el = normal.el_psi_nl_closed(theta, fam)
            rows.append((theta, el, normal.el_lower_bound(theta, fam)))
        emit(("theta", "el", "lower_bound"), rows, args)
        return 0
    model, make_ref, quad = _discrete_curve(cfg, thetas)
    curve = el_curve(model, make_ref, thetas, quad)
    rows = list(zip(curve.theta_grid, curve.el, curve.lower_bound))
    emit(("theta", "el", "lower_bound"), rows, args)
    return 0


def cmd_lower_bound(args) -> int:
    cfg = _build_config(args, need_o=False)
    thetas = parse_grid(args.theta_grid)
    if cfg.family == "normal":
        if cfg.a is None:
            raise UsageError("normal lower-bound requires --a and --b")
        fam = _normal_family(cfg)
        rows = [(theta, normal.el_lower_bound(theta, fam)) for theta in thetas]
        emit(("theta", "lower_bound"), rows, args)
        return 0
    _, make_ref, quad = _discrete_curve(cfg, thetas, need_model=False)
    curve = lower_bound_curve(make_ref, thetas, quad)
    rows = list(zip(curve.theta_grid, curve.lower_bound))
    emit(("theta", "lower_bound"), rows, args)
    return 0


def _read_knapsack_rows(source: str):
    if source == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(source, encoding="utf-8") as handle:
                lines = handle.read().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {source!r}: {exc}") from None
    weights, values = [], []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#") or text.lower().startswith("weight"):
            continue
        parts = text.split(",")
        if len(parts) != 2:
            raise UsageError(f"line {lineno}: expected 'weight,value', got {line!r}")
        try:
            weights.append(float(parts[0]))
            values.append(float(parts[1]))
        except ValueError:
            raise UsageError(f"line {lineno}: malformed numbers in {line!r}") from None
    if not weights:
        raise UsageError("no knapsack items found in input")
    return weights, values


def cmd_knapsack(args) -> int:
    weights, values = _read_knapsack_rows(args.input)
    try:
        instance = KnapsackInstance(tuple(weights), tuple(values), args.capacity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.mode == "dp":
        try:
            subset, value = solve_01_dp(instance)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        chosen = set(subset)
        rows = [
            (i, w, v, 1.0 if i in chosen else 0.0, "A" if i in chosen else "B")
            for i, (w, v) in enumerate(zip(weights, values))
        ]
        total_w = math.fsum(weights[i] for i in subset)
        emit(
            ("item", "weight", "value", "x", "partition"),
            rows,
            args,
            comments=(f"total_weight,{total_w:.17g}", f"total_value,{value:.17g}"),
        )
        return 0
    solution = solve_fractional(instance)
    if args.mode == "fractional":
        rows = [
            (i, w, v, x, label)
            for i, (w, v, x, label) in enumerate(
                zip(weights, values, solution.x, solution.partition)
            )
        ]
        emit(
            ("item", "weight", "value", "x", "partition"),
            rows,
            args,
            comments=(
                f"total_weight,{solution.total_weight:.17g}",
                f"total_value,{solution.total_value:.17g}",
            ),
        )
        return 0
    # roundtrip: solve through the measure problem and compare.
    try:
        mu, nu, gamma = to_measure_problem(instance)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    membership = construct_psi_star(mu, nu, gamma)
    gap = max(
        abs(x - (1.0 - p)) for x, p in zip(solution.x, membership.psi)
    )
    rows = [
        (i, w, v, mu.mass[i], nu.mass[i], membership.psi[i], x, label)
        for i, (w, v, x, label) in enumerate(
            zip(weights, values, solution.x, solution.partition)
        )
    ]
    emit(
        ("item", "weight", "value", "mu", "nu", "psi", "x", "partition"),
        rows,
        args,
        comments=(
            f"gamma,{gamma:.17g}",
            f"total_weight,{solution.total_weight:.17g}",
            f"total_value,{solution.total_value:.17g}",
            f"max_roundtrip_gap,{gap:.17g}",
        ),
    )
    return 0


def cmd_recipe(args) -> int:
    """Replay a recipe file: one command, or a list of runs per figure."""
    try:
        with open(args.file, encoding="utf-8") as handle:
            recipe = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read recipe {args.file!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"recipe {args.file!r} is not valid JSON: {exc}") from None
    runs = recipe.get("runs")
    if runs is None:
        runs = [recipe]
    status = 0
    for run in runs:
        argv = [run["command"]] + list(run.get("args", []))
        if run.get("output"):
            argv += ["--output", run["output"]]
        elif args.output is not None:
            argv += ["--output", args.output]
        if args.format is not None:
            argv += ["--format", args.format]
        status = max(status, main(argv))
    return status


def _selftest_checks():
    from .specfun import binom_pmf, reg_inc_beta

    yield "beta identity", lambda: abs(reg_inc_beta(0.6, 2, 1) - 0.36) < 1e-12
    fam = binomial.BinomialFamily(10, 0.5, 0.95)
    yield "binomial coverage", lambda: abs(binomial.coverage(0.3, fam) - 0.95) < 1e-8
    pfam = poisson.PoissonFamily(8.0, 0.95)
    yield "poisson coverage", lambda: abs(poisson.coverage(3.0, pfam) - 0.95) < 1e-8

    def _constructor_match():
        ids = tuple(range(11))
        from .core import DiscreteMeasure

        mu = DiscreteMeasure(ids, tuple(binom_pmf(w, 10, 0.3) for w in ids))
        nu = DiscreteMeasure(ids, tuple(binom_pmf(w, 10, 0.5) for w in ids))
        res = construct_psi_star(mu, nu, 0.95)
        return all(
            abs(binomial.psi_o(w, 0.3, fam) - res.psi[w]) < 1e-9 for w in ids
        )

    yield "constructor equivalence", _constructor_match

    def _knapsack_roundtrip():
        inst = KnapsackInstance((1.0, 1.0), (1.0, 2.0), 1.0)
        mu, nu, gamma = to_measure_problem(inst)
        res = construct_psi_star(mu, nu, gamma)
        x = solve_fractional(inst).x
        return all(abs(xi - (1 - p)) < 1e-10 for xi, p in zip(x, res.psi))

    yield "knapsack roundtrip", _knapsack_roundtrip

    def _normal_tangency():
        nfam = normal.NormalFamily(o=0.5, gamma=0.95, sigma=1 / 3, bounds=(0.0, 1.0))
        return abs(
            normal.el_psi_o_closed(0.5, nfam) - normal.el_lower_bound(0.5, nfam)
        ) < 1e-9

    yield "normal tangency", _normal_tangency


def cmd_selftest(args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        ok = bool(check())
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1
    return 0 if failures == 0 else 1


def _add_family_options(parser, include_method=True):
    parser.add_argument(
        "--family", required=True, choices=("binomial", "poisson", "normal")
    )
    if include_method:
        parser.add_argument(
            "--method",
            default="proposed",
            choices=(
                "proposed",
                "agresti_coull",
                "score",
                "standard",
                "truncated_standard",
            ),
        )
    parser.add_argument("--gamma", type=float, required=True)
    parser.add_argument("--n", type=int, help="binomial trial count")
    parser.add_argument("--o", type=float, help="reference point")
    parser.add_argument("--sigma", type=float, help="normal standard error")
    parser.add_argument("--a", type=float, help="lower parameter bound (normal)")
    parser.add_argument("--b", type=float, help="upper parameter bound (normal)")


def _add_output_options(parser):
    parser.add_argument("--format", default="csv", choices=("csv", "json"))
    parser.add_argument(
        "--output",
        help=f"output path; relative paths resolve against ${OUTPUT_DIR_ENV}",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzyci",
        description="Fuzzy confidence intervals, expected lengths and knapsack duals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("membership", help="evaluate a membership on a grid")
    _add_family_options(p)
    p.add_argument("--tau-grid", required=True, help="start:stop:count (inclusive)")
    p.add_argument("--x-grid", help="sample-mean grid for the normal family")
    p.add_argument("--omega-max", type=int, help="largest count (poisson)")
    _add_output_options(p)
    p.set_defaults(handler=cmd_membership)

    p = sub.add_parser("coverage", help="coverage probability over a tau grid")
    _add_family_options(p)
    p.add_argument("--tau-grid", required=True)
    _add_output_options(p)
    p.set_defaults(handler=cmd_coverage)

    p = sub.add_parser("el-curve", help="expected length next to the lower bound")
    _add_family_options(p)
    p.add_argument("--theta-grid", required=True)
    p.add_argument("--tau-max", type=float, help="poisson integration cutoff")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    _add_output_options(p)
    p.set_defaults(handler=cmd_el_curve)

    p = sub.add_parser("lower-bound", help="lower-bound envelope curve")
    _add_family_options(p, include_method=False)
    p.set_defaults(method="proposed")
    p.add_argument("--theta-grid", required=True)
    p.add_argument("--tau-max", type=float)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    _add_output_options(p)
    p.set_defaults(handler=cmd_lower_bound)

    p = sub.add_parser("knapsack", help="solve a knapsack instance from CSV rows")
    p.add_argument("input", help="CSV file of 'weight,value' rows, or - for stdin")
    p.add_argument("--capacity", type=float, required=True)
    p.add_argument(
        "--mode", default="fractional", choices=("fractional", "dp", "roundtrip")
    )
    _add_output_options(p)
    p.set_defaults(handler=cmd_knapsack)

    p = sub.add_parser("recipe", help="run a JSON recipe file")
    p.add_argument("file")
    _add_output_options(p)
    p.set_defaults(format=None, output=None)
    p.set_defaults(handler=cmd_recipe)

    p = sub.add_parser("selftest", help="quick install check")
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except ValueError as exc:
        # UsageError plus any domain error raised by the library layer.
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
