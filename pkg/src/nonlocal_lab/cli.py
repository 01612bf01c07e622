"""Command line entry point: ``nonlocal-lab {pi,corr,chsh,sweep,ode}``.

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import born, chsh, gentrig, ode_check, output
from .born import Convention
from .errors import ConvergenceError, DomainError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    convention: Convention = born.DEFAULT_CONVENTION
    quad_tol: float = gentrig.QUAD_TOL
    invert_tol: float = gentrig.INVERT_TOL
    grid_n: int = 48
    multistart: int = 8
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if not (self.quad_tol > 0 and self.invert_tol > 0):
            raise UsageError("tolerances must be positive")
        if self.grid_n < 8:
            raise UsageError("grid_n must be at least 8")
        if self.multistart < 1:
            raise UsageError("multistart must be at least 1")
        if self.output_format not in ("csv", "json"):
            raise UsageError("output_format must be csv or json")

    def search(self) -> chsh.SearchConfig:
        return chsh.SearchConfig(grid_n=self.grid_n, multistart=self.multistart,
                                 quad_tol=self.quad_tol, invert_tol=self.invert_tol)


_CASTS = {"convention": Convention.parse, "quad_tol": float, "invert_tol": float,
          "grid_n": int, "multistart": int, "output_format": str,
          "output_path": str}


def _coerce(key: str, value: str):
    try:
        return _CASTS[key](value)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


def read_config_file(path: str) -> dict:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CASTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _coerce(key, value)
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    merged = {}
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            merged[f.name] = _coerce(f.name, flag) if isinstance(flag, str) else flag
    return replace(RunConfig(), **merged)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path:
        output.write_atomic(cfg.output_path, text)
    else:
        sys.stdout.write(text)


def _finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise UsageError(f"{name} must be finite")
    return value


def cmd_pi(args, cfg: RunConfig) -> int:
    params = gentrig.PQParams(args.p, args.q)
    g = gentrig.pi_pq_gamma(params)
    quad = gentrig.pi_pq_quadrature(params, cfg.quad_tol)
    result = {"p": params.p, "q": params.q, "gamma": g, "quadrature": quad,
              "difference": abs(g - quad)}
    if cfg.output_format == "json":
        _emit(cfg, output.to_json(result))
    else:
        _emit(cfg, "".join(f"{k}={output.format_float(result[k])}\n"
                           for k in ("gamma", "quadrature", "difference")))
    return EXIT_OK


CORR_HEADER = ("theta", "E", "E_taylor", "defect")


def correlation_rows(eps: float, thetas: np.ndarray, cfg: RunConfig):
    pair = born.probabilities(eps, thetas, cfg.convention, cfg.quad_tol,
                              cfg.invert_tol)
    e = pair.p_same - pair.p_diff
    taylor = born.correlation_taylor(eps, thetas, cfg.quad_tol, cfg.invert_tol)
    return [tuple(map(float, r)) for r in zip(thetas, e, taylor, pair.defect)]


def cmd_corr(args, cfg: RunConfig) -> int:
    eps = born.check_epsilon(args.eps)
    lo = _finite("theta-min", args.theta_min)
    hi = chsh.pi_eps(eps) if args.theta_max is None else _finite(
        "theta-max", args.theta_max)
    if not hi > lo:
        raise UsageError("theta-max must exceed theta-min")
    if args.points < 2:
        raise UsageError("points must be at least 2")
    thetas = np.linspace(lo, hi, args.points)
    rows = correlation_rows(eps, thetas, cfg)
    if cfg.output_format == "json":
        _emit(cfg, output.to_json([dict(zip(CORR_HEADER, r)) for r in rows]))
    else:
        _emit(cfg, output.to_csv(CORR_HEADER, rows))
    if args.svg:
        scale = 2.0 / chsh.pi_eps(eps)
        xs = [r[0] * scale for r in rows]
        svg = output.line_chart_svg(
            [(f"E, eps={eps:g}", xs, [r[1] for r in rows]),
             ("first-order form", xs, [r[2] for r in rows])],
            xlabel="2 theta / pi_{2,2+eps}", ylabel="E",
            title=f"correlation ({cfg.convention.value})")
        output.write_atomic(args.svg, svg)
    return EXIT_OK


def cmd_chsh(args, cfg: RunConfig) -> int:
    eps = born.check_epsilon(args.eps)
    res = chsh.maximize_bell(eps, cfg.convention, cfg.search())
    payload = res.to_dict()
    payload["conjecture"] = chsh.conjecture_bound(eps)
    _emit(cfg, output.to_json(payload))
    return EXIT_OK


SWEEP_HEADER = ("epsilon", "max_bell", "conjecture", "rel_dev", "converged")


def parse_eps_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad epsilon list {text!r}") from exc


def eps_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive range; values rounded to 12 decimals to avoid drift."""
    if not step > 0 or stop < start:
        raise UsageError("range needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep_rows(records) -> list[tuple]:
    return [(r.epsilon, r.max_bell, r.conjecture, r.relative_deviation,
             r.converged) for r in records]


def cmd_sweep(args, cfg: RunConfig) -> int:
    if args.eps is not None:
        grid = parse_eps_list(args.eps)
    elif args.eps_range is not None:
        grid = eps_range(*args.eps_range)
    else:
        raise UsageError("give --eps or --eps-range")
    if not grid:
        raise UsageError("empty epsilon grid")
    for e in grid:
        born.check_epsilon(e)
    records = chsh.sweep(grid, cfg.convention, cfg.search())
    rows = sweep_rows(records)
    if cfg.output_format == "json":
        _emit(cfg, output.to_json(
            {"convention": cfg.convention.value,
             "records": [dict(zip(SWEEP_HEADER, r)) for r in rows]}))
    else:
        _emit(cfg, output.to_csv(SWEEP_HEADER, rows))
    if args.svg:
        xs = [r.epsilon for r in records]
        svg = output.line_chart_svg(
            [("optimized B", xs, [r.max_bell for r in records]),
             ("4/2^((1+eps)/(2+eps))", xs, [r.conjecture for r in records])],
            xlabel="eps", ylabel="max B",
            title=f"CHSH maximum ({cfg.convention.value})")
        output.write_atomic(args.svg, svg)
    return EXIT_OK


def cmd_ode(args, cfg: RunConfig) -> int:
    if args.M < 64:
        raise UsageError("M must be at least 64")
    sol = ode_check.build_eigenfunction(args.n, args.eps, args.amplitude, args.M)
    c = ode_check.coupling_for(args.n, args.eps, args.amplitude)
    rep = ode_check.residual(sol, c)
    printed = ode_check.printed_coupling(args.n, args.eps, args.amplitude)
    rep_printed = ode_check.residual(sol, printed)
    dirichlet = max(abs(float(sol.values[0])), abs(float(sol.values[-1])))
    payload = {
        "n": sol.n, "epsilon": sol.epsilon, "amplitude": sol.amplitude,
        "l_inf": rep.l_inf, "l2": rep.l2, "coupling_used": rep.coupling_used,
        "grid_size": rep.grid_size, "excluded": rep.excluded,
        "boundary_max_abs": dirichlet, "dirichlet_ok": dirichlet <= 1e-10,
        "printed_coupling": printed, "printed_coupling_l_inf": rep_printed.l_inf,
    }
    _emit(cfg, output.to_json(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--convention", default=None,
                        help="paper-literal (default), identity-consistent, renormalized")
    common.add_argument("--quad-tol", dest="quad_tol", type=float, default=None)
    common.add_argument("--invert-tol", dest="invert_tol", type=float, default=None)
    common.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    common.add_argument("--multistart", type=int, default=None)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"),
                        default=None)
    common.add_argument("--output", dest="output_path", default=None,
                        help="write here (atomically) instead of stdout")
    common.add_argument("--config", default=None, help="key=value config file")

    ap = argparse.ArgumentParser(prog="nonlocal-lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pi", parents=[common], help="pi_{p,q} two ways")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("corr", parents=[common], help="correlation curve")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--theta-min", dest="theta_min", type=float, default=0.0)
    p.add_argument("--theta-max", dest="theta_max", type=float, default=None,
                   help="default: pi_{2,2+eps}, one period of E")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_corr)

    p = sub.add_parser("chsh", parents=[common], help="maximize the CHSH value")
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("sweep", parents=[common], help="CHSH maximum over eps")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--eps", default=None, help="comma separated list")
    g.add_argument("--eps-range", dest="eps_range", type=float, nargs=3,
                   metavar=("START", "STOP", "STEP"), default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ode", parents=[common], help="eigenfunction residual")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--M", type=int, default=1024)
    p.set_defaults(func=cmd_ode)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
