"""Command-line front end.

Every subcommand writes a CSV whose header carries the full run
configuration as ``# config: key = value`` lines; passing that CSV back via
``--config`` replays the run. Plain config files use ``key = value`` lines
with ``#`` comments. Precedence is flag > config file > default.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .eigensolver import eig_symmetric
from .experiments import (
    DEFAULT_SAMPLES,
    ModelParams,
    SweepSpec,
    crossing_curves,
    find_u_star,
    inclusive_grid,
    sample_report,
    sweep,
)
from .hamiltonian import assemble_reduced
from .potentials import Model, derive_seed, fibonacci, fibonacci_index

OUTDIR_ENV = "TIP_ENTROPY_OUTDIR"
COMMANDS = ("spectrum", "entropy", "sweep", "ustar", "crossing")
# keys that do not change the numbers and are left out of provenance headers
RUNTIME_KEYS = ("out", "threads")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    model: str | None = None
    n: int | None = None
    fib_index: int | None = None
    w: float | None = None
    lam: float | None = None
    beta: float = 0.0
    pi_alpha: float = 0.2
    upsilon: float = 0.7
    t: float = 1.0
    u: float = 0.0
    boundary: str = "periodic"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    sample: int = 0
    u_grid: str | None = None
    w_grid: str | None = None
    lambda_grid: str | None = None
    n_list: str | None = None
    u_max: float = 10.0
    u_step: float = 0.5
    tol: float = 1e-8
    out: str | None = None
    threads: int = 1


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
# config-file / flag spelling -> dataclass attribute
_ALIASES = {"lambda": "lam"}
_KEY_NAMES = {v: k for k, v in _ALIASES.items()}


def _convert(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if raw in ("None", ""):
        return None
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError:
        raise UsageError(f"{_KEY_NAMES.get(key, key)}: cannot parse {raw!r}") from None
    return raw


def emit_config(config: RunConfig, runtime: bool = True) -> list[str]:
    lines = []
    for f in fields(RunConfig):
        if not runtime and f.name in RUNTIME_KEYS:
            continue
        value = getattr(config, f.name)
        text = "" if value is None else repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{_KEY_NAMES.get(f.name, f.name)} = {text}")
    return lines


def parse_config_text(text: str) -> dict:
    """Key/value pairs from a config file or from a previous run's CSV."""
    lines = text.splitlines()
    tagged = [ln[len("# config:"):] for ln in lines if ln.startswith("# config:")]
    if tagged:
        lines = tagged
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key = key.strip().replace("-", "_")
        attr = _ALIASES.get(key, key)
        if attr not in _FIELD_TYPES:
            raise UsageError(f"unknown config key {key!r}")
        values[attr] = _convert(attr, raw.strip())
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tip-entropy",
        description="Exact diagonalization of two interacting particles on 1D lattices: "
        "von Neumann entropy and IPR of every eigenstate.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--config", help="flat key = value file, or a CSV written by an earlier run")
    g.add_argument("--model", choices=[m.value for m in Model])
    g.add_argument("--n", type=int, help="number of sites")
    g.add_argument("--fib-index", type=int, help="Harper: N = F_k with F_1 = F_2 = 1")
    g.add_argument("--w", type=float, help="disorder strength, energies in [-W, W)")
    g.add_argument("--lambda", dest="lam", type=float, help="Harper / slowly varying strength")
    g.add_argument("--beta", type=float)
    g.add_argument("--pi-alpha", type=float)
    g.add_argument("--upsilon", type=float)
    g.add_argument("--t", type=float, help="hopping (energy unit, default 1)")
    g.add_argument("--u", type=float, help="on-site interaction U >= 0")
    g.add_argument("--boundary", choices=["periodic", "open"])
    g.add_argument("--samples", type=int, help="disorder realizations per point")
    g.add_argument("--seed", type=int, help="base seed for disorder ensembles")
    g.add_argument("--sample", type=int, help="ensemble member used by spectrum/entropy")
    g.add_argument("--out", help=f"output CSV (default ${OUTDIR_ENV}/<command>.csv)")
    g.add_argument("--threads", type=int, help="worker processes for sweeps")

    sub.add_parser("spectrum", parents=[common], help="eigenvalues of one realization")
    sub.add_parser("entropy", parents=[common], help="per-state entropy and IPR of one realization")
    p = sub.add_parser("sweep", parents=[common], help="<E_v> along a U, W or lambda grid")
    p.add_argument("--u-grid", help="start:stop:step or comma list")
    p.add_argument("--w-grid")
    p.add_argument("--lambda-grid")
    p = sub.add_parser("ustar", parents=[common], help="U at which <E_v> returns to its U=0 value")
    p.add_argument("--u-max", type=float)
    p.add_argument("--u-step", type=float)
    p.add_argument("--tol", type=float)
    p = sub.add_parser("crossing", parents=[common], help="Harper lambda curves at several sizes")
    p.add_argument("--lambda-grid")
    p.add_argument("--n-list", help="comma list of Fibonacci sizes, e.g. 34,55,89")
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    merged: dict = {}
    if args.get("config"):
        path = Path(args["config"])
        try:
            merged.update(parse_config_text(path.read_text()))
        except OSError as err:
            raise UsageError(f"cannot read config {path}: {err}") from None
    file_command = merged.pop("command", None)
    if file_command and file_command != args["command"]:
        raise UsageError(f"command: config file is for {file_command!r}, not {args['command']!r}")
    for key, value in args.items():
        if key != "config" and value is not None:
            merged[key] = value
    config = RunConfig(**merged)
    validate(config)
    return config


def parse_grid(text: str, key: str) -> tuple[float, ...]:
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            grid = inclusive_grid(start, stop, step)
        else:
            grid = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as err:
        raise UsageError(f"{key}: bad grid {text!r} ({err})") from None
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError(f"{key}: grid must be non-empty and strictly increasing")
    return grid


def _sites(config: RunConfig) -> int:
    if config.model == Model.HARPER.value:
        if config.fib_index is not None:
            N = fibonacci(config.fib_index)
            if config.n is not None and config.n != N:
                raise UsageError(f"n: {config.n} conflicts with fib_index {config.fib_index} (F = {N})")
            return N
        if config.n is None:
            raise UsageError("n: harper needs --fib-index or a Fibonacci --n")
        try:
            fibonacci_index(config.n)
        except ValueError as err:
            raise UsageError(f"n: {err}") from None
        return config.n
    if config.n is None:
        raise UsageError("n: number of sites is required")
    return config.n


def model_params(config: RunConfig, N: int | None = None) -> ModelParams:
    try:
        return ModelParams(
            Model(config.model),
            _sites(config) if N is None else N,
            W=config.w,
            lam=config.lam,
            beta=config.beta,
            pi_alpha=config.pi_alpha,
            upsilon=config.upsilon,
            t=config.t,
            periodic=config.boundary == "periodic",
        )
    except ValueError as err:
        raise UsageError(str(err)) from None


def _sweep_axis(config: RunConfig) -> tuple[str, str]:
    given = [(name, key) for name, key in (("U", "u_grid"), ("W", "w_grid"), ("lambda", "lambda_grid"))
             if getattr(config, key)]
    if len(given) != 1:
        raise UsageError("u_grid/w_grid/lambda_grid: give exactly one sweep grid")
    return given[0]


def validate(config: RunConfig) -> None:
    """Check every field against module preconditions before any computation."""
    if config.command not in COMMANDS:
        raise UsageError(f"command: unknown {config.command!r}")
    if config.command == "crossing" and config.model is None:
        config.model = Model.HARPER.value
    if config.model is None:
        raise UsageError("model: required (disorder, harper or slow)")
    if config.model not in [m.value for m in Model]:
        raise UsageError(f"model: unknown {config.model!r}")
    if config.boundary not in ("periodic", "open"):
        raise UsageError(f"boundary: must be periodic or open, got {config.boundary!r}")
    if config.model == Model.DISORDERED.value:
        if config.w is None:
            raise UsageError("w: required for the disorder model")
        if config.w < 0:
            raise UsageError("w: must be >= 0")
    elif config.command != "crossing":
        if config.lam is None:
            raise UsageError(f"lambda: required for the {config.model} model")
        if config.model == Model.HARPER.value and config.lam < 0:
            raise UsageError("lambda: must be >= 0")
    if config.u < 0:
        raise UsageError("u: only repulsive interaction (U >= 0) is supported")
    if config.samples < 1:
        raise UsageError("samples: must be >= 1")
    if config.seed < 0 or config.sample < 0:
        raise UsageError("seed/sample: must be non-negative")
    if config.threads < 1:
        raise UsageError("threads: must be >= 1")
    if config.u_max <= 0 or config.u_step <= 0 or config.tol <= 0:
        raise UsageError("u_max/u_step/tol: must be positive")
    if config.command == "crossing":
        if config.model != Model.HARPER.value:
            raise UsageError("model: crossing analysis is defined for the harper model")
        sizes = _n_list(config)
        if len(sizes) < 2 or len(set(sizes)) != len(sizes):
            raise UsageError("n_list: need at least two distinct sizes")
        for N in sizes:
            try:
                fibonacci_index(N)
            except ValueError as err:
                raise UsageError(f"n_list: {err}") from None
        parse_grid(config.lambda_grid or "0.5:3.5:0.125", "lambda_grid")
        return
    N = _sites(config)
    if N < 3:
        raise UsageError("n: need at least 3 sites")
    if config.command == "sweep":
        name, key = _sweep_axis(config)
        grid = parse_grid(getattr(config, key), key)
        try:
            SweepSpec(model_params(config), name, grid, U=config.u,
                      samples=config.samples, base_seed=config.seed)
        except ValueError as err:
            raise UsageError(f"{key}: {err}") from None
    else:
        model_params(config)


def _n_list(config: RunConfig) -> list[int]:
    text = config.n_list or "34,55,89"
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"n_list: bad list {text!r}") from None


def _output_path(config: RunConfig) -> Path:
    if config.out:
        return Path(config.out)
    return Path(os.environ.get(OUTDIR_ENV, ".")) / f"{config.command}.csv"


def _header(config: RunConfig) -> str:
    lines = [f"# tip-entropy {__version__} {config.command}"]
    lines += [f"# config: {ln}" for ln in emit_config(config, runtime=False)]
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    x = float(np.round(x, 10)) + 0.0  # drop -0.0
    return f"{x:.10g}"


def execute(config: RunConfig) -> tuple[str, str]:
    """Run the configured computation; returns (CSV text, one-line summary)."""
    cmd = config.command
    if cmd in ("spectrum", "entropy"):
        params = model_params(config)
        if cmd == "spectrum":
            seed = None if params.deterministic else derive_seed(config.seed, config.sample)
            H = assemble_reduced(params.profile(seed), config.u, params.t, params.periodic)
            w = eig_symmetric(H).eigenvalues
            body = "".join(f"# {k} = {v}\n" for k, v in params.describe().items())
            if seed is not None:
                body += f"# seed = {seed}\n"
            body += "alpha,energy\n" + "".join(f"{a},{e:.12g}\n" for a, e in enumerate(w))
            shown = " ".join(_fmt(e) for e in w) if w.size <= 64 else f"min {_fmt(w[0])} max {_fmt(w[-1])}"
            return body, f"M = {w.size} eigenvalues: {shown}"
        report = sample_report(params, config.u, config.seed, config.sample)
        return report.to_csv(), f"<E_v> = {report.spectrum_average:.6f} (N={params.N}, U={config.u:g})"

    if cmd == "sweep":
        name, key = _sweep_axis(config)
        spec = SweepSpec(model_params(config), name, parse_grid(getattr(config, key), key),
                         U=config.u, samples=config.samples, base_seed=config.seed)
        result = sweep(spec, config.threads)
        m = result.means
        return result.to_csv(), (f"{name} sweep over {m.size} points: <E_v> from "
                                 f"{m[0]:.6f} to {m[-1]:.6f} (max {np.nanmax(m):.6f})")

    if cmd == "ustar":
        params = model_params(config)
        ustar, result = find_u_star(params, config.samples, config.seed, config.u_max,
                                    config.tol, config.u_step, config.threads)
        extra = (f"# u_star = {'' if ustar.u_star is None else repr(ustar.u_star)}\n"
                 f"# peak_U = {ustar.peak_u!r}\n# peak_Ev = {ustar.peak_value!r}\n")
        if ustar.found:
            summary = f"U* = {ustar.u_star:.6f} (peak <E_v> = {ustar.peak_value:.6f} at U = {ustar.peak_u:g})"
        else:
            summary = f"no crossing: {ustar.reason}"
            extra += f"# no_crossing = {ustar.reason}\n"
        return extra + result.to_csv(), summary

    # crossing
    sizes = _n_list(config)
    grid = parse_grid(config.lambda_grid or "0.5:3.5:0.125", "lambda_grid")
    cross, results = crossing_curves(grid, sizes, config.u, config.beta, config.threads)
    lines = [f"# pair {a}-{b} crossings = {','.join(f'{c:.12g}' for c in cs)}"
             for (a, b), cs in cross.pairs.items()]
    lines.append("param," + ",".join(f"mean_Ev_N{N}" for N in sizes))
    for k, lam in enumerate(grid):
        lines.append(f"{lam:.12g}," + ",".join(f"{results[N].means[k]:.12g}" for N in sizes))
    if cross.estimate is None:
        summary = f"no crossing: {cross.reason}"
    else:
        summary = f"crossing lambda = {cross.estimate:.6f} +/- {cross.spread:.6f}"
    return "\n".join(lines) + "\n", summary


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as err:
        print(f"tip-entropy: usage error: {err}", file=sys.stderr)
        return 2
    try:
        body, summary = execute(config)
    except (ValueError, RuntimeError) as err:
        print(f"tip-entropy: {config.command} failed: {err}", file=sys.stderr)
        return 1
    path = _output_path(config)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_header(config) + body)
    except OSError as err:
        print(f"tip-entropy: cannot write {path}: {err}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
