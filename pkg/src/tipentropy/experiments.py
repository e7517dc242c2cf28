"""Parameter sweeps and disorder ensembles of the spectrum-averaged entropy.

A work unit is one (grid point, ensemble member) pair. Units are pure
functions of their inputs, each pinned to a single BLAS thread, and
results are gathered back in grid order, so the output does not depend on
how many worker processes ran them.
"""

from __future__ import annotations

import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from .eigensolver import SolverError, eig_symmetric
from .hamiltonian import assemble_reduced
from .metrics import EntropyReport, spectrum_entropy, uniform_state_entropy
from .potentials import (
    Model,
    PotentialProfile,
    derive_seed,
    generate_disorder,
    generate_harper,
    generate_slowly_varying,
)

DEFAULT_SAMPLES = 100


def inclusive_grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    """``start, start + step, ...`` up to ``stop`` (kept if within half a step)."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    if count < 1:
        raise ValueError(f"empty grid {start}:{stop}:{step}")
    return tuple(round(start + k * step, 12) for k in range(count))


W_GRID = inclusive_grid(0.5, 3.0, 0.25)
U_GRID = inclusive_grid(0.0, 10.0, 0.5)
LAMBDA_GRID = inclusive_grid(0.5, 3.5, 0.125)


class PointError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelParams:
    model: Model
    N: int
    W: float | None = None
    lam: float | None = None
    beta: float = 0.0
    pi_alpha: float = 0.2
    upsilon: float = 0.7
    t: float = 1.0
    periodic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.model is Model.DISORDERED and self.W is None:
            raise ValueError("disorder model needs W")
        if self.model is not Model.DISORDERED and self.lam is None:
            raise ValueError(f"{self.model.value} model needs lambda")

    @property
    def deterministic(self) -> bool:
        return self.model is not Model.DISORDERED

    def profile(self, seed: int | None = None) -> PotentialProfile:
        if self.model is Model.DISORDERED:
            if seed is None:
                raise ValueError("disorder profile needs a seed")
            return generate_disorder(self.N, self.W, seed)
        if self.model is Model.HARPER:
            return generate_harper(self.N, self.lam, beta=self.beta)
        return generate_slowly_varying(self.N, self.lam, self.pi_alpha, self.upsilon, self.beta)

    def with_param(self, name: str, value: float) -> ModelParams:
        key = {"W": "W", "lambda": "lam", "lam": "lam"}.get(name)
        if key is None:
            raise ValueError(f"cannot sweep model parameter {name!r}")
        return replace(self, **{key: float(value)})

    def describe(self) -> dict:
        out = {"model": self.model.value, "N": self.N}
        if self.model is Model.DISORDERED:
            out["W"] = self.W
        else:
            out["lambda"] = self.lam
            out["beta"] = self.beta
        if self.model is Model.SLOWLY_VARYING:
            out["pi_alpha"] = self.pi_alpha
            out["upsilon"] = self.upsilon
        out["t"] = self.t
        out["boundary"] = "periodic" if self.periodic else "open"
        return out


def sample_report(params: ModelParams, U: float, base_seed: int = 0, index: int = 0) -> EntropyReport:
    """Per-state entropy and IPR of one realization (ensemble member ``index``)."""
    seed = derive_seed(base_seed, index) if not params.deterministic else None
    profile = params.profile(seed)
    with threadpool_limits(limits=1):
        H = assemble_reduced(profile, U, params.t, params.periodic)
        system = eig_symmetric(H)
        header = {**params.describe(), "U": U}
        if seed is not None:
            header.update(base_seed=base_seed, sample=index, seed=seed)
        return spectrum_entropy(system, params.N, header)


def _unit(job: tuple[ModelParams, float, int, int]) -> tuple[float, str | None]:
    params, U, base_seed, index = job
    try:
        return sample_report(params, U, base_seed, index).spectrum_average, None
    except (SolverError, FloatingPointError, np.linalg.LinAlgError) as err:
        return math.nan, f"sample {index} (base_seed={base_seed}): {err}"


def _run_units(jobs: list, threads: int) -> list[tuple[float, str | None]]:
    if threads <= 1 or len(jobs) <= 1:
        return [_unit(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_unit, jobs, chunksize=1))


@dataclass(frozen=True)
class PointResult:
    mean: float
    std: float
    samples: int
    values: tuple[float, ...] = ()
    error: str | None = None


def _aggregate(results: Sequence[tuple[float, str | None]]) -> PointResult:
    errors = [e for _, e in results if e is not None]
    if errors:
        return PointResult(math.nan, math.nan, len(results), error="; ".join(errors))
    values = np.array([v for v, _ in results])
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return PointResult(float(values.mean()), std, int(values.size), tuple(values.tolist()))


def effective_samples(params: ModelParams, samples: int) -> int:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    return 1 if params.deterministic else samples


def run_point(
    params: ModelParams, U: float, samples: int = DEFAULT_SAMPLES, base_seed: int = 0, threads: int = 1
) -> PointResult:
    samples = effective_samples(params, samples)
    result = _aggregate(_run_units([(params, U, base_seed, i) for i in range(samples)], threads))
    if result.error:
        raise PointError(f"{params.describe()} U={U}: {result.error}")
    return result


@dataclass(frozen=True)
class SweepSpec:
    params: ModelParams
    sweep: str  # "U", "W" or "lambda"
    grid: tuple[float, ...]
    U: float = 0.0
    samples: int = DEFAULT_SAMPLES
    base_seed: int = 0

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        if not grid or not all(np.isfinite(grid)):
            raise ValueError("sweep grid must be finite and non-empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.sweep not in ("U", "W", "lambda"):
            raise ValueError(f"unknown swept parameter {self.sweep!r}")
        if self.sweep == "W" and self.params.model is not Model.DISORDERED:
            raise ValueError("W can only be swept for the disorder model")
        if self.sweep == "lambda" and self.params.model is Model.DISORDERED:
            raise ValueError("lambda cannot be swept for the disorder model")
        if self.sweep == "U" and grid[0] < 0:
            raise ValueError("only repulsive interaction is supported")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", effective_samples(self.params, self.samples))

    def point(self, value: float) -> tuple[ModelParams, float]:
        if self.sweep == "U":
            return self.params, value
        return self.params.with_param(self.sweep, value), self.U

    def describe(self) -> dict:
        out = self.params.describe()
        out.pop({"W": "W", "lambda": "lambda", "U": None}[self.sweep], None)
        if self.sweep != "U":
            out["U"] = self.U
        out.update(sweep=self.sweep, grid=",".join(f"{g:g}" for g in self.grid),
                   samples=self.samples, base_seed=self.base_seed)
        return out


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: tuple[PointResult, ...]
    header: dict = field(default_factory=dict)

    @property
    def grid(self) -> np.ndarray:
        return np.array(self.spec.grid)

    @property
    def means(self) -> np.ndarray:
        return np.array([p.mean for p in self.points])

    @property
    def stds(self) -> np.ndarray:
        return np.array([p.std for p in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, val in {**self.header, **self.spec.describe()}.items():
            buf.write(f"# {key} = {val}\n")
        buf.write("param,mean_Ev,std_Ev,n_samples\n")
        for g, p in zip(self.spec.grid, self.points):
            if p.error:
                buf.write(f"{g:.12g},nan,nan,{p.samples}\n")
            else:
                buf.write(f"{g:.12g},{p.mean:.12g},{p.std:.12g},{p.samples}\n")
        for g, p in zip(self.spec.grid, self.points):
            if p.error:
                buf.write(f"# error at {self.spec.sweep}={g:g}: {p.error}\n")
        return buf.getvalue()


def sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    jobs = []
    for value in spec.grid:
        params, U = spec.point(value)
        jobs += [(params, U, spec.base_seed, i) for i in range(spec.samples)]
    results = _run_units(jobs, threads)
    n = spec.samples
    points = tuple(_aggregate(results[k * n:(k + 1) * n]) for k in range(len(spec.grid)))
    return SweepResult(spec, points)


@dataclass(frozen=True)
class UStarResult:
    u_star: float | None
    baseline: float
    peak_u: float
    peak_value: float
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.u_star is not None


def u_star_from_curve(u: Sequence[float], ev: Sequence[float], tol: float = 1e-8) -> UStarResult:
    """First return of the piecewise-linear curve to its value at ``u[0]`` after the peak."""
    u = np.asarray(u, dtype=float)
    ev = np.asarray(ev, dtype=float)
    if u.size < 2 or u.size != ev.size:
        raise ValueError("need at least two matching (U, Ev) points")
    if np.any(np.isnan(ev)):
        raise ValueError("curve contains failed points")
    base = ev[0]
    peak = int(np.argmax(ev))
    if ev[peak] <= base:
        return UStarResult(None, float(base), float(u[peak]), float(ev[peak]), "no rise above the U=0 value")
    diff = ev - base
    for k in range(peak, u.size - 1):
        if diff[k] > 0 >= diff[k + 1]:
            lo, hi = u[k], u[k + 1]
            f = lambda x: np.interp(x, u, diff)  # noqa: E731
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if f(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            return UStarResult(0.5 * (lo + hi), float(base), float(u[peak]), float(ev[peak]))
    return UStarResult(None, float(base), float(u[peak]), float(ev[peak]), f"no crossing below U={u[-1]:g}")


def find_u_star(
    params: ModelParams,
    samples: int = DEFAULT_SAMPLES,
    base_seed: int = 0,
    u_max: float = 10.0,
    tol: float = 1e-8,
    u_step: float = 0.5,
    threads: int = 1,
) -> tuple[UStarResult, SweepResult]:
    spec = SweepSpec(params, "U", inclusive_grid(0.0, u_max, u_step), samples=samples, base_seed=base_seed)
    result = sweep(spec, threads)
    return u_star_from_curve(result.grid, result.means, tol), result


def curve_crossings(x: Sequence[float], y1: Sequence[float], y2: Sequence[float]) -> list[float]:
    """Abscissae where two piecewise-linear curves on a shared grid intersect."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(y1, dtype=float) - np.asarray(y2, dtype=float)
    out = []
    for k in range(x.size - 1):
        if d[k] == 0:
            out.append(float(x[k]))
        elif d[k] * d[k + 1] < 0:
            out.append(float(x[k] - d[k] * (x[k + 1] - x[k]) / (d[k + 1] - d[k])))
    if d[-1] == 0:
        out.append(float(x[-1]))
    return out


@dataclass(frozen=True)
class CrossingResult:
    pairs: dict  # (N_a, N_b) -> list of crossing abscissae
    estimate: float | None
    spread: float | None
    reason: str = ""


def crossing_from_curves(x: Sequence[float], curves: Mapping[int, Sequence[float]]) -> CrossingResult:
    sizes = list(curves)
    if len(sizes) < 2 or len(set(sizes)) != len(sizes):
        raise ValueError("need at least two curves with distinct system sizes")
    pairs = {}
    for a, b in itertools.combinations(sorted(sizes), 2):
        pairs[(a, b)] = curve_crossings(x, curves[a], curves[b])
    found = [c for cs in pairs.values() for c in cs]
    if not found:
        return CrossingResult(pairs, None, None, "curves do not intersect on the grid")
    return CrossingResult(pairs, float(np.mean(found)), float(np.std(found)))


def crossing_curves(
    lam_grid: Sequence[float],
    sizes: Sequence[int],
    U: float = 0.0,
    beta: float = 0.0,
    threads: int = 1,
    uniform_reference: bool = False,
) -> tuple[CrossingResult, dict[int, SweepResult]]:
    """Harper lambda-sweeps at several Fibonacci sizes and their pairwise crossings.

    With ``uniform_reference`` each curve is divided by the exact entropy of
    the uniform state at its size before intersecting, which removes the
    size-dependent offset left by the approximate scale factor.
    """
    if len(set(sizes)) != len(sizes):
        raise ValueError("system sizes must be distinct")
    results = {}
    for N in sizes:
        params = ModelParams(Model.HARPER, N, lam=0.0, beta=beta)
        results[N] = sweep(SweepSpec(params, "lambda", tuple(lam_grid), U=U, samples=1), threads)
    curves = {N: r.means for N, r in results.items()}
    if uniform_reference:
        curves = {N: c / uniform_state_entropy(N) for N, c in curves.items()}
    return crossing_from_curves(lam_grid, curves), results


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    r2: float
    resid_std: float

    def __call__(self, x):
        return self.slope * np.asarray(x) + self.intercept


def fit_line(x: Sequence[float], y: Sequence[float]) -> LineFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ValueError("need at least three points for a line fit with residual spread")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return LineFit(float(slope), float(intercept), r2, float(np.std(resid, ddof=2)))

