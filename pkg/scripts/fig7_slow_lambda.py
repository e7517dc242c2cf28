"""Slowly varying potential: <E_v> against lambda at U = 0 with a line fitted below lambda = 2."""

from dataclasses import dataclass

import numpy as np

from _common import load_config, write
from tipentropy.experiments import LAMBDA_GRID, Model, ModelParams, SweepSpec, fit_line, sweep


@dataclass(frozen=True)
class Config:
    n: int = 89
    lambda_grid: tuple = LAMBDA_GRID
    pi_alpha: float = 0.2
    upsilon: float = 0.7
    u: float = 0.0
    fit_max: float = 2.0
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    params = ModelParams(Model.SLOWLY_VARYING, cfg.n, lam=cfg.lambda_grid[0],
                         pi_alpha=cfg.pi_alpha, upsilon=cfg.upsilon)
    result = sweep(SweepSpec(params, "lambda", cfg.lambda_grid, U=cfg.u), cfg.threads)
    lam, m = result.grid, result.means
    low = (lam > 0) & (lam <= cfg.fit_max)
    fit = fit_line(lam[low], m[low])
    extra = (f"# fit_slope = {fit.slope!r}\n# fit_intercept = {fit.intercept!r}\n"
             f"# fit_r2 = {fit.r2!r}\n# fit_resid_std = {fit.resid_std!r}\n")
    write(cfg.outdir, f"fig7_lambda_sweep_N{cfg.n}.csv", extra + result.to_csv())
    gaps = (fit(lam[~low]) - m[~low]) / fit.resid_std
    print(f"fit on lambda <= {cfg.fit_max:g}: slope {fit.slope:.4f}, R2 {fit.r2:.4f}")
    if gaps.size:
        print(f"(line - value) / resid_std for lambda > {cfg.fit_max:g}: {np.round(gaps, 1).tolist()}")


if __name__ == "__main__":
    main(load_config(Config, __doc__))
