"""Slowly varying potential: <E_v> against U at several lambda."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import U_GRID, Model, ModelParams, SweepSpec, u_star_from_curve, sweep


@dataclass(frozen=True)
class Config:
    n: int = 89
    lambda_values: tuple = (0.5, 1.0, 1.5, 2.0)
    u_grid: tuple = U_GRID
    pi_alpha: float = 0.2
    upsilon: float = 0.7
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    for lam in cfg.lambda_values:
        params = ModelParams(Model.SLOWLY_VARYING, cfg.n, lam=lam, pi_alpha=cfg.pi_alpha, upsilon=cfg.upsilon)
        result = sweep(SweepSpec(params, "U", cfg.u_grid), cfg.threads)
        write(cfg.outdir, f"fig8_u_sweep_N{cfg.n}_lambda{lam:g}.csv", result.to_csv())
        ustar = u_star_from_curve(result.grid, result.means)
        print(f"lambda={lam:g}: peak at U={ustar.peak_u:g}; "
              + (f"U* = {ustar.u_star:.4f}" if ustar.found else ustar.reason))


if __name__ == "__main__":
    main(load_config(Config, __doc__))
