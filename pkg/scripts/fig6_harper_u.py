"""Harper <E_v> against U at several lambda."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import U_GRID, Model, ModelParams, SweepSpec, sweep


@dataclass(frozen=True)
class Config:
    n: int = 89
    lambda_values: tuple = (1.0, 2.0, 3.0)
    u_grid: tuple = U_GRID
    beta: float = 0.0
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    for lam in cfg.lambda_values:
        spec = SweepSpec(ModelParams(Model.HARPER, cfg.n, lam=lam, beta=cfg.beta), "U", cfg.u_grid)
        result = sweep(spec, cfg.threads)
        write(cfg.outdir, f"fig6_u_sweep_N{cfg.n}_lambda{lam:g}.csv", result.to_csv())
        print(f"lambda={lam:g}: " + " ".join(f"{m:.4f}" for m in result.means))


if __name__ == "__main__":
    main(load_config(Config, __doc__))
