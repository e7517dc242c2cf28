"""Disorder-averaged <E_v> against W at U = 0."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import W_GRID, Model, ModelParams, SweepSpec, sweep


@dataclass(frozen=True)
class Config:
    n: int = 90
    u: float = 0.0
    w_grid: tuple = W_GRID
    samples: int = 100
    seed: int = 42
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    spec = SweepSpec(ModelParams(Model.DISORDERED, cfg.n, W=cfg.w_grid[0]), "W", cfg.w_grid,
                     U=cfg.u, samples=cfg.samples, base_seed=cfg.seed)
    result = sweep(spec, cfg.threads)
    write(cfg.outdir, f"fig1_w_sweep_N{cfg.n}.csv", result.to_csv())
    for w, m, s in zip(result.grid, result.means, result.stds):
        print(f"W={w:5.2f}  <E_v>={m:.4f} +- {s:.4f}")


if __name__ == "__main__":
    main(load_config(Config, __doc__))
