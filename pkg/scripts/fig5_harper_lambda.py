"""Harper <E_v> against lambda at U = 0 for several Fibonacci sizes, and where the curves cross."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import LAMBDA_GRID, crossing_curves


@dataclass(frozen=True)
class Config:
    sizes: tuple = (34, 55, 89)
    lambda_grid: tuple = LAMBDA_GRID
    u: float = 0.0
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    cross, results = crossing_curves(cfg.lambda_grid, list(cfg.sizes), cfg.u, threads=cfg.threads)
    for N, result in results.items():
        write(cfg.outdir, f"fig5_lambda_sweep_N{N}.csv", result.to_csv())
    for (a, b), cs in cross.pairs.items():
        print(f"N={a} vs N={b}: crossings at {', '.join(f'{c:.4f}' for c in cs) or 'none'}")
    print(cross.reason if cross.estimate is None else f"mean crossing {cross.estimate:.4f} +- {cross.spread:.4f}")


if __name__ == "__main__":
    main(load_config(Config, __doc__))
