"""Disorder-averaged <E_v> against U at several W, with the return point U*."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import Model, ModelParams, find_u_star


@dataclass(frozen=True)
class Config:
    n: int = 90
    w_values: tuple = (1.0, 2.0, 3.0)
    u_max: float = 10.0
    u_step: float = 0.5
    samples: int = 100
    seed: int = 42
    threads: int = 1
    outdir: str = "results"


def main(cfg: Config) -> None:
    for w in cfg.w_values:
        ustar, result = find_u_star(ModelParams(Model.DISORDERED, cfg.n, W=w), cfg.samples, cfg.seed,
                                    u_max=cfg.u_max, u_step=cfg.u_step, threads=cfg.threads)
        extra = f"# u_star = {'' if ustar.u_star is None else repr(ustar.u_star)}\n"
        write(cfg.outdir, f"fig3_u_sweep_N{cfg.n}_W{w:g}.csv", extra + result.to_csv())
        print(f"W={w:g}: " + (f"U* = {ustar.u_star:.4f}, peak at U = {ustar.peak_u:g}"
                              if ustar.found else ustar.reason))


if __name__ == "__main__":
    main(load_config(Config, __doc__))
