"""Per-state entropy against energy for one disorder sample at several U."""

from dataclasses import dataclass

from _common import load_config, write
from tipentropy.experiments import Model, ModelParams, sample_report


@dataclass(frozen=True)
class Config:
    n: int = 90
    w: float = 1.0
    u_values: tuple = (0.0, 2.0, 6.0)
    seed: int = 42
    sample: int = 0
    outdir: str = "results"


def main(cfg: Config) -> None:
    params = ModelParams(Model.DISORDERED, cfg.n, W=cfg.w)
    for u in cfg.u_values:
        report = sample_report(params, u, cfg.seed, cfg.sample)
        write(cfg.outdir, f"fig4_states_N{cfg.n}_U{u:g}.csv", report.to_csv())
        print(f"U={u:g}: <E_v> = {report.spectrum_average:.4f}")


if __name__ == "__main__":
    main(load_config(Config, __doc__))
