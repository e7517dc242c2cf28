"""Shared plumbing for the figure scripts: dataclass config -> argparse flags."""

import argparse
import dataclasses
from pathlib import Path


def load_config(cls, description: str):
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        if isinstance(f.default, tuple):
            kind = type(f.default[0]) if f.default else float
            parser.add_argument(flag, type=kind, nargs="+", default=f.default)
        else:
            parser.add_argument(flag, type=type(f.default), default=f.default)
    args = vars(parser.parse_args())
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in args.items()})


def write(outdir: str, name: str, text: str) -> Path:
    path = Path(outdir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")
    return path
