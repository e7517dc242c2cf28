"""On-site potential sequences for the three lattice models.

Sites are numbered ``1..N`` in every closed form below; values are stored
0-based, so ``profile.values[n - 1]`` is the energy of site ``n``.

Random profiles use NumPy's PCG64 seeded from an integer. Ensemble members
get their seed from :func:`derive_seed`, which is a pure function of
``(base_seed, sample_index)`` built on :class:`numpy.random.SeedSequence`
spawn keys, so sample ``i`` is the same no matter which worker draws it or
in what order. Draws are half-open, ``[-W, W)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class InvalidLatticeError(ValueError):
    pass


class InvalidApproximantError(ValueError):
    pass


class InvalidIndexError(ValueError):
    pass


class Model(str, enum.Enum):
    DISORDERED = "disorder"
    HARPER = "harper"
    SLOWLY_VARYING = "slow"


@dataclass(frozen=True, eq=False)
class PotentialProfile:
    values: np.ndarray
    model: Model
    params: dict = field(default_factory=dict)
    seed: int | None = None
    # set by generate_slowly_varying when the exponent is outside (0, 1)
    out_of_regime: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidLatticeError("profile values must be a non-empty 1D sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def sites(self) -> int:
        return int(self.values.size)

    def header(self) -> dict:
        """Provenance key/values written in front of any serialized output."""
        meta = {"model": self.model.value, "sites": self.sites}
        meta.update(self.params)
        if self.seed is not None:
            meta["seed"] = self.seed
            meta["interval"] = "[-W,W)"
        return meta


def _check_sites(N: int) -> None:
    if int(N) != N or N < 3:
        raise InvalidLatticeError(
            f"need N >= 3 sites (periodic ring degenerates below 3), got {N}"
        )


def derive_seed(base_seed: int, index: int) -> int:
    """Seed for ensemble member ``index``, independent of execution order."""
    if base_seed < 0 or index < 0:
        raise ValueError("base_seed and index must be non-negative")
    ss = np.random.SeedSequence(base_seed, spawn_key=(index,))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def generate_disorder(N: int, W: float, seed: int) -> PotentialProfile:
    _check_sites(N)
    if W < 0:
        raise ValueError(f"disorder strength must be >= 0, got {W}")
    if seed < 0:
        raise ValueError("seed must be an unsigned integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    values = rng.uniform(-W, W, size=N) if W > 0 else np.zeros(N)
    return PotentialProfile(values, Model.DISORDERED, {"W": float(W)}, seed=int(seed))


def fibonacci(k: int) -> int:
    """k-th Fibonacci number with F_1 = F_2 = 1."""
    if int(k) != k or k < 1:
        raise InvalidIndexError(f"Fibonacci index must be >= 1, got {k}")
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return a


def fibonacci_index(N: int) -> int:
    """Smallest k >= 2 with F_k == N; raises if N is not a Fibonacci number."""
    k = 2
    while fibonacci(k) < N:
        k += 1
    if fibonacci(k) != N:
        raise InvalidApproximantError(f"{N} is not a Fibonacci number")
    return k


def generate_harper(N: int, lam: float, k: int | None = None, beta: float = 0.0) -> PotentialProfile:
    """Rational approximant ``lam * cos(2 pi sigma n + beta)`` with sigma = F_{k-1}/F_k.

    ``k`` may be omitted and is then recovered from ``N``. The period of the
    sequence is exactly ``N``, so it is commensurate with the ring.
    """
    if lam < 0:
        raise ValueError(f"potential strength must be >= 0, got {lam}")
    if k is None:
        k = fibonacci_index(N)
    if k < 2 or fibonacci(k) != N:
        raise InvalidApproximantError(f"N={N} is not F_{k}")
    _check_sites(N)
    numer = fibonacci(k - 1)
    n = np.arange(1, N + 1)
    # reduce sigma*n mod 1 in exact integer arithmetic before the cosine
    phase = 2.0 * np.pi * ((numer * n) % N) / N + beta
    values = lam * np.cos(phase)
    params = {"lambda": float(lam), "fib_index": int(k), "sigma": f"{numer}/{N}", "beta": float(beta)}
    return PotentialProfile(values, Model.HARPER, params)


def generate_slowly_varying(
    N: int, lam: float, pi_alpha: float = 0.2, upsilon: float = 0.7, beta: float = 0.0
) -> PotentialProfile:
    """``lam * cos(pi_alpha * n**upsilon + beta)``; mobility edges need 0 < upsilon < 1."""
    _check_sites(N)
    n = np.arange(1, N + 1, dtype=float)
    values = lam * np.cos(pi_alpha * n**upsilon + beta)
    params = {"lambda": float(lam), "pi_alpha": float(pi_alpha), "upsilon": float(upsilon), "beta": float(beta)}
    return PotentialProfile(
        values, Model.SLOWLY_VARYING, params, out_of_regime=not (0.0 < upsilon < 1.0)
    )


def save_profile(profile: PotentialProfile, path: str | Path) -> None:
    lines = [f"# {k} = {v}" for k, v in profile.header().items()]
    lines.append("# site energy")
    lines += [f"{n} {e:.17g}" for n, e in enumerate(profile.values, start=1)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_profile(path: str | Path) -> PotentialProfile:
    meta: dict[str, str] = {}
    energies = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            if "=" in line:
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = val.strip()
            continue
        if line.strip():
            site, energy = line.split()
            if int(site) != len(energies) + 1:
                raise ValueError(f"{path}: sites must be listed 1..N in order")
            energies.append(float(energy))
    model = Model(meta.pop("model"))
    meta.pop("sites", None)
    meta.pop("interval", None)
    seed = meta.pop("seed", None)
    params: dict = {}
    for key, val in meta.items():
        try:
            params[key] = int(val) if key == "fib_index" else float(val)
        except ValueError:
            params[key] = val
    return PotentialProfile(
        np.array(energies), model, params, seed=None if seed is None else int(seed)
    )


def make_profile(model: Model | str, N: int, **params) -> PotentialProfile:
    """Dispatch on model name; disorder requires ``W`` and ``seed``."""
    model = Model(model)
    if model is Model.DISORDERED:
        return generate_disorder(N, params["W"], params["seed"])
    if model is Model.HARPER:
        return generate_harper(N, params["lam"], params.get("k"), params.get("beta", 0.0))
    return generate_slowly_varying(
        N,
        params["lam"],
        params.get("pi_alpha", 0.2),
        params.get("upsilon", 0.7),
        params.get("beta", 0.0),
    )

