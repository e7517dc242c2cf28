"""Exchange-symmetric pair basis |n1, n2>, 1 <= n1 <= n2 <= N.

Layout is row-major over ``n1`` with ``n2 >= n1`` running fastest::

    (1,1) (1,2) ... (1,N) (2,2) (2,3) ... (N,N)
      0     1        N-1    N     N+1      M-1

Hops are those of the two-particle grid, each coordinate moving by one site,
folded back onto the triangle by re-sorting the pair. A hop between a
diagonal cell (n,n) and an off-diagonal cell is reached twice from the
diagonal side on the grid, which after the sqrt(2) rescaling of diagonal
amplitudes becomes a single symmetric bond of weight sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .potentials import InvalidLatticeError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HopEdge:
    source: int
    target: int
    amplitude_factor: float


def basis_size(N: int) -> int:
    return N * (N + 1) // 2


def _row_offset(n1: int, N: int) -> int:
    # number of cells in rows 1..n1-1
    return (n1 - 1) * N - (n1 - 1) * (n1 - 2) // 2


def pair_index(n1: int, n2: int, N: int) -> int:
    if not (1 <= n1 <= n2 <= N):
        raise IndexError(f"need 1 <= n1 <= n2 <= N, got ({n1}, {n2}) with N={N}")
    return _row_offset(n1, N) + (n2 - n1)


def index_pair(idx: int, N: int) -> tuple[int, int]:
    if not (0 <= idx < basis_size(N)):
        raise IndexError(f"index {idx} outside [0, {basis_size(N)})")
    n1 = 1
    while _row_offset(n1 + 1, N) <= idx:
        n1 += 1
    return n1, n1 + idx - _row_offset(n1, N)


@dataclass(frozen=True)
class PairBasis:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidLatticeError(f"need at least one site, got N={self.N}")

    @property
    def M(self) -> int:
        return basis_size(self.N)

    @cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """1-based site arrays ``(n1, n2)`` in layout order."""
        n1, n2 = np.triu_indices(self.N)
        n1.setflags(write=False)
        n2.setflags(write=False)
        return n1 + 1, n2 + 1

    @cached_property
    def diagonal_mask(self) -> np.ndarray:
        n1, n2 = self.pairs
        mask = n1 == n2
        mask.setflags(write=False)
        return mask

    @cached_property
    def diagonal_indices(self) -> np.ndarray:
        """Index of cell (n, n) for n = 1..N."""
        return np.flatnonzero(self.diagonal_mask)

    def index(self, n1, n2):
        """Vectorized ``pair_index`` for already-sorted 1-based arrays."""
        n1 = np.asarray(n1)
        n2 = np.asarray(n2)
        return (n1 - 1) * self.N - (n1 - 1) * (n1 - 2) // 2 + (n2 - n1)

    def hop_arrays(self, periodic: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Undirected bonds as ``(source, target, factor)`` with source < target."""
        N = self.N
        if periodic and N < 3:
            raise InvalidLatticeError(
                f"periodic boundaries need N >= 3 (N={N} would double bonds)"
            )
        n1, n2 = self.pairs
        a = np.concatenate([n1 + 1, n1 - 1, n1, n1])
        b = np.concatenate([n2, n2, n2 + 1, n2 - 1])
        src = np.tile(np.arange(self.M), 4)
        if periodic:
            a = (a - 1) % N + 1
            b = (b - 1) % N + 1
        else:
            keep = (a >= 1) & (a <= N) & (b >= 1) & (b <= N)
            a, b, src = a[keep], b[keep], src[keep]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        dst = self.index(lo, hi)
        i, j = np.minimum(src, dst), np.maximum(src, dst)
        keep = i != j
        edges = np.unique(np.stack([i[keep], j[keep]], axis=1), axis=0)
        i, j = edges[:, 0], edges[:, 1]
        diag = self.diagonal_mask
        factor = np.where(diag[i] != diag[j], SQRT2, 1.0)
        return i, j, factor


def hop_edges(N: int, periodic: bool = True) -> frozenset[HopEdge]:
    i, j, factor = PairBasis(N).hop_arrays(periodic)
    return frozenset(
        HopEdge(int(s), int(t), float(f)) for s, t, f in zip(i, j, factor)
    )
