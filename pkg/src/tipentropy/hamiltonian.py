"""Two-particle Hamiltonians on a ring or open chain.

The reduced operator lives on the pair basis and acts on amplitudes
``phi`` with ``phi[n,n] = psi[n,n] / sqrt(2)``; in those variables the
two-particle eigenvalue equation restricted to symmetric wavefunctions is a
real symmetric matrix. :func:`assemble_full_grid` builds the literal
``N**2``-dimensional operator on unsymmetrized ``psi[n1, n2]`` and is only
meant as an oracle for small ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .basis import PairBasis
from .potentials import PotentialProfile

FULL_GRID_MAX_SITES = 12


class DimensionError(ValueError):
    pass


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReducedHamiltonian:
    basis: PairBasis
    diagonal: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    hops: np.ndarray  # t * amplitude_factor per bond
    t: float
    U: float
    periodic: bool

    @property
    def M(self) -> int:
        return self.basis.M

    def to_sparse(self) -> sp.csr_matrix:
        M = self.M
        diag = np.arange(M)
        r = np.concatenate([diag, self.rows, self.cols])
        c = np.concatenate([diag, self.cols, self.rows])
        v = np.concatenate([self.diagonal, self.hops, self.hops])
        return sp.csr_matrix((v, (r, c)), shape=(M, M))

    def to_dense(self) -> np.ndarray:
        H = np.diag(self.diagonal)
        H[self.rows, self.cols] = self.hops
        H[self.cols, self.rows] = self.hops
        return H

    def trace(self) -> float:
        return float(np.sum(self.diagonal))

    def inf_norm(self) -> float:
        row = np.abs(self.diagonal).copy()
        np.add.at(row, self.rows, np.abs(self.hops))
        np.add.at(row, self.cols, np.abs(self.hops))
        return float(row.max())

    def write_coo(self, path: str | Path, header: dict | None = None) -> None:
        """Upper triangle as ``row col value`` lines (0-based), diagonal included."""
        lines = [f"# {k} = {v}" for k, v in (header or {}).items()]
        lines += [f"# M = {self.M}", f"# t = {self.t!r}", f"# U = {self.U!r}",
                  f"# boundary = {'periodic' if self.periodic else 'open'}",
                  "# row col value"]
        entries = [(i, i, d) for i, d in enumerate(self.diagonal)]
        entries += list(zip(self.rows.tolist(), self.cols.tolist(), self.hops.tolist()))
        entries.sort()
        lines += [f"{i} {j} {v:.17g}" for i, j, v in entries]
        Path(path).write_text("\n".join(lines) + "\n")


def _values(profile) -> np.ndarray:
    if isinstance(profile, PotentialProfile):
        return profile.values
    return np.asarray(profile, dtype=float)


def assemble_reduced(
    profile: PotentialProfile | np.ndarray,
    U: float,
    t: float = 1.0,
    periodic: bool = True,
    N: int | None = None,
) -> ReducedHamiltonian:
    eps = _values(profile)
    if N is not None and N != eps.size:
        raise DimensionError(f"profile has {eps.size} sites, expected {N}")
    if U < 0:
        raise ValueError(f"only repulsive interaction is supported, got U={U}")
    basis = PairBasis(eps.size)
    n1, n2 = basis.pairs
    diagonal = eps[n1 - 1] + eps[n2 - 1] + U * basis.diagonal_mask
    rows, cols, factor = basis.hop_arrays(periodic)
    return ReducedHamiltonian(basis, diagonal, rows, cols, t * factor, float(t), float(U), periodic)


def single_particle(profile: PotentialProfile | np.ndarray, t: float = 1.0, periodic: bool = True) -> np.ndarray:
    """The N x N one-particle chain with the same potential and boundary."""
    eps = _values(profile)
    N = eps.size
    h = np.diag(eps).astype(float)
    k = np.arange(N - 1)
    h[k, k + 1] = h[k + 1, k] = t
    if periodic:
        if N < 3:
            raise DimensionError("periodic chain needs N >= 3")
        h[0, N - 1] = h[N - 1, 0] = t
    return h


def assemble_full_grid(
    profile: PotentialProfile | np.ndarray, U: float, t: float = 1.0, periodic: bool = True
) -> np.ndarray:
    """Dense operator on psi[n1, n2] flattened as ``(n1 - 1) * N + (n2 - 1)``."""
    eps = _values(profile)
    N = eps.size
    if N > FULL_GRID_MAX_SITES:
        raise OracleSizeError(f"full-grid oracle limited to N <= {FULL_GRID_MAX_SITES}, got {N}")
    h1 = single_particle(eps, t, periodic)
    eye = np.eye(N)
    H = np.kron(h1, eye) + np.kron(eye, h1)
    same_site = np.arange(N) * (N + 1)
    H[same_site, same_site] += U
    return H


def swap_operator(N: int) -> np.ndarray:
    n1, n2 = np.divmod(np.arange(N * N), N)
    S = np.zeros((N * N, N * N))
    S[n2 * N + n1, n1 * N + n2] = 1.0
    return S


def symmetric_sector_spectrum(H_full: np.ndarray) -> np.ndarray:
    """Sorted spectrum of ``H_full`` on the range of P = (1 + SWAP) / 2.

    The orthonormal basis of the symmetric subspace comes from diagonalizing
    P itself, so nothing here depends on the pair-basis layout.
    """
    N = int(round(np.sqrt(H_full.shape[0])))
    P = 0.5 * (np.eye(N * N) + swap_operator(N))
    w, Q = np.linalg.eigh(P)
    Q = Q[:, w > 0.5]
    return np.linalg.eigvalsh(Q.T @ H_full @ Q)
