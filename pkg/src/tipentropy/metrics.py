"""Per-site von Neumann entropy and inverse participation ratio of pair states.

Eigenvectors of the reduced Hamiltonian are amplitudes ``phi`` on the pair
basis. The site entropies are written in terms of ``psi``, obtained by
scaling the diagonal cells back up by sqrt(2) and renormalizing so that
``sum_{n1 <= n2} |psi|**2 == 1``. With that normalization the local
occupations are

    z2[n] = |psi[n, n]|**2
    z1[n] = sum_{m > n} |psi[n, m]|**2 + sum_{m < n} |psi[m, n]|**2

and satisfy ``sum_n (z1[n] + 2 z2[n]) == 2``. (The boson operator
expression ``<c_n^+ c_n c_n^+ c_n>`` would give a different weight on the
doubly occupied cells; we follow the amplitude formulas instead.)

Every routine here works on a single vector or, column-wise, on a whole
eigenbasis.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .basis import SQRT2, PairBasis
from .eigensolver import EigenSystem

CLAMP_TOL = 1e-12


class NormalizationError(ValueError):
    pass


class OccupancyError(ValueError):
    pass


class IncompleteSpectrumError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PsiState:
    N: int
    amplitudes: np.ndarray  # pair-basis layout, sum of squares 1


@dataclass(frozen=True, eq=False)
class SiteOccupancy:
    z1: np.ndarray
    z2: np.ndarray


def to_psi(phi: np.ndarray, N: int) -> PsiState | np.ndarray:
    """Back-transform reduced amplitudes. A 2D input is treated column-wise
    and returned as a plain array."""
    basis = PairBasis(N)
    psi = np.array(phi, dtype=float)
    if psi.shape[0] != basis.M:
        raise ValueError(f"vector length {psi.shape[0]} != M = {basis.M}")
    psi[basis.diagonal_indices] *= SQRT2
    norm = np.linalg.norm(psi, axis=0)
    if np.any(norm == 0):
        raise NormalizationError("cannot normalize a zero vector")
    psi /= norm
    return PsiState(N, psi) if psi.ndim == 1 else psi


def _site_incidence(basis: PairBasis) -> sp.csr_matrix:
    # (N x M): off-diagonal cell (n1, n2) contributes to sites n1 and n2
    n1, n2 = basis.pairs
    off = np.flatnonzero(~basis.diagonal_mask)
    rows = np.concatenate([n1[off], n2[off]]) - 1
    cols = np.concatenate([off, off])
    return sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(basis.N, basis.M))


def _occupancy_arrays(psi: np.ndarray, basis: PairBasis) -> tuple[np.ndarray, np.ndarray]:
    weight = np.square(psi)
    z2 = weight[basis.diagonal_indices]
    z1 = _site_incidence(basis) @ weight
    return z1, z2


def occupancies(psi: PsiState) -> SiteOccupancy:
    z1, z2 = _occupancy_arrays(psi.amplitudes, PairBasis(psi.N))
    return SiteOccupancy(z1, z2)


def _xlog2x(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def _entropy_terms(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    p0 = 1.0 - z1 - z2
    probs = np.stack([p0, z1, z2])
    if np.any(probs < -CLAMP_TOL):
        raise OccupancyError(f"negative local probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    return -_xlog2x(probs).sum(axis=0)


def site_entropy(occ: SiteOccupancy, n: int) -> float:
    """Entropy (bits) of the three-level local density matrix at site ``n`` (1-based)."""
    return float(_entropy_terms(np.asarray(occ.z1[n - 1]), np.asarray(occ.z2[n - 1])))


def entropy_scale(N: int) -> float:
    """Approximate site-averaged entropy of the uniform pair state, (2/N) log2(N/2)."""
    if N < 3:
        raise ValueError("entropy scaling needs N >= 3")
    return 2.0 / N * np.log2(N / 2.0)


def uniform_state_entropy(N: int) -> float:
    """Exact scaled entropy of the state spread evenly over all M pair cells.

    Exceeds 1 at finite N (1.27 at N = 89) because the scale keeps only the
    leading large-N term.
    """
    M = N * (N + 1) // 2
    z1, z2 = (N - 1) / M, 1.0 / M
    return float(_entropy_terms(np.array(z1), np.array(z2)) / entropy_scale(N))


def _scaled_entropy_arrays(psi: np.ndarray, basis: PairBasis) -> np.ndarray:
    z1, z2 = _occupancy_arrays(psi, basis)
    return _entropy_terms(z1, z2).mean(axis=0) / entropy_scale(basis.N)


def state_entropy_scaled(psi: PsiState) -> float:
    return float(_scaled_entropy_arrays(psi.amplitudes, PairBasis(psi.N)))


def _ipr_arrays(psi: np.ndarray, M: int) -> np.ndarray:
    return 1.0 / (M * np.sum(np.square(np.square(psi)), axis=0))


def ipr(psi: PsiState) -> float:
    """``(M * sum |psi|**4)**-1``: 1 for the uniform state, 1/M for a single cell."""
    return float(_ipr_arrays(psi.amplitudes, PairBasis(psi.N).M))


@dataclass(frozen=True, eq=False)
class EntropyReport:
    N: int
    energies: np.ndarray
    entropies: np.ndarray
    iprs: np.ndarray
    header: dict = field(default_factory=dict)

    @property
    def spectrum_average(self) -> float:
        return float(np.mean(self.entropies))

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, val in self.header.items():
            buf.write(f"# {key} = {val}\n")
        buf.write(f"# N = {self.N}\n")
        buf.write(f"# mean_Ev = {self.spectrum_average:.12g}\n")
        buf.write("alpha,energy,entropy_scaled,ipr\n")
        for a, (e, s, x) in enumerate(zip(self.energies, self.entropies, self.iprs)):
            buf.write(f"{a},{e:.12g},{s:.12g},{x:.12g}\n")
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def spectrum_entropy(system: EigenSystem, N: int, header: dict | None = None) -> EntropyReport:
    basis = PairBasis(N)
    V = system.eigenvectors
    if V.shape != (basis.M, basis.M) or system.eigenvalues.size != basis.M:
        raise IncompleteSpectrumError(
            f"need all {basis.M} eigenpairs for N={N}, got eigenvectors of shape {V.shape}"
        )
    psi = to_psi(V, N)
    entropies = _scaled_entropy_arrays(psi, basis)
    iprs = _ipr_arrays(psi, basis.M)
    return EntropyReport(N, system.eigenvalues.copy(), entropies, iprs, dict(header or {}))
