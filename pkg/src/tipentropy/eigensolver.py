"""Dense real-symmetric eigendecomposition with residual certificates.

Delegates to LAPACK ``?syevd`` through :func:`scipy.linalg.eigh`. Residuals
are computed with the sparse operator, so certifying the full eigenbasis
costs O(M**2) on top of the O(M**3) solve.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hamiltonian import ReducedHamiltonian

RESIDUAL_RTOL = 1e-9
ORTHONORMALITY_TOL = 1e-10


class SolverError(RuntimeError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True, eq=False)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column alpha <-> eigenvalues[alpha]
    residual_bound: float

    @property
    def M(self) -> int:
        return int(self.eigenvalues.size)

    def orthonormality_error(self) -> float:
        V = self.eigenvectors
        return float(np.max(np.abs(V.T @ V - np.eye(V.shape[1]))))


def _as_operator(H):
    if isinstance(H, ReducedHamiltonian):
        return H.to_dense(), H.to_sparse(), H.inf_norm()
    A = np.asarray(H, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(A, A.T, rtol=0, atol=1e-13 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix is not symmetric")
    return A.copy(), A, float(np.abs(A).sum(axis=1).max()) if A.size else 0.0


def eig_symmetric(H: ReducedHamiltonian | np.ndarray, check_orthonormal: bool = False) -> EigenSystem:
    dense, op, norm = _as_operator(H)
    try:
        w, V = scipy.linalg.eigh(dense, driver="evd", overwrite_a=True, check_finite=True)
    except np.linalg.LinAlgError as err:
        found = re.findall(r"\d+", str(err))
        raise SolverError(f"eigensolver did not converge: {err}",
                          int(found[0]) if found else None) from err

    resid = op @ V - V * w
    per_state = np.linalg.norm(resid, axis=0)
    bound = float(per_state.max()) if per_state.size else 0.0
    limit = RESIDUAL_RTOL * max(1.0, norm)
    if bound > limit:
        worst = int(np.argmax(per_state))
        raise SolverError(f"residual {bound:.3e} exceeds {limit:.3e} at eigenpair {worst}", worst)
    system = EigenSystem(w, V, bound)
    if check_orthonormal:
        err = system.orthonormality_error()
        if err > ORTHONORMALITY_TOL:
            raise SolverError(f"eigenvectors not orthonormal (max deviation {err:.3e})")
    return system
