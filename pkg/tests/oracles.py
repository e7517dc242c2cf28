"""Straight-from-the-formula reference computations used only by tests.

Nothing here imports the pair-basis layout or the reduced Hamiltonian: the
two-particle problem is solved on the full N x N grid and symmetric states
are picked out with the exchange operator.
"""

import math

import numpy as np


def full_grid_symmetric_states(eps, U, t=1.0, periodic=True):
    """Eigenpairs of the grid operator with even exchange parity, psi[n1][n2]."""
    N = len(eps)
    dim = N * N
    H = np.zeros((dim, dim))
    for a in range(N):
        for b in range(N):
            i = a * N + b
            H[i, i] = eps[a] + eps[b] + (U if a == b else 0.0)
            for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                c, d = a + da, b + db
                if periodic:
                    c, d = c % N, d % N
                elif not (0 <= c < N and 0 <= d < N):
                    continue
                H[i, c * N + d] += t
    w, V = np.linalg.eigh(H)
    states = []
    for k in range(dim):
        psi = V[:, k].reshape(N, N)
        if np.allclose(psi, psi.T, atol=1e-8):
            states.append((w[k], psi))
    return states


def triangle_psi(psi_grid):
    """Restrict a symmetric grid function to n1 <= n2 and normalize there."""
    N = psi_grid.shape[0]
    amp = {(a, b): psi_grid[a, b] for a in range(N) for b in range(a, N)}
    norm = math.sqrt(sum(v * v for v in amp.values()))
    return {k: v / norm for k, v in amp.items()}


def scaled_entropy(amp, N):
    total = 0.0
    for n in range(N):
        z2 = amp[(n, n)] ** 2
        z1 = sum(amp[(n, m)] ** 2 for m in range(n + 1, N)) + sum(amp[(m, n)] ** 2 for m in range(n))
        for p in (1.0 - z1 - z2, z1, z2):
            if p > 0:
                total -= p * math.log2(p)
    return total / N / (2.0 / N * math.log2(N / 2.0))


def ipr(amp, N):
    M = N * (N + 1) // 2
    return 1.0 / (M * sum(v**4 for v in amp.values()))


def spectrum_average(eps, U, t=1.0, periodic=True):
    N = len(eps)
    states = full_grid_symmetric_states(eps, U, t, periodic)
    assert len(states) == N * (N + 1) // 2
    return sum(scaled_entropy(triangle_psi(psi), N) for _, psi in states) / len(states)


def full_grid_symmetric_spectrum(eps, U, t=1.0, periodic=True):
    """Spectrum on the span of (|a,b> + |b,a>)/sqrt(2), a < b, and |a,a>."""
    N = len(eps)
    H = np.zeros((N * N, N * N))
    for a in range(N):
        for b in range(N):
            i = a * N + b
            H[i, i] = eps[a] + eps[b] + (U if a == b else 0.0)
            for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                c, d = a + da, b + db
                if periodic:
                    c, d = c % N, d % N
                elif not (0 <= c < N and 0 <= d < N):
                    continue
                H[i, c * N + d] += t
    cols = []
    for a in range(N):
        for b in range(a, N):
            q = np.zeros(N * N)
            if a == b:
                q[a * N + a] = 1.0
            else:
                q[a * N + b] = q[b * N + a] = 1.0 / math.sqrt(2.0)
            cols.append(q)
    Q = np.array(cols).T
    return np.linalg.eigvalsh(Q.T @ H @ Q), float(np.abs(H).sum(axis=1).max())
