"""Dense Hermitian eigendecomposition via cyclic complex Jacobi rotations.

Intended for the small matrices this package produces (order <= ~100).
Eigenvalues are returned in descending order with the matching unitary
eigenvector columns.
"""

import numpy as np


def eigh_hermitian(a: np.ndarray, tol: float = 1e-14,
                   max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, v) with w real descending and a @ v[:, i] = w[i] * v[:, i].
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > 1e-10 * max(1.0, norm):
        raise ValueError("matrix is not Hermitian")
    mat = 0.5 * (a + a.conj().T)
    vec = np.eye(n, dtype=np.complex128)
    if n == 1 or norm == 0.0:
        return mat.real.diagonal().copy(), vec

    for _ in range(max_sweeps):
        off = np.linalg.norm(mat - np.diag(np.diag(mat)))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = mat[p, q]
                mag = abs(apq)
                if mag <= 0.25 * tol * norm / n:
                    continue
                phase = apq / mag
                app = mat[p, p].real
                aqq = mat[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Plane rotation J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                # applied as A <- J^H A J on the (p, q) plane.
                col_p = mat[:, p].copy()
                col_q = mat[:, q] * np.conj(phase)
                mat[:, p] = c * col_p - s * col_q
                mat[:, q] = s * col_p + c * col_q
                row_p = mat[p, :].copy()
                row_q = mat[q, :] * phase
                mat[p, :] = c * row_p - s * row_q
                mat[q, :] = s * row_p + c * row_q
                mat[p, q] = 0.0
                mat[q, p] = 0.0
                mat[p, p] = mat[p, p].real
                mat[q, q] = mat[q, q].real
                vcol_p = vec[:, p].copy()
                vcol_q = vec[:, q] * np.conj(phase)
                vec[:, p] = c * vcol_p - s * vcol_q
                vec[:, q] = s * vcol_p + c * vcol_q

    w = mat.real.diagonal().copy()
    order = np.argsort(-w, kind="stable")
    return w[order], vec[:, order]
