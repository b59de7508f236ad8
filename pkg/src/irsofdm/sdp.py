"""Primal-dual interior-point solver for small dense Hermitian SDPs whose
linear constraints act on diagonal entries only:

    maximize    Re Tr(C X)
    subject to  X_ii <= rhs_i   (i in the inequality index set)
                X_jj  = rhs_j   (j in the equality index set)
                X Hermitian PSD.

This is exactly the structure of the channel-power SDR.  The method is an
infeasible-start Mehrotra predictor-corrector with the HKM (dual) scaling;
the Schur complement reduces to an n x n real SPD system because every
constraint matrix is a diagonal unit.
"""

from dataclasses import dataclass
import numpy as np


class SdpSolverError(RuntimeError):
    """Raised on non-convergence; carries the best primal iterate and gap."""

    def __init__(self, msg, x=None, gap=None):
        super().__init__(msg)
        self.x = x
        self.gap = gap


@dataclass(frozen=True)
class DiagSdpResult:
    x: np.ndarray          # primal optimum, Hermitian PSD
    objective: float       # Re Tr(C X)
    dual_objective: float
    gap: float             # normalized duality gap
    compl_residual: float  # <X, Z> / n at the reported optimum
    iterations: int


def _herm(a):
    return 0.5 * (a + a.conj().T)


def _psd_step_length(x, dx, jitter):
    """Largest alpha in (0, 1] keeping x + alpha dx PSD (0.98 fraction)."""
    n = x.shape[0]
    try:
        ell = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        ell = np.linalg.cholesky(x + jitter * np.eye(n))
    t = np.linalg.solve(ell, dx)
    t = np.linalg.solve(ell, t.conj().T)
    lam_min = np.linalg.eigvalsh(_herm(t)).min()
    if lam_min >= 0.0:
        return 1.0
    return min(1.0, -0.98 / lam_min)


def _pos_step_length(v, dv):
    neg = dv < 0.0
    if not np.any(neg):
        return 1.0
    return min(1.0, 0.98 * np.min(-v[neg] / dv[neg]))


def solve_diagonal_sdp(c_mat: np.ndarray, rhs: np.ndarray,
                       is_eq: np.ndarray, gap_tol: float = 1e-6,
                       feas_tol: float = 1e-8,
                       max_iters: int = 100) -> DiagSdpResult:
    c_mat = _herm(np.asarray(c_mat, dtype=np.complex128))
    rhs = np.asarray(rhs, dtype=np.float64)
    is_eq = np.asarray(is_eq, dtype=bool)
    n = c_mat.shape[0]
    if rhs.shape != (n,) or is_eq.shape != (n,):
        raise ValueError("rhs/is_eq must match the matrix order")
    if np.any(rhs < 0.0):
        raise ValueError("diagonal bounds must be nonnegative")
    ineq = ~is_eq
    n_i = int(ineq.sum())
    eye = np.eye(n)

    scale = max(1.0, np.linalg.norm(c_mat), rhs.max(initial=0.0))
    x = scale * np.eye(n, dtype=np.complex128)
    z = scale * np.eye(n, dtype=np.complex128)
    lam = np.where(ineq, scale, 0.0)   # duals of the diagonal constraints
    s = np.full(n_i, scale)            # slacks of the inequality rows

    best_x, best_gap = x, np.inf
    for it in range(1, max_iters + 1):
        diag_x = np.real(np.diag(x))
        rp = rhs - diag_x
        rp[ineq] -= s
        rd_mat = np.diag(lam) - c_mat - z               # dual residual
        pobj = float(np.real(np.trace(c_mat @ x)))
        dobj = float(lam @ rhs)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj))
        pinf = np.linalg.norm(rp) / (1.0 + np.linalg.norm(rhs))
        dinf = np.linalg.norm(rd_mat) / (1.0 + np.linalg.norm(c_mat))
        if gap < best_gap:
            best_x, best_gap = x, gap
        if gap <= gap_tol and pinf <= feas_tol and dinf <= feas_tol:
            compl = float(np.real(np.vdot(z, x))) / n
            return DiagSdpResult(x=_herm(x), objective=pobj,
                                 dual_objective=dobj, gap=gap,
                                 compl_residual=compl, iterations=it - 1)

        mu = (float(np.real(np.vdot(z, x))) + float(lam[ineq] @ s)) / (n + n_i)
        z_inv = np.linalg.inv(z)
        # Schur complement of the Newton system: real SPD n x n.
        g_mat = np.real(z_inv * np.conj(x))
        kkt = g_mat.copy()
        kkt[ineq, ineq] += s / lam[ineq]
        kkt += 1e-13 * scale * eye
        zinv_rd_x_diag = np.real(np.diag(z_inv @ rd_mat @ x))

        def solve_newton(rc_mat, rc_s):
            q = np.real(np.diag(z_inv @ rc_mat)) - zinv_rd_x_diag - rp
            q[ineq] += rc_s / lam[ineq]
            dlam = np.linalg.solve(kkt, q)
            dz = np.diag(dlam) + rd_mat
            dx = _herm(z_inv @ (rc_mat - dz @ x))
            ds = (rc_s - s * dlam[ineq]) / lam[ineq]
            return dx, dz, dlam, ds

        jitter = 1e-12 * scale
        # Predictor (affine scaling).
        dx_a, dz_a, dlam_a, ds_a = solve_newton(-z @ x, -lam[ineq] * s)
        ap = min(_psd_step_length(x, dx_a, jitter), _pos_step_length(s, ds_a))
        ad = min(_psd_step_length(z, dz_a, jitter),
                 _pos_step_length(lam[ineq], dlam_a[ineq]))
        mu_aff = (float(np.real(np.vdot(z + ad * dz_a, x + ap * dx_a)))
                  + float((lam[ineq] + ad * dlam_a[ineq]) @ (s + ap * ds_a))) \
            / (n + n_i)
        sigma = min(1.0, max(0.0, (mu_aff / mu)) ** 3)

        # Corrector.
        rc_mat = sigma * mu * eye - z @ x - dz_a @ dx_a
        rc_s = sigma * mu - lam[ineq] * s - dlam_a[ineq] * ds_a
        dx, dz, dlam, ds = solve_newton(rc_mat, rc_s)
        ap = min(_psd_step_length(x, dx, jitter), _pos_step_length(s, ds))
        ad = min(_psd_step_length(z, dz, jitter),
                 _pos_step_length(lam[ineq], dlam[ineq]))
        x = _herm(x + ap * dx)
        s = s + ap * ds
        z = _herm(z + ad * dz)
        lam = lam + ad * dlam

    raise SdpSolverError(
        f"interior-point method did not converge in {max_iters} iterations "
        f"(gap {best_gap:.3e})", x=_herm(best_x), gap=best_gap)
