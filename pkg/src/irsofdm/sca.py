"""Successive convex approximation for the IRS coefficients, fixed powers.

The non-concave per-subcarrier term |v_n(phi)|^2 is minorized by its
first-order expansion around the current CFR (a_tilde + j b_tilde).  After
eliminating the auxiliary variables (the bound is tight at the optimum and
the CFR is affine in phi), each inner problem is a smooth concave
maximization over a product of unit disks, solved by projected gradient
ascent with a Barzilai-Borwein step and Armijo backtracking.
"""

from dataclasses import dataclass
import numpy as np

from .model import (SystemConfig, ChannelRealization, IrsCoefficients,
                    PowerAllocation, build_v_matrix, cfr)

_LN2 = np.log(2.0)
_ARMIJO = 1e-4
_MAX_OUTER = 100  # SCA linearization rounds


@dataclass(frozen=True)
class InnerResult:
    phi: IrsCoefficients
    converged: bool
    iterations: int
    grad_norm: float


@dataclass(frozen=True)
class ScaResult:
    phi: IrsCoefficients
    objective_trace: np.ndarray  # true un-normalized objective per iterate
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    converged: bool
    inner_iterations: int


def _cfr_affine_parts(ch: ChannelRealization, cfg: SystemConfig):
    """(d, B) with v(phi) = d + B phi; d = F h_d, B = F V^H."""
    h_d = np.zeros(cfg.n_sc, dtype=np.complex128)
    h_d[: cfg.l_direct] = ch.h_direct
    d = cfr(h_d)
    b_mat = np.fft.fft(build_v_matrix(ch, cfg).conj().T, axis=0)
    return d, b_mat


def _project_disks(phi: np.ndarray) -> np.ndarray:
    mag = np.abs(phi)
    return phi / np.maximum(1.0, mag)


def linearize(phi: IrsCoefficients, ch: ChannelRealization,
              cfg: SystemConfig):
    """Real and imaginary parts of the CFR at phi (the linearization point)."""
    d, b_mat = _cfr_affine_parts(ch, cfg)
    c = d + b_mat @ phi.phi
    return c.real.copy(), c.imag.copy()


def surrogate_value_and_grad(phi: np.ndarray, c_tilde: np.ndarray,
                             d: np.ndarray, b_mat: np.ndarray,
                             k: np.ndarray):
    """Value and complex gradient of the substituted inner objective.

    The objective is sum_n log2(1 + k_n * f_n(phi)) with the affine
    minorant f_n = 2 Re(conj(c_tilde_n) v_n(phi)) - |c_tilde_n|^2, guarded
    below by -1/(2 k_n) so the log argument stays >= 1/2.  The returned
    gradient g is the complex representation of the real gradient:
    the directional derivative along delta is Re(g^H delta).
    """
    c = d + b_mat @ phi
    f = 2.0 * (c_tilde.real * c.real + c_tilde.imag * c.imag) \
        - (c_tilde.real ** 2 + c_tilde.imag ** 2)
    active = k > 0.0
    lower = np.where(active, -0.5 / np.maximum(k, 1e-300), -np.inf)
    f_hat = np.maximum(f, lower)
    arg = 1.0 + k * f_hat
    val = float(np.sum(np.log2(arg[active]))) if np.any(active) else 0.0
    w = np.where(active & (f > lower), k / (arg * _LN2), 0.0)
    grad = 2.0 * (b_mat.conj().T @ (w * c_tilde))
    return val, grad


def _true_objective(phi: np.ndarray, d: np.ndarray, b_mat: np.ndarray,
                    k: np.ndarray) -> float:
    c = d + b_mat @ phi
    return float(np.sum(np.log2(1.0 + k * (c.real ** 2 + c.imag ** 2))))


def solve_p12(a_tilde: np.ndarray, b_tilde: np.ndarray, p: PowerAllocation,
              ch: ChannelRealization, cfg: SystemConfig,
              phi_start: IrsCoefficients | None = None) -> InnerResult:
    """Maximize the linearized rate objective over the unit disks."""
    d, b_mat = _cfr_affine_parts(ch, cfg)
    return _solve_p12_impl(np.asarray(a_tilde) + 1j * np.asarray(b_tilde),
                           p.p / (cfg.gap_lin * cfg.noise_var), d, b_mat, cfg,
                           None if phi_start is None else phi_start.phi)


def _solve_p12_impl(c_tilde, k, d, b_mat, cfg, phi0) -> InnerResult:
    m = b_mat.shape[1]
    phi = np.zeros(m, dtype=np.complex128) if phi0 is None \
        else _project_disks(phi0.astype(np.complex128))
    if not np.any(k > 0.0):
        # Constant objective: any feasible phi is optimal.
        return InnerResult(IrsCoefficients(phi), True, 0, 0.0)

    val, grad = surrogate_value_and_grad(phi, c_tilde, d, b_mat, k)
    step = 1.0
    gmap = np.linalg.norm(phi - _project_disks(phi + grad))
    it = 0
    while it < cfg.max_iters and gmap > cfg.tol_inner:
        it += 1
        # Armijo backtracking on the projected step.
        accepted = False
        alpha = step
        for _ in range(60):
            cand = _project_disks(phi + alpha * grad)
            dphi = cand - phi
            decr = float(np.real(np.vdot(grad, dphi)))
            if decr <= 0.0:
                break
            val_new, grad_new = surrogate_value_and_grad(
                cand, c_tilde, d, b_mat, k)
            if val_new >= val + _ARMIJO * decr:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
        # Barzilai-Borwein step for the next iteration.
        s = cand - phi
        y = grad_new - grad
        denom = -float(np.real(np.vdot(y, s)))
        step = float(np.real(np.vdot(s, s))) / denom if denom > 1e-300 \
            else min(alpha * 2.0, 1e6)
        phi, val, grad = cand, val_new, grad_new
        gmap = np.linalg.norm(phi - _project_disks(phi + grad))

    return InnerResult(IrsCoefficients(_project_disks(phi)),
                       gmap <= cfg.tol_inner, it, float(gmap))


def run_sca(phi_init: IrsCoefficients, p: PowerAllocation,
            ch: ChannelRealization, cfg: SystemConfig) -> ScaResult:
    """Alternate linearization and inner solves until the true objective
    stops improving (relative change below tol_outer)."""
    d, b_mat = _cfr_affine_parts(ch, cfg)
    k = p.p / (cfg.gap_lin * cfg.noise_var)

    phi = phi_init.phi
    trace = [_true_objective(phi, d, b_mat, k)]
    converged = True
    inner_total = 0
    for _ in range(_MAX_OUTER):
        c_tilde = d + b_mat @ phi
        inner = _solve_p12_impl(c_tilde, k, d, b_mat, cfg, phi)
        inner_total += inner.iterations
        converged = converged and inner.converged
        phi_new = inner.phi.phi
        obj_new = _true_objective(phi_new, d, b_mat, k)
        improved = obj_new - trace[-1]
        phi = phi_new
        trace.append(obj_new)
        if improved <= cfg.tol_outer * max(1.0, abs(trace[-2])):
            break
    c_final = d + b_mat @ phi
    return ScaResult(phi=IrsCoefficients(phi),
                     objective_trace=np.asarray(trace),
                     a_tilde=c_final.real.copy(), b_tilde=c_final.imag.copy(),
                     converged=converged, inner_iterations=inner_total)
