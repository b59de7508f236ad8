"""Channel-power-maximizing initialization of the IRS coefficients.

Maximizing ||h_d + V^H phi||^2 over the unit disks is a non-convex QCQP;
it is lifted to a semidefinite program over W = w w^H with w = [phi, u],
solved by the interior-point method in :mod:`irsofdm.sdp`, and a feasible
phi is recovered either directly (numerically rank-one W) or by Gaussian
randomization with unit-modulus phase extraction.
"""

from dataclasses import dataclass
import numpy as np

from .model import (SystemConfig, ChannelRealization, IrsCoefficients,
                    build_v_matrix, compose_cir)
from .linalg import eigh_hermitian
from .sdp import solve_diagonal_sdp

_RANK1_RATIO = 1e-6     # lambda_2 / lambda_1 threshold for the rank-one branch
_ZERO_DIAG = 1e-25      # |u_m|^2 below this (relative) is eliminated exactly


@dataclass(frozen=True)
class QcqpData:
    a_mat: np.ndarray  # A = V V^H, Hermitian PSD, M x M
    u_vec: np.ndarray  # u = V h_d (h_d zero-padded to N)
    big_m: np.ndarray  # [[A, I], [I, 0]], Hermitian 2M x 2M


@dataclass(frozen=True)
class SdrSolution:
    w_mat: np.ndarray       # W*, Hermitian PSD 2M x 2M
    upper_block: np.ndarray  # upper-left M x M submatrix
    rank1: bool
    sdp_objective: float
    gap: float = 0.0         # normalized duality gap reported by the solver


def build_qcqp(ch: ChannelRealization, cfg: SystemConfig) -> QcqpData:
    v_mat = build_v_matrix(ch, cfg)
    h_d = np.zeros(cfg.n_sc, dtype=np.complex128)
    h_d[: cfg.l_direct] = ch.h_direct
    a_mat = v_mat @ v_mat.conj().T
    a_mat = 0.5 * (a_mat + a_mat.conj().T)
    u_vec = v_mat @ h_d
    m = cfg.m_elems
    big_m = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    big_m[:m, :m] = a_mat
    big_m[:m, m:] = np.eye(m)
    big_m[m:, :m] = np.eye(m)
    return QcqpData(a_mat=a_mat, u_vec=u_vec, big_m=big_m)


def channel_power(phi: IrsCoefficients, ch: ChannelRealization,
                  cfg: SystemConfig) -> float:
    """Effective channel power ||h_d + V^H phi||^2 (time domain)."""
    cir = compose_cir(ch, phi, cfg)
    return float(np.real(np.vdot(cir, cir)))


def solve_sdr(q: QcqpData, cfg: SystemConfig) -> SdrSolution:
    """Solve the lifted channel-power SDP.

    Constraints: W_mm <= 1 for the phi block, W_{M+m,M+m} = |u_m|^2 for
    the u block (the lift w = [phi, u] fixes those diagonals), W PSD.
    Rows whose |u_m|^2 is numerically zero are eliminated beforehand: PSD
    forces the whole row to vanish there.
    """
    m = q.a_mat.shape[0]
    d = np.abs(q.u_vec) ** 2
    keep_u = d > _ZERO_DIAG * (1.0 + d.max(initial=0.0))
    idx = np.concatenate([np.arange(m), m + np.flatnonzero(keep_u)])
    c_sub = q.big_m[np.ix_(idx, idx)]
    # Rescale the u block so every equality diagonal becomes 1 (W = D W' D
    # with D = diag(1, sqrt(d))); the raw d values span many decades and
    # would otherwise starve the interior-point method of centrality.
    scale = np.concatenate([np.ones(m), np.sqrt(d[keep_u])])
    c_sub = c_sub * np.outer(scale, scale)
    rhs = np.ones(idx.size)
    is_eq = np.zeros(idx.size, dtype=bool)
    is_eq[m:] = True

    res = solve_diagonal_sdp(c_sub, rhs, is_eq)

    w_full = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    w_full[np.ix_(idx, idx)] = res.x * np.outer(scale, scale)
    evals, _ = eigh_hermitian(w_full)
    lam1 = max(evals[0], 0.0)
    rank1 = lam1 > 0.0 and (evals.size < 2
                            or max(evals[1], 0.0) <= _RANK1_RATIO * lam1)
    return SdrSolution(w_mat=w_full, upper_block=w_full[:m, :m].copy(),
                       rank1=rank1, sdp_objective=res.objective, gap=res.gap)


def extract_phi(sol: SdrSolution, q: QcqpData, ch: ChannelRealization,
                cfg: SystemConfig, rng: np.random.Generator) -> IrsCoefficients:
    """Recover a feasible phi from the SDP optimum.

    Rank-one W: read phi off the eigendecomposition of the upper block,
    clipping magnitudes to the unit disks.  Otherwise draw Q Gaussian
    candidates, map each to unit modulus by phase extraction, and keep the
    one with the largest channel power (ties to the earliest draw).
    """
    m = q.a_mat.shape[0]
    evals, evecs = eigh_hermitian(sol.upper_block)
    lam = np.sqrt(np.maximum(evals, 0.0))

    if sol.rank1:
        phi = evecs[:, 0] * lam[0]
        phi = phi / np.maximum(1.0, np.abs(phi))
        # The eigenvector leaves a global phase free, and the linear term
        # of the channel-power objective is not phase invariant: rotate so
        # phi^H u is real positive.
        t = np.vdot(phi, q.u_vec)
        if abs(t) > 0.0:
            phi = phi * np.exp(1j * np.angle(t))
        return IrsCoefficients(phi)

    root = evecs * lam  # U Lambda^{1/2}
    best_phi = None
    best_power = -np.inf
    for _ in range(cfg.q_rand):
        r = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) \
            / np.sqrt(2.0)
        cand = np.exp(1j * np.angle(root @ r))
        power = channel_power(IrsCoefficients(cand), ch, cfg)
        if power > best_power:
            best_phi, best_power = cand, power
    return IrsCoefficients(best_phi)


def initial_coefficients(ch: ChannelRealization, cfg: SystemConfig,
                         rng: np.random.Generator) -> IrsCoefficients:
    """Full initialization pipeline: lift, solve the SDP, extract phi_0."""
    q = build_qcqp(ch, cfg)
    if not np.any(np.abs(q.a_mat) > 0.0) and not np.any(np.abs(q.u_vec) > 0.0):
        # No reflected link: any feasible phi is equivalent.
        return IrsCoefficients(np.zeros(cfg.m_elems, dtype=np.complex128))
    sol = solve_sdr(q, cfg)
    return extract_phi(sol, q, ch, cfg, rng)
