"""System model: domain types, channel composition and achievable rate.

Conventions fixed here once and used everywhere:
  * DFT is the non-unitary N-point DFT, entry (n, k) = exp(-2j*pi*n*k/N)
    (same as ``np.fft.fft``), so Parseval reads sum|v|^2 = N * sum|h|^2.
  * The MCS gap is stored in dB in the config and converted to linear
    exactly once at construction.
  * All complex arithmetic is double precision.
"""

from dataclasses import dataclass, field
import numpy as np

# Feasibility slack for inequality constraints; iterative solvers land
# epsilon-outside boxes.
EPS_FEAS = 1e-9


def _frozen_array(x, dtype) -> np.ndarray:
    a = np.asarray(x, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemConfig:
    """Static system parameters shared by all solver modules."""

    n_sc: int                 # number of OFDM subcarriers N
    m_elems: int              # number of IRS reflecting elements M
    l_direct: int             # direct-link tap count L
    l_reflect: int            # reflected-link tap count L0
    cp_len: int               # cyclic prefix length mu (samples)
    total_power: float = 1.0  # total transmit power P (linear W)
    gap_db: float = 8.8       # MCS gap in dB
    noise_var: float = 1.0    # noise variance sigma^2 (linear)
    q_rand: int = 50          # Gaussian randomization count Q
    seed: int = 0
    tol_outer: float = 1e-6
    tol_inner: float = 1e-7
    max_iters: int = 500

    def __post_init__(self):
        if self.n_sc < 1:
            raise ValueError("n_sc must be >= 1")
        if self.m_elems < 1:
            raise ValueError("m_elems must be >= 1")
        if not (1 <= self.l_direct <= self.n_sc):
            raise ValueError("l_direct must be in [1, n_sc]")
        if not (1 <= self.l_reflect <= self.n_sc):
            raise ValueError("l_reflect must be in [1, n_sc]")
        if self.cp_len < max(self.l_direct, self.l_reflect):
            raise ValueError("cp_len must be >= max(l_direct, l_reflect)")
        if self.total_power <= 0:
            raise ValueError("total_power must be > 0")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be > 0")
        if self.gap_db < 0:
            raise ValueError("gap_db must be >= 0 (linear gap >= 1)")
        if self.q_rand < 1:
            raise ValueError("q_rand must be >= 1")

    @property
    def gap_lin(self) -> float:
        """MCS gap Gamma on a linear scale (>= 1)."""
        return 10.0 ** (self.gap_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """Tap-domain channels of one fading block.

    h_direct:   (L,) direct BS-user taps.
    h_bs_irs:   (L0, M) per-tap BS-IRS vectors, row l = h_l.
    g_irs_user: (L0, M) per-tap IRS-user vectors, row l = g_l.

    Zero-padding to length N is done by consumers, never stored.
    """

    h_direct: np.ndarray
    h_bs_irs: np.ndarray
    g_irs_user: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h_direct",
                           _frozen_array(self.h_direct, np.complex128))
        object.__setattr__(self, "h_bs_irs",
                           _frozen_array(self.h_bs_irs, np.complex128))
        object.__setattr__(self, "g_irs_user",
                           _frozen_array(self.g_irs_user, np.complex128))
        if self.h_direct.ndim != 1:
            raise ValueError("h_direct must be a vector")
        if self.h_bs_irs.ndim != 2 or self.g_irs_user.ndim != 2:
            raise ValueError("h_bs_irs and g_irs_user must be 2-D")
        if self.h_bs_irs.shape != self.g_irs_user.shape:
            raise ValueError("h_bs_irs and g_irs_user shapes differ")
        for a in (self.h_direct, self.h_bs_irs, self.g_irs_user):
            if not np.all(np.isfinite(a)):
                raise ValueError("channel taps must be finite")

    def check_dims(self, cfg: SystemConfig) -> None:
        if self.h_direct.shape != (cfg.l_direct,):
            raise ValueError("h_direct length inconsistent with config")
        if self.h_bs_irs.shape != (cfg.l_reflect, cfg.m_elems):
            raise ValueError("reflected-link shape inconsistent with config")


@dataclass(frozen=True)
class IrsCoefficients:
    """Complex reflection vector phi, per-element magnitude <= 1."""

    phi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phi", _frozen_array(self.phi, np.complex128))
        if self.phi.ndim != 1:
            raise ValueError("phi must be a vector")
        if not np.all(np.isfinite(self.phi)):
            raise ValueError("phi must be finite")
        if np.max(np.abs(self.phi), initial=0.0) > 1.0 + EPS_FEAS:
            raise ValueError("|phi_m| must be <= 1")


@dataclass(frozen=True)
class PowerAllocation:
    """Nonnegative per-subcarrier transmit powers."""

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen_array(self.p, np.float64))
        if self.p.ndim != 1:
            raise ValueError("p must be a vector")
        if not np.all(np.isfinite(self.p)):
            raise ValueError("p must be finite")
        if np.min(self.p, initial=0.0) < -EPS_FEAS:
            raise ValueError("p_n must be >= 0")

    def check_budget(self, cfg: SystemConfig) -> None:
        if self.p.shape != (cfg.n_sc,):
            raise ValueError("p length inconsistent with config")
        if self.p.sum() > cfg.total_power * (1.0 + EPS_FEAS):
            raise ValueError("sum(p) exceeds total power budget")


@dataclass(frozen=True)
class EffectiveChannel:
    """CFR v, the M x N matrix V, and the zero-padded composite CIR."""

    v: np.ndarray
    v_mat: np.ndarray
    cir: np.ndarray


def build_v_matrix(ch: ChannelRealization, cfg: SystemConfig) -> np.ndarray:
    """M x N matrix V with column l = conj(h_l) * g_l for l < L0, zeros after.

    V^H phi equals the reflected CIR for any phi.
    """
    ch.check_dims(cfg)
    v_mat = np.zeros((cfg.m_elems, cfg.n_sc), dtype=np.complex128)
    # nu_l = diag(h_l)^H g_l
    v_mat[:, : cfg.l_reflect] = (np.conj(ch.h_bs_irs) * ch.g_irs_user).T
    return v_mat


def compose_cir(ch: ChannelRealization, phi: IrsCoefficients,
                cfg: SystemConfig) -> np.ndarray:
    """Zero-padded composite CIR h_d + V^H phi, length N."""
    ch.check_dims(cfg)
    if phi.phi.shape != (cfg.m_elems,):
        raise ValueError("phi length inconsistent with config")
    cir = np.zeros(cfg.n_sc, dtype=np.complex128)
    cir[: cfg.l_direct] = ch.h_direct
    # tap l of the reflected link: g_l^H diag(phi) h_l
    cir[: cfg.l_reflect] += (np.conj(ch.g_irs_user) * ch.h_bs_irs) @ phi.phi
    return cir


def cfr(cir: np.ndarray) -> np.ndarray:
    """CFR of a length-N CIR under the non-unitary DFT convention."""
    return np.fft.fft(np.asarray(cir, dtype=np.complex128))


def effective_channel(ch: ChannelRealization, phi: IrsCoefficients,
                      cfg: SystemConfig) -> EffectiveChannel:
    cir = compose_cir(ch, phi, cfg)
    return EffectiveChannel(v=cfr(cir), v_mat=build_v_matrix(ch, cfg), cir=cir)


def cnr(v: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Per-subcarrier channel-to-noise power ratio |v_n|^2 / (Gamma sigma^2)."""
    v = np.asarray(v)
    return (v.real ** 2 + v.imag ** 2) / (cfg.gap_lin * cfg.noise_var)


def sum_log_rate(c: np.ndarray, p: np.ndarray) -> float:
    """Un-normalized sum rate sum_n log2(1 + c_n p_n), in bits."""
    return float(np.sum(np.log2(1.0 + np.asarray(c) * np.asarray(p))))


def objective_p1(p: PowerAllocation, phi: IrsCoefficients,
                 ch: ChannelRealization, cfg: SystemConfig) -> float:
    """The un-normalized rate objective (no CP overhead factor)."""
    v = cfr(compose_cir(ch, phi, cfg))
    return sum_log_rate(cnr(v, cfg), p.p)


def achievable_rate(p: PowerAllocation, phi: IrsCoefficients,
                    ch: ChannelRealization, cfg: SystemConfig) -> float:
    """Achievable rate in bps/Hz, accounting for the CP overhead."""
    p.check_budget(cfg)
    return objective_p1(p, phi, ch, cfg) / (cfg.n_sc + cfg.cp_len)
