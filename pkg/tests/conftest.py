import numpy as np
import pytest

from irsofdm.model import SystemConfig, ChannelRealization
from irsofdm.harness import ChannelGenSpec, generate_channel, noise_variance


def desk_config(**overrides) -> SystemConfig:
    """The N=64, M=20 configuration used throughout the benchmark runs."""
    kw = dict(n_sc=64, m_elems=20, l_direct=16, l_reflect=16, cp_len=16)
    kw.update(overrides)
    return SystemConfig(**kw)


def small_config(**overrides) -> SystemConfig:
    kw = dict(n_sc=8, m_elems=4, l_direct=4, l_reflect=4, cp_len=4)
    kw.update(overrides)
    return SystemConfig(**kw)


def random_channel(cfg: SystemConfig, rng) -> ChannelRealization:
    """Dense CSCG channel draw, no sparsity or decay profile."""
    def cn(*shape):
        return (rng.standard_normal(shape)
                + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return ChannelRealization(h_direct=cn(cfg.l_direct),
                              h_bs_irs=cn(cfg.l_reflect, cfg.m_elems),
                              g_irs_user=cn(cfg.l_reflect, cfg.m_elems))


def protocol_channel(cfg: SystemConfig, rng, **chan_kw):
    """Channel draw with the benchmark statistics (taps, decay, alpha)."""
    spec = ChannelGenSpec(**chan_kw)
    return generate_channel(spec, cfg, rng)


def snr_config(chan_spec: ChannelGenSpec, **overrides) -> SystemConfig:
    cfg = desk_config(**overrides)
    return SystemConfig(**{**{f: getattr(cfg, f) for f in
                              cfg.__dataclass_fields__},
                           "noise_var": noise_variance(chan_spec, cfg)})


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
