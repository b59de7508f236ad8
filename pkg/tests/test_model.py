import numpy as np
import pytest

from irsofdm.model import (SystemConfig, ChannelRealization, IrsCoefficients,
                           PowerAllocation, build_v_matrix, compose_cir, cfr,
                           effective_channel, cnr, sum_log_rate,
                           achievable_rate, objective_p1)
from conftest import small_config, desk_config, random_channel


def test_config_invariants():
    cfg = desk_config()
    assert cfg.gap_lin == pytest.approx(10.0 ** 0.88)
    with pytest.raises(ValueError):
        SystemConfig(n_sc=0, m_elems=1, l_direct=1, l_reflect=1, cp_len=1)
    with pytest.raises(ValueError):
        desk_config(cp_len=10)  # shorter than the channel
    with pytest.raises(ValueError):
        desk_config(total_power=0.0)
    with pytest.raises(ValueError):
        desk_config(l_direct=65)
    with pytest.raises(ValueError):
        desk_config(gap_db=-1.0)


def test_config_frozen():
    cfg = desk_config()
    with pytest.raises(Exception):
        cfg.n_sc = 32


def test_phi_magnitude_checked():
    IrsCoefficients(np.exp(1j * np.linspace(0, 6, 5)))
    with pytest.raises(ValueError):
        IrsCoefficients(np.array([1.1 + 0j]))
    with pytest.raises(ValueError):
        IrsCoefficients(np.array([np.nan + 0j]))


def test_power_allocation_checked():
    cfg = small_config()
    p = PowerAllocation(np.full(cfg.n_sc, cfg.total_power / cfg.n_sc))
    p.check_budget(cfg)
    with pytest.raises(ValueError):
        PowerAllocation(np.array([-1.0]))
    bad = PowerAllocation(np.full(cfg.n_sc, 1.0))
    with pytest.raises(ValueError):
        bad.check_budget(cfg)


def test_channel_dim_checks(rng):
    cfg = small_config()
    ch = random_channel(cfg, rng)
    ch.check_dims(cfg)
    with pytest.raises(ValueError):
        ch.check_dims(small_config(m_elems=5))
    with pytest.raises(ValueError):
        ChannelRealization(h_direct=np.ones((2, 2)),
                           h_bs_irs=np.ones((2, 2)),
                           g_irs_user=np.ones((2, 2)))


def test_compose_cir_matches_direct_sum(rng):
    """Tap l of the composite CIR is h_dl + sum_m phi_m conj(g_lm) h_lm."""
    cfg = small_config()
    ch = random_channel(cfg, rng)
    phi = IrsCoefficients(np.exp(1j * rng.uniform(0, 2 * np.pi, cfg.m_elems)))
    cir = compose_cir(ch, phi, cfg)
    for l in range(cfg.n_sc):
        want = ch.h_direct[l] if l < cfg.l_direct else 0.0
        if l < cfg.l_reflect:
            want += sum(phi.phi[m] * np.conj(ch.g_irs_user[l, m])
                        * ch.h_bs_irs[l, m] for m in range(cfg.m_elems))
        assert cir[l] == pytest.approx(want, abs=1e-12)


def test_v_matrix_reproduces_reflected_cir(rng):
    cfg = small_config()
    ch = random_channel(cfg, rng)
    phi = IrsCoefficients(0.7 * np.exp(1j * rng.uniform(0, 7, cfg.m_elems)))
    v_mat = build_v_matrix(ch, cfg)
    direct = np.zeros(cfg.n_sc, dtype=complex)
    direct[: cfg.l_direct] = ch.h_direct
    np.testing.assert_allclose(compose_cir(ch, phi, cfg),
                               direct + v_mat.conj().T @ phi.phi,
                               atol=1e-12)


def test_cfr_is_nonunitary_dft(rng):
    cfg = small_config()
    cir = rng.standard_normal(cfg.n_sc) + 1j * rng.standard_normal(cfg.n_sc)
    v = cfr(cir)
    n = cfg.n_sc
    f = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    np.testing.assert_allclose(v, f @ cir, atol=1e-10)
    # Parseval under this convention
    assert np.sum(np.abs(v) ** 2) == pytest.approx(
        n * np.sum(np.abs(cir) ** 2))


def test_cnr_and_rate(rng):
    cfg = small_config(gap_db=3.0, noise_var=0.5)
    ch = random_channel(cfg, rng)
    phi = IrsCoefficients(np.ones(cfg.m_elems, dtype=complex))
    eff = effective_channel(ch, phi, cfg)
    c = cnr(eff.v, cfg)
    np.testing.assert_allclose(
        c, np.abs(eff.v) ** 2 / (10 ** 0.3 * 0.5), rtol=1e-12)
    p = PowerAllocation(np.full(cfg.n_sc, cfg.total_power / cfg.n_sc))
    rate = achievable_rate(p, phi, ch, cfg)
    assert rate == pytest.approx(
        sum_log_rate(c, p.p) / (cfg.n_sc + cfg.cp_len))
    assert objective_p1(p, phi, ch, cfg) == pytest.approx(
        rate * (cfg.n_sc + cfg.cp_len))


def test_zero_phi_reduces_to_direct_link(rng):
    cfg = small_config()
    ch = random_channel(cfg, rng)
    phi = IrsCoefficients(np.zeros(cfg.m_elems, dtype=complex))
    cir = compose_cir(ch, phi, cfg)
    np.testing.assert_allclose(cir[: cfg.l_direct], ch.h_direct)
    assert np.all(cir[cfg.l_direct:] == 0)
