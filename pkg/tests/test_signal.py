import numpy as np
import pytest

from eigensense.errors import ConfigError
from eigensense.rmt import from_db
from eigensense.signal import (
    ChannelRealization, Hypothesis, ScenarioConfig, complex_noise, draw_channel,
    gaussian_pair, laplace_sym, primary_signal, real_noise, synthesize, uniform_sym,
    unit_energy_channel
)
from eigensense.util import derive_seed, make_rng


class TestNoiseSources:

    def test_gaussian_variance(self):
        re, im = gaussian_pair(make_rng(1), sigma2=2.0, size=10 ** 6)
        assert np.var(re + 1j * im) == pytest.approx(2.0, abs=0.02)

    def test_uniform_mean(self):
        assert np.mean(uniform_sym(make_rng(2), 1.0, 10 ** 6)) == pytest.approx(0.0, abs=0.005)

    def test_identical_seeds_identical_streams(self):
        a = uniform_sym(make_rng(3), 1.0, 100)
        b = uniform_sym(make_rng(3), 1.0, 100)
        assert np.array_equal(a, b)

    def test_laplace_variance(self):
        assert np.var(laplace_sym(make_rng(4), 0.8, 10 ** 6)) == pytest.approx(0.8, rel=0.01)

    @pytest.mark.parametrize('kind', ['gaussian', 'uniform', 'laplace'])
    def test_complex_noise_calibrated(self, kind):
        noise = complex_noise(make_rng(5), kind, 1.7, (1000, 1000))
        assert np.mean(np.abs(noise) ** 2) == pytest.approx(1.7, rel=0.01)
        assert abs(np.mean(noise)) < 0.01

    def test_unknown_noise(self):
        with pytest.raises(ConfigError):
            complex_noise(make_rng(0), 'pink', 1.0, (2, 2))

    @pytest.mark.parametrize('kind', ['gaussian', 'qpsk'])
    def test_signal_unit_power(self, kind):
        s = primary_signal(make_rng(6), kind, 10 ** 5)
        assert np.mean(np.abs(s) ** 2) == pytest.approx(1.0, rel=0.02)

    def test_qpsk_constant_modulus(self):
        s = primary_signal(make_rng(7), 'qpsk', 100)
        assert np.allclose(np.abs(s), 1.0)


class TestChannel:

    def test_fixed_energy(self):
        channel = draw_channel(3, 'fixed', make_rng(0), fixed=(1, 0, 0))
        assert channel.channel_energy == 1.0
        assert channel.K == 3

    def test_unit_energy_channel(self):
        assert ChannelRealization(unit_energy_channel(10)).channel_energy == pytest.approx(1.0)

    def test_rayleigh_mean_energy(self):
        rng = make_rng(8)
        energies = [draw_channel(10, 'rayleigh', rng).channel_energy for _ in range(10 ** 5)]
        assert np.mean(energies) == pytest.approx(1.0, abs=0.02)

    def test_same_seed_same_channel(self):
        a = draw_channel(5, 'rayleigh', make_rng(9))
        b = draw_channel(5, 'rayleigh', make_rng(9))
        assert a.h == b.h

    def test_fixed_needs_gains(self):
        with pytest.raises(ConfigError):
            draw_channel(3, 'fixed', make_rng(0), fixed=(1, 0))

    def test_empty_channel(self):
        with pytest.raises(ConfigError):
            ChannelRealization(())


class TestScenarioConfig:

    def test_rejects_k_above_n(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(K=5, N=4, sigma2=1.0)

    @pytest.mark.parametrize('changes', [
        {'sigma2': 0.0},
        {'noise_kind': 'pink'},
        {'signal_kind': 'ofdm'},
        {'fading': 'rician'},
        {'seed': -1},
        {'seed': 2 ** 64},
        {'fading': 'fixed'},
    ])
    def test_invalid(self, changes):
        params = {'K': 2, 'N': 4, 'sigma2': 1.0, **changes}
        with pytest.raises(ConfigError):
            ScenarioConfig(**params)

    def test_hypothesis_from_text(self):
        assert ScenarioConfig(K=2, N=4, sigma2=1.0, hypothesis='H1').hypothesis is Hypothesis.H1

    def test_dict_round_trip(self):
        config = ScenarioConfig(K=2, N=4, sigma2=0.5, hypothesis=Hypothesis.H1, fading='fixed',
                                channel=(1 + 1j, 0.5), seed=17)
        assert ScenarioConfig.from_dict(config.to_dict()) == config
        assert ScenarioConfig.from_dict(config.to_dict()).digest() == config.digest()

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict({'K': 2, 'N': 4, 'sigma2': 1.0, 'snr': 3})

    def test_digest_depends_on_seed(self):
        a = ScenarioConfig(K=2, N=4, sigma2=1.0, seed=1)
        b = ScenarioConfig(K=2, N=4, sigma2=1.0, seed=2)
        assert a.digest() != b.digest()


class TestSynthesize:

    def test_h0_noise_power(self):
        obs = synthesize(ScenarioConfig(K=10, N=1000, sigma2=1.0, seed=1))
        assert np.mean(np.abs(obs.Y) ** 2) == pytest.approx(1.0, abs=0.05)
        assert obs.truth is Hypothesis.H0
        assert obs.channel is None
        assert (obs.K, obs.N) == (10, 1000)

    def test_noiseless_h1(self):
        config = ScenarioConfig(K=3, N=50, sigma2=1e-12, hypothesis=Hypothesis.H1,
                                fading='fixed', channel=(1, 0, 0), seed=2)
        obs = synthesize(config)
        assert np.allclose(obs.Y[1:], 0, atol=1e-5)
        assert obs.channel.channel_energy == 1.0

    def test_noiseless_h1_row_is_signal(self):
        config = ScenarioConfig(K=3, N=50, sigma2=1e-12, hypothesis=Hypothesis.H1,
                                fading='fixed', channel=(1, 0, 0), seed=3)
        obs = synthesize(config)

        # Same draw order as synthesize: the fixed channel draws nothing
        rng = make_rng(3)
        s = primary_signal(rng, 'gaussian', 50)
        assert np.allclose(obs.Y[0], s, atol=1e-5)

    def test_channel_constant_over_block(self):
        config = ScenarioConfig(K=4, N=200, sigma2=1e-12, hypothesis=Hypothesis.H1, seed=4)
        obs = synthesize(config)
        # Rank one up to the noise floor: every column is a multiple of h
        singular = np.linalg.svd(obs.Y, compute_uv=False)
        assert singular[1] / singular[0] < 1e-4

    def test_minus_five_db_scenario(self):
        sigma2 = 1 / from_db(-5)
        config = ScenarioConfig(K=10, N=100, sigma2=sigma2, hypothesis=Hypothesis.H1,
                                fading='fixed', channel=unit_energy_channel(10))
        obs = synthesize(config)
        assert obs.channel.channel_energy / sigma2 == pytest.approx(from_db(-5))

    def test_deterministic(self):
        config = ScenarioConfig(K=4, N=20, sigma2=1.0, hypothesis=Hypothesis.H1, seed=99)
        assert np.array_equal(synthesize(config).Y, synthesize(config).Y)

    def test_digest_recorded(self):
        config = ScenarioConfig(K=2, N=5, sigma2=1.0, seed=derive_seed(1, 2, 3))
        assert synthesize(config).config_digest == config.digest()


class TestRealSamples:

    @pytest.mark.parametrize('kind', ['gaussian', 'uniform', 'laplace'])
    def test_real_noise_variance(self, kind):
        noise = real_noise(make_rng(20), kind, 2.0, (10 ** 6,))
        assert np.isrealobj(noise)
        assert np.mean(noise) == pytest.approx(0.0, abs=0.01)
        assert np.var(noise) == pytest.approx(2.0, rel=0.02)

    def test_real_qpsk_is_bpsk(self):
        s = primary_signal(make_rng(21), 'qpsk', 1000, samples='real')
        assert set(np.unique(s)) == {-1.0, 1.0}

    def test_real_rayleigh_gains(self):
        channel = draw_channel(10 ** 5, 'rayleigh', make_rng(22), samples='real')
        h = channel.as_array()
        assert np.all(h.imag == 0)
        assert np.mean(np.abs(h) ** 2) * 10 ** 5 == pytest.approx(1.0, rel=0.02)

    @pytest.mark.parametrize('hypothesis', ['H0', 'H1'])
    def test_synthesize_real(self, hypothesis):
        config = ScenarioConfig(K=10, N=1000, sigma2=1.0, hypothesis=hypothesis, seed=23,
                                samples='real')
        obs = synthesize(config)
        assert np.all(obs.Y.imag == 0)
        if hypothesis == 'H0':
            assert np.mean(obs.Y.real ** 2) == pytest.approx(1.0, abs=0.05)

    def test_unknown_samples(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(K=2, N=4, sigma2=1.0, samples='quaternion')

    def test_samples_change_the_digest(self):
        complex_config = ScenarioConfig(K=2, N=4, sigma2=1.0)
        real_config = ScenarioConfig(K=2, N=4, sigma2=1.0, samples='real')
        assert complex_config.digest() != real_config.digest()
