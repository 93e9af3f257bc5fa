import numpy as np
import pytest

import memrc.tasks.fsdd
from memrc.errors import ConfigError, IngestionError
from memrc.models.audio import FeatureConfig
from memrc.models.readout import LossType, TrainConfig
from memrc.models.reservoir import ReservoirConfig
from memrc.models.tasks import FsddConfig, FsddExperimentConfig
from memrc.tasks.fsdd import add_noise, resolve_data_dir, run_fsdd_experiment, split_clips


def _config(**fsdd) -> FsddExperimentConfig:
    return FsddExperimentConfig(
        reservoir=ReservoirConfig(averaging_runs=2),
        train=TrainConfig(epochs=20, hidden_sizes=[32], batch_size=8),
        fsdd=FsddConfig(**fsdd),
    )


def test_run_on_tone_clips(tone_clips, mocker):
    spy = mocker.spy(memrc.tasks.fsdd, "fit_normalizer")
    result = run_fsdd_experiment(_config(), clips=tone_clips)
    metrics = result.metrics
    assert metrics.num_train == 54
    assert metrics.num_test == 6
    assert np.sum(metrics.confusion) == 6
    assert metrics.wer == pytest.approx(1 - metrics.accuracy)
    assert len(result.history.epochs) == 20
    # the normalizer only ever sees training clips
    spy.assert_called_once()
    assert len(spy.call_args.args[0]) == 54


def test_runs_are_reproducible(tone_clips):
    first = run_fsdd_experiment(_config(), clips=tone_clips)
    second = run_fsdd_experiment(_config(), clips=tone_clips)
    assert first.metrics == second.metrics


def test_speaker_split(tone_clips):
    config = _config(split="speaker", test_speakers=["bob"])
    train, test = split_clips(tone_clips, config)
    assert {clip.speaker for clip in test} == {"bob"}
    assert len(train) == len(test) == 30


def test_loads_from_the_data_directory(fsdd_dir):
    config = _config(data_dir=str(fsdd_dir))
    config.train.epochs = 1
    assert run_fsdd_experiment(config).metrics.num_test == 6


def test_feature_cache_is_used_for_clean_audio(tone_clips, tmp_path):
    cache_dir = tmp_path / "features"
    run_fsdd_experiment(
        _config(features=FeatureConfig(cache_dir=str(cache_dir))), clips=tone_clips[:20]
    )
    assert len(list(cache_dir.glob("*.csv"))) == 20


def test_noisy_audio_skips_the_cache(tone_clips, tmp_path):
    cache_dir = tmp_path / "features"
    config = _config(features=FeatureConfig(cache_dir=str(cache_dir)), noise_sigma=0.05)
    run_fsdd_experiment(config, clips=tone_clips[:20])
    assert not cache_dir.exists()


def test_noise_reaches_every_clip(tone_clips):
    noisy = add_noise(tone_clips, 0.01, seed=0)
    assert all(not np.array_equal(a.samples, b.samples) for a, b in zip(tone_clips, noisy))
    assert add_noise(tone_clips, 0.0, seed=0) == list(tone_clips)
    again = add_noise(tone_clips, 0.01, seed=0)
    assert all(np.array_equal(a.samples, b.samples) for a, b in zip(noisy, again))


def test_classification_needs_cross_entropy(tone_clips):
    config = _config()
    config.train.loss = LossType.MSE
    with pytest.raises(ConfigError):
        run_fsdd_experiment(config, clips=tone_clips)


def test_missing_data_directory(mock_env):
    with pytest.raises(IngestionError) as e:
        resolve_data_dir(_config())
    assert e.value.path == "MEMRC_DATA"


def test_data_directory_from_environment(mock_env, monkeypatch):
    monkeypatch.setenv("MEMRC_DATA", "/srv/fsdd")
    assert str(resolve_data_dir(_config())) == "/srv/fsdd"


@pytest.mark.slow
def test_acceptance_accuracy(fsdd_root):
    config = FsddExperimentConfig(fsdd=FsddConfig(data_dir=str(fsdd_root)))
    assert run_fsdd_experiment(config).metrics.accuracy >= 0.8


@pytest.mark.slow
def test_acceptance_accuracy_trends_up(fsdd_root):
    config = FsddExperimentConfig(fsdd=FsddConfig(data_dir=str(fsdd_root)))
    history = run_fsdd_experiment(config).history
    curve = np.array([record.eval_metric for record in history.epochs])
    smoothed = np.convolve(curve, np.ones(5) / 5, mode="valid")
    assert smoothed[-1] >= smoothed[0]
    assert np.polyfit(np.arange(smoothed.size), smoothed, 1)[0] >= 0
    # the moving average never falls far below its running best
    assert (np.maximum.accumulate(smoothed) - smoothed).max() <= 0.05
