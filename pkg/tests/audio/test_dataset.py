import numpy as np
import pytest

from memrc.audio.fsdd import (
    FeatureCache,
    extract_features,
    load_fsdd,
    split_by_speaker,
    split_random,
)
from memrc.audio.wav import write_wav
from memrc.errors import FormatError, IngestionError
from memrc.models.audio import FeatureConfig


def test_load_fsdd(fsdd_dir, tone_clips):
    clips = load_fsdd(fsdd_dir)
    assert len(clips) == len(tone_clips)
    assert {clip.label for clip in clips} == set(range(10))
    assert {clip.speaker for clip in clips} == {"alice", "bob"}


def test_missing_directory(tmp_path):
    with pytest.raises(IngestionError) as e:
        load_fsdd(tmp_path / "nowhere")
    assert e.value.path == str(tmp_path / "nowhere")


def test_directory_without_recordings(tmp_path):
    with pytest.raises(IngestionError):
        load_fsdd(tmp_path)


def test_badly_named_recording(tmp_path):
    write_wav(tmp_path / "hello.wav", np.zeros(10))
    with pytest.raises(FormatError) as e:
        load_fsdd(tmp_path)
    assert e.value.field == "filename"


def test_random_split_is_disjoint_and_seeded(tone_clips):
    train, test = split_random(tone_clips, 0.1, np.random.default_rng(0))
    assert len(test) == 6
    assert len(train) + len(test) == len(tone_clips)
    assert not {c.key for c in train} & {c.key for c in test}
    again, _ = split_random(tone_clips, 0.1, np.random.default_rng(0))
    assert [c.key for c in again] == [c.key for c in train]


def test_random_split_needs_a_proper_fraction(tone_clips):
    with pytest.raises(ValueError):
        split_random(tone_clips, 1.0, np.random.default_rng(0))


def test_speaker_split(tone_clips):
    train, test = split_by_speaker(tone_clips, ["bob"])
    assert {c.speaker for c in test} == {"bob"}
    assert {c.speaker for c in train} == {"alice"}
    with pytest.raises(ValueError):
        split_by_speaker(tone_clips, ["nobody"])


def test_extract_features_keeps_keys(tone_clips):
    clips = tone_clips[:4]
    features = extract_features(clips, FeatureConfig(), max_concurrency=2)
    assert list(features) == [clip.key for clip in clips]
    assert all(matrix.shape == (124, 13) for matrix in features.values())


def test_extract_features_rejects_duplicate_keys(tone_clips):
    with pytest.raises(ValueError):
        extract_features([tone_clips[0], tone_clips[0]], FeatureConfig())


def test_feature_cache_round_trip(tmp_path, tone_clips, mocker):
    cache = FeatureCache(tmp_path / "cache")
    clips = tone_clips[:2]
    first = extract_features(clips, FeatureConfig(), cache=cache)
    assert cache.path_for(clips[0].key).exists()

    spy = mocker.spy(cache, "store")
    second = extract_features(clips, FeatureConfig(), cache=cache)
    spy.assert_not_called()
    for key in first:
        assert second[key] == pytest.approx(first[key], rel=1e-15)


def test_feature_cache_miss(tmp_path):
    assert FeatureCache(tmp_path).load("absent") is None
