import numpy as np
import pytest
from pydantic.v1 import ValidationError

from memrc.device.volatile import build_lookup_table
from memrc.errors import EmptyInputError, InputShapeError, InternalConsistencyError
from memrc.models.device import VolatileDeviceParams
from memrc.models.reservoir import Pooling, ReservoirConfig, ReservoirLookup, StateReads
from memrc.reservoir.mask import random_mask
from memrc.reservoir.reservoir import Reservoir, pool_over_frames, reservoir_forward

NOISELESS = VolatileDeviceParams().noiseless()


@pytest.fixture(scope="module")
def lookup() -> ReservoirLookup:
    return build_lookup_table(NOISELESS, averaging_runs=1)


@pytest.fixture(scope="module")
def reservoir() -> Reservoir:
    return Reservoir.build(ReservoirConfig(averaging_runs=2), VolatileDeviceParams(), 13, seed=0)


def test_forward_concatenates_node_states(lookup):
    state = reservoir_forward([3] * 8, [lookup] * 8)
    assert state.shape == (32,)
    assert (state == np.tile(lookup.row(3), 8)).all()


def test_forward_all_zero_codes_give_minimum_row(lookup):
    state = reservoir_forward([0, 0], [lookup, lookup])
    assert (state == 0.0).all()


def test_forward_distinct_codes_give_distinct_states(lookup):
    rows = {tuple(reservoir_forward([code], [lookup])) for code in range(16)}
    assert len(rows) == 16


def test_forward_mismatched_lengths(lookup):
    with pytest.raises(InputShapeError):
        reservoir_forward([1, 2], [lookup])


def test_forward_unknown_code(lookup):
    with pytest.raises(InternalConsistencyError):
        reservoir_forward([16], [lookup])


def test_pool_over_frames():
    frames = np.array([[0.0, 0.2], [1.0, 0.4]])
    assert pool_over_frames(frames) == pytest.approx([0.5, 0.3])
    assert pool_over_frames(frames, Pooling.LAST) == pytest.approx([1.0, 0.4])
    single = frames[:1]
    for mode in Pooling:
        assert (pool_over_frames(single, mode) == single[0]).all()
    twice = np.vstack([frames[1], frames[1]])
    assert pool_over_frames(twice) == pytest.approx(frames[1])


def test_pool_over_no_frames():
    with pytest.raises(EmptyInputError):
        pool_over_frames(np.zeros((0, 4)))


def test_config_device_ids_default_to_one_per_node():
    config = ReservoirConfig(num_nodes=3)
    assert config.per_node_device_ids == [0, 1, 2]
    assert config.state_dim == 12
    assert ReservoirConfig(num_nodes=3, state_reads=StateReads.FINAL).state_dim == 3


def test_config_device_ids_must_match_nodes():
    with pytest.raises(ValidationError):
        ReservoirConfig(num_nodes=3, per_node_device_ids=[0, 1])


def test_build_is_deterministic(reservoir):
    again = Reservoir.build(ReservoirConfig(averaging_runs=2), VolatileDeviceParams(), 13, seed=0)
    assert (again.mask.matrix == reservoir.mask.matrix).all()
    for first, second in zip(reservoir.lookups, again.lookups):
        assert (first.table == second.table).all()


def test_build_binds_each_node_to_its_device(reservoir):
    assert [lookup.device_id for lookup in reservoir.lookups] == list(range(8))
    assert not np.array_equal(reservoir.lookups[0].table, reservoir.lookups[1].table)


def test_shared_device_ids_share_a_table():
    config = ReservoirConfig(num_nodes=3, per_node_device_ids=[4, 4, 2], averaging_runs=1)
    reservoir = Reservoir.build(config, VolatileDeviceParams(), 5, seed=1)
    assert reservoir.lookups[0] is reservoir.lookups[1]


def test_transform_matches_forward(reservoir, rng):
    frames = rng.random((7, 13))
    states = reservoir.transform(frames)
    assert states.shape == (7, 32)
    codes = reservoir.encode(frames)
    for row, frame_codes in zip(states, codes):
        assert (row == reservoir_forward(frame_codes, reservoir.lookups)).all()
    assert states.min() >= 0.0
    assert states.max() <= 1.0


def test_features_pool_the_transform(reservoir, rng):
    frames = rng.random((7, 13))
    assert reservoir.features(frames) == pytest.approx(reservoir.transform(frames).mean(axis=0))


def test_final_reads_only(rng):
    config = ReservoirConfig(num_nodes=4, state_reads=StateReads.FINAL, averaging_runs=1)
    reservoir = Reservoir.build(config, NOISELESS, 6, seed=2)
    states = reservoir.transform(rng.random((3, 6)))
    assert states.shape == (3, 4)


def test_mask_width_must_match(lookup):
    config = ReservoirConfig(num_nodes=2)
    with pytest.raises(InputShapeError):
        Reservoir(config, random_mask(3, 5, seed=0), [lookup, lookup])
