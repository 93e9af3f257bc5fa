from memrc.utils.rng import LOOKUP, MASK, substream


def test_substreams_are_reproducible():
    assert substream(3, LOOKUP, 1).random() == substream(3, LOOKUP, 1).random()


def test_substreams_are_independent_by_name_and_id():
    draws = {
        substream(3, LOOKUP, 1).random(),
        substream(3, LOOKUP, 2).random(),
        substream(3, MASK, 1).random(),
        substream(4, LOOKUP, 1).random(),
    }
    assert len(draws) == 4
