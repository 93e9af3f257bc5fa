import zlib

import numpy as np

D2D = "d2d"
LOOKUP = "lookup"
MASK = "mask"
INIT = "init"
TRAIN = "train"
NOISE = "noise"
SPLIT = "split"
SERIES = "series"
SPREAD = "spread"
PD_CYCLES = "pd_cycles"
AUDIO_NOISE = "audio_noise"


def substream(root_seed: int, name: str, *ids: int) -> np.random.Generator:
    """Independent generator for one named purpose, so components are reproducible in isolation."""
    entropy = [int(root_seed) & 0xFFFFFFFF, zlib.crc32(name.encode("utf-8"))]
    entropy.extend(int(i) & 0xFFFFFFFF for i in ids)
    return np.random.default_rng(np.random.SeedSequence(entropy))
