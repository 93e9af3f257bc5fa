from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from memrc.audio.fsdd import load_fsdd
from memrc.models.audio import AudioClip
from memrc.models.model import BaseModel
from memrc.models.tasks import FsddExperimentConfig
from memrc.tasks.fsdd import resolve_data_dir, run_fsdd_experiment
from memrc.utils.concurrency import map_in_threads


class SweepRow(BaseModel):
    sigma: float
    seed: int
    accuracy: float


class NoiseSweep(BaseModel):
    rows: List[SweepRow]
    mean_accuracy: Dict[float, float]

    def is_nonincreasing(self, tolerance: float = 0.0) -> bool:
        means = [self.mean_accuracy[sigma] for sigma in sorted(self.mean_accuracy)]
        return all(b <= a + tolerance for a, b in zip(means, means[1:]))


def _job_config(config: FsddExperimentConfig, sigma: float, seed: int) -> FsddExperimentConfig:
    return config.copy(
        deep=True,
        update={
            "seed": seed,
            "fsdd": config.fsdd.copy(update={"noise_sigma": sigma}),
            "train": config.train.copy(update={"seed": seed}),
        },
    )


def run_noise_sweep(
    config: FsddExperimentConfig,
    sigmas: Optional[Sequence[float]] = None,
    seeds: Optional[Sequence[int]] = None,
    clips: Optional[Sequence[AudioClip]] = None,
) -> NoiseSweep:
    """Accuracy for every (sigma, seed) pair; each pair runs as an independent job in a thread."""
    sigmas = list(config.fsdd.sweep_sigmas if sigmas is None else sigmas)
    seeds = list(config.fsdd.sweep_seeds if seeds is None else seeds)
    if clips is None:
        clips = load_fsdd(resolve_data_dir(config))
    jobs: List[Tuple[float, int]] = [(sigma, seed) for sigma in sigmas for seed in seeds]

    def run_job(job: Tuple[float, int]) -> float:
        sigma, seed = job
        result = run_fsdd_experiment(_job_config(config, sigma, seed), clips=clips)
        return float(result.metrics.accuracy or 0.0)

    accuracies = map_in_threads(run_job, jobs, max_concurrency=config.fsdd.max_concurrency)
    rows = [
        SweepRow(sigma=sigma, seed=seed, accuracy=accuracy)
        for (sigma, seed), accuracy in zip(jobs, accuracies)
    ]
    mean_accuracy = {
        sigma: float(np.mean([row.accuracy for row in rows if row.sigma == sigma]))
        for sigma in sigmas
    }
    for sigma, mean in sorted(mean_accuracy.items()):
        logger.info(f"Noise sigma {sigma}: mean accuracy {mean:.4f} over {len(seeds)} seeds")
    return NoiseSweep(rows=rows, mean_accuracy=mean_accuracy)
