"""
In-package invariant checks, grouped per module. Each check raises on failure; `run_selftest` prints
one PASS/FAIL line per check.
"""

import math
from typing import Callable, List, Tuple

import numpy as np
from loguru import logger

from memrc.audio.mfcc import mfcc
from memrc.audio.normalizer import apply_normalizer, fit_normalizer
from memrc.device.synapse import (
    noisy_pulse_update,
    pd_statistics,
    potentiation_conductance,
    simulate_pd_cycles,
)
from memrc.device.volatile import code_spreads, code_to_bits, raw_state_table, run_bit_stream
from memrc.energy.estimator import efficiency, memristor_count, pulse_energy
from memrc.errors import InternalConsistencyError
from memrc.models.audio import FSDD_CLIP_SAMPLES, AudioClip, MfccConfig
from memrc.models.device import PulseDirection, SynapseParams, VolatileDeviceParams
from memrc.models.readout import LossType, OutputActivation, TrainConfig
from memrc.models.reservoir import ReservoirConfig
from memrc.models.sclc import ConductionRegime, RegionFit
from memrc.readout.manhattan import manhattan_update
from memrc.readout.network import ReadoutNetwork, forward, gradients, loss_value
from memrc.reservoir.encoding import quantize4
from memrc.reservoir.reservoir import Reservoir
from memrc.sclc.fit import classify, fit_segments, synthesize_trace
from memrc.tasks.metrics import classification_metrics
from memrc.tasks.timeseries import narma_recurrence

Check = Tuple[str, str, Callable[[], None]]


def _expect(condition: bool, message: str):
    if not condition:
        raise InternalConsistencyError(message)


def _distinct_states():
    table = raw_state_table(VolatileDeviceParams().noiseless())
    rounded = {tuple(np.round(row * 1e12).astype(int)) for row in table}
    _expect(len(rounded) == 16, f"only {len(rounded)} distinct state vectors")


def _all_ones_stream_grows():
    reads = run_bit_stream(code_to_bits(15), VolatileDeviceParams().noiseless())
    _expect(bool((np.diff(reads) > 0).all()), "1111 reads are not increasing")


def _synapse_endpoints():
    params = SynapseParams()
    _expect(math.isclose(potentiation_conductance(0, params), params.g_min), "g(0) != g_min")
    _expect(
        math.isclose(potentiation_conductance(params.n_pot, params), params.g_max),
        "g(n_pot) != g_max",
    )


def _noisy_pulses_stay_in_range():
    params = SynapseParams()
    rng = np.random.default_rng(0)
    g = params.g_min
    for i in range(200):
        direction = PulseDirection.POTENTIATION if i % 90 < 45 else PulseDirection.DEPRESSION
        g = noisy_pulse_update(g, direction, params, rng)
        _expect(params.g_min <= g <= params.g_max, f"conductance {g} left the range")


def _pd_standard_error():
    params = SynapseParams()
    stats = pd_statistics(simulate_pd_cycles(params, 100, rng=np.random.default_rng(0)))
    worst = float(stats.relative_standard_error.max())
    _expect(worst < 0.04, f"P/D relative standard error {worst:.4f} over 100 cycles")


def _intra_code_spread():
    params = VolatileDeviceParams()
    spreads = code_spreads(params, runs=16, rng=np.random.default_rng(0))
    worst = float(spreads.max())
    _expect(worst <= 2 * params.c2c_sigma, f"read spread {worst:.4f} exceeds 2x c2c_sigma")


def _quantizer_examples():
    for x, code in ((0.0, 0), (1.0, 15), (0.5, 8), (-0.2, 0), (1.7, 15)):
        _expect(quantize4(x) == code, f"quantize4({x}) != {code}")


def _reservoir_dimensions():
    reservoir = Reservoir.build(ReservoirConfig(), VolatileDeviceParams(), 13, seed=0)
    features = reservoir.features(np.random.default_rng(0).random((5, 13)))
    _expect(features.shape == (32,), f"unexpected feature shape {features.shape}")
    _expect(bool(((features >= 0) & (features <= 1)).all()), "features outside [0, 1]")


def _mfcc_shape():
    t = np.arange(FSDD_CLIP_SAMPLES) / 8000.0
    clip = AudioClip(samples=0.5 * np.sin(2 * np.pi * 440.0 * t))
    coefficients = mfcc(clip)
    expected = (MfccConfig().frame_count(FSDD_CLIP_SAMPLES), 13)
    _expect(coefficients.shape == expected, f"mfcc shape {coefficients.shape} != {expected}")


def _normalizer_bounds():
    training = [np.array([[0.0, 5.0], [2.0, 7.0]])]
    scaled = apply_normalizer(training[0], fit_normalizer(training))
    _expect(np.allclose(scaled, [[0.0, 0.0], [1.0, 1.0]]), "training extremes do not map to 0/1")


def _softmax_sums_to_one():
    rng = np.random.default_rng(1)
    net = ReadoutNetwork.create([8, 6, 10], OutputActivation.SOFTMAX, rng)
    total = forward(net, rng.random((4, 8))).sum(axis=1)
    _expect(bool(np.allclose(total, 1.0, atol=1e-9)), "softmax rows do not sum to 1")


def _gradients_match_finite_differences():
    rng = np.random.default_rng(2)
    net = ReadoutNetwork.create([3, 4, 2], OutputActivation.IDENTITY, rng)
    x, t = rng.random((5, 3)), rng.random((5, 2))
    weights, biases = net.parameters()[0]
    analytic = gradients(net, x, t, LossType.MSE)[0][0][0, 0]
    h = 1e-5
    shifted = []
    for sign in (1.0, -1.0):
        w = weights.copy()
        w[0, 0] += sign * h
        params = [(w, biases), *net.parameters()[1:]]
        shifted.append(loss_value(net.with_parameters(params), x, t, LossType.MSE))
    numeric = (shifted[0] - shifted[1]) / (2 * h)
    _expect(abs(analytic - numeric) <= 1e-4 * max(1.0, abs(numeric)), "gradient mismatch")


def _manhattan_step():
    net = ReadoutNetwork.create([1, 1], OutputActivation.IDENTITY, np.random.default_rng(0))
    net = net.with_parameters([(np.zeros((1, 1)), np.zeros(1))])
    updated = manhattan_update(net, [(np.ones((1, 1)), np.zeros(1))], TrainConfig())
    _expect(math.isclose(updated.layers[0].weights[0, 0], -2 / 45), "step is not -2/45")


def _recurrence_examples():
    y = narma_recurrence(np.zeros(2))
    _expect(math.isclose(y[0], 0.25) and math.isclose(y[1], 0.275), "hand recurrence differs")


def _recurrence_fixed_point():
    y = narma_recurrence(np.zeros(100))[-1]
    _expect(abs(y - (0.9 - math.sqrt(0.61)) / 0.4) < 1e-6, f"fixed point {y}")


def _perfect_predictions():
    labels = np.arange(10).repeat(3)
    report = classification_metrics(labels, labels)
    _expect(report.accuracy == 1.0 and report.wer == 0.0, "perfect predictions misscored")


def _pulse_energies():
    _expect(math.isclose(pulse_energy(6.0, 300e-9, 10e-6), 18e-12), "6 V pulse != 18 pJ")
    _expect(math.isclose(pulse_energy(5.0, 1e-6, 5e-6), 25e-12), "5 V pulse != 25 pJ")


def _published_efficiencies():
    _expect(abs(efficiency(27200, 1.0, 8896e-6) - 3_057_553) <= 1, "time-series OPS/W")
    _expect(abs(efficiency(150, 5.5e-3, 150e-6) - 181_818_182) <= 1, "speech OPS/W")
    _expect(memristor_count([20, 128, 64, 1]) == 11009, "time-series memristor count")


def _power_law_slopes():
    v = np.linspace(0.1, 1.0, 20)
    for slope in (1.0, 2.0):
        fits = fit_segments(synthesize_trace(v, [(slope, 0.0)], i0=1e-6), [])
        _expect(abs(fits[0].slope - slope) < 0.01, f"slope {fits[0].slope} != {slope}")


def _classification_thresholds():
    def regime(m: float) -> ConductionRegime:
        region = RegionFit(v_range=(0.1, 1.0), slope=m, intercept=0, r_squared=1, num_points=3)
        return classify(region)

    expected = {1.0: ConductionRegime.OHMIC, 2.0: ConductionRegime.SCLC, 3.7: ConductionRegime.TFL}
    for m, want in expected.items():
        _expect(regime(m) == want, f"slope {m} classified as {regime(m)}")
    _expect(regime(0.5) == ConductionRegime.UNCLASSIFIED, "sub-ohmic slope classified")


CHECKS: List[Check] = [
    ("device_models", "sixteen distinct state vectors", _distinct_states),
    ("device_models", "1111 stream reads increase", _all_ones_stream_grows),
    ("device_models", "synapse curve endpoints", _synapse_endpoints),
    ("device_models", "noisy pulses stay in range", _noisy_pulses_stay_in_range),
    ("device_models", "P/D standard error under 4%", _pd_standard_error),
    ("device_models", "intra-code read spread", _intra_code_spread),
    ("reservoir", "quantizer examples", _quantizer_examples),
    ("reservoir", "pooled feature dimensions", _reservoir_dimensions),
    ("audio_features", "mfcc frame count", _mfcc_shape),
    ("audio_features", "normalizer bounds", _normalizer_bounds),
    ("readout", "softmax sums to one", _softmax_sums_to_one),
    ("readout", "gradients match finite differences", _gradients_match_finite_differences),
    ("readout", "manhattan step", _manhattan_step),
    ("tasks", "recurrence examples", _recurrence_examples),
    ("tasks", "recurrence fixed point", _recurrence_fixed_point),
    ("tasks", "perfect predictions", _perfect_predictions),
    ("energy", "pulse energies", _pulse_energies),
    ("energy", "published efficiencies", _published_efficiencies),
    ("sclc_fit", "power-law slopes", _power_law_slopes),
    ("sclc_fit", "classification thresholds", _classification_thresholds),
]


def run_selftest(checks: List[Check] = CHECKS) -> bool:
    passed = True
    for module, name, check in checks:
        try:
            check()
        except Exception as e:
            passed = False
            logger.debug(f"Self-test {module}/{name} failed: {e!r}")
            print(f"FAIL {module}: {name} ({e})")
        else:
            print(f"PASS {module}: {name}")
    return passed
