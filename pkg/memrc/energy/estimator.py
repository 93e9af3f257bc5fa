"""
Energy and efficiency arithmetic for the reservoir and readout hardware.

Pulse energy is V * I * t. Efficiency is operations per second per watt: ops / (epoch_time * P),
with the readout power taken as one fixed power per memristor.
"""

from typing import Sequence

from loguru import logger

from memrc.errors import ConfigError, DomainError
from memrc.models.energy import (
    TASK_FIGURES,
    EnergyConfig,
    EnergyReport,
    EnergyRow,
    EnergyTask,
)


def pulse_energy(voltage: float, current: float, width: float) -> float:
    if min(voltage, current, width) < 0:
        raise DomainError("pulse voltage, current and width must be nonnegative")
    return voltage * current * width


def efficiency(ops: float, epoch_time: float, total_power: float) -> float:
    if min(ops, epoch_time, total_power) <= 0:
        raise DomainError("ops, epoch time and power must be positive")
    return ops / (epoch_time * total_power)


def memristor_count(sizes: Sequence[int]) -> int:
    """One memristor per weight and per bias."""
    return sum((fan_in + 1) * fan_out for fan_in, fan_out in zip(sizes[:-1], sizes[1:]))


def network_report(config: EnergyConfig, task) -> EnergyReport:
    try:
        task = EnergyTask(task)
    except ValueError:
        raise ConfigError(f"unknown task {task!r}, expected speech or timeseries", key="task")
    figures = TASK_FIGURES[task]
    sizes = figures.readout_sizes
    ops = config.ops_per_epoch or figures.ops_per_epoch
    epoch_time = config.epoch_time or figures.epoch_time
    ppm = config.power_per_memristor

    readout_pulse = pulse_energy(
        config.readout_voltage, config.readout_current, config.readout_pulse_width
    )
    rows = [
        EnergyRow(
            component="reservoir write pulse",
            energy_per_op=pulse_energy(
                config.pulse_voltage, config.device_current, config.pulse_width
            ),
        ),
        EnergyRow(
            component="reservoir read pulse",
            energy_per_op=pulse_energy(
                config.read_voltage, config.device_current, config.pulse_width
            ),
        ),
        EnergyRow(component="readout programming pulse", energy_per_op=readout_pulse),
        EnergyRow(component="adc conversion", energy_per_op=config.adc_energy),
    ]
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:]), start=1):
        count = memristor_count([fan_in, fan_out])
        rows.append(
            EnergyRow(
                component=f"readout layer {i} ({fan_in}x{fan_out})",
                energy_per_op=count * readout_pulse,
                count=count,
                power=count * ppm,
            )
        )

    memristors = config.num_memristors or memristor_count(sizes)
    power = memristors * ppm
    rows.append(
        EnergyRow(
            component="total",
            count=memristors,
            power=power,
            ops_per_second_per_watt=efficiency(ops, epoch_time, power),
        )
    )
    rows.append(
        EnergyRow(
            component="published",
            count=figures.published_memristors,
            power=figures.published_power,
            ops_per_second_per_watt=efficiency(
                figures.published_ops_per_epoch,
                figures.published_epoch_time,
                figures.published_power,
            ),
        )
    )
    if memristors != figures.published_memristors:
        logger.info(
            f"{task.value}: readout needs {memristors} memristors, published figure is "
            f"{figures.published_memristors}"
        )
    return EnergyReport(
        task=task,
        rows=rows,
        memristors=memristors,
        published_memristors=figures.published_memristors,
    )
