"""Stochastic task stream: Poisson arrivals per device, exponential task sizes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation


@dataclass(frozen=True)
class Task:
    """One offloadable job owned by a mobile device."""

    md_index: int
    task_index: int
    cycles: float        # CPU cycles to execute
    input_size: float    # bits uploaded to the executor
    output_size: float   # bits returned to the owner
    arrival_slot: int

    def __post_init__(self) -> None:
        if min(self.cycles, self.input_size, self.output_size) <= 0:
            raise ConstraintViolation("task cycles and sizes must be positive")


@dataclass(frozen=True)
class WorkloadParams:
    """Arrival and size distribution parameters, one arrival rate per device."""

    arrival_rates: tuple[float, ...]   # tasks per slot per device
    mean_input_size: float = 1e6       # bits
    mean_output_size: float = 1e5      # bits
    cycles_per_bit: float = 1000.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if any(r < 0 for r in self.arrival_rates):
            raise ConstraintViolation("arrival rates must be nonnegative")
        if min(self.mean_input_size, self.mean_output_size, self.cycles_per_bit) <= 0:
            raise ConstraintViolation("size means and cycles_per_bit must be positive")

    @property
    def num_mds(self) -> int:
        return len(self.arrival_rates)


def generate_arrivals(params: WorkloadParams, md_index: int,
                      rng: np.random.Generator) -> int:
    """Number of tasks arriving at one device in one slot."""
    return int(rng.poisson(params.arrival_rates[md_index]))


def sample_task(params: WorkloadParams, md_index: int, task_index: int,
                slot: int, rng: np.random.Generator) -> Task:
    """Draw one task; cycles are proportional to the input size."""
    input_size = float(rng.exponential(params.mean_input_size))
    output_size = float(rng.exponential(params.mean_output_size))
    return Task(
        md_index=md_index,
        task_index=task_index,
        cycles=params.cycles_per_bit * input_size,
        input_size=input_size,
        output_size=output_size,
        arrival_slot=slot,
    )


def generate_slot_tasks(params: WorkloadParams, slot: int,
                        rng: np.random.Generator) -> list[Task]:
    """All arrivals of one slot, devices scanned in index order."""
    tasks: list[Task] = []
    for j in range(params.num_mds):
        for i in range(generate_arrivals(params, j, rng)):
            tasks.append(sample_task(params, j, i, slot, rng))
    return tasks


def generate_workload(params: WorkloadParams, num_slots: int,
                      seed: int | None = None) -> list[list[Task]]:
    """Task lists for slots 0..num_slots-1; bit-identical for a fixed seed."""
    rng = np.random.default_rng(params.rng_seed if seed is None else seed)
    return [generate_slot_tasks(params, t, rng) for t in range(num_slots)]


def slot_rng(workload_seed: int, slot: int) -> np.random.Generator:
    """Generator for one slot, independent of how many earlier slots were drawn."""
    return np.random.default_rng([workload_seed, slot])


def pending_sizes(tasks: list[Task], num_mds: int) -> list[float]:
    """Total pending input bits per device (0.0 for idle devices)."""
    sizes = [0.0] * num_mds
    for task in tasks:
        sizes[task.md_index] += task.input_size
    return sizes
