"""Particle-swarm search over task assignments, powers and frequencies.

Each particle encodes the whole slot decision (see SlotEvaluator for the
layout). Velocities follow the classic inertia + cognitive + social update;
positions are clamped into their boxes after every move, so decoded candidates
are feasible by construction. The swarm stops once the best fitness improves
by less than the threshold between consecutive sweeps, or at the iteration cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .costs import (Assignment, ResourceSetting, SlotEvaluator, Solution,
                    evaluate_assignment)
from .errors import ConstraintViolation, EmptyProblem, InstanceTooLarge
from .model import Position, Scenario
from .workload import Task


@dataclass(frozen=True)
class PsoParams:
    swarm_size: int = 30
    inertia: float = 0.65
    accel_personal: float = 2.0
    accel_global: float = 2.0
    threshold: float = 0.01          # stop once the sweep-over-sweep gain drops below this
    max_iterations: int = 200
    velocity_clamp: float = 0.2      # fraction of each coordinate's box width
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.swarm_size < 2:
            raise ConstraintViolation("swarm_size must be at least 2")
        if self.threshold <= 0:
            raise ConstraintViolation("threshold must be positive")
        if self.max_iterations < 1:
            raise ConstraintViolation("max_iterations must be at least 1")


def decode_particle(vector: np.ndarray, evaluator: SlotEvaluator,
                    ) -> tuple[tuple[Assignment, ...], ResourceSetting]:
    """Map one particle position to assignments and clamped resource settings."""
    return evaluator.decode(vector)


def pso_optimize(scenario: Scenario, tasks: list[Task], channels: tuple[int, ...],
                 uav_pos: Position, params: PsoParams,
                 warm_resources: ResourceSetting | None = None) -> Solution:
    """Minimize the slot utility; returns the best decoded solution with its trace.

    `warm_resources` seeds particle 0's power/frequency block with a previous
    slot's settings (site triples stay random), which speeds up scans that call
    the swarm once per trajectory point.
    """
    if not tasks:
        raise EmptyProblem("no pending tasks to assign")
    ev = SlotEvaluator(scenario, tasks, channels, uav_pos)
    rng = np.random.default_rng(params.rng_seed)
    m = params.swarm_size

    x = rng.uniform(ev.lower, ev.upper, size=(m, ev.dim))
    if warm_resources is not None:
        block = list(itertools.chain.from_iterable(
            zip(warm_resources.md_power, warm_resources.md_freq)))
        x[0, 3 * ev.num_tasks:] = block + [warm_resources.uav_power,
                                           warm_resources.uav_freq]
        x[0] = np.clip(x[0], ev.lower, ev.upper)
    v = np.zeros_like(x)
    v_max = params.velocity_clamp * (ev.upper - ev.lower)

    fit = ev.fitness(x)
    pbest = x.copy()
    pbest_fit = fit.copy()
    g = int(np.argmin(pbest_fit))
    gbest = pbest[g].copy()
    gbest_fit = float(pbest_fit[g])
    trace = [gbest_fit]

    for _ in range(params.max_iterations):
        r1 = rng.random((m, ev.dim))
        r2 = rng.random((m, ev.dim))
        v = (params.inertia * v
             + params.accel_personal * r1 * (pbest - x)
             + params.accel_global * r2 * (gbest - x))
        v = np.clip(v, -v_max, v_max)
        x = np.clip(x + v, ev.lower, ev.upper)
        fit = ev.fitness(x)

        improved = fit < pbest_fit
        pbest[improved] = x[improved]
        pbest_fit[improved] = fit[improved]
        g = int(np.argmin(pbest_fit))
        if pbest_fit[g] < gbest_fit:
            gbest = pbest[g].copy()
            gbest_fit = float(pbest_fit[g])
        trace.append(gbest_fit)

        delta = trace[-2] - trace[-1]
        if not math.isnan(delta) and abs(delta) < params.threshold:
            break

    return ev.solution_from_vector(gbest, trace=tuple(trace))


def brute_force_assign(scenario: Scenario, tasks: list[Task],
                       channels: tuple[int, ...], uav_pos: Position,
                       grid_levels: int = 3,
                       max_evaluations: int = 2_000_000) -> Solution:
    """Exact minimizer over all assignments and a power/frequency grid.

    Enumerates every site combination and every grid point of the active
    devices' (power, frequency) pairs plus the UAV pair. Only meant as a test
    oracle for tiny instances; refuses anything it cannot enumerate.
    """
    if not tasks:
        raise EmptyProblem("no pending tasks to assign")
    if grid_levels < 1:
        raise ConstraintViolation("grid_levels must be at least 1")
    active = sorted({t.md_index for t in tasks})
    count = 3 ** len(tasks) * grid_levels ** (2 * len(active) + 2)
    if len(tasks) > 6 or count > max_evaluations:
        raise InstanceTooLarge(
            f"{len(tasks)} tasks x {grid_levels} levels needs {count} evaluations")

    def levels(box: tuple[float, float]) -> list[float]:
        if grid_levels == 1:
            return [0.5 * (box[0] + box[1])]
        return list(np.linspace(box[0], box[1], grid_levels))

    mid = lambda box: 0.5 * (box[0] + box[1])
    p_levels = levels(scenario.md_power_range)
    f_levels = levels(scenario.md_freq_range)
    axes = [p_levels if r % 2 == 0 else f_levels for r in range(2 * len(active))]
    axes.append(levels(scenario.uav.power_range))
    axes.append(levels(scenario.uav.freq_range))

    best: Solution | None = None
    for sites in itertools.product((0, 1, 2), repeat=len(tasks)):
        assignments = tuple(Assignment.for_site(s) for s in sites)
        for combo in itertools.product(*axes):
            md_power = [mid(scenario.md_power_range)] * scenario.num_mds
            md_freq = [mid(scenario.md_freq_range)] * scenario.num_mds
            for idx, j in enumerate(active):
                md_power[j] = combo[2 * idx]
                md_freq[j] = combo[2 * idx + 1]
            resources = ResourceSetting(
                md_power=tuple(md_power), md_freq=tuple(md_freq),
                uav_power=combo[-2], uav_freq=combo[-1])
            utility = evaluate_assignment(scenario, tasks, channels, uav_pos,
                                          assignments, resources).utility
            if best is None or utility < best.fitness:
                best = Solution(assignments=assignments, resources=resources,
                                fitness=utility)
    assert best is not None
    return best
