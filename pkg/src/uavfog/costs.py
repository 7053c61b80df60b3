"""Per-task delay/energy for the three execution sites and the slot objective.

Three places can run a task: the owning device itself, the VM on the UAV, or
the remote data center reached through the UAV. Radio legs use Shannon-capacity
links over the device's allocated channels; compute legs use cycles/frequency
delay and kappa*cycles*frequency^2 energy. The slot utility adds delays and
epsilon-weighted energies of the chosen site over all tasks.

A device holding pending tasks but zero channels cannot transmit: offloading
sites then cost infinity, which steers every optimizer toward local execution
without special-casing the search code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, NoLink
from .model import Position, RadioParams, Scenario
from .workload import Task

# execution sites, in decode order
SITE_MD, SITE_UAV, SITE_DC = 0, 1, 2
SITE_NAMES = ("md", "uav", "dc")


@dataclass(frozen=True)
class Assignment:
    """One-hot executing-location flags for a single task."""

    x_md: int
    x_uav: int
    x_dc: int

    def __post_init__(self) -> None:
        flags = (self.x_md, self.x_uav, self.x_dc)
        if any(f not in (0, 1) for f in flags) or sum(flags) != 1:
            raise ConstraintViolation(f"assignment must be one-hot, got {flags}")

    @classmethod
    def for_site(cls, site: int) -> "Assignment":
        return cls(int(site == SITE_MD), int(site == SITE_UAV), int(site == SITE_DC))

    @property
    def site(self) -> int:
        return SITE_UAV if self.x_uav else (SITE_DC if self.x_dc else SITE_MD)


@dataclass(frozen=True)
class ResourceSetting:
    """Transmit powers (W) and processing frequencies (Hz) for all devices and the UAV VM."""

    md_power: tuple[float, ...]
    md_freq: tuple[float, ...]
    uav_power: float
    uav_freq: float


@dataclass(frozen=True)
class CostBreakdown:
    delay: float    # s
    energy: float   # J


@dataclass(frozen=True)
class Solution:
    """Assignments plus resource settings, with the utility they evaluate to."""

    assignments: tuple[Assignment, ...]
    resources: ResourceSetting
    fitness: float
    trace: tuple[float, ...] = ()   # best-so-far fitness per optimizer iteration


def link_distance(md_pos: Position, uav_pos: Position, altitude: float) -> float:
    """3-D distance between a ground device and the UAV."""
    return math.sqrt((md_pos.x - uav_pos.x) ** 2 + (md_pos.y - uav_pos.y) ** 2
                     + altitude ** 2)


def transmission_rate(channels: int, tx_power: float, distance: float,
                      radio: RadioParams) -> float:
    """Aggregate Shannon rate over `channels` identical channels, bit/s."""
    if channels < 1:
        raise NoLink("no channel allocated for this link")
    if distance <= 0:
        raise ValueError("distance must be positive")
    gain = radio.reference_gain * distance ** (-radio.path_loss_exponent)
    snr = tx_power * gain / radio.noise_power
    return channels * radio.channel_bandwidth * math.log2(1.0 + snr)


def _check_box(name: str, value: float, box: tuple[float, float]) -> None:
    lo, hi = box
    if not (lo <= value <= hi):
        raise ConstraintViolation(f"{name}={value} outside [{lo}, {hi}]")


def exec_cost_local(task: Task, md_freq: float, scenario: Scenario) -> CostBreakdown:
    """Run on the owning device: cycles/frequency delay, kappa*c*f^2 energy."""
    _check_box("md_freq", md_freq, scenario.md_freq_range)
    return CostBreakdown(
        delay=task.cycles / md_freq,
        energy=scenario.kappa_md * task.cycles * md_freq ** 2,
    )


def exec_cost_uav(task: Task, setting: ResourceSetting, channels: int,
                  md_pos: Position, uav_pos: Position,
                  scenario: Scenario) -> CostBreakdown:
    """Upload to the UAV VM, compute there, download the result."""
    p_md = setting.md_power[task.md_index]
    _check_box("md_power", p_md, scenario.md_power_range)
    _check_box("uav_power", setting.uav_power, scenario.uav.power_range)
    _check_box("uav_freq", setting.uav_freq, scenario.uav.freq_range)
    d = link_distance(md_pos, uav_pos, scenario.uav.altitude)
    r_up = transmission_rate(channels, p_md, d, scenario.radio)
    r_down = transmission_rate(channels, setting.uav_power, d, scenario.radio)
    delay = (task.input_size / r_up + task.cycles / setting.uav_freq
             + task.output_size / r_down)
    energy = (p_md * task.input_size / r_up
              + scenario.uav.kappa * task.cycles * setting.uav_freq ** 2
              + setting.uav_power * task.output_size / r_down)
    return CostBreakdown(delay=delay, energy=energy)


def exec_cost_dc(task: Task, setting: ResourceSetting, channels: int,
                 md_pos: Position, uav_pos: Position,
                 scenario: Scenario) -> CostBreakdown:
    """Relay through the UAV to the data center and back."""
    p_md = setting.md_power[task.md_index]
    _check_box("md_power", p_md, scenario.md_power_range)
    _check_box("uav_power", setting.uav_power, scenario.uav.power_range)
    d = link_distance(md_pos, uav_pos, scenario.uav.altitude)
    r_up = transmission_rate(channels, p_md, d, scenario.radio)
    r_down = transmission_rate(channels, setting.uav_power, d, scenario.radio)
    dc = scenario.dc
    delay = (task.input_size / r_up
             + task.input_size / dc.backhaul_rate
             + dc.backhaul_latency
             + task.cycles / dc.frequency
             + task.output_size / dc.backhaul_rate
             + task.output_size / r_down)
    energy = (p_md * task.input_size / r_up
              + setting.uav_power * task.output_size / r_down
              + dc.energy_per_cycle * task.cycles)
    return CostBreakdown(delay=delay, energy=energy)


_UNREACHABLE = CostBreakdown(delay=math.inf, energy=math.inf)


def site_costs(task: Task, setting: ResourceSetting, channels: int,
               md_pos: Position, uav_pos: Position,
               scenario: Scenario) -> tuple[CostBreakdown, CostBreakdown, CostBreakdown]:
    """Cost of each site for one task; offload sites are unreachable at 0 channels."""
    local = exec_cost_local(task, setting.md_freq[task.md_index], scenario)
    if channels < 1:
        return local, _UNREACHABLE, _UNREACHABLE
    uav = exec_cost_uav(task, setting, channels, md_pos, uav_pos, scenario)
    dc = exec_cost_dc(task, setting, channels, md_pos, uav_pos, scenario)
    return local, uav, dc


def utility_md(assignments: list[Assignment],
               costs: list[tuple[CostBreakdown, CostBreakdown, CostBreakdown]],
               epsilon: float) -> float:
    """Utility of one device's tasks: sum of chosen delay + epsilon * chosen energy."""
    total = 0.0
    for assignment, triple in zip(assignments, costs, strict=True):
        chosen = triple[assignment.site]
        total += chosen.delay + epsilon * chosen.energy
    return total


def total_utility(per_md: list[float]) -> float:
    """Slot utility over all devices."""
    return sum(per_md)


def objective(utility: float, movement_energy: float, epsilon: float) -> float:
    """Network-wide objective: utility plus epsilon-weighted UAV movement energy."""
    return utility + epsilon * movement_energy


@dataclass(frozen=True)
class SlotCosts:
    """Scalar evaluation of a full slot assignment."""

    utility: float
    delay_sum: float
    energy_sum: float
    per_task: tuple[CostBreakdown, ...]


def evaluate_assignment(scenario: Scenario, tasks: list[Task],
                        channels: tuple[int, ...], uav_pos: Position,
                        assignments: tuple[Assignment, ...] | list[Assignment],
                        resources: ResourceSetting) -> SlotCosts:
    """Reference (non-vectorized) evaluation of a slot solution."""
    delay_sum = 0.0
    energy_sum = 0.0
    chosen: list[CostBreakdown] = []
    for task, assignment in zip(tasks, assignments, strict=True):
        triple = site_costs(task, resources, channels[task.md_index],
                            scenario.md_positions[task.md_index], uav_pos, scenario)
        cost = triple[assignment.site]
        chosen.append(cost)
        delay_sum += cost.delay
        energy_sum += cost.energy
    return SlotCosts(
        utility=delay_sum + scenario.epsilon * energy_sum,
        delay_sum=delay_sum,
        energy_sum=energy_sum,
        per_task=tuple(chosen),
    )


def empty_solution(scenario: Scenario) -> Solution:
    """Solution for a slot with no pending tasks: mid-box settings, zero utility."""
    mid = lambda box: 0.5 * (box[0] + box[1])
    resources = ResourceSetting(
        md_power=tuple(mid(scenario.md_power_range) for _ in range(scenario.num_mds)),
        md_freq=tuple(mid(scenario.md_freq_range) for _ in range(scenario.num_mds)),
        uav_power=mid(scenario.uav.power_range),
        uav_freq=mid(scenario.uav.freq_range),
    )
    return Solution(assignments=(), resources=resources, fitness=0.0)


def validate_solution(solution: Solution, scenario: Scenario, tasks: list[Task],
                      channels: tuple[int, ...], uav_pos: Position) -> None:
    """Check every joint-problem constraint; raises ConstraintViolation on failure.

    Verifies one-hot assignments (by construction of Assignment), box bounds on
    all powers/frequencies, the channel budget, and that the stored fitness
    reproduces under re-evaluation.
    """
    if len(solution.assignments) != len(tasks):
        raise ConstraintViolation(
            f"{len(solution.assignments)} assignments for {len(tasks)} tasks")
    res = solution.resources
    if len(res.md_power) != scenario.num_mds or len(res.md_freq) != scenario.num_mds:
        raise ConstraintViolation("resource vectors do not match the device count")
    for p in res.md_power:
        _check_box("md_power", p, scenario.md_power_range)
    for f in res.md_freq:
        _check_box("md_freq", f, scenario.md_freq_range)
    _check_box("uav_power", res.uav_power, scenario.uav.power_range)
    _check_box("uav_freq", res.uav_freq, scenario.uav.freq_range)
    if sum(channels) > scenario.num_channels:
        raise ConstraintViolation(
            f"channel total {sum(channels)} exceeds budget {scenario.num_channels}")
    if any(c < 0 for c in channels):
        raise ConstraintViolation("negative channel count")
    recomputed = evaluate_assignment(scenario, tasks, channels, uav_pos,
                                     solution.assignments, res).utility
    if not (recomputed == solution.fitness
            or (math.isinf(recomputed) and math.isinf(solution.fitness))):
        raise ConstraintViolation(
            f"stored fitness {solution.fitness} != re-evaluated {recomputed}")


class SlotEvaluator:
    """Batched utility evaluation for one timeslot's assignment problem.

    Bakes the slot context (tasks, channels, UAV position) into numpy arrays so
    swarm/population optimizers can score a whole batch of encoded candidates
    in a few vectorized operations. Encoding layout, per candidate row:

        [task 0 site triple | task 1 site triple | ... |
         p_md_0, f_md_0, ..., p_md_{K-1}, f_md_{K-1} | p_uav, f_uav]

    The argmax of a task's triple selects md/uav/dc; power/frequency
    coordinates are clamped into their boxes before use.
    """

    def __init__(self, scenario: Scenario, tasks: list[Task],
                 channels: tuple[int, ...], uav_pos: Position):
        if len(channels) != scenario.num_mds:
            raise ConstraintViolation("channel vector does not match device count")
        self.scenario = scenario
        self.tasks = list(tasks)
        self.channels = tuple(channels)
        self.uav_pos = uav_pos
        self.num_tasks = len(tasks)
        self.num_mds = scenario.num_mds
        self.dim = 3 * self.num_tasks + 2 * self.num_mds + 2
        self.evaluations = 0

        self._owner = np.array([t.md_index for t in tasks], dtype=np.intp)
        self._s = np.array([t.input_size for t in tasks])
        self._o = np.array([t.output_size for t in tasks])
        self._c = np.array([t.cycles for t in tasks])
        gains = np.array([
            scenario.radio.reference_gain
            * link_distance(p, uav_pos, scenario.uav.altitude)
            ** (-scenario.radio.path_loss_exponent)
            for p in scenario.md_positions])
        ch = np.array(channels, dtype=float)
        self._gain_t = gains[self._owner]
        self._ch_t = ch[self._owner]

        n, k = self.num_tasks, self.num_mds
        lower = np.empty(self.dim)
        upper = np.empty(self.dim)
        lower[:3 * n], upper[:3 * n] = 0.0, 1.0
        lower[3 * n:3 * n + 2 * k:2] = scenario.md_power_range[0]
        upper[3 * n:3 * n + 2 * k:2] = scenario.md_power_range[1]
        lower[3 * n + 1:3 * n + 2 * k:2] = scenario.md_freq_range[0]
        upper[3 * n + 1:3 * n + 2 * k:2] = scenario.md_freq_range[1]
        lower[-2], upper[-2] = scenario.uav.power_range
        lower[-1], upper[-1] = scenario.uav.freq_range
        self.lower = lower
        self.upper = upper

    def clamp(self, batch: np.ndarray) -> np.ndarray:
        return np.clip(batch, self.lower, self.upper)

    def _split(self, batch: np.ndarray):
        n, k = self.num_tasks, self.num_mds
        sites = np.argmax(batch[:, :3 * n].reshape(-1, n, 3), axis=2)
        p_md = batch[:, 3 * n:3 * n + 2 * k:2]
        f_md = batch[:, 3 * n + 1:3 * n + 2 * k:2]
        p_uav = batch[:, -2:-1]
        f_uav = batch[:, -1:]
        return sites, p_md, f_md, p_uav, f_uav

    def fitness(self, batch: np.ndarray) -> np.ndarray:
        """Slot utility of each row; rows must already lie inside the boxes."""
        if batch.ndim != 2 or batch.shape[1] != self.dim:
            from .errors import EncodingError
            raise EncodingError(
                f"expected batch of width {self.dim}, got {batch.shape}")
        scen = self.scenario
        sites, p_md, f_md, p_uav, f_uav = self._split(batch)
        owner = self._owner
        p_own = p_md[:, owner]
        f_own = f_md[:, owner]

        d_local = self._c / f_own
        e_local = scen.kappa_md * self._c * f_own ** 2

        bw = self._ch_t * scen.radio.channel_bandwidth
        with np.errstate(divide="ignore", invalid="ignore"):
            r_up = bw * np.log2(1.0 + p_own * self._gain_t / scen.radio.noise_power)
            r_down = bw * np.log2(1.0 + p_uav * self._gain_t / scen.radio.noise_power)
            up_t = self._s / r_up
            down_t = self._o / r_down

        d_uav = up_t + self._c / f_uav + down_t
        e_uav = p_own * up_t + scen.uav.kappa * self._c * f_uav ** 2 + p_uav * down_t

        dc = scen.dc
        backhaul = (self._s + self._o) / dc.backhaul_rate + dc.backhaul_latency
        d_dc = up_t + backhaul + self._c / dc.frequency + down_t
        e_dc = p_own * up_t + p_uav * down_t + dc.energy_per_cycle * self._c

        delay = np.where(sites == SITE_MD, d_local,
                         np.where(sites == SITE_UAV, d_uav, d_dc))
        energy = np.where(sites == SITE_MD, e_local,
                          np.where(sites == SITE_UAV, e_uav, e_dc))
        self.evaluations += batch.shape[0]
        return delay.sum(axis=1) + scen.epsilon * energy.sum(axis=1)

    def decode(self, vector: np.ndarray) -> tuple[tuple[Assignment, ...], ResourceSetting]:
        """Assignments and resource settings encoded by one candidate vector."""
        row = self.clamp(np.asarray(vector, dtype=float).reshape(1, -1))
        if row.shape[1] != self.dim:
            from .errors import EncodingError
            raise EncodingError(f"expected vector of length {self.dim}, got {row.shape[1]}")
        sites, p_md, f_md, p_uav, f_uav = self._split(row)
        assignments = tuple(Assignment.for_site(int(s)) for s in sites[0])
        resources = ResourceSetting(
            md_power=tuple(float(p) for p in p_md[0]),
            md_freq=tuple(float(f) for f in f_md[0]),
            uav_power=float(p_uav[0, 0]),
            uav_freq=float(f_uav[0, 0]),
        )
        return assignments, resources

    def solution_from_vector(self, vector: np.ndarray,
                             trace: tuple[float, ...] = ()) -> Solution:
        """Decode a vector and score it with the scalar reference path."""
        assignments, resources = self.decode(vector)
        costs = evaluate_assignment(self.scenario, self.tasks, self.channels,
                                    self.uav_pos, assignments, resources)
        return Solution(assignments=assignments, resources=resources,
                        fitness=costs.utility, trace=trace)
