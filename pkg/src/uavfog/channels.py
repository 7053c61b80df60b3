"""Channel allocation: Gamma-density size weighting turned into integer channel counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyProblem


@dataclass(frozen=True)
class ChannelAllocation:
    """Integer channels per device plus the weights they were derived from."""

    per_md_channels: tuple[int, ...]
    weights: tuple[float, ...]

    @property
    def total(self) -> int:
        return sum(self.per_md_channels)


def gamma_weight(size: float, shape: float = 2.0, rate: float = 2.0) -> float:
    """Gamma density evaluated at a task size.

    `size` is expressed in normalized units (multiples of the configured mean
    task size), so the default shape=rate=2 puts the mode at half the mean.
    The density rises up to the mode and then decays, which rewards moderate
    loads and penalizes devices trying to push one oversized task.
    """
    if size <= 0:
        raise ValueError(f"size must be positive, got {size}")
    if shape <= 0 or rate <= 0:
        raise ValueError("shape and rate must be positive")
    return (rate ** shape) / math.gamma(shape) * size ** (shape - 1.0) * math.exp(-rate * size)


def largest_remainder(shares: list[float], total: int) -> list[int]:
    """Round nonnegative shares summing to `total` into integers conserving the sum.

    Floors every share, then hands the leftover units to the largest fractional
    parts; ties go to the lower index.
    """
    if any(s < 0 for s in shares):
        raise ValueError("shares must be nonnegative")
    if abs(sum(shares) - total) > 1e-6 * max(1.0, total):
        raise ValueError(f"shares sum to {sum(shares)}, expected {total}")
    counts = [int(math.floor(s)) for s in shares]
    leftover = total - sum(counts)
    order = sorted(range(len(shares)), key=lambda i: (counts[i] - shares[i], i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def allocate_channels(task_sizes: list[float], num_channels: int, *,
                      shape: float = 2.0, rate: float = 2.0,
                      mean_size: float = 1.0) -> ChannelAllocation:
    """Split `num_channels` across devices in proportion to their Gamma weights.

    `task_sizes[j]` is the total pending input size of device j in bits
    (0 for idle devices); sizes are normalized by `mean_size` before entering
    the density. Idle devices get weight 0; the integerization conserves the
    channel total exactly.
    """
    if not task_sizes or all(s <= 0 for s in task_sizes):
        raise EmptyProblem("no device has a pending task")
    densities = [gamma_weight(s / mean_size, shape, rate) if s > 0 else 0.0
                 for s in task_sizes]
    total = sum(densities)
    if total <= 0.0:
        # all pending sizes so deep in the tail the density underflowed
        pending = [1.0 if s > 0 else 0.0 for s in task_sizes]
        total = sum(pending)
        densities = pending
    weights = [d / total for d in densities]
    counts = largest_remainder([num_channels * w for w in weights], num_channels)
    return ChannelAllocation(per_md_channels=tuple(counts), weights=tuple(weights))


def random_allocation(task_sizes: list[float], num_channels: int,
                      rng: np.random.Generator) -> ChannelAllocation:
    """Uniform random channel split over devices with pending tasks.

    Every pending device gets at least one channel when the channel budget
    allows, so random policies never cut a loaded device off the air; the
    remainder is thrown uniformly.
    """
    pending = [j for j, s in enumerate(task_sizes) if s > 0]
    if not pending:
        raise EmptyProblem("no device has a pending task")
    counts = [0] * len(task_sizes)
    if len(pending) >= num_channels:
        chosen = rng.choice(len(pending), size=num_channels, replace=False)
        for k in chosen:
            counts[pending[int(k)]] = 1
    else:
        extra = rng.multinomial(num_channels - len(pending),
                                [1.0 / len(pending)] * len(pending))
        for j, e in zip(pending, extra):
            counts[j] = 1 + int(e)
    weights = [c / num_channels for c in counts]
    return ChannelAllocation(per_md_channels=tuple(counts), weights=tuple(weights))
