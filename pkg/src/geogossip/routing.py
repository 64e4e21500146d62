"""Greedy location-based forwarding toward arbitrary target points."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Network, transmission_radius


@dataclass
class RoutePath:
    """One greedy walk: visited nodes, where it stopped, and whether it failed.

    ``dead_end`` is true when no neighbor of the terminal improves on the
    target distance yet the terminal is not the globally nearest node.
    """

    hops: list
    terminal: int
    dead_end: bool

    @property
    def hop_count(self) -> int:
        return len(self.hops) - 1


def greedy_route(net: Network, source: int, target: Sequence[float]) -> RoutePath:
    """Forward from ``source`` to the neighbor nearest ``target`` until stuck.

    Each step requires a strict decrease of the distance to the target, so no
    node repeats; ties are broken by the lowest node id.  Dead ends are
    reported in the result, never raised.
    """
    if not 0 <= source < net.n:
        raise ValueError(f"source {source} out of range for n={net.n}")
    tx, ty = float(target[0]), float(target[1])
    if not (0.0 <= tx <= 1.0 and 0.0 <= ty <= 1.0):
        raise ValueError(f"target ({tx}, {ty}) outside the unit square")

    pos = net.positions
    dx = pos[:, 0] - tx
    dy = pos[:, 1] - ty
    d2 = dx * dx + dy * dy
    nearest = int(np.argmin(d2))

    current = source
    best = float(d2[current])
    hops = [source]
    while True:
        nbrs = net.adjacency[current]
        if len(nbrs) == 0:
            break
        cand = d2[nbrs]
        k = int(np.argmin(cand))  # first minimum = lowest id (lists sorted)
        if cand[k] < best:
            current = int(nbrs[k])
            best = float(cand[k])
            hops.append(current)
        else:
            break
    return RoutePath(hops=hops, terminal=current, dead_end=current != nearest)


def route_cost_bound(n: int) -> int:
    """Hop budget ceil(2 / r(n)) + 1 for routing to any target point."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    return math.ceil(2.0 / transmission_radius(n)) + 1
